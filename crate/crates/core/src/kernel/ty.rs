use std::fmt;
use std::sync::Arc;

use super::Symbol;

/// Atomic type of HOHH formulas.
pub const PROP: &str = "o";
/// Atomic type Abella uses for reasoning-level propositions.
pub const ABELLA_PROP: &str = "prop";

pub fn is_reserved_type_name(name: &str) -> bool {
    name == PROP || name == ABELLA_PROP
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ty {
    Atom(Symbol),
    Arrow(Arc<Ty>, Arc<Ty>),
}

impl Ty {
    pub fn atom(name: impl Into<Symbol>) -> Ty {
        Ty::Atom(name.into())
    }

    pub fn arrow(dom: Ty, cod: Ty) -> Ty {
        Ty::Arrow(Arc::new(dom), Arc::new(cod))
    }

    pub fn prop() -> Ty {
        Ty::atom(PROP)
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Ty::Atom(n) if &**n == PROP)
    }

    /// `a1 -> ... -> an -> r` from its parts.
    pub fn from_parts(args: impl IntoIterator<Item = Ty, IntoIter: DoubleEndedIterator>, result: Ty) -> Ty {
        args.into_iter().rev().fold(result, |acc, a| Ty::arrow(a, acc))
    }

    /// Argument types and final result type.
    pub fn split(&self) -> (Vec<Ty>, Ty) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Ty::Arrow(a, b) = cur {
            args.push((**a).clone());
            cur = b;
        }
        (args, cur.clone())
    }

    pub fn arity(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let Ty::Arrow(_, b) = cur {
            n += 1;
            cur = b;
        }
        n
    }

    pub fn result(&self) -> &Ty {
        let mut cur = self;
        while let Ty::Arrow(_, b) = cur {
            cur = b;
        }
        cur
    }

    /// The type left after applying `n` arguments.
    pub fn result_after(&self, n: usize) -> Ty {
        let mut cur = self;
        for _ in 0..n {
            match cur {
                Ty::Arrow(_, b) => cur = b,
                Ty::Atom(_) => break,
            }
        }
        cur.clone()
    }

    pub fn atoms(&self, out: &mut Vec<Symbol>) {
        match self {
            Ty::Atom(n) => {
                if !out.contains(n) {
                    out.push(n.clone())
                }
            }
            Ty::Arrow(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Atom(n) => write!(f, "{n}"),
            Ty::Arrow(a, b) => match **a {
                Ty::Arrow(..) => write!(f, "({a}) -> {b}"),
                Ty::Atom(_) => write!(f, "{a} -> {b}"),
            },
        }
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
