use std::collections::BTreeSet;
use std::fmt;

use super::term::{free_names, names};
use super::{fresh_name, Symbol, Term};

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pos {
    Top,
    Head,
    Arg,
}

/// Writes terms in lambda-Prolog concrete syntax (`x\ body`, juxtaposition).
/// Binder hints are kept unless they would shadow a name the body refers to.
pub(crate) struct TermPrinter {
    stack: Vec<Symbol>,
    avoid: BTreeSet<Symbol>,
    /// Meta variables print through this when set, otherwise as `?N`.
    pub meta_names: Option<std::collections::HashMap<u32, String>>,
}

impl TermPrinter {
    pub fn new() -> Self {
        TermPrinter { stack: Vec::new(), avoid: BTreeSet::new(), meta_names: None }
    }

    pub fn write(&mut self, t: &Term, pos: Pos, out: &mut String) {
        match t {
            Term::Const(n, _) | Term::Var(n, _) => out.push_str(n),
            Term::Bound(i, _) => {
                let i = *i as usize;
                if i < self.stack.len() {
                    out.push_str(&self.stack[self.stack.len() - 1 - i]);
                } else {
                    out.push_str(&format!("#{i}"));
                }
            }
            Term::Meta(m, _) => match self.meta_names.as_ref().and_then(|n| n.get(m)) {
                Some(n) => out.push_str(n),
                None => out.push_str(&format!("?{m}")),
            },
            Term::Abs(h, _, b) => {
                let name = self.binder_name(h, b);
                if pos != Pos::Top {
                    out.push('(');
                }
                out.push_str(&name);
                out.push_str("\\ ");
                self.stack.push(name);
                self.write(b, Pos::Top, out);
                self.stack.pop();
                if pos != Pos::Top {
                    out.push(')');
                }
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                if pos == Pos::Arg {
                    out.push('(');
                }
                self.write(head, Pos::Head, out);
                for a in args {
                    out.push(' ');
                    self.write(a, Pos::Arg, out);
                }
                if pos == Pos::Arg {
                    out.push(')');
                }
            }
        }
    }

    fn binder_name(&mut self, hint: &Symbol, body: &Term) -> Symbol {
        let mut taken = BTreeSet::new();
        free_names(body, &mut taken);
        let mut refs = Vec::new();
        outer_refs(body, 1, &mut refs);
        for k in refs {
            let k = k as usize;
            if k <= self.stack.len() {
                taken.insert(self.stack[self.stack.len() - k].clone());
            }
        }
        taken.extend(self.avoid.iter().cloned());
        if !taken.contains(hint) {
            return hint.clone();
        }
        let everything = names(body);
        fresh_name(hint, |c| taken.contains(c) || everything.contains(c) || self.stack.iter().any(|s| &**s == c))
    }
}

/// Loose indices >= `depth` in `t`, reported relative to `t`'s enclosing binder.
fn outer_refs(t: &Term, depth: u32, out: &mut Vec<u32>) {
    match t {
        Term::Bound(i, _) if *i >= depth => out.push(i - depth + 1),
        Term::Abs(_, _, b) => outer_refs(b, depth + 1, out),
        Term::App(f, a) => {
            outer_refs(f, depth, out);
            outer_refs(a, depth, out);
        }
        _ => {}
    }
}

pub(crate) fn term_to_string(t: &Term, pos: Pos) -> String {
    let mut s = String::new();
    TermPrinter::new().write(t, pos, &mut s);
    s
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term_to_string(self, Pos::Top))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} : {}", self.ty())
    }
}
