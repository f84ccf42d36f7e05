use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::{KernelError, Symbol, Ty};

pub type MetaId = u32;

/// Church-style simply-typed term. Bound variables are de Bruijn indices
/// (0 = innermost binder); `Abs` keeps its surface name only as a printing hint.
/// Equality and hashing ignore those hints, so `==` is alpha-equivalence.
#[derive(Clone)]
pub enum Term {
    Const(Symbol, Ty),
    Var(Symbol, Ty),
    Bound(u32, Ty),
    Meta(MetaId, Ty),
    Abs(Symbol, Ty, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        use Term::*;
        match (self, other) {
            (Const(a, t), Const(b, u)) | (Var(a, t), Var(b, u)) => a == b && t == u,
            (Bound(i, t), Bound(j, u)) => i == j && t == u,
            (Meta(i, t), Meta(j, u)) => i == j && t == u,
            (Abs(_, t, b), Abs(_, u, c)) => t == u && b == c,
            (App(f, a), App(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, h: &mut H) {
        std::mem::discriminant(self).hash(h);
        match self {
            Term::Const(n, t) | Term::Var(n, t) => {
                n.hash(h);
                t.hash(h);
            }
            Term::Bound(i, t) | Term::Meta(i, t) => {
                i.hash(h);
                t.hash(h);
            }
            Term::Abs(_, t, b) => {
                t.hash(h);
                b.hash(h);
            }
            Term::App(f, a) => {
                f.hash(h);
                a.hash(h);
            }
        }
    }
}

impl Term {
    pub fn constant(name: impl Into<Symbol>, ty: Ty) -> Term {
        Term::Const(name.into(), ty)
    }

    pub fn var(name: impl Into<Symbol>, ty: Ty) -> Term {
        Term::Var(name.into(), ty)
    }

    /// Checked application.
    pub fn app(f: Term, a: Term) -> Result<Term, KernelError> {
        match f.ty() {
            Ty::Arrow(dom, _) => {
                let at = a.ty();
                if *dom != at {
                    return Err(KernelError::TypeMismatch {
                        term: a.to_string(),
                        expected: (*dom).clone(),
                        found: at,
                    });
                }
                Ok(Term::mk_app(f, a))
            }
            ty => Err(KernelError::NotAFunction { term: f.to_string(), ty }),
        }
    }

    pub fn apply(f: Term, args: impl IntoIterator<Item = Term>) -> Result<Term, KernelError> {
        args.into_iter().try_fold(f, Term::app)
    }

    /// `name : ty \ body`, binding the free occurrences of `Var(name)` in `body`.
    pub fn lam(name: impl Into<Symbol>, ty: Ty, body: Term) -> Result<Term, KernelError> {
        let name = name.into();
        if let Some(used) = var_type_conflict(&body, &name, &ty) {
            return Err(KernelError::AnnotationConflict { name, annotated: ty, used });
        }
        let body = close(&body, &name, 0);
        Ok(Term::mk_abs(name, ty, body))
    }

    pub(crate) fn mk_app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub(crate) fn mk_abs(hint: Symbol, ty: Ty, body: Term) -> Term {
        Term::Abs(hint, ty, Arc::new(body))
    }

    pub(crate) fn mk_spine(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::mk_app)
    }

    /// Locally computed type. Every leaf carries its type, so no context is needed.
    pub fn ty(&self) -> Ty {
        match self {
            Term::Const(_, t) | Term::Var(_, t) | Term::Bound(_, t) | Term::Meta(_, t) => t.clone(),
            Term::Abs(_, t, b) => Ty::arrow(t.clone(), b.ty()),
            Term::App(f, _) => match f.ty() {
                Ty::Arrow(_, cod) => (*cod).clone(),
                other => panic!("ill-typed application of {f} : {other}"),
            },
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn head(&self) -> &Term {
        let mut cur = self;
        while let Term::App(f, _) = cur {
            cur = f;
        }
        cur
    }

    pub fn is_closed(&self) -> bool {
        !has_loose_at_or_above(self, 0)
    }

    pub fn has_metas(&self) -> bool {
        match self {
            Term::Meta(..) => true,
            Term::Abs(_, _, b) => b.has_metas(),
            Term::App(f, a) => f.has_metas() || a.has_metas(),
            _ => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Abs(_, _, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
            _ => 1,
        }
    }
}

fn var_type_conflict(t: &Term, name: &Symbol, ty: &Ty) -> Option<Ty> {
    match t {
        Term::Var(n, u) if n == name && u != ty => Some(u.clone()),
        Term::Abs(_, _, b) => var_type_conflict(b, name, ty),
        Term::App(f, a) => var_type_conflict(f, name, ty).or_else(|| var_type_conflict(a, name, ty)),
        _ => None,
    }
}

/// Replace free `Var(name)` by the bound index matching `depth`.
pub(crate) fn close(t: &Term, name: &Symbol, depth: u32) -> Term {
    match t {
        Term::Var(n, ty) if n == name => Term::Bound(depth, ty.clone()),
        Term::Abs(h, ty, b) => Term::mk_abs(h.clone(), ty.clone(), close(b, name, depth + 1)),
        Term::App(f, a) => Term::mk_app(close(f, name, depth), close(a, name, depth)),
        _ => t.clone(),
    }
}

/// Add `d` to every bound index >= `cutoff`.
pub(crate) fn shift(t: &Term, d: i64, cutoff: u32) -> Term {
    if d == 0 {
        return t.clone();
    }
    match t {
        Term::Bound(i, ty) if *i >= cutoff => Term::Bound((*i as i64 + d) as u32, ty.clone()),
        Term::Abs(h, ty, b) => Term::mk_abs(h.clone(), ty.clone(), shift(b, d, cutoff + 1)),
        Term::App(f, a) => Term::mk_app(shift(f, d, cutoff), shift(a, d, cutoff)),
        _ => t.clone(),
    }
}

/// Body of an abstraction with its bound variable replaced by `arg`.
pub(crate) fn instantiate(body: &Term, arg: &Term) -> Term {
    fn go(t: &Term, arg: &Term, depth: u32) -> Term {
        match t {
            Term::Bound(i, ty) => {
                if *i == depth {
                    shift(arg, depth as i64, 0)
                } else if *i > depth {
                    Term::Bound(i - 1, ty.clone())
                } else {
                    t.clone()
                }
            }
            Term::Abs(h, ty, b) => Term::mk_abs(h.clone(), ty.clone(), go(b, arg, depth + 1)),
            Term::App(f, a) => Term::mk_app(go(f, arg, depth), go(a, arg, depth)),
            _ => t.clone(),
        }
    }
    go(body, arg, 0)
}

/// Does bound index `idx` (relative to `t`'s top) occur in `t`?
pub(crate) fn has_loose(t: &Term, idx: u32) -> bool {
    match t {
        Term::Bound(i, _) => *i == idx,
        Term::Abs(_, _, b) => has_loose(b, idx + 1),
        Term::App(f, a) => has_loose(f, idx) || has_loose(a, idx),
        _ => false,
    }
}

pub(crate) fn has_loose_at_or_above(t: &Term, idx: u32) -> bool {
    match t {
        Term::Bound(i, _) => *i >= idx,
        Term::Abs(_, _, b) => has_loose_at_or_above(b, idx + 1),
        Term::App(f, a) => has_loose_at_or_above(f, idx) || has_loose_at_or_above(a, idx),
        _ => false,
    }
}

/// Free variables (`Var` leaves) of `t`.
pub fn free_vars(t: &Term) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    collect_vars(t, &mut out);
    out
}

pub(crate) fn collect_vars(t: &Term, out: &mut BTreeSet<Symbol>) {
    match t {
        Term::Var(n, _) => {
            out.insert(n.clone());
        }
        Term::Abs(_, _, b) => collect_vars(b, out),
        Term::App(f, a) => {
            collect_vars(f, out);
            collect_vars(a, out);
        }
        _ => {}
    }
}

pub(crate) fn collect_typed_vars(t: &Term, out: &mut Vec<(Symbol, Ty)>) {
    match t {
        Term::Var(n, ty) => {
            if !out.iter().any(|(m, _)| m == n) {
                out.push((n.clone(), ty.clone()));
            }
        }
        Term::Abs(_, _, b) => collect_typed_vars(b, out),
        Term::App(f, a) => {
            collect_typed_vars(f, out);
            collect_typed_vars(a, out);
        }
        _ => {}
    }
}

/// Every name mentioned in `t`: constants, variables and binder hints.
pub fn names(t: &Term) -> BTreeSet<Symbol> {
    fn go(t: &Term, out: &mut BTreeSet<Symbol>) {
        match t {
            Term::Const(n, _) | Term::Var(n, _) => {
                out.insert(n.clone());
            }
            Term::Abs(h, _, b) => {
                out.insert(h.clone());
                go(b, out);
            }
            Term::App(f, a) => {
                go(f, out);
                go(a, out);
            }
            _ => {}
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut out);
    out
}

/// Names of free `Var` and `Const` leaves: what a binder hint must not shadow when printed.
pub(crate) fn free_names(t: &Term, out: &mut BTreeSet<Symbol>) {
    match t {
        Term::Const(n, _) | Term::Var(n, _) => {
            out.insert(n.clone());
        }
        Term::Abs(_, _, b) => free_names(b, out),
        Term::App(f, a) => {
            free_names(f, out);
            free_names(a, out);
        }
        _ => {}
    }
}

pub fn alpha_equal(t1: &Term, t2: &Term) -> bool {
    t1 == t2
}

/// Capture-avoiding `t1[t2/x]`. Binders whose hint would capture a free name of
/// `t2` are renamed with the least numeric suffix unused in either term.
pub fn substitute(t1: &Term, x: &Symbol, t2: &Term) -> Result<Term, KernelError> {
    let expected = t2.ty();
    if let Some(used) = var_type_conflict(t1, x, &expected) {
        return Err(KernelError::TypeMismatch { term: t2.to_string(), expected: used, found: expected });
    }
    if !free_vars(t1).contains(x) {
        return Ok(t1.clone());
    }
    let mut captured = BTreeSet::new();
    free_names(t2, &mut captured);
    let mut all = names(t1);
    all.extend(names(t2));
    Ok(subst_go(t1, x, t2, 0, &captured, &mut all))
}

fn subst_go(t: &Term, x: &Symbol, s: &Term, depth: u32, captured: &BTreeSet<Symbol>, all: &mut BTreeSet<Symbol>) -> Term {
    match t {
        Term::Var(n, _) if n == x => shift(s, depth as i64, 0),
        Term::Abs(h, ty, b) => {
            let occurs = free_vars(b).contains(x);
            let hint = if occurs && captured.contains(h) {
                let fresh = super::fresh_name(h, |c| all.contains(c));
                all.insert(fresh.clone());
                fresh
            } else {
                h.clone()
            };
            Term::mk_abs(hint, ty.clone(), subst_go(b, x, s, depth + 1, captured, all))
        }
        Term::App(f, a) => Term::mk_app(subst_go(f, x, s, depth, captured, all), subst_go(a, x, s, depth, captured, all)),
        _ => t.clone(),
    }
}

/// Replace free `Var(x)` by `s` without touching hints; `s` is shifted under binders.
pub(crate) fn replace_var(t: &Term, x: &Symbol, s: &Term) -> Term {
    fn go(t: &Term, x: &Symbol, s: &Term, depth: u32) -> Term {
        match t {
            Term::Var(n, _) if n == x => shift(s, depth as i64, 0),
            Term::Abs(h, ty, b) => Term::mk_abs(h.clone(), ty.clone(), go(b, x, s, depth + 1)),
            Term::App(f, a) => Term::mk_app(go(f, x, s, depth), go(a, x, s, depth)),
            _ => t.clone(),
        }
    }
    go(t, x, s, 0)
}

/// Rename free `Var(from)` to `Var(to)`.
pub(crate) fn rename_var(t: &Term, from: &Symbol, to: &Symbol) -> Term {
    match t {
        Term::Var(n, ty) if n == from => Term::Var(to.clone(), ty.clone()),
        Term::Abs(h, ty, b) => Term::mk_abs(h.clone(), ty.clone(), rename_var(b, from, to)),
        Term::App(f, a) => Term::mk_app(rename_var(f, from, to), rename_var(a, from, to)),
        _ => t.clone(),
    }
}

pub(crate) fn mentions_var(t: &Term, x: &Symbol) -> bool {
    match t {
        Term::Var(n, _) => n == x,
        Term::Abs(_, _, b) => mentions_var(b, x),
        Term::App(f, a) => mentions_var(f, x) || mentions_var(a, x),
        _ => false,
    }
}
