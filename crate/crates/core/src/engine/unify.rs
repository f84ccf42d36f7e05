use std::collections::HashMap;

use crate::kernel::term::shift;
use crate::kernel::{normalize, MetaId, Symbol, Term, Ty};
use crate::syntax::Atom;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum UnifyError {
    Fail,
    /// Outside the higher-order pattern fragment; undecided.
    NotPattern,
}

#[derive(Clone, Debug)]
struct MetaSlot {
    ty: Ty,
    level: u32,
    value: Option<Term>,
}

#[derive(Clone, Debug)]
enum TrailEntry {
    Bind(MetaId),
    NewMeta,
    NewEigen(Symbol),
}

/// Logic variables, eigenvariables and the undo trail.
///
/// A meta of level `l` may only be instantiated with terms whose eigenvariables
/// all have level `<= l`. Signature constants have level 0.
#[derive(Clone, Debug, Default)]
pub(crate) struct Store {
    metas: Vec<MetaSlot>,
    eigen: Vec<(Symbol, Ty)>,
    eigen_level: HashMap<Symbol, u32>,
    trail: Vec<TrailEntry>,
}

#[derive(Clone, Copy, Debug)]
enum PatArg {
    Bound(u32),
    Eigen(u32),
}

impl Store {
    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                TrailEntry::Bind(m) => self.metas[m as usize].value = None,
                TrailEntry::NewMeta => {
                    self.metas.pop();
                }
                TrailEntry::NewEigen(c) => {
                    self.eigen.pop();
                    self.eigen_level.remove(&c);
                }
            }
        }
    }

    pub fn new_meta(&mut self, ty: Ty, level: u32) -> Term {
        let id = self.metas.len() as MetaId;
        self.metas.push(MetaSlot { ty: ty.clone(), level, value: None });
        self.trail.push(TrailEntry::NewMeta);
        Term::Meta(id, ty)
    }

    /// Registers `name` as an eigenvariable; returns its level.
    pub fn new_eigen(&mut self, name: Symbol, ty: Ty) -> u32 {
        self.eigen.push((name.clone(), ty));
        let level = self.eigen.len() as u32;
        self.eigen_level.insert(name.clone(), level);
        self.trail.push(TrailEntry::NewEigen(name));
        level
    }

    pub fn is_eigen(&self, name: &str) -> bool {
        self.eigen_level.contains_key(name)
    }

    fn level_of_const(&self, name: &Symbol) -> u32 {
        self.eigen_level.get(name).copied().unwrap_or(0)
    }

    fn bind(&mut self, m: MetaId, t: Term) {
        debug_assert!(self.metas[m as usize].value.is_none());
        self.metas[m as usize].value = Some(t);
        self.trail.push(TrailEntry::Bind(m));
    }

    /// Instantiate bound metas and normalize.
    pub fn resolve(&self, t: &Term) -> Term {
        if !t.has_metas() {
            return t.clone();
        }
        normalize(&self.subst_metas(t))
    }

    fn subst_metas(&self, t: &Term) -> Term {
        match t {
            Term::Meta(m, _) => match &self.metas[*m as usize].value {
                Some(v) => self.subst_metas(v),
                None => t.clone(),
            },
            Term::Abs(h, ty, b) => Term::mk_abs(h.clone(), ty.clone(), self.subst_metas(b)),
            Term::App(f, a) => Term::mk_app(self.subst_metas(f), self.subst_metas(a)),
            _ => t.clone(),
        }
    }

    pub fn unify_atoms(&mut self, a: &Atom, b: &Atom) -> Result<(), UnifyError> {
        if a.pred != b.pred || a.args.len() != b.args.len() {
            return Err(UnifyError::Fail);
        }
        for (x, y) in a.args.iter().zip(&b.args) {
            self.unify(x, y)?;
        }
        Ok(())
    }

    pub fn unify(&mut self, a: &Term, b: &Term) -> Result<(), UnifyError> {
        let a = self.resolve(a);
        let b = self.resolve(b);
        self.unify_resolved(&a, &b)
    }

    fn unify_resolved(&mut self, a: &Term, b: &Term) -> Result<(), UnifyError> {
        match (a, b) {
            (Term::Abs(_, _, x), Term::Abs(_, _, y)) => return self.unify(x, y),
            (Term::Abs(_, ty, x), other) | (other, Term::Abs(_, ty, x)) => {
                let expanded = Term::mk_app(shift(other, 1, 0), Term::Bound(0, ty.clone()));
                return self.unify(x, &expanded);
            }
            _ => {}
        }
        let (ha, args_a) = a.spine();
        let (hb, args_b) = b.spine();
        match (ha, hb) {
            (Term::Meta(m, _), Term::Meta(n, _)) if m == n => self.flex_flex_same(*m, &args_a, &args_b),
            (Term::Meta(m, _), _) => match self.pattern(*m, &args_a) {
                Some(p) => self.solve(*m, &p, &args_a, b),
                None => match hb {
                    Term::Meta(n, _) => match self.pattern(*n, &args_b) {
                        Some(p) => self.solve(*n, &p, &args_b, a),
                        None => Err(UnifyError::NotPattern),
                    },
                    _ => Err(UnifyError::NotPattern),
                },
            },
            (_, Term::Meta(n, _)) => match self.pattern(*n, &args_b) {
                Some(p) => self.solve(*n, &p, &args_b, a),
                None => Err(UnifyError::NotPattern),
            },
            _ => {
                if !rigid_heads_equal(ha, hb) || args_a.len() != args_b.len() {
                    return Err(UnifyError::Fail);
                }
                let pairs: Vec<(Term, Term)> = args_a.into_iter().cloned().zip(args_b.into_iter().cloned()).collect();
                // Rigid mismatches anywhere are definite failures, so prefer them to NotPattern.
                let mut undecided = false;
                for (x, y) in &pairs {
                    match self.unify(x, y) {
                        Ok(()) => {}
                        Err(UnifyError::Fail) => return Err(UnifyError::Fail),
                        Err(UnifyError::NotPattern) => undecided = true,
                    }
                }
                if undecided {
                    Err(UnifyError::NotPattern)
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Arguments are distinct bound variables or eigenvariables newer than the meta.
    fn pattern(&self, m: MetaId, args: &[&Term]) -> Option<Vec<PatArg>> {
        let level = self.metas[m as usize].level;
        let mut out: Vec<PatArg> = Vec::with_capacity(args.len());
        for a in args {
            let p = match a {
                Term::Bound(i, _) => PatArg::Bound(*i),
                Term::Const(c, _) if self.level_of_const(c) > level => PatArg::Eigen(self.level_of_const(c)),
                _ => return None,
            };
            let dup = out.iter().any(|q| match (q, &p) {
                (PatArg::Bound(x), PatArg::Bound(y)) | (PatArg::Eigen(x), PatArg::Eigen(y)) => x == y,
                _ => false,
            });
            if dup {
                return None;
            }
            out.push(p);
        }
        Some(out)
    }

    fn flex_flex_same(&mut self, m: MetaId, xs: &[&Term], ys: &[&Term]) -> Result<(), UnifyError> {
        if xs == ys {
            return Ok(());
        }
        if self.pattern(m, xs).is_none() || self.pattern(m, ys).is_none() {
            return Err(UnifyError::NotPattern);
        }
        let keep: Vec<bool> = xs.iter().zip(ys).map(|(x, y)| x == y).collect();
        let tys: Vec<Ty> = xs.iter().map(|t| t.ty()).collect();
        let level = self.metas[m as usize].level;
        self.prune(m, &keep, &tys, level);
        Ok(())
    }

    /// Bind `m := λ xs. m' (kept xs)` for a fresh `m'` at the same level.
    fn prune(&mut self, m: MetaId, keep: &[bool], arg_tys: &[Ty], level: u32) -> Term {
        let result = self.metas[m as usize].ty.result_after(arg_tys.len());
        let kept_tys: Vec<Ty> = arg_tys.iter().zip(keep).filter(|(_, k)| **k).map(|(t, _)| t.clone()).collect();
        let fresh = self.new_meta(Ty::from_parts(kept_tys, result), level);
        let k = arg_tys.len() as u32;
        let args = (0..arg_tys.len()).filter(|j| keep[*j]).map(|j| Term::Bound(k - 1 - j as u32, arg_tys[j].clone()));
        let body = Term::mk_spine(fresh.clone(), args);
        self.bind(m, wrap_lams(body, arg_tys));
        fresh
    }

    fn solve(&mut self, m: MetaId, pat: &[PatArg], args: &[&Term], t: &Term) -> Result<(), UnifyError> {
        let level = self.metas[m as usize].level;
        let k = pat.len() as u32;
        let body = self.invert(t, m, level, pat, k, 0)?;
        let tys: Vec<Ty> = args.iter().map(|a| a.ty()).collect();
        let hints: Vec<Symbol> = args
            .iter()
            .enumerate()
            .map(|(j, a)| match a {
                Term::Const(c, _) => c.clone(),
                _ => Symbol::from(format!("x{}", j + 1)),
            })
            .collect();
        let sol = normalize(&wrap_lams_named(body, &tys, &hints));
        self.bind(m, sol);
        Ok(())
    }

    fn arg_position(pat: &[PatArg], p: PatArg) -> Option<usize> {
        pat.iter().position(|q| match (q, p) {
            (PatArg::Bound(x), PatArg::Bound(y)) | (PatArg::Eigen(x), PatArg::Eigen(y)) => *x == y,
            _ => false,
        })
    }

    /// Rewrites `t` into the body of a solution for `m`, or explains why none exists.
    /// `d` counts binders entered inside `t`.
    fn invert(&mut self, t: &Term, m: MetaId, level: u32, pat: &[PatArg], k: u32, d: u32) -> Result<Term, UnifyError> {
        match t {
            Term::Bound(i, ty) => {
                if *i < d {
                    return Ok(t.clone());
                }
                match Self::arg_position(pat, PatArg::Bound(i - d)) {
                    Some(j) => Ok(Term::Bound(d + k - 1 - j as u32, ty.clone())),
                    None => Err(UnifyError::Fail),
                }
            }
            Term::Const(c, ty) => {
                let l = self.level_of_const(c);
                if l == 0 {
                    return Ok(t.clone());
                }
                if let Some(j) = Self::arg_position(pat, PatArg::Eigen(l)) {
                    return Ok(Term::Bound(d + k - 1 - j as u32, ty.clone()));
                }
                if l > level {
                    Err(UnifyError::Fail)
                } else {
                    Ok(t.clone())
                }
            }
            Term::Var(..) => Ok(t.clone()),
            Term::Abs(h, ty, b) => Ok(Term::mk_abs(h.clone(), ty.clone(), self.invert(b, m, level, pat, k, d + 1)?)),
            Term::Meta(..) | Term::App(..) => {
                let (head, args) = t.spine();
                match head {
                    Term::Meta(n, _) => self.invert_flex(*n, &args, m, level, pat, k, d),
                    _ => {
                        let h = self.invert(head, m, level, pat, k, d)?;
                        let mut out = Vec::with_capacity(args.len());
                        for a in args {
                            out.push(self.invert(a, m, level, pat, k, d)?);
                        }
                        Ok(Term::mk_spine(h, out))
                    }
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn invert_flex(&mut self, n: MetaId, args: &[&Term], m: MetaId, level: u32, pat: &[PatArg], k: u32, d: u32) -> Result<Term, UnifyError> {
        if n == m {
            // Occurs check; a pattern occurrence could only be solved by an infinite term.
            return if self.pattern(n, args).is_some() { Err(UnifyError::Fail) } else { Err(UnifyError::NotPattern) };
        }
        let mark = self.mark();
        let mut inverted = Vec::with_capacity(args.len());
        let mut ok = true;
        for a in args {
            match self.invert(a, m, level, pat, k, d) {
                Ok(x) => inverted.push(Some(x)),
                Err(UnifyError::Fail) => {
                    ok = false;
                    inverted.push(None)
                }
                Err(e) => {
                    self.undo(mark);
                    return Err(e);
                }
            }
        }
        let n_level = self.metas[n as usize].level;
        if ok {
            let head = if n_level > level {
                let fresh = self.new_meta(self.metas[n as usize].ty.clone(), level);
                self.bind(n, fresh.clone());
                fresh
            } else {
                Term::Meta(n, self.metas[n as usize].ty.clone())
            };
            return Ok(Term::mk_spine(head, inverted.into_iter().map(Option::unwrap)));
        }
        // Some argument mentions something out of scope: prune it away if n is a pattern.
        if self.pattern(n, args).is_none() {
            self.undo(mark);
            return Err(UnifyError::NotPattern);
        }
        let keep: Vec<bool> = inverted.iter().map(Option::is_some).collect();
        let tys: Vec<Ty> = args.iter().map(|a| a.ty()).collect();
        let fresh = self.prune(n, &keep, &tys, n_level.min(level));
        Ok(Term::mk_spine(fresh, inverted.into_iter().flatten()))
    }
}

fn rigid_heads_equal(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Const(x, s), Term::Const(y, t)) | (Term::Var(x, s), Term::Var(y, t)) => x == y && s == t,
        (Term::Bound(i, _), Term::Bound(j, _)) => i == j,
        _ => false,
    }
}

fn wrap_lams(body: Term, tys: &[Ty]) -> Term {
    let hints: Vec<Symbol> = (1..=tys.len()).map(|j| Symbol::from(format!("x{j}"))).collect();
    wrap_lams_named(body, tys, &hints)
}

fn wrap_lams_named(body: Term, tys: &[Ty], hints: &[Symbol]) -> Term {
    tys.iter().zip(hints).rev().fold(body, |acc, (ty, h)| Term::mk_abs(h.clone(), ty.clone(), acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i() -> Ty {
        Ty::atom("i")
    }

    fn ii() -> Ty {
        Ty::arrow(i(), i())
    }

    fn c(name: &str) -> Term {
        Term::constant(name, i())
    }

    fn f(a: Term) -> Term {
        Term::mk_app(Term::constant("f", ii()), a)
    }

    #[test]
    fn first_order_binding_and_undo() {
        let mut s = Store::default();
        let mark = s.mark();
        let x = s.new_meta(i(), 0);
        s.unify(&f(x.clone()), &f(c("a"))).unwrap();
        assert_eq!(s.resolve(&x), c("a"));
        assert_eq!(s.unify(&f(x.clone()), &f(c("b"))), Err(UnifyError::Fail));
        s.undo(mark);
        assert!(s.metas.is_empty() && s.trail.is_empty());
    }

    #[test]
    fn occurs_check() {
        let mut s = Store::default();
        let x = s.new_meta(i(), 0);
        assert_eq!(s.unify(&x, &f(x.clone())), Err(UnifyError::Fail));
    }

    #[test]
    fn pattern_inverts_eigenvariables() {
        let mut s = Store::default();
        let m = s.new_meta(ii(), 0);
        s.new_eigen("e".into(), i());
        let e = c("e");
        s.unify(&Term::mk_app(m.clone(), e.clone()), &f(e)).unwrap();
        // M := e\ f e, which eta-contracts to f.
        assert_eq!(s.resolve(&m), Term::constant("f", ii()));
    }

    #[test]
    fn eigenvariable_cannot_escape() {
        let mut s = Store::default();
        let x = s.new_meta(i(), 0);
        s.new_eigen("e".into(), i());
        assert_eq!(s.unify(&x, &c("e")), Err(UnifyError::Fail));
        let y = s.new_meta(i(), 1);
        assert!(s.unify(&y, &c("e")).is_ok());
    }

    #[test]
    fn flex_flex_same_prunes_disagreeing_arguments() {
        let mut s = Store::default();
        let m = s.new_meta(Ty::from_parts(vec![i(), i()], i()), 0);
        s.new_eigen("a".into(), i());
        s.new_eigen("b".into(), i());
        s.new_eigen("d".into(), i());
        let l = Term::mk_spine(m.clone(), [c("a"), c("b")]);
        let r = Term::mk_spine(m.clone(), [c("a"), c("d")]);
        s.unify(&l, &r).unwrap();
        let applied = s.resolve(&Term::mk_spine(m, [c("a"), c("b")]));
        let (head, args) = applied.spine();
        assert!(matches!(head, Term::Meta(..)));
        assert_eq!(args, vec![&c("a")]);
    }

    #[test]
    fn flex_flex_distinct_metas_intersect() {
        let mut s = Store::default();
        let m = s.new_meta(Ty::from_parts(vec![i(), i()], i()), 0);
        let n = s.new_meta(ii(), 0);
        s.new_eigen("a".into(), i());
        s.new_eigen("b".into(), i());
        let l = Term::mk_spine(m.clone(), [c("a"), c("b")]);
        let r = Term::mk_app(n.clone(), c("b"));
        s.unify(&l, &r).unwrap();
        assert_eq!(s.resolve(&l), s.resolve(&r));
    }

    #[test]
    fn non_pattern_is_undecided() {
        let mut s = Store::default();
        let m = s.new_meta(ii(), 0);
        let l = Term::mk_app(m, c("a"));
        assert_eq!(s.unify(&l, &f(c("a"))), Err(UnifyError::NotPattern));
    }

    #[test]
    fn rigid_clash_beats_non_pattern() {
        let mut s = Store::default();
        let m = s.new_meta(ii(), 0);
        let g = Term::constant("g", Ty::from_parts(vec![i(), i()], i()));
        let l = Term::mk_spine(g.clone(), [Term::mk_app(m, c("a")), c("a")]);
        let r = Term::mk_spine(g, [c("a"), c("b")]);
        assert_eq!(s.unify(&l, &r), Err(UnifyError::Fail));
    }

    #[test]
    fn eta_expansion_against_abstraction() {
        let mut s = Store::default();
        let m = s.new_meta(ii(), 0);
        let lam = Term::mk_abs("z".into(), i(), f(Term::Bound(0, i())));
        s.unify(&lam, &m).unwrap();
        assert_eq!(s.resolve(&m), Term::constant("f", ii()));
    }
}
