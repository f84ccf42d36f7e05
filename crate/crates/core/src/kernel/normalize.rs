use super::term::{has_loose, instantiate, shift};
use super::Term;

/// Reduction order used for beta normalization. All strategies reach the same
/// normal form on well-typed terms; they exist so that can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Big-step normal order: weak-head reduce, then normalize the arguments.
    NormalOrder,
    /// One leftmost-outermost contraction at a time.
    LeftmostOutermost,
    /// Arguments before the redex that consumes them.
    Innermost,
}

/// Beta-normalize, then eta-contract to a fixpoint.
pub fn normalize(t: &Term) -> Term {
    normalize_with(t, Strategy::NormalOrder)
}

pub fn normalize_with(t: &Term, strategy: Strategy) -> Term {
    let b = match strategy {
        Strategy::NormalOrder => beta_normal(t),
        Strategy::LeftmostOutermost => beta_small_step(t),
        Strategy::Innermost => beta_innermost(t),
    };
    eta_normal(&b)
}

pub fn beta_normal(t: &Term) -> Term {
    match t {
        Term::Abs(h, ty, b) => Term::mk_abs(h.clone(), ty.clone(), beta_normal(b)),
        Term::App(..) => {
            let (head, args) = t.spine();
            if let Term::Abs(_, _, body) = head {
                let reduced = instantiate(body, args[0]);
                beta_normal(&Term::mk_spine(reduced, args[1..].iter().map(|a| (*a).clone())))
            } else {
                Term::mk_spine(head.clone(), args.into_iter().map(beta_normal))
            }
        }
        _ => t.clone(),
    }
}

fn step(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => {
            if let Term::Abs(_, _, body) = &**f {
                return Some(instantiate(body, a));
            }
            if let Some(f2) = step(f) {
                return Some(Term::mk_app(f2, (**a).clone()));
            }
            step(a).map(|a2| Term::mk_app((**f).clone(), a2))
        }
        Term::Abs(h, ty, b) => step(b).map(|b2| Term::mk_abs(h.clone(), ty.clone(), b2)),
        _ => None,
    }
}

fn beta_small_step(t: &Term) -> Term {
    let mut cur = t.clone();
    while let Some(next) = step(&cur) {
        cur = next;
    }
    cur
}

fn beta_innermost(t: &Term) -> Term {
    match t {
        Term::Abs(h, ty, b) => Term::mk_abs(h.clone(), ty.clone(), beta_innermost(b)),
        Term::App(f, a) => {
            let f2 = beta_innermost(f);
            let a2 = beta_innermost(a);
            match &f2 {
                Term::Abs(_, _, body) => beta_innermost(&instantiate(body, &a2)),
                _ => Term::mk_app(f2, a2),
            }
        }
        _ => t.clone(),
    }
}

/// Bottom-up eta contraction; on a beta-normal term one pass reaches the fixpoint.
pub fn eta_normal(t: &Term) -> Term {
    match t {
        Term::Abs(h, ty, b) => {
            let b2 = eta_normal(b);
            if let Term::App(f, a) = &b2 {
                if matches!(**a, Term::Bound(0, _)) && !has_loose(f, 0) {
                    return shift(f, -1, 0);
                }
            }
            Term::mk_abs(h.clone(), ty.clone(), b2)
        }
        Term::App(f, a) => Term::mk_app(eta_normal(f), eta_normal(a)),
        _ => t.clone(),
    }
}

pub fn is_beta_normal(t: &Term) -> bool {
    match t {
        Term::App(f, a) => !matches!(**f, Term::Abs(..)) && is_beta_normal(f) && is_beta_normal(a),
        Term::Abs(_, _, b) => is_beta_normal(b),
        _ => true,
    }
}

pub fn is_eta_normal(t: &Term) -> bool {
    match t {
        Term::Abs(_, _, b) => {
            if let Term::App(f, a) = &**b {
                if matches!(**a, Term::Bound(0, _)) && !has_loose(f, 0) {
                    return false;
                }
            }
            is_eta_normal(b)
        }
        Term::App(f, a) => is_eta_normal(f) && is_eta_normal(a),
        _ => true,
    }
}

pub fn is_normal(t: &Term) -> bool {
    is_beta_normal(t) && is_eta_normal(t)
}
