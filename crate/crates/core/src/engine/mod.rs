//! Depth-bounded proof search over the focused sequent calculus for
//! hereditary Harrop formulas, with derivation traces and a replay checker.

mod replay;
mod search;
mod trace;
mod unify;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{infer_type_with, Signature, Symbol, Term, Ty};
use crate::syntax::{Atom, Clause, Goal, Program};
pub use replay::{replay, replay_focused, ReplayError};
use search::{Env, Search};
pub use trace::{ClauseSource, DerivationTrace, Judgment, Rule, TraceNode};

pub const DEFAULT_DEPTH: u32 = 10;

/// `Σ; Γ; Δ ⊢ G`
#[derive(Clone, Debug)]
pub struct Sequent {
    pub signature: Signature,
    pub statics: Vec<Arc<Clause>>,
    pub dynamics: Vec<Clause>,
    pub goal: Goal,
}

/// `Σ; Γ; Δ; [D] ⊢ A`
#[derive(Clone, Debug)]
pub struct FocusedSequent {
    pub signature: Signature,
    pub statics: Vec<Arc<Clause>>,
    pub dynamics: Vec<Clause>,
    pub clause: Clause,
    pub atom: Atom,
}

impl Sequent {
    pub fn new(program: &Program, goal: Goal) -> Self {
        Sequent { signature: program.signature.clone(), statics: program.clauses.clone(), dynamics: Vec::new(), goal }
    }

    pub fn with_dynamics(mut self, dynamics: Vec<Clause>) -> Self {
        self.dynamics = dynamics;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Proof {
    pub trace: DerivationTrace,
    /// Instantiations found for the free variables of the goal, in order of first occurrence.
    pub answer: Vec<(Symbol, Term)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    /// Some branch was cut off by the depth bound.
    DepthBound,
    /// Some unification problem fell outside the pattern fragment.
    NonPattern,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Proved(Proof),
    /// No derivation exists at any depth: the search space was exhausted without cut-offs.
    Refuted,
    Unknown(UnknownReason),
}

impl SearchOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchOutcome::Proved(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Proved(_) => "proved",
            SearchOutcome::Refuted => "refuted",
            SearchOutcome::Unknown(_) => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("ill-formed sequent: {0}")]
    IllFormedSequent(String),
}

fn ill(msg: impl Into<String>) -> EngineError {
    EngineError::IllFormedSequent(msg.into())
}

fn check_atom(sig: &Signature, locals: &[(Symbol, Ty)], a: &Atom) -> Result<(), EngineError> {
    let ty = sig.const_type(&a.pred).ok_or_else(|| ill(format!("unknown predicate {}", a.pred)))?;
    let (params, result) = ty.split();
    if !result.is_prop() || params.len() != a.args.len() {
        return Err(ill(format!("{} is applied to {} arguments but has type {ty}", a.pred, a.args.len())));
    }
    for (t, expected) in a.args.iter().zip(&params) {
        let found = infer_type_with(sig, locals, t).map_err(|e| ill(format!("in {a}: {e}")))?;
        if &found != expected {
            return Err(ill(format!("in {a}: {t} has type {found}, expected {expected}")));
        }
    }
    Ok(())
}

fn check_goal(sig: &Signature, locals: &mut Vec<(Symbol, Ty)>, g: &Goal) -> Result<(), EngineError> {
    match g {
        Goal::Top => Ok(()),
        Goal::Atom(a) => check_atom(sig, locals, a),
        Goal::And(l, r) => {
            check_goal(sig, locals, l)?;
            check_goal(sig, locals, r)
        }
        Goal::Implies(d, g) => {
            check_clause(sig, locals, d)?;
            check_goal(sig, locals, g)
        }
        Goal::Pi(b, g) => {
            sig.check_type(&b.ty).map_err(|e| ill(e.to_string()))?;
            locals.push((b.name.clone(), b.ty.clone()));
            let r = check_goal(sig, locals, g);
            locals.pop();
            r
        }
    }
}

fn check_clause(sig: &Signature, locals: &mut Vec<(Symbol, Ty)>, d: &Clause) -> Result<(), EngineError> {
    match d {
        Clause::Fact(a) => check_atom(sig, locals, a),
        Clause::Imp(g, d) => {
            check_goal(sig, locals, g)?;
            check_clause(sig, locals, d)
        }
        Clause::Pi(b, d) => {
            sig.check_type(&b.ty).map_err(|e| ill(e.to_string()))?;
            locals.push((b.name.clone(), b.ty.clone()));
            let r = check_clause(sig, locals, d);
            locals.pop();
            r
        }
    }
}

fn check_context(sig: &Signature, statics: &[Arc<Clause>], dynamics: &[Clause]) -> Result<(), EngineError> {
    for d in statics.iter().map(|d| &**d).chain(dynamics) {
        if !d.is_closed() {
            let free: Vec<String> = d.free_vars().iter().map(|s| s.to_string()).collect();
            return Err(ill(format!("context clause {d} has free variables {}", free.join(", "))));
        }
        check_clause(sig, &mut Vec::new(), d)?;
    }
    Ok(())
}

/// Replace the free variables of a goal by logic variables.
fn open_query(search: &mut Search, vars: &[(Symbol, Ty)], mut rename: impl FnMut(&Symbol, &Term)) -> Vec<Term> {
    vars.iter()
        .map(|(x, ty)| {
            let m = search.store.new_meta(ty.clone(), 0);
            rename(x, &m);
            m
        })
        .collect()
}

fn finish(search: &Search, found: Option<TraceNode>, vars: &[(Symbol, Ty)], metas: &[Term]) -> SearchOutcome {
    match found {
        Some(root) => SearchOutcome::Proved(Proof {
            trace: DerivationTrace { root },
            answer: vars.iter().zip(metas).map(|((x, _), m)| (x.clone(), search.store.resolve(m))).collect(),
        }),
        None if search.non_pattern => SearchOutcome::Unknown(UnknownReason::NonPattern),
        None if search.bound_hit => SearchOutcome::Unknown(UnknownReason::DepthBound),
        None => SearchOutcome::Refuted,
    }
}

/// Search for a derivation of `s` using at most `depth` focusing and implication-left steps
/// along any branch. Free variables of the goal are read existentially.
pub fn solve(s: &Sequent, depth: u32) -> Result<SearchOutcome, EngineError> {
    check_context(&s.signature, &s.statics, &s.dynamics)?;
    let vars = s.goal.typed_free_vars();
    check_goal(&s.signature, &mut vars.clone(), &s.goal)?;

    let mut search = Search::new(&s.signature, &s.statics);
    let mut goal = s.goal.clone();
    let metas = open_query(&mut search, &vars, |x, m| goal = goal.subst(x, m));
    let env = Env { dynamic: s.dynamics.iter().cloned().map(Arc::new).collect(), level: 0 };
    let mut found = None;
    search.goal(&goal, &env, depth, &mut |s, t| {
        let store = &s.store;
        found = Some(t.map_terms(&mut |x| store.resolve(x)));
        true
    });
    Ok(finish(&search, found, &vars, &metas))
}

pub fn solve_focused(s: &FocusedSequent, depth: u32) -> Result<SearchOutcome, EngineError> {
    check_context(&s.signature, &s.statics, &s.dynamics)?;
    if !s.clause.is_closed() {
        return Err(ill(format!("focused clause {} is not closed", s.clause)));
    }
    check_clause(&s.signature, &mut Vec::new(), &s.clause)?;
    let probe = Goal::Atom(s.atom.clone());
    let vars = probe.typed_free_vars();
    check_atom(&s.signature, &vars, &s.atom)?;

    let mut search = Search::new(&s.signature, &s.statics);
    let mut atom = s.atom.clone();
    let metas = open_query(&mut search, &vars, |x, m| atom = atom.subst(x, m));
    let env = Env { dynamic: s.dynamics.iter().cloned().map(Arc::new).collect(), level: 0 };
    let mut found = None;
    search.focus(&s.clause, &atom, &env, depth, &mut |s, t| {
        let store = &s.store;
        found = Some(t.map_terms(&mut |x| store.resolve(x)));
        true
    });
    Ok(finish(&search, found, &vars, &metas))
}

/// If `s` is provable at `depth`, so is `s` with `extra` added to the dynamic context.
/// Returns whether the weakened sequent was proved.
pub fn check_weakening(s: &Sequent, extra: &[Clause], depth: u32) -> Result<bool, EngineError> {
    let mut weakened = s.clone();
    weakened.dynamics.extend(extra.iter().cloned());
    Ok(solve(&weakened, depth)?.is_proved())
}

/// The goal of `s` with its free variables replaced by the answer of `proof`.
pub fn instantiate_goal(goal: &Goal, proof: &Proof) -> Goal {
    proof.answer.iter().fold(goal.clone(), |g, (x, t)| g.subst(x, t))
}

#[cfg(test)]
mod tests;
