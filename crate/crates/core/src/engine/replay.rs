use std::sync::Arc;

use thiserror::Error;

use super::trace::{ClauseSource, DerivationTrace, Judgment, Rule, TraceNode};
use crate::kernel::{infer_type, Signature};
use crate::syntax::{Atom, Clause, Goal};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{rule} at node {path}: {reason}")]
pub struct ReplayError {
    /// Child indices from the root, dot separated; empty for the root.
    pub path: String,
    pub rule: &'static str,
    pub reason: String,
}

/// Re-check every node of `trace` against its rule, for the sequent `Σ; Γ; Δ ⊢ goal`.
pub fn replay(sig: &Signature, statics: &[Arc<Clause>], dynamics: &[Clause], goal: &Goal, trace: &DerivationTrace) -> Result<(), ReplayError> {
    let checker = Checker { statics };
    let delta: Vec<Clause> = dynamics.to_vec();
    checker.node(&trace.root, &Judgment::Goal(goal.clone()), sig, &delta, &mut Vec::new())
}

/// As [`replay`] for a focused sequent `Σ; Γ; Δ; [clause] ⊢ atom`.
pub fn replay_focused(
    sig: &Signature,
    statics: &[Arc<Clause>],
    dynamics: &[Clause],
    clause: &Clause,
    atom: &Atom,
    trace: &DerivationTrace,
) -> Result<(), ReplayError> {
    let checker = Checker { statics };
    let expected = Judgment::Focused { clause: clause.clone(), atom: atom.clone() };
    checker.node(&trace.root, &expected, sig, dynamics, &mut Vec::new())
}

fn same_judgment(a: &Judgment, b: &Judgment) -> bool {
    match (a, b) {
        (Judgment::Goal(x), Judgment::Goal(y)) => x.key() == y.key(),
        (Judgment::Focused { clause: c1, atom: a1 }, Judgment::Focused { clause: c2, atom: a2 }) => {
            c1.key() == c2.key() && Clause::Fact(a1.clone()).key() == Clause::Fact(a2.clone()).key()
        }
        _ => false,
    }
}

struct Checker<'a> {
    statics: &'a [Arc<Clause>],
}

impl Checker<'_> {
    fn node(&self, n: &TraceNode, expected: &Judgment, sig: &Signature, delta: &[Clause], path: &mut Vec<usize>) -> Result<(), ReplayError> {
        let fail = |reason: String| ReplayError {
            path: path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("."),
            rule: n.rule.name(),
            reason,
        };
        if !same_judgment(&n.judgment, expected) {
            return Err(fail("judgment does not match the premise its parent requires".into()));
        }
        let arity = |k: usize| -> Result<(), ReplayError> {
            if n.children.len() == k {
                Ok(())
            } else {
                Err(fail(format!("expected {k} premises, found {}", n.children.len())))
            }
        };
        let mut premises: Vec<(Judgment, Signature, Vec<Clause>)> = Vec::new();
        match (&n.rule, &n.judgment) {
            (Rule::TopR, Judgment::Goal(Goal::Top)) => arity(0)?,
            (Rule::AndR, Judgment::Goal(Goal::And(l, r))) => {
                arity(2)?;
                premises.push((Judgment::Goal((**l).clone()), sig.clone(), delta.to_vec()));
                premises.push((Judgment::Goal((**r).clone()), sig.clone(), delta.to_vec()));
            }
            (Rule::ImpR, Judgment::Goal(Goal::Implies(d, g))) => {
                arity(1)?;
                let mut delta2 = delta.to_vec();
                delta2.push((**d).clone());
                premises.push((Judgment::Goal((**g).clone()), sig.clone(), delta2));
            }
            (Rule::PiR { eigen }, Judgment::Goal(Goal::Pi(b, g))) => {
                arity(1)?;
                if sig.contains(eigen) {
                    return Err(fail(format!("eigenvariable {eigen} is not fresh")));
                }
                let sig2 = sig.extended(eigen.clone(), b.ty.clone()).map_err(|e| fail(e.to_string()))?;
                let body = g.subst(&b.name, &crate::kernel::Term::Const(eigen.clone(), b.ty.clone()));
                premises.push((Judgment::Goal(body), sig2, delta.to_vec()));
            }
            (Rule::Focus { source }, Judgment::Goal(Goal::Atom(a))) => {
                arity(1)?;
                let clause = match source {
                    ClauseSource::Static(i) => self.statics.get(*i).map(|c| (**c).clone()),
                    ClauseSource::Dynamic(i) => delta.get(*i).cloned(),
                };
                let clause = clause.ok_or_else(|| fail(format!("no clause at {source:?}")))?;
                premises.push((Judgment::Focused { clause, atom: a.clone() }, sig.clone(), delta.to_vec()));
            }
            (Rule::ImpL, Judgment::Focused { clause: Clause::Imp(g, d), atom }) => {
                arity(2)?;
                premises.push((Judgment::Goal(g.clone()), sig.clone(), delta.to_vec()));
                premises.push((Judgment::Focused { clause: (**d).clone(), atom: atom.clone() }, sig.clone(), delta.to_vec()));
            }
            (Rule::PiL { witness }, Judgment::Focused { clause: Clause::Pi(b, d), atom }) => {
                arity(1)?;
                let ty = infer_type(sig, witness).map_err(|e| fail(format!("ill-typed witness: {e}")))?;
                if ty != b.ty {
                    return Err(fail(format!("witness has type {ty}, binder expects {}", b.ty)));
                }
                premises.push((Judgment::Focused { clause: d.subst(&b.name, witness), atom: atom.clone() }, sig.clone(), delta.to_vec()));
            }
            (Rule::Init, Judgment::Focused { clause: Clause::Fact(h), atom }) => {
                arity(0)?;
                if Clause::Fact(h.clone()).key() != Clause::Fact(atom.clone()).key() {
                    return Err(fail(format!("head {h} does not match {atom}")));
                }
            }
            _ => return Err(fail("rule does not apply to this judgment".into())),
        }
        for (i, ((judgment, sig2, delta2), child)) in premises.iter().zip(&n.children).enumerate() {
            path.push(i);
            self.node(child, judgment, sig2, delta2, path)?;
            path.pop();
        }
        Ok(())
    }
}
