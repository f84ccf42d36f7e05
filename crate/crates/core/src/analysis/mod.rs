//! Reachability analyses over a static context: which clauses may enter the
//! dynamic context of each predicate, which predicates each one depends on,
//! and whether a strengthening lemma is justified by them.

mod context;
mod dependency;
mod report;

use std::collections::BTreeSet;

use indexmap::IndexSet;
use thiserror::Error;

use crate::kernel::Symbol;
use crate::syntax::{predicates_of, Clause, Goal, NoHead, Program};
pub use context::{clause_id, collect_context_constraints, solve_context_fixpoint, ClauseSet, ContextConstraint, ContextMap};
pub use dependency::{collect_dependency_constraints, solve_dependency_fixpoint, DependencyConstraint, DependencyMap};
pub use report::AnalysisReport;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("predicate {0} has no defining clause")]
    UndefinedPredicate(Symbol),
    #[error(transparent)]
    NoHead(#[from] NoHead),
}

/// Solved context and dependency maps with the constraints that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub predicates: BTreeSet<Symbol>,
    pub context_constraints: Vec<ContextConstraint>,
    pub contexts: ContextMap,
    pub dependency_constraints: Vec<DependencyConstraint>,
    pub dependencies: DependencyMap,
}

impl Analysis {
    /// Run both analyses over `gamma`; `seed` starts every context cell.
    pub fn run(gamma: &[Clause], extra_preds: impl IntoIterator<Item = Symbol>, seed: &ClauseSet) -> Analysis {
        let mut predicates = predicates_of(gamma);
        predicates.extend(extra_preds);
        let context_constraints = collect_context_constraints(gamma);
        let contexts = solve_context_fixpoint(&context_constraints, &predicates, seed);
        let mut predicates = predicates;
        predicates.extend(contexts.predicates().cloned());
        let dependency_constraints = collect_dependency_constraints(gamma, &predicates, &contexts);
        let dependencies = solve_dependency_fixpoint(&dependency_constraints, &predicates);
        Analysis { predicates, context_constraints, contexts, dependency_constraints, dependencies }
    }
}

/// Both analyses over the program's clauses, starting from empty contexts.
pub fn analyze(p: &Program) -> Analysis {
    let gamma: Vec<Clause> = p.clauses.iter().map(|c| (**c).clone()).collect();
    let sig_preds = p.signature.predicates().map(|(a, _)| a.clone());
    Analysis::run(&gamma, sig_preds, &ClauseSet::new())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// `deps` lists `S(hp(g))` with `hp(g)` first.
    Validated { deps: Vec<Symbol> },
    /// `hp(f) ∈ S(hp(g))`.
    Blocked(Symbol),
}

impl Verdict {
    pub fn is_validated(&self) -> bool {
        matches!(self, Verdict::Validated { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrengthenCheck {
    pub verdict: Verdict,
    pub goal_pred: Symbol,
    pub from_pred: Symbol,
    /// Formulas placed in every dynamic context before solving: the user context and the goal's assumptions.
    pub seeds: ClauseSet,
    pub analysis: Analysis,
}

/// Can `g` be strengthened from `f`? Seeds `extra_ctx` and the assumptions of `g` into
/// the static context and into every predicate's dynamic context, solves both
/// fixpoints, and blocks when `hp(f)` is among the dependencies of `hp(g)`.
pub fn check_strengthenable(p: &Program, f: &Clause, g: &Goal, extra_ctx: &[Clause]) -> Result<StrengthenCheck, AnalysisError> {
    let goal_pred = g.head_pred()?.clone();
    let from_pred = f.head_pred().clone();

    let mut seeds: ClauseSet = extra_ctx.iter().cloned().collect();
    for leaf in g.leaves() {
        for d in leaf.assumptions {
            seeds.insert(d);
        }
    }
    let mut gamma: Vec<Clause> = p.clauses.iter().map(|c| (**c).clone()).collect();
    gamma.extend(seeds.iter().cloned());
    if !gamma.iter().any(|d| d.head_pred() == &goal_pred) {
        return Err(AnalysisError::UndefinedPredicate(goal_pred));
    }

    let sig_preds = p.signature.predicates().map(|(a, _)| a.clone());
    let extra = sig_preds.chain([goal_pred.clone(), from_pred.clone()]);
    let analysis = Analysis::run(&gamma, extra, &seeds);

    let deps: IndexSet<Symbol> = analysis.dependencies.get(&goal_pred).cloned().unwrap_or_default();
    let verdict = if deps.contains(&from_pred) {
        Verdict::Blocked(from_pred.clone())
    } else {
        Verdict::Validated { deps: deps.into_iter().collect() }
    };
    Ok(StrengthenCheck { verdict, goal_pred, from_pred, seeds, analysis })
}
