//! Brute-force check of strengthening verdicts against the search engine.

use itertools::Itertools;
use serde::Serialize;

use crate::analysis::{check_strengthenable, clause_id, AnalysisError, Verdict};
use crate::engine::{solve, EngineError, Sequent};
use crate::syntax::{Clause, Goal, Program};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub delta: Vec<String>,
    pub with_from: &'static str,
    pub without: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub validated: bool,
    /// Contexts Δ tried, each with and without F.
    pub deltas: usize,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// For a Validated verdict, every Δ ⊆ C(hp G) with |Δ| ≤ `max_delta` such that
/// Γ; Δ, F ⊢ G is proved at `depth` must also give a proof of Γ; Δ ⊢ G.
/// Γ is the program without F.
pub fn check_case(program: &Program, from: &Clause, goal: &Goal, depth: u32, max_delta: usize) -> Result<OracleReport, OracleError> {
    let check = check_strengthenable(program, from, goal, &[])?;
    if !matches!(check.verdict, Verdict::Validated { .. }) {
        return Ok(OracleReport { validated: false, deltas: 0, counterexamples: vec![] });
    }
    let f_id = clause_id(from);
    let mut gamma = program.clone();
    gamma.clauses.retain(|d| clause_id(d) != f_id);

    let cell: Vec<Clause> = check.analysis.contexts.of(&check.goal_pred);
    let base = Sequent::new(&gamma, goal.clone());
    let mut report = OracleReport { validated: true, deltas: 0, counterexamples: vec![] };
    for k in 0..=max_delta.min(cell.len()) {
        for delta in cell.iter().cloned().combinations(k) {
            report.deltas += 1;
            let mut with = delta.clone();
            with.push(from.clone());
            let proved_with = solve(&base.clone().with_dynamics(with), depth)?;
            if !proved_with.is_proved() {
                continue;
            }
            let without = solve(&base.clone().with_dynamics(delta.clone()), depth)?;
            if !without.is_proved() {
                report.counterexamples.push(Counterexample {
                    delta: delta.iter().map(|d| d.to_string()).collect(),
                    with_from: proved_with.label(),
                    without: without.label(),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    #[test]
    fn positive_case_has_no_counterexample() {
        let p = parse_program("type f, b, a, g o. f => b. (b => a) => g. a. f.").unwrap();
        let r = check_case(&p, &p.parse_clause("f").unwrap(), &p.parse_goal("g").unwrap(), 7, 3).unwrap();
        assert!(r.validated);
        assert!(r.deltas >= 1);
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn blocked_case_is_not_checked() {
        let p = parse_program("type f, g o. f => g. f.").unwrap();
        let r = check_case(&p, &p.parse_clause("f").unwrap(), &p.parse_goal("g").unwrap(), 7, 3).unwrap();
        assert!(!r.validated);
    }

    #[test]
    fn oracle_detects_a_wrong_verdict() {
        // Forcing Γ to keep F's only use shows the comparison has teeth.
        let p = parse_program("type f, g o. f => g.").unwrap();
        let base = Sequent::new(&p, p.parse_goal("g").unwrap());
        let with = solve(&base.clone().with_dynamics(vec![p.parse_clause("f").unwrap()]), 7).unwrap();
        let without = solve(&base, 7).unwrap();
        assert!(with.is_proved() && !without.is_proved());
    }
}
