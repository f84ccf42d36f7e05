//! Independent jobs over many inputs: sequents, oracle cases, developments.
//!
//! With the `parallel` feature (on by default) [`map`] fans out over rayon's
//! pool; without it, or through [`map_sequential`], jobs run in order on the
//! calling thread. Results are always returned in input order.

use crate::engine::{solve, EngineError, SearchOutcome, Sequent};
use crate::oracle::{check_case, OracleError, OracleReport};
use crate::random::PropCase;

pub fn map_sequential<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    map_parallel(items, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    map_sequential(items, f)
}

pub fn solve_all(sequents: &[Sequent], depth: u32) -> Vec<Result<SearchOutcome, EngineError>> {
    map(sequents, |s| solve(s, depth))
}

pub fn solve_all_sequential(sequents: &[Sequent], depth: u32) -> Vec<Result<SearchOutcome, EngineError>> {
    map_sequential(sequents, |s| solve(s, depth))
}

pub fn oracle_all(cases: &[PropCase], depth: u32, max_delta: usize) -> Vec<Result<OracleReport, OracleError>> {
    map(cases, |c| check_case(&c.program, &c.from, &c.goal, depth, max_delta))
}

pub fn oracle_all_sequential(cases: &[PropCase], depth: u32, max_delta: usize) -> Vec<Result<OracleReport, OracleError>> {
    map_sequential(cases, |c| check_case(&c.program, &c.from, &c.goal, depth, max_delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_prop_case, rng, PropParams};

    #[test]
    fn parallel_and_sequential_agree() {
        let mut r = rng(21);
        let cases: Vec<PropCase> = (0..40).map(|_| random_prop_case(&mut r, PropParams::default())).collect();
        let seqs: Vec<Sequent> = cases.iter().map(|c| Sequent::new(&c.program, c.goal.clone())).collect();
        let a: Vec<_> = solve_all(&seqs, 7).into_iter().map(|o| o.map(|o| o.label())).collect();
        let b: Vec<_> = solve_all_sequential(&seqs, 7).into_iter().map(|o| o.map(|o| o.label())).collect();
        assert_eq!(a, b);
        let a: Vec<_> = oracle_all(&cases, 7, 2).into_iter().map(|r| r.ok()).collect();
        let b: Vec<_> = oracle_all_sequential(&cases, 7, 2).into_iter().map(|r| r.ok()).collect();
        assert_eq!(a, b);
    }
}
