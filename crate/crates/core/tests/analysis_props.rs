use std::collections::BTreeSet;

use harrop_core::analysis::{analyze, ClauseSet};
use harrop_core::batch::oracle_all;
use harrop_core::random::{random_prop_case, random_prop_clause, random_prop_program, rng, PropParams};
use harrop_core::kernel::Symbol;
use harrop_core::syntax::Program;
use proptest::prelude::*;

fn program(seed: u64) -> Program {
    random_prop_program(&mut rng(seed), PropParams::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn context_fixpoint_is_least(seed in any::<u64>()) {
        let a = analyze(&program(seed));
        prop_assert!(a.contexts.satisfies(&a.context_constraints));
        for (p, cell) in a.contexts.iter() {
            for d in cell.iter() {
                let mut smaller = a.contexts.clone();
                smaller.cell_mut(p).remove(d);
                prop_assert!(!smaller.satisfies(&a.context_constraints), "{} removable from C({})", d, p);
            }
        }
    }

    #[test]
    fn dependency_fixpoint_is_least_and_reflexive(seed in any::<u64>()) {
        let a = analyze(&program(seed));
        prop_assert!(a.dependencies.satisfies(&a.dependency_constraints));
        for p in &a.predicates {
            prop_assert!(a.dependencies.depends(p, p));
        }
        // every non-reflexive member must be forced by a constraint on its owner
        for (p, deps) in a.dependencies.iter() {
            for q in deps.iter().filter(|q| *q != p) {
                let forced = a.dependency_constraints.iter().any(|c| {
                    &c.target == p && c.includes_deps_of.iter().any(|r| a.dependencies.depends(r, q))
                });
                prop_assert!(forced, "{} in S({}) unforced", q, p);
            }
        }
    }

    #[test]
    fn adding_a_clause_never_shrinks(seed in any::<u64>(), s2 in any::<u64>()) {
        let p = program(seed);
        let preds: Vec<Symbol> = p.signature.predicates().map(|(q, _)| q.clone()).collect();
        let d = random_prop_clause(&mut rng(s2), &preds, 3);
        let mut bigger = p.clone();
        bigger.clauses.push(d.into());
        let (a, b) = (analyze(&p), analyze(&bigger));
        for q in &a.predicates {
            let ca: ClauseSet = a.contexts.of(q).into_iter().collect();
            let cb: ClauseSet = b.contexts.of(q).into_iter().collect();
            prop_assert!(ca.is_subset(&cb));
            let sa: BTreeSet<_> = a.dependencies.get(q).into_iter().flatten().collect();
            let sb: BTreeSet<_> = b.dependencies.get(q).into_iter().flatten().collect();
            prop_assert!(sa.is_subset(&sb));
        }
    }
}

#[test]
fn validated_verdicts_are_sound() {
    let mut r = rng(0x5eed);
    let cases: Vec<_> = (0..600).map(|_| random_prop_case(&mut r, PropParams::default())).collect();
    let reports = oracle_all(&cases, 7, 3);
    let mut validated = 0;
    for (c, rep) in cases.iter().zip(reports) {
        let rep = rep.unwrap();
        validated += rep.validated as usize;
        assert!(rep.counterexamples.is_empty(), "{}\nfrom {}\ngoal {}\n{:?}", c.program.to_source(), c.from, c.goal, rep.counterexamples);
    }
    assert!(validated >= 50, "only {validated} validated cases");
}
