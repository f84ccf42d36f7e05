use std::collections::{BTreeSet, HashSet};

use indexmap::{IndexMap, IndexSet};

use super::context::ContextMap;
use crate::kernel::Symbol;
use crate::syntax::{normalize_clause, Clause};

/// `S(target) ⊇ S(target) ∪ ⋃ S(includes_deps_of)`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DependencyConstraint {
    pub target: Symbol,
    pub includes_deps_of: Vec<Symbol>,
}

/// Predicate ↦ predicates whose provability its goals may depend on.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DependencyMap {
    cells: IndexMap<Symbol, IndexSet<Symbol>>,
}

impl DependencyMap {
    pub fn get(&self, a: &str) -> Option<&IndexSet<Symbol>> {
        self.cells.get(a)
    }

    pub fn depends(&self, a: &str, b: &str) -> bool {
        self.cells.get(a).is_some_and(|s| s.contains(b))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &IndexSet<Symbol>)> {
        self.cells.iter()
    }

    pub fn satisfies(&self, cs: &[DependencyConstraint]) -> bool {
        self.cells.iter().all(|(a, s)| s.contains(a))
            && cs.iter().all(|c| {
                let Some(target) = self.cells.get(&c.target) else { return false };
                c.includes_deps_of.iter().all(|p| self.cells.get(p).is_some_and(|s| s.is_subset(target)))
            })
    }
}

/// Head predicates of the atomic goals an antecedent reduces to.
pub(crate) fn antecedent_heads(d: &Clause) -> Vec<Symbol> {
    let mut heads: Vec<Symbol> = Vec::new();
    for g in normalize_clause(d).antecedents {
        for leaf in g.leaves() {
            if !heads.contains(&leaf.head) {
                heads.push(leaf.head);
            }
        }
    }
    heads
}

/// For every predicate `a` and every clause of `Γ ∪ C(a)` with head `a`, the
/// dependencies of `a` include those of the clause's antecedent heads.
pub fn collect_dependency_constraints<'a>(
    gamma: impl IntoIterator<Item = &'a Clause>,
    preds: &BTreeSet<Symbol>,
    ctx: &ContextMap,
) -> Vec<DependencyConstraint> {
    let gamma: Vec<&Clause> = gamma.into_iter().collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in preds {
        let dynamic = ctx.get(a).into_iter().flat_map(|s| s.iter());
        for d in gamma.iter().copied().chain(dynamic) {
            if d.head_pred() != a {
                continue;
            }
            let heads = antecedent_heads(d);
            if heads.is_empty() {
                continue;
            }
            let c = DependencyConstraint { target: a.clone(), includes_deps_of: heads };
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
    }
    out
}

/// Least map with `a ∈ S(a)` for every `a` in `preds`, closed under `cs`.
pub fn solve_dependency_fixpoint(cs: &[DependencyConstraint], preds: &BTreeSet<Symbol>) -> DependencyMap {
    let mut map = DependencyMap::default();
    let touch = |map: &mut DependencyMap, a: &Symbol| {
        map.cells.entry(a.clone()).or_insert_with(|| IndexSet::from([a.clone()]));
    };
    for a in preds {
        touch(&mut map, a);
    }
    for c in cs {
        touch(&mut map, &c.target);
        for p in &c.includes_deps_of {
            touch(&mut map, p);
        }
    }
    loop {
        let mut changed = false;
        for c in cs {
            let incoming: Vec<Symbol> = c.includes_deps_of.iter().flat_map(|p| map.cells[p].iter().cloned()).collect();
            let target = map.cells.get_mut(&c.target).unwrap();
            for p in incoming {
                changed |= target.insert(p);
            }
        }
        if !changed {
            return map;
        }
    }
}
