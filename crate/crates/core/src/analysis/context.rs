use std::collections::{BTreeSet, HashSet, VecDeque};

use indexmap::IndexMap;

use crate::kernel::Symbol;
use crate::syntax::{normalize_clause, Clause};

/// Identity of a clause modulo α-equivalence of its normal form.
pub fn clause_id(d: &Clause) -> String {
    normalize_clause(d).to_clause().key()
}

/// An insertion-ordered set of clauses, compared modulo α-equivalence of normal forms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClauseSet {
    items: IndexMap<String, Clause>,
}

impl ClauseSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns whether `d` was new.
    pub fn insert(&mut self, d: Clause) -> bool {
        let id = clause_id(&d);
        if self.items.contains_key(&id) {
            return false;
        }
        self.items.insert(id, d);
        true
    }

    pub fn contains(&self, d: &Clause) -> bool {
        self.items.contains_key(&clause_id(d))
    }

    pub fn remove(&mut self, d: &Clause) -> bool {
        self.items.shift_remove(&clause_id(d)).is_some()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Clause> {
        self.items.values()
    }

    pub fn is_subset(&self, other: &ClauseSet) -> bool {
        self.items.keys().all(|k| other.items.contains_key(k))
    }

    fn extend_from(&mut self, other: &ClauseSet) -> bool {
        let mut changed = false;
        for (k, d) in &other.items {
            if !self.items.contains_key(k) {
                self.items.insert(k.clone(), d.clone());
                changed = true;
            }
        }
        changed
    }
}

impl FromIterator<Clause> for ClauseSet {
    fn from_iter<I: IntoIterator<Item = Clause>>(iter: I) -> Self {
        let mut s = ClauseSet::new();
        for d in iter {
            s.insert(d);
        }
        s
    }
}

/// `C(target) ⊇ C(target) ∪ ⋃ C(includes_context_of) ∪ includes_formulas`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextConstraint {
    pub target: Symbol,
    pub includes_context_of: Vec<Symbol>,
    pub includes_formulas: Vec<Clause>,
}

impl ContextConstraint {
    fn id(&self) -> (Symbol, Vec<Symbol>, Vec<String>) {
        (self.target.clone(), self.includes_context_of.clone(), self.includes_formulas.iter().map(clause_id).collect())
    }
}

/// Predicate ↦ clauses that may appear in the dynamic context of its goals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContextMap {
    cells: IndexMap<Symbol, ClauseSet>,
}

impl ContextMap {
    pub fn get(&self, a: &str) -> Option<&ClauseSet> {
        self.cells.get(a)
    }

    /// The cell for `a`, empty when `a` has none.
    pub fn of(&self, a: &str) -> Vec<Clause> {
        self.cells.get(a).map(|s| s.iter().cloned().collect()).unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &ClauseSet)> {
        self.cells.iter()
    }

    pub fn predicates(&self) -> impl Iterator<Item = &Symbol> {
        self.cells.keys()
    }

    pub fn cell_mut(&mut self, a: &Symbol) -> &mut ClauseSet {
        self.cells.entry(a.clone()).or_default()
    }

    /// Is every constraint satisfied by this map?
    pub fn satisfies(&self, cs: &[ContextConstraint]) -> bool {
        let empty = ClauseSet::new();
        cs.iter().all(|c| {
            let target = self.cells.get(&c.target).unwrap_or(&empty);
            c.includes_formulas.iter().all(|d| target.contains(d))
                && c.includes_context_of.iter().all(|p| self.cells.get(p).unwrap_or(&empty).is_subset(target))
        })
    }
}

/// Worklist over the static context: every antecedent leaf of a clause gets the context
/// of the clause head plus the assumptions added on the way to that leaf, and the
/// assumptions are themselves processed as clauses.
pub fn collect_context_constraints<'a>(gamma: impl IntoIterator<Item = &'a Clause>) -> Vec<ContextConstraint> {
    let mut queue: VecDeque<Clause> = gamma.into_iter().cloned().collect();
    let mut seen: HashSet<String> = HashSet::new();
    let mut emitted: HashSet<(Symbol, Vec<Symbol>, Vec<String>)> = HashSet::new();
    let mut out = Vec::new();
    while let Some(d) = queue.pop_front() {
        if !seen.insert(clause_id(&d)) {
            continue;
        }
        let nd = normalize_clause(&d);
        for g in &nd.antecedents {
            for leaf in g.leaves() {
                let c = ContextConstraint {
                    target: leaf.head.clone(),
                    includes_context_of: vec![nd.head.pred.clone()],
                    includes_formulas: leaf.assumptions.clone(),
                };
                if emitted.insert(c.id()) {
                    out.push(c);
                }
                queue.extend(leaf.assumptions);
            }
        }
    }
    out
}

/// Least map over `preds` containing `seed` in every cell and closed under `cs`.
/// Constraints are applied round-robin in order until a full pass adds nothing.
pub fn solve_context_fixpoint(cs: &[ContextConstraint], preds: &BTreeSet<Symbol>, seed: &ClauseSet) -> ContextMap {
    let mut map = ContextMap::default();
    for a in preds {
        map.cells.insert(a.clone(), seed.clone());
    }
    for c in cs {
        map.cell_mut(&c.target);
        for p in &c.includes_context_of {
            map.cell_mut(p);
        }
    }
    loop {
        let mut changed = false;
        for c in cs {
            let mut incoming = ClauseSet::new();
            for p in &c.includes_context_of {
                incoming.extend_from(&map.cells[p]);
            }
            for d in &c.includes_formulas {
                incoming.insert(d.clone());
            }
            changed |= map.cell_mut(&c.target).extend_from(&incoming);
        }
        if !changed {
            return map;
        }
    }
}
