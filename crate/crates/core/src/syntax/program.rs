use std::collections::BTreeSet;
use std::sync::Arc;

use indexmap::IndexMap;

use super::parser::{parse_clause, parse_context_formula, parse_goal};
use super::{Atom, Clause, Goal, ParseError};
use crate::kernel::{Signature, Symbol};

/// `%strengthen <ctx> from <clause> in <goal>.`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrengthenDirective {
    pub context: Symbol,
    pub from: Clause,
    pub goal: Goal,
}

/// A signature with its static context, plus any request directives found in the file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub signature: Signature,
    pub clauses: Vec<Arc<Clause>>,
    /// User context definitions from `%context <name> <formula>.` lines, in file order.
    pub contexts: IndexMap<Symbol, Vec<Clause>>,
    pub strengthen: Option<StrengthenDirective>,
}

impl Program {
    pub fn new(signature: Signature, clauses: Vec<Clause>) -> Self {
        Program { signature, clauses: clauses.into_iter().map(Arc::new).collect(), ..Default::default() }
    }

    /// Predicates occurring as clause heads or inside goals, anywhere in the clauses.
    pub fn predicates(&self) -> BTreeSet<Symbol> {
        predicates_of(self.clauses.iter().map(|c| &**c))
    }

    pub fn clauses_for<'a>(&'a self, pred: &'a Symbol) -> impl Iterator<Item = &'a Arc<Clause>> + 'a {
        self.clauses.iter().filter(move |c| c.head_pred() == pred)
    }

    pub fn parse_goal(&self, text: &str) -> Result<Goal, ParseError> {
        parse_goal(&self.signature, text)
    }

    pub fn parse_clause(&self, text: &str) -> Result<Clause, ParseError> {
        parse_clause(&self.signature, text)
    }

    pub fn parse_context_formula(&self, text: &str) -> Result<Clause, ParseError> {
        parse_context_formula(&self.signature, text)
    }

    /// Concrete syntax that parses back to this program.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        for k in self.signature.kinds() {
            out.push_str(&format!("kind {k} type.\n"));
        }
        for (c, t) in self.signature.constants() {
            out.push_str(&format!("type {c} {t}.\n"));
        }
        if !self.clauses.is_empty() {
            out.push('\n');
        }
        for c in &self.clauses {
            out.push_str(&format!("{c}.\n"));
        }
        for (name, fs) in &self.contexts {
            if fs.is_empty() {
                out.push_str(&format!("%context {name}.\n"));
            }
            for f in fs {
                out.push_str(&format!("%context {name} {f}.\n"));
            }
        }
        if let Some(s) = &self.strengthen {
            out.push_str(&format!("%strengthen {} from {} in {}.\n", s.context, s.from, s.goal));
        }
        out
    }
}

pub fn predicates_of<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> BTreeSet<Symbol> {
    let mut atoms: Vec<&Atom> = Vec::new();
    let cs: Vec<&Clause> = clauses.into_iter().collect();
    for c in &cs {
        c.atoms(&mut atoms);
    }
    atoms.into_iter().map(|a| a.pred.clone()).collect()
}
