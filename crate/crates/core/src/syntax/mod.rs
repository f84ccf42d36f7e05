//! Hereditary Harrop goal formulas and program clauses: abstract syntax,
//! the `.hh` concrete syntax, and clause normalization.

mod formula;
mod lexer;
mod parser;
pub(crate) mod print;
mod program;

use thiserror::Error;

use crate::kernel::KernelError;

pub use formula::{normalize_clause, Atom, Binder, Clause, Goal, Leaf, NoHead, NormalClause};
pub use lexer::Loc;
pub use parser::{parse_clause, parse_context_formula, parse_goal, parse_program};
pub use program::{predicates_of, Program, StrengthenDirective};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("clause {clause}: type error: {reason}")]
    Type { clause: usize, reason: String },
    #[error("{line}:{col}: non-rigid atom: {what}")]
    NonRigidAtom { line: usize, col: usize, what: String },
    #[error("{line}:{col}: unknown identifier `{name}`")]
    UnknownIdentifier { line: usize, col: usize, name: String },
    #[error("clause {clause}: not a program clause: {reason}")]
    NotAClause { clause: usize, reason: String },
    #[error("{line}:{col}: {source}")]
    Declaration { line: usize, col: usize, source: KernelError },
}

#[cfg(test)]
mod tests;
