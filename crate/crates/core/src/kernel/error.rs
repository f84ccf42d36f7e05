use thiserror::Error;

use super::{Symbol, Ty};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(Symbol),
    #[error("type mismatch in `{term}`: expected {expected}, found {found}")]
    TypeMismatch { term: String, expected: Ty, found: Ty },
    #[error("`{term}` has type {ty} and cannot be applied")]
    NotAFunction { term: String, ty: Ty },
    #[error("binder `{name}` is annotated {annotated} but used at {used}")]
    AnnotationConflict { name: Symbol, annotated: Ty, used: Ty },
    #[error("identifier `{0}` is already declared")]
    Duplicate(Symbol),
    #[error("type name `{0}` is reserved")]
    ReservedType(Symbol),
    #[error("unknown type `{0}`")]
    UnknownType(Symbol),
    #[error("dangling bound variable #{0}")]
    Dangling(u32),
}
