//! Abella developments for strengthening lemmas: context definitions,
//! membership and subcontext lemmas, the mutually inductive theorem and
//! the proof scripts, rendered as `.thm` text.

mod abella;
mod convert;
mod gen;
mod parse;
mod spec;

pub use abella::{render, AFormula, ATerm, AbellaArtifact, AbellaItem, DefClause, RenderError, Tactic};
pub use convert::Namer;
pub use gen::{
    build_development, ctx_name, gen_ctx_definition, gen_ctx_member_lemma, gen_stren_proof, gen_strengthening_conjunction,
    gen_subctx_lemma, gen_user_theorem_proof, subctx_name, Development, LemmaError, StrengtheningPlan,
};
pub use parse::{parse_abella, AbellaParseError};
pub use spec::{emit_mod, emit_sig};

#[cfg(test)]
mod tests;
