//! Higher-order hereditary Harrop formulas: a typed lambda kernel, a bounded
//! focused proof-search engine, the dynamic-context and dependency analyses
//! behind strengthening lemmas, and an Abella development generator.

pub mod kernel;
pub mod syntax;
pub mod engine;
pub mod analysis;
pub mod lemma;
pub mod oracle;
pub mod random;
pub mod batch;
