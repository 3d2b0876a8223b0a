//! Generators and property suites over the translations and models.

pub mod checks;
pub mod gen;
pub mod repro;
pub mod suite;

pub use checks::*;
pub use gen::{gen_corpus, gen_expr, gen_item, standard_contexts, CorpusItem, GenConfig, TypeWeights};
pub use repro::{parse_witness, repro, ReproError};
pub use suite::{run_item, run_suite, SuiteConfig, SuiteReport, Tally, DEFAULT_FUEL};
