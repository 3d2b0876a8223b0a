//! Call-by-push-value with recursion and finite nondeterminism: syntax,
//! typing, big-step evaluation, call-by-value and call-by-name
//! translations, the maps between them, and finite order-enriched models.

pub mod denot;
pub mod eval;
pub mod fresh;
pub mod galois;
pub mod harness;
pub mod order;
pub mod report;
pub mod sexpr;
pub mod source;
pub mod subst;
pub mod syntax;
pub mod text;
pub mod typing;
