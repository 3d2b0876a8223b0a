//! Denotational semantics of CBPV in finite order-enriched models.

mod interp;
mod maps;
mod model;

pub use interp::{
    decode_env, elaborate, encode_env, interp_comp, interp_ctx, interp_ctype, interp_value, interp_vtype,
    Compiled,
};
pub use maps::{
    name_algebra, phi, psi, tonamehat, tonamehat_ctx, tovalue_ctx, value_carrier, value_comp_carrier,
};
pub use model::{DenotError, Model, ModelKind};
