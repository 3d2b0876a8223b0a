//! Re-running a single recorded check instance.

use thiserror::Error;

use crate::denot::{DenotError, Model, ModelKind};
use crate::eval::{relate_programs, EvalError};
use crate::report::{CheckReport, Instance};
use crate::source::text::{parse_context, parse_expr, parse_type};
use crate::source::{SrcContext, SrcExpr, SrcType};
use crate::sexpr::ParseError;
use crate::text::parse_comp;

use super::checks::*;

#[derive(Debug, Error)]
pub enum ReproError {
    #[error("witness file is neither an instance nor a report carrying one: {0}")]
    Json(#[from] serde_json::Error),
    #[error("the report has no recorded instance")]
    NoInstance,
    #[error("{0}")]
    Model(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Denot(#[from] DenotError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Reads an [`Instance`], or a [`CheckReport`] whose witness records one.
pub fn parse_witness(json: &str) -> Result<Instance, ReproError> {
    if let Ok(instance) = serde_json::from_str::<Instance>(json) {
        return Ok(instance);
    }
    let report: CheckReport = serde_json::from_str(json)?;
    report.witness.and_then(|w| w.instance).ok_or(ReproError::NoInstance)
}

fn model(name: &str, budget: usize) -> Result<Model, ReproError> {
    let kind: ModelKind = name.parse().map_err(ReproError::Model)?;
    Ok(Model::new(kind, budget)?)
}

fn term(ctx: &str, expr: &str, ty: &str) -> Result<(SrcContext, SrcExpr, SrcType), ReproError> {
    Ok((parse_context(ctx)?, parse_expr(expr)?, parse_type(ty)?))
}

/// Runs the check the instance describes.
pub fn repro(instance: &Instance) -> Result<CheckReport, ReproError> {
    Ok(match instance {
        Instance::Relation {
            left,
            right,
            relation,
            fuel,
        } => relate_programs(&parse_comp(left)?, &parse_comp(right)?, *relation, *fuel)?,
        Instance::Corollary {
            expr,
            ty,
            relation,
            fuel,
        } => check_corollary(&parse_expr(expr)?, &parse_type(ty)?, *relation, *fuel),
        Instance::Operational { expr, ty, sig, fuel } => {
            check_operational(&parse_expr(expr)?, &parse_type(ty)?, *sig, *fuel)
        }
        Instance::ResultAgreement { expr, fuel } => check_result_agreement(&parse_expr(expr)?, *fuel),
        Instance::CrossValidation {
            model: m,
            budget,
            expr,
            ty,
            relation,
            fuel,
        } => check_cross_validation(
            &model(m, *budget)?,
            &parse_expr(expr)?,
            &parse_type(ty)?,
            *relation,
            *fuel,
        ),
        Instance::Galois { model: m, budget, ty } => check_galois(&model(m, *budget)?, &parse_type(ty)?),
        Instance::LaxIdempotent {
            model: m,
            budget,
            object,
        } => check_lax_idempotent(&model(m, *budget)?, &parse_type(object)?),
        Instance::Commutativity {
            model: m,
            budget,
            left,
            right,
        } => check_commutativity(&model(m, *budget)?, &parse_type(left)?, &parse_type(right)?),
        Instance::SideEffect {
            model: m,
            budget,
            domain,
            codomain,
            table,
        } => check_side_effect_axioms(&model(m, *budget)?, &parse_type(domain)?, &parse_type(codomain)?, table),
        Instance::MonadLaws { model: m, budget } => check_monad_laws(&model(m, *budget)?),
        Instance::AlgebraLaws { model: m, budget } => check_algebra_laws(&model(m, *budget)?),
        Instance::ConversePremise { model: m, budget } => check_converse_premise(&model(m, *budget)?),
        Instance::MainTheorem {
            model: m,
            budget,
            ctx,
            expr,
            ty,
        } => {
            let (c, e, t) = term(ctx, expr, ty)?;
            check_main_theorem(&model(m, *budget)?, &c, &e, &t)
        }
        Instance::FourEquivalences {
            model: m,
            budget,
            ctx,
            expr,
            ty,
        } => {
            let (c, e, t) = term(ctx, expr, ty)?;
            check_four_equivalences(&model(m, *budget)?, &c, &e, &t)
        }
        Instance::LtrRtl {
            model: m,
            budget,
            ctx,
            expr,
            ty,
        } => {
            let (c, e, t) = term(ctx, expr, ty)?;
            check_ltr_rtl(&model(m, *budget)?, &c, &e, &t, crate::harness::DEFAULT_FUEL)
        }
        Instance::MapsInterpretation {
            model: m,
            budget,
            ctx,
            expr,
            ty,
        } => {
            let (c, e, t) = term(ctx, expr, ty)?;
            check_maps_interpretation(&model(m, *budget)?, &c, &e, &t)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn galois_witness_reproduces() {
        let m = Model::with_default_budget(ModelKind::Writer);
        let ty = SrcType::arrow(SrcType::Bool, SrcType::Bool);
        let r = check_galois(&m, &ty);
        assert!(r.is_fail(), "{r}");
        let json = serde_json::to_string(&r).unwrap();
        let again = repro(&parse_witness(&json).unwrap()).unwrap();
        assert!(again.is_fail());
        assert_eq!(again.witness.unwrap().detail, r.witness.unwrap().detail);
    }

    #[test]
    fn bare_instance_parses() {
        let json = r#"{"kind":"galois","model":"lift","budget":8192,"ty":"bool"}"#;
        assert!(repro(&parse_witness(json).unwrap()).unwrap().is_pass());
    }
}
