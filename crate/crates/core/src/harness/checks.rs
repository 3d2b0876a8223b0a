//! Individual property checks. Each returns a [`CheckReport`]; a failing
//! report carries an [`Instance`] that re-runs exactly that check.
//!
//! Checks over carriers larger than the model's budget report
//! [`Verdict::Skipped`](crate::report::Verdict::Skipped) rather than
//! failing.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::denot::{
    interp_comp, phi, psi, tonamehat_ctx, tovalue_ctx, value_carrier,
    value_comp_carrier, DenotError, Model,
};
use crate::eval::{eval, relate_programs, results, EvalError};
use crate::fresh;
use crate::galois::{rhs_term, to_name, to_value};
use crate::order::{Algebra, MonotoneMap, OrderError, Poset};
use crate::report::{CheckReport, Instance, ProgramRelation, Verdict};
use crate::source::text::{print_context, print_expr, print_type};
use crate::source::{
    cbn_ctx, cbn_translate, cbv_ctx, cbv_translate, rtl_translate, SrcContext, SrcExpr, SrcType,
};
use crate::syntax::{CompType, EffectSignature, Ident};
use crate::text::print_comp;
use crate::typing::{check_comp_any, TypingContext};

/// Outcome of the body of a model check: `Ok(None)` passes, `Ok(Some(_))`
/// fails with the given detail.
type Outcome = Result<Option<String>, DenotError>;

fn finish(name: String, instance: Instance, started: Instant, outcome: Outcome) -> CheckReport {
    let report = match outcome {
        Ok(None) => CheckReport::pass(name),
        Ok(Some(detail)) => CheckReport::fail(name, Some(instance), detail),
        Err(e) if e.is_over_budget() => CheckReport::skipped(name, format!("over budget: {e}")),
        Err(e @ DenotError::EffectUnsupported { .. }) => CheckReport::skipped(name, e.to_string()),
        Err(e) => CheckReport::fail(name, Some(instance), e.to_string()),
    };
    report.with_elapsed(started.elapsed())
}

fn translations(e: &SrcExpr) -> (crate::syntax::CompTerm, crate::syntax::CompTerm) {
    fresh::scoped(|| (cbv_translate(e), cbn_translate(e)))
}

fn model_fields(model: &Model) -> (String, usize) {
    (model.name().to_string(), model.budget())
}

/// First element at which `Tη_X ⋢ η_{TX}`, with both sides rendered.
pub fn lax_idempotence_violation(model: &Model, x: &Poset) -> Outcome {
    let b = model.budget();
    let m = model.monad();
    let eta = m.unit(x, b)?;
    let t_eta = m.fmap(&eta, b)?;
    let eta_t = m.unit(eta.cod(), b)?;
    Ok(t_eta.leq_violation(&eta_t)?.map(|t| {
        format!(
            "at {}: Tη gives {} but η_T gives {}",
            eta.cod().label(t),
            t_eta.cod().label(t_eta.apply(t)),
            eta_t.cod().label(eta_t.apply(t))
        )
    }))
}

/// `Tη ⊑ η_T` on `⟦ty⟧v`.
pub fn check_lax_idempotent(model: &Model, ty: &SrcType) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("lax_idempotent[{m}:{}]", print_type(ty));
    let instance = Instance::LaxIdempotent {
        model: m,
        budget,
        object: print_type(ty),
    };
    let outcome = value_carrier(ty, model).and_then(|x| lax_idempotence_violation(model, &x));
    finish(name, instance, started, outcome)
}

/// `φ ∘ ψ ⊑ id` and `id ⊑ ψ ∘ φ`, pointwise.
pub fn check_galois(model: &Model, ty: &SrcType) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("galois[{m}:{}]", print_type(ty));
    let instance = Instance::Galois {
        model: m,
        budget,
        ty: print_type(ty),
    };
    let mut sizes = Vec::new();
    let outcome = (|| -> Outcome {
        let p = phi(ty, model)?;
        let q = psi(ty, model)?;
        sizes.push(("T⟦τ⟧v".to_string(), p.dom().size()));
        sizes.push(("U⟦τ⟧n".to_string(), q.dom().size()));
        let n = q.dom();
        for u in n.elements() {
            let back = p.apply(q.apply(u));
            if !n.leq(back, u) {
                return Ok(Some(format!(
                    "φ∘ψ ⋢ id at {}: φ(ψ(u)) = {}",
                    n.label(u),
                    n.label(back)
                )));
            }
        }
        Ok(unit_violation(&p, &q))
    })();
    let mut report = finish(name, instance, started, outcome);
    for (label, size) in sizes {
        report = report.with_carrier(label, size);
    }
    report
}

/// `⟦e⟧v ⊑ ψ ∘ ⟦e⟧n ∘ η̂_Γ`, pointwise over `⟦Γ⟧v`. A passing report
/// notes whether the inequality is strict somewhere.
pub fn check_main_theorem(model: &Model, ctx: &SrcContext, e: &SrcExpr, ty: &SrcType) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("main_theorem[{m}]");
    let instance = Instance::MainTheorem {
        model: m,
        budget,
        ctx: print_context(ctx),
        expr: print_expr(e),
        ty: print_type(ty),
    };
    let mut strict = None;
    let outcome = (|| -> Outcome {
        let (v, n) = translations(e);
        let f = interp_comp(&cbv_ctx(ctx), &v, model)?;
        let g = interp_comp(&cbn_ctx(ctx), &n, model)?;
        let hat = tonamehat_ctx(ctx, model)?;
        let q = psi(ty, model)?;
        let tv = f.cod();
        for rho in f.dom().elements() {
            let left = f.apply(rho);
            let right = q.apply(g.apply(hat.apply(rho)));
            let at = f.dom().label(rho);
            if !tv.leq(left, right) {
                return Ok(Some(format!(
                    "at {at}: left {} ⋢ right {}",
                    tv.label(left),
                    tv.label(right)
                )));
            }
            if left != right && strict.is_none() {
                strict = Some(format!("strict at {at}: left {}, right {}", tv.label(left), tv.label(right)));
            }
        }
        Ok(None)
    })();
    let report = finish(name, instance, started, outcome);
    match strict {
        Some(note) if report.is_pass() => report.with_note(note),
        _ => report,
    }
}

/// The main-theorem inequality on one expression, with both sides at
/// each environment, rendered as labels.
pub fn main_theorem_sides(
    model: &Model,
    ctx: &SrcContext,
    e: &SrcExpr,
    ty: &SrcType,
) -> Result<Vec<(String, String, String)>, DenotError> {
    let (v, n) = translations(e);
    let f = interp_comp(&cbv_ctx(ctx), &v, model)?;
    let g = interp_comp(&cbn_ctx(ctx), &n, model)?;
    let hat = tonamehat_ctx(ctx, model)?;
    let q = psi(ty, model)?;
    Ok(f.dom()
        .elements()
        .map(|rho| {
            (
                f.dom().label(rho),
                f.cod().label(f.apply(rho)),
                f.cod().label(q.apply(g.apply(hat.apply(rho)))),
            )
        })
        .collect())
}

fn eval_failure(name: &str, instance: Instance, err: EvalError) -> CheckReport {
    CheckReport::fail(name, Some(instance), err.to_string())
}

/// Relates the call-by-value and call-by-name translations of a closed
/// ground expression operationally.
pub fn check_corollary(e: &SrcExpr, ty: &SrcType, rel: ProgramRelation, fuel: u64) -> CheckReport {
    let started = Instant::now();
    let name = format!("corollary[{rel}]");
    let instance = Instance::Corollary {
        expr: print_expr(e),
        ty: print_type(ty),
        relation: rel,
        fuel,
    };
    if !matches!(ty, SrcType::Bool | SrcType::Unit) {
        return CheckReport::skipped(name, "only ground types are related");
    }
    let (v, n) = translations(e);
    let report = match relate_programs(&v, &n, rel, fuel) {
        Ok(mut r) => {
            r.name = name;
            if r.witness.is_some() {
                r = r.with_instance(instance);
            }
            r
        }
        Err(err) => eval_failure(&name, instance, err),
    };
    report.with_elapsed(started.elapsed())
}

/// On pure programs: the call-by-value, call-by-name and right-to-left
/// translations each return exactly one value, the same one.
pub fn check_result_agreement(e: &SrcExpr, fuel: u64) -> CheckReport {
    let started = Instant::now();
    let name = "result_agreement".to_string();
    let instance = Instance::ResultAgreement {
        expr: print_expr(e),
        fuel,
    };
    let terms = fresh::scoped(|| [cbv_translate(e), cbn_translate(e), rtl_translate(e)]);
    let mut sets = Vec::new();
    for t in &terms {
        match results(t, fuel) {
            Ok(r) => sets.push(r),
            Err(err) => return eval_failure(&name, instance, err),
        }
    }
    let rendered: Vec<String> = sets.iter().map(|r| r.render()).collect();
    let detail = format!("cbv {}, cbn {}, rtl {}", rendered[0], rendered[1], rendered[2]);
    let report = if sets.iter().any(|r| r.exhausted) {
        CheckReport::inconclusive(name, detail)
    } else if sets.iter().all(|r| r.values.len() == 1 && r.values == sets[0].values) {
        CheckReport::pass(name)
    } else {
        CheckReport::fail(name, Some(instance), detail)
    };
    report.with_elapsed(started.elapsed())
}

/// Cross-validation: when the main theorem holds for a closed ground
/// expression, the operational relation between its call-by-value
/// translation and the converted call-by-name side must not fail.
pub fn check_cross_validation(
    model: &Model,
    e: &SrcExpr,
    ty: &SrcType,
    rel: ProgramRelation,
    fuel: u64,
) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("cross_validation[{m}]");
    let instance = Instance::CrossValidation {
        model: m,
        budget,
        expr: print_expr(e),
        ty: print_type(ty),
        relation: rel,
        fuel,
    };
    let semantic = check_main_theorem(model, &SrcContext::empty(), e, ty);
    if !semantic.is_pass() {
        return CheckReport::skipped(name, format!("semantic side is {}", semantic.verdict));
    }
    let (v, rhs) = fresh::scoped(|| (cbv_translate(e), rhs_term(&SrcContext::empty(), e, ty)));
    let report = match relate_programs(&v, &rhs, rel, fuel) {
        Ok(mut r) => {
            r.name = name;
            if r.is_fail() {
                r = r.with_instance(instance);
            }
            r
        }
        Err(err) => eval_failure(&name, instance, err),
    };
    report.with_elapsed(started.elapsed())
}

/// The four inequalities, as booleans, plus a rendered violation for each
/// one that fails.
pub fn four_inequalities(
    model: &Model,
    ctx: &SrcContext,
    e: &SrcExpr,
    ty: &SrcType,
) -> Result<[Option<String>; 4], DenotError> {
    let monad = model.monad();
    let (v, n) = translations(e);
    let f = interp_comp(&cbv_ctx(ctx), &v, model)?;
    let g = interp_comp(&cbn_ctx(ctx), &n, model)?;
    let hat = tonamehat_ctx(ctx, model)?;
    let psi_ctx = tovalue_ctx(ctx, model)?;
    let p = phi(ty, model)?;
    let q = psi(ty, model)?;
    let tgamma = psi_ctx.cod().clone();
    let tv = f.cod().clone();
    let un = g.cod().clone();
    let fdag = |t: u32| monad.bind(&tgamma, &tv, t, &|rho| f.apply(rho));
    let report = |i: usize, at: String, l: String, r: String| Some(format!("({i}) at {at}: {l} ⋢ {r}"));

    let mut out: [Option<String>; 4] = [None, None, None, None];
    for rho in f.dom().elements() {
        let at = || f.dom().label(rho);
        // (1) f ⊑ ψ ∘ g ∘ η̂_Γ
        let l1 = f.apply(rho);
        let r1 = q.apply(g.apply(hat.apply(rho)));
        if out[0].is_none() && !tv.leq(l1, r1) {
            out[0] = report(1, at(), tv.label(l1), tv.label(r1));
        }
        // (2) φ ∘ f ⊑ g ∘ η̂_Γ
        let l2 = p.apply(l1);
        let r2 = g.apply(hat.apply(rho));
        if out[1].is_none() && !un.leq(l2, r2) {
            out[1] = report(2, at(), un.label(l2), un.label(r2));
        }
    }
    for c in g.dom().elements() {
        let at = || g.dom().label(c);
        let lifted = fdag(psi_ctx.apply(c));
        // (3) φ ∘ f† ∘ ψ_Γ ⊑ g
        let l3 = p.apply(lifted);
        let r3 = g.apply(c);
        if out[2].is_none() && !un.leq(l3, r3) {
            out[2] = report(3, at(), un.label(l3), un.label(r3));
        }
        // (4) f† ∘ ψ_Γ ⊑ ψ ∘ g
        let r4 = q.apply(r3);
        if out[3].is_none() && !tv.leq(lifted, r4) {
            out[3] = report(4, at(), tv.label(lifted), tv.label(r4));
        }
    }
    Ok(out)
}

/// All four equivalent forms of the reasoning principle hold, on models
/// whose monad passes the lax-idempotence gate.
pub fn check_four_equivalences(model: &Model, ctx: &SrcContext, e: &SrcExpr, ty: &SrcType) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("four_equivalences[{m}]");
    let instance = Instance::FourEquivalences {
        model: m,
        budget,
        ctx: print_context(ctx),
        expr: print_expr(e),
        ty: print_type(ty),
    };
    match lax_gate(model, ty) {
        Ok(None) => {}
        Ok(Some(detail)) => return CheckReport::skipped(name, format!("model is not lax idempotent: {detail}")),
        Err(err) => return finish(name, instance, started, Err(err)),
    }
    let outcome = four_inequalities(model, ctx, e, ty).map(|res| {
        let failing: Vec<String> = res.iter().flatten().cloned().collect();
        match failing.len() {
            0 => None,
            4 => Some(format!("all four fail: {}", failing.join("; "))),
            _ => Some(format!("the inequalities disagree: {}", failing.join("; "))),
        }
    });
    finish(name, instance, started, outcome)
}

/// Lax idempotence at `2` and, when within budget, at `⟦ty⟧v`.
fn lax_gate(model: &Model, ty: &SrcType) -> Outcome {
    if let Some(d) = lax_idempotence_violation(model, &Poset::two())? {
        return Ok(Some(d));
    }
    match value_carrier(ty, model).and_then(|x| lax_idempotence_violation(model, &x)) {
        Err(e) if e.is_over_budget() => Ok(None),
        other => other,
    }
}

/// `⟦syntactic map⟧ = semantic map ∘ ⟦term⟧` for both directions.
pub fn check_maps_interpretation(model: &Model, ctx: &SrcContext, e: &SrcExpr, ty: &SrcType) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("maps_interpretation[{m}]");
    let instance = Instance::MapsInterpretation {
        model: m,
        budget,
        ctx: print_context(ctx),
        expr: print_expr(e),
        ty: print_type(ty),
    };
    let outcome = (|| -> Outcome {
        let (v, n) = translations(e);
        let (named, valued) = fresh::scoped(|| (to_name(ty, &v), to_value(ty, &n)));
        let vctx = cbv_ctx(ctx);
        let nctx = cbn_ctx(ctx);
        let left = interp_comp(&vctx, &named, model)?;
        let right = phi(ty, model)?.compose(&interp_comp(&vctx, &v, model)?)?;
        if let Some(rho) = first_difference(&left, &right) {
            return Ok(Some(format!(
                "toname at {}: {} ≠ φ∘⟦M⟧ = {}",
                left.dom().label(rho),
                left.cod().label(left.apply(rho)),
                left.cod().label(right.apply(rho))
            )));
        }
        let left = interp_comp(&nctx, &valued, model)?;
        let right = psi(ty, model)?.compose(&interp_comp(&nctx, &n, model)?)?;
        if let Some(rho) = first_difference(&left, &right) {
            return Ok(Some(format!(
                "tovalue at {}: {} ≠ ψ∘⟦N⟧ = {}",
                left.dom().label(rho),
                left.cod().label(left.apply(rho)),
                left.cod().label(right.apply(rho))
            )));
        }
        Ok(None)
    })();
    finish(name, instance, started, outcome)
}

fn first_difference(a: &MonotoneMap, b: &MonotoneMap) -> Option<u32> {
    a.dom().elements().find(|&x| a.apply(x) != b.apply(x))
}

/// `⟦e⟧` under left-to-right and right-to-left call-by-value agree;
/// for closed ground programs the result sets agree as well.
pub fn check_ltr_rtl(model: &Model, ctx: &SrcContext, e: &SrcExpr, ty: &SrcType, fuel: u64) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("ltr_rtl[{m}]");
    let instance = Instance::LtrRtl {
        model: m,
        budget,
        ctx: print_context(ctx),
        expr: print_expr(e),
        ty: print_type(ty),
    };
    let outcome = (|| -> Outcome {
        let (l, r) = fresh::scoped(|| (cbv_translate(e), rtl_translate(e)));
        let vctx = cbv_ctx(ctx);
        let dl = interp_comp(&vctx, &l, model)?;
        let dr = interp_comp(&vctx, &r, model)?;
        if let Some(rho) = first_difference(&dl, &dr) {
            return Ok(Some(format!(
                "at {}: left-to-right {} ≠ right-to-left {}",
                dl.dom().label(rho),
                dl.cod().label(dl.apply(rho)),
                dl.cod().label(dr.apply(rho))
            )));
        }
        if ctx.is_empty() && matches!(ty, SrcType::Bool | SrcType::Unit) {
            if let (Ok(a), Ok(b)) = (results(&l, fuel), results(&r, fuel)) {
                if !a.exhausted && !b.exhausted && a.values != b.values {
                    return Ok(Some(format!(
                        "results differ: left-to-right {}, right-to-left {}",
                        a.render(),
                        b.render()
                    )));
                }
            }
        }
        Ok(None)
    })();
    finish(name, instance, started, outcome)
}

/// `seq = seqr` on `T⟦ty1⟧v × T⟦ty2⟧v`, from the literal constructions.
pub fn check_commutativity(model: &Model, ty1: &SrcType, ty2: &SrcType) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("commutativity[{m}:{},{}]", print_type(ty1), print_type(ty2));
    let instance = Instance::Commutativity {
        model: m,
        budget,
        left: print_type(ty1),
        right: print_type(ty2),
    };
    let outcome = (|| -> Outcome {
        let b = model.budget();
        let x1 = value_carrier(ty1, model)?;
        let x2 = value_carrier(ty2, model)?;
        let s = model.monad().seq(&x1, &x2, b)?;
        let r = model.monad().seqr(&x1, &x2, b)?;
        Ok(first_difference(&s, &r).map(|i| {
            format!(
                "at {}: seq gives {} but seqr gives {}",
                s.dom().label(i),
                s.cod().label(s.apply(i)),
                s.cod().label(r.apply(i))
            )
        }))
    })();
    finish(name, instance, started, outcome)
}

pub const SIDE_EFFECT_AXIOMS: [&str; 3] = ["discardable", "copyable", "thunkable"];

/// For `f : X → TY`, the first violation of each lax side-effect axiom:
/// `T! ∘ f ⊑ η₁ ∘ !`, `T⟨id,id⟩ ∘ f ⊑ seq ∘ ⟨f,f⟩` and `Tη ∘ f ⊑ η_T ∘ f`.
pub fn side_effect_violations(model: &Model, f: &MonotoneMap) -> Result<[Option<String>; 3], DenotError> {
    let b = model.budget();
    let m = model.monad();
    let x = f.dom();
    let y = m.base_of(f.cod());
    let describe = |l: &MonotoneMap, r: &MonotoneMap| -> Result<Option<String>, DenotError> {
        Ok(l.leq_violation(r)?.map(|a| {
            format!(
                "at {}: {} ⋢ {}",
                x.label(a),
                l.cod().label(l.apply(a)),
                r.cod().label(r.apply(a))
            )
        }))
    };
    let one = Poset::terminal();
    let discard_l = m.fmap(&MonotoneMap::terminal(&y), b)?.compose(f)?;
    let discard_r = m.unit(&one, b)?.compose(&MonotoneMap::terminal(x))?;
    let id = MonotoneMap::identity(&y);
    let diag = MonotoneMap::pairing(&id, &id, b)?;
    let copy_l = m.fmap(&diag, b)?.compose(f)?;
    let copy_r = m.seq(&y, &y, b)?.compose(&MonotoneMap::pairing(f, f, b)?)?;
    let thunk_l = m.fmap(&m.unit(&y, b)?, b)?.compose(f)?;
    let thunk_r = m.unit(f.cod(), b)?.compose(f)?;
    Ok([
        describe(&discard_l, &discard_r)?,
        describe(&copy_l, &copy_r)?,
        describe(&thunk_l, &thunk_r)?,
    ])
}

/// The side-effect axioms for the map `⟦dom⟧v → T⟦cod⟧v` with the given
/// table.
pub fn check_side_effect_axioms(model: &Model, dom: &SrcType, cod: &SrcType, table: &[u32]) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("side_effect_axioms[{m}:{}→T{}]", print_type(dom), print_type(cod));
    let instance = Instance::SideEffect {
        model: m,
        budget,
        domain: print_type(dom),
        codomain: print_type(cod),
        table: table.to_vec(),
    };
    let outcome = (|| -> Outcome {
        let x = value_carrier(dom, model)?;
        let ty = value_comp_carrier(cod, model)?;
        let f = MonotoneMap::new(&x, &ty, table.to_vec())?;
        let v = side_effect_violations(model, &f)?;
        let failing: Vec<String> = SIDE_EFFECT_AXIOMS
            .iter()
            .zip(&v)
            .filter_map(|(ax, d)| d.as_ref().map(|d| format!("{ax} {d}")))
            .collect();
        Ok((!failing.is_empty()).then(|| failing.join("; ")))
    })();
    finish(name, instance, started, outcome)
}

/// Every monotone map `⟦dom⟧v → T⟦cod⟧v`, one report each.
pub fn side_effect_suite(model: &Model, dom: &SrcType, cod: &SrcType) -> Vec<CheckReport> {
    let maps = value_carrier(dom, model)
        .and_then(|x| Ok((x.clone(), value_comp_carrier(cod, model)?)))
        .and_then(|(x, ty)| Ok(MonotoneMap::enumerate(&x, &ty, model.budget())?));
    match maps {
        Ok(maps) => maps
            .iter()
            .map(|f| check_side_effect_axioms(model, dom, cod, f.table()))
            .collect(),
        Err(e) => vec![CheckReport::skipped(
            format!("side_effect_axioms[{}]", model.name()),
            e.to_string(),
        )],
    }
}

/// Test objects for the law suites.
fn law_objects() -> Vec<Poset> {
    vec![Poset::terminal(), Poset::two(), Poset::chain(2)]
}

/// Up to `limit` maps `dom → cod`, spread evenly over the enumeration.
/// Up to `limit` maps `dom → cod`: evenly spaced through the hom-set when
/// it fits the budget, otherwise the constant maps followed by seeded
/// random draws.
fn sample_maps(dom: &Poset, cod: &Poset, limit: usize, budget: usize) -> Result<Vec<MonotoneMap>, DenotError> {
    match MonotoneMap::enumerate(dom, cod, budget) {
        Ok(all) if all.len() <= limit => Ok(all),
        Ok(all) => {
            let step = all.len() as f64 / limit as f64;
            Ok((0..limit).map(|i| all[(i as f64 * step) as usize].clone()).collect())
        }
        Err(OrderError::SizeBudgetExceeded { .. }) => {
            let mut out: Vec<MonotoneMap> = cod
                .elements()
                .take(limit / 2)
                .map(|c| MonotoneMap::constant(dom, cod, c))
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
            for _ in 0..limit * 8 {
                if out.len() >= limit {
                    break;
                }
                if let Some(f) = MonotoneMap::random(dom, cod, &mut rng) {
                    if !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}

const SAMPLE_SEED: u64 = 0x005e_ed0f_1a75;
const LAW_SAMPLE: usize = 24;

/// The three strong-monad laws on the law objects.
pub fn check_monad_laws(model: &Model) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("monad_laws[{m}]");
    let instance = Instance::MonadLaws { model: m, budget };
    let mut count = 0usize;
    let outcome = (|| -> Outcome {
        let b = model.budget();
        let monad = model.monad();
        let objs = law_objects();
        for w in &objs {
            for x in &objs {
                for y in &objs {
                    let ty = monad.obj(y, b)?;
                    let wx = Poset::product(w, x, b)?;
                    let eta_x = monad.unit(x, b)?;
                    let w_eta = MonotoneMap::product_map(&MonotoneMap::identity(w), &eta_x, b)?;
                    let fs = sample_maps(&wx, &ty, LAW_SAMPLE, b)?;
                    for f in &fs {
                        count += 1;
                        let ext = monad.extend(f, b)?;
                        if ext.compose(&w_eta)? != *f {
                            return Ok(Some(format!("extend f ∘ (W×η) ≠ f for f = {:?}", f.table())));
                        }
                    }
                    // Associativity with W' = w, W = x, X = y, Y = w, Z = x.
                    let (w2, w1, x0, y0, z0) = (w, x, y, w, x);
                    let f_dom = Poset::product(w1, x0, b)?;
                    let ty0 = monad.obj(y0, b)?;
                    let g_dom = Poset::product(w2, y0, b)?;
                    let tz = monad.obj(z0, b)?;
                    let fs = sample_maps(&f_dom, &ty0, 8, b)?;
                    let gs = sample_maps(&g_dom, &tz, 8, b)?;
                    let assoc_x = MonotoneMap::assoc(w2, w1, x0, b)?;
                    let tx0 = monad.obj(x0, b)?;
                    let assoc_tx = MonotoneMap::assoc(w2, w1, &tx0, b)?;
                    for f in &fs {
                        let ext_f = monad.extend(f, b)?;
                        let w_f = MonotoneMap::product_map(&MonotoneMap::identity(w2), f, b)?;
                        let w_ext_f = MonotoneMap::product_map(&MonotoneMap::identity(w2), &ext_f, b)?;
                        for g in &gs {
                            count += 1;
                            let ext_g = monad.extend(g, b)?;
                            let lhs = monad.extend(&ext_g.compose(&w_f)?.compose(&assoc_x)?, b)?;
                            let rhs = ext_g.compose(&w_ext_f)?.compose(&assoc_tx)?;
                            if lhs != rhs {
                                return Ok(Some(format!(
                                    "associativity fails for f = {:?}, g = {:?}",
                                    f.table(),
                                    g.table()
                                )));
                            }
                        }
                    }
                }
            }
            // extend(η ∘ π₂) = π₂ on 1 × TX
            let one = Poset::terminal();
            let prod = Poset::product(&one, w, b)?;
            let eta_pi = monad.unit(w, b)?.compose(&MonotoneMap::proj2(&prod)?)?;
            let ext = monad.extend(&eta_pi, b)?;
            count += 1;
            if ext != MonotoneMap::proj2(ext.dom())? {
                return Ok(Some(format!("extend(η∘π₂) ≠ π₂ at X = {w}")));
            }
        }
        Ok(None)
    })();
    let mut report = finish(name, instance, started, outcome);
    report.stats.instances = count;
    report
}

/// The algebra laws for free, product and exponential algebras, using the
/// literal extension formulas, and agreement with the pointwise route.
pub fn check_algebra_laws(model: &Model) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("algebra_laws[{m}]");
    let instance = Instance::AlgebraLaws { model: m, budget };
    let mut count = 0usize;
    let outcome = (|| -> Outcome {
        let b = model.budget();
        let monad = model.monad();
        let two = Poset::two();
        let f2 = Algebra::free(monad, &two, b)?;
        let mut algebras = vec![
            f2.clone(),
            Algebra::product(&f2, &f2, b)?,
            Algebra::exponential(&two, &f2, b)?,
        ];
        if let Ok(nested) = Algebra::exponential(&Poset::chain(2), &Algebra::product(&f2, &f2, b)?, b) {
            algebras.push(nested);
        }
        let ws = [Poset::terminal(), Poset::chain(2)];
        let x = two.clone();
        let tx = monad.obj(&x, b)?;
        for alg in &algebras {
            let z = alg.carrier();
            for w in &ws {
                let wx = Poset::product(w, &x, b)?;
                let w_eta = MonotoneMap::product_map(&MonotoneMap::identity(w), &monad.unit(&x, b)?, b)?;
                for f in sample_maps(&wx, z, LAW_SAMPLE, b)? {
                    count += 1;
                    let ext = alg.extend(&f, b)?;
                    if ext.compose(&w_eta)? != f {
                        return Ok(Some(format!("algextend f ∘ (W×η) ≠ f in {}", alg.carrier())));
                    }
                    for i in ext.dom().elements() {
                        let (a, t) = ext.dom().unpair(i);
                        if alg.extend_at(&tx, t, &|xx| f.apply(wx.pair(a, xx))) != ext.apply(i) {
                            return Ok(Some(format!("pointwise and literal extensions differ in {}", alg.carrier())));
                        }
                    }
                }
                // algext(algext g ∘ (W'×f) ∘ assoc) = algext g ∘ (W'×extend f) ∘ assoc
                // with W' = w, W = 2, X = 2, Y = 2.
                let w1 = two.clone();
                let f_dom = Poset::product(&w1, &x, b)?;
                let g_dom = Poset::product(w, &two, b)?;
                let fs = sample_maps(&f_dom, &tx, 6, b)?;
                let gs = sample_maps(&g_dom, z, 6, b)?;
                let assoc_x = MonotoneMap::assoc(w, &w1, &x, b)?;
                let assoc_tx = MonotoneMap::assoc(w, &w1, &tx, b)?;
                for f in &fs {
                    let w_f = MonotoneMap::product_map(&MonotoneMap::identity(w), f, b)?;
                    let w_ext_f = MonotoneMap::product_map(&MonotoneMap::identity(w), &monad.extend(f, b)?, b)?;
                    for g in &gs {
                        count += 1;
                        let ext_g = alg.extend(g, b)?;
                        let lhs = alg.extend(&ext_g.compose(&w_f)?.compose(&assoc_x)?, b)?;
                        let rhs = ext_g.compose(&w_ext_f)?.compose(&assoc_tx)?;
                        if lhs != rhs {
                            return Ok(Some(format!("associativity fails in {}", alg.carrier())));
                        }
                    }
                }
            }
        }
        Ok(None)
    })();
    let mut report = finish(name, instance, started, outcome);
    report.stats.instances = count;
    report
}

/// The probe expression `x false` with `x : bool → τ`.
pub fn converse_probe(ty: &SrcType) -> (SrcContext, SrcExpr) {
    let ctx = SrcContext::new(vec![(Ident::new("x"), SrcType::arrow(SrcType::Bool, ty.clone()))])
        .expect("single entry");
    (ctx, SrcExpr::app(SrcExpr::var("x"), SrcExpr::False))
}

/// `id ⊑ ψ ∘ φ` on `T⟦τ⟧v`: what the main theorem at the probe for `τ`
/// amounts to, since the probe's context ranges over every map into
/// `T⟦τ⟧v`.
pub fn galois_unit_violation(model: &Model, ty: &SrcType) -> Outcome {
    Ok(unit_violation(&phi(ty, model)?, &psi(ty, model)?))
}

fn unit_violation(p: &MonotoneMap, q: &MonotoneMap) -> Option<String> {
    let v = p.dom();
    v.elements().find_map(|t| {
        let round = q.apply(p.apply(t));
        (!v.leq(t, round)).then(|| format!("id ⋢ ψ∘φ at {}: ψ(φ(t)) = {}", v.label(t), v.label(round)))
    })
}

/// If the main theorem holds on the probes at `bool` and `bool → bool`,
/// then `Tη₂ ⊑ η_{T2}` must hold too; a model where a probe fails passes
/// vacuously (skipped). A probe whose context is over budget is decided
/// by its reduced form [`galois_unit_violation`].
pub fn check_converse_premise(model: &Model) -> CheckReport {
    let started = Instant::now();
    let (m, budget) = model_fields(model);
    let name = format!("converse_premise[{m}]");
    let instance = Instance::ConversePremise { model: m, budget };
    let mut reduced = Vec::new();
    for ty in [SrcType::Bool, SrcType::arrow(SrcType::Bool, SrcType::Bool)] {
        let (ctx, e) = converse_probe(&ty);
        let r = check_main_theorem(model, &ctx, &e, &ty);
        let failure = if r.verdict == Verdict::Skipped {
            reduced.push(print_type(&ty));
            match galois_unit_violation(model, &ty) {
                Ok(v) => v,
                Err(err) => {
                    return finish(name, instance, started, Err(err));
                }
            }
        } else if r.is_pass() {
            None
        } else {
            Some(r.witness.map(|w| w.detail).or(r.note).unwrap_or_default())
        };
        if let Some(why) = failure {
            return CheckReport::skipped(name, format!("premise fails at {}: {why}", print_type(&ty)))
                .with_elapsed(started.elapsed());
        }
    }
    let outcome = lax_idempotence_violation(model, &Poset::two())
        .map(|v| v.map(|d| format!("premise holds but Tη₂ ⋢ η_T2 {d}")));
    let report = finish(name, instance, started, outcome);
    if reduced.is_empty() {
        report
    } else {
        report.with_note(format!("reduced premise at {}", reduced.join(", ")))
    }
}

/// Closed programs: every translation evaluates to at most one terminal
/// (exactly one without effects), and every terminal has the program's
/// type.
pub fn check_operational(e: &SrcExpr, ty: &SrcType, sig: EffectSignature, fuel: u64) -> CheckReport {
    let started = Instant::now();
    let name = format!("operational[{sig}]");
    let instance = Instance::Operational {
        expr: print_expr(e),
        ty: print_type(ty),
        sig,
        fuel,
    };
    let terms = fresh::scoped(|| {
        [
            ("cbv", cbv_translate(e)),
            ("cbn", cbn_translate(e)),
            ("rtl", rtl_translate(e)),
        ]
    });
    let mut inconclusive = None;
    for (label, t) in &terms {
        let expected: CompType = match check_comp_any(&TypingContext::empty(), t) {
            Ok(c) => c,
            Err(err) => return CheckReport::fail(name, Some(instance), format!("{label}: {err}")),
        };
        let out = match eval(t, fuel) {
            Ok(o) => o,
            Err(err) => return eval_failure(&name, instance, err),
        };
        let n = out.terminals.len();
        let count_ok = match sig {
            EffectSignature::Pure => n == 1 || (n == 0 && out.exhausted),
            EffectSignature::Div => n <= 1,
            EffectSignature::Nondet => true,
        };
        if !count_ok {
            return CheckReport::fail(name, Some(instance), format!("{label}: {n} terminals"));
        }
        if sig == EffectSignature::Pure && out.exhausted {
            inconclusive = Some(format!("{label}: fuel exhausted"));
        }
        for term in &out.terminals {
            match check_comp_any(&TypingContext::empty(), term) {
                Ok(c) if c == expected => {}
                Ok(c) => {
                    return CheckReport::fail(
                        name,
                        Some(instance),
                        format!(
                            "{label}: terminal {} has type {}, expected {}",
                            print_comp(term),
                            crate::text::print_comp_type(&c),
                            crate::text::print_comp_type(&expected)
                        ),
                    )
                }
                Err(err) => {
                    return CheckReport::fail(
                        name,
                        Some(instance),
                        format!("{label}: terminal {} is ill-typed: {err}", print_comp(term)),
                    )
                }
            }
        }
    }
    let report = match inconclusive {
        Some(note) => CheckReport::inconclusive(name, note),
        None => CheckReport::pass(name),
    };
    report.with_elapsed(started.elapsed())
}
