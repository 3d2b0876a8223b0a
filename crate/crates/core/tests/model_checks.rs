//! Individual model checks on small worked examples, with expected values
//! computed independently where they are not literals.

use cbpv::denot::{Model, ModelKind};
use cbpv::harness::*;
use cbpv::order::{MonotoneMap, Poset, DEFAULT_BUDGET as B};
use cbpv::report::{ProgramRelation, Verdict};
use cbpv::source::{SrcContext, SrcExpr, SrcType};

fn model(kind: ModelKind) -> Model {
    Model::with_default_budget(kind)
}

fn bool_to_bool() -> SrcType {
    SrcType::arrow(SrcType::Bool, SrcType::Bool)
}

/// `(λx. true) Ω`.
fn discard_divergence() -> SrcExpr {
    SrcExpr::app(SrcExpr::lam("x", SrcType::Bool, SrcExpr::True), SrcExpr::omega(SrcType::Bool))
}

/// `(λx. if x then x else true) (true or false)`.
fn duplicate_choice() -> SrcExpr {
    SrcExpr::app(
        SrcExpr::lam(
            "x",
            SrcType::Bool,
            SrcExpr::if_(SrcExpr::var("x"), SrcExpr::var("x"), SrcExpr::True),
        ),
        SrcExpr::or(SrcExpr::True, SrcExpr::False),
    )
}

fn brute_force_monotone_count(dom: &Poset, cod: &Poset) -> usize {
    let n = dom.size();
    let m = cod.size();
    (0..m.pow(n as u32))
        .filter(|code| {
            let t: Vec<u32> = (0..n).map(|i| (code / m.pow(i as u32) % m) as u32).collect();
            dom.elements()
                .all(|x| dom.elements().all(|y| !dom.leq(x, y) || cod.leq(t[x as usize], t[y as usize])))
        })
        .count()
}

#[test]
fn lax_idempotence_on_the_boolean_object() {
    assert!(check_lax_idempotent(&model(ModelKind::Identity), &SrcType::Bool).is_pass());
    assert!(check_lax_idempotent(&model(ModelKind::Lift), &SrcType::Bool).is_pass());
    assert!(check_lax_idempotent(&model(ModelKind::Downset), &SrcType::Bool).is_pass());
    let r = check_lax_idempotent(&model(ModelKind::Writer), &SrcType::Bool);
    assert!(r.is_fail());
    assert!(r.witness.unwrap().instance.is_some());
}

#[test]
fn galois_at_bool_in_the_lift_model_is_the_identity() {
    let m = model(ModelKind::Lift);
    let (p, q) = (cbpv::denot::phi(&SrcType::Bool, &m).unwrap(), cbpv::denot::psi(&SrcType::Bool, &m).unwrap());
    assert_eq!(p, MonotoneMap::identity(p.dom()));
    assert_eq!(q, MonotoneMap::identity(q.dom()));
    assert!(check_galois(&m, &SrcType::Bool).is_pass());
}

#[test]
fn galois_at_bool_to_bool_in_the_lift_model() {
    let r = check_galois(&model(ModelKind::Lift), &bool_to_bool());
    assert!(r.is_pass(), "{r}");
    let lift2 = Poset::lift(&Poset::two(), B).unwrap();
    let value_side = 1 + brute_force_monotone_count(&Poset::two(), &lift2);
    let name_side = brute_force_monotone_count(&lift2, &lift2);
    assert_eq!((value_side, name_side), (10, 11));
    let sizes: Vec<usize> = r.stats.carrier_sizes.iter().map(|(_, n)| *n).collect();
    assert_eq!(sizes, vec![value_side, name_side]);
}

#[test]
fn galois_fails_for_the_writer_at_bool_to_bool() {
    let r = check_galois(&model(ModelKind::Writer), &bool_to_bool());
    assert!(r.is_fail(), "{r}");
}

#[test]
fn main_theorem_on_a_closed_literal_is_an_equality() {
    for kind in ModelKind::ALL {
        let r = check_main_theorem(&model(kind), &SrcContext::empty(), &SrcExpr::True, &SrcType::Bool);
        assert!(r.is_pass(), "{kind}: {r}");
        assert!(r.note.is_none(), "{kind}: {r}");
    }
}

#[test]
fn main_theorem_is_strict_on_discarded_divergence() {
    let m = model(ModelKind::Lift);
    let e = discard_divergence();
    let r = check_main_theorem(&m, &SrcContext::empty(), &e, &SrcType::Bool);
    assert!(r.is_pass(), "{r}");
    assert!(r.note.unwrap().starts_with("strict"));
    let sides = main_theorem_sides(&m, &SrcContext::empty(), &e, &SrcType::Bool).unwrap();
    assert_eq!(sides, vec![("()".to_string(), "⊥".to_string(), "↑tt".to_string())]);
}

#[test]
fn main_theorem_is_strict_on_duplicated_choice() {
    let m = model(ModelKind::Downset);
    let e = duplicate_choice();
    let r = check_main_theorem(&m, &SrcContext::empty(), &e, &SrcType::Bool);
    assert!(r.is_pass(), "{r}");
    let sides = main_theorem_sides(&m, &SrcContext::empty(), &e, &SrcType::Bool).unwrap();
    assert_eq!(sides, vec![("()".to_string(), "{tt}".to_string(), "{tt, ff}".to_string())]);
}

#[test]
fn corollary_on_the_worked_examples() {
    let r = check_corollary(&discard_divergence(), &SrcType::Bool, ProgramRelation::ResultImpl, 10_000);
    assert!(r.is_pass(), "{r}");
    let e = duplicate_choice();
    assert!(check_corollary(&e, &SrcType::Bool, ProgramRelation::ResultImpl, 10_000).is_pass());
    assert!(check_corollary(&e, &SrcType::Bool, ProgramRelation::ResultEq, 10_000).is_pass());
}

#[test]
fn four_equivalences_hold_on_discarded_divergence_and_are_gated_for_the_writer() {
    let e = discard_divergence();
    let r = check_four_equivalences(&model(ModelKind::Lift), &SrcContext::empty(), &e, &SrcType::Bool);
    assert!(r.is_pass(), "{r}");
    let w = check_four_equivalences(&model(ModelKind::Writer), &SrcContext::empty(), &SrcExpr::True, &SrcType::Bool);
    assert_eq!(w.verdict, Verdict::Skipped);
    assert!(w.note.unwrap().contains("not lax idempotent"));
}

#[test]
fn four_inequalities_collapse_on_closed_booleans() {
    let m = model(ModelKind::Downset);
    let e = duplicate_choice();
    let r = four_inequalities(&m, &SrcContext::empty(), &e, &SrcType::Bool).unwrap();
    assert!(r.iter().all(Option::is_none));
}

#[test]
fn evaluation_order_and_commutativity() {
    let pair = SrcExpr::pair(SrcExpr::or(SrcExpr::True, SrcExpr::False), SrcExpr::False);
    let ty = SrcType::prod(SrcType::Bool, SrcType::Bool);
    let r = check_ltr_rtl(&model(ModelKind::Downset), &SrcContext::empty(), &pair, &ty, 1000);
    assert!(r.is_pass(), "{r}");
    assert!(check_commutativity(&model(ModelKind::Downset), &SrcType::Bool, &SrcType::Bool).is_pass());
    let w = check_commutativity(&model(ModelKind::Writer), &SrcType::Bool, &SrcType::Bool);
    assert!(w.is_fail());
    assert!(w.witness.unwrap().detail.contains("seqr"));
}

#[test]
fn side_effect_axioms_over_all_maps_into_lifted_bool() {
    let reports = side_effect_suite(&model(ModelKind::Lift), &SrcType::Bool, &SrcType::Bool);
    assert_eq!(reports.len(), 9);
    assert!(reports.iter().all(|r| r.is_pass()));
    let id = side_effect_suite(&model(ModelKind::Identity), &SrcType::Bool, &SrcType::Bool);
    assert!(id.iter().all(|r| r.is_pass()));
}

#[test]
fn writer_maps_violate_each_side_effect_axiom() {
    let reports = side_effect_suite(&model(ModelKind::Writer), &SrcType::Bool, &SrcType::Bool);
    for axiom in SIDE_EFFECT_AXIOMS {
        assert!(
            reports.iter().any(|r| r.witness.as_ref().is_some_and(|w| w.detail.contains(axiom))),
            "{axiom}"
        );
    }
}

#[test]
fn partial_converse_probe() {
    assert!(check_converse_premise(&model(ModelKind::Lift)).is_pass());
    assert!(check_converse_premise(&model(ModelKind::Downset)).is_pass());
    let w = check_converse_premise(&model(ModelKind::Writer));
    assert_eq!(w.verdict, Verdict::Skipped);
    assert!(w.note.unwrap().starts_with("premise fails"));
}

#[test]
fn law_suites_pass_in_every_model() {
    for kind in ModelKind::ALL {
        let m = model(kind);
        assert!(check_monad_laws(&m).is_pass(), "{kind}");
        assert!(check_algebra_laws(&m).is_pass(), "{kind}");
    }
}
