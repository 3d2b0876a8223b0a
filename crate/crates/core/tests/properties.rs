//! Typing and evaluation properties over generated programs.

mod common;

use std::collections::BTreeMap;

use cbpv::eval::eval;
use cbpv::source::{cbn_ctx, cbn_type, cbv_ctx, cbv_type, check_src, SrcContext};
use cbpv::subst::substitute;
use cbpv::syntax::{CompTerm, CompType, EffectSignature, Ident, ValueTerm, ValueType};
use cbpv::typing::{check_comp, check_comp_any, TypingContext};
use proptest::prelude::*;

const FUEL: u64 = 400;

/// A closed value of type `ty` built from returns and lambdas only.
fn canonical_value(ty: &ValueType) -> ValueTerm {
    match ty {
        ValueType::Unit => ValueTerm::Unit,
        ValueType::Bool => ValueTerm::True,
        ValueType::Prod(a, b) => ValueTerm::pair(canonical_value(a), canonical_value(b)),
        ValueType::Thunk(c) => ValueTerm::thunk(canonical_comp(c)),
    }
}

fn canonical_comp(ty: &CompType) -> CompTerm {
    match ty {
        CompType::Free(a) => CompTerm::ret(canonical_value(a)),
        CompType::Arrow(a, c) => CompTerm::lam("arg", (**a).clone(), canonical_comp(c)),
        CompType::CompProd(c, d) => CompTerm::comp_pair(canonical_comp(c), canonical_comp(d)),
    }
}

fn closing_substitution(ctx: &TypingContext) -> BTreeMap<Ident, ValueTerm> {
    ctx.entries().iter().map(|(x, t)| (x.clone(), canonical_value(t))).collect()
}

/// The context a translation is typed in.
fn target_ctx(label: &str, ctx: &SrcContext) -> TypingContext {
    if label == "cbn" {
        cbn_ctx(ctx)
    } else {
        cbv_ctx(ctx)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn source_types_are_unique_across_signatures((sig, item) in common::any_item()) {
        prop_assert_eq!(check_src(&item.ctx, &item.expr, sig).unwrap(), item.ty.clone());
        for s in EffectSignature::ALL {
            if let Ok(ty) = check_src(&item.ctx, &item.expr, s) {
                prop_assert_eq!(ty, item.ty.clone());
            }
        }
    }

    #[test]
    fn translations_have_the_translated_types((sig, item) in common::any_item()) {
        let expected_cbv = CompType::free(cbv_type(&item.ty));
        for (label, m) in common::translations(&item) {
            let (ctx, expected) = match label {
                "cbn" => (cbn_ctx(&item.ctx), cbn_type(&item.ty)),
                _ => (cbv_ctx(&item.ctx), expected_cbv.clone()),
            };
            prop_assert_eq!(check_comp(&ctx, &m, sig).unwrap(), expected.clone(), "{}", label);
            prop_assert_eq!(check_comp_any(&ctx, &m).unwrap(), expected, "{}", label);
        }
    }

    #[test]
    fn weakening_preserves_types((sig, item) in common::any_item()) {
        for (label, m) in common::translations(&item) {
            let ctx = target_ctx(label, &item.ctx);
            let ty = check_comp(&ctx, &m, sig).unwrap();
            let mut entries = ctx.entries().to_vec();
            entries.insert(0, (Ident::new("unused"), ValueType::prod(ValueType::Bool, ValueType::Unit)));
            let wide = TypingContext::new(entries).unwrap();
            prop_assert_eq!(check_comp(&wide, &m, sig).unwrap(), ty);
        }
    }

    #[test]
    fn closing_substitution_preserves_types((sig, item) in common::any_item()) {
        for (label, m) in common::translations(&item) {
            let ctx = target_ctx(label, &item.ctx);
            let ty = check_comp(&ctx, &m, sig).unwrap();
            let closed = substitute(&m, &closing_substitution(&ctx));
            prop_assert_eq!(check_comp(&TypingContext::empty(), &closed, sig).unwrap(), ty);
        }
    }

    #[test]
    fn evaluation_is_deterministic_and_preserves_types((sig, item) in common::any_item()) {
        for (label, m) in common::translations(&item) {
            let ctx = target_ctx(label, &item.ctx);
            let closed = substitute(&m, &closing_substitution(&ctx));
            let ty = check_comp_any(&TypingContext::empty(), &closed).unwrap();
            let out = eval(&closed, FUEL).unwrap();
            prop_assert_eq!(&eval(&closed, FUEL).unwrap(), &out);
            let n = out.terminals.len();
            match sig {
                EffectSignature::Pure => prop_assert!(n == 1 || (n == 0 && out.exhausted), "{} terminals", n),
                EffectSignature::Div => prop_assert!(n <= 1, "{} terminals", n),
                EffectSignature::Nondet => {}
            }
            for t in &out.terminals {
                prop_assert!(t.is_terminal());
                prop_assert_eq!(check_comp_any(&TypingContext::empty(), t).unwrap(), ty.clone());
            }
        }
    }

    #[test]
    fn more_fuel_only_adds_terminals((_, item) in common::any_item()) {
        for (label, m) in common::translations(&item) {
            let ctx = target_ctx(label, &item.ctx);
            let closed = substitute(&m, &closing_substitution(&ctx));
            let low = eval(&closed, FUEL / 4).unwrap();
            let high = eval(&closed, FUEL).unwrap();
            prop_assert!(low.terminals.is_subset(&high.terminals));
            if !low.exhausted {
                prop_assert_eq!(&low, &high);
            }
        }
    }
}

#[test]
fn canonical_inhabitants_are_pure() {
    let ty = CompType::arrow(
        ValueType::thunk(CompType::free(ValueType::Bool)),
        CompType::comp_prod(CompType::free(ValueType::Unit), CompType::free(ValueType::Bool)),
    );
    let m = canonical_comp(&ty);
    assert_eq!(check_comp(&TypingContext::empty(), &m, EffectSignature::Pure).unwrap(), ty);
}
