//! The fixed-seed corpora: well-typed, deterministic, and exercising every
//! construct their signature allows.

mod common;

use cbpv::harness::{gen_corpus, gen_expr, GenConfig};
use cbpv::source::{check_src, SrcContext, SrcExpr, SrcType};
use cbpv::syntax::EffectSignature;

fn count(corpus: &[cbpv::harness::CorpusItem], pred: fn(&SrcExpr) -> bool) -> usize {
    corpus.iter().map(|item| item.expr.count(&pred)).sum()
}

#[test]
fn depth_zero_bool_is_a_literal() {
    for seed in 0..20 {
        let cfg = GenConfig {
            seed,
            max_depth: 0,
            ..GenConfig::new(EffectSignature::Pure)
        };
        let e = gen_expr(&cfg, &SrcContext::empty(), &SrcType::Bool);
        assert!(matches!(e, SrcExpr::True | SrcExpr::False), "{e:?}");
    }
}

#[test]
fn every_generated_term_has_its_recorded_type() {
    for sig in common::SIGNATURES {
        for item in gen_corpus(&GenConfig::new(sig)) {
            assert_eq!(check_src(&item.ctx, &item.expr, sig).unwrap(), item.ty, "#{}", item.index);
        }
    }
}

#[test]
fn corpora_contain_applications_and_conditionals() {
    for sig in common::SIGNATURES {
        let corpus = gen_corpus(&GenConfig::new(sig));
        assert_eq!(corpus.len(), 500);
        assert!(count(&corpus, |e| matches!(e, SrcExpr::App(..))) >= 1, "{sig}");
        assert!(count(&corpus, |e| matches!(e, SrcExpr::If(..))) >= 1, "{sig}");
    }
}

#[test]
fn effect_constructs_follow_the_signature() {
    let rec = |e: &SrcExpr| matches!(e, SrcExpr::RecFun { .. });
    let nondet = |e: &SrcExpr| matches!(e, SrcExpr::Or(..) | SrcExpr::Fail(_));
    let pure = gen_corpus(&GenConfig::new(EffectSignature::Pure));
    assert_eq!(count(&pure, rec) + count(&pure, nondet), 0);
    let div = gen_corpus(&GenConfig::new(EffectSignature::Div));
    assert!(count(&div, rec) > 0);
    assert_eq!(count(&div, nondet), 0);
    let nd = gen_corpus(&GenConfig::new(EffectSignature::Nondet));
    assert!(count(&nd, nondet) > 0);
    assert_eq!(count(&nd, rec), 0);
}

#[test]
fn same_config_gives_the_same_corpus() {
    let cfg = GenConfig::new(EffectSignature::Nondet);
    assert_eq!(gen_corpus(&cfg), gen_corpus(&cfg));
    let other = GenConfig { seed: cfg.seed + 1, ..cfg.clone() };
    assert_ne!(gen_corpus(&cfg), gen_corpus(&other));
}

#[test]
fn corpora_include_closed_ground_and_open_items() {
    for sig in common::SIGNATURES {
        let corpus = gen_corpus(&GenConfig::new(sig));
        let closed_ground = corpus.iter().filter(|i| i.is_closed_ground()).count();
        let open = corpus.iter().filter(|i| !i.ctx.is_empty()).count();
        assert!(closed_ground >= 100, "{sig}: {closed_ground}");
        assert!(open >= 200, "{sig}: {open}");
    }
}
