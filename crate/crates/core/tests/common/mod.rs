#![allow(dead_code)]

use cbpv::fresh;
use cbpv::harness::{gen_item, CorpusItem, GenConfig};
use cbpv::source::{cbn_translate, cbv_translate, rtl_translate};
use cbpv::syntax::{CompTerm, EffectSignature};
use proptest::prelude::*;

pub const SIGNATURES: [EffectSignature; 3] = [EffectSignature::Pure, EffectSignature::Div, EffectSignature::Nondet];

pub fn item(sig: EffectSignature, seed: u64, index: usize) -> CorpusItem {
    let cfg = GenConfig {
        seed,
        ..GenConfig::new(sig)
    };
    gen_item(&cfg, index)
}

/// A generated corpus item under any of the three signatures.
pub fn any_item() -> impl Strategy<Value = (EffectSignature, CorpusItem)> {
    (0..SIGNATURES.len(), any::<u64>(), 0usize..1000).prop_map(|(s, seed, i)| {
        let sig = SIGNATURES[s];
        (sig, item(sig, seed, i))
    })
}

/// The call-by-value, call-by-name and right-to-left translations.
pub fn translations(item: &CorpusItem) -> [(&'static str, CompTerm); 3] {
    fresh::scoped(|| {
        [
            ("cbv", cbv_translate(&item.expr)),
            ("cbn", cbn_translate(&item.expr)),
            ("rtl", rtl_translate(&item.expr)),
        ]
    })
}
