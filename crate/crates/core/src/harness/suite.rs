//! Whole-model suites: the model-level checks plus every per-term check
//! over the generated corpus for the model's signature.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::denot::{DenotError, Model, ModelKind};
use crate::order::DEFAULT_BUDGET;
use crate::report::{CheckReport, ProgramRelation, Verdict};
use crate::source::SrcType;
use crate::syntax::EffectSignature;

use super::checks::*;
use super::gen::{gen_corpus, CorpusItem, GenConfig, DEFAULT_COUNT, DEFAULT_DEPTH, DEFAULT_SEED};

pub const DEFAULT_FUEL: u64 = 2_000;

/// Worker stack size. Call-by-name unfoldings nest thunks once per step,
/// so terms reach a depth proportional to the fuel.
const WORKER_STACK: usize = 512 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub model: ModelKind,
    /// Types for the per-type checks (lax idempotence, Galois,
    /// commutativity).
    #[serde(with = "type_list")]
    pub types: Vec<SrcType>,
    pub seed: u64,
    pub count: usize,
    pub fuel: u64,
    pub budget: usize,
    pub max_depth: usize,
    /// Inconclusive verdicts tolerated on a pure corpus.
    pub inconclusive_quota: usize,
}

mod type_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::source::text::{parse_type, print_type};
    use crate::source::SrcType;

    pub fn serialize<S: Serializer>(types: &[SrcType], s: S) -> Result<S::Ok, S::Error> {
        types.iter().map(print_type).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<SrcType>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_type(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl SuiteConfig {
    pub fn new(model: ModelKind) -> Self {
        SuiteConfig {
            model,
            types: SrcType::default_suite(),
            seed: DEFAULT_SEED,
            count: DEFAULT_COUNT,
            fuel: DEFAULT_FUEL,
            budget: DEFAULT_BUDGET,
            max_depth: DEFAULT_DEPTH,
            inconclusive_quota: 0,
        }
    }

    /// The signature whose corpus the model is run on.
    pub fn signature(&self) -> EffectSignature {
        match self.model {
            ModelKind::Lift => EffectSignature::Div,
            ModelKind::Downset => EffectSignature::Nondet,
            _ => EffectSignature::Pure,
        }
    }

    pub fn gen_config(&self) -> GenConfig {
        GenConfig {
            seed: self.seed,
            max_depth: self.max_depth,
            count: self.count,
            ..GenConfig::new(self.signature())
        }
    }

    /// The operational relation for the corpus signature.
    pub fn relation(&self) -> ProgramRelation {
        match self.signature() {
            EffectSignature::Pure => ProgramRelation::ResultEq,
            _ => ProgramRelation::ResultImpl,
        }
    }
}

/// Verdict counts for one check name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub skipped: usize,
}

impl Tally {
    pub fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => self.fail += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
            Verdict::Skipped => self.skipped += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.inconclusive + self.skipped
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub records: Vec<CheckReport>,
    /// Counts keyed by check name with any `[...]` suffix removed.
    pub summary: BTreeMap<String, Tally>,
    pub elapsed_ms: f64,
}

impl SuiteReport {
    pub fn from_records(config: SuiteConfig, records: Vec<CheckReport>, elapsed_ms: f64) -> Self {
        let mut summary: BTreeMap<String, Tally> = BTreeMap::new();
        for r in &records {
            summary.entry(base_name(&r.name).to_string()).or_default().add(r.verdict);
        }
        SuiteReport {
            config,
            records,
            summary,
            elapsed_ms,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.records.iter().filter(|r| r.is_fail())
    }

    pub fn tally(&self, base: &str) -> Tally {
        self.summary.get(base).cloned().unwrap_or_default()
    }

    /// Inconclusive verdicts charged against the quota: those on a pure
    /// corpus.
    pub fn charged_inconclusives(&self) -> usize {
        if self.config.signature() != EffectSignature::Pure {
            return 0;
        }
        self.records.iter().filter(|r| r.verdict == Verdict::Inconclusive).count()
    }

    /// No failures and no inconclusives beyond the quota.
    pub fn is_success(&self) -> bool {
        self.failures().next().is_none() && self.charged_inconclusives() <= self.config.inconclusive_quota
    }

    /// Per-name counts followed by every failure with its witness.
    pub fn render_summary(&self) -> String {
        let mut out = format!(
            "suite {} (signature {}, seed {:#x}, {} terms, fuel {}, budget {})\n",
            self.config.model,
            self.config.signature(),
            self.config.seed,
            self.config.count,
            self.config.fuel,
            self.config.budget
        );
        out.push_str(&format!(
            "{:<22} {:>6} {:>6} {:>6} {:>6}\n",
            "check", "pass", "fail", "incon", "skip"
        ));
        for (name, t) in &self.summary {
            out.push_str(&format!(
                "{name:<22} {:>6} {:>6} {:>6} {:>6}\n",
                t.pass, t.fail, t.inconclusive, t.skipped
            ));
        }
        for r in self.failures() {
            out.push_str(&format!("{r}\n"));
        }
        out.push_str(&format!(
            "{} in {:.1} s\n",
            if self.is_success() { "ok" } else { "FAILED" },
            self.elapsed_ms / 1e3
        ));
        out
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_summary())
    }
}

pub fn base_name(name: &str) -> &str {
    name.split('[').next().unwrap_or(name)
}

/// The model-level checks: per-type lax idempotence, Galois and
/// commutativity, the law suites, the side-effect axioms on all maps
/// `2 → T2`, and the converse probe.
pub fn model_checks(model: &Model, types: &[SrcType]) -> Vec<CheckReport> {
    let mut jobs: Vec<Box<dyn Fn() -> Vec<CheckReport> + Send + Sync>> = Vec::new();
    for ty in types {
        let (m, t) = (model.clone(), ty.clone());
        jobs.push(Box::new(move || vec![check_lax_idempotent(&m, &t)]));
        let (m, t) = (model.clone(), ty.clone());
        jobs.push(Box::new(move || vec![check_galois(&m, &t)]));
    }
    let ground: Vec<&SrcType> = types
        .iter()
        .filter(|t| !matches!(t, SrcType::Arrow(..)))
        .collect();
    for t1 in &ground {
        for t2 in &ground {
            let (m, a, b) = (model.clone(), (*t1).clone(), (*t2).clone());
            jobs.push(Box::new(move || vec![check_commutativity(&m, &a, &b)]));
        }
    }
    let m = model.clone();
    jobs.push(Box::new(move || vec![check_monad_laws(&m)]));
    let m = model.clone();
    jobs.push(Box::new(move || vec![check_algebra_laws(&m)]));
    let m = model.clone();
    jobs.push(Box::new(move || side_effect_suite(&m, &SrcType::Bool, &SrcType::Bool)));
    let m = model.clone();
    jobs.push(Box::new(move || vec![check_converse_premise(&m)]));
    jobs.par_iter().flat_map_iter(|job| job()).collect()
}

/// Every per-term check for one corpus item.
pub fn item_checks(model: &Model, cfg: &SuiteConfig, item: &CorpusItem) -> Vec<CheckReport> {
    let (ctx, e, ty) = (&item.ctx, &item.expr, &item.ty);
    let sig = cfg.signature();
    let mut out = vec![
        check_main_theorem(model, ctx, e, ty),
        check_maps_interpretation(model, ctx, e, ty),
        check_four_equivalences(model, ctx, e, ty),
        check_ltr_rtl(model, ctx, e, ty, cfg.fuel),
    ];
    if ctx.is_empty() {
        out.push(check_operational(e, ty, sig, cfg.fuel));
    }
    if item.is_closed_ground() {
        out.push(check_corollary(e, ty, cfg.relation(), cfg.fuel));
        if sig == EffectSignature::Pure {
            out.push(check_result_agreement(e, cfg.fuel));
        }
        out.push(check_cross_validation(model, e, ty, cfg.relation(), cfg.fuel));
    }
    let tag = format!("#{}", item.index);
    out.into_iter()
        .map(|mut r| {
            r.name = format!("{}[{tag}]", base_name(&r.name));
            r
        })
        .collect()
}

/// Runs the model-level checks and the corpus checks. Records come back
/// in a fixed order: model-level checks first, then corpus items by
/// index.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, DenotError> {
    let started = Instant::now();
    let model = Model::new(cfg.model, cfg.budget)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .stack_size(WORKER_STACK)
        .build()
        .expect("thread pool");
    let records = pool.install(|| {
        let mut records = model_checks(&model, &cfg.types);
        let corpus = gen_corpus(&cfg.gen_config());
        let per_item: Vec<Vec<CheckReport>> =
            corpus.par_iter().map(|item| item_checks(&model, cfg, item)).collect();
        records.extend(per_item.into_iter().flatten());
        records
    });
    Ok(SuiteReport::from_records(
        cfg.clone(),
        records,
        started.elapsed().as_secs_f64() * 1e3,
    ))
}

/// Runs only the per-term checks, for a single corpus item.
pub fn run_item(cfg: &SuiteConfig, index: usize) -> Result<Vec<CheckReport>, DenotError> {
    let model = Model::new(cfg.model, cfg.budget)?;
    let item = super::gen::gen_item(&cfg.gen_config(), index);
    Ok(item_checks(&model, cfg, &item))
}
