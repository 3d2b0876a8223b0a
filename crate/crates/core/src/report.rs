//! Outcomes of property checks.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::syntax::EffectSignature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Fuel ran out before the outcome was decided.
    Inconclusive,
    /// A precondition did not hold (over the size budget, or a gate such
    /// as lax idempotence failed), so nothing was asserted.
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProgramRelation {
    /// Both programs can return the same value.
    ResultEq,
    /// Every value the left program can return, the right one can too.
    ResultImpl,
    /// Relates every pair of programs.
    Indiscrete,
}

impl fmt::Display for ProgramRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProgramRelation::ResultEq => "result_eq",
            ProgramRelation::ResultImpl => "result_impl",
            ProgramRelation::Indiscrete => "indiscrete",
        })
    }
}

impl std::str::FromStr for ProgramRelation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "result_eq" | "eq" => Ok(ProgramRelation::ResultEq),
            "result_impl" | "impl" => Ok(ProgramRelation::ResultImpl),
            "indiscrete" => Ok(ProgramRelation::Indiscrete),
            other => Err(format!("unknown program relation `{other}`")),
        }
    }
}

/// Everything needed to re-run a single check instance. Terms and types
/// are stored in their concrete syntax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Relation {
        left: String,
        right: String,
        relation: ProgramRelation,
        fuel: u64,
    },
    Corollary {
        expr: String,
        ty: String,
        relation: ProgramRelation,
        fuel: u64,
    },
    Operational {
        expr: String,
        ty: String,
        sig: EffectSignature,
        fuel: u64,
    },
    ResultAgreement {
        expr: String,
        fuel: u64,
    },
    CrossValidation {
        model: String,
        budget: usize,
        expr: String,
        ty: String,
        relation: ProgramRelation,
        fuel: u64,
    },
    Galois {
        model: String,
        budget: usize,
        ty: String,
    },
    LaxIdempotent {
        model: String,
        budget: usize,
        object: String,
    },
    Commutativity {
        model: String,
        budget: usize,
        left: String,
        right: String,
    },
    SideEffect {
        model: String,
        budget: usize,
        domain: String,
        codomain: String,
        table: Vec<u32>,
    },
    MonadLaws {
        model: String,
        budget: usize,
    },
    AlgebraLaws {
        model: String,
        budget: usize,
    },
    MainTheorem {
        model: String,
        budget: usize,
        ctx: String,
        expr: String,
        ty: String,
    },
    FourEquivalences {
        model: String,
        budget: usize,
        ctx: String,
        expr: String,
        ty: String,
    },
    LtrRtl {
        model: String,
        budget: usize,
        ctx: String,
        expr: String,
        ty: String,
    },
    MapsInterpretation {
        model: String,
        budget: usize,
        ctx: String,
        expr: String,
        ty: String,
    },
    ConversePremise {
        model: String,
        budget: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub instance: Option<Instance>,
    /// The violated inequality with the offending elements or terms.
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub instances: usize,
    pub carrier_sizes: Vec<(String, usize)>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, verdict: Verdict) -> Self {
        CheckReport {
            name: name.into(),
            verdict,
            witness: None,
            stats: Stats {
                instances: 1,
                ..Stats::default()
            },
            note: None,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        CheckReport::new(name, Verdict::Pass)
    }

    pub fn fail(name: impl Into<String>, instance: Option<Instance>, detail: impl Into<String>) -> Self {
        let mut r = CheckReport::new(name, Verdict::Fail);
        r.witness = Some(Witness {
            instance,
            detail: detail.into(),
        });
        r
    }

    pub fn skipped(name: impl Into<String>, note: impl Into<String>) -> Self {
        CheckReport::new(name, Verdict::Skipped).with_note(note)
    }

    pub fn inconclusive(name: impl Into<String>, note: impl Into<String>) -> Self {
        CheckReport::new(name, Verdict::Inconclusive).with_note(note)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_instance(mut self, instance: Instance) -> Self {
        match &mut self.witness {
            Some(w) => w.instance = Some(instance),
            None => {
                self.witness = Some(Witness {
                    instance: Some(instance),
                    detail: String::new(),
                })
            }
        }
        self
    }

    pub fn with_carrier(mut self, label: impl Into<String>, size: usize) -> Self {
        self.stats.carrier_sizes.push((label.into(), size));
        self
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        self.stats.elapsed_ms = elapsed.as_secs_f64() * 1e3;
        self
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.verdict)?;
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        if let Some(w) = &self.witness {
            if !w.detail.is_empty() {
                write!(f, "\n  witness: {}", w.detail)?;
            }
        }
        Ok(())
    }
}
