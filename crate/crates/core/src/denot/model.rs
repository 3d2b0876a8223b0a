//! Models: a monad, the effect constructs it can interpret, and a size
//! budget, with caches for interpreted types and semantic maps.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{Algebra, Monad, MonoidPreset, MonotoneMap, OrderError, OrderedMonoid, Poset, DEFAULT_BUDGET};
use crate::source::SrcType;
use crate::syntax::{CompType, EffectSignature, ValueType};
use crate::typing::TypeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DenotError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("the {model} model cannot interpret `{construct}`")]
    EffectUnsupported { model: String, construct: &'static str },
    #[error("ill-typed term: {0}")]
    IllTyped(#[from] TypeError),
}

impl DenotError {
    pub fn is_over_budget(&self) -> bool {
        matches!(self, DenotError::Order(OrderError::SizeBudgetExceeded { .. }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Identity,
    Lift,
    Downset,
    /// Writer over the default ordered monoid.
    Writer,
    /// Writer over prefix-truncated words with the discrete order.
    WriterWords,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Identity,
        ModelKind::Lift,
        ModelKind::Downset,
        ModelKind::Writer,
        ModelKind::WriterWords,
    ];

    /// The models whose monad is commutative and lax idempotent.
    pub const POSITIVE: [ModelKind; 3] = [ModelKind::Identity, ModelKind::Lift, ModelKind::Downset];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Identity => "identity",
            ModelKind::Lift => "lift",
            ModelKind::Downset => "downset",
            ModelKind::Writer => "writer",
            ModelKind::WriterWords => "writer-words",
        }
    }

    /// The model matching the effects a signature allows.
    pub fn for_signature(sig: EffectSignature) -> Self {
        match sig {
            EffectSignature::Pure => ModelKind::Identity,
            EffectSignature::Div => ModelKind::Lift,
            EffectSignature::Nondet => ModelKind::Downset,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "id" | "identity" => Ok(ModelKind::Identity),
            "lift" => Ok(ModelKind::Lift),
            "downset" => Ok(ModelKind::Downset),
            "writer" => Ok(ModelKind::Writer),
            "writer-words" => Ok(ModelKind::WriterWords),
            other => Err(format!("unknown model `{other}`")),
        }
    }
}

#[derive(Default)]
pub(crate) struct Caches {
    pub vtypes: HashMap<ValueType, Poset>,
    pub ctypes: HashMap<CompType, Algebra>,
    pub maps: HashMap<(&'static str, SrcType), MonotoneMap>,
}

#[derive(Clone)]
pub struct Model {
    kind: ModelKind,
    monad: Monad,
    budget: usize,
    pub(crate) caches: Arc<Mutex<Caches>>,
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Model({}, budget {})", self.kind, self.budget)
    }
}

impl Model {
    pub fn new(kind: ModelKind, budget: usize) -> Result<Self, DenotError> {
        let monad = match kind {
            ModelKind::Identity => Monad::identity(),
            ModelKind::Lift => Monad::lift(),
            ModelKind::Downset => Monad::downset(),
            ModelKind::Writer => Monad::default_writer(),
            ModelKind::WriterWords => Monad::writer(OrderedMonoid::preset(MonoidPreset::TruncatedWords)),
        };
        let model = Model {
            kind,
            monad,
            budget,
            caches: Arc::default(),
        };
        model.check_flags()?;
        Ok(model)
    }

    pub fn with_default_budget(kind: ModelKind) -> Self {
        Model::new(kind, DEFAULT_BUDGET).expect("built-in models are well formed")
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn monad(&self) -> &Monad {
        &self.monad
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Whether `rec` is interpreted, by least fixed points.
    pub fn supports_rec(&self) -> bool {
        self.kind == ModelKind::Lift
    }

    /// Whether `fail` and `or` are interpreted, by least elements and
    /// binary joins.
    pub fn supports_nondet(&self) -> bool {
        self.kind == ModelKind::Downset
    }

    pub fn supports(&self, sig: EffectSignature) -> bool {
        match sig {
            EffectSignature::Pure => true,
            EffectSignature::Div => self.supports_rec(),
            EffectSignature::Nondet => self.supports_nondet(),
        }
    }

    /// Spot-checks the order structure the flags rely on.
    fn check_flags(&self) -> Result<(), DenotError> {
        let free = Algebra::free(&self.monad, &Poset::two(), self.budget)?;
        let exp = Algebra::exponential(&Poset::two(), &free, self.budget)?;
        for alg in [&free, &exp] {
            let c = alg.carrier();
            if self.supports_rec() && c.least().is_none() {
                return Err(OrderError::Invalid(format!("{c} has no least element")).into());
            }
            if self.supports_nondet() {
                let joins = c.elements().all(|a| c.elements().all(|b| c.join(a, b).is_some()));
                if c.least().is_none() || !joins {
                    return Err(OrderError::Invalid(format!("{c} lacks finite joins")).into());
                }
            }
        }
        Ok(())
    }
}
