//! Abstract syntax of call-by-push-value with the recursion and
//! nondeterminism extensions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// A variable name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident(Arc<str>);

impl Ident {
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        assert!(!name.is_empty(), "identifiers are nonempty");
        Ident(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Self {
        Ident::new(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueType {
    Unit,
    Prod(Box<ValueType>, Box<ValueType>),
    Bool,
    Thunk(Box<CompType>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompType {
    CompProd(Box<CompType>, Box<CompType>),
    Arrow(Box<ValueType>, Box<CompType>),
    Free(Box<ValueType>),
}

impl ValueType {
    pub fn prod(a: ValueType, b: ValueType) -> Self {
        ValueType::Prod(Box::new(a), Box::new(b))
    }

    pub fn thunk(c: CompType) -> Self {
        ValueType::Thunk(Box::new(c))
    }
}

impl CompType {
    pub fn comp_prod(c: CompType, d: CompType) -> Self {
        CompType::CompProd(Box::new(c), Box::new(d))
    }

    pub fn arrow(a: ValueType, c: CompType) -> Self {
        CompType::Arrow(Box::new(a), Box::new(c))
    }

    pub fn free(a: ValueType) -> Self {
        CompType::Free(Box::new(a))
    }
}

/// Which component a projection selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    First,
    Second,
}

impl Component {
    pub fn index(self) -> u8 {
        match self {
            Component::First => 1,
            Component::Second => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueTerm {
    Var(Ident),
    Unit,
    Pair(Box<ValueTerm>, Box<ValueTerm>),
    True,
    False,
    Thunk(Box<CompTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompTerm {
    CompPair(Box<CompTerm>, Box<CompTerm>),
    Proj(Component, Box<CompTerm>),
    Lam(Ident, ValueType, Box<CompTerm>),
    /// `V'M`: apply the function computation `M` to the argument `V`.
    Push(ValueTerm, Box<CompTerm>),
    Return(ValueTerm),
    To(Box<CompTerm>, Ident, Box<CompTerm>),
    MatchPair(ValueTerm, Ident, Ident, Box<CompTerm>),
    If(ValueTerm, Box<CompTerm>, Box<CompTerm>),
    Force(ValueTerm),
    /// The bound variable stands for a thunk of the whole recursive computation.
    Rec(Ident, CompType, Box<CompTerm>),
    Fail(CompType),
    Or(Box<CompTerm>, Box<CompTerm>),
}

impl ValueTerm {
    pub fn var(name: impl Into<Ident>) -> Self {
        ValueTerm::Var(name.into())
    }

    pub fn pair(a: ValueTerm, b: ValueTerm) -> Self {
        ValueTerm::Pair(Box::new(a), Box::new(b))
    }

    pub fn thunk(m: CompTerm) -> Self {
        ValueTerm::Thunk(Box::new(m))
    }

    pub fn bool(b: bool) -> Self {
        if b {
            ValueTerm::True
        } else {
            ValueTerm::False
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            ValueTerm::True => Some(true),
            ValueTerm::False => Some(false),
            _ => None,
        }
    }
}

impl CompTerm {
    pub fn comp_pair(m: CompTerm, n: CompTerm) -> Self {
        CompTerm::CompPair(Box::new(m), Box::new(n))
    }

    pub fn proj(c: Component, m: CompTerm) -> Self {
        CompTerm::Proj(c, Box::new(m))
    }

    pub fn lam(x: impl Into<Ident>, ty: ValueType, body: CompTerm) -> Self {
        CompTerm::Lam(x.into(), ty, Box::new(body))
    }

    pub fn push(v: ValueTerm, m: CompTerm) -> Self {
        CompTerm::Push(v, Box::new(m))
    }

    pub fn ret(v: ValueTerm) -> Self {
        CompTerm::Return(v)
    }

    pub fn to(m: CompTerm, x: impl Into<Ident>, n: CompTerm) -> Self {
        CompTerm::To(Box::new(m), x.into(), Box::new(n))
    }

    pub fn match_pair(
        v: ValueTerm,
        x1: impl Into<Ident>,
        x2: impl Into<Ident>,
        m: CompTerm,
    ) -> Self {
        CompTerm::MatchPair(v, x1.into(), x2.into(), Box::new(m))
    }

    pub fn if_(v: ValueTerm, m1: CompTerm, m2: CompTerm) -> Self {
        CompTerm::If(v, Box::new(m1), Box::new(m2))
    }

    pub fn force(v: ValueTerm) -> Self {
        CompTerm::Force(v)
    }

    pub fn rec(x: impl Into<Ident>, ty: CompType, body: CompTerm) -> Self {
        CompTerm::Rec(x.into(), ty, Box::new(body))
    }

    pub fn or(m: CompTerm, n: CompTerm) -> Self {
        CompTerm::Or(Box::new(m), Box::new(n))
    }

    /// Terms with an introduction form on the outside.
    pub fn is_terminal(&self) -> bool {
        matches!(
            self,
            CompTerm::CompPair(..) | CompTerm::Lam(..) | CompTerm::Return(_)
        )
    }

    /// Number of syntax nodes, counting values inside computations.
    pub fn size(&self) -> usize {
        match self {
            CompTerm::CompPair(m, n) | CompTerm::Or(m, n) => 1 + m.size() + n.size(),
            CompTerm::Proj(_, m) | CompTerm::Lam(_, _, m) | CompTerm::Rec(_, _, m) => 1 + m.size(),
            CompTerm::Push(v, m) | CompTerm::MatchPair(v, _, _, m) => 1 + v.size() + m.size(),
            CompTerm::Return(v) | CompTerm::Force(v) => 1 + v.size(),
            CompTerm::To(m, _, n) => 1 + m.size() + n.size(),
            CompTerm::If(v, m, n) => 1 + v.size() + m.size() + n.size(),
            CompTerm::Fail(_) => 1,
        }
    }
}

impl ValueTerm {
    pub fn size(&self) -> usize {
        match self {
            ValueTerm::Var(_) | ValueTerm::Unit | ValueTerm::True | ValueTerm::False => 1,
            ValueTerm::Pair(a, b) => 1 + a.size() + b.size(),
            ValueTerm::Thunk(m) => 1 + m.size(),
        }
    }
}

/// Which of the effect extensions a term may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EffectSignature {
    /// No effects: `rec`, `fail` and `or` are rejected.
    Pure,
    /// Divergence via `rec`.
    Div,
    /// Finite nondeterminism via `fail` and `or`.
    Nondet,
}

impl EffectSignature {
    pub const ALL: [EffectSignature; 3] =
        [EffectSignature::Pure, EffectSignature::Div, EffectSignature::Nondet];

    pub fn allows_rec(self) -> bool {
        self == EffectSignature::Div
    }

    pub fn allows_nondet(self) -> bool {
        self == EffectSignature::Nondet
    }

    pub fn name(self) -> &'static str {
        match self {
            EffectSignature::Pure => "pure",
            EffectSignature::Div => "div",
            EffectSignature::Nondet => "nondet",
        }
    }
}

impl fmt::Display for EffectSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for EffectSignature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pure" => Ok(EffectSignature::Pure),
            "div" => Ok(EffectSignature::Div),
            "nondet" => Ok(EffectSignature::Nondet),
            other => Err(format!("unknown effect signature `{other}`")),
        }
    }
}
