//! Strong monads on finite posets.
//!
//! Each monad is given by its object map, unit and a strong Kleisli
//! extension taking `f : W × X → TY` to `W × TX → TY`. The pointwise
//! operations (`unit_at`, `bind`) act on element indices; the
//! materialized ones build whole tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bits::Bits;
use super::map::MonotoneMap;
use super::poset::{OrderError, Poset};

/// A finite monoid with a partial order making multiplication monotone.
#[derive(Clone, PartialEq, Eq)]
pub struct OrderedMonoid {
    name: String,
    poset: Poset,
    mul: Vec<u32>,
    unit: u32,
}

impl fmt::Debug for OrderedMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderedMonoid({})", self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonoidPreset {
    /// `{ε, t, lo, hi}`: `t` generates a two-element group, `lo` and `hi`
    /// are left zeros, `lo` is the bottom and `hi` the top.
    Default,
    /// Words over `{a, b}` of length at most 3, prefix-truncated, with the
    /// discrete order.
    TruncatedWords,
}

impl OrderedMonoid {
    /// Validates associativity, the unit laws and monotonicity.
    pub fn new(name: &str, poset: Poset, mul: Vec<u32>, unit: u32) -> Result<Self, OrderError> {
        let n = poset.size();
        if mul.len() != n * n || mul.iter().any(|&m| m as usize >= n) || unit as usize >= n {
            return Err(OrderError::Invalid(format!("{name}: malformed multiplication table")));
        }
        let m = OrderedMonoid {
            name: name.to_string(),
            poset,
            mul,
            unit,
        };
        let p = &m.poset;
        for a in p.elements() {
            if m.mul(a, unit) != a || m.mul(unit, a) != a {
                return Err(OrderError::Invalid(format!("{name}: {} breaks the unit law", p.label(a))));
            }
            for b in p.elements() {
                for c in p.elements() {
                    if m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c)) {
                        return Err(OrderError::Invalid(format!(
                            "{name}: not associative at {}, {}, {}",
                            p.label(a),
                            p.label(b),
                            p.label(c)
                        )));
                    }
                    if p.leq(a, b) && (!p.leq(m.mul(a, c), m.mul(b, c)) || !p.leq(m.mul(c, a), m.mul(c, b))) {
                        return Err(OrderError::Invalid(format!(
                            "{name}: multiplication is not monotone at {} ⊑ {}",
                            p.label(a),
                            p.label(b)
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn preset(preset: MonoidPreset) -> Self {
        match preset {
            MonoidPreset::Default => {
                let labels = ["ε", "t", "lo", "hi"].map(String::from).to_vec();
                // lo ⊑ everything ⊑ hi; ε and t incomparable.
                let leq = (0..4)
                    .map(|a| (0..4).map(|b| a == b || a == 2 || b == 3).collect())
                    .collect();
                let poset = Poset::explicit(leq, labels).expect("valid order");
                let mul = vec![0, 1, 2, 3, 1, 0, 2, 3, 2, 2, 2, 2, 3, 3, 3, 3];
                OrderedMonoid::new("default", poset, mul, 0).expect("valid monoid")
            }
            MonoidPreset::TruncatedWords => OrderedMonoid::truncated_words(&['a', 'b'], 3),
        }
    }

    /// Words of length at most `cap` under concatenation followed by
    /// truncation to the first `cap` letters, ordered discretely.
    pub fn truncated_words(alphabet: &[char], cap: usize) -> Self {
        let mut words: Vec<String> = vec![String::new()];
        let mut frontier = vec![String::new()];
        for _ in 0..cap {
            let mut next = Vec::new();
            for w in &frontier {
                for c in alphabet {
                    let mut v = w.clone();
                    v.push(*c);
                    next.push(v);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let index = |w: &str| words.iter().position(|v| v == w).expect("word enumerated") as u32;
        let n = words.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in &words {
            for b in &words {
                let cat: String = a.chars().chain(b.chars()).take(cap).collect();
                mul.push(index(&cat));
            }
        }
        let labels = words
            .iter()
            .map(|w| if w.is_empty() { "ε".to_string() } else { w.clone() })
            .collect();
        let leq = (0..n).map(|a| (0..n).map(|b| a == b).collect()).collect();
        let poset = Poset::explicit(leq, labels).expect("discrete order");
        OrderedMonoid::new(&format!("words{cap}"), poset, mul, 0).expect("valid monoid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn unit(&self) -> u32 {
        self.unit
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.poset.size() + b as usize]
    }
}

#[derive(Clone, PartialEq, Eq)]
pub enum Monad {
    Identity,
    Lift,
    Downset,
    Writer(Arc<OrderedMonoid>),
}

impl fmt::Debug for Monad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Monad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Monad {
    pub fn identity() -> Self {
        Monad::Identity
    }

    pub fn lift() -> Self {
        Monad::Lift
    }

    pub fn downset() -> Self {
        Monad::Downset
    }

    pub fn writer(monoid: OrderedMonoid) -> Self {
        Monad::Writer(Arc::new(monoid))
    }

    pub fn default_writer() -> Self {
        Monad::writer(OrderedMonoid::preset(MonoidPreset::Default))
    }

    pub fn name(&self) -> String {
        match self {
            Monad::Identity => "identity".into(),
            Monad::Lift => "lift".into(),
            Monad::Downset => "downset".into(),
            Monad::Writer(m) => format!("writer({})", m.name()),
        }
    }

    /// The object map `X ↦ TX`.
    pub fn obj(&self, x: &Poset, budget: usize) -> Result<Poset, OrderError> {
        match self {
            Monad::Identity => Ok(x.clone()),
            Monad::Lift => Poset::lift(x, budget),
            Monad::Downset => Poset::downsets(x, budget),
            Monad::Writer(m) => Poset::product(x, m.poset(), budget),
        }
    }

    /// `η_X(a)` as an element of `tx = TX`.
    pub fn unit_at(&self, tx: &Poset, a: u32) -> u32 {
        match self {
            Monad::Identity => a,
            Monad::Lift => a + 1,
            Monad::Downset => tx.principal(a),
            Monad::Writer(m) => tx.pair(a, m.unit()),
        }
    }

    pub fn unit(&self, x: &Poset, budget: usize) -> Result<MonotoneMap, OrderError> {
        let tx = self.obj(x, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(x, &tx, |a| self.unit_at(&tx, a)))
    }

    /// The elements of `X` on which the extension of a map at `t ∈ TX`
    /// depends.
    pub fn support(&self, tx: &Poset, t: u32) -> Vec<u32> {
        match self {
            Monad::Identity => vec![t],
            Monad::Lift => {
                if t == 0 {
                    vec![]
                } else {
                    vec![t - 1]
                }
            }
            Monad::Downset => tx.set(t).iter().map(|a| a as u32).collect(),
            Monad::Writer(_) => vec![tx.unpair(t).0],
        }
    }

    /// Kleisli extension at a point: `t >>= f` where `f : X → TY` is
    /// given elementwise and `ty = TY`.
    pub fn bind(&self, tx: &Poset, ty: &Poset, t: u32, f: &dyn Fn(u32) -> u32) -> u32 {
        match self {
            Monad::Identity => f(t),
            Monad::Lift => {
                if t == 0 {
                    0
                } else {
                    f(t - 1)
                }
            }
            Monad::Downset => {
                let base = ty.down_base().expect("downset carrier");
                let mut acc = Bits::empty(base.size());
                for a in tx.set(t).iter() {
                    acc.union_with(ty.set(f(a as u32)));
                }
                ty.lookup_set(&acc).expect("unions of downsets are downsets")
            }
            Monad::Writer(m) => {
                let (a, s) = tx.unpair(t);
                let (b, s2) = ty.unpair(f(a));
                ty.pair(b, m.mul(s, s2))
            }
        }
    }

    /// Strong extension: `f : W × X → TY` gives `W × TX → TY`.
    pub fn extend(&self, f: &MonotoneMap, budget: usize) -> Result<MonotoneMap, OrderError> {
        let (w, x) = f
            .dom()
            .factors()
            .map(|(w, x)| (w.clone(), x.clone()))
            .ok_or_else(|| OrderError::Mismatch(format!("{} is not a product", f.dom())))?;
        let tx = self.obj(&x, budget)?;
        let ty = f.cod().clone();
        let dom = Poset::product(&w, &tx, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(&dom, &ty, |i| {
            let (a, t) = dom.unpair(i);
            self.bind(&tx, &ty, t, &|x| f.apply(f.dom().pair(a, x)))
        }))
    }

    /// `f^† : TX → TY` for `f : X → TY`, the extension with a trivial
    /// environment.
    pub fn kleisli(&self, f: &MonotoneMap, budget: usize) -> Result<MonotoneMap, OrderError> {
        let (to, _) = MonotoneMap::left_unitor(f.dom(), budget)?;
        let ext = self.extend(&f.compose(&to)?, budget)?;
        let tx = self.obj(f.dom(), budget)?;
        let (_, from) = MonotoneMap::left_unitor(&tx, budget)?;
        ext.compose(&from)
    }

    /// `Tf = (η ∘ f)^†`.
    pub fn fmap(&self, f: &MonotoneMap, budget: usize) -> Result<MonotoneMap, OrderError> {
        let eta = self.unit(f.cod(), budget)?;
        self.kleisli(&eta.compose(f)?, budget)
    }

    /// Extension in the other argument: `f : X × W → TY` gives
    /// `TX × W → TY`, as `extend(f ∘ swap) ∘ swap`.
    pub fn extendr(&self, f: &MonotoneMap, budget: usize) -> Result<MonotoneMap, OrderError> {
        let (x, w) = f
            .dom()
            .factors()
            .map(|(x, w)| (x.clone(), w.clone()))
            .ok_or_else(|| OrderError::Mismatch(format!("{} is not a product", f.dom())))?;
        let swap_in = MonotoneMap::swap(&w, &x, budget)?;
        let ext = self.extend(&f.compose(&swap_in)?, budget)?;
        let tx = self.obj(&x, budget)?;
        let swap_out = MonotoneMap::swap(&tx, &w, budget)?;
        ext.compose(&swap_out)
    }

    /// Left-to-right sequencing `extendr(extend η) : TX₁ × TX₂ → T(X₁ × X₂)`.
    pub fn seq(&self, x1: &Poset, x2: &Poset, budget: usize) -> Result<MonotoneMap, OrderError> {
        let eta = self.unit(&Poset::product(x1, x2, budget)?, budget)?;
        self.extendr(&self.extend(&eta, budget)?, budget)
    }

    /// Right-to-left sequencing `extend(extendr η)`.
    pub fn seqr(&self, x1: &Poset, x2: &Poset, budget: usize) -> Result<MonotoneMap, OrderError> {
        let eta = self.unit(&Poset::product(x1, x2, budget)?, budget)?;
        self.extend(&self.extendr(&eta, budget)?, budget)
    }

    /// Pointwise left-to-right sequencing, for `t1 ∈ TX₁`, `t2 ∈ TX₂` and
    /// `t12 = T(X₁ × X₂)`.
    pub fn seq_at(&self, tx1: &Poset, tx2: &Poset, t12: &Poset, t1: u32, t2: u32) -> u32 {
        let x12 = self.base_of(t12);
        self.bind(tx1, t12, t1, &|a| {
            self.bind(tx2, t12, t2, &|b| self.unit_at(t12, x12.pair(a, b)))
        })
    }

    /// Recovers `X` from `TX`.
    pub fn base_of(&self, tx: &Poset) -> Poset {
        match self {
            Monad::Identity => tx.clone(),
            Monad::Lift => tx.lifted().expect("lifted carrier").clone(),
            Monad::Downset => tx.down_base().expect("downset carrier").clone(),
            Monad::Writer(_) => tx.factors().expect("writer carrier").0.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::poset::DEFAULT_BUDGET as B;

    fn monads() -> Vec<Monad> {
        vec![
            Monad::identity(),
            Monad::lift(),
            Monad::downset(),
            Monad::default_writer(),
            Monad::writer(OrderedMonoid::preset(MonoidPreset::TruncatedWords)),
        ]
    }

    #[test]
    fn carrier_sizes() {
        let two = Poset::two();
        assert_eq!(Monad::lift().obj(&two, B).unwrap().size(), 3);
        assert_eq!(Monad::downset().obj(&two, B).unwrap().size(), 4);
        assert_eq!(Monad::default_writer().obj(&two, B).unwrap().size(), 8);
        assert_eq!(
            OrderedMonoid::preset(MonoidPreset::TruncatedWords).poset().size(),
            1 + 2 + 4 + 8
        );
    }

    #[test]
    fn identity_seq_is_pairing() {
        let two = Poset::two();
        let s = Monad::identity().seq(&two, &two, B).unwrap();
        assert_eq!(s, MonotoneMap::identity(s.dom()));
    }

    #[test]
    fn lift_seq_is_strict() {
        let two = Poset::two();
        let m = Monad::lift();
        let s = m.seq(&two, &two, B).unwrap();
        let (t1, t2) = s.dom().factors().unwrap();
        for a in t1.elements() {
            for b in t2.elements() {
                let r = s.apply(s.dom().pair(a, b));
                assert_eq!(r == 0, a == 0 || b == 0);
            }
        }
    }

    #[test]
    fn downset_seq_is_cartesian_product() {
        let two = Poset::two();
        let m = Monad::downset();
        let s = m.seq(&two, &two, B).unwrap();
        let (t1, t2) = s.dom().factors().unwrap();
        let x12 = Poset::product(&two, &two, B).unwrap();
        for a in t1.elements() {
            for b in t2.elements() {
                let got: Vec<usize> = s.cod().set(s.apply(s.dom().pair(a, b))).iter().collect();
                let mut want: Vec<usize> = Vec::new();
                for x in t1.set(a).iter() {
                    for y in t2.set(b).iter() {
                        want.push(x12.pair(x as u32, y as u32) as usize);
                    }
                }
                want.sort();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn pointwise_seq_agrees_with_literal_construction() {
        let two = Poset::two();
        let l = Poset::chain(2);
        for m in monads() {
            let s = m.seq(&two, &l, B).unwrap();
            let (tx1, tx2) = s.dom().factors().unwrap();
            for i in s.dom().elements() {
                let (a, b) = s.dom().unpair(i);
                assert_eq!(s.apply(i), m.seq_at(tx1, tx2, s.cod(), a, b), "{m}");
            }
        }
    }

    #[test]
    fn commutativity_pattern() {
        let two = Poset::two();
        for m in monads() {
            let same = m.seq(&two, &two, B).unwrap() == m.seqr(&two, &two, B).unwrap();
            assert_eq!(same, !matches!(m, Monad::Writer(_)), "{m}");
        }
    }

    #[test]
    fn unit_laws_on_two() {
        let two = Poset::two();
        for m in monads() {
            let eta = m.unit(&two, B).unwrap();
            assert_eq!(m.kleisli(&eta, B).unwrap(), MonotoneMap::identity(eta.cod()), "{m}");
            assert_eq!(m.fmap(&MonotoneMap::identity(&two), B).unwrap(), MonotoneMap::identity(eta.cod()));
        }
    }

    #[test]
    fn rejects_bad_monoids() {
        let p = Poset::discrete(2);
        // Not associative with a unit: a·a = unit is fine, so break the unit.
        assert!(OrderedMonoid::new("bad", p.clone(), vec![1, 1, 1, 1], 0).is_err());
        let c = Poset::chain(2);
        // Multiplication reversing the order.
        assert!(OrderedMonoid::new("rev", c, vec![0, 1, 1, 0], 0).is_err());
    }
}
