//! Monotone maps between finite posets, stored as tables.

use std::fmt;

use rand::Rng;

use super::poset::{OrderError, Poset, Side};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonotoneMap {
    dom: Poset,
    cod: Poset,
    table: Vec<u32>,
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonotoneMap({} → {}, {:?})", self.dom, self.cod, self.table)
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.dom.elements() {
            writeln!(f, "{} ↦ {}", self.dom.label(x), self.cod.label(self.apply(x)))?;
        }
        Ok(())
    }
}

fn mismatch(what: &str, expected: &Poset, found: &Poset) -> OrderError {
    OrderError::Mismatch(format!("{what}: expected {expected}, found {found}"))
}

impl MonotoneMap {
    /// Builds a map from a table, checking range and monotonicity.
    pub fn new(dom: &Poset, cod: &Poset, table: Vec<u32>) -> Result<Self, OrderError> {
        if table.len() != dom.size() {
            return Err(OrderError::Mismatch(format!(
                "table has {} entries for a domain of size {}",
                table.len(),
                dom.size()
            )));
        }
        if let Some(bad) = table.iter().find(|&&y| y as usize >= cod.size()) {
            return Err(OrderError::Mismatch(format!("{bad} is outside {cod}")));
        }
        let map = MonotoneMap::new_unchecked(dom, cod, table);
        if let Some((x, y)) = map.monotonicity_violation() {
            return Err(OrderError::NotMonotone(format!(
                "{} ⊑ {} but {} ⋢ {}",
                dom.label(x),
                dom.label(y),
                cod.label(map.apply(x)),
                cod.label(map.apply(y))
            )));
        }
        Ok(map)
    }

    pub fn new_unchecked(dom: &Poset, cod: &Poset, table: Vec<u32>) -> Self {
        MonotoneMap {
            dom: dom.clone(),
            cod: cod.clone(),
            table,
        }
    }

    pub fn from_fn(dom: &Poset, cod: &Poset, f: impl Fn(u32) -> u32) -> Result<Self, OrderError> {
        MonotoneMap::new(dom, cod, dom.elements().map(f).collect())
    }

    pub fn from_fn_unchecked(dom: &Poset, cod: &Poset, f: impl Fn(u32) -> u32) -> Self {
        MonotoneMap::new_unchecked(dom, cod, dom.elements().map(f).collect())
    }

    pub fn dom(&self) -> &Poset {
        &self.dom
    }

    pub fn cod(&self) -> &Poset {
        &self.cod
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn monotonicity_violation(&self) -> Option<(u32, u32)> {
        for x in self.dom.elements() {
            for y in self.dom.elements() {
                if x != y && self.dom.leq(x, y) && !self.cod.leq(self.apply(x), self.apply(y)) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MonotoneMap) -> Result<Self, OrderError> {
        if inner.cod != self.dom {
            return Err(mismatch("composite", &self.dom, &inner.cod));
        }
        Ok(MonotoneMap::from_fn_unchecked(&inner.dom, &self.cod, |x| {
            self.apply(inner.apply(x))
        }))
    }

    pub fn identity(p: &Poset) -> Self {
        MonotoneMap::from_fn_unchecked(p, p, |x| x)
    }

    pub fn constant(dom: &Poset, cod: &Poset, c: u32) -> Self {
        MonotoneMap::from_fn_unchecked(dom, cod, |_| c)
    }

    /// The unique map `p → 1`.
    pub fn terminal(p: &Poset) -> Self {
        MonotoneMap::constant(p, &Poset::terminal(), 0)
    }

    /// First element where `self(x) ⋢ other(x)`.
    pub fn leq_violation(&self, other: &MonotoneMap) -> Result<Option<u32>, OrderError> {
        self.same_shape(other)?;
        Ok(self
            .dom
            .elements()
            .find(|&x| !self.cod.leq(self.apply(x), other.apply(x))))
    }

    /// Pointwise order; maps of different shapes are unrelated.
    pub fn leq(&self, other: &MonotoneMap) -> bool {
        matches!(self.leq_violation(other), Ok(None))
    }

    fn same_shape(&self, other: &MonotoneMap) -> Result<(), OrderError> {
        if self.dom != other.dom {
            return Err(mismatch("domain", &self.dom, &other.dom));
        }
        if self.cod != other.cod {
            return Err(mismatch("codomain", &self.cod, &other.cod));
        }
        Ok(())
    }

    /// `⟨f, g⟩ : X → Y × Z`.
    pub fn pairing(f: &MonotoneMap, g: &MonotoneMap, budget: usize) -> Result<Self, OrderError> {
        if f.dom != g.dom {
            return Err(mismatch("pairing", &f.dom, &g.dom));
        }
        let cod = Poset::product(&f.cod, &g.cod, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(&f.dom, &cod, |x| {
            cod.pair(f.apply(x), g.apply(x))
        }))
    }

    /// `f × g : A × B → C × D`.
    pub fn product_map(f: &MonotoneMap, g: &MonotoneMap, budget: usize) -> Result<Self, OrderError> {
        let dom = Poset::product(&f.dom, &g.dom, budget)?;
        let cod = Poset::product(&f.cod, &g.cod, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(&dom, &cod, |i| {
            let (a, b) = dom.unpair(i);
            cod.pair(f.apply(a), g.apply(b))
        }))
    }

    fn factors_of(prod: &Poset) -> Result<(Poset, Poset), OrderError> {
        prod.factors()
            .map(|(p, q)| (p.clone(), q.clone()))
            .ok_or_else(|| OrderError::Mismatch(format!("{prod} is not a product")))
    }

    pub fn proj1(prod: &Poset) -> Result<Self, OrderError> {
        let (p, _) = MonotoneMap::factors_of(prod)?;
        Ok(MonotoneMap::from_fn_unchecked(prod, &p, |i| prod.unpair(i).0))
    }

    pub fn proj2(prod: &Poset) -> Result<Self, OrderError> {
        let (_, q) = MonotoneMap::factors_of(prod)?;
        Ok(MonotoneMap::from_fn_unchecked(prod, &q, |i| prod.unpair(i).1))
    }

    /// `p × q → q × p`.
    pub fn swap(p: &Poset, q: &Poset, budget: usize) -> Result<Self, OrderError> {
        let dom = Poset::product(p, q, budget)?;
        let cod = Poset::product(q, p, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(&dom, &cod, |i| {
            let (a, b) = dom.unpair(i);
            cod.pair(b, a)
        }))
    }

    /// `(a × b) × c → a × (b × c)`.
    pub fn assoc(a: &Poset, b: &Poset, c: &Poset, budget: usize) -> Result<Self, OrderError> {
        let ab = Poset::product(a, b, budget)?;
        let dom = Poset::product(&ab, c, budget)?;
        let bc = Poset::product(b, c, budget)?;
        let cod = Poset::product(a, &bc, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(&dom, &cod, |i| {
            let (xy, z) = dom.unpair(i);
            let (x, y) = ab.unpair(xy);
            cod.pair(x, bc.pair(y, z))
        }))
    }

    /// `β_{W,Y,X} = ⟨⟨π₁∘π₁, π₂⟩, π₂∘π₁⟩ : (W × Y) × X → (W × X) × Y`.
    pub fn beta(w: &Poset, y: &Poset, x: &Poset, budget: usize) -> Result<Self, OrderError> {
        let wy = Poset::product(w, y, budget)?;
        let dom = Poset::product(&wy, x, budget)?;
        let wx = Poset::product(w, x, budget)?;
        let cod = Poset::product(&wx, y, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(&dom, &cod, |i| {
            let (wy_i, xi) = dom.unpair(i);
            let (wi, yi) = wy.unpair(wy_i);
            cod.pair(wx.pair(wi, xi), yi)
        }))
    }

    /// `curry f : W → [X → Y]` for `f : W × X → Y`.
    pub fn curry(f: &MonotoneMap, budget: usize) -> Result<Self, OrderError> {
        let (w, x) = MonotoneMap::factors_of(&f.dom)?;
        let exp = Poset::exponential(&x, &f.cod, budget)?;
        let mut table = Vec::with_capacity(w.size());
        for a in w.elements() {
            let row: Vec<u32> = x.elements().map(|b| f.apply(f.dom.pair(a, b))).collect();
            let g = exp.lookup_table(&row).ok_or_else(|| {
                OrderError::NotMonotone(format!("section at {} of a map being curried", w.label(a)))
            })?;
            table.push(g);
        }
        Ok(MonotoneMap::new_unchecked(&w, &exp, table))
    }

    /// `uncurry g : W × X → Y` for `g : W → [X → Y]`.
    pub fn uncurry(g: &MonotoneMap, budget: usize) -> Result<Self, OrderError> {
        let (x, y) = g
            .cod
            .exp_parts()
            .map(|(x, y)| (x.clone(), y.clone()))
            .ok_or_else(|| OrderError::Mismatch(format!("{} is not an exponential", g.cod)))?;
        let dom = Poset::product(&g.dom, &x, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(&dom, &y, |i| {
            let (a, b) = dom.unpair(i);
            g.cod.apply(g.apply(a), b)
        }))
    }

    /// `ev : [X → Y] × X → Y`.
    pub fn eval(exp: &Poset, budget: usize) -> Result<Self, OrderError> {
        let (x, y) = exp
            .exp_parts()
            .map(|(x, y)| (x.clone(), y.clone()))
            .ok_or_else(|| OrderError::Mismatch(format!("{exp} is not an exponential")))?;
        let dom = Poset::product(exp, &x, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(&dom, &y, |i| {
            let (f, a) = dom.unpair(i);
            exp.apply(f, a)
        }))
    }

    /// `h → k : [A → B] → [C → D]`, sending `F` to `k ∘ F ∘ h`, for
    /// `h : C → A` and `k : B → D`.
    pub fn arrow_map(h: &MonotoneMap, k: &MonotoneMap, budget: usize) -> Result<Self, OrderError> {
        let dom = Poset::exponential(&h.cod, &k.dom, budget)?;
        let cod = Poset::exponential(&h.dom, &k.cod, budget)?;
        let mut table = Vec::with_capacity(dom.size());
        for f in dom.elements() {
            let row: Vec<u32> = h.dom.elements().map(|c| k.apply(dom.apply(f, h.apply(c)))).collect();
            table.push(cod.lookup_table(&row).expect("composites of monotone maps are monotone"));
        }
        Ok(MonotoneMap::new_unchecked(&dom, &cod, table))
    }

    /// `inl : p → p + q`.
    pub fn inl(p: &Poset, q: &Poset, budget: usize) -> Result<Self, OrderError> {
        let sum = Poset::sum(p, q, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(p, &sum, |a| sum.inl(a)))
    }

    /// `inr : q → p + q`.
    pub fn inr(p: &Poset, q: &Poset, budget: usize) -> Result<Self, OrderError> {
        let sum = Poset::sum(p, q, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(q, &sum, |b| sum.inr(b)))
    }

    /// `[f, g] : P + Q → R`.
    pub fn copair(f: &MonotoneMap, g: &MonotoneMap, budget: usize) -> Result<Self, OrderError> {
        if f.cod != g.cod {
            return Err(mismatch("copairing", &f.cod, &g.cod));
        }
        let sum = Poset::sum(&f.dom, &g.dom, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(&sum, &f.cod, |i| match sum.case(i) {
            Side::Left(a) => f.apply(a),
            Side::Right(b) => g.apply(b),
        }))
    }

    /// `dist_W : W × 2 → W + W`, inverse to `[W × inl, W × inr]`.
    pub fn dist(w: &Poset, budget: usize) -> Result<Self, OrderError> {
        let two = Poset::two();
        let dom = Poset::product(w, &two, budget)?;
        let cod = Poset::sum(w, w, budget)?;
        Ok(MonotoneMap::from_fn_unchecked(&dom, &cod, |i| {
            let (a, b) = dom.unpair(i);
            if b == 0 {
                cod.inl(a)
            } else {
                cod.inr(a)
            }
        }))
    }

    /// `1 × X → X` and its inverse, used to read a map out of the
    /// strong extension with a trivial environment.
    pub fn left_unitor(x: &Poset, budget: usize) -> Result<(Self, Self), OrderError> {
        let dom = Poset::product(&Poset::terminal(), x, budget)?;
        let to = MonotoneMap::from_fn_unchecked(&dom, x, |i| dom.unpair(i).1);
        let from = MonotoneMap::from_fn_unchecked(x, &dom, |a| dom.pair(0, a));
        Ok((to, from))
    }

    /// Whether the table is injective.
    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        for &y in &self.table {
            if std::mem::replace(&mut seen[y as usize], true) {
                return false;
            }
        }
        true
    }

    /// Every monotone map `dom → cod`, in the exponential's order.
    pub fn enumerate(dom: &Poset, cod: &Poset, budget: usize) -> Result<Vec<Self>, OrderError> {
        let exp = Poset::exponential(dom, cod, budget)?;
        Ok(exp
            .elements()
            .map(|f| MonotoneMap::new_unchecked(dom, cod, exp.table(f).to_vec()))
            .collect())
    }

    /// A monotone map drawn by assigning values along a linear extension
    /// of `dom`, each chosen uniformly among the values above everything
    /// already assigned below it. `None` when some element has no such
    /// value, which cannot happen when `cod` has finite joins.
    pub fn random<R: Rng + ?Sized>(dom: &Poset, cod: &Poset, rng: &mut R) -> Option<Self> {
        let n = dom.size();
        let mut below = vec![0usize; n];
        for x in dom.elements() {
            below[x as usize] = dom.elements().filter(|&y| y != x && dom.leq(y, x)).count();
        }
        let mut order: Vec<u32> = dom.elements().collect();
        order.sort_by_key(|&x| below[x as usize]);
        let mut table = vec![u32::MAX; n];
        for &x in &order {
            let options: Vec<u32> = cod
                .elements()
                .filter(|&v| {
                    dom.elements()
                        .all(|y| table[y as usize] == u32::MAX || !dom.leq(y, x) || cod.leq(table[y as usize], v))
                })
                .collect();
            if options.is_empty() {
                return None;
            }
            table[x as usize] = options[rng.gen_range(0..options.len())];
        }
        Some(MonotoneMap::new_unchecked(dom, cod, table))
    }
}
