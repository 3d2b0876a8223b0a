//! Algebras for a monad: free algebras and the product and exponential
//! constructions on them.
//!
//! [`Algebra::extend_at`] computes the extension operator at a point,
//! evaluating the argument only on the monad's support. [`Algebra::extend`]
//! builds the whole table from the defining combinator expressions, so the
//! two routes can be compared.

use std::sync::Arc;

use super::map::MonotoneMap;
use super::monad::Monad;
use super::poset::{OrderError, Poset};

#[derive(Clone, PartialEq, Eq)]
pub struct Algebra(Arc<AlgInner>);

#[derive(PartialEq, Eq)]
struct AlgInner {
    monad: Monad,
    carrier: Poset,
    structure: Structure,
}

#[derive(Clone, PartialEq, Eq)]
pub enum Structure {
    /// `(TX, extend)`.
    Free(Poset),
    Product(Algebra, Algebra),
    /// Maps from the poset into the algebra's carrier.
    Exponential(Poset, Algebra),
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.structure() {
            Structure::Free(x) => write!(f, "F({x})"),
            Structure::Product(a, b) => write!(f, "({a:?} & {b:?})"),
            Structure::Exponential(y, z) => write!(f, "({y} → {z:?})"),
        }
    }
}

impl Algebra {
    pub fn free(monad: &Monad, x: &Poset, budget: usize) -> Result<Self, OrderError> {
        Ok(Algebra(Arc::new(AlgInner {
            monad: monad.clone(),
            carrier: monad.obj(x, budget)?,
            structure: Structure::Free(x.clone()),
        })))
    }

    pub fn product(a: &Algebra, b: &Algebra, budget: usize) -> Result<Self, OrderError> {
        if a.monad() != b.monad() {
            return Err(OrderError::Mismatch("algebras over different monads".into()));
        }
        Ok(Algebra(Arc::new(AlgInner {
            monad: a.monad().clone(),
            carrier: Poset::product(a.carrier(), b.carrier(), budget)?,
            structure: Structure::Product(a.clone(), b.clone()),
        })))
    }

    pub fn exponential(y: &Poset, z: &Algebra, budget: usize) -> Result<Self, OrderError> {
        Ok(Algebra(Arc::new(AlgInner {
            monad: z.monad().clone(),
            carrier: Poset::exponential(y, z.carrier(), budget)?,
            structure: Structure::Exponential(y.clone(), z.clone()),
        })))
    }

    pub fn monad(&self) -> &Monad {
        &self.0.monad
    }

    pub fn carrier(&self) -> &Poset {
        &self.0.carrier
    }

    pub fn structure(&self) -> &Structure {
        &self.0.structure
    }

    /// `algextend f` at `t ∈ tx = TX`, for `f : X → carrier` given
    /// elementwise.
    pub fn extend_at(&self, tx: &Poset, t: u32, f: &dyn Fn(u32) -> u32) -> u32 {
        let support = self.monad().support(tx, t);
        let values: Vec<(u32, u32)> = support.iter().map(|&a| (a, f(a))).collect();
        let lookup = |a: u32| -> u32 {
            values
                .iter()
                .find(|(b, _)| *b == a)
                .map(|(_, v)| *v)
                .expect("extension only evaluates on the support")
        };
        self.extend_tabled(tx, t, &lookup)
    }

    fn extend_tabled(&self, tx: &Poset, t: u32, f: &dyn Fn(u32) -> u32) -> u32 {
        match self.structure() {
            Structure::Free(_) => self.monad().bind(tx, self.carrier(), t, f),
            Structure::Product(a, b) => {
                let c = self.carrier();
                let l = a.extend_tabled(tx, t, &|x| c.unpair(f(x)).0);
                let r = b.extend_tabled(tx, t, &|x| c.unpair(f(x)).1);
                c.pair(l, r)
            }
            Structure::Exponential(y, z) => {
                let c = self.carrier();
                let row: Vec<u32> = y
                    .elements()
                    .map(|b| z.extend_tabled(tx, t, &|x| c.apply(f(x), b)))
                    .collect();
                c.lookup_table(&row).expect("algebra extensions are monotone")
            }
        }
    }

    /// The extension operator as a table: `f : W × X → carrier` gives
    /// `W × TX → carrier`. Products use `⟨algextend(π₁∘f), algextend(π₂∘f)⟩`;
    /// exponentials use `curry(algextend(uncurry f ∘ β) ∘ β)`.
    pub fn extend(&self, f: &MonotoneMap, budget: usize) -> Result<MonotoneMap, OrderError> {
        if f.cod() != self.carrier() {
            return Err(OrderError::Mismatch(format!(
                "extension target {} is not the carrier {}",
                f.cod(),
                self.carrier()
            )));
        }
        let (w, x) = f
            .dom()
            .factors()
            .map(|(w, x)| (w.clone(), x.clone()))
            .ok_or_else(|| OrderError::Mismatch(format!("{} is not a product", f.dom())))?;
        match self.structure() {
            Structure::Free(_) => self.monad().extend(f, budget),
            Structure::Product(a, b) => {
                let p1 = MonotoneMap::proj1(self.carrier())?;
                let p2 = MonotoneMap::proj2(self.carrier())?;
                let l = a.extend(&p1.compose(f)?, budget)?;
                let r = b.extend(&p2.compose(f)?, budget)?;
                MonotoneMap::pairing(&l, &r, budget)
            }
            Structure::Exponential(y, z) => {
                let uncurried = MonotoneMap::uncurry(f, budget)?;
                let inner = uncurried.compose(&MonotoneMap::beta(&w, y, &x, budget)?)?;
                let ext = z.extend(&inner, budget)?;
                let tx = self.monad().obj(&x, budget)?;
                let outer = ext.compose(&MonotoneMap::beta(&w, &tx, y, budget)?)?;
                MonotoneMap::curry(&outer, budget)
            }
        }
    }

    pub fn bottom(&self) -> Option<u32> {
        self.carrier().least()
    }

    pub fn join(&self, a: u32, b: u32) -> Option<u32> {
        self.carrier().join(a, b)
    }
}

/// Least fixed point of a monotone endomap, by iteration from the bottom.
pub fn least_fixpoint(alg: &Algebra, f: &MonotoneMap) -> Result<u32, OrderError> {
    if f.dom() != alg.carrier() || f.cod() != alg.carrier() {
        return Err(OrderError::Mismatch("fixpoint of a map that is not an endomap on the carrier".into()));
    }
    least_fixpoint_with(alg.carrier(), |z| f.apply(z))
}

pub fn least_fixpoint_with(p: &Poset, f: impl Fn(u32) -> u32) -> Result<u32, OrderError> {
    let mut z = p
        .least()
        .ok_or_else(|| OrderError::Invalid(format!("{p} has no least element")))?;
    loop {
        let next = f(z);
        if next == z {
            return Ok(z);
        }
        z = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::monad::MonoidPreset;
    use crate::order::monad::OrderedMonoid;
    use crate::order::poset::DEFAULT_BUDGET as B;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

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
        let m = Monad::lift();
        let f2 = Algebra::free(&m, &two, B).unwrap();
        assert_eq!(f2.carrier().size(), 3);
        assert_eq!(Algebra::exponential(&two, &f2, B).unwrap().carrier().size(), 9);
    }

    #[test]
    fn pointwise_and_literal_extensions_agree() {
        let two = Poset::two();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in monads() {
            let f2 = Algebra::free(&m, &two, B).unwrap();
            let f22 = Algebra::product(&f2, &f2, B).unwrap();
            let mut algs = vec![f2.clone(), f22.clone(), Algebra::exponential(&two, &f2, B).unwrap()];
            // Too large for the word monoid.
            if let Ok(nested) = Algebra::exponential(&two, &f22, B) {
                algs.push(nested);
            }
            let w = Poset::chain(2);
            for alg in algs {
                let dom = Poset::product(&w, &two, B).unwrap();
                for _ in 0..20 {
                    let Some(f) = random_monotone(&dom, alg.carrier(), &mut rng) else { continue };
                    let lit = alg.extend(&f, B).unwrap();
                    let tx = m.obj(&two, B).unwrap();
                    for i in lit.dom().elements() {
                        let (a, t) = lit.dom().unpair(i);
                        let pt = alg.extend_at(&tx, t, &|x| f.apply(dom.pair(a, x)));
                        assert_eq!(lit.apply(i), pt, "{m} {alg:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn fixpoints_match_brute_force() {
        let m = Monad::lift();
        let two = Poset::two();
        let f2 = Algebra::free(&m, &two, B).unwrap();
        let alg = Algebra::exponential(&two, &f2, B).unwrap();
        let c = alg.carrier();
        assert_eq!(least_fixpoint(&alg, &MonotoneMap::identity(c)).unwrap(), c.least().unwrap());
        for z in c.elements() {
            assert_eq!(least_fixpoint(&alg, &MonotoneMap::constant(c, c, z)).unwrap(), z);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 50 {
            let Some(f) = random_monotone(c, c, &mut rng) else { continue };
            checked += 1;
            let fixed: Vec<u32> = c.elements().filter(|&z| f.apply(z) == z).collect();
            let least = fixed
                .iter()
                .copied()
                .find(|&z| fixed.iter().all(|&y| c.leq(z, y)))
                .unwrap();
            assert_eq!(least_fixpoint(&alg, &f).unwrap(), least);
        }
    }

    // Assigns values along the index order, which extends the carrier's
    // domain order here, choosing among the values above everything assigned below.
    fn random_monotone(d: &Poset, c: &Poset, rng: &mut ChaCha8Rng) -> Option<MonotoneMap> {
        let mut table: Vec<u32> = Vec::new();
        for x in d.elements() {
            let options: Vec<u32> = c
                .elements()
                .filter(|&v| (0..x).all(|y| !d.leq(y, x) || c.leq(table[y as usize], v)))
                .collect();
            if options.is_empty() {
                return None;
            }
            table.push(options[rng.gen_range(0..options.len())]);
        }
        MonotoneMap::new(d, c, table).ok()
    }
}
