//! Finite posets with a canonical element numbering.
//!
//! Elements are `u32` indices `0..size`. Constructions fix the numbering:
//! products are row-major, sums put the left summand first, lifting puts
//! the new bottom at `0`, exponentials list monotone maps by their tables
//! in lexicographic order, and downsets are ordered as bit vectors read as
//! binary numbers. Posets are interned by a structural key, so building
//! the same construction twice yields the same shared value.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use super::bits::Bits;

/// Default cap on the number of elements of any constructed carrier.
pub const DEFAULT_BUDGET: usize = 8192;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("{what} has more than {limit} elements")]
    SizeBudgetExceeded { what: String, limit: usize },
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("map is not monotone: {0}")]
    NotMonotone(String),
    #[error("shape mismatch: {0}")]
    Mismatch(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
}

#[derive(Clone)]
pub struct Poset(Arc<Inner>);

struct Inner {
    key: String,
    size: usize,
    shape: Shape,
}

pub enum Shape {
    Discrete,
    Explicit { leq: Vec<bool>, labels: Vec<String> },
    Product(Poset, Poset),
    Sum(Poset, Poset),
    Lift(Poset),
    Exponential(ExpData),
    Downsets(DownData),
}

pub struct ExpData {
    pub dom: Poset,
    pub cod: Poset,
    tables: Vec<u32>,
    index: HashMap<Box<[u32]>, u32>,
}

pub struct DownData {
    pub base: Poset,
    sets: Vec<Bits>,
    index: HashMap<Bits, u32>,
}

enum Slot {
    Built(Poset),
    /// A previous attempt stopped after finding this many elements.
    TooLarge(usize),
}

fn registry() -> &'static Mutex<HashMap<String, Slot>> {
    static REGISTRY: OnceLock<Mutex<HashMap<String, Slot>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

enum Built {
    Shape(usize, Shape),
    TooLarge(usize),
}

fn intern(key: String, budget: usize, build: impl FnOnce() -> Built) -> Result<Poset, OrderError> {
    let over = |key: &str| OrderError::SizeBudgetExceeded {
        what: key.to_string(),
        limit: budget,
    };
    {
        let reg = registry().lock().expect("poset registry poisoned");
        match reg.get(&key) {
            Some(Slot::Built(p)) if p.size() <= budget => return Ok(p.clone()),
            Some(Slot::Built(_)) => return Err(over(&key)),
            Some(Slot::TooLarge(n)) if *n > budget => return Err(over(&key)),
            _ => {}
        }
    }
    match build() {
        Built::Shape(size, shape) => {
            let p = Poset(Arc::new(Inner {
                key: key.clone(),
                size,
                shape,
            }));
            let mut reg = registry().lock().expect("poset registry poisoned");
            let entry = reg.entry(key.clone()).or_insert(Slot::TooLarge(0));
            let p = match entry {
                Slot::Built(existing) => existing.clone(),
                _ => {
                    *entry = Slot::Built(p.clone());
                    p
                }
            };
            if p.size() > budget {
                Err(over(&key))
            } else {
                Ok(p)
            }
        }
        Built::TooLarge(n) => {
            let mut reg = registry().lock().expect("poset registry poisoned");
            let entry = reg.entry(key.clone()).or_insert(Slot::TooLarge(0));
            if let Slot::TooLarge(m) = entry {
                *m = (*m).max(n);
            }
            Err(over(&key))
        }
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.key == other.0.key
    }
}

impl Eq for Poset {}

impl std::hash::Hash for Poset {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.key.hash(state)
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.0.key, self.0.size)
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.key)
    }
}

impl Poset {
    pub fn key(&self) -> &str {
        &self.0.key
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn shape(&self) -> &Shape {
        &self.0.shape
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.size as u32
    }

    /// The discrete poset on `n` elements.
    pub fn discrete(n: usize) -> Poset {
        let key = match n {
            1 => "1".to_string(),
            n => format!("disc{n}"),
        };
        intern(key, usize::MAX, || Built::Shape(n, Shape::Discrete)).expect("discrete posets are unbounded")
    }

    pub fn terminal() -> Poset {
        Poset::discrete(1)
    }

    /// `1 + 1`, with `tt` the left and `ff` the right injection.
    pub fn two() -> Poset {
        let one = Poset::terminal();
        intern("2".to_string(), usize::MAX, || Built::Shape(2, Shape::Sum(one.clone(), one.clone())))
            .expect("two is small")
    }

    /// A poset given by its order matrix (row `a`, column `b` holds
    /// `a ⊑ b`). The matrix is checked to be a partial order.
    pub fn explicit(leq: Vec<Vec<bool>>, labels: Vec<String>) -> Result<Poset, OrderError> {
        let n = leq.len();
        if labels.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(OrderError::Invalid("order matrix and labels must be n×n and n".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(OrderError::NotAPartialOrder(format!("{} is not below itself", labels[a])));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(OrderError::NotAPartialOrder(format!(
                        "{} and {} are distinct but equivalent",
                        labels[a], labels[b]
                    )));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(OrderError::NotAPartialOrder(format!(
                            "{} ⊑ {} ⊑ {} but not {} ⊑ {}",
                            labels[a], labels[b], labels[c], labels[a], labels[c]
                        )));
                    }
                }
            }
        }
        let flat: Vec<bool> = leq.into_iter().flatten().collect();
        let bits: String = flat.iter().map(|b| if *b { '1' } else { '0' }).collect();
        let key = format!("explicit({n};{bits};{})", labels.join(","));
        intern(key, usize::MAX, || Built::Shape(n, Shape::Explicit { leq: flat, labels }))
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Poset {
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        Poset::explicit(leq, labels).expect("chains are partial orders")
    }

    pub fn product(p: &Poset, q: &Poset, budget: usize) -> Result<Poset, OrderError> {
        let key = format!("({}×{})", p.key(), q.key());
        let size = p.size().saturating_mul(q.size());
        if size > budget {
            return Err(OrderError::SizeBudgetExceeded { what: key, limit: budget });
        }
        intern(key, budget, || Built::Shape(size, Shape::Product(p.clone(), q.clone())))
    }

    /// Left-nested product `((1 × X1) × X2) × …`.
    pub fn product_of(factors: &[Poset], budget: usize) -> Result<Poset, OrderError> {
        let mut acc = Poset::terminal();
        for f in factors {
            acc = Poset::product(&acc, f, budget)?;
        }
        Ok(acc)
    }

    pub fn sum(p: &Poset, q: &Poset, budget: usize) -> Result<Poset, OrderError> {
        if p.size() == 1 && q.size() == 1 && *p == Poset::terminal() && *q == Poset::terminal() {
            return Ok(Poset::two());
        }
        let key = format!("({}+{})", p.key(), q.key());
        let size = p.size() + q.size();
        if size > budget {
            return Err(OrderError::SizeBudgetExceeded { what: key, limit: budget });
        }
        intern(key, budget, || Built::Shape(size, Shape::Sum(p.clone(), q.clone())))
    }

    /// Adjoins a fresh least element at index `0`.
    pub fn lift(p: &Poset, budget: usize) -> Result<Poset, OrderError> {
        let key = format!("lift({})", p.key());
        let size = p.size() + 1;
        if size > budget {
            return Err(OrderError::SizeBudgetExceeded { what: key, limit: budget });
        }
        intern(key, budget, || Built::Shape(size, Shape::Lift(p.clone())))
    }

    /// Monotone maps `dom → cod` ordered pointwise.
    pub fn exponential(dom: &Poset, cod: &Poset, budget: usize) -> Result<Poset, OrderError> {
        let key = format!("[{}→{}]", dom.key(), cod.key());
        intern(key, budget, || match enumerate_monotone(dom, cod, budget) {
            Ok(tables) => {
                let n = dom.size();
                let count = tables.len().checked_div(n).unwrap_or(1);
                let mut index = HashMap::with_capacity(count);
                for i in 0..count {
                    index.insert(tables[i * n..(i + 1) * n].to_vec().into_boxed_slice(), i as u32);
                }
                Built::Shape(
                    count,
                    Shape::Exponential(ExpData {
                        dom: dom.clone(),
                        cod: cod.clone(),
                        tables,
                        index,
                    }),
                )
            }
            Err(at_least) => Built::TooLarge(at_least),
        })
    }

    /// Downward-closed subsets of `base` ordered by inclusion.
    pub fn downsets(base: &Poset, budget: usize) -> Result<Poset, OrderError> {
        let key = format!("down({})", base.key());
        intern(key, budget, || match enumerate_downsets(base, budget) {
            Ok(sets) => {
                let index = sets.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
                Built::Shape(
                    sets.len(),
                    Shape::Downsets(DownData {
                        base: base.clone(),
                        sets,
                        index,
                    }),
                )
            }
            Err(at_least) => Built::TooLarge(at_least),
        })
    }

    pub fn leq(&self, a: u32, b: u32) -> bool {
        if a == b {
            return true;
        }
        match self.shape() {
            Shape::Discrete => false,
            Shape::Explicit { leq, .. } => leq[a as usize * self.size() + b as usize],
            Shape::Product(p, q) => {
                let (a1, a2) = self.unpair(a);
                let (b1, b2) = self.unpair(b);
                p.leq(a1, b1) && q.leq(a2, b2)
            }
            Shape::Sum(p, q) => match (self.case(a), self.case(b)) {
                (Side::Left(x), Side::Left(y)) => p.leq(x, y),
                (Side::Right(x), Side::Right(y)) => q.leq(x, y),
                _ => false,
            },
            Shape::Lift(p) => a == 0 || (b != 0 && p.leq(a - 1, b - 1)),
            Shape::Exponential(e) => {
                let ta = self.table(a);
                let tb = self.table(b);
                ta.iter().zip(tb).all(|(x, y)| e.cod.leq(*x, *y))
            }
            Shape::Downsets(d) => d.sets[a as usize].is_subset(&d.sets[b as usize]),
        }
    }

    pub fn lt(&self, a: u32, b: u32) -> bool {
        a != b && self.leq(a, b)
    }

    /// Whether the order is equality.
    pub fn is_discrete(&self) -> bool {
        match self.shape() {
            Shape::Discrete => true,
            Shape::Product(p, q) | Shape::Sum(p, q) => p.is_discrete() && q.is_discrete(),
            Shape::Lift(p) => p.size() == 0,
            _ => self
                .elements()
                .all(|a| self.elements().all(|b| a == b || !self.leq(a, b))),
        }
    }

    // Products.

    pub fn factors(&self) -> Option<(&Poset, &Poset)> {
        match self.shape() {
            Shape::Product(p, q) => Some((p, q)),
            _ => None,
        }
    }

    pub fn pair(&self, a: u32, b: u32) -> u32 {
        let (_, q) = self.factors().expect("pair on a non-product");
        a * q.size() as u32 + b
    }

    pub fn unpair(&self, i: u32) -> (u32, u32) {
        let (_, q) = self.factors().expect("unpair on a non-product");
        let m = q.size() as u32;
        (i / m, i % m)
    }

    // Sums.

    pub fn summands(&self) -> Option<(&Poset, &Poset)> {
        match self.shape() {
            Shape::Sum(p, q) => Some((p, q)),
            _ => None,
        }
    }

    pub fn inl(&self, a: u32) -> u32 {
        a
    }

    pub fn inr(&self, b: u32) -> u32 {
        let (p, _) = self.summands().expect("inr on a non-sum");
        p.size() as u32 + b
    }

    pub fn case(&self, i: u32) -> Side {
        let (p, _) = self.summands().expect("case on a non-sum");
        let n = p.size() as u32;
        if i < n {
            Side::Left(i)
        } else {
            Side::Right(i - n)
        }
    }

    // Lifting.

    pub fn lifted(&self) -> Option<&Poset> {
        match self.shape() {
            Shape::Lift(p) => Some(p),
            _ => None,
        }
    }

    // Exponentials.

    pub fn exp_parts(&self) -> Option<(&Poset, &Poset)> {
        match self.shape() {
            Shape::Exponential(e) => Some((&e.dom, &e.cod)),
            _ => None,
        }
    }

    pub fn table(&self, f: u32) -> &[u32] {
        match self.shape() {
            Shape::Exponential(e) => {
                let n = e.dom.size();
                &e.tables[f as usize * n..(f as usize + 1) * n]
            }
            _ => panic!("table of an element of a non-exponential {}", self.key()),
        }
    }

    pub fn apply(&self, f: u32, x: u32) -> u32 {
        self.table(f)[x as usize]
    }

    pub fn lookup_table(&self, table: &[u32]) -> Option<u32> {
        match self.shape() {
            Shape::Exponential(e) => e.index.get(table).copied(),
            _ => None,
        }
    }

    // Downsets.

    pub fn down_base(&self) -> Option<&Poset> {
        match self.shape() {
            Shape::Downsets(d) => Some(&d.base),
            _ => None,
        }
    }

    pub fn set(&self, i: u32) -> &Bits {
        match self.shape() {
            Shape::Downsets(d) => &d.sets[i as usize],
            _ => panic!("set of an element of a non-downset poset {}", self.key()),
        }
    }

    pub fn lookup_set(&self, set: &Bits) -> Option<u32> {
        match self.shape() {
            Shape::Downsets(d) => d.index.get(set).copied(),
            _ => None,
        }
    }

    /// The principal downset `↓x`.
    pub fn principal(&self, x: u32) -> u32 {
        let base = self.down_base().expect("principal on a non-downset poset");
        let mut bits = Bits::empty(base.size());
        for y in base.elements() {
            if base.leq(y, x) {
                bits.insert(y as usize);
            }
        }
        self.lookup_set(&bits).expect("principal downsets are enumerated")
    }

    // Order-theoretic structure.

    pub fn least(&self) -> Option<u32> {
        match self.shape() {
            Shape::Product(p, q) => Some(self.pair(p.least()?, q.least()?)),
            Shape::Lift(_) => Some(0),
            Shape::Exponential(e) => {
                if e.dom.size() == 0 {
                    return Some(0);
                }
                let b = e.cod.least()?;
                self.lookup_table(&vec![b; e.dom.size()])
            }
            Shape::Downsets(d) => self.lookup_set(&Bits::empty(d.base.size())),
            _ => self.elements().find(|&a| self.elements().all(|b| self.leq(a, b))),
        }
    }

    /// Least upper bound of two elements, if it exists.
    pub fn join(&self, a: u32, b: u32) -> Option<u32> {
        if self.leq(a, b) {
            return Some(b);
        }
        if self.leq(b, a) {
            return Some(a);
        }
        match self.shape() {
            Shape::Discrete => None,
            Shape::Product(p, q) => {
                let (a1, a2) = self.unpair(a);
                let (b1, b2) = self.unpair(b);
                Some(self.pair(p.join(a1, b1)?, q.join(a2, b2)?))
            }
            Shape::Sum(p, q) => match (self.case(a), self.case(b)) {
                (Side::Left(x), Side::Left(y)) => Some(self.inl(p.join(x, y)?)),
                (Side::Right(x), Side::Right(y)) => Some(self.inr(q.join(x, y)?)),
                _ => None,
            },
            Shape::Lift(p) => Some(p.join(a - 1, b - 1)? + 1),
            Shape::Exponential(e) => {
                let table: Option<Vec<u32>> = self
                    .table(a)
                    .iter()
                    .zip(self.table(b))
                    .map(|(x, y)| e.cod.join(*x, *y))
                    .collect();
                self.lookup_table(&table?)
            }
            Shape::Downsets(d) => {
                let mut s = d.sets[a as usize].clone();
                s.union_with(&d.sets[b as usize]);
                self.lookup_set(&s)
            }
            Shape::Explicit { .. } => {
                let uppers: Vec<u32> =
                    self.elements().filter(|&c| self.leq(a, c) && self.leq(b, c)).collect();
                uppers
                    .iter()
                    .copied()
                    .find(|&c| uppers.iter().all(|&d| self.leq(c, d)))
            }
        }
    }

    pub fn label(&self, a: u32) -> String {
        match self.shape() {
            Shape::Discrete if self.size() == 1 => "()".to_string(),
            Shape::Discrete => format!("#{a}"),
            Shape::Explicit { labels, .. } => labels[a as usize].clone(),
            Shape::Product(p, q) => {
                let (x, y) = self.unpair(a);
                format!("({}, {})", p.label(x), q.label(y))
            }
            Shape::Sum(p, q) => {
                if self.key() == "2" {
                    return if a == 0 { "tt".into() } else { "ff".into() };
                }
                match self.case(a) {
                    Side::Left(x) => format!("inl {}", p.label(x)),
                    Side::Right(y) => format!("inr {}", q.label(y)),
                }
            }
            Shape::Lift(p) => {
                if a == 0 {
                    "⊥".to_string()
                } else {
                    format!("↑{}", p.label(a - 1))
                }
            }
            Shape::Exponential(e) => {
                let parts: Vec<String> = self
                    .table(a)
                    .iter()
                    .enumerate()
                    .map(|(x, y)| format!("{}↦{}", e.dom.label(x as u32), e.cod.label(*y)))
                    .collect();
                format!("[{}]", parts.join(", "))
            }
            Shape::Downsets(d) => {
                let parts: Vec<String> =
                    d.sets[a as usize].iter().map(|x| d.base.label(x as u32)).collect();
                format!("{{{}}}", parts.join(", "))
            }
        }
    }

    /// Textual dump: a `size` line, one label per line, then the order
    /// matrix with one row of `0`/`1` per element.
    pub fn dump(&self) -> String {
        let mut out = format!("size {}\n", self.size());
        for a in self.elements() {
            out.push_str(&format!("{a}: {}\n", self.label(a)));
        }
        for a in self.elements() {
            let row: String = self
                .elements()
                .map(|b| if self.leq(a, b) { '1' } else { '0' })
                .collect();
            out.push_str(&row);
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left(u32),
    Right(u32),
}

/// Lexicographic enumeration of monotone tables; `Err` carries a lower
/// bound on the count once it exceeds the budget.
fn enumerate_monotone(dom: &Poset, cod: &Poset, budget: usize) -> Result<Vec<u32>, usize> {
    let n = dom.size();
    let m = cod.size() as u32;
    if n == 0 {
        return Ok(Vec::new());
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..i {
            if dom.leq(j as u32, i as u32) {
                below[i].push(j);
            }
            if dom.leq(i as u32, j as u32) {
                above[i].push(j);
            }
        }
    }
    let fits = |cur: &[u32], i: usize, v: u32| {
        below[i].iter().all(|&j| cod.leq(cur[j], v)) && above[i].iter().all(|&j| cod.leq(v, cur[j]))
    };
    let mut out = Vec::new();
    let mut count = 0usize;
    let mut cur = vec![0u32; n];
    // next[i] is the next candidate to try at position i.
    let mut next = vec![0u32; n];
    let mut i = 0usize;
    loop {
        let mut placed = false;
        while next[i] < m {
            let v = next[i];
            next[i] += 1;
            if fits(&cur, i, v) {
                cur[i] = v;
                placed = true;
                break;
            }
        }
        if placed {
            if i + 1 == n {
                count += 1;
                if count > budget {
                    return Err(count);
                }
                out.extend_from_slice(&cur);
            } else {
                i += 1;
                next[i] = 0;
            }
        } else {
            if i == 0 {
                break;
            }
            i -= 1;
        }
    }
    Ok(out)
}

/// All downsets of `base`, sorted as binary numbers.
fn enumerate_downsets(base: &Poset, budget: usize) -> Result<Vec<Bits>, usize> {
    let n = base.size();
    // A linear extension: strictly more elements below means later.
    let below_count: Vec<usize> = base
        .elements()
        .map(|x| base.elements().filter(|&y| base.leq(y, x)).count())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (below_count[x], x));
    let strictly_below: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x && base.leq(y as u32, x as u32))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Bits::empty(n);
    // choice[k]: 0 = untried, 1 = tried excluding, 2 = tried including.
    let mut choice = vec![0u8; n + 1];
    let mut k = 0usize;
    loop {
        if k == n {
            out.push(cur.clone());
            if out.len() > budget {
                return Err(out.len());
            }
            if k == 0 {
                break;
            }
            k -= 1;
            continue;
        }
        let x = order[k];
        match choice[k] {
            0 => {
                choice[k] = 1;
                cur.remove(x);
                k += 1;
                choice[k] = 0;
            }
            1 => {
                choice[k] = 2;
                if strictly_below[x].iter().all(|&y| cur.contains(y)) {
                    cur.insert(x);
                    k += 1;
                    choice[k] = 0;
                } else {
                    cur.remove(x);
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                }
            }
            _ => {
                cur.remove(x);
                if k == 0 {
                    break;
                }
                k -= 1;
            }
        }
    }
    out.sort_by(|a, b| a.numeric_cmp(b));
    Ok(out)
}
