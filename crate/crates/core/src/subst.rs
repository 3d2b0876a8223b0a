//! Free variables and capture-avoiding simultaneous substitution.

use std::collections::{BTreeMap, BTreeSet};

use crate::fresh;
use crate::syntax::{CompTerm, Ident, ValueTerm};

pub type Substitution = BTreeMap<Ident, ValueTerm>;

pub fn free_vars_value(v: &ValueTerm) -> BTreeSet<Ident> {
    let mut out = BTreeSet::new();
    collect_value(v, &mut Vec::new(), &mut out);
    out
}

pub fn free_vars_comp(m: &CompTerm) -> BTreeSet<Ident> {
    let mut out = BTreeSet::new();
    collect_comp(m, &mut Vec::new(), &mut out);
    out
}

fn collect_value(v: &ValueTerm, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
    match v {
        ValueTerm::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        ValueTerm::Unit | ValueTerm::True | ValueTerm::False => {}
        ValueTerm::Pair(a, b) => {
            collect_value(a, bound, out);
            collect_value(b, bound, out);
        }
        ValueTerm::Thunk(m) => collect_comp(m, bound, out),
    }
}

fn collect_under(
    binders: &[&Ident],
    m: &CompTerm,
    bound: &mut Vec<Ident>,
    out: &mut BTreeSet<Ident>,
) {
    let depth = bound.len();
    bound.extend(binders.iter().map(|x| (*x).clone()));
    collect_comp(m, bound, out);
    bound.truncate(depth);
}

fn collect_comp(m: &CompTerm, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
    match m {
        CompTerm::CompPair(a, b) | CompTerm::Or(a, b) => {
            collect_comp(a, bound, out);
            collect_comp(b, bound, out);
        }
        CompTerm::Proj(_, a) => collect_comp(a, bound, out),
        CompTerm::Lam(x, _, body) | CompTerm::Rec(x, _, body) => {
            collect_under(&[x], body, bound, out)
        }
        CompTerm::Push(v, a) => {
            collect_value(v, bound, out);
            collect_comp(a, bound, out);
        }
        CompTerm::Return(v) | CompTerm::Force(v) => collect_value(v, bound, out),
        CompTerm::To(a, x, b) => {
            collect_comp(a, bound, out);
            collect_under(&[x], b, bound, out);
        }
        CompTerm::MatchPair(v, x1, x2, body) => {
            collect_value(v, bound, out);
            collect_under(&[x1, x2], body, bound, out);
        }
        CompTerm::If(v, a, b) => {
            collect_value(v, bound, out);
            collect_comp(a, bound, out);
            collect_comp(b, bound, out);
        }
        CompTerm::Fail(_) => {}
    }
}

/// Number of free occurrences of `x` in `m`.
pub fn free_occurrences(m: &CompTerm, x: &Ident) -> usize {
    count_comp(m, x)
}

fn count_value(v: &ValueTerm, x: &Ident) -> usize {
    match v {
        ValueTerm::Var(y) => usize::from(y == x),
        ValueTerm::Unit | ValueTerm::True | ValueTerm::False => 0,
        ValueTerm::Pair(a, b) => count_value(a, x) + count_value(b, x),
        ValueTerm::Thunk(m) => count_comp(m, x),
    }
}

fn count_comp(m: &CompTerm, x: &Ident) -> usize {
    let under = |binders: &[&Ident], body: &CompTerm| {
        if binders.contains(&x) {
            0
        } else {
            count_comp(body, x)
        }
    };
    match m {
        CompTerm::CompPair(a, b) | CompTerm::Or(a, b) => count_comp(a, x) + count_comp(b, x),
        CompTerm::Proj(_, a) => count_comp(a, x),
        CompTerm::Lam(y, _, body) | CompTerm::Rec(y, _, body) => under(&[y], body),
        CompTerm::Push(v, a) => count_value(v, x) + count_comp(a, x),
        CompTerm::Return(v) | CompTerm::Force(v) => count_value(v, x),
        CompTerm::To(a, y, b) => count_comp(a, x) + under(&[y], b),
        CompTerm::MatchPair(v, y1, y2, body) => count_value(v, x) + under(&[y1, y2], body),
        CompTerm::If(v, a, b) => count_value(v, x) + count_comp(a, x) + count_comp(b, x),
        CompTerm::Fail(_) => 0,
    }
}

/// Substitutes simultaneously for the free occurrences of the keys of
/// `sub` in `m`. Binders are renamed to fresh names only when they would
/// capture a free variable of a substituted value.
pub fn substitute(m: &CompTerm, sub: &Substitution) -> CompTerm {
    if sub.is_empty() {
        return m.clone();
    }
    let mut s = Subst::new(sub);
    s.comp(m)
}

pub fn substitute_value(v: &ValueTerm, sub: &Substitution) -> ValueTerm {
    if sub.is_empty() {
        return v.clone();
    }
    let mut s = Subst::new(sub);
    s.value(v)
}

/// Substitutes a single value for a single variable.
pub fn substitute1(m: &CompTerm, x: &Ident, v: &ValueTerm) -> CompTerm {
    let mut sub = Substitution::new();
    sub.insert(x.clone(), v.clone());
    substitute(m, &sub)
}

struct Subst {
    map: Substitution,
    /// Free variables of the values in the range of `map`.
    range_fv: BTreeSet<Ident>,
}

impl Subst {
    fn new(sub: &Substitution) -> Self {
        let range_fv = sub.values().flat_map(free_vars_value).collect();
        Subst {
            map: sub.clone(),
            range_fv,
        }
    }

    fn rebuild(&self, map: Substitution) -> Subst {
        let range_fv = map.values().flat_map(free_vars_value).collect();
        Subst { map, range_fv }
    }

    fn value(&mut self, v: &ValueTerm) -> ValueTerm {
        match v {
            ValueTerm::Var(x) => self.map.get(x).cloned().unwrap_or_else(|| v.clone()),
            ValueTerm::Unit | ValueTerm::True | ValueTerm::False => v.clone(),
            ValueTerm::Pair(a, b) => ValueTerm::pair(self.value(a), self.value(b)),
            ValueTerm::Thunk(m) => ValueTerm::thunk(self.comp(m)),
        }
    }

    /// Enters the scope of `binders` over `body`: drops shadowed keys and
    /// renames binders that would capture. Returns the new binder names and
    /// the rewritten body.
    fn under(&mut self, binders: &[&Ident], body: &CompTerm) -> (Vec<Ident>, CompTerm) {
        let mut map = self.map.clone();
        for x in binders {
            map.remove(*x);
        }
        if map.is_empty() {
            return (binders.iter().map(|x| (*x).clone()).collect(), body.clone());
        }
        let mut inner = self.rebuild(map);
        let mut names = Vec::with_capacity(binders.len());
        let needs_rename = binders.iter().any(|x| inner.range_fv.contains(*x));
        if needs_rename {
            let mut avoid = inner.range_fv.clone();
            avoid.extend(free_vars_comp(body));
            avoid.extend(inner.map.keys().cloned());
            avoid.extend(binders.iter().map(|x| (*x).clone()));
            for x in binders {
                if inner.range_fv.contains(*x) {
                    let y = fresh::fresh_avoiding(x.as_str(), &avoid);
                    avoid.insert(y.clone());
                    inner.map.insert((*x).clone(), ValueTerm::Var(y.clone()));
                    names.push(y);
                } else {
                    names.push((*x).clone());
                }
            }
            let map = std::mem::take(&mut inner.map);
            inner = inner.rebuild(map);
        } else {
            names.extend(binders.iter().map(|x| (*x).clone()));
        }
        let body = inner.comp(body);
        (names, body)
    }

    fn comp(&mut self, m: &CompTerm) -> CompTerm {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.comp_inner(m))
    }

    fn comp_inner(&mut self, m: &CompTerm) -> CompTerm {
        match m {
            CompTerm::CompPair(a, b) => CompTerm::comp_pair(self.comp(a), self.comp(b)),
            CompTerm::Or(a, b) => CompTerm::or(self.comp(a), self.comp(b)),
            CompTerm::Proj(i, a) => CompTerm::proj(*i, self.comp(a)),
            CompTerm::Lam(x, ty, body) => {
                let (names, body) = self.under(&[x], body);
                CompTerm::Lam(names[0].clone(), ty.clone(), Box::new(body))
            }
            CompTerm::Rec(x, ty, body) => {
                let (names, body) = self.under(&[x], body);
                CompTerm::Rec(names[0].clone(), ty.clone(), Box::new(body))
            }
            CompTerm::Push(v, a) => CompTerm::push(self.value(v), self.comp(a)),
            CompTerm::Return(v) => CompTerm::Return(self.value(v)),
            CompTerm::Force(v) => CompTerm::Force(self.value(v)),
            CompTerm::To(a, x, b) => {
                let a = self.comp(a);
                let (names, b) = self.under(&[x], b);
                CompTerm::To(Box::new(a), names[0].clone(), Box::new(b))
            }
            CompTerm::MatchPair(v, x1, x2, body) => {
                let v = self.value(v);
                let (names, body) = self.under(&[x1, x2], body);
                CompTerm::MatchPair(v, names[0].clone(), names[1].clone(), Box::new(body))
            }
            CompTerm::If(v, a, b) => CompTerm::if_(self.value(v), self.comp(a), self.comp(b)),
            CompTerm::Fail(ty) => CompTerm::Fail(ty.clone()),
        }
    }
}

/// Renames bound variables consistently; used to compare terms up to
/// alpha-equivalence.
pub fn alpha_eq(a: &CompTerm, b: &CompTerm) -> bool {
    alpha_comp(a, b, &mut Vec::new())
}

fn lookup_pair(x: &Ident, y: &Ident, env: &[(Ident, Ident)]) -> bool {
    for (l, r) in env.iter().rev() {
        if l == x || r == y {
            return l == x && r == y;
        }
    }
    x == y
}

fn alpha_value(a: &ValueTerm, b: &ValueTerm, env: &mut Vec<(Ident, Ident)>) -> bool {
    match (a, b) {
        (ValueTerm::Var(x), ValueTerm::Var(y)) => lookup_pair(x, y, env),
        (ValueTerm::Unit, ValueTerm::Unit)
        | (ValueTerm::True, ValueTerm::True)
        | (ValueTerm::False, ValueTerm::False) => true,
        (ValueTerm::Pair(a1, a2), ValueTerm::Pair(b1, b2)) => {
            alpha_value(a1, b1, env) && alpha_value(a2, b2, env)
        }
        (ValueTerm::Thunk(m), ValueTerm::Thunk(n)) => alpha_comp(m, n, env),
        _ => false,
    }
}

fn alpha_bind(
    pairs: &[(&Ident, &Ident)],
    a: &CompTerm,
    b: &CompTerm,
    env: &mut Vec<(Ident, Ident)>,
) -> bool {
    let depth = env.len();
    env.extend(pairs.iter().map(|(x, y)| ((*x).clone(), (*y).clone())));
    let ok = alpha_comp(a, b, env);
    env.truncate(depth);
    ok
}

fn alpha_comp(a: &CompTerm, b: &CompTerm, env: &mut Vec<(Ident, Ident)>) -> bool {
    use CompTerm::*;
    match (a, b) {
        (CompPair(a1, a2), CompPair(b1, b2)) | (Or(a1, a2), Or(b1, b2)) => {
            alpha_comp(a1, b1, env) && alpha_comp(a2, b2, env)
        }
        (Proj(i, a), Proj(j, b)) => i == j && alpha_comp(a, b, env),
        (Lam(x, s, a), Lam(y, t, b)) => s == t && alpha_bind(&[(x, y)], a, b, env),
        (Rec(x, s, a), Rec(y, t, b)) => s == t && alpha_bind(&[(x, y)], a, b, env),
        (Push(v, a), Push(w, b)) => alpha_value(v, w, env) && alpha_comp(a, b, env),
        (Return(v), Return(w)) | (Force(v), Force(w)) => alpha_value(v, w, env),
        (To(a1, x, a2), To(b1, y, b2)) => {
            alpha_comp(a1, b1, env) && alpha_bind(&[(x, y)], a2, b2, env)
        }
        (MatchPair(v, x1, x2, a), MatchPair(w, y1, y2, b)) => {
            alpha_value(v, w, env) && alpha_bind(&[(x1, y1), (x2, y2)], a, b, env)
        }
        (If(v, a1, a2), If(w, b1, b2)) => {
            alpha_value(v, w, env) && alpha_comp(a1, b1, env) && alpha_comp(a2, b2, env)
        }
        (Fail(s), Fail(t)) => s == t,
        _ => false,
    }
}
