//! Named substitution checked against a locally nameless oracle: bound
//! variables become indices, so substituting a free name cannot capture
//! and alpha-equivalent terms coincide.

mod common;

use std::collections::BTreeMap;

use cbpv::subst::{alpha_eq, free_vars_comp, substitute, substitute1, Substitution};
use cbpv::syntax::{CompTerm, CompType, Component, Ident, ValueTerm, ValueType};
use cbpv::text::parse_comp;
use proptest::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Val {
    Free(String),
    Bound(usize),
    Unit,
    Pair(Box<Val>, Box<Val>),
    True,
    False,
    Thunk(Box<Comp>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Comp {
    Pair(Box<Comp>, Box<Comp>),
    Proj(Component, Box<Comp>),
    Lam(ValueType, Box<Comp>),
    Push(Val, Box<Comp>),
    Return(Val),
    To(Box<Comp>, Box<Comp>),
    MatchPair(Val, Box<Comp>),
    If(Val, Box<Comp>, Box<Comp>),
    Force(Val),
    Rec(CompType, Box<Comp>),
    Fail(CompType),
    Or(Box<Comp>, Box<Comp>),
}

struct Scope<'a> {
    names: Vec<&'a Ident>,
    binders: Vec<Ident>,
}

impl<'a> Scope<'a> {
    fn new() -> Self {
        Scope {
            names: Vec::new(),
            binders: Vec::new(),
        }
    }

    fn under<T>(&mut self, xs: &[&'a Ident], f: impl FnOnce(&mut Self) -> T) -> T {
        for x in xs {
            self.names.push(x);
            self.binders.push((*x).clone());
        }
        let out = f(self);
        self.names.truncate(self.names.len() - xs.len());
        out
    }

    fn value(&mut self, v: &'a ValueTerm) -> Val {
        match v {
            ValueTerm::Var(x) => match self.names.iter().rev().position(|y| *y == x) {
                Some(i) => Val::Bound(i),
                None => Val::Free(x.as_str().to_string()),
            },
            ValueTerm::Unit => Val::Unit,
            ValueTerm::Pair(a, b) => Val::Pair(Box::new(self.value(a)), Box::new(self.value(b))),
            ValueTerm::True => Val::True,
            ValueTerm::False => Val::False,
            ValueTerm::Thunk(m) => Val::Thunk(Box::new(self.comp(m))),
        }
    }

    fn comp(&mut self, m: &'a CompTerm) -> Comp {
        match m {
            CompTerm::CompPair(a, b) => Comp::Pair(Box::new(self.comp(a)), Box::new(self.comp(b))),
            CompTerm::Proj(c, n) => Comp::Proj(*c, Box::new(self.comp(n))),
            CompTerm::Lam(x, ty, body) => Comp::Lam(ty.clone(), Box::new(self.under(&[x], |s| s.comp(body)))),
            CompTerm::Push(v, n) => Comp::Push(self.value(v), Box::new(self.comp(n))),
            CompTerm::Return(v) => Comp::Return(self.value(v)),
            CompTerm::To(a, x, b) => {
                let a = self.comp(a);
                Comp::To(Box::new(a), Box::new(self.under(&[x], |s| s.comp(b))))
            }
            CompTerm::MatchPair(v, x, y, body) => {
                let v = self.value(v);
                Comp::MatchPair(v, Box::new(self.under(&[x, y], |s| s.comp(body))))
            }
            CompTerm::If(v, a, b) => Comp::If(self.value(v), Box::new(self.comp(a)), Box::new(self.comp(b))),
            CompTerm::Force(v) => Comp::Force(self.value(v)),
            CompTerm::Rec(x, ty, body) => Comp::Rec(ty.clone(), Box::new(self.under(&[x], |s| s.comp(body)))),
            CompTerm::Fail(ty) => Comp::Fail(ty.clone()),
            CompTerm::Or(a, b) => Comp::Or(Box::new(self.comp(a)), Box::new(self.comp(b))),
        }
    }
}

fn nameless(m: &CompTerm) -> Comp {
    Scope::new().comp(m)
}

fn nameless_value(v: &ValueTerm) -> Val {
    Scope::new().value(v)
}

fn binders(m: &CompTerm) -> Vec<Ident> {
    let mut s = Scope::new();
    s.comp(m);
    s.binders
}

/// Replaces free names; values carry no loose indices, so no shifting.
fn replace_value(v: &Val, sub: &BTreeMap<String, Val>) -> Val {
    match v {
        Val::Free(x) => sub.get(x).cloned().unwrap_or_else(|| v.clone()),
        Val::Bound(_) | Val::Unit | Val::True | Val::False => v.clone(),
        Val::Pair(a, b) => Val::Pair(Box::new(replace_value(a, sub)), Box::new(replace_value(b, sub))),
        Val::Thunk(m) => Val::Thunk(Box::new(replace(m, sub))),
    }
}

fn replace(m: &Comp, sub: &BTreeMap<String, Val>) -> Comp {
    let r = |n: &Comp| Box::new(replace(n, sub));
    match m {
        Comp::Pair(a, b) => Comp::Pair(r(a), r(b)),
        Comp::Proj(c, n) => Comp::Proj(*c, r(n)),
        Comp::Lam(ty, body) => Comp::Lam(ty.clone(), r(body)),
        Comp::Push(v, n) => Comp::Push(replace_value(v, sub), r(n)),
        Comp::Return(v) => Comp::Return(replace_value(v, sub)),
        Comp::To(a, b) => Comp::To(r(a), r(b)),
        Comp::MatchPair(v, body) => Comp::MatchPair(replace_value(v, sub), r(body)),
        Comp::If(v, a, b) => Comp::If(replace_value(v, sub), r(a), r(b)),
        Comp::Force(v) => Comp::Force(replace_value(v, sub)),
        Comp::Rec(ty, body) => Comp::Rec(ty.clone(), r(body)),
        Comp::Fail(ty) => Comp::Fail(ty.clone()),
        Comp::Or(a, b) => Comp::Or(r(a), r(b)),
    }
}

/// A value mentioning every name bound in `m`, so a capturing
/// substitution would change its meaning.
fn capturing_value(m: &CompTerm) -> ValueTerm {
    binders(m)
        .into_iter()
        .take(6)
        .fold(ValueTerm::Unit, |acc, x| ValueTerm::pair(acc, ValueTerm::var(x)))
}

/// Renames the binders along the outer spine of lambdas and sequencing.
fn renamed_binders(m: &CompTerm, suffix: &str) -> CompTerm {
    let rn = |x: &Ident| Ident::new(format!("{}{suffix}", x.as_str()));
    let mut sub: Substitution = BTreeMap::new();
    match m {
        CompTerm::Lam(x, ty, body) => {
            sub.insert(x.clone(), ValueTerm::Var(rn(x)));
            CompTerm::Lam(rn(x), ty.clone(), Box::new(renamed_binders(&substitute(body, &sub), suffix)))
        }
        CompTerm::To(a, x, b) => {
            sub.insert(x.clone(), ValueTerm::Var(rn(x)));
            CompTerm::To(
                Box::new(renamed_binders(a, suffix)),
                rn(x),
                Box::new(renamed_binders(&substitute(b, &sub), suffix)),
            )
        }
        _ => m.clone(),
    }
}

#[test]
fn substitution_avoids_capture_under_a_binder() {
    let m = parse_comp("(lam y bool (return (pair x y)))").unwrap();
    let out = substitute1(&m, &Ident::new("x"), &ValueTerm::var("y"));
    assert_eq!(
        nameless(&out),
        Comp::Lam(
            ValueType::Bool,
            Box::new(Comp::Return(Val::Pair(Box::new(Val::Free("y".into())), Box::new(Val::Bound(0)))))
        )
    );
    assert!(!alpha_eq(&out, &parse_comp("(lam y bool (return (pair y y)))").unwrap()));
}

#[test]
fn match_binders_are_indexed_innermost_last() {
    let m = parse_comp("(match (pair true false) a b (return (pair b a)))").unwrap();
    assert_eq!(
        nameless(&m),
        Comp::MatchPair(
            Val::Pair(Box::new(Val::True), Box::new(Val::False)),
            Box::new(Comp::Return(Val::Pair(Box::new(Val::Bound(0)), Box::new(Val::Bound(1)))))
        )
    );
}

#[test]
fn shadowed_variable_is_not_substituted() {
    let m = parse_comp("(to (return x) x (return x))").unwrap();
    let out = substitute1(&m, &Ident::new("x"), &ValueTerm::True);
    assert_eq!(print(&out), "(to (return true) x (return x))");
}

fn print(m: &CompTerm) -> String {
    cbpv::text::print_comp(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn single_substitution_matches_oracle((_, item) in common::any_item()) {
        for (_, m) in common::translations(&item) {
            let v = capturing_value(&m);
            for x in free_vars_comp(&m) {
                let named = substitute1(&m, &x, &v);
                let mut sub = BTreeMap::new();
                sub.insert(x.as_str().to_string(), nameless_value(&v));
                prop_assert_eq!(nameless(&named), replace(&nameless(&m), &sub));
            }
        }
    }

    #[test]
    fn simultaneous_substitution_matches_oracle((_, item) in common::any_item()) {
        for (_, m) in common::translations(&item) {
            let fv: Vec<Ident> = free_vars_comp(&m).into_iter().collect();
            let bs = binders(&m);
            let mut named: Substitution = BTreeMap::new();
            let mut oracle = BTreeMap::new();
            for (i, x) in fv.iter().enumerate() {
                let v = match (bs.get(i), fv.get(i + 1)) {
                    (Some(b), _) => ValueTerm::var(b.clone()),
                    (None, Some(next)) => ValueTerm::var(next.clone()),
                    (None, None) => ValueTerm::True,
                };
                oracle.insert(x.as_str().to_string(), nameless_value(&v));
                named.insert(x.clone(), v);
            }
            prop_assert_eq!(nameless(&substitute(&m, &named)), replace(&nameless(&m), &oracle));
        }
    }

    #[test]
    fn alpha_equivalence_matches_oracle((_, a) in common::any_item(), (_, b) in common::any_item()) {
        let ms = common::translations(&a);
        let ns = common::translations(&b);
        for ((_, m), (_, n)) in ms.iter().zip(ns.iter()) {
            prop_assert_eq!(alpha_eq(m, n), nameless(m) == nameless(n));
            let r = renamed_binders(m, "_r");
            prop_assert!(alpha_eq(m, &r));
            prop_assert_eq!(nameless(m), nameless(&r));
        }
    }
}
