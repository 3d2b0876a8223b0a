//! Interpretation of CBPV types and terms in a finite model.
//!
//! A term is first elaborated against its typing context into a tree that
//! carries the interpreted carrier at every node, then evaluated once per
//! environment to fill the table of its denotation.

use crate::order::{least_fixpoint_with, Algebra, Monad, MonotoneMap, Poset};
use crate::syntax::{CompTerm, CompType, Component, Ident, ValueTerm, ValueType};
use crate::typing::{check_comp_any, TypeError, TypingContext};

use super::model::{DenotError, Model};

pub fn interp_vtype(ty: &ValueType, model: &Model) -> Result<Poset, DenotError> {
    if let Some(p) = model.caches.lock().expect("cache poisoned").vtypes.get(ty) {
        return Ok(p.clone());
    }
    let b = model.budget();
    let p = match ty {
        ValueType::Unit => Poset::terminal(),
        ValueType::Bool => Poset::two(),
        ValueType::Prod(a, c) => Poset::product(&interp_vtype(a, model)?, &interp_vtype(c, model)?, b)?,
        ValueType::Thunk(c) => interp_ctype(c, model)?.carrier().clone(),
    };
    model
        .caches
        .lock()
        .expect("cache poisoned")
        .vtypes
        .insert(ty.clone(), p.clone());
    Ok(p)
}

pub fn interp_ctype(ty: &CompType, model: &Model) -> Result<Algebra, DenotError> {
    if let Some(a) = model.caches.lock().expect("cache poisoned").ctypes.get(ty) {
        return Ok(a.clone());
    }
    let b = model.budget();
    let alg = match ty {
        CompType::Free(a) => Algebra::free(model.monad(), &interp_vtype(a, model)?, b)?,
        CompType::CompProd(c, d) => Algebra::product(&interp_ctype(c, model)?, &interp_ctype(d, model)?, b)?,
        CompType::Arrow(a, c) => Algebra::exponential(&interp_vtype(a, model)?, &interp_ctype(c, model)?, b)?,
    };
    model
        .caches
        .lock()
        .expect("cache poisoned")
        .ctypes
        .insert(ty.clone(), alg.clone());
    Ok(alg)
}

/// `⟦x₁ : A₁, …, xₙ : Aₙ⟧ = ((1 × ⟦A₁⟧) × …) × ⟦Aₙ⟧`.
pub fn interp_ctx(ctx: &TypingContext, model: &Model) -> Result<Poset, DenotError> {
    let factors = ctx
        .entries()
        .iter()
        .map(|(_, t)| interp_vtype(t, model))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poset::product_of(&factors, model.budget())?)
}

/// Splits an element of an interpreted context into its components.
pub fn decode_env(ctx_poset: &Poset, n: usize, rho: u32) -> Vec<u32> {
    let mut out = vec![0; n];
    let mut p = ctx_poset.clone();
    let mut cur = rho;
    for slot in out.iter_mut().rev() {
        let (rest, last) = p.unpair(cur);
        *slot = last;
        let next = p.factors().expect("context product").0.clone();
        p = next;
        cur = rest;
    }
    out
}

/// Packs components into an element of an interpreted context.
pub fn encode_env(ctx_poset: &Poset, env: &[u32]) -> u32 {
    fn go(p: &Poset, env: &[u32]) -> u32 {
        match env.split_last() {
            None => 0,
            Some((last, rest)) => {
                let (q, _) = p.factors().expect("context product");
                p.pair(go(q, rest), *last)
            }
        }
    }
    go(ctx_poset, env)
}

pub fn interp_value(ctx: &TypingContext, v: &ValueTerm, model: &Model) -> Result<MonotoneMap, DenotError> {
    let probe = CompTerm::ret(v.clone());
    check_comp_any(ctx, &probe)?;
    let mut el = Elaborator::new(ctx, model);
    let (cv, ty) = el.value(v)?;
    tabulate(ctx, model, &interp_vtype(&ty, model)?, |env| cv.eval(env))
}

pub fn interp_comp(ctx: &TypingContext, m: &CompTerm, model: &Model) -> Result<MonotoneMap, DenotError> {
    let compiled = elaborate(ctx, m, model)?;
    tabulate(ctx, model, compiled.carrier(), |env| compiled.eval(env))
}

/// A computation elaborated against a model, ready to evaluate at
/// individual environments.
pub struct Compiled {
    root: CComp,
    carrier: Poset,
}

impl Compiled {
    pub fn carrier(&self) -> &Poset {
        &self.carrier
    }

    /// The denotation at an environment given componentwise.
    pub fn eval(&self, env: &[u32]) -> u32 {
        self.root.eval(&mut env.to_vec())
    }
}

pub fn elaborate(ctx: &TypingContext, m: &CompTerm, model: &Model) -> Result<Compiled, DenotError> {
    check_comp_any(ctx, m)?;
    let mut el = Elaborator::new(ctx, model);
    let (root, ty) = el.comp(m)?;
    let carrier = interp_ctype(&ty, model)?.carrier().clone();
    Ok(Compiled { root, carrier })
}

fn tabulate(
    ctx: &TypingContext,
    model: &Model,
    cod: &Poset,
    f: impl Fn(&[u32]) -> u32,
) -> Result<MonotoneMap, DenotError> {
    let dom = interp_ctx(ctx, model)?;
    let n = ctx.len();
    Ok(MonotoneMap::from_fn_unchecked(&dom, cod, |rho| {
        f(&decode_env(&dom, n, rho))
    }))
}

enum CVal {
    Var(usize),
    Const(u32),
    Pair(Box<CVal>, Box<CVal>, Poset),
    Thunk(Box<CComp>),
}

impl CVal {
    fn eval(&self, env: &[u32]) -> u32 {
        match self {
            CVal::Var(i) => env[*i],
            CVal::Const(c) => *c,
            CVal::Pair(a, b, p) => p.pair(a.eval(env), b.eval(env)),
            CVal::Thunk(m) => m.eval(&mut env.to_vec()),
        }
    }
}

enum CComp {
    Pair(Box<CComp>, Box<CComp>, Poset),
    Proj(Component, Box<CComp>, Poset),
    Lam(Poset, Box<CComp>, Poset),
    Push(CVal, Box<CComp>, Poset),
    Return(CVal, Poset, Monad),
    To(Box<CComp>, Poset, Box<CComp>, Algebra),
    Match(CVal, Poset, Box<CComp>),
    If(CVal, Box<CComp>, Box<CComp>),
    Force(CVal),
    Rec(Poset, Box<CComp>),
    Const(u32),
    Or(Box<CComp>, Box<CComp>, Poset),
}

impl CComp {
    fn eval(&self, env: &mut Vec<u32>) -> u32 {
        match self {
            CComp::Pair(m, n, p) => {
                let a = m.eval(env);
                let b = n.eval(env);
                p.pair(a, b)
            }
            CComp::Proj(c, m, p) => {
                let (a, b) = p.unpair(m.eval(env));
                match c {
                    Component::First => a,
                    Component::Second => b,
                }
            }
            CComp::Lam(dom, body, exp) => {
                let row: Vec<u32> = dom
                    .elements()
                    .map(|a| {
                        env.push(a);
                        let r = body.eval(env);
                        env.pop();
                        r
                    })
                    .collect();
                exp.lookup_table(&row).expect("denotations of λ are monotone")
            }
            CComp::Push(v, m, exp) => {
                let a = v.eval(env);
                exp.apply(m.eval(env), a)
            }
            CComp::Return(v, tx, monad) => {
                let a = v.eval(env);
                monad.unit_at(tx, a)
            }
            CComp::To(m, tx, n, alg) => {
                let t = m.eval(env);
                let base = env.clone();
                alg.extend_at(tx, t, &|a| {
                    let mut e = base.clone();
                    e.push(a);
                    n.eval(&mut e)
                })
            }
            CComp::Match(v, p, m) => {
                let (a, b) = p.unpair(v.eval(env));
                env.push(a);
                env.push(b);
                let r = m.eval(env);
                env.pop();
                env.pop();
                r
            }
            CComp::If(v, m, n) => {
                if v.eval(env) == 0 {
                    m.eval(env)
                } else {
                    n.eval(env)
                }
            }
            CComp::Force(v) => v.eval(env),
            CComp::Rec(carrier, m) => {
                let base = env.clone();
                least_fixpoint_with(carrier, |z| {
                    let mut e = base.clone();
                    e.push(z);
                    m.eval(&mut e)
                })
                .expect("recursion is only elaborated over pointed carriers")
            }
            CComp::Const(c) => *c,
            CComp::Or(m, n, p) => {
                let a = m.eval(env);
                let b = n.eval(env);
                p.join(a, b).expect("nondeterminism is only elaborated over carriers with joins")
            }
        }
    }
}

struct Elaborator<'a> {
    model: &'a Model,
    names: Vec<Ident>,
    types: Vec<ValueType>,
}

fn unsupported(model: &Model, construct: &'static str) -> DenotError {
    DenotError::EffectUnsupported {
        model: model.name().to_string(),
        construct,
    }
}

fn internal(what: &str) -> DenotError {
    DenotError::IllTyped(TypeError::TypeMismatch {
        path: Default::default(),
        expected: what.to_string(),
        found: "something else".to_string(),
    })
}

impl<'a> Elaborator<'a> {
    fn new(ctx: &TypingContext, model: &'a Model) -> Self {
        Elaborator {
            model,
            names: ctx.entries().iter().map(|(x, _)| x.clone()).collect(),
            types: ctx.entries().iter().map(|(_, t)| t.clone()).collect(),
        }
    }

    fn bind<T>(&mut self, binders: &[(Ident, ValueType)], f: impl FnOnce(&mut Self) -> T) -> T {
        for (x, t) in binders {
            self.names.push(x.clone());
            self.types.push(t.clone());
        }
        let r = f(self);
        for _ in binders {
            self.names.pop();
            self.types.pop();
        }
        r
    }

    fn value(&mut self, v: &ValueTerm) -> Result<(CVal, ValueType), DenotError> {
        match v {
            ValueTerm::Var(x) => {
                let i = self
                    .names
                    .iter()
                    .rposition(|y| y == x)
                    .ok_or_else(|| internal("a bound variable"))?;
                Ok((CVal::Var(i), self.types[i].clone()))
            }
            ValueTerm::Unit => Ok((CVal::Const(0), ValueType::Unit)),
            ValueTerm::True => Ok((CVal::Const(0), ValueType::Bool)),
            ValueTerm::False => Ok((CVal::Const(1), ValueType::Bool)),
            ValueTerm::Pair(a, b) => {
                let (ca, ta) = self.value(a)?;
                let (cb, tb) = self.value(b)?;
                let ty = ValueType::prod(ta, tb);
                let p = interp_vtype(&ty, self.model)?;
                Ok((CVal::Pair(Box::new(ca), Box::new(cb), p), ty))
            }
            ValueTerm::Thunk(m) => {
                let (cm, ty) = self.comp(m)?;
                Ok((CVal::Thunk(Box::new(cm)), ValueType::thunk(ty)))
            }
        }
    }

    fn carrier(&self, ty: &CompType) -> Result<Poset, DenotError> {
        Ok(interp_ctype(ty, self.model)?.carrier().clone())
    }

    fn comp(&mut self, m: &CompTerm) -> Result<(CComp, CompType), DenotError> {
        let model = self.model;
        match m {
            CompTerm::CompPair(a, b) => {
                let (ca, ta) = self.comp(a)?;
                let (cb, tb) = self.comp(b)?;
                let ty = CompType::comp_prod(ta, tb);
                let p = self.carrier(&ty)?;
                Ok((CComp::Pair(Box::new(ca), Box::new(cb), p), ty))
            }
            CompTerm::Proj(c, a) => {
                let (ca, ta) = self.comp(a)?;
                let CompType::CompProd(t1, t2) = &ta else {
                    return Err(internal("a computation product"));
                };
                let ty = match c {
                    Component::First => (**t1).clone(),
                    Component::Second => (**t2).clone(),
                };
                let p = self.carrier(&ta)?;
                Ok((CComp::Proj(*c, Box::new(ca), p), ty))
            }
            CompTerm::Lam(x, a, body) => {
                let (cb, tb) = self.bind(&[(x.clone(), a.clone())], |s| s.comp(body))?;
                let ty = CompType::arrow(a.clone(), tb);
                let dom = interp_vtype(a, model)?;
                let exp = self.carrier(&ty)?;
                Ok((CComp::Lam(dom, Box::new(cb), exp), ty))
            }
            CompTerm::Push(v, f) => {
                let (cv, _) = self.value(v)?;
                let (cf, tf) = self.comp(f)?;
                let CompType::Arrow(_, res) = &tf else {
                    return Err(internal("a function type"));
                };
                let exp = self.carrier(&tf)?;
                Ok((CComp::Push(cv, Box::new(cf), exp), (**res).clone()))
            }
            CompTerm::Return(v) => {
                let (cv, a) = self.value(v)?;
                let ty = CompType::free(a);
                let tx = self.carrier(&ty)?;
                let node = CComp::Return(cv, tx, model.monad().clone());
                Ok((node, ty))
            }
            CompTerm::To(a, x, body) => {
                let (ca, ta) = self.comp(a)?;
                let CompType::Free(vt) = &ta else {
                    return Err(internal("a returner type"));
                };
                let (cb, tb) = self.bind(&[(x.clone(), (**vt).clone())], |s| s.comp(body))?;
                let tx = self.carrier(&ta)?;
                let alg = interp_ctype(&tb, model)?;
                Ok((CComp::To(Box::new(ca), tx, Box::new(cb), alg), tb))
            }
            CompTerm::MatchPair(v, x1, x2, body) => {
                let (cv, tv) = self.value(v)?;
                let ValueType::Prod(t1, t2) = &tv else {
                    return Err(internal("a value product"));
                };
                let binders = [(x1.clone(), (**t1).clone()), (x2.clone(), (**t2).clone())];
                let (cb, tb) = self.bind(&binders, |s| s.comp(body))?;
                let p = interp_vtype(&tv, model)?;
                Ok((CComp::Match(cv, p, Box::new(cb)), tb))
            }
            CompTerm::If(v, a, b) => {
                let (cv, _) = self.value(v)?;
                let (ca, ta) = self.comp(a)?;
                let (cb, _) = self.comp(b)?;
                Ok((CComp::If(cv, Box::new(ca), Box::new(cb)), ta))
            }
            CompTerm::Force(v) => {
                let (cv, tv) = self.value(v)?;
                let ValueType::Thunk(c) = tv else {
                    return Err(internal("a thunk type"));
                };
                Ok((CComp::Force(cv), *c))
            }
            CompTerm::Rec(x, ty, body) => {
                if !model.supports_rec() {
                    return Err(unsupported(model, "rec"));
                }
                let binder = [(x.clone(), ValueType::thunk(ty.clone()))];
                let (cb, _) = self.bind(&binder, |s| s.comp(body))?;
                let carrier = self.carrier(ty)?;
                if carrier.least().is_none() {
                    return Err(unsupported(model, "rec"));
                }
                Ok((CComp::Rec(carrier, Box::new(cb)), ty.clone()))
            }
            CompTerm::Fail(ty) => {
                if !model.supports_nondet() {
                    return Err(unsupported(model, "fail"));
                }
                let bottom = self.carrier(ty)?.least().ok_or_else(|| unsupported(model, "fail"))?;
                Ok((CComp::Const(bottom), ty.clone()))
            }
            CompTerm::Or(a, b) => {
                if !model.supports_nondet() {
                    return Err(unsupported(model, "or"));
                }
                let (ca, ta) = self.comp(a)?;
                let (cb, _) = self.comp(b)?;
                let p = self.carrier(&ta)?;
                Ok((CComp::Or(Box::new(ca), Box::new(cb), p), ta))
            }
        }
    }
}
