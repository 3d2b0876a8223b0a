//! Type-directed generation of well-typed source expressions.

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::source::{SrcContext, SrcExpr, SrcType};
use crate::syntax::{EffectSignature, Ident};

pub const DEFAULT_SEED: u64 = 0xCB_0B_0B;
pub const DEFAULT_COUNT: usize = 500;
pub const DEFAULT_DEPTH: usize = 5;

/// Relative frequencies of the types drawn for targets, argument types
/// and intermediate results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeWeights {
    pub bool: u32,
    pub unit: u32,
    pub prod: u32,
    pub bool_to_bool: u32,
    pub bool_to_prod: u32,
    /// Weight of `bool × bool` among argument and intermediate types;
    /// `bool` and `unit` keep their target weights there.
    pub intermediate_prod: u32,
    /// Weight of applications, let-bindings and projections whose result
    /// is itself a function; these need curried functions or pairs of
    /// functions as intermediates.
    pub function_intermediates: u32,
}

impl Default for TypeWeights {
    fn default() -> Self {
        TypeWeights {
            bool: 50,
            unit: 10,
            prod: 15,
            bool_to_bool: 20,
            bool_to_prod: 5,
            intermediate_prod: 15,
            function_intermediates: 3,
        }
    }
}

impl TypeWeights {
    /// The defaults, except that nondeterministic corpora avoid function
    /// types whose downset carriers exceed the default size budget: pair
    /// arguments, pair-returning functions and curried functions.
    pub fn for_signature(sig: EffectSignature) -> Self {
        match sig {
            EffectSignature::Nondet => TypeWeights {
                bool: 55,
                unit: 15,
                prod: 10,
                bool_to_bool: 20,
                bool_to_prod: 0,
                intermediate_prod: 0,
                function_intermediates: 0,
            },
            _ => TypeWeights::default(),
        }
    }

    fn intermediate_pool(&self) -> Vec<(SrcType, u32)> {
        let b = SrcType::Bool;
        [
            (SrcType::Bool, self.bool),
            (SrcType::Unit, self.unit),
            (SrcType::prod(b.clone(), b), self.intermediate_prod),
        ]
        .into_iter()
        .filter(|(_, w)| *w > 0)
        .collect()
    }

    fn pool(&self) -> Vec<(SrcType, u32)> {
        let b = SrcType::Bool;
        vec![
            (SrcType::Bool, self.bool),
            (SrcType::Unit, self.unit),
            (SrcType::prod(b.clone(), b.clone()), self.prod),
            (SrcType::arrow(b.clone(), b.clone()), self.bool_to_bool),
            (SrcType::arrow(b.clone(), SrcType::prod(b.clone(), b)), self.bool_to_prod),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: usize,
    pub weights: TypeWeights,
    pub sig: EffectSignature,
    pub count: usize,
}

impl GenConfig {
    pub fn new(sig: EffectSignature) -> Self {
        GenConfig {
            seed: DEFAULT_SEED,
            max_depth: DEFAULT_DEPTH,
            weights: TypeWeights::for_signature(sig),
            sig,
            count: DEFAULT_COUNT,
        }
    }
}

/// One generated instance `Γ ⊢ e : τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    pub index: usize,
    pub ctx: SrcContext,
    pub expr: SrcExpr,
    pub ty: SrcType,
}

impl CorpusItem {
    pub fn is_closed_ground(&self) -> bool {
        self.ctx.is_empty() && matches!(self.ty, SrcType::Bool | SrcType::Unit)
    }
}

/// The contexts corpus items are drawn from, with weights.
pub fn standard_contexts() -> Vec<(SrcContext, u32)> {
    let b = SrcType::Bool;
    let bb = SrcType::arrow(b.clone(), b.clone());
    let ctx = |entries: Vec<(&str, SrcType)>| {
        SrcContext::new(entries.into_iter().map(|(x, t)| (Ident::new(x), t)).collect())
            .expect("distinct names")
    };
    vec![
        (SrcContext::empty(), 45),
        (ctx(vec![("x", b.clone())]), 15),
        (ctx(vec![("x", b.clone()), ("y", b.clone())]), 10),
        (ctx(vec![("p", SrcType::prod(b.clone(), b.clone()))]), 10),
        (ctx(vec![("f", bb.clone())]), 10),
        (ctx(vec![("f", bb), ("x", b)]), 10),
    ]
}

/// Generates `count` instances. Item `i` depends only on the seed and
/// `i`, so any item can be regenerated on its own.
pub fn gen_corpus(cfg: &GenConfig) -> Vec<CorpusItem> {
    (0..cfg.count).map(|i| gen_item(cfg, i)).collect()
}

pub fn gen_item(cfg: &GenConfig, index: usize) -> CorpusItem {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let contexts = standard_contexts();
    let ci = WeightedIndex::new(contexts.iter().map(|(_, w)| *w)).expect("positive weights");
    let ctx = contexts[ci.sample(&mut rng)].0.clone();
    let pool = cfg.weights.pool();
    let ti = WeightedIndex::new(pool.iter().map(|(_, w)| *w)).expect("positive weights");
    let ty = pool[ti.sample(&mut rng)].0.clone();
    let mut g = Generator::new(cfg, rng);
    let expr = g.expr(&ctx.entries().to_vec(), &ty, cfg.max_depth);
    CorpusItem { index, ctx, expr, ty }
}

/// Generates one expression of type `ty` in `ctx` from the config's seed.
pub fn gen_expr(cfg: &GenConfig, ctx: &SrcContext, ty: &SrcType) -> SrcExpr {
    let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Generator::new(cfg, rng).expr(&ctx.entries().to_vec(), ty, cfg.max_depth)
}

type Env = Vec<(Ident, SrcType)>;

struct Generator {
    rng: ChaCha8Rng,
    sig: EffectSignature,
    intermediate: Vec<(SrcType, u32)>,
    function_intermediates: u32,
    next_binder: usize,
}

#[derive(Clone, Copy)]
enum Prod {
    Var,
    Intro,
    If,
    App,
    Fst,
    Snd,
    Let,
    Omega,
    RecApp,
    Or,
    Fail,
}

impl Generator {
    fn new(cfg: &GenConfig, rng: ChaCha8Rng) -> Self {
        Generator {
            rng,
            sig: cfg.sig,
            intermediate: cfg.weights.intermediate_pool(),
            function_intermediates: cfg.weights.function_intermediates,
            next_binder: 0,
        }
    }

    fn binder(&mut self) -> Ident {
        let x = Ident::new(format!("v{}", self.next_binder));
        self.next_binder += 1;
        x
    }

    /// An argument or intermediate type: never a function type, so
    /// generated terms stay first-order apart from their targets.
    fn small_type(&mut self) -> SrcType {
        let idx = WeightedIndex::new(self.intermediate.iter().map(|(_, w)| *w)).expect("positive weights");
        self.intermediate[idx.sample(&mut self.rng)].0.clone()
    }

    fn vars_of(env: &Env, ty: &SrcType) -> Vec<Ident> {
        // Later bindings shadow earlier ones.
        let mut out: Vec<Ident> = Vec::new();
        for (i, (x, t)) in env.iter().enumerate() {
            if t == ty && !env[i + 1..].iter().any(|(y, _)| y == x) {
                out.push(x.clone());
            }
        }
        out
    }

    fn expr(&mut self, env: &Env, ty: &SrcType, depth: usize) -> SrcExpr {
        if depth == 0 {
            return self.leaf(env, ty);
        }
        let vars = Generator::vars_of(env, ty);
        let (app, proj, bind) = if matches!(ty, SrcType::Arrow(..)) {
            let w = self.function_intermediates;
            (w, w.min(4), w.min(6))
        } else {
            (14, 4, 6)
        };
        let mut choices: Vec<(Prod, u32)> = vec![(Prod::Intro, 20), (Prod::If, 12)];
        for (p, w) in [(Prod::App, app), (Prod::Fst, proj), (Prod::Snd, proj), (Prod::Let, bind)] {
            if w > 0 {
                choices.push((p, w));
            }
        }
        if !vars.is_empty() {
            choices.push((Prod::Var, 18));
        }
        if self.sig.allows_rec() {
            choices.push((Prod::Omega, 3));
            choices.push((Prod::RecApp, 5));
        }
        if self.sig.allows_nondet() {
            choices.push((Prod::Or, 10));
            choices.push((Prod::Fail, 2));
        }
        let idx = WeightedIndex::new(choices.iter().map(|(_, w)| *w)).expect("positive weights");
        let d = depth - 1;
        match choices[idx.sample(&mut self.rng)].0 {
            Prod::Var => SrcExpr::Var(vars[self.rng.gen_range(0..vars.len())].clone()),
            Prod::Intro => self.intro(env, ty, d),
            Prod::If => {
                let c = self.expr(env, &SrcType::Bool, d);
                let a = self.expr(env, ty, d);
                let b = self.expr(env, ty, d);
                SrcExpr::if_(c, a, b)
            }
            Prod::App => {
                let arg_ty = self.small_type();
                let f = self.expr(env, &SrcType::arrow(arg_ty.clone(), ty.clone()), d);
                let a = self.expr(env, &arg_ty, d);
                SrcExpr::app(f, a)
            }
            Prod::Fst => {
                let other = self.small_type();
                SrcExpr::fst(self.expr(env, &SrcType::prod(ty.clone(), other), d))
            }
            Prod::Snd => {
                let other = self.small_type();
                SrcExpr::snd(self.expr(env, &SrcType::prod(other, ty.clone()), d))
            }
            Prod::Let => {
                // (λx. body) arg
                let arg_ty = self.small_type();
                let a = self.expr(env, &arg_ty, d);
                let x = self.binder();
                let mut inner = env.clone();
                inner.push((x.clone(), arg_ty.clone()));
                let body = self.expr(&inner, ty, d);
                SrcExpr::app(SrcExpr::lam(x, arg_ty, body), a)
            }
            Prod::Omega => SrcExpr::omega(ty.clone()),
            Prod::RecApp => {
                let f = self.binder();
                let x = self.binder();
                let mut inner = env.clone();
                inner.push((f.clone(), SrcType::arrow(SrcType::Bool, ty.clone())));
                inner.push((x.clone(), SrcType::Bool));
                let body = self.expr(&inner, ty, d);
                let arg = self.expr(env, &SrcType::Bool, d);
                SrcExpr::app(SrcExpr::rec_fun(f, SrcType::Bool, ty.clone(), x, body), arg)
            }
            Prod::Or => {
                let a = self.expr(env, ty, d);
                let b = self.expr(env, ty, d);
                SrcExpr::or(a, b)
            }
            Prod::Fail => SrcExpr::Fail(ty.clone()),
        }
    }

    fn intro(&mut self, env: &Env, ty: &SrcType, d: usize) -> SrcExpr {
        match ty {
            SrcType::Unit => SrcExpr::Unit,
            SrcType::Bool => {
                if self.rng.gen_bool(0.5) {
                    SrcExpr::True
                } else {
                    SrcExpr::False
                }
            }
            SrcType::Prod(a, b) => {
                let l = self.expr(env, a, d);
                let r = self.expr(env, b, d);
                SrcExpr::pair(l, r)
            }
            SrcType::Arrow(a, b) => {
                if self.sig.allows_rec() && self.rng.gen_bool(0.2) {
                    let f = self.binder();
                    let x = self.binder();
                    let mut inner = env.clone();
                    inner.push((f.clone(), ty.clone()));
                    inner.push((x.clone(), (**a).clone()));
                    let body = self.expr(&inner, b, d);
                    return SrcExpr::rec_fun(f, (**a).clone(), (**b).clone(), x, body);
                }
                let x = self.binder();
                let mut inner = env.clone();
                inner.push((x.clone(), (**a).clone()));
                let body = self.expr(&inner, b, d);
                SrcExpr::lam(x, (**a).clone(), body)
            }
        }
    }

    /// Canonical inhabitants, preferring variables.
    fn leaf(&mut self, env: &Env, ty: &SrcType) -> SrcExpr {
        let vars = Generator::vars_of(env, ty);
        if !vars.is_empty() && self.rng.gen_bool(0.6) {
            return SrcExpr::Var(vars[self.rng.gen_range(0..vars.len())].clone());
        }
        if self.sig.allows_nondet() && self.rng.gen_bool(0.05) {
            return SrcExpr::Fail(ty.clone());
        }
        match ty {
            SrcType::Unit => SrcExpr::Unit,
            SrcType::Bool => {
                if self.rng.gen_bool(0.5) {
                    SrcExpr::True
                } else {
                    SrcExpr::False
                }
            }
            SrcType::Prod(a, b) => {
                let l = self.leaf(env, a);
                let r = self.leaf(env, b);
                SrcExpr::pair(l, r)
            }
            SrcType::Arrow(a, b) => {
                let x = self.binder();
                let mut inner = env.clone();
                inner.push((x.clone(), (**a).clone()));
                let body = self.leaf(&inner, b);
                SrcExpr::lam(x, (**a).clone(), body)
            }
        }
    }
}
