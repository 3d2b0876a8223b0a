//! The source lambda-language fed to the translations.

pub mod text;
pub mod translate;

use std::fmt;

use crate::syntax::{EffectSignature, Ident};
use crate::typing::{TermPath, TypeError};

pub use translate::{
    cbn_ctx, cbn_translate, cbn_type, cbv_ctx, cbv_translate, cbv_type, rtl_translate,
    translate, translate_checked, Strategy, TranslateError,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SrcType {
    Unit,
    Prod(Box<SrcType>, Box<SrcType>),
    Bool,
    Arrow(Box<SrcType>, Box<SrcType>),
}

impl SrcType {
    pub fn prod(a: SrcType, b: SrcType) -> Self {
        SrcType::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: SrcType, b: SrcType) -> Self {
        SrcType::Arrow(Box::new(a), Box::new(b))
    }

    /// The types every Galois and lax-idempotence suite runs over by default.
    pub fn default_suite() -> Vec<SrcType> {
        use SrcType::*;
        vec![
            Bool,
            Unit,
            SrcType::prod(Bool, Bool),
            SrcType::arrow(Bool, Bool),
            SrcType::arrow(Bool, SrcType::prod(Bool, Bool)),
        ]
    }

    pub fn depth(&self) -> usize {
        match self {
            SrcType::Unit | SrcType::Bool => 1,
            SrcType::Prod(a, b) | SrcType::Arrow(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for SrcType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::print_type(self))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SrcExpr {
    Var(Ident),
    Unit,
    Pair(Box<SrcExpr>, Box<SrcExpr>),
    Fst(Box<SrcExpr>),
    Snd(Box<SrcExpr>),
    True,
    False,
    If(Box<SrcExpr>, Box<SrcExpr>, Box<SrcExpr>),
    Lam(Ident, SrcType, Box<SrcExpr>),
    App(Box<SrcExpr>, Box<SrcExpr>),
    /// `rec f x. e` of type `arg -> res`; `f` and `x` are bound in `e`.
    RecFun {
        f: Ident,
        arg: SrcType,
        res: SrcType,
        x: Ident,
        body: Box<SrcExpr>,
    },
    Fail(SrcType),
    Or(Box<SrcExpr>, Box<SrcExpr>),
}

impl SrcExpr {
    pub fn var(x: impl Into<Ident>) -> Self {
        SrcExpr::Var(x.into())
    }

    pub fn pair(a: SrcExpr, b: SrcExpr) -> Self {
        SrcExpr::Pair(Box::new(a), Box::new(b))
    }

    pub fn fst(e: SrcExpr) -> Self {
        SrcExpr::Fst(Box::new(e))
    }

    pub fn snd(e: SrcExpr) -> Self {
        SrcExpr::Snd(Box::new(e))
    }

    pub fn if_(c: SrcExpr, a: SrcExpr, b: SrcExpr) -> Self {
        SrcExpr::If(Box::new(c), Box::new(a), Box::new(b))
    }

    pub fn lam(x: impl Into<Ident>, ty: SrcType, body: SrcExpr) -> Self {
        SrcExpr::Lam(x.into(), ty, Box::new(body))
    }

    pub fn app(f: SrcExpr, a: SrcExpr) -> Self {
        SrcExpr::App(Box::new(f), Box::new(a))
    }

    pub fn rec_fun(
        f: impl Into<Ident>,
        arg: SrcType,
        res: SrcType,
        x: impl Into<Ident>,
        body: SrcExpr,
    ) -> Self {
        SrcExpr::RecFun {
            f: f.into(),
            arg,
            res,
            x: x.into(),
            body: Box::new(body),
        }
    }

    pub fn or(a: SrcExpr, b: SrcExpr) -> Self {
        SrcExpr::Or(Box::new(a), Box::new(b))
    }

    /// The divergent expression `(rec f x. f x) false` at type `ty`.
    pub fn omega(ty: SrcType) -> Self {
        SrcExpr::app(
            SrcExpr::rec_fun(
                "f",
                SrcType::Bool,
                ty,
                "x",
                SrcExpr::app(SrcExpr::var("f"), SrcExpr::var("x")),
            ),
            SrcExpr::False,
        )
    }

    pub fn size(&self) -> usize {
        match self {
            SrcExpr::Var(_) | SrcExpr::Unit | SrcExpr::True | SrcExpr::False | SrcExpr::Fail(_) => 1,
            SrcExpr::Fst(e) | SrcExpr::Snd(e) | SrcExpr::Lam(_, _, e) => 1 + e.size(),
            SrcExpr::RecFun { body, .. } => 1 + body.size(),
            SrcExpr::Pair(a, b) | SrcExpr::App(a, b) | SrcExpr::Or(a, b) => 1 + a.size() + b.size(),
            SrcExpr::If(c, a, b) => 1 + c.size() + a.size() + b.size(),
        }
    }

    /// Counts applications and conditionals, used by generator smoke tests.
    pub fn count(&self, pred: &dyn Fn(&SrcExpr) -> bool) -> usize {
        let here = usize::from(pred(self));
        here + match self {
            SrcExpr::Var(_) | SrcExpr::Unit | SrcExpr::True | SrcExpr::False | SrcExpr::Fail(_) => 0,
            SrcExpr::Fst(e) | SrcExpr::Snd(e) | SrcExpr::Lam(_, _, e) => e.count(pred),
            SrcExpr::RecFun { body, .. } => body.count(pred),
            SrcExpr::Pair(a, b) | SrcExpr::App(a, b) | SrcExpr::Or(a, b) => a.count(pred) + b.count(pred),
            SrcExpr::If(c, a, b) => c.count(pred) + a.count(pred) + b.count(pred),
        }
    }
}

impl fmt::Display for SrcExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::print_expr(self))
    }
}

/// Ordered source typing context without duplicate names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SrcContext {
    entries: Vec<(Ident, SrcType)>,
}

impl SrcContext {
    pub fn empty() -> Self {
        SrcContext::default()
    }

    pub fn new(entries: Vec<(Ident, SrcType)>) -> Result<Self, TypeError> {
        for (i, (x, _)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(y, _)| y == x) {
                return Err(TypeError::DuplicateVariable(x.clone()));
            }
        }
        Ok(SrcContext { entries })
    }

    pub fn entries(&self) -> &[(Ident, SrcType)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, x: &Ident) -> Option<&SrcType> {
        self.entries.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }
}

impl fmt::Display for SrcContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::print_context(self))
    }
}

pub fn check_src(ctx: &SrcContext, e: &SrcExpr, sig: EffectSignature) -> Result<SrcType, TypeError> {
    let mut checker = SrcChecker {
        sig,
        path: Vec::new(),
    };
    checker.check(&mut ctx.entries.clone(), e)
}

struct SrcChecker {
    sig: EffectSignature,
    path: Vec<&'static str>,
}

impl SrcChecker {
    fn at<T>(&mut self, step: &'static str, f: impl FnOnce(&mut Self) -> T) -> T {
        self.path.push(step);
        let out = f(self);
        self.path.pop();
        out
    }

    fn mismatch(&self, expected: impl Into<String>, found: &SrcType) -> TypeError {
        TypeError::TypeMismatch {
            path: TermPath(self.path.clone()),
            expected: expected.into(),
            found: found.to_string(),
        }
    }

    fn gate(&self, allowed: bool, construct: &'static str) -> Result<(), TypeError> {
        if allowed {
            Ok(())
        } else {
            Err(TypeError::EffectNotAllowed {
                sig: self.sig,
                construct,
                path: TermPath(self.path.clone()),
            })
        }
    }

    fn check(&mut self, env: &mut Vec<(Ident, SrcType)>, e: &SrcExpr) -> Result<SrcType, TypeError> {
        match e {
            SrcExpr::Var(x) => env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| TypeError::UnboundVariable {
                    name: x.clone(),
                    path: TermPath(self.path.clone()),
                }),
            SrcExpr::Unit => Ok(SrcType::Unit),
            SrcExpr::True | SrcExpr::False => Ok(SrcType::Bool),
            SrcExpr::Pair(a, b) => {
                let ta = self.at("pair.1", |c| c.check(env, a))?;
                let tb = self.at("pair.2", |c| c.check(env, b))?;
                Ok(SrcType::prod(ta, tb))
            }
            SrcExpr::Fst(a) | SrcExpr::Snd(a) => {
                let ta = self.at("proj", |c| c.check(env, a))?;
                match ta {
                    SrcType::Prod(t1, t2) => Ok(if matches!(e, SrcExpr::Fst(_)) { *t1 } else { *t2 }),
                    other => Err(self.mismatch("a product type", &other)),
                }
            }
            SrcExpr::If(c0, a, b) => {
                let tc = self.at("if.cond", |c| c.check(env, c0))?;
                if tc != SrcType::Bool {
                    return Err(self.at("if.cond", |c| c.mismatch("bool", &tc)));
                }
                let ta = self.at("if.then", |c| c.check(env, a))?;
                let tb = self.at("if.else", |c| c.check(env, b))?;
                if ta != tb {
                    return Err(self.at("if.else", |c| c.mismatch(ta.to_string(), &tb)));
                }
                Ok(ta)
            }
            SrcExpr::Lam(x, ty, body) => {
                env.push((x.clone(), ty.clone()));
                let tb = self.at("lam.body", |c| c.check(env, body));
                env.pop();
                Ok(SrcType::arrow(ty.clone(), tb?))
            }
            SrcExpr::App(f, a) => {
                let tf = self.at("app.fun", |c| c.check(env, f))?;
                let ta = self.at("app.arg", |c| c.check(env, a))?;
                match tf {
                    SrcType::Arrow(dom, cod) if *dom == ta => Ok(*cod),
                    SrcType::Arrow(dom, _) => Err(self.at("app.arg", |c| c.mismatch(dom.to_string(), &ta))),
                    other => Err(self.at("app.fun", |c| c.mismatch("a function type", &other))),
                }
            }
            SrcExpr::RecFun { f, arg, res, x, body } => {
                self.gate(self.sig.allows_rec(), "rec")?;
                let fty = SrcType::arrow(arg.clone(), res.clone());
                env.push((f.clone(), fty.clone()));
                env.push((x.clone(), arg.clone()));
                let tb = self.at("rec.body", |c| c.check(env, body));
                env.truncate(env.len() - 2);
                let tb = tb?;
                if tb != *res {
                    return Err(self.at("rec.body", |c| c.mismatch(res.to_string(), &tb)));
                }
                Ok(fty)
            }
            SrcExpr::Fail(ty) => {
                self.gate(self.sig.allows_nondet(), "fail")?;
                Ok(ty.clone())
            }
            SrcExpr::Or(a, b) => {
                self.gate(self.sig.allows_nondet(), "or")?;
                let ta = self.at("or.1", |c| c.check(env, a))?;
                let tb = self.at("or.2", |c| c.check(env, b))?;
                if ta != tb {
                    return Err(self.at("or.2", |c| c.mismatch(ta.to_string(), &tb)));
                }
                Ok(ta)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use EffectSignature::*;

    #[test]
    fn identity_function() {
        let e = SrcExpr::lam("x", SrcType::Bool, SrcExpr::var("x"));
        assert_eq!(
            check_src(&SrcContext::empty(), &e, Pure),
            Ok(SrcType::arrow(SrcType::Bool, SrcType::Bool))
        );
    }

    #[test]
    fn recursive_function() {
        let e = SrcExpr::rec_fun(
            "f",
            SrcType::Bool,
            SrcType::Bool,
            "x",
            SrcExpr::app(SrcExpr::var("f"), SrcExpr::var("x")),
        );
        assert_eq!(
            check_src(&SrcContext::empty(), &e, Div),
            Ok(SrcType::arrow(SrcType::Bool, SrcType::Bool))
        );
        assert!(check_src(&SrcContext::empty(), &e, Pure).is_err());
        assert_eq!(
            check_src(&SrcContext::empty(), &SrcExpr::omega(SrcType::Unit), Div),
            Ok(SrcType::Unit)
        );
    }

    #[test]
    fn choice() {
        let e = SrcExpr::or(SrcExpr::True, SrcExpr::False);
        assert_eq!(check_src(&SrcContext::empty(), &e, Nondet), Ok(SrcType::Bool));
        assert!(check_src(&SrcContext::empty(), &e, Div).is_err());
        assert!(check_src(&SrcContext::empty(), &SrcExpr::Fail(SrcType::Unit), Pure).is_err());
    }

    #[test]
    fn errors() {
        let e = SrcExpr::app(SrcExpr::True, SrcExpr::False);
        assert!(matches!(
            check_src(&SrcContext::empty(), &e, Pure),
            Err(TypeError::TypeMismatch { .. })
        ));
        assert!(matches!(
            check_src(&SrcContext::empty(), &SrcExpr::var("y"), Pure),
            Err(TypeError::UnboundVariable { .. })
        ));
        let dup = vec![(Ident::new("x"), SrcType::Bool), (Ident::new("x"), SrcType::Bool)];
        assert!(SrcContext::new(dup).is_err());
    }

    #[test]
    fn projections() {
        let ctx = SrcContext::new(vec![(
            Ident::new("p"),
            SrcType::prod(SrcType::Bool, SrcType::Unit),
        )])
        .unwrap();
        assert_eq!(check_src(&ctx, &SrcExpr::snd(SrcExpr::var("p")), Pure), Ok(SrcType::Unit));
        assert_eq!(check_src(&ctx, &SrcExpr::fst(SrcExpr::var("p")), Pure), Ok(SrcType::Bool));
    }
}
