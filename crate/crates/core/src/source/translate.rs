//! Call-by-value, call-by-name and right-to-left call-by-value
//! translations into CBPV.

use std::fmt;

use thiserror::Error;

use super::{check_src, SrcContext, SrcExpr, SrcType};
use crate::fresh::fresh;
use crate::syntax::{CompTerm, CompType, Component, EffectSignature, ValueTerm, ValueType};
use crate::text;
use crate::typing::{check_comp, TypeError, TypingContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Cbv,
    Cbn,
    /// Call-by-value with pair components evaluated right to left.
    Rtl,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Cbv => "cbv",
            Strategy::Cbn => "cbn",
            Strategy::Rtl => "rtl",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cbv" => Ok(Strategy::Cbv),
            "cbn" => Ok(Strategy::Cbn),
            "rtl" => Ok(Strategy::Rtl),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("source expression is ill-typed: {0}")]
    Source(TypeError),
    #[error("translated term is ill-typed: {0}")]
    Target(TypeError),
    #[error("translated term has type {found}, expected {expected}")]
    WrongType { expected: String, found: String },
}

pub fn cbv_type(t: &SrcType) -> ValueType {
    match t {
        SrcType::Unit => ValueType::Unit,
        SrcType::Bool => ValueType::Bool,
        SrcType::Prod(a, b) => ValueType::prod(cbv_type(a), cbv_type(b)),
        SrcType::Arrow(a, b) => {
            ValueType::thunk(CompType::arrow(cbv_type(a), CompType::free(cbv_type(b))))
        }
    }
}

pub fn cbn_type(t: &SrcType) -> CompType {
    match t {
        SrcType::Unit => CompType::free(ValueType::Unit),
        SrcType::Bool => CompType::free(ValueType::Bool),
        SrcType::Prod(a, b) => CompType::comp_prod(cbn_type(a), cbn_type(b)),
        SrcType::Arrow(a, b) => CompType::arrow(ValueType::thunk(cbn_type(a)), cbn_type(b)),
    }
}

pub fn cbv_ctx(ctx: &SrcContext) -> TypingContext {
    TypingContext::new(
        ctx.entries()
            .iter()
            .map(|(x, t)| (x.clone(), cbv_type(t)))
            .collect(),
    )
    .expect("source contexts have distinct names")
}

pub fn cbn_ctx(ctx: &SrcContext) -> TypingContext {
    TypingContext::new(
        ctx.entries()
            .iter()
            .map(|(x, t)| (x.clone(), ValueType::thunk(cbn_type(t))))
            .collect(),
    )
    .expect("source contexts have distinct names")
}

pub fn cbv_translate(e: &SrcExpr) -> CompTerm {
    by_value(e, false)
}

pub fn rtl_translate(e: &SrcExpr) -> CompTerm {
    by_value(e, true)
}

fn var(x: &crate::syntax::Ident) -> ValueTerm {
    ValueTerm::Var(x.clone())
}

fn by_value(e: &SrcExpr, rtl: bool) -> CompTerm {
    let go = |e: &SrcExpr| by_value(e, rtl);
    match e {
        SrcExpr::Var(x) => CompTerm::ret(var(x)),
        SrcExpr::Unit => CompTerm::ret(ValueTerm::Unit),
        SrcExpr::True => CompTerm::ret(ValueTerm::True),
        SrcExpr::False => CompTerm::ret(ValueTerm::False),
        SrcExpr::Pair(a, b) => {
            let z1 = fresh("z1");
            let z2 = fresh("z2");
            let result = CompTerm::ret(ValueTerm::pair(var(&z1), var(&z2)));
            if rtl {
                CompTerm::to(go(b), z2, CompTerm::to(go(a), z1, result))
            } else {
                CompTerm::to(go(a), z1, CompTerm::to(go(b), z2, result))
            }
        }
        SrcExpr::Fst(a) | SrcExpr::Snd(a) => {
            let z = fresh("z");
            let z1 = fresh("z1");
            let z2 = fresh("z2");
            let pick = if matches!(e, SrcExpr::Fst(_)) { &z1 } else { &z2 };
            let body = CompTerm::match_pair(var(&z), z1.clone(), z2.clone(), CompTerm::ret(var(pick)));
            CompTerm::to(go(a), z, body)
        }
        SrcExpr::If(c, a, b) => {
            let z = fresh("z");
            CompTerm::to(go(c), z.clone(), CompTerm::if_(var(&z), go(a), go(b)))
        }
        SrcExpr::Lam(x, t, body) => {
            CompTerm::ret(ValueTerm::thunk(CompTerm::lam(x.clone(), cbv_type(t), go(body))))
        }
        SrcExpr::App(f, a) => {
            let y = fresh("y");
            let z = fresh("z");
            CompTerm::to(
                go(f),
                y.clone(),
                CompTerm::to(go(a), z.clone(), CompTerm::push(var(&z), CompTerm::force(var(&y)))),
            )
        }
        SrcExpr::RecFun { f, arg, res, x, body } => {
            let fun_ty = CompType::arrow(cbv_type(arg), CompType::free(cbv_type(res)));
            CompTerm::ret(ValueTerm::thunk(CompTerm::rec(
                f.clone(),
                fun_ty,
                CompTerm::lam(x.clone(), cbv_type(arg), go(body)),
            )))
        }
        SrcExpr::Fail(t) => CompTerm::Fail(CompType::free(cbv_type(t))),
        SrcExpr::Or(a, b) => CompTerm::or(go(a), go(b)),
    }
}

pub fn cbn_translate(e: &SrcExpr) -> CompTerm {
    match e {
        SrcExpr::Var(x) => CompTerm::force(var(x)),
        SrcExpr::Unit => CompTerm::ret(ValueTerm::Unit),
        SrcExpr::True => CompTerm::ret(ValueTerm::True),
        SrcExpr::False => CompTerm::ret(ValueTerm::False),
        SrcExpr::Pair(a, b) => CompTerm::comp_pair(cbn_translate(a), cbn_translate(b)),
        SrcExpr::Fst(a) => CompTerm::proj(Component::First, cbn_translate(a)),
        SrcExpr::Snd(a) => CompTerm::proj(Component::Second, cbn_translate(a)),
        SrcExpr::If(c, a, b) => {
            let z = fresh("z");
            CompTerm::to(
                cbn_translate(c),
                z.clone(),
                CompTerm::if_(var(&z), cbn_translate(a), cbn_translate(b)),
            )
        }
        SrcExpr::Lam(x, t, body) => {
            CompTerm::lam(x.clone(), ValueType::thunk(cbn_type(t)), cbn_translate(body))
        }
        SrcExpr::App(f, a) => {
            CompTerm::push(ValueTerm::thunk(cbn_translate(a)), cbn_translate(f))
        }
        SrcExpr::RecFun { f, arg, res, x, body } => {
            let fun_ty = CompType::arrow(ValueType::thunk(cbn_type(arg)), cbn_type(res));
            CompTerm::rec(
                f.clone(),
                fun_ty,
                CompTerm::lam(x.clone(), ValueType::thunk(cbn_type(arg)), cbn_translate(body)),
            )
        }
        SrcExpr::Fail(t) => CompTerm::Fail(cbn_type(t)),
        SrcExpr::Or(a, b) => CompTerm::or(cbn_translate(a), cbn_translate(b)),
    }
}

pub fn translate(strategy: Strategy, e: &SrcExpr) -> CompTerm {
    match strategy {
        Strategy::Cbv => cbv_translate(e),
        Strategy::Cbn => cbn_translate(e),
        Strategy::Rtl => rtl_translate(e),
    }
}

/// Translates a typed expression and asserts that the result has the
/// translated type in the translated context.
pub fn translate_checked(
    strategy: Strategy,
    ctx: &SrcContext,
    e: &SrcExpr,
    sig: EffectSignature,
) -> Result<(CompTerm, CompType), TranslateError> {
    let ty = check_src(ctx, e, sig).map_err(TranslateError::Source)?;
    let (term, target_ctx, expected) = match strategy {
        Strategy::Cbn => (cbn_translate(e), cbn_ctx(ctx), cbn_type(&ty)),
        s => (translate(s, e), cbv_ctx(ctx), CompType::free(cbv_type(&ty))),
    };
    let found = check_comp(&target_ctx, &term, sig).map_err(TranslateError::Target)?;
    if found != expected {
        return Err(TranslateError::WrongType {
            expected: text::print_comp_type(&expected),
            found: text::print_comp_type(&found),
        });
    }
    Ok((term, found))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fresh;
    use crate::source::text::parse_expr;
    use crate::text::parse_comp;

    fn golden(strategy: Strategy, src: &str, expected: &str) {
        fresh::reset();
        let out = translate(strategy, &parse_expr(src).unwrap());
        assert_eq!(out, parse_comp(expected).unwrap(), "{}", text::print_comp(&out));
    }

    #[test]
    fn types() {
        assert_eq!(cbv_type(&SrcType::Bool), ValueType::Bool);
        assert_eq!(cbn_type(&SrcType::Bool), CompType::free(ValueType::Bool));
        assert_eq!(
            cbv_type(&SrcType::arrow(SrcType::Bool, SrcType::Bool)),
            ValueType::thunk(CompType::arrow(ValueType::Bool, CompType::free(ValueType::Bool)))
        );
        assert_eq!(
            cbn_type(&SrcType::prod(SrcType::Unit, SrcType::Bool)),
            CompType::comp_prod(CompType::free(ValueType::Unit), CompType::free(ValueType::Bool))
        );
    }

    #[test]
    fn variables() {
        golden(Strategy::Cbv, "x", "(return x)");
        golden(Strategy::Rtl, "x", "(return x)");
        golden(Strategy::Cbn, "x", "(force x)");
    }

    #[test]
    fn application() {
        golden(
            Strategy::Cbv,
            "(sapp f a)",
            "(to (return f) y%0 (to (return a) z%1 (push z%1 (force y%0))))",
        );
        golden(Strategy::Cbn, "(sapp f a)", "(push (thunk (force a)) (force f))");
    }

    #[test]
    fn abstraction() {
        golden(Strategy::Cbv, "(slam x bool x)", "(return (thunk (lam x bool (return x))))");
        golden(Strategy::Cbn, "(slam x bool x)", "(lam x (U (F bool)) (force x))");
    }

    #[test]
    fn pairs() {
        golden(
            Strategy::Cbv,
            "(spair strue sfalse)",
            "(to (return true) z1%0 (to (return false) z2%1 (return (pair z1%0 z2%1))))",
        );
        golden(
            Strategy::Rtl,
            "(spair strue sfalse)",
            "(to (return false) z2%1 (to (return true) z1%0 (return (pair z1%0 z2%1))))",
        );
        golden(Strategy::Cbn, "(spair strue sfalse)", "(cpair (return true) (return false))");
        golden(Strategy::Cbn, "(sfst p)", "(proj 1 (force p))");
        golden(
            Strategy::Cbv,
            "(ssnd p)",
            "(to (return p) z%0 (match z%0 z1%1 z2%2 (return z2%2)))",
        );
    }

    #[test]
    fn recursion_and_choice() {
        golden(
            Strategy::Cbv,
            "(srec f bool bool x (sapp f x))",
            "(return (thunk (rec f (-> bool (F bool)) (lam x bool \
             (to (return f) y%0 (to (return x) z%1 (push z%1 (force y%0))))))))",
        );
        golden(
            Strategy::Cbn,
            "(srec f bool bool x (sapp f x))",
            "(rec f (-> (U (F bool)) (F bool)) (lam x (U (F bool)) (push (thunk (force x)) (force f))))",
        );
        golden(Strategy::Cbv, "(sor strue (sfail bool))", "(or (return true) (fail (F bool)))");
        golden(Strategy::Cbn, "(sfail (* bool unit))", "(fail (& (F bool) (F unit)))");
    }

    #[test]
    fn typing_is_preserved() {
        let ctx = crate::source::text::parse_context("((x bool) (f (-> bool bool)) (p (* bool unit)))").unwrap();
        let exprs = [
            "(sapp f (sif x (sfst p) strue))",
            "(spair (ssnd p) (slam y (-> bool bool) (sapp y x)))",
            "(sapp (srec g bool (* bool bool) y (sif y (spair y y) (sapp g strue))) sfalse)",
        ];
        for src in exprs {
            let e = parse_expr(src).unwrap();
            for s in [Strategy::Cbv, Strategy::Cbn, Strategy::Rtl] {
                translate_checked(s, &ctx, &e, EffectSignature::Div).unwrap();
            }
        }
        let nd = parse_expr("(sor (sapp f x) (sfail bool))").unwrap();
        for s in [Strategy::Cbv, Strategy::Cbn, Strategy::Rtl] {
            translate_checked(s, &ctx, &nd, EffectSignature::Nondet).unwrap();
        }
    }
}
