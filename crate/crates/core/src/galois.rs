//! Type-indexed maps between the call-by-value and call-by-name
//! translations, generated as CBPV syntax.
//!
//! * [`to_name`] turns a call-by-value computation of type `F ⟦τ⟧v` into
//!   a computation of type `⟦τ⟧n`.
//! * [`to_name_hat`] does the same for a value of type `⟦τ⟧v`.
//! * [`to_value`] turns a call-by-name computation of type `⟦τ⟧n` into a
//!   call-by-value computation of type `F ⟦τ⟧v`.

use std::collections::BTreeSet;
use std::fmt;

use crate::fresh::{fresh, fresh_avoiding};
use crate::source::{cbn_translate, cbn_type, cbv_type, SrcContext, SrcExpr, SrcType};
use crate::subst::{free_vars_comp, free_vars_value, substitute, Substitution};
use crate::syntax::{CompTerm, Component, Ident, ValueTerm, ValueType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapDirection {
    ToName,
    ToValue,
}

impl fmt::Display for MapDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapDirection::ToName => "toname",
            MapDirection::ToValue => "tovalue",
        })
    }
}

impl std::str::FromStr for MapDirection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "toname" => Ok(MapDirection::ToName),
            "tovalue" => Ok(MapDirection::ToValue),
            other => Err(format!("unknown map direction `{other}`")),
        }
    }
}

fn var(x: &Ident) -> ValueTerm {
    ValueTerm::Var(x.clone())
}

/// `M to x. to_name_hat(x)`.
pub fn to_name(ty: &SrcType, m: &CompTerm) -> CompTerm {
    let x = fresh("x");
    let body = to_name_hat(ty, &var(&x));
    CompTerm::to(m.clone(), x, body)
}

pub fn to_name_hat(ty: &SrcType, v: &ValueTerm) -> CompTerm {
    match ty {
        SrcType::Unit | SrcType::Bool => CompTerm::ret(v.clone()),
        SrcType::Prod(t1, t2) => {
            let z1 = fresh("z1");
            let z2 = fresh("z2");
            let body = CompTerm::comp_pair(to_name_hat(t1, &var(&z1)), to_name_hat(t2, &var(&z2)));
            CompTerm::match_pair(v.clone(), z1, z2, body)
        }
        SrcType::Arrow(t1, t2) => {
            // λx. to_value(force x) to y. (y ' force v) to z. to_name_hat(z)
            let avoid: BTreeSet<Ident> = free_vars_value(v);
            let x = fresh_avoiding("x", &avoid);
            let y = fresh_avoiding("y", &avoid);
            let z = fresh("z");
            let arg = to_value(t1, &CompTerm::force(var(&x)));
            let call = CompTerm::push(var(&y), CompTerm::force(v.clone()));
            let body = CompTerm::to(arg, y, CompTerm::to(call, z.clone(), to_name_hat(t2, &var(&z))));
            CompTerm::lam(x, ValueType::thunk(cbn_type(t1)), body)
        }
    }
}

pub fn to_value(ty: &SrcType, n: &CompTerm) -> CompTerm {
    match ty {
        SrcType::Unit | SrcType::Bool => n.clone(),
        SrcType::Prod(t1, t2) => {
            let avoid = free_vars_comp(n);
            let z1 = fresh_avoiding("z1", &avoid);
            let z2 = fresh("z2");
            let first = to_value(t1, &CompTerm::proj(Component::First, n.clone()));
            let second = to_value(t2, &CompTerm::proj(Component::Second, n.clone()));
            CompTerm::to(
                first,
                z1.clone(),
                CompTerm::to(second, z2.clone(), CompTerm::ret(ValueTerm::pair(var(&z1), var(&z2)))),
            )
        }
        SrcType::Arrow(t1, t2) => {
            // return thunk (λx. to_value((thunk to_name_hat(x)) ' N))
            let avoid = free_vars_comp(n);
            let x = fresh_avoiding("x", &avoid);
            let arg = ValueTerm::thunk(to_name_hat(t1, &var(&x)));
            let body = to_value(t2, &CompTerm::push(arg, n.clone()));
            CompTerm::ret(ValueTerm::thunk(CompTerm::lam(x, cbv_type(t1), body)))
        }
    }
}

/// The substitution sending each `x : τ` in the context to
/// `thunk(to_name_hat(τ, x))`.
pub fn ctx_thunk_subst(ctx: &SrcContext) -> Substitution {
    ctx.entries()
        .iter()
        .map(|(x, t)| (x.clone(), ValueTerm::thunk(to_name_hat(t, &var(x)))))
        .collect()
}

/// The call-by-name translation of `e` plugged into call-by-value
/// variables and converted back: it has the same typing as the
/// call-by-value translation.
pub fn rhs_term(ctx: &SrcContext, e: &SrcExpr, ty: &SrcType) -> CompTerm {
    let n = substitute(&cbn_translate(e), &ctx_thunk_subst(ctx));
    to_value(ty, &n)
}

/// Applies a syntactic map in the given direction.
pub fn apply_map(dir: MapDirection, ty: &SrcType, m: &CompTerm) -> CompTerm {
    match dir {
        MapDirection::ToName => to_name(ty, m),
        MapDirection::ToValue => to_value(ty, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::results;
    use crate::fresh;
    use crate::source::{cbn_ctx, cbv_ctx, cbv_translate};
    use crate::syntax::{CompType, EffectSignature};
    use crate::text::{parse_comp, print_comp};
    use crate::typing::{check_comp, check_comp_any, TypingContext};

    fn bool_arrow() -> SrcType {
        SrcType::arrow(SrcType::Bool, SrcType::Bool)
    }

    #[test]
    fn to_name_at_bool() {
        fresh::reset();
        let out = to_name(&SrcType::Bool, &CompTerm::ret(ValueTerm::True));
        assert_eq!(out, parse_comp("(to (return true) x%0 (return x%0))").unwrap());
    }

    #[test]
    fn to_name_hat_at_base_and_product() {
        assert_eq!(to_name_hat(&SrcType::Bool, &ValueTerm::True), CompTerm::ret(ValueTerm::True));
        fresh::reset();
        let v = ValueTerm::pair(ValueTerm::True, ValueTerm::False);
        let out = to_name_hat(&SrcType::prod(SrcType::Bool, SrcType::Bool), &v);
        assert_eq!(
            out,
            parse_comp("(match (pair true false) z1%0 z2%1 (cpair (return z1%0) (return z2%1)))").unwrap()
        );
    }

    #[test]
    fn to_value_at_bool_is_identity() {
        let n = parse_comp("(or (return true) (return false))").unwrap();
        assert_eq!(to_value(&SrcType::Bool, &n), n);
        assert_eq!(to_value(&SrcType::Unit, &n), n);
    }

    #[test]
    fn to_value_at_product() {
        fresh::reset();
        let n = parse_comp("(force p)").unwrap();
        let out = to_value(&SrcType::prod(SrcType::Bool, SrcType::Bool), &n);
        assert_eq!(
            out,
            parse_comp("(to (proj 1 (force p)) z1%0 (to (proj 2 (force p)) z2%1 (return (pair z1%0 z2%1))))")
                .unwrap()
        );
    }

    #[test]
    fn typing_contracts_at_arrow() {
        let ty = bool_arrow();
        let ctx = TypingContext::new(vec![(Ident::new("g"), cbv_type(&ty))]).unwrap();
        let m = CompTerm::ret(ValueTerm::var("g"));
        assert_eq!(
            check_comp(&ctx, &to_name(&ty, &m), EffectSignature::Pure).unwrap(),
            CompType::arrow(
                ValueType::thunk(CompType::free(ValueType::Bool)),
                CompType::free(ValueType::Bool)
            )
        );
        let nctx = TypingContext::new(vec![(Ident::new("h"), ValueType::thunk(cbn_type(&ty)))]).unwrap();
        let n = CompTerm::force(ValueTerm::var("h"));
        assert_eq!(
            check_comp(&nctx, &to_value(&ty, &n), EffectSignature::Pure).unwrap(),
            CompType::free(cbv_type(&ty))
        );
    }

    #[test]
    fn nested_types_typecheck() {
        let types = [
            SrcType::arrow(bool_arrow(), SrcType::prod(SrcType::Bool, SrcType::Unit)),
            SrcType::prod(bool_arrow(), SrcType::arrow(SrcType::Unit, bool_arrow())),
        ];
        for ty in types {
            let vctx = TypingContext::new(vec![(Ident::new("v"), cbv_type(&ty))]).unwrap();
            let hat = to_name_hat(&ty, &ValueTerm::var("v"));
            assert_eq!(check_comp_any(&vctx, &hat).unwrap(), cbn_type(&ty), "{}", print_comp(&hat));
            let nctx = TypingContext::new(vec![(Ident::new("n"), ValueType::thunk(cbn_type(&ty)))]).unwrap();
            let back = to_value(&ty, &CompTerm::force(ValueTerm::var("n")));
            assert_eq!(check_comp_any(&nctx, &back).unwrap(), CompType::free(cbv_type(&ty)));
        }
    }

    #[test]
    fn choice_survives_to_name() {
        let m = parse_comp("(or (return true) (return false))").unwrap();
        let r = results(&to_name(&SrcType::Bool, &m), 100).unwrap();
        assert_eq!(r.values, [ValueTerm::True, ValueTerm::False].into());
    }

    #[test]
    fn context_substitution() {
        assert!(ctx_thunk_subst(&SrcContext::empty()).is_empty());
        let ctx = SrcContext::new(vec![(Ident::new("x"), SrcType::Bool)]).unwrap();
        let sub = ctx_thunk_subst(&ctx);
        assert_eq!(
            sub.get(&Ident::new("x")),
            Some(&ValueTerm::thunk(CompTerm::ret(ValueTerm::var("x"))))
        );
    }

    #[test]
    fn rhs_has_cbv_typing() {
        let ctx = crate::source::text::parse_context("((x bool) (f (-> bool bool)) (p (* bool bool)))").unwrap();
        let e = crate::source::text::parse_expr("(spair (sapp f (sfst p)) (slam y bool (sif y x y)))").unwrap();
        let ty = crate::source::check_src(&ctx, &e, EffectSignature::Pure).unwrap();
        let rhs = rhs_term(&ctx, &e, &ty);
        assert_eq!(
            check_comp(&cbv_ctx(&ctx), &rhs, EffectSignature::Pure).unwrap(),
            check_comp(&cbv_ctx(&ctx), &cbv_translate(&e), EffectSignature::Pure).unwrap()
        );
        let _ = cbn_ctx(&ctx);
    }

    #[test]
    fn closed_bool_rhs_is_cbn_translation() {
        let e = SrcExpr::app(SrcExpr::lam("x", SrcType::Bool, SrcExpr::True), SrcExpr::omega(SrcType::Bool));
        fresh::reset();
        let a = rhs_term(&SrcContext::empty(), &e, &SrcType::Bool);
        fresh::reset();
        let b = cbn_translate(&e);
        assert_eq!(a, b);
        let r = results(&a, 10_000).unwrap();
        assert_eq!(r.values, [ValueTerm::True].into());
    }

    #[test]
    fn avoids_capturing_free_variables() {
        // A free variable named like a generated binder must stay free.
        let v = ValueTerm::var("x%0");
        fresh::reset();
        let hat = to_name_hat(&bool_arrow(), &v);
        assert!(free_vars_comp(&hat).contains(&Ident::new("x%0")));
    }
}
