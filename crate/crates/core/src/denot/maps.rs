//! Semantic counterparts of the syntactic maps between the call-by-value
//! and call-by-name interpretations of a source type.
//!
//! * `η̂_τ : ⟦τ⟧v → U⟦τ⟧n`
//! * `φ_τ = algextend(η̂_τ) : T⟦τ⟧v → U⟦τ⟧n`
//! * `ψ_τ : U⟦τ⟧n → T⟦τ⟧v`
//!
//! and their extensions to contexts.

use crate::order::{Algebra, MonotoneMap, Poset};
use crate::source::{cbn_ctx, cbn_type, cbv_ctx, cbv_type, SrcContext, SrcType};

use super::interp::{interp_ctx, interp_ctype, interp_vtype};
use super::model::{DenotError, Model};

fn cached(
    model: &Model,
    key: &'static str,
    ty: &SrcType,
    build: impl FnOnce() -> Result<MonotoneMap, DenotError>,
) -> Result<MonotoneMap, DenotError> {
    if let Some(m) = model.caches.lock().expect("cache poisoned").maps.get(&(key, ty.clone())) {
        return Ok(m.clone());
    }
    let m = build()?;
    model
        .caches
        .lock()
        .expect("cache poisoned")
        .maps
        .insert((key, ty.clone()), m.clone());
    Ok(m)
}

/// `⟦τ⟧v`.
pub fn value_carrier(ty: &SrcType, model: &Model) -> Result<Poset, DenotError> {
    interp_vtype(&cbv_type(ty), model)
}

/// `T⟦τ⟧v`.
pub fn value_comp_carrier(ty: &SrcType, model: &Model) -> Result<Poset, DenotError> {
    Ok(model.monad().obj(&value_carrier(ty, model)?, model.budget())?)
}

/// The algebra `⟦τ⟧n`.
pub fn name_algebra(ty: &SrcType, model: &Model) -> Result<Algebra, DenotError> {
    interp_ctype(&cbn_type(ty), model)
}

pub fn tonamehat(ty: &SrcType, model: &Model) -> Result<MonotoneMap, DenotError> {
    cached(model, "tonamehat", ty, || {
        let dom = value_carrier(ty, model)?;
        let cod = name_algebra(ty, model)?.carrier().clone();
        let monad = model.monad();
        match ty {
            SrcType::Unit | SrcType::Bool => Ok(monad.unit(&dom, model.budget())?),
            SrcType::Prod(t1, t2) => {
                let h1 = tonamehat(t1, model)?;
                let h2 = tonamehat(t2, model)?;
                Ok(MonotoneMap::product_map(&h1, &h2, model.budget())?)
            }
            SrcType::Arrow(t1, t2) => {
                // η̂(g)(c) = algextend_{⟦τ'⟧n}(φ_τ' ∘ g)(ψ_τ(c))
                let psi1 = psi(t1, model)?;
                let phi2 = phi(t2, model)?;
                let alg2 = name_algebra(t2, model)?;
                let tv1 = value_comp_carrier(t1, model)?;
                let n1 = psi1.dom().clone();
                let mut table = Vec::with_capacity(dom.size());
                for g in dom.elements() {
                    let row: Vec<u32> = n1
                        .elements()
                        .map(|c| alg2.extend_at(&tv1, psi1.apply(c), &|x| phi2.apply(dom.apply(g, x))))
                        .collect();
                    table.push(cod.lookup_table(&row).expect("η̂ at an arrow is monotone"));
                }
                Ok(MonotoneMap::new_unchecked(&dom, &cod, table))
            }
        }
    })
}

pub fn phi(ty: &SrcType, model: &Model) -> Result<MonotoneMap, DenotError> {
    cached(model, "phi", ty, || {
        let hat = tonamehat(ty, model)?;
        let alg = name_algebra(ty, model)?;
        let tv = value_comp_carrier(ty, model)?;
        Ok(MonotoneMap::from_fn_unchecked(&tv, alg.carrier(), |t| {
            alg.extend_at(&tv, t, &|x| hat.apply(x))
        }))
    })
}

pub fn psi(ty: &SrcType, model: &Model) -> Result<MonotoneMap, DenotError> {
    cached(model, "psi", ty, || {
        let dom = name_algebra(ty, model)?.carrier().clone();
        let cod = value_comp_carrier(ty, model)?;
        let monad = model.monad();
        match ty {
            SrcType::Unit | SrcType::Bool => Ok(MonotoneMap::identity(&dom)),
            SrcType::Prod(t1, t2) => {
                // seq ∘ (ψ₁ × ψ₂)
                let p1 = psi(t1, model)?;
                let p2 = psi(t2, model)?;
                Ok(MonotoneMap::from_fn_unchecked(&dom, &cod, |i| {
                    let (a, b) = dom.unpair(i);
                    monad.seq_at(p1.cod(), p2.cod(), &cod, p1.apply(a), p2.apply(b))
                }))
            }
            SrcType::Arrow(t1, t2) => {
                // ψ(F) = η(ψ' ∘ F ∘ η̂)
                let hat1 = tonamehat(t1, model)?;
                let psi2 = psi(t2, model)?;
                let fun = value_carrier(ty, model)?;
                Ok(MonotoneMap::from_fn_unchecked(&dom, &cod, |f| {
                    let row: Vec<u32> = hat1
                        .dom()
                        .elements()
                        .map(|x| psi2.apply(dom.apply(f, hat1.apply(x))))
                        .collect();
                    let g = fun.lookup_table(&row).expect("ψ at an arrow is monotone");
                    monad.unit_at(&cod, g)
                }))
            }
        }
    })
}

/// `η̂_Γ : ⟦Γ⟧v → ⟦Γ⟧n`, componentwise.
pub fn tonamehat_ctx(ctx: &SrcContext, model: &Model) -> Result<MonotoneMap, DenotError> {
    let dom = interp_ctx(&cbv_ctx(ctx), model)?;
    let cod = interp_ctx(&cbn_ctx(ctx), model)?;
    let hats = ctx
        .entries()
        .iter()
        .map(|(_, t)| tonamehat(t, model))
        .collect::<Result<Vec<_>, _>>()?;
    let n = ctx.len();
    Ok(MonotoneMap::from_fn_unchecked(&dom, &cod, |rho| {
        let env = super::interp::decode_env(&dom, n, rho);
        let mapped: Vec<u32> = env.iter().zip(&hats).map(|(a, h)| h.apply(*a)).collect();
        super::interp::encode_env(&cod, &mapped)
    }))
}

/// `ψ_Γ : ⟦Γ⟧n → T⟦Γ⟧v`, with `ψ_⋄ = η₁` and
/// `ψ_{Γ,x:τ} = seq ∘ (ψ_Γ × ψ_τ)`.
pub fn tovalue_ctx(ctx: &SrcContext, model: &Model) -> Result<MonotoneMap, DenotError> {
    let b = model.budget();
    let monad = model.monad();
    let one = Poset::terminal();
    let mut acc = monad.unit(&one, b)?;
    let mut vctx = one.clone();
    for (_, t) in ctx.entries() {
        let p = psi(t, model)?;
        let v = value_carrier(t, model)?;
        let new_vctx = Poset::product(&vctx, &v, b)?;
        let dom = Poset::product(acc.dom(), p.dom(), b)?;
        let cod = monad.obj(&new_vctx, b)?;
        let prev = acc;
        acc = MonotoneMap::from_fn_unchecked(&dom, &cod, |i| {
            let (g, c) = dom.unpair(i);
            monad.seq_at(prev.cod(), p.cod(), &cod, prev.apply(g), p.apply(c))
        });
        vctx = new_vctx;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denot::model::ModelKind;

    fn bb() -> SrcType {
        SrcType::arrow(SrcType::Bool, SrcType::Bool)
    }

    #[test]
    fn bool_maps_are_identities() {
        for k in ModelKind::ALL {
            let m = Model::with_default_budget(k);
            let p = phi(&SrcType::Bool, &m).unwrap();
            assert_eq!(p, MonotoneMap::identity(p.dom()), "{k}");
            let q = psi(&SrcType::Bool, &m).unwrap();
            assert_eq!(q, MonotoneMap::identity(q.dom()), "{k}");
        }
    }

    #[test]
    fn arrow_domains_in_lift() {
        let m = Model::with_default_budget(ModelKind::Lift);
        assert_eq!(phi(&bb(), &m).unwrap().dom().size(), 10);
        assert_eq!(psi(&bb(), &m).unwrap().dom().size(), 11);
    }

    #[test]
    fn empty_context_maps() {
        for k in ModelKind::ALL {
            let m = Model::with_default_budget(k);
            let h = tonamehat_ctx(&SrcContext::empty(), &m).unwrap();
            assert_eq!(h, MonotoneMap::identity(&Poset::terminal()));
            let p = tovalue_ctx(&SrcContext::empty(), &m).unwrap();
            assert_eq!(p, m.monad().unit(&Poset::terminal(), m.budget()).unwrap());
        }
    }

    #[test]
    fn bool_context_embeds_into_lift() {
        let m = Model::with_default_budget(ModelKind::Lift);
        let ctx = SrcContext::new(vec![("x".into(), SrcType::Bool)]).unwrap();
        let h = tonamehat_ctx(&ctx, &m).unwrap();
        assert_eq!(h.dom().size(), 2);
        assert_eq!(h.cod().size(), 3);
        // (∗, tt) ↦ (∗, ↑tt), (∗, ff) ↦ (∗, ↑ff)
        assert_eq!(h.table(), &[1, 2]);
    }

    // The arrow clause of η̂ built from the combinators
    // curry(algextend(φ' ∘ ev) ∘ (id × ψ)).
    #[test]
    fn arrow_hat_matches_combinator_form() {
        for k in ModelKind::ALL {
            let m = Model::with_default_budget(k);
            let b = m.budget();
            for ty in [bb(), SrcType::arrow(SrcType::Bool, SrcType::prod(SrcType::Bool, SrcType::Bool))] {
                let SrcType::Arrow(t1, t2) = &ty else { unreachable!() };
                let Ok(hat) = tonamehat(&ty, &m) else { continue };
                let fun = value_carrier(&ty, &m).unwrap();
                let ev = MonotoneMap::eval(&fun, b).unwrap();
                let inner = phi(t2, &m).unwrap().compose(&ev).unwrap();
                let ext = name_algebra(t2, &m).unwrap().extend(&inner, b).unwrap();
                let idpsi = MonotoneMap::product_map(&MonotoneMap::identity(&fun), &psi(t1, &m).unwrap(), b).unwrap();
                let want = MonotoneMap::curry(&ext.compose(&idpsi).unwrap(), b).unwrap();
                assert_eq!(hat, want, "{k} {ty}");
            }
        }
    }

    #[test]
    fn product_psi_uses_literal_seq() {
        for k in ModelKind::ALL {
            let m = Model::with_default_budget(k);
            let ty = SrcType::prod(SrcType::Bool, SrcType::Bool);
            let p = psi(&ty, &m).unwrap();
            let two = Poset::two();
            let seq = m.monad().seq(&two, &two, m.budget()).unwrap();
            let pp = MonotoneMap::product_map(&psi(&SrcType::Bool, &m).unwrap(), &psi(&SrcType::Bool, &m).unwrap(), m.budget()).unwrap();
            assert_eq!(p, seq.compose(&pp).unwrap(), "{k}");
        }
    }
}
