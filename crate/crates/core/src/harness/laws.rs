//! One function per law. Sampled laws take a case RNG and produce one
//! [`Outcome`]; exhaustive laws take one enumerated job and produce an
//! outcome per map they inspect.

use std::collections::HashMap;
use std::hash::Hash;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use serde_json::Value;

use super::formulas::{AssertFormula, InstrumentFormula};
use super::report::{inputs, Outcome, Probe};
use super::sample::{Bounds, CaseRng, Exhaustive, Sampler};
use crate::chain::{
    derive_assert, derive_instrument, falsum, hom_check, left_composite, side_effect, truth, Chain, Measurement,
    PredObject,
};
use crate::error::{Error, Result};
use crate::linear::{hilb_orthocomplement, ClosedSubspace, HilbSpace};
use crate::ring::{ring_decompose, verify_iso_type, Elem, RingObj};
use crate::vn::{cauchy_schwarz_residual, cp_check, AlgElement, CpsuMap, VnInstrument, VnObject};

/// Residual of a boolean check, for the report's `max_residual`.
fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn pred_obj<C: Chain>(x: &C::Object, p: &C::Pred) -> PredObject<C::Object, C::Pred> {
    PredObject {
        base: x.clone(),
        pred: p.clone(),
    }
}

fn ortho<C: Chain>(c: &C, x: &C::Object, p: &C::Pred) -> Result<C::Pred> {
    c.ortho(x, p).ok_or(Error::NoOrthocomplement(c.name()))
}

macro_rules! setup {
    ($e:expr) => {
        match (|| -> Result<_> { $e })() {
            Ok(v) => v,
            Err(e) => return Outcome::error(&e),
        }
    };
}

/// Associativity and unit laws of `⊙`.
pub(crate) fn composition<C: Sampler>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome {
    let (f, g, h) = setup!({
        let x = c.sample_object(rng, b)?;
        let y = c.sample_peer(rng, &x, b)?;
        let z = c.sample_peer(rng, &x, b)?;
        let w = c.sample_peer(rng, &x, b)?;
        Ok((c.sample_map(rng, &x, &y, b), c.sample_map(rng, &y, &z, b), c.sample_map(rng, &z, &w, b)))
    });
    let tol = c.tolerance();
    let mut pr = Probe::default();
    let body = (|| -> Result<()> {
        let left = c.compose(&h, &c.compose(&g, &f)?)?;
        let right = c.compose(&c.compose(&h, &g)?, &f)?;
        pr.close("h ⊙ (g ⊙ f) = (h ⊙ g) ⊙ f", c.map_residual(&left, &right), tol, &left, &right);
        let l = c.compose(&c.identity(c.dst(&f)), &f)?;
        pr.close("id ⊙ f = f", c.map_residual(&l, &f), tol, &l, &f);
        let r = c.compose(&f, &c.identity(c.src(&f)))?;
        pr.close("f ⊙ id = f", c.map_residual(&r, &f), tol, &r, &f);
        Ok(())
    })();
    pr.finish(body, || inputs!("f" => f, "g" => g, "h" => h))
}

/// `□` is a functor and substitution preserves truth.
pub(crate) fn subst_functor<C: Sampler>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome {
    let (f, g, q) = setup!({
        let x = c.sample_object(rng, b)?;
        let y = c.sample_peer(rng, &x, b)?;
        let z = c.sample_peer(rng, &x, b)?;
        let f = c.sample_map(rng, &x, &y, b);
        let g = c.sample_map(rng, &y, &z, b);
        let q = c.sample_pred(rng, &z, b);
        Ok((f, g, q))
    });
    let tol = c.tolerance();
    let mut pr = Probe::default();
    let body = (|| -> Result<()> {
        let z = c.dst(&g);
        let id = c.subst(&c.identity(z), &q);
        pr.close("□(id)(q) = q", c.pred_residual(&id, &q), tol, &id, &q);
        let whole = c.subst(&c.compose(&g, &f)?, &q);
        let stepwise = c.subst(&f, &c.subst(&g, &q));
        pr.close("□(g ⊙ f)(q) = □(f)(□(g)(q))", c.pred_residual(&whole, &stepwise), tol, &whole, &stepwise);
        let top = c.subst(&f, &c.top(c.dst(&f)));
        let expected = c.top(c.src(&f));
        pr.close("□(f)(1) = 1", c.pred_residual(&top, &expected), tol, &top, &expected);
        Ok(())
    })();
    pr.finish(body, || inputs!("f" => f, "g" => g, "q" => q))
}

/// Every map is a hom out of falsum and into truth.
pub(crate) fn truth_falsum<C: Sampler>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome {
    let (x, y, f, p, q) = setup!({
        let x = c.sample_object(rng, b)?;
        let y = c.sample_peer(rng, &x, b)?;
        let f = c.sample_map(rng, &x, &y, b);
        let p = c.sample_pred(rng, &x, b);
        let q = c.sample_pred(rng, &y, b);
        Ok((x, y, f, p, q))
    });
    let mut pr = Probe::default();
    let body = (|| -> Result<()> {
        let from_falsum = hom_check(c, &f, &falsum(c, &x), &pred_obj::<C>(&y, &q))?;
        pr.holds("f : 0X → (Y, q)", from_falsum, &from_falsum, &true);
        let into_truth = hom_check(c, &f, &pred_obj::<C>(&x, &p), &truth(c, &y))?;
        pr.holds("f : (X, p) → 1Y", into_truth, &into_truth, &true);
        Ok(())
    })();
    pr.finish(body, || inputs!("f" => f, "p" => p, "q" => q))
}

/// Sampled check of the quotient universal property.
pub(crate) fn quotient_adjunction<C: Sampler>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome {
    let (x, p, y, f) = setup!({
        let x = c.sample_object(rng, b)?;
        let p = c.sample_pred(rng, &x, b);
        let y = c.sample_peer(rng, &x, b)?;
        let f = c.sample_quotient_hom(rng, &x, &p, &y, b);
        Ok((x, p, y, f))
    });
    let tol = c.tolerance();
    let mut pr = Probe::default();
    let mut g_other = None;
    let body = (|| -> Result<()> {
        let is_hom = hom_check(c, &f, &pred_obj::<C>(&x, &p), &falsum(c, &y))?;
        pr.holds("sampled f : (X, p) → 0Y", is_hom, &is_hom, &true);
        let q = c.quotient(&x, &p)?;
        let g = c.quotient_transpose(&x, &p, &f)?;
        let gx = c.compose(&g, &q.unit)?;
        pr.close("g ⊙ ξ_p = f", c.map_residual(&gx, &f), tol, &gx, &f);
        let back = c.quotient_untranspose(&x, &p, &g)?;
        pr.close("untranspose(transpose(f)) = f", c.map_residual(&back, &f), tol, &back, &f);
        let g2 = c.sample_map(rng, &q.object, &y, b);
        let f2 = c.quotient_untranspose(&x, &p, &g2)?;
        let g2_back = c.quotient_transpose(&x, &p, &f2)?;
        pr.close("transpose(untranspose(g)) = g", c.map_residual(&g2_back, &g2), tol, &g2_back, &g2);
        g_other = Some(g2);
        if let Some(g3) = c.perturb_map(rng, &g, b) {
            let f3 = c.compose(&g3, &q.unit)?;
            let d = c.map_residual(&f3, &f);
            pr.holds("a different g' has g' ⊙ ξ_p ≠ f", d > tol, &f3, &f);
        }
        Ok(())
    })();
    pr.finish(body, || inputs!("x" => x, "p" => p, "y" => y, "f" => f, "g'" => g_other))
}

/// Sampled check of the comprehension universal property.
pub(crate) fn comprehension_adjunction<C: Sampler>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome {
    let (x, p, z, f) = setup!({
        let x = c.sample_object(rng, b)?;
        let p = c.sample_pred(rng, &x, b);
        let z = c.sample_peer(rng, &x, b)?;
        let f = c.sample_comprehension_hom(rng, &z, &x, &p, b);
        Ok((x, p, z, f))
    });
    let tol = c.tolerance();
    let mut pr = Probe::default();
    let mut g_other = None;
    let body = (|| -> Result<()> {
        let is_hom = hom_check(c, &f, &truth(c, &z), &pred_obj::<C>(&x, &p))?;
        pr.holds("sampled f : 1Z → (X, p)", is_hom, &is_hom, &true);
        let cm = c.comprehension(&x, &p)?;
        let g = c.comprehension_transpose(&x, &p, &f)?;
        let pg = c.compose(&cm.counit, &g)?;
        pr.close("π_p ⊙ g = f", c.map_residual(&pg, &f), tol, &pg, &f);
        let back = c.comprehension_untranspose(&x, &p, &g)?;
        pr.close("untranspose(transpose(f)) = f", c.map_residual(&back, &f), tol, &back, &f);
        let g2 = c.sample_map(rng, &z, &cm.object, b);
        let f2 = c.comprehension_untranspose(&x, &p, &g2)?;
        let g2_back = c.comprehension_transpose(&x, &p, &f2)?;
        pr.close("transpose(untranspose(g)) = g", c.map_residual(&g2_back, &g2), tol, &g2_back, &g2);
        g_other = Some(g2);
        if let Some(g3) = c.perturb_map(rng, &g, b) {
            let f3 = c.compose(&cm.counit, &g3)?;
            let d = c.map_residual(&f3, &f);
            pr.holds("a different g' has π_p ⊙ g' ≠ f", d > tol, &f3, &f);
        }
        Ok(())
    })();
    pr.finish(body, || inputs!("x" => x, "p" => p, "z" => z, "f" => f, "g'" => g_other))
}

fn counted<C: Chain>(maps: &[C::Map], mut through: impl FnMut(&C::Map) -> Result<C::Map>) -> Result<HashMap<C::Map, usize>>
where
    C::Map: Eq + Hash,
{
    let mut counts = HashMap::new();
    for g in maps {
        *counts.entry(through(g)?).or_insert(0) += 1;
    }
    Ok(counts)
}

fn listed<C: Exhaustive>(c: &C, x: &C::Object, y: &C::Object) -> Result<Vec<C::Map>>
where
    C::Map: Eq + Hash,
{
    c.all_maps(x, y)
        .ok_or_else(|| Error::Generation(format!("{}: hom-set exceeds the enumeration limit", c.name())))
}

/// Exhaustive quotient check for one `(X, p, Y)`: every hom `(X, p) → 0Y`
/// factors through `ξ_p` exactly once, and the transposes are mutually inverse.
pub(crate) fn quotient_exhaustive<C: Exhaustive>(c: &C, x: &C::Object, p: &C::Pred, y: &C::Object) -> Vec<Outcome>
where
    C::Map: Eq + Hash,
{
    let run = || -> Result<Vec<Outcome>> {
        let q = c.quotient(x, p)?;
        let homs = listed(c, x, y)?;
        let cands = listed(c, &q.object, y)?;
        let counts = counted::<C>(&cands, |g| c.compose(g, &q.unit))?;
        let (src, dst) = (pred_obj::<C>(x, p), falsum(c, y));
        let mut out = Vec::new();
        for f in homs {
            if !hom_check(c, &f, &src, &dst)? {
                continue;
            }
            let mut pr = Probe::default();
            let body = (|| -> Result<()> {
                let g = c.quotient_transpose(x, p, &f)?;
                let gx = c.compose(&g, &q.unit)?;
                pr.close("g ⊙ ξ_p = f", c.map_residual(&gx, &f), c.tolerance(), &gx, &f);
                let n = counts.get(&f).copied().unwrap_or(0);
                pr.holds("exactly one g with g ⊙ ξ_p = f", n == 1, &n, &1);
                let back = c.quotient_untranspose(x, p, &g)?;
                pr.close("untranspose(transpose(f)) = f", c.map_residual(&back, &f), c.tolerance(), &back, &f);
                Ok(())
            })();
            out.push(pr.finish(body, || inputs!("x" => x, "p" => p, "y" => y, "f" => f)));
        }
        for g in cands {
            let mut pr = Probe::default();
            let body = (|| -> Result<()> {
                let f = c.quotient_untranspose(x, p, &g)?;
                let is_hom = hom_check(c, &f, &src, &dst)?;
                pr.holds("untranspose(g) : (X, p) → 0Y", is_hom, &is_hom, &true);
                let back = c.quotient_transpose(x, p, &f)?;
                pr.close("transpose(untranspose(g)) = g", c.map_residual(&back, &g), c.tolerance(), &back, &g);
                Ok(())
            })();
            out.push(pr.finish(body, || inputs!("x" => x, "p" => p, "y" => y, "g" => g)));
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![job_error(&e, inputs!("x" => x, "p" => p, "y" => y))])
}

/// Exhaustive comprehension check for one `(X, p, Z)`.
pub(crate) fn comprehension_exhaustive<C: Exhaustive>(
    c: &C,
    x: &C::Object,
    p: &C::Pred,
    z: &C::Object,
) -> Vec<Outcome>
where
    C::Map: Eq + Hash,
{
    let run = || -> Result<Vec<Outcome>> {
        let cm = c.comprehension(x, p)?;
        let homs = listed(c, z, x)?;
        let cands = listed(c, z, &cm.object)?;
        let counts = counted::<C>(&cands, |g| c.compose(&cm.counit, g))?;
        let (src, dst) = (truth(c, z), pred_obj::<C>(x, p));
        let mut out = Vec::new();
        for f in homs {
            if !hom_check(c, &f, &src, &dst)? {
                continue;
            }
            let mut pr = Probe::default();
            let body = (|| -> Result<()> {
                let g = c.comprehension_transpose(x, p, &f)?;
                let pg = c.compose(&cm.counit, &g)?;
                pr.close("π_p ⊙ g = f", c.map_residual(&pg, &f), c.tolerance(), &pg, &f);
                let n = counts.get(&f).copied().unwrap_or(0);
                pr.holds("exactly one g with π_p ⊙ g = f", n == 1, &n, &1);
                let back = c.comprehension_untranspose(x, p, &g)?;
                pr.close("untranspose(transpose(f)) = f", c.map_residual(&back, &f), c.tolerance(), &back, &f);
                Ok(())
            })();
            out.push(pr.finish(body, || inputs!("x" => x, "p" => p, "z" => z, "f" => f)));
        }
        for g in cands {
            let mut pr = Probe::default();
            let body = (|| -> Result<()> {
                let f = c.comprehension_untranspose(x, p, &g)?;
                let is_hom = hom_check(c, &f, &src, &dst)?;
                pr.holds("untranspose(g) : 1Z → (X, p)", is_hom, &is_hom, &true);
                let back = c.comprehension_transpose(x, p, &f)?;
                pr.close("transpose(untranspose(g)) = g", c.map_residual(&back, &g), c.tolerance(), &back, &g);
                Ok(())
            })();
            out.push(pr.finish(body, || inputs!("x" => x, "p" => p, "z" => z, "g" => g)));
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![job_error(&e, inputs!("x" => x, "p" => p, "z" => z))])
}

fn job_error(e: &Error, inputs: Value) -> Outcome {
    let mut o = Outcome::error(e);
    if let Some(f) = o.failure.as_mut() {
        f.inputs = inputs;
    }
    o
}

/// Every `(X, p, Y)` triple an exhaustive adjunction law runs over.
pub(crate) fn adjunction_jobs<C: Exhaustive>(c: &C, b: &Bounds) -> Vec<(C::Object, C::Pred, C::Object)>
where
    C::Map: Eq + Hash,
{
    let codomains = c.test_codomains(b);
    let mut jobs = Vec::new();
    for x in c.objects(b) {
        for p in c.preds(&x) {
            for y in &codomains {
                jobs.push((x.clone(), p.clone(), y.clone()));
            }
        }
    }
    jobs
}

/// `X/p⊥` and `{X|⌈p⌉}` are the same object.
pub(crate) fn coincidence<C: Sampler>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome {
    let (x, p) = setup!({
        let x = c.sample_object(rng, b)?;
        let p = c.sample_pred(rng, &x, b);
        Ok((x, p))
    });
    let mut pr = Probe::default();
    let body = (|| -> Result<()> {
        let q = c.quotient(&x, &ortho(c, &x, &p)?)?;
        let cm = c.comprehension(&x, &c.ceil(&x, &p))?;
        let same = c.same_object(&q.object, &cm.object);
        pr.holds("X/p⊥ = {X|⌈p⌉}", same, &q.object, &cm.object);
        Ok(())
    })();
    pr.finish(body, || inputs!("x" => x, "p" => p))
}

/// `⌊p⊥⌋ = ⌈p⌉⊥`, and `p` is sharp exactly when `asrt_p` is idempotent and
/// exactly when `ξ_{p⊥} ⊙ π_{⌈p⌉}` is the identity.
pub(crate) fn sharpness<C: Sampler>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome {
    let (x, p) = setup!({
        let x = c.sample_object(rng, b)?;
        let p = c.sample_pred(rng, &x, b);
        // Half of the cases are sharpened so both sides of the equivalences come up.
        let p = if rng.gen_bool(0.5) { c.ceil(&x, &p) } else { p };
        Ok((x, p))
    });
    let tol = c.tolerance();
    let mut pr = Probe::default();
    let body = (|| -> Result<()> {
        let lhs = c.floor(&x, &ortho(c, &x, &p)?);
        let rhs = ortho(c, &x, &c.ceil(&x, &p))?;
        pr.close("⌊p⊥⌋ = ⌈p⌉⊥", c.pred_residual(&lhs, &rhs), tol, &lhs, &rhs);
        let sharp = c.is_sharp(&x, &p);
        let a = derive_assert(c, &x, &p)?;
        let idempotent = c.maps_equal(&c.compose(&a, &a)?, &a);
        pr.holds("asrt_p idempotent ⇔ p sharp", idempotent == sharp, &idempotent, &sharp);
        let lc = left_composite(c, &x, &p)?;
        let is_id = c.maps_equal(&lc, &c.identity(c.src(&lc)));
        pr.holds("ξ_{p⊥} ⊙ π_{⌈p⌉} = id ⇔ p sharp", is_id == sharp, &is_id, &sharp);
        Ok(())
    })();
    pr.finish(body, || inputs!("x" => x, "p" => p))
}

/// `π_{⌈p⌉} ⊙ ξ_{p⊥}` agrees with the instance's closed form of `asrt_p`.
pub(crate) fn factorization<C: Sampler + AssertFormula>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome {
    let (x, p) = setup!({
        let x = c.sample_object(rng, b)?;
        let p = c.sample_pred(rng, &x, b);
        Ok((x, p))
    });
    let mut pr = Probe::default();
    let body = (|| -> Result<()> {
        let derived = derive_assert(c, &x, &p)?;
        let closed = c.closed_assert(&x, &p)?;
        pr.close("π_{⌈p⌉} ⊙ ξ_{p⊥} = asrt_p", c.map_residual(&derived, &closed), c.tolerance(), &derived, &closed);
        Ok(())
    })();
    pr.finish(body, || inputs!("x" => x, "p" => p))
}

/// The instrument built from the asserts matches its closed form, is total,
/// and has a side effect exactly when the instance predicts one.
pub(crate) fn instrument<C: Sampler + InstrumentFormula>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome {
    let (x, p) = setup!({
        let x = c.sample_object(rng, b)?;
        let p = c.sample_pred(rng, &x, b);
        Ok((x, p))
    });
    let tol = c.tolerance();
    let mut pr = Probe::default();
    let body = (|| -> Result<()> {
        let derived = derive_instrument(c, &x, &p)?;
        let closed = c.closed_instrument(&x, &p)?;
        pr.close("[asrt_p, asrt_{p⊥}] = instr_p", c.instrument_residual(&derived, &closed), tol, &derived, &closed);
        let t = c.totality_residual(&x, &derived);
        pr.close("instr_p is total", t, tol, &t, &0.0);
        let se = side_effect(c, &x, &p)?;
        if let Some(expected) = c.expects_side_effect_free(&x, &p) {
            pr.holds("∇ ∘ instr_p = id as predicted", se.free == expected, &se.free, &expected);
        }
        Ok(())
    })();
    pr.finish(body, || inputs!("x" => x, "p" => p))
}

/// Every structural map of a vN instance is completely positive and subunital.
pub(crate) fn complete_positivity<C>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome
where
    C: Sampler<Object = VnObject, Pred = AlgElement, Map = CpsuMap> + Measurement<Instrument = VnInstrument>,
{
    let (x, p, y, fq, fc) = setup!({
        let x = c.sample_object(rng, b)?;
        let p = c.sample_pred(rng, &x, b);
        let y = c.sample_peer(rng, &x, b)?;
        let fq = c.sample_quotient_hom(rng, &x, &p, &y, b);
        let fc = c.sample_comprehension_hom(rng, &y, &x, &p, b);
        Ok((x, p, y, fq, fc))
    });
    let tol = c.tolerance();
    let mut pr = Probe::default();
    let body = (|| -> Result<()> {
        let maps = [
            ("ξ_p", c.quotient(&x, &p)?.unit),
            ("π_p", c.comprehension(&x, &p)?.counit),
            ("asrt_p", derive_assert(c, &x, &p)?),
            ("instr_p", derive_instrument(c, &x, &p)?.map),
            ("quotient transpose", c.quotient_transpose(&x, &p, &fq)?),
            ("comprehension transpose", c.comprehension_transpose(&x, &p, &fc)?),
        ];
        for (name, m) in &maps {
            let r = cp_check(m, tol)?;
            pr.close(&format!("{name} is completely positive"), (-r.min_eigenvalue).max(0.0), tol, &r, &0.0);
            let sub = m.is_subunital(tol)?;
            pr.holds(&format!("{name} is subunital"), sub, &sub, &true);
        }
        Ok(())
    })();
    pr.finish(body, || inputs!("x" => x, "p" => p, "y" => y))
}

/// `‖f(c*d)‖² ≤ ‖f(c*c)‖·‖f(d*d)‖` for sampled maps and effects.
pub(crate) fn cauchy_schwarz<C>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome
where
    C: Sampler<Object = VnObject, Pred = AlgElement, Map = CpsuMap>,
{
    let (f, e1, e2) = setup!({
        let x = c.sample_object(rng, b)?;
        let y = c.sample_peer(rng, &x, b)?;
        let f = c.sample_map(rng, &x, &y, b);
        Ok((f, c.sample_pred(rng, &y, b), c.sample_pred(rng, &y, b)))
    });
    let mut pr = Probe::default();
    let r = cauchy_schwarz_residual(&f, &e1, &e2);
    pr.close("‖f(c*d)‖² ≤ ‖f(c*c)‖·‖f(d*d)‖", r, c.tolerance(), &r, &0.0);
    pr.finish(Ok(()), || inputs!("f" => f, "c" => e1, "d" => e2))
}

/// `R ≅ eR × e⊥R` for one idempotent.
pub(crate) fn ring_decomposition(x: &RingObj, e: Elem) -> Outcome {
    let mut pr = Probe::default();
    let body = (|| -> Result<()> {
        let d = ring_decompose(x, e)?;
        let ok = d.verify();
        pr.holds("x ↦ (ex, e⊥x) is a ring isomorphism", ok.is_ok(), &ok.as_ref().err().map(|e| e.to_string()), &None::<String>);
        for (side, obj) in [("eR", &d.left), ("e⊥R", &d.right)] {
            let t = verify_iso_type(obj);
            pr.holds(&format!("{side} has its stated isomorphism type"), t.is_ok(), &t.as_ref().err().map(|e| e.to_string()), &None::<String>);
        }
        let n = d.left.carrier().len() * d.right.carrier().len();
        pr.close("|eR|·|e⊥R| = |R|", flag(n == x.carrier().len()), 0.0, &n, &x.carrier().len());
        Ok(())
    })();
    pr.finish(body, || inputs!("x" => x, "e" => e))
}

/// Every ring object with at most `max` elements, paired with each of its idempotents.
pub(crate) fn ring_decomposition_jobs(max: u32) -> Result<Vec<(RingObj, Elem)>> {
    let mut jobs = Vec::new();
    for m in crate::ring::moduli_up_to(max) {
        let x = RingObj::whole(&crate::ring::FiniteRing::new(&m)?);
        for e in crate::ring::ring_idempotents(&x) {
            jobs.push((x.clone(), e));
        }
    }
    Ok(jobs)
}

/// `v = v₁ + v₂` with `v₁ ∈ P`, `v₂ ∈ P⊥` orthogonal, and both projectors
/// self-adjoint idempotents whose ranks add up.
pub(crate) fn hilb_decomposition<C>(c: &C, rng: &mut CaseRng, b: &Bounds) -> Outcome
where
    C: Sampler<Object = HilbSpace, Pred = ClosedSubspace>,
{
    let (x, p) = setup!({
        let x = c.sample_object(rng, b)?;
        let p = c.sample_pred(rng, &x, b);
        Ok((x, p))
    });
    let n = x.dim();
    let v = DVector::from_fn(n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let tol = c.tolerance();
    let mut pr = Probe::default();
    let d = hilb_orthocomplement(&p);
    let (v1, v2) = d.split(&v);
    let sum = (&v1 + &v2 - &v).camax();
    pr.close("v₁ + v₂ = v", sum, tol, &sum, &0.0);
    let (pp, pc) = (d.subspace.projector(), d.complement.projector());
    let in_p = (&pp * &v1 - &v1).camax();
    pr.close("v₁ ∈ P", in_p, tol, &in_p, &0.0);
    let in_pc = (&pc * &v2 - &v2).camax();
    pr.close("v₂ ∈ P⊥", in_pc, tol, &in_pc, &0.0);
    let inner = v1.dotc(&v2).norm();
    pr.close("⟨v₁, v₂⟩ = 0", inner, tol, &inner, &0.0);
    for (name, m) in [("P", &pp), ("P⊥", &pc)] {
        let idem = (m * m - m).camax();
        pr.close(&format!("projector onto {name} is idempotent"), idem, tol, &idem, &0.0);
        let sa = (m.adjoint() - m).camax();
        pr.close(&format!("projector onto {name} is self-adjoint"), sa, tol, &sa, &0.0);
    }
    let dims = d.subspace.dim() + d.complement.dim();
    pr.holds("dim P + dim P⊥ = dim X", dims == n, &dims, &n);
    pr.finish(Ok(()), || inputs!("x" => x, "p" => p))
}
