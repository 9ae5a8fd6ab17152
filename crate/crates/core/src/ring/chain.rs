use rand::Rng;

use super::{
    ring_comprehension, ring_quotient, ring_subst, Elem, FiniteRing, RingInstrument, RingObj, SubunitalMap,
};
use crate::chain::{Chain, Comprehension, Measurement, Quotient};
use crate::error::{Error, Result};
use crate::harness::{Bounds, CaseRng, Exhaustive, Sampler};

/// Commutative rings with subunital maps, restricted to finite products of `Z_n`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RingChain;

/// Every non-decreasing list of moduli `≥ 2` with product at most `max`.
pub fn moduli_up_to(max: u32) -> Vec<Vec<u32>> {
    fn go(min: u32, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        for n in min..=budget {
            prefix.push(n);
            out.push(prefix.clone());
            if prefix.len() < super::MAX_FACTORS {
                go(n, budget / n, prefix, out);
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(2, max, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| (m.iter().product::<u32>(), m.clone()));
    out
}

fn check_endpoint(expected: &RingObj, actual: &RingObj, what: &str) -> Result<()> {
    if expected != actual {
        return Err(Error::Composition(format!("map {what} {actual} is not {expected}")));
    }
    Ok(())
}

impl Chain for RingChain {
    type Object = RingObj;
    type Pred = Elem;
    type Map = SubunitalMap;

    fn name(&self) -> &'static str {
        "ring"
    }

    fn same_object(&self, a: &RingObj, b: &RingObj) -> bool {
        a == b
    }

    fn src<'a>(&self, f: &'a SubunitalMap) -> &'a RingObj {
        f.src()
    }

    fn dst<'a>(&self, f: &'a SubunitalMap) -> &'a RingObj {
        f.dst()
    }

    fn identity(&self, x: &RingObj) -> SubunitalMap {
        SubunitalMap::identity(x)
    }

    fn compose(&self, g: &SubunitalMap, f: &SubunitalMap) -> Result<SubunitalMap> {
        f.then(g)
    }

    fn map_residual(&self, f: &SubunitalMap, g: &SubunitalMap) -> f64 {
        if f == g {
            0.0
        } else {
            1.0
        }
    }

    fn subst(&self, f: &SubunitalMap, e: &Elem) -> Elem {
        ring_subst(f, *e)
    }

    fn top(&self, x: &RingObj) -> Elem {
        x.unit()
    }

    fn bottom(&self, x: &RingObj) -> Elem {
        x.ring().zero()
    }

    /// `e ≤ d` iff `ed = e`.
    fn leq(&self, x: &RingObj, e: &Elem, d: &Elem) -> bool {
        x.ring().mul(*e, *d) == *e
    }

    fn pred_residual(&self, e: &Elem, d: &Elem) -> f64 {
        if e == d {
            0.0
        } else {
            1.0
        }
    }

    fn ortho(&self, x: &RingObj, e: &Elem) -> Option<Elem> {
        Some(x.ortho(*e))
    }

    fn quotient(&self, x: &RingObj, e: &Elem) -> Result<Quotient<RingObj, SubunitalMap>> {
        ring_quotient(x, *e)
    }

    fn comprehension(&self, x: &RingObj, e: &Elem) -> Result<Comprehension<RingObj, SubunitalMap>> {
        ring_comprehension(x, *e)
    }

    /// `g(y) = f(y)`, now valued in `e⊥R`.
    fn quotient_transpose(&self, x: &RingObj, e: &Elem, f: &SubunitalMap) -> Result<SubunitalMap> {
        check_endpoint(x, f.src(), "source")?;
        let r = x.ring();
        let f1 = f.apply(f.dst().unit());
        if r.mul(*e, f1) != r.zero() {
            return Err(Error::NotAHom(format!("f(1) = {f1} is not below {}", x.ortho(*e))));
        }
        let q = RingObj::corner(r, x.ortho(*e))?;
        Ok(f.retarget(&q, f.dst()))
    }

    /// `f(y) = g(y)`, read back in `R`.
    fn quotient_untranspose(&self, x: &RingObj, e: &Elem, g: &SubunitalMap) -> Result<SubunitalMap> {
        check_endpoint(&RingObj::corner(x.ring(), x.ortho(*e))?, g.src(), "source")?;
        Ok(g.retarget(x, g.dst()))
    }

    /// `g` is `f` restricted to `eR`.
    fn comprehension_transpose(&self, x: &RingObj, e: &Elem, f: &SubunitalMap) -> Result<SubunitalMap> {
        check_endpoint(x, f.dst(), "target")?;
        let (fe, f1) = (f.apply(*e), f.apply(x.unit()));
        if fe != f1 {
            return Err(Error::NotAHom(format!("f(e) = {fe} differs from f(1) = {f1}")));
        }
        let c = RingObj::corner(x.ring(), *e)?;
        Ok(f.retarget(f.src(), &c))
    }

    /// `f(x) = g(ex)`.
    fn comprehension_untranspose(&self, x: &RingObj, e: &Elem, g: &SubunitalMap) -> Result<SubunitalMap> {
        check_endpoint(&RingObj::corner(x.ring(), *e)?, g.dst(), "target")?;
        let r = x.ring();
        Ok(SubunitalMap::from_fn_unchecked(g.src(), x, |a| g.apply(r.mul(*e, a))))
    }
}

impl Measurement for RingChain {
    type Instrument = RingInstrument;

    fn pair_asserts(&self, x: &RingObj, on: &SubunitalMap, off: &SubunitalMap) -> Result<RingInstrument> {
        let r = x.ring();
        let c = x.carrier();
        let table = c
            .iter()
            .flat_map(|&a| c.iter().map(move |&b| r.add(on.apply(a), off.apply(b))))
            .collect();
        Ok(RingInstrument {
            object: x.clone(),
            pred: on.apply(x.unit()),
            table,
        })
    }

    fn codiagonal(&self, instr: &RingInstrument) -> SubunitalMap {
        SubunitalMap::from_fn_unchecked(&instr.object, &instr.object, |a| instr.apply(a, a))
    }

    fn instrument_residual(&self, a: &RingInstrument, b: &RingInstrument) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }
}

fn pick<T: Clone>(rng: &mut CaseRng, xs: &[T]) -> T {
    xs[rng.gen_range(0..xs.len())].clone()
}

fn all_maps(x: &RingObj, y: &RingObj) -> Vec<SubunitalMap> {
    SubunitalMap::enumerate(x, y).expect("sampled rings stay within the enumeration limit")
}

impl Sampler for RingChain {
    /// A random ring of bounded order, cut down to a random corner half of the time.
    fn sample_object(&self, rng: &mut CaseRng, b: &Bounds) -> Result<RingObj> {
        let all = moduli_up_to(b.max_ring as u32);
        if all.is_empty() {
            return Err(Error::Generation(format!("no ring of order ≤ {}", b.max_ring)));
        }
        let ring = FiniteRing::new(&pick(rng, &all))?;
        let whole = RingObj::whole(&ring);
        if rng.gen_bool(0.5) {
            Ok(whole)
        } else {
            RingObj::corner(&ring, pick(rng, &super::ring_idempotents(&whole)))
        }
    }

    fn sample_pred(&self, rng: &mut CaseRng, x: &RingObj, _b: &Bounds) -> Elem {
        pick(rng, &super::ring_idempotents(x))
    }

    fn sample_map(&self, rng: &mut CaseRng, x: &RingObj, y: &RingObj, _b: &Bounds) -> SubunitalMap {
        pick(rng, &all_maps(x, y))
    }

    /// Drawn from the maps with `f(1) ≤ e⊥`; the zero map is always one.
    fn sample_quotient_hom(&self, rng: &mut CaseRng, x: &RingObj, e: &Elem, y: &RingObj, _b: &Bounds) -> SubunitalMap {
        let r = x.ring();
        let homs: Vec<SubunitalMap> = all_maps(x, y)
            .into_iter()
            .filter(|f| r.mul(*e, f.apply(y.unit())) == r.zero())
            .collect();
        pick(rng, &homs)
    }

    /// Drawn from the maps with `f(e) = f(1)`; the zero map is always one.
    fn sample_comprehension_hom(
        &self,
        rng: &mut CaseRng,
        z: &RingObj,
        x: &RingObj,
        e: &Elem,
        _b: &Bounds,
    ) -> SubunitalMap {
        let homs: Vec<SubunitalMap> = all_maps(z, x)
            .into_iter()
            .filter(|f| f.apply(*e) == f.apply(x.unit()))
            .collect();
        pick(rng, &homs)
    }

    fn perturb_map(&self, rng: &mut CaseRng, f: &SubunitalMap, _b: &Bounds) -> Option<SubunitalMap> {
        let others: Vec<SubunitalMap> = all_maps(f.src(), f.dst()).into_iter().filter(|g| g != f).collect();
        (!others.is_empty()).then(|| pick(rng, &others))
    }
}

impl Exhaustive for RingChain {
    fn objects(&self, b: &Bounds) -> Vec<RingObj> {
        moduli_up_to(b.max_ring as u32)
            .iter()
            .map(|m| RingObj::whole(&FiniteRing::new(m).expect("bounded moduli are valid")))
            .collect()
    }

    fn test_codomains(&self, b: &Bounds) -> Vec<RingObj> {
        self.objects(b)
    }

    fn preds(&self, x: &RingObj) -> Vec<Elem> {
        super::ring_idempotents(x)
    }

    fn all_maps(&self, x: &RingObj, y: &RingObj) -> Option<Vec<SubunitalMap>> {
        SubunitalMap::enumerate(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{derive_assert, derive_instrument, left_composite, side_effect};
    use crate::ring::ring_instrument;

    #[test]
    fn moduli_enumeration() {
        let m = moduli_up_to(8);
        assert!(m.contains(&vec![2, 2, 2]));
        assert!(m.contains(&vec![2, 4]));
        assert!(!m.contains(&vec![4, 2]));
        assert!(m.iter().all(|v| v.iter().product::<u32>() <= 8));
        assert_eq!(moduli_up_to(12).len(), 20);
    }

    #[test]
    fn assert_is_multiplication_by_e() {
        let r = FiniteRing::cyclic(6).unwrap();
        let x = RingObj::whole(&r);
        let e = r.int(3);
        let a = derive_assert(&RingChain, &x, &e).unwrap();
        for &y in r.elements() {
            assert_eq!(a.apply(y), r.mul(e, y));
        }
        let instr = derive_instrument(&RingChain, &x, &e).unwrap();
        assert_eq!(instr, ring_instrument(&x, e).unwrap());
        assert!(side_effect(&RingChain, &x, &e).unwrap().free);
        let lc = left_composite(&RingChain, &x, &e).unwrap();
        assert_eq!(lc, SubunitalMap::identity(lc.src()));
    }

    #[test]
    fn transposes_of_z6() {
        let r = FiniteRing::cyclic(6).unwrap();
        let x = RingObj::whole(&r);
        let e = r.int(3);
        // multiplication by 4 kills e = 3
        let f = SubunitalMap::new(&x, &x, |a| r.mul(r.int(4), a)).unwrap();
        let g = RingChain.quotient_transpose(&x, &e, &f).unwrap();
        let q = RingChain.quotient(&x, &e).unwrap();
        assert_eq!(RingChain.compose(&g, &q.unit).unwrap(), f);
        assert!(RingChain.quotient_transpose(&x, &e, &SubunitalMap::identity(&x)).is_err());

        let f = SubunitalMap::new(&x, &x, |a| r.mul(r.int(3), a)).unwrap();
        let g = RingChain.comprehension_transpose(&x, &e, &f).unwrap();
        let c = RingChain.comprehension(&x, &e).unwrap();
        assert_eq!(RingChain.compose(&c.counit, &g).unwrap(), f);
    }
}
