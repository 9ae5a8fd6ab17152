//! Finite-dimensional von Neumann algebras `⊕ M_{n_i}` with completely
//! positive subunital maps and effects `0 ≤ p ≤ 1`.
//!
//! Objects are corners of an ambient algebra carried with their isometries,
//! so the quotient by `p⊥` and the comprehension of `⌈p⌉` are compared as
//! concrete data rather than up to isomorphism.

mod algebra;
mod cp;
mod eig;

pub use algebra::{AlgElement, Corner, Embedding, MatrixAlgebra, VnObject};
pub use cp::{choi_block, cp_check, cp_check_linear, CpReport, CpsuMap};
pub use eig::{
    hermitian_eig, max_eigenvalue, min_eigenvalue, op_pinv, op_pinv_sqrt, op_sqrt, operator_norm, range_isometry,
    support_projection, unit_projection, CMatrix, CVector, Eigen, HERMITIAN_TOL, SPECTRAL_TOL,
};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::chain::{Chain, Comprehension, Measurement, Quotient};
use crate::error::{Error, Result};
use crate::harness::{Bounds, CaseRng, Sampler};
use crate::tolerance::Tolerances;
pub(crate) use algebra::{c, cmatrix_serde, max_abs_diff};

/// Hermitian part `(a + a*)/2`.
fn hermitian_part(a: &AlgElement) -> AlgElement {
    a.add(&a.adjoint()).scale(0.5)
}

/// Checks that `p` is an effect of `x`: Hermitian with spectrum in `[0, 1]`, both within 1e-9.
pub fn check_effect(x: &VnObject, p: &AlgElement) -> Result<()> {
    if !p.in_algebra(&x.algebra()) {
        return Err(Error::invalid("effect", "element is not in the object's algebra"));
    }
    let defect = p.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NonHermitian(defect));
    }
    let lo = p.min_eigenvalue()?;
    if lo < -SPECTRAL_TOL {
        return Err(Error::NegativeSpectrum(lo));
    }
    let hi = p.max_eigenvalue()?;
    if hi > 1.0 + SPECTRAL_TOL {
        return Err(Error::invalid("effect", format!("largest eigenvalue {hi} exceeds 1")));
    }
    Ok(())
}

/// `(⌊p⌋, ⌈p⌉)`.
pub fn vn_sharpen(p: &AlgElement) -> Result<(AlgElement, AlgElement)> {
    Ok((p.floor()?, p.ceil()?))
}

/// `□(f)(q) = f(q⊥)⊥`.
pub fn vn_subst(f: &CpsuMap, q: &AlgElement) -> AlgElement {
    f.apply(&q.ortho()).ortho()
}

/// `{X|p}`: the corner cut out by `⌊p⌋`, with `π_p(a) = W*aW`.
pub fn vn_comprehension(x: &VnObject, p: &AlgElement) -> Result<Comprehension<VnObject, CpsuMap>> {
    check_effect(x, p)?;
    let (object, emb) = x.corner_of(&p.floor()?)?;
    let counit = CpsuMap::from_linear(&object, x, |a| emb.compress(a));
    Ok(Comprehension { object, counit })
}

/// `X/p`: the corner cut out by `⌈p⊥⌉`, with `ξ_p(c) = √p⊥·WcW*·√p⊥`.
pub fn vn_quotient(x: &VnObject, p: &AlgElement) -> Result<Quotient<VnObject, CpsuMap>> {
    check_effect(x, p)?;
    let p_perp = p.ortho();
    let root = p_perp.sqrt()?;
    let (object, emb) = x.corner_of(&p_perp.ceil()?)?;
    let unit = CpsuMap::from_linear(x, &object, |b| emb.expand(b).sandwich(&root));
    Ok(Quotient { object, unit })
}

fn check_endpoint(expected: &VnObject, actual: &VnObject, tol: f64, what: &str) -> Result<()> {
    let d = expected.distance(actual);
    if d > tol {
        return Err(Error::Composition(format!("map {what} differs from the object (distance {d:e})")));
    }
    Ok(())
}

/// For `f : X → Y` with `f(1) ≤ p⊥`, the map `g : X/p → Y` with
/// `g(b) = W*·pinv(√p⊥)·f(b)·pinv(√p⊥)·W`.
pub fn vn_transpose_quotient(x: &VnObject, p: &AlgElement, f: &CpsuMap, tol: &Tolerances) -> Result<CpsuMap> {
    check_endpoint(x, f.src(), tol.hom, "source")?;
    check_effect(x, p)?;
    let p_perp = p.ortho();
    let f1 = f.apply(&AlgElement::identity(&f.dst().algebra()));
    let slack = p_perp.sub(&f1).min_eigenvalue()?;
    if slack < -tol.hom {
        return Err(Error::NotAHom(format!("f(1) exceeds p⊥ by {:e}", -slack)));
    }
    let inv = p_perp.pinv_sqrt()?;
    let (object, emb) = x.corner_of(&p_perp.ceil()?)?;
    Ok(CpsuMap::from_linear(&object, f.dst(), |b| emb.compress(&f.apply(b).sandwich(&inv))))
}

/// For `f : Z → X` with `f(p) = f(1)`, the map `g : Z → {X|p}` with `g(c) = f(WcW*)`.
pub fn vn_transpose_comprehension(
    x: &VnObject,
    p: &AlgElement,
    f: &CpsuMap,
    tol: &Tolerances,
) -> Result<CpsuMap> {
    check_endpoint(x, f.dst(), tol.hom, "target")?;
    check_effect(x, p)?;
    let gap = f.apply(p).sub(&f.apply(&AlgElement::identity(&x.algebra()))).norm();
    if gap > tol.hom {
        return Err(Error::NotAHom(format!("‖f(p) − f(1)‖ = {gap:e}")));
    }
    let (object, emb) = x.corner_of(&p.floor()?)?;
    Ok(CpsuMap::from_linear(f.src(), &object, |c| f.apply(&emb.expand(c))))
}

/// `asrt_p(a) = √p·a·√p`.
pub fn vn_assert(x: &VnObject, p: &AlgElement) -> Result<CpsuMap> {
    check_effect(x, p)?;
    let root = p.sqrt()?;
    Ok(CpsuMap::from_linear(x, x, |a| a.sandwich(&root)))
}

/// The Lüders instrument `X → X ⊕ X`: `(a, b) ↦ √p·a·√p + √p⊥·b·√p⊥`.
#[derive(Debug, Clone, Serialize)]
pub struct VnInstrument {
    pub map: CpsuMap,
}

impl VnInstrument {
    pub fn apply(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        self.map.apply(&a.concat(b))
    }
}

pub fn vn_instrument(x: &VnObject, p: &AlgElement) -> Result<VnInstrument> {
    check_effect(x, p)?;
    let (on, off) = (p.sqrt()?, p.ortho().sqrt()?);
    let map = CpsuMap::from_linear(x, &x.doubled(), |ab| {
        let (a, b) = ab.split_half();
        a.sandwich(&on).add(&b.sandwich(&off))
    });
    Ok(VnInstrument { map })
}

/// `a * b = √a·b·√a`.
pub fn seq_product(a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
    Ok(b.sandwich(&a.sqrt()?))
}

/// `max(0, ‖f(c*d)‖² − ‖f(c*c)‖·‖f(d*d)‖)`, zero for a 2-positive subunital `f`.
pub fn cauchy_schwarz_residual(f: &CpsuMap, c: &AlgElement, d: &AlgElement) -> f64 {
    let cs = c.adjoint();
    let lhs = f.apply(&cs.mul(d)).norm().powi(2);
    let rhs = f.apply(&cs.mul(c)).norm() * f.apply(&d.adjoint().mul(d)).norm();
    (lhs - rhs).max(0.0)
}

/// The quantum chain; all comparisons go through one set of tolerances.
#[derive(Debug, Clone, Copy, Default)]
pub struct VnChain {
    pub tol: Tolerances,
}

impl VnChain {
    pub fn new(tol: Tolerances) -> Self {
        VnChain { tol }
    }
}

impl Chain for VnChain {
    type Object = VnObject;
    type Pred = AlgElement;
    type Map = CpsuMap;

    fn name(&self) -> &'static str {
        "vn"
    }

    fn tolerance(&self) -> f64 {
        self.tol.eq
    }

    fn same_object(&self, a: &VnObject, b: &VnObject) -> bool {
        a.approx_eq(b, self.tol.eq)
    }

    fn src<'a>(&self, f: &'a CpsuMap) -> &'a VnObject {
        f.src()
    }

    fn dst<'a>(&self, f: &'a CpsuMap) -> &'a VnObject {
        f.dst()
    }

    fn identity(&self, x: &VnObject) -> CpsuMap {
        CpsuMap::identity(x)
    }

    fn compose(&self, g: &CpsuMap, f: &CpsuMap) -> Result<CpsuMap> {
        let d = f.dst().distance(g.src());
        if d > self.tol.hom {
            return Err(Error::Composition(format!(
                "target of first map differs from source of second (distance {d:e})"
            )));
        }
        Ok(f.then_unchecked(g))
    }

    fn map_residual(&self, f: &CpsuMap, g: &CpsuMap) -> f64 {
        f.residual(g)
    }

    fn subst(&self, f: &CpsuMap, q: &AlgElement) -> AlgElement {
        vn_subst(f, q)
    }

    fn top(&self, x: &VnObject) -> AlgElement {
        AlgElement::identity(&x.algebra())
    }

    fn bottom(&self, x: &VnObject) -> AlgElement {
        AlgElement::zeros(&x.algebra())
    }

    /// `q − p ≥ 0` within the equality tolerance.
    fn leq(&self, _x: &VnObject, p: &AlgElement, q: &AlgElement) -> bool {
        hermitian_part(&q.sub(p))
            .min_eigenvalue()
            .is_ok_and(|l| l >= -self.tol.eq)
    }

    fn pred_residual(&self, p: &AlgElement, q: &AlgElement) -> f64 {
        p.max_abs_diff(q)
    }

    fn ortho(&self, _x: &VnObject, p: &AlgElement) -> Option<AlgElement> {
        Some(p.ortho())
    }

    fn ceil(&self, _x: &VnObject, p: &AlgElement) -> AlgElement {
        hermitian_part(p).ceil().expect("Hermitian part is Hermitian")
    }

    fn floor(&self, _x: &VnObject, p: &AlgElement) -> AlgElement {
        hermitian_part(p).floor().expect("Hermitian part is Hermitian")
    }

    fn quotient(&self, x: &VnObject, p: &AlgElement) -> Result<Quotient<VnObject, CpsuMap>> {
        vn_quotient(x, p)
    }

    fn comprehension(&self, x: &VnObject, p: &AlgElement) -> Result<Comprehension<VnObject, CpsuMap>> {
        vn_comprehension(x, p)
    }

    fn quotient_transpose(&self, x: &VnObject, p: &AlgElement, f: &CpsuMap) -> Result<CpsuMap> {
        vn_transpose_quotient(x, p, f, &self.tol)
    }

    fn comprehension_transpose(&self, x: &VnObject, p: &AlgElement, f: &CpsuMap) -> Result<CpsuMap> {
        vn_transpose_comprehension(x, p, f, &self.tol)
    }
}

impl Measurement for VnChain {
    type Instrument = VnInstrument;

    /// Superoperator `[S_on | S_off]` on `X ⊕ X`.
    fn pair_asserts(&self, x: &VnObject, on: &CpsuMap, off: &CpsuMap) -> Result<VnInstrument> {
        for f in [on, off] {
            check_endpoint(x, f.src(), self.tol.hom, "source")?;
            check_endpoint(x, f.dst(), self.tol.hom, "target")?;
        }
        let (a, b) = (on.superop(), off.superop());
        let superop = DMatrix::from_fn(a.nrows(), a.ncols() + b.ncols(), |i, j| {
            if j < a.ncols() {
                a[(i, j)]
            } else {
                b[(i, j - a.ncols())]
            }
        });
        Ok(VnInstrument {
            map: CpsuMap::from_superop(x, &x.doubled(), superop)?,
        })
    }

    fn codiagonal(&self, instr: &VnInstrument) -> CpsuMap {
        let s = instr.map.superop();
        let half = s.ncols() / 2;
        let sum = s.columns(0, half) + s.columns(half, half);
        let x = instr.map.src();
        CpsuMap::from_superop(x, x, sum).expect("halves of an instrument match its source")
    }

    fn instrument_residual(&self, a: &VnInstrument, b: &VnInstrument) -> f64 {
        a.map.residual(&b.map)
    }
}

fn random_complex(rng: &mut CaseRng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_unitary(rng: &mut CaseRng, n: usize) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| random_complex(rng));
    let h = (&a + a.adjoint()) * c(0.5);
    hermitian_eig(&h).expect("symmetrized matrix is Hermitian").vectors
}

/// `U·diag(λ)·U*` with `λ` from `{0, 1}` when sharp, otherwise 0 or 1 with
/// probability 0.2 each and uniform on `[0.05, 0.95]` else.
fn random_effect_block(rng: &mut CaseRng, n: usize, sharp: bool) -> CMatrix {
    let u = random_unitary(rng, n);
    let values: Vec<f64> = (0..n)
        .map(|_| {
            if sharp {
                if rng.gen_bool(0.5) {
                    1.0
                } else {
                    0.0
                }
            } else {
                match rng.gen_range(0..10) {
                    0 | 1 => 0.0,
                    2 | 3 => 1.0,
                    _ => rng.gen_range(0.05..0.95),
                }
            }
        })
        .collect();
    let d = CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i]) } else { c(0.0) });
    let p = &u * d * u.adjoint();
    (&p + p.adjoint()) * c(0.5)
}

/// A random effect; sharp with probability 1/3.
pub(crate) fn random_effect(rng: &mut CaseRng, alg: &MatrixAlgebra) -> AlgElement {
    let sharp = rng.gen_bool(1.0 / 3.0);
    let blocks = alg.dims().iter().map(|&n| random_effect_block(rng, n, sharp)).collect();
    AlgElement::new(blocks).expect("blocks follow the algebra")
}

/// A random cPsU map in Kraus form `f(b)_i = Σ_j Σ_k K*·b_j·K`, each output
/// block rescaled so that `‖f(1)_i‖ = s ∈ [0.3, 1]`.
pub(crate) fn random_cpsu(rng: &mut CaseRng, x: &VnObject, y: &VnObject) -> CpsuMap {
    let (xa, ya) = (x.algebra(), y.algebra());
    let mut kraus: Vec<Vec<(usize, CMatrix)>> = Vec::with_capacity(xa.dims().len());
    for &n in xa.dims() {
        let mut ops = Vec::new();
        for (j, &m) in ya.dims().iter().enumerate() {
            if rng.gen_bool(0.2) {
                continue;
            }
            for _ in 0..rng.gen_range(1..=2) {
                ops.push((j, CMatrix::from_fn(m, n, |_, _| random_complex(rng))));
            }
        }
        let unit: CMatrix = ops
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, (_, k)| acc + k.adjoint() * k);
        let top = max_eigenvalue(&((&unit + unit.adjoint()) * c(0.5))).unwrap_or(0.0);
        if top > 1e-12 {
            let s: f64 = rng.gen_range(0.3..=1.0);
            let factor = c((s / top).sqrt());
            for (_, k) in &mut ops {
                *k *= factor;
            }
        }
        kraus.push(ops);
    }
    CpsuMap::from_linear(x, y, |b| {
        let blocks = kraus
            .iter()
            .zip(xa.dims())
            .map(|(ops, &n)| {
                ops.iter()
                    .fold(CMatrix::zeros(n, n), |acc, (j, k)| acc + k.adjoint() * b.block(*j) * k)
            })
            .collect();
        AlgElement::new(blocks).unwrap_or_else(|_| AlgElement::zeros(&xa))
    })
}

impl Sampler for VnChain {
    /// A whole algebra with `1..=max_blocks` blocks of size `1..=max_block_dim`.
    fn sample_object(&self, rng: &mut CaseRng, b: &Bounds) -> Result<VnObject> {
        if b.max_blocks == 0 || b.max_block_dim == 0 {
            return Err(Error::Generation("matrix algebras need at least one non-empty block".into()));
        }
        let k = rng.gen_range(1..=b.max_blocks);
        let dims = (0..k).map(|_| rng.gen_range(1..=b.max_block_dim)).collect();
        Ok(VnObject::whole(&MatrixAlgebra::new(dims)?))
    }

    fn sample_pred(&self, rng: &mut CaseRng, x: &VnObject, _b: &Bounds) -> AlgElement {
        random_effect(rng, &x.algebra())
    }

    fn sample_map(&self, rng: &mut CaseRng, x: &VnObject, y: &VnObject, _b: &Bounds) -> CpsuMap {
        random_cpsu(rng, x, y)
    }

    /// `f(b) = √p⊥·h(b)·√p⊥`, so `f(1) ≤ p⊥`.
    fn sample_quotient_hom(&self, rng: &mut CaseRng, x: &VnObject, p: &AlgElement, y: &VnObject, _b: &Bounds) -> CpsuMap {
        let h = random_cpsu(rng, x, y);
        let root = p.ortho().sqrt().expect("sampled predicates are effects");
        CpsuMap::from_linear(x, y, |b| h.apply(b).sandwich(&root))
    }

    /// `f(a) = h(⌊p⌋·a·⌊p⌋)`, so `f(p) = f(1)`.
    fn sample_comprehension_hom(
        &self,
        rng: &mut CaseRng,
        z: &VnObject,
        x: &VnObject,
        p: &AlgElement,
        _b: &Bounds,
    ) -> CpsuMap {
        let h = random_cpsu(rng, z, x);
        let floor = p.floor().expect("sampled predicates are effects");
        CpsuMap::from_linear(z, x, |a| h.apply(&a.sandwich(&floor)))
    }

    /// `(1 − t)·f + t·h` for a random cPsU `h` and `t ∈ [0.1, 0.5]`.
    fn perturb_map(&self, rng: &mut CaseRng, f: &CpsuMap, _b: &Bounds) -> Option<CpsuMap> {
        if f.superop().is_empty() {
            return None;
        }
        for _ in 0..8 {
            let h = random_cpsu(rng, f.src(), f.dst());
            let g = f.mix(&h, rng.gen_range(0.1..=0.5)).ok()?;
            if g.residual(f) > self.tol.hom {
                return Some(g);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{derive_assert, derive_instrument, left_composite, side_effect};
    use crate::harness::case_rng;

    fn m(rows: &[&[f64]]) -> AlgElement {
        AlgElement::single(CMatrix::from_fn(rows.len(), rows.len(), |i, j| c(rows[i][j]))).unwrap()
    }

    fn diag(vals: &[f64]) -> AlgElement {
        AlgElement::single(CMatrix::from_fn(vals.len(), vals.len(), |i, j| {
            c(if i == j { vals[i] } else { 0.0 })
        }))
        .unwrap()
    }

    fn m2() -> VnObject {
        VnObject::whole(&MatrixAlgebra::new(vec![2]).unwrap())
    }

    fn generic() -> AlgElement {
        AlgElement::single(CMatrix::from_fn(2, 2, |i, j| Complex64::new((1 + 2 * i + j) as f64, (i as f64) - (j as f64))))
            .unwrap()
    }

    #[test]
    fn sharpen_thresholds_the_spectrum() {
        let (floor, ceil) = vn_sharpen(&diag(&[1.0, 0.5, 0.0])).unwrap();
        assert!(floor.max_abs_diff(&diag(&[1.0, 0.0, 0.0])) < 1e-12);
        assert!(ceil.max_abs_diff(&diag(&[1.0, 1.0, 0.0])) < 1e-12);
        let q = m(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let (floor, ceil) = vn_sharpen(&q).unwrap();
        assert!(floor.max_abs_diff(&q) < 1e-12);
        assert!(ceil.max_abs_diff(&q) < 1e-12);
    }

    #[test]
    fn subst_examples() {
        let x = m2();
        let p = diag(&[1.0, 0.0]);
        let id = CpsuMap::identity(&x);
        assert!(vn_subst(&id, &p).max_abs_diff(&p) < 1e-15);

        let s = 0.5f64.sqrt();
        let u = m(&[&[s, -s], &[s, s]]);
        let conj = CpsuMap::from_linear(&x, &x, |a| u.mul(a).mul(&u.adjoint()));
        let expected = u.mul(&p).mul(&u.adjoint());
        assert!(vn_subst(&conj, &p).max_abs_diff(&expected) < 1e-12);

        let depolarize = CpsuMap::from_linear(&x, &x, |a| {
            AlgElement::scalar(&a.algebra(), 0.5 * a.block(0).trace().re)
        });
        assert!(vn_subst(&depolarize, &p).max_abs_diff(&diag(&[0.5, 0.5])) < 1e-12);
    }

    #[test]
    fn comprehension_compresses_onto_floor() {
        let x = m2();
        let p = diag(&[1.0, 0.5]);
        let c = vn_comprehension(&x, &p).unwrap();
        assert_eq!(c.object.algebra().dims(), &[1]);
        let a = generic();
        let pa = c.counit.apply(&a);
        assert!((pa.block(0)[(0, 0)] - a.block(0)[(0, 0)]).norm() < 1e-12);

        let whole = vn_comprehension(&x, &diag(&[1.0, 1.0])).unwrap();
        assert!(whole.object.approx_eq(&x, 1e-12));
        assert!(whole.counit.residual(&CpsuMap::identity(&x)) < 1e-12);

        let empty = vn_comprehension(&x, &diag(&[0.0, 0.0])).unwrap();
        assert!(empty.object.algebra().dims().is_empty());
    }

    #[test]
    fn quotient_embeds_scaled() {
        let x = m2();
        let p = diag(&[1.0, 0.5]);
        let q = vn_quotient(&x, &p).unwrap();
        assert_eq!(q.object.algebra().dims(), &[1]);
        let b = AlgElement::single(CMatrix::from_element(1, 1, c(0.8))).unwrap();
        assert!(q.unit.apply(&b).max_abs_diff(&diag(&[0.0, 0.4])) < 1e-12);

        let id = vn_quotient(&x, &diag(&[0.0, 0.0])).unwrap();
        assert!(id.unit.residual(&CpsuMap::identity(&x)) < 1e-12);
        let zero = vn_quotient(&x, &diag(&[1.0, 1.0])).unwrap();
        assert!(zero.object.algebra().dims().is_empty());
    }

    #[test]
    fn assert_matches_closed_form_and_kraus_oracle() {
        let x = m2();
        let p = diag(&[1.0, 0.5]);
        let a = generic();
        let r = 0.5f64.sqrt();
        let b = a.block(0);
        let expected = AlgElement::single(CMatrix::from_fn(2, 2, |i, j| {
            b[(i, j)] * c([[1.0, r], [r, 0.5]][i][j])
        }))
        .unwrap();
        let direct = vn_assert(&x, &p).unwrap();
        assert!(direct.apply(&a).max_abs_diff(&expected) < 1e-12);
        let derived = derive_assert(&VnChain::default(), &x, &p).unwrap();
        assert!(derived.residual(&direct) < 1e-9);
        // Kraus oracle: the single operator K = diag(1, 1/√2)
        let k = diag(&[1.0, r]);
        assert!(direct.apply(&a).max_abs_diff(&k.adjoint().mul(&a).mul(&k)) < 1e-12);
        assert!(cp_check(&direct, 1e-9).unwrap().completely_positive);
    }

    #[test]
    fn instrument_is_unital_and_derived_one_agrees() {
        let x = m2();
        let p = diag(&[1.0, 0.5]);
        let instr = vn_instrument(&x, &p).unwrap();
        let one = AlgElement::identity(&x.algebra());
        assert!(instr.apply(&one, &one).max_abs_diff(&one) < 1e-12);
        assert!(cp_check(&instr.map, 1e-9).unwrap().completely_positive);
        let derived = derive_instrument(&VnChain::default(), &x, &p).unwrap();
        assert!(derived.map.residual(&instr.map) < 1e-9);
    }

    #[test]
    fn rotated_unsharp_effect_has_side_effect() {
        let s = 0.5f64.sqrt();
        let u = m(&[&[s, -s], &[s, s]]);
        let p = u.mul(&diag(&[1.0, 0.5])).mul(&u.adjoint());
        let se = side_effect(&VnChain::default(), &m2(), &p).unwrap();
        assert!(!se.free);
    }

    #[test]
    fn left_composite_is_identity_for_projections() {
        let s = 0.5f64.sqrt();
        let u = m(&[&[s, -s], &[s, s]]);
        let p = u.mul(&diag(&[1.0, 0.0])).mul(&u.adjoint());
        let chain = VnChain::default();
        let lc = left_composite(&chain, &m2(), &p).unwrap();
        assert!(lc.residual(&CpsuMap::identity(lc.src())) < 1e-9);
        let unsharp = left_composite(&chain, &m2(), &diag(&[1.0, 0.5])).unwrap();
        assert!(unsharp.residual(&CpsuMap::identity(unsharp.src())) > 1e-3);
    }

    #[test]
    fn seq_product_with_scalar() {
        let b = diag(&[0.2, 0.8]);
        let half = AlgElement::scalar(&b.algebra(), 0.5);
        assert!(seq_product(&half, &b).unwrap().max_abs_diff(&b.scale(0.5)) < 1e-12);
    }

    #[test]
    fn transposes_satisfy_defining_equations() {
        let chain = VnChain::default();
        let bounds = Bounds::default();
        for i in 0..20 {
            let mut rng = case_rng(3, i);
            let x = chain.sample_object(&mut rng, &bounds).unwrap();
            let y = chain.sample_object(&mut rng, &bounds).unwrap();
            let p = chain.sample_pred(&mut rng, &x, &bounds);

            let f = chain.sample_quotient_hom(&mut rng, &x, &p, &y, &bounds);
            let g = chain.quotient_transpose(&x, &p, &f).unwrap();
            let q = chain.quotient(&x, &p).unwrap();
            let r = chain.compose(&g, &q.unit).unwrap().residual(&f);
            assert!(r < 1e-9, "case {i}: residual {r}, p = {p:?}, x = {:?}", x.algebra());
            assert!(cp_check(&g, 1e-9).unwrap().completely_positive);

            let f = chain.sample_comprehension_hom(&mut rng, &y, &x, &p, &bounds);
            let g = chain.comprehension_transpose(&x, &p, &f).unwrap();
            let c = chain.comprehension(&x, &p).unwrap();
            assert!(chain.compose(&c.counit, &g).unwrap().residual(&f) < 1e-9);
            assert!(g.is_subunital(1e-9).unwrap());
        }
    }

    #[test]
    fn transposes_reject_non_homs() {
        let x = m2();
        let p = diag(&[1.0, 0.5]);
        let id = CpsuMap::identity(&x);
        let chain = VnChain::default();
        assert!(matches!(chain.quotient_transpose(&x, &p, &id), Err(Error::NotAHom(_))));
        assert!(matches!(chain.comprehension_transpose(&x, &p, &id), Err(Error::NotAHom(_))));
    }

    #[test]
    fn sampled_maps_are_cpsu() {
        let chain = VnChain::default();
        let bounds = Bounds::default();
        for i in 0..20 {
            let mut rng = case_rng(5, i);
            let x = chain.sample_object(&mut rng, &bounds).unwrap();
            let y = chain.sample_object(&mut rng, &bounds).unwrap();
            let f = chain.sample_map(&mut rng, &x, &y, &bounds);
            assert!(cp_check(&f, 1e-9).unwrap().completely_positive);
            assert!(f.is_subunital(1e-9).unwrap());
            let p = chain.sample_pred(&mut rng, &x, &bounds);
            check_effect(&x, &p).unwrap();
        }
    }

    #[test]
    fn rejects_non_effects() {
        let x = m2();
        assert!(check_effect(&x, &diag(&[1.5, 0.0])).is_err());
        assert!(matches!(check_effect(&x, &generic()), Err(Error::NonHermitian(_))));
        assert!(check_effect(&x, &diag(&[-0.1, 0.0])).is_err());
    }
}
