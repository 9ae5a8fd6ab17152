use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{Chain, Comprehension, Quotient};
use crate::error::{Error, Result};
use crate::harness::{Bounds, CaseRng, Sampler};
use crate::tolerance::Tolerances;
use crate::vn::{c, cmatrix_serde, max_abs_diff, range_isometry, support_projection, CMatrix};

/// A Hilbert space realized inside `ℂ^ambient` by an isometry; its own
/// coordinates are those of the isometry's columns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HilbSpace {
    ambient: usize,
    #[serde(with = "cmatrix_serde")]
    basis: CMatrix,
}

impl HilbSpace {
    /// `ℂ^n` itself.
    pub fn whole(n: usize) -> Self {
        HilbSpace {
            ambient: n,
            basis: CMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Largest basis difference, or infinity when the shapes differ.
    pub fn distance(&self, other: &HilbSpace) -> f64 {
        if self.ambient != other.ambient {
            return f64::INFINITY;
        }
        max_abs_diff(&self.basis, &other.basis)
    }

    /// The subspace spanned by a closed subspace of this one, in ambient coordinates.
    fn restrict(&self, s: &ClosedSubspace) -> HilbSpace {
        HilbSpace {
            ambient: self.ambient,
            basis: &self.basis * &s.basis,
        }
    }
}

/// A (necessarily closed) subspace, kept as the canonical orthonormal basis
/// of its projector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosedSubspace {
    #[serde(with = "cmatrix_serde")]
    basis: CMatrix,
}

impl ClosedSubspace {
    /// The span of the columns of `vectors`.
    pub fn span(vectors: &CMatrix) -> Result<Self> {
        let gram = vectors * vectors.adjoint();
        ClosedSubspace::from_projector(&support_projection(&gram)?)
    }

    pub fn from_projector(proj: &CMatrix) -> Result<Self> {
        let defect = max_abs_diff(&(proj * proj), proj).max(max_abs_diff(&proj.adjoint(), proj));
        if defect > 1e-9 {
            return Err(Error::invalid("projector", format!("not a Hermitian idempotent (defect {defect:e})")));
        }
        Ok(ClosedSubspace {
            basis: range_isometry(proj),
        })
    }

    pub fn whole(n: usize) -> Self {
        ClosedSubspace {
            basis: CMatrix::identity(n, n),
        }
    }

    pub fn zero(n: usize) -> Self {
        ClosedSubspace {
            basis: CMatrix::zeros(n, 0),
        }
    }

    /// Orthonormal columns.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn space_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    pub fn complement(&self) -> ClosedSubspace {
        let n = self.space_dim();
        ClosedSubspace {
            basis: range_isometry(&(CMatrix::identity(n, n) - self.projector())),
        }
    }
}

/// `v = v₁ + v₂` with `v₁ ∈ P` and `v₂ ∈ P⊥`.
#[derive(Debug, Clone)]
pub struct HilbDecomposition {
    pub subspace: ClosedSubspace,
    pub complement: ClosedSubspace,
}

impl HilbDecomposition {
    pub fn split(&self, v: &DVector<Complex64>) -> (DVector<Complex64>, DVector<Complex64>) {
        (self.subspace.projector() * v, self.complement.projector() * v)
    }
}

pub fn hilb_orthocomplement(p: &ClosedSubspace) -> HilbDecomposition {
    HilbDecomposition {
        subspace: p.clone(),
        complement: p.complement(),
    }
}

/// A bounded linear map, as a `dst.dim × src.dim` matrix in the spaces' own coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HilbMap {
    src: HilbSpace,
    dst: HilbSpace,
    #[serde(with = "cmatrix_serde")]
    matrix: CMatrix,
}

impl HilbMap {
    pub fn new(src: &HilbSpace, dst: &HilbSpace, matrix: CMatrix) -> Result<Self> {
        if matrix.shape() != (dst.dim(), src.dim()) {
            return Err(Error::invalid("linear map", format!("shape {:?} does not fit", matrix.shape())));
        }
        Ok(HilbMap {
            src: src.clone(),
            dst: dst.clone(),
            matrix,
        })
    }

    pub fn identity(x: &HilbSpace) -> Self {
        HilbMap {
            src: x.clone(),
            dst: x.clone(),
            matrix: CMatrix::identity(x.dim(), x.dim()),
        }
    }

    pub fn src(&self) -> &HilbSpace {
        &self.src
    }

    pub fn dst(&self) -> &HilbSpace {
        &self.dst
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// `f⁻¹(Q) = ker((1 − P_Q)·f)`.
pub fn hilb_subst(f: &HilbMap, q: &ClosedSubspace) -> ClosedSubspace {
    let a = q.complement().basis.adjoint() * &f.matrix;
    let n = f.src.dim();
    let gram = a.adjoint() * &a;
    let range = support_projection(&((&gram + gram.adjoint()) * c(0.5))).expect("Gram matrices are Hermitian");
    ClosedSubspace {
        basis: range_isometry(&(CMatrix::identity(n, n) - range)),
    }
}

/// Finite-dimensional Hilbert spaces with linear maps and closed subspaces;
/// the quotient by `P` is `P⊥`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HilbChain {
    pub tol: Tolerances,
}

impl HilbChain {
    pub fn new(tol: Tolerances) -> Self {
        HilbChain { tol }
    }

    fn check(&self, expected: &HilbSpace, actual: &HilbSpace, what: &str) -> Result<()> {
        let d = expected.distance(actual);
        if d > self.tol.hom {
            return Err(Error::Composition(format!("map {what} differs from the space (distance {d:e})")));
        }
        Ok(())
    }
}

fn check_pred(x: &HilbSpace, p: &ClosedSubspace) -> Result<()> {
    if p.space_dim() != x.dim() {
        return Err(Error::invalid("subspace", "dimension does not match the space"));
    }
    Ok(())
}

impl Chain for HilbChain {
    type Object = HilbSpace;
    type Pred = ClosedSubspace;
    type Map = HilbMap;

    fn name(&self) -> &'static str {
        "hilb"
    }

    fn tolerance(&self) -> f64 {
        self.tol.eq
    }

    fn same_object(&self, a: &HilbSpace, b: &HilbSpace) -> bool {
        a.distance(b) <= self.tol.eq
    }

    fn src<'a>(&self, f: &'a HilbMap) -> &'a HilbSpace {
        &f.src
    }

    fn dst<'a>(&self, f: &'a HilbMap) -> &'a HilbSpace {
        &f.dst
    }

    fn identity(&self, x: &HilbSpace) -> HilbMap {
        HilbMap::identity(x)
    }

    fn compose(&self, g: &HilbMap, f: &HilbMap) -> Result<HilbMap> {
        self.check(&g.src, &f.dst, "target")?;
        Ok(HilbMap {
            src: f.src.clone(),
            dst: g.dst.clone(),
            matrix: &g.matrix * &f.matrix,
        })
    }

    fn map_residual(&self, f: &HilbMap, g: &HilbMap) -> f64 {
        max_abs_diff(&f.matrix, &g.matrix)
    }

    fn subst(&self, f: &HilbMap, q: &ClosedSubspace) -> ClosedSubspace {
        hilb_subst(f, q)
    }

    fn top(&self, x: &HilbSpace) -> ClosedSubspace {
        ClosedSubspace::whole(x.dim())
    }

    fn bottom(&self, x: &HilbSpace) -> ClosedSubspace {
        ClosedSubspace::zero(x.dim())
    }

    /// `P ⊆ Q` iff `(1 − P_Q)·P_P = 0`.
    fn leq(&self, _x: &HilbSpace, p: &ClosedSubspace, q: &ClosedSubspace) -> bool {
        let leak = q.complement().basis.adjoint() * &p.basis;
        leak.iter().all(|z| z.norm() <= self.tol.eq)
    }

    fn pred_residual(&self, p: &ClosedSubspace, q: &ClosedSubspace) -> f64 {
        max_abs_diff(&p.projector(), &q.projector())
    }

    fn ortho(&self, _x: &HilbSpace, p: &ClosedSubspace) -> Option<ClosedSubspace> {
        Some(p.complement())
    }

    /// `X/P = P⊥`, with `ξ` the orthogonal projection onto it.
    fn quotient(&self, x: &HilbSpace, p: &ClosedSubspace) -> Result<Quotient<HilbSpace, HilbMap>> {
        check_pred(x, p)?;
        let w = p.complement();
        let object = x.restrict(&w);
        let unit = HilbMap {
            src: x.clone(),
            dst: object.clone(),
            matrix: w.basis.adjoint(),
        };
        Ok(Quotient { object, unit })
    }

    /// `{X|P} = P`, with `π` the inclusion.
    fn comprehension(&self, x: &HilbSpace, p: &ClosedSubspace) -> Result<Comprehension<HilbSpace, HilbMap>> {
        check_pred(x, p)?;
        let object = x.restrict(p);
        let counit = HilbMap {
            src: object.clone(),
            dst: x.clone(),
            matrix: p.basis.clone(),
        };
        Ok(Comprehension { object, counit })
    }

    /// `g = f·W` for the basis `W` of `P⊥`.
    fn quotient_transpose(&self, x: &HilbSpace, p: &ClosedSubspace, f: &HilbMap) -> Result<HilbMap> {
        self.check(x, &f.src, "source")?;
        check_pred(x, p)?;
        let leak = (&f.matrix * &p.basis).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if leak > self.tol.hom {
            return Err(Error::NotAHom(format!("f does not vanish on P (residual {leak:e})")));
        }
        let w = p.complement();
        Ok(HilbMap {
            src: x.restrict(&w),
            dst: f.dst.clone(),
            matrix: &f.matrix * &w.basis,
        })
    }

    /// `g = V*·f` for the basis `V` of `P`.
    fn comprehension_transpose(&self, x: &HilbSpace, p: &ClosedSubspace, f: &HilbMap) -> Result<HilbMap> {
        self.check(x, &f.dst, "target")?;
        check_pred(x, p)?;
        let leak = (p.complement().basis.adjoint() * &f.matrix)
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        if leak > self.tol.hom {
            return Err(Error::NotAHom(format!("image of f leaves P (residual {leak:e})")));
        }
        Ok(HilbMap {
            src: f.src.clone(),
            dst: x.restrict(p),
            matrix: p.basis.adjoint() * &f.matrix,
        })
    }
}

fn random_matrix(rng: &mut CaseRng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

impl Sampler for HilbChain {
    fn sample_object(&self, rng: &mut CaseRng, b: &Bounds) -> Result<HilbSpace> {
        if b.max_block_dim == 0 {
            return Err(Error::Generation("Hilbert spaces need a positive dimension bound".into()));
        }
        Ok(HilbSpace::whole(rng.gen_range(1..=b.max_block_dim)))
    }

    /// The span of `r` random vectors, `r` uniform in `0..=dim`.
    fn sample_pred(&self, rng: &mut CaseRng, x: &HilbSpace, _b: &Bounds) -> ClosedSubspace {
        let r = rng.gen_range(0..=x.dim());
        ClosedSubspace::span(&random_matrix(rng, x.dim(), r)).expect("Gram projectors are valid")
    }

    fn sample_map(&self, rng: &mut CaseRng, x: &HilbSpace, y: &HilbSpace, _b: &Bounds) -> HilbMap {
        HilbMap {
            src: x.clone(),
            dst: y.clone(),
            matrix: random_matrix(rng, y.dim(), x.dim()),
        }
    }

    /// `h·P_{P⊥}`, which kills `P`.
    fn sample_quotient_hom(&self, rng: &mut CaseRng, x: &HilbSpace, p: &ClosedSubspace, y: &HilbSpace, _b: &Bounds) -> HilbMap {
        HilbMap {
            src: x.clone(),
            dst: y.clone(),
            matrix: random_matrix(rng, y.dim(), x.dim()) * p.complement().projector(),
        }
    }

    /// `P_P·h`, whose image lies in `P`.
    fn sample_comprehension_hom(
        &self,
        rng: &mut CaseRng,
        z: &HilbSpace,
        x: &HilbSpace,
        p: &ClosedSubspace,
        _b: &Bounds,
    ) -> HilbMap {
        HilbMap {
            src: z.clone(),
            dst: x.clone(),
            matrix: p.projector() * random_matrix(rng, x.dim(), z.dim()),
        }
    }

    /// `f + t·h` for random `h` and `t ∈ [0.1, 0.5]`.
    fn perturb_map(&self, rng: &mut CaseRng, f: &HilbMap, _b: &Bounds) -> Option<HilbMap> {
        if f.matrix.is_empty() {
            return None;
        }
        let t = rng.gen_range(0.1..=0.5);
        let h = random_matrix(rng, f.dst.dim(), f.src.dim());
        let g = HilbMap {
            matrix: &f.matrix + h * c(t),
            ..f.clone()
        };
        (max_abs_diff(&g.matrix, &f.matrix) > self.tol.hom).then_some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec2(a: f64, b: f64) -> DVector<Complex64> {
        DVector::from_vec(vec![c(a), c(b)])
    }

    fn col(v: &[f64]) -> CMatrix {
        CMatrix::from_fn(v.len(), 1, |i, _| c(v[i]))
    }

    fn close(a: &DVector<Complex64>, b: &DVector<Complex64>) -> bool {
        (a - b).iter().all(|z| z.norm() < 1e-12)
    }

    #[test]
    fn decomposition_along_axis() {
        let p = ClosedSubspace::span(&col(&[1.0, 0.0])).unwrap();
        let d = hilb_orthocomplement(&p);
        assert!(max_abs_diff(&d.complement.projector(), &(col(&[0.0, 1.0]) * col(&[0.0, 1.0]).adjoint())) < 1e-12);
        let (v1, v2) = d.split(&vec2(3.0, 4.0));
        assert!(close(&v1, &vec2(3.0, 0.0)));
        assert!(close(&v2, &vec2(0.0, 4.0)));
    }

    #[test]
    fn decomposition_of_whole_space() {
        let d = hilb_orthocomplement(&ClosedSubspace::whole(2));
        assert_eq!(d.complement.dim(), 0);
        let (v1, v2) = d.split(&vec2(3.0, 4.0));
        assert!(close(&v1, &vec2(3.0, 4.0)));
        assert!(close(&v2, &vec2(0.0, 0.0)));
    }

    #[test]
    fn decomposition_along_diagonal() {
        let p = ClosedSubspace::span(&col(&[1.0, 1.0])).unwrap();
        let d = hilb_orthocomplement(&p);
        let m = col(&[1.0, -1.0]);
        assert!(max_abs_diff(&d.complement.projector(), &(&m * m.adjoint() * c(0.5))) < 1e-12);
        let (v1, v2) = d.split(&vec2(1.0, 0.0));
        assert!(close(&v1, &vec2(0.5, 0.5)));
        assert!(close(&v2, &vec2(0.5, -0.5)));
        assert!(v1.dotc(&v2).norm() < 1e-12);
    }

    #[test]
    fn subst_is_preimage() {
        let x = HilbSpace::whole(2);
        // f(a, b) = (a + b, 0)
        let f = HilbMap::new(&x, &x, CMatrix::from_fn(2, 2, |i, _| c(if i == 0 { 1.0 } else { 0.0 }))).unwrap();
        let pre = hilb_subst(&f, &ClosedSubspace::zero(2));
        let expected = ClosedSubspace::span(&col(&[1.0, -1.0])).unwrap();
        assert!(HilbChain::default().pred_residual(&pre, &expected) < 1e-12);
    }

    #[test]
    fn transposes_factor() {
        let chain = HilbChain::default();
        let x = HilbSpace::whole(2);
        let p = ClosedSubspace::span(&col(&[1.0, 1.0])).unwrap();
        let f = HilbMap::new(&x, &x, CMatrix::from_fn(2, 2, |_, j| c(if j == 0 { 1.0 } else { -1.0 }))).unwrap();
        let g = chain.quotient_transpose(&x, &p, &f).unwrap();
        let q = chain.quotient(&x, &p).unwrap();
        assert!(chain.map_residual(&chain.compose(&g, &q.unit).unwrap(), &f) < 1e-12);
        assert!(matches!(chain.quotient_transpose(&x, &p, &HilbMap::identity(&x)), Err(Error::NotAHom(_))));

        let h = HilbMap::new(&x, &x, CMatrix::from_element(2, 2, c(1.0))).unwrap();
        let g = chain.comprehension_transpose(&x, &p, &h).unwrap();
        let cm = chain.comprehension(&x, &p).unwrap();
        assert!(chain.map_residual(&chain.compose(&cm.counit, &g).unwrap(), &h) < 1e-12);
    }

    #[test]
    fn quotient_of_complement_is_comprehension() {
        let chain = HilbChain::default();
        let x = HilbSpace::whole(3);
        let p = ClosedSubspace::span(&CMatrix::from_fn(3, 2, |i, j| c((i + 2 * j) as f64 - 1.0))).unwrap();
        let q = chain.quotient(&x, &p.complement()).unwrap();
        let cm = chain.comprehension(&x, &p).unwrap();
        assert!(chain.same_object(&q.object, &cm.object));
    }
}
