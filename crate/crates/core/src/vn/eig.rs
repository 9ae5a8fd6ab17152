//! Cyclic Jacobi diagonalization of Hermitian matrices and the spectral
//! functions built on it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest tolerated `|a - a*|` entry.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues within this of 0 (or 1) count as 0 (or 1).
pub const SPECTRAL_TOL: f64 = 1e-9;
const MAX_SWEEPS: usize = 100;

/// `a = U·diag(values)·U*`, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigen {
    /// `U·diag(f(λ))·U*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut out = CMatrix::zeros(n, n);
        for (k, &l) in self.values.iter().enumerate() {
            let w = f(l);
            if w == 0.0 {
                continue;
            }
            let u = self.vectors.column(k);
            out += (u * u.adjoint()) * Complex64::new(w, 0.0);
        }
        out
    }
}

pub fn hermitian_defect(a: &CMatrix) -> f64 {
    (a - a.adjoint()).iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Makes the largest-magnitude entry of a unit vector real and positive.
/// The first of several entries tied within 1e-12 wins.
fn fix_phase(v: &mut nalgebra::DVectorViewMut<'_, Complex64>) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > best_norm + 1e-12 {
            best = i;
            best_norm = z.norm();
        }
    }
    if best_norm > 0.0 {
        let phase = v[best].conj() / v[best].norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

fn lexicographic(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if (p - q).abs() > 1e-12 {
                return q.partial_cmp(&p).unwrap_or(std::cmp::Ordering::Equal);
            }
        }
    }
    std::cmp::Ordering::Equal
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues come out descending; ties within 1e-12 are ordered by the
/// phase-fixed eigenvectors, largest first.
pub fn hermitian_eig(a: &CMatrix) -> Result<Eigen> {
    if !a.is_square() {
        return Err(Error::invalid("hermitian matrix", format!("{}×{} is not square", a.nrows(), a.ncols())));
    }
    let defect = hermitian_defect(a);
    if defect > HERMITIAN_TOL {
        return Err(Error::NonHermitian(defect));
    }
    let n = a.nrows();
    let mut m = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let mut v = CMatrix::identity(n, n);
    let scale = m.norm().max(1.0);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) < 1e-12 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let e = apq / r;
                let theta = 0.5 * (2.0 * r).atan2(m[(q, q)].re - m[(p, p)].re);
                let (s, c) = theta.sin_cos();
                let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
                // M ← M·J with J = [[c, s], [−s·ē, c·ē]]
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * akp - s * e.conj() * akq;
                    m[(k, q)] = s * akp + c * e.conj() * akq;
                }
                // M ← J*·M
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * e * mqk;
                    m[(q, k)] = s * mpk + c * e * mqk;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * e.conj() * vkq;
                    v[(k, q)] = s * vkp + c * e.conj() * vkq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&m) >= 1e-12 * scale {
        return Err(Error::invalid("eigendecomposition", format!("no convergence after {MAX_SWEEPS} sweeps")));
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k).clone_owned();
            fix_phase(&mut col.column_mut(0));
            (m[(k, k)].re, col.iter().copied().collect())
        })
        .collect();
    pairs.sort_by(|(la, va), (lb, vb)| {
        if (la - lb).abs() > 1e-12 {
            lb.partial_cmp(la).unwrap_or(std::cmp::Ordering::Equal)
        } else {
            lexicographic(va, vb)
        }
    });
    let values = pairs.iter().map(|(l, _)| *l).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| pairs[k].1[i]);
    Ok(Eigen { values, vectors })
}

pub fn min_eigenvalue(a: &CMatrix) -> Result<f64> {
    Ok(hermitian_eig(a)?.values.last().copied().unwrap_or(0.0))
}

pub fn max_eigenvalue(a: &CMatrix) -> Result<f64> {
    Ok(hermitian_eig(a)?.values.first().copied().unwrap_or(0.0))
}

/// Positive square root. Eigenvalues at most 1e-9 count as zero, matching
/// the support used by `support_projection` and `op_pinv_sqrt`.
pub fn op_sqrt(a: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(a)?;
    if let Some(&l) = eig.values.last() {
        if l < -SPECTRAL_TOL {
            return Err(Error::NegativeSpectrum(l));
        }
    }
    Ok(eig.map(|l| if l > SPECTRAL_TOL { l.sqrt() } else { 0.0 }))
}

/// Moore–Penrose inverse of a positive matrix; eigenvalues below 1e-9 map to 0.
pub fn op_pinv(a: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(a)?;
    if let Some(&l) = eig.values.last() {
        if l < -SPECTRAL_TOL {
            return Err(Error::NegativeSpectrum(l));
        }
    }
    Ok(eig.map(|l| if l < SPECTRAL_TOL { 0.0 } else { 1.0 / l }))
}

/// `pinv(√a)`, thresholded on the spectrum of `a` so its support matches `⌈a⌉`.
pub fn op_pinv_sqrt(a: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(a)?;
    if let Some(&l) = eig.values.last() {
        if l < -SPECTRAL_TOL {
            return Err(Error::NegativeSpectrum(l));
        }
    }
    Ok(eig.map(|l| if l > SPECTRAL_TOL { 1.0 / l.sqrt() } else { 0.0 }))
}

/// Projection onto the eigenvectors with eigenvalue above 1e-9.
pub fn support_projection(a: &CMatrix) -> Result<CMatrix> {
    Ok(hermitian_eig(a)?.map(|l| if l > SPECTRAL_TOL { 1.0 } else { 0.0 }))
}

/// Projection onto the eigenvectors with eigenvalue within 1e-9 of 1.
pub fn unit_projection(a: &CMatrix) -> Result<CMatrix> {
    Ok(hermitian_eig(a)?.map(|l| if (l - 1.0).abs() <= SPECTRAL_TOL { 1.0 } else { 0.0 }))
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let aa = a.adjoint() * a;
    max_eigenvalue(&aa).map(|l| l.max(0.0).sqrt()).unwrap_or(f64::NAN)
}

/// Orthonormal basis of the range of a projection, from its columns in index order.
///
/// A column is kept when its residual against the columns already kept has
/// squared norm above 1e-6; the result depends only on the projection.
pub fn range_isometry(proj: &CMatrix) -> CMatrix {
    let n = proj.nrows();
    let rank = proj.trace().re.round().max(0.0) as usize;
    let mut basis: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(rank);
    for j in 0..n {
        if basis.len() == rank {
            break;
        }
        let mut r = proj.column(j).clone_owned();
        for b in &basis {
            let coeff = b.dotc(&r);
            r -= b * coeff;
        }
        let nr = r.norm_squared();
        if nr > 1e-6 {
            basis.push(r / Complex64::new(nr.sqrt(), 0.0));
        }
    }
    CMatrix::from_fn(n, basis.len(), |i, k| basis[k][i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> CMatrix {
        CMatrix::from_fn(rows.len(), rows[0].len(), |i, j| c(rows[i][j], 0.0))
    }

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        (&g + g.adjoint()) * c(0.5, 0.0)
    }

    #[test]
    fn rank_one_projection() {
        let a = real(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let e = hermitian_eig(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12 && e.values[1].abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.vectors[(0, 0)] - c(s, 0.0)).norm() < 1e-12);
        assert!((e.vectors[(1, 0)] - c(s, 0.0)).norm() < 1e-12);
        // second vector ∝ (1, −1), phase-fixed at its first entry
        assert!((e.vectors[(0, 1)] - c(s, 0.0)).norm() < 1e-12);
        assert!((e.vectors[(1, 1)] - c(-s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn trivial_cases() {
        let e = hermitian_eig(&real(&[&[3.0, 0.0], &[0.0, 1.0]])).unwrap();
        assert_eq!(e.values, vec![3.0, 1.0]);
        assert!(max_diff(&e.vectors, &CMatrix::identity(2, 2)) < 1e-15);
        let e = hermitian_eig(&CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(e.values, vec![0.0, 0.0]);
        assert!(max_diff(&e.vectors, &CMatrix::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eig(&a), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn agrees_with_nalgebra_on_random_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for n in 1..=6 {
            for _ in 0..20 {
                let a = random_hermitian(&mut rng, n);
                let e = hermitian_eig(&a).unwrap();
                let diag = nalgebra::DVector::from_iterator(n, e.values.iter().map(|&l| c(l, 0.0)));
                let recon = &e.vectors * CMatrix::from_diagonal(&diag) * e.vectors.adjoint();
                assert!(max_diff(&recon, &a) < 1e-9);
                assert!(max_diff(&(e.vectors.adjoint() * &e.vectors), &CMatrix::identity(n, n)) < 1e-9);

                let mut oracle: Vec<f64> = nalgebra::SymmetricEigen::new(a.clone()).eigenvalues.iter().copied().collect();
                oracle.sort_by(|x, y| y.partial_cmp(x).unwrap());
                for (x, y) in e.values.iter().zip(&oracle) {
                    assert!((x - y).abs() < 1e-9, "{x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn sqrt_and_pinv() {
        let s = op_sqrt(&real(&[&[1.0, 0.0], &[0.0, 0.25]])).unwrap();
        assert!(max_diff(&s, &real(&[&[1.0, 0.0], &[0.0, 0.5]])) < 1e-12);
        let p = real(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(max_diff(&op_sqrt(&p).unwrap(), &p) < 1e-12);
        let pi = op_pinv(&real(&[&[2.0, 0.0], &[0.0, 0.0]])).unwrap();
        assert!(max_diff(&pi, &real(&[&[0.5, 0.0], &[0.0, 0.0]])) < 1e-12);
        assert!(matches!(op_sqrt(&real(&[&[-1.0]])), Err(Error::NegativeSpectrum(_))));

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let g = random_hermitian(&mut rng, 3);
            let a = &g * &g;
            let r = op_sqrt(&a).unwrap();
            assert!(max_diff(&(&r * &r), &a) < 1e-9);
            let pa = op_pinv(&a).unwrap();
            assert!(max_diff(&(&a * &pa * &a), &a) < 1e-9);
        }
    }

    #[test]
    fn range_isometry_spans_projection() {
        let p = real(&[&[0.5, 0.5, 0.0], &[0.5, 0.5, 0.0], &[0.0, 0.0, 1.0]]);
        let w = range_isometry(&p);
        assert_eq!(w.ncols(), 2);
        assert!(max_diff(&(&w * w.adjoint()), &p) < 1e-12);
        assert!(max_diff(&(w.adjoint() * &w), &CMatrix::identity(2, 2)) < 1e-12);
        assert_eq!(range_isometry(&CMatrix::zeros(2, 2)).ncols(), 0);
    }

    #[test]
    fn operator_norm_of_nilpotent() {
        let a = real(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((operator_norm(&a) - 2.0).abs() < 1e-12);
    }
}
