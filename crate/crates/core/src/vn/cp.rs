use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::algebra::{c, cmatrix_serde, max_abs_diff, AlgElement, MatrixAlgebra, VnObject};
use super::eig::{self, CMatrix};
use crate::error::{Error, Result};

/// A map `X → Y` of the chain: a linear map from the algebra of `Y` to the
/// algebra of `X`, stored as a superoperator on row-major vectorizations.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "CpsuRepr", into = "CpsuRepr")]
pub struct CpsuMap {
    src: VnObject,
    dst: VnObject,
    superop: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct CpsuRepr {
    src: VnObject,
    dst: VnObject,
    #[serde(with = "cmatrix_serde")]
    superop: CMatrix,
}

impl From<CpsuMap> for CpsuRepr {
    fn from(f: CpsuMap) -> Self {
        CpsuRepr {
            src: f.src,
            dst: f.dst,
            superop: f.superop,
        }
    }
}

impl TryFrom<CpsuRepr> for CpsuMap {
    type Error = Error;

    fn try_from(r: CpsuRepr) -> Result<Self> {
        let (rows, cols) = (r.src.algebra().vector_dim(), r.dst.algebra().vector_dim());
        let superop = if r.superop.is_empty() { CMatrix::zeros(rows, cols) } else { r.superop };
        CpsuMap::from_superop(&r.src, &r.dst, superop)
    }
}

impl CpsuMap {
    pub fn from_superop(src: &VnObject, dst: &VnObject, superop: CMatrix) -> Result<Self> {
        let shape = (src.algebra().vector_dim(), dst.algebra().vector_dim());
        if superop.shape() != shape {
            return Err(Error::invalid(
                "superoperator",
                format!("shape {:?} does not match {:?}", superop.shape(), shape),
            ));
        }
        Ok(CpsuMap {
            src: src.clone(),
            dst: dst.clone(),
            superop,
        })
    }

    /// Tabulates a linear map `alg(dst) → alg(src)` on matrix units.
    pub fn from_linear(src: &VnObject, dst: &VnObject, f: impl Fn(&AlgElement) -> AlgElement) -> Self {
        let (sa, da) = (src.algebra(), dst.algebra());
        let units = AlgElement::matrix_units(&da);
        let mut superop = CMatrix::zeros(sa.vector_dim(), da.vector_dim());
        for (j, u) in units.iter().enumerate() {
            superop.set_column(j, &f(u).vectorize());
        }
        CpsuMap {
            src: src.clone(),
            dst: dst.clone(),
            superop,
        }
    }

    pub fn identity(x: &VnObject) -> Self {
        let d = x.algebra().vector_dim();
        CpsuMap {
            src: x.clone(),
            dst: x.clone(),
            superop: CMatrix::identity(d, d),
        }
    }

    pub fn src(&self) -> &VnObject {
        &self.src
    }

    pub fn dst(&self) -> &VnObject {
        &self.dst
    }

    pub fn superop(&self) -> &CMatrix {
        &self.superop
    }

    /// Evaluates the algebra map on an element of `dst`'s algebra.
    pub fn apply(&self, b: &AlgElement) -> AlgElement {
        let v: DVector<Complex64> = &self.superop * b.vectorize();
        AlgElement::unvectorize(&self.src.algebra(), &v)
    }

    /// `g ⊙ self`, whose superoperator is `S_self · S_g`.
    pub(crate) fn then_unchecked(&self, g: &CpsuMap) -> CpsuMap {
        CpsuMap {
            src: self.src.clone(),
            dst: g.dst.clone(),
            superop: &self.superop * &g.superop,
        }
    }

    /// `(1 − t)·self + t·other`.
    pub fn mix(&self, other: &CpsuMap, t: f64) -> Result<CpsuMap> {
        if self.superop.shape() != other.superop.shape() {
            return Err(Error::Composition("mixing maps with different shapes".into()));
        }
        Ok(CpsuMap {
            src: self.src.clone(),
            dst: self.dst.clone(),
            superop: &self.superop * c(1.0 - t) + &other.superop * c(t),
        })
    }

    pub fn residual(&self, other: &CpsuMap) -> f64 {
        max_abs_diff(&self.superop, &other.superop)
    }

    /// `f(1) ≤ 1` within `tol`.
    pub fn is_subunital(&self, tol: f64) -> Result<bool> {
        let one = AlgElement::identity(&self.dst.algebra());
        let slack = self.apply(&one).ortho().min_eigenvalue()?;
        Ok(slack >= -tol)
    }
}

/// Outcome of the Choi test: the most negative Choi eigenvalue and where it occurs.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CpReport {
    pub completely_positive: bool,
    pub min_eigenvalue: f64,
    /// `(input block, output block)` of the witness.
    pub blocks: Option<(usize, usize)>,
}

/// Choi matrix `Σ_{kl} E_kl ⊗ f(E_kl)` of a linear map restricted to one input
/// block and one output block.
pub fn choi_block(
    f: impl Fn(&AlgElement) -> AlgElement,
    input: &MatrixAlgebra,
    in_block: usize,
    out_block: usize,
) -> CMatrix {
    let r = input.dims()[in_block];
    let offset: usize = input.dims()[..in_block].iter().map(|n| n * n).sum();
    let d = input.vector_dim();
    let mut blocks: Vec<Vec<CMatrix>> = Vec::with_capacity(r);
    let mut s = 0;
    for k in 0..r {
        let mut row = Vec::with_capacity(r);
        for l in 0..r {
            let mut v = DVector::zeros(d);
            v[offset + k * r + l] = c(1.0);
            let out = f(&AlgElement::unvectorize(input, &v));
            let b = out.block(out_block).clone();
            s = b.nrows();
            row.push(b);
        }
        blocks.push(row);
    }
    CMatrix::from_fn(r * s, r * s, |i, j| blocks[i / s][j / s][(i % s, j % s)])
}

/// Decides complete positivity of a linear map `alg(input) → alg(output)` blockwise by the Choi test.
pub fn cp_check_linear(
    f: impl Fn(&AlgElement) -> AlgElement,
    input: &MatrixAlgebra,
    output: &MatrixAlgebra,
    tol: f64,
) -> Result<CpReport> {
    let mut worst = CpReport {
        completely_positive: true,
        min_eigenvalue: f64::INFINITY,
        blocks: None,
    };
    for i in 0..input.dims().len() {
        for j in 0..output.dims().len() {
            let choi = choi_block(&f, input, i, j);
            let l = eig::min_eigenvalue(&choi)?;
            if l < worst.min_eigenvalue {
                worst.min_eigenvalue = l;
                worst.blocks = Some((i, j));
            }
        }
    }
    worst.completely_positive = worst.min_eigenvalue >= -tol;
    Ok(worst)
}

/// Choi test for a map of the chain; its algebra map runs `alg(dst) → alg(src)`.
pub fn cp_check(f: &CpsuMap, tol: f64) -> Result<CpReport> {
    cp_check_linear(|b| f.apply(b), &f.dst.algebra(), &f.src.algebra(), tol)
}
