use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::eig::{self, CMatrix};
use crate::error::{Error, Result};

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Serde for complex matrices as rows of `[re, im]` pairs.
pub(crate) mod cmatrix_serde {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }

    /// An empty row list reads back as `0×0`.
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != k) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(CMatrix::from_fn(rows.len(), k, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
    }
}

/// `M_{n₁} ⊕ … ⊕ M_{n_k}`, serialized as the list of block sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixAlgebra {
    dims: Vec<usize>,
}

impl MatrixAlgebra {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::invalid("matrix algebra", "zero-sized block"));
        }
        Ok(MatrixAlgebra { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Complex dimension `Σ n_i²`.
    pub fn vector_dim(&self) -> usize {
        self.dims.iter().map(|n| n * n).sum()
    }

    /// `A ⊕ A`.
    pub fn doubled(&self) -> MatrixAlgebra {
        MatrixAlgebra {
            dims: self.dims.iter().chain(&self.dims).copied().collect(),
        }
    }
}

/// An element of a matrix algebra: one square block per summand.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement {
    blocks: Vec<CMatrix>,
}

impl Serialize for AlgElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Block<'a>(#[serde(with = "cmatrix_ref_serde")] &'a CMatrix);
        let blocks: Vec<Block<'_>> = self.blocks.iter().map(Block).collect();
        blocks.serialize(s)
    }
}

mod cmatrix_ref_serde {
    use super::*;
    pub fn serialize<S: Serializer>(m: &&CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        cmatrix_serde::serialize(m, s)
    }
}

impl<'de> Deserialize<'de> for AlgElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Block(#[serde(with = "cmatrix_serde")] CMatrix);
        let blocks = Vec::<Block>::deserialize(d)?;
        AlgElement::new(blocks.into_iter().map(|b| b.0).collect()).map_err(serde::de::Error::custom)
    }
}

impl AlgElement {
    pub fn new(blocks: Vec<CMatrix>) -> Result<Self> {
        if let Some(b) = blocks.iter().find(|b| !b.is_square() || b.nrows() == 0) {
            return Err(Error::invalid("algebra element", format!("block of shape {:?}", b.shape())));
        }
        Ok(AlgElement { blocks })
    }

    pub fn zeros(alg: &MatrixAlgebra) -> Self {
        AlgElement {
            blocks: alg.dims.iter().map(|&n| CMatrix::zeros(n, n)).collect(),
        }
    }

    pub fn identity(alg: &MatrixAlgebra) -> Self {
        AlgElement {
            blocks: alg.dims.iter().map(|&n| CMatrix::identity(n, n)).collect(),
        }
    }

    pub fn scalar(alg: &MatrixAlgebra, s: f64) -> Self {
        AlgElement::identity(alg).scale(s)
    }

    /// A single-block element.
    pub fn single(m: CMatrix) -> Result<Self> {
        AlgElement::new(vec![m])
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub fn algebra(&self) -> MatrixAlgebra {
        MatrixAlgebra {
            dims: self.blocks.iter().map(|b| b.nrows()).collect(),
        }
    }

    pub fn in_algebra(&self, alg: &MatrixAlgebra) -> bool {
        self.blocks.len() == alg.dims.len() && self.blocks.iter().zip(&alg.dims).all(|(b, &n)| b.nrows() == n)
    }

    fn zip(&self, other: &AlgElement, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> AlgElement {
        assert_eq!(self.algebra(), other.algebra(), "elements of different algebras");
        AlgElement {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn map_blocks(&self, f: impl Fn(&CMatrix) -> CMatrix) -> AlgElement {
        AlgElement {
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn try_map_blocks(&self, f: impl Fn(&CMatrix) -> Result<CMatrix>) -> Result<AlgElement> {
        Ok(AlgElement {
            blocks: self.blocks.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn add(&self, other: &AlgElement) -> AlgElement {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &AlgElement) -> AlgElement {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &AlgElement) -> AlgElement {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> AlgElement {
        self.map_blocks(|a| a * c(s))
    }

    pub fn adjoint(&self) -> AlgElement {
        self.map_blocks(|a| a.adjoint())
    }

    /// `1 - self`.
    pub fn ortho(&self) -> AlgElement {
        AlgElement::identity(&self.algebra()).sub(self)
    }

    /// `k·self·k`.
    pub fn sandwich(&self, k: &AlgElement) -> AlgElement {
        k.mul(self).mul(k)
    }

    pub fn max_abs_diff(&self, other: &AlgElement) -> f64 {
        if self.algebra() != other.algebra() {
            return f64::INFINITY;
        }
        self.blocks.iter().zip(&other.blocks).fold(0.0, |m, (a, b)| m.max(max_abs_diff(a, b)))
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.blocks.iter().fold(0.0, |m, b| m.max(eig::hermitian_defect(b)))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        self.blocks
            .iter()
            .try_fold(f64::INFINITY, |m, b| Ok(m.min(eig::min_eigenvalue(b)?)))
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        self.blocks
            .iter()
            .try_fold(f64::NEG_INFINITY, |m, b| Ok(m.max(eig::max_eigenvalue(b)?)))
    }

    /// Largest operator norm over the blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().fold(0.0, |m, b| m.max(eig::operator_norm(b)))
    }

    pub fn sqrt(&self) -> Result<AlgElement> {
        self.try_map_blocks(eig::op_sqrt)
    }

    pub fn pinv(&self) -> Result<AlgElement> {
        self.try_map_blocks(eig::op_pinv)
    }

    /// `pinv(√self)` with the same support as `⌈self⌉`.
    pub fn pinv_sqrt(&self) -> Result<AlgElement> {
        self.try_map_blocks(eig::op_pinv_sqrt)
    }

    /// `⌈self⌉`: support projection.
    pub fn ceil(&self) -> Result<AlgElement> {
        self.try_map_blocks(eig::support_projection)
    }

    /// `⌊self⌋`: projection onto the eigenvalue-1 eigenspace.
    pub fn floor(&self) -> Result<AlgElement> {
        self.try_map_blocks(eig::unit_projection)
    }

    /// Row-major vectorization, blocks concatenated.
    pub fn vectorize(&self) -> DVector<Complex64> {
        let mut v = Vec::with_capacity(self.algebra().vector_dim());
        for b in &self.blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    v.push(b[(i, j)]);
                }
            }
        }
        DVector::from_vec(v)
    }

    pub fn unvectorize(alg: &MatrixAlgebra, v: &DVector<Complex64>) -> AlgElement {
        assert_eq!(v.len(), alg.vector_dim(), "vector length does not match the algebra");
        let mut off = 0;
        let blocks = alg
            .dims
            .iter()
            .map(|&n| {
                let b = CMatrix::from_fn(n, n, |i, j| v[off + i * n + j]);
                off += n * n;
                b
            })
            .collect();
        AlgElement { blocks }
    }

    /// Basis of matrix units `E_{kl}` in vectorization order.
    pub fn matrix_units(alg: &MatrixAlgebra) -> Vec<AlgElement> {
        let d = alg.vector_dim();
        (0..d)
            .map(|i| {
                let mut v = DVector::zeros(d);
                v[i] = c(1.0);
                AlgElement::unvectorize(alg, &v)
            })
            .collect()
    }

    /// `self ⊕ other` in `A ⊕ A`.
    pub fn concat(&self, other: &AlgElement) -> AlgElement {
        AlgElement {
            blocks: self.blocks.iter().chain(&other.blocks).cloned().collect(),
        }
    }

    /// Splits an element of `A ⊕ A` into its halves.
    pub fn split_half(&self) -> (AlgElement, AlgElement) {
        let k = self.blocks.len() / 2;
        (
            AlgElement {
                blocks: self.blocks[..k].to_vec(),
            },
            AlgElement {
                blocks: self.blocks[k..].to_vec(),
            },
        )
    }
}

/// A summand of an object: the image of an isometry into one ambient block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Corner {
    pub block: usize,
    #[serde(with = "cmatrix_serde")]
    pub iso: CMatrix,
}

/// An object of the chain: a corner `P·A·P` of an ambient algebra, kept as
/// one isometry per non-zero block of `P`. Its algebra is `⊕ M_{rank}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VnObject {
    ambient: MatrixAlgebra,
    corners: Vec<Corner>,
}

impl VnObject {
    pub fn whole(ambient: &MatrixAlgebra) -> Self {
        VnObject {
            ambient: ambient.clone(),
            corners: ambient
                .dims
                .iter()
                .enumerate()
                .map(|(block, &n)| Corner {
                    block,
                    iso: CMatrix::identity(n, n),
                })
                .collect(),
        }
    }

    pub fn ambient(&self) -> &MatrixAlgebra {
        &self.ambient
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    pub fn algebra(&self) -> MatrixAlgebra {
        MatrixAlgebra {
            dims: self.corners.iter().map(|c| c.iso.ncols()).collect(),
        }
    }

    /// Same ambient, same blocks, isometries within `tol`.
    pub fn approx_eq(&self, other: &VnObject, tol: f64) -> bool {
        self.ambient == other.ambient
            && self.corners.len() == other.corners.len()
            && self
                .corners
                .iter()
                .zip(&other.corners)
                .all(|(a, b)| a.block == b.block && max_abs_diff(&a.iso, &b.iso) <= tol)
    }

    /// Largest isometry difference, or infinity when the shapes differ.
    pub fn distance(&self, other: &VnObject) -> f64 {
        if self.ambient != other.ambient
            || self.corners.len() != other.corners.len()
            || self.corners.iter().zip(&other.corners).any(|(a, b)| a.block != b.block)
        {
            return f64::INFINITY;
        }
        self.corners
            .iter()
            .zip(&other.corners)
            .fold(0.0, |m, (a, b)| m.max(max_abs_diff(&a.iso, &b.iso)))
    }

    /// The sub-corner cut out by a projection of this object's algebra,
    /// with the embedding relating the two.
    pub fn corner_of(&self, proj: &AlgElement) -> Result<(VnObject, Embedding)> {
        if !proj.in_algebra(&self.algebra()) {
            return Err(Error::invalid("corner", "projection is not in the object's algebra"));
        }
        let mut corners = Vec::new();
        let mut parts = Vec::new();
        for (i, (outer, p)) in self.corners.iter().zip(proj.blocks()).enumerate() {
            let w = eig::range_isometry(p);
            if w.ncols() == 0 {
                continue;
            }
            corners.push(Corner {
                block: outer.block,
                iso: &outer.iso * &w,
            });
            parts.push((i, w));
        }
        let object = VnObject {
            ambient: self.ambient.clone(),
            corners,
        };
        let embedding = Embedding {
            outer: self.algebra(),
            parts,
        };
        Ok((object, embedding))
    }

    /// `X ⊕ X`, used as the target of an instrument.
    pub fn doubled(&self) -> VnObject {
        let k = self.ambient.dims.len();
        VnObject {
            ambient: self.ambient.doubled(),
            corners: self
                .corners
                .iter()
                .cloned()
                .chain(self.corners.iter().map(|c| Corner {
                    block: c.block + k,
                    iso: c.iso.clone(),
                }))
                .collect(),
        }
    }
}

/// Block-diagonal isometry `W` from a corner's algebra into an outer algebra.
#[derive(Debug, Clone)]
pub struct Embedding {
    outer: MatrixAlgebra,
    /// `(outer block, W)` for each corner block, in order.
    parts: Vec<(usize, CMatrix)>,
}

impl Embedding {
    /// `a ↦ W*·a·W`.
    pub fn compress(&self, a: &AlgElement) -> AlgElement {
        AlgElement {
            blocks: self.parts.iter().map(|(i, w)| w.adjoint() * a.block(*i) * w).collect(),
        }
    }

    /// `c ↦ W·c·W*`.
    pub fn expand(&self, c: &AlgElement) -> AlgElement {
        let mut out = AlgElement::zeros(&self.outer);
        for ((i, w), b) in self.parts.iter().zip(c.blocks()) {
            out.blocks[*i] += w * b * w.adjoint();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(vals: &[f64]) -> CMatrix {
        CMatrix::from_fn(vals.len(), vals.len(), |i, j| if i == j { c(vals[i]) } else { c(0.0) })
    }

    #[test]
    fn vectorization_round_trips() {
        let alg = MatrixAlgebra::new(vec![2, 1]).unwrap();
        let units = AlgElement::matrix_units(&alg);
        assert_eq!(units.len(), 5);
        assert_eq!(units[1].block(0)[(0, 1)], c(1.0));
        for u in &units {
            assert_eq!(&AlgElement::unvectorize(&alg, &u.vectorize()), u);
        }
    }

    #[test]
    fn corner_of_rank_one_block() {
        let alg = MatrixAlgebra::new(vec![2]).unwrap();
        let x = VnObject::whole(&alg);
        let p = AlgElement::single(diag(&[1.0, 0.0])).unwrap();
        let (obj, emb) = x.corner_of(&p).unwrap();
        assert_eq!(obj.algebra().dims(), &[1]);
        let a = AlgElement::single(CMatrix::from_fn(2, 2, |i, j| c((1 + 2 * i + j) as f64))).unwrap();
        assert_eq!(emb.compress(&a).block(0)[(0, 0)], c(1.0));
        let back = emb.expand(&emb.compress(&a));
        assert!(back.max_abs_diff(&AlgElement::single(diag(&[1.0, 0.0])).unwrap()) < 1e-15);

        let (zero, _) = x.corner_of(&AlgElement::zeros(&alg)).unwrap();
        assert!(zero.algebra().dims().is_empty());
    }

    #[test]
    fn json_uses_re_im_pairs() {
        let a = AlgElement::single(CMatrix::from_fn(1, 1, |_, _| Complex64::new(0.5, -1.0))).unwrap();
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(j, "[[[[0.5,-1.0]]]]");
        assert_eq!(serde_json::from_str::<AlgElement>(&j).unwrap(), a);
    }
}
