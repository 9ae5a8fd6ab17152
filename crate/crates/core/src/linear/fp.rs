use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{Chain, Comprehension, Quotient};
use crate::discrete::ENUMERATION_LIMIT;
use crate::error::{Error, Result};
use crate::harness::{Bounds, CaseRng, Exhaustive, Sampler};

/// Primes offered by the generators.
pub const SAMPLED_PRIMES: [u32; 2] = [2, 3];

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn inv(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2)
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u32);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Reduced row echelon form over `F_p`, zero rows dropped.
pub fn rref(mut rows: Vec<Vec<u32>>, ncols: usize, p: u32) -> Vec<Vec<u32>> {
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let k = inv(rows[r][c], p);
        for v in &mut rows[r] {
            *v = *v * k % p;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let f = row[c];
            if i != r && f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

fn pivots(rows: &[Vec<u32>]) -> Vec<usize> {
    rows.iter()
        .map(|r| r.iter().position(|&x| x != 0).expect("echelon rows are non-zero"))
        .collect()
}

/// Basis of `{v | M·v = 0}` for `M` given by rows of length `ncols`.
fn nullspace(m: Vec<Vec<u32>>, ncols: usize, p: u32) -> Vec<Vec<u32>> {
    let r = rref(m, ncols, p);
    let piv = pivots(&r);
    (0..ncols)
        .filter(|c| !piv.contains(c))
        .map(|free| {
            let mut v = vec![0; ncols];
            v[free] = 1;
            for (row, &pc) in r.iter().zip(&piv) {
                v[pc] = (p - row[free]) % p;
            }
            v
        })
        .collect()
}

/// The space `F_p^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub struct FpSpace {
    p: u32,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    p: u32,
    dim: usize,
}

impl From<FpSpace> for SpaceRepr {
    fn from(s: FpSpace) -> Self {
        SpaceRepr { p: s.p, dim: s.dim }
    }
}

impl TryFrom<SpaceRepr> for FpSpace {
    type Error = Error;

    fn try_from(r: SpaceRepr) -> Result<Self> {
        FpSpace::new(r.p, r.dim)
    }
}

impl fmt::Display for FpSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}^{}", self.p, self.dim)
    }
}

impl FpSpace {
    /// Accepts primes up to 251 so products of residues fit in `u32`.
    pub fn new(p: u32, dim: usize) -> Result<Self> {
        if !is_prime(p) || p > 251 {
            return Err(Error::invalid("prime field", format!("{p} is not a prime ≤ 251")));
        }
        Ok(FpSpace { p, dim })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All `p^dim` vectors, first coordinate varying slowest.
    pub fn vectors(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..self.dim {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..self.p).map(move |a| {
                        let mut w = v.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

/// A linear subspace, stored as its reduced echelon basis so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubspaceRepr", into = "SubspaceRepr")]
pub struct FpSubspace {
    space: FpSpace,
    basis: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    space: FpSpace,
    basis: Vec<Vec<u32>>,
}

impl From<FpSubspace> for SubspaceRepr {
    fn from(s: FpSubspace) -> Self {
        SubspaceRepr {
            space: s.space,
            basis: s.basis,
        }
    }
}

impl TryFrom<SubspaceRepr> for FpSubspace {
    type Error = Error;

    fn try_from(r: SubspaceRepr) -> Result<Self> {
        FpSubspace::span(r.space, r.basis)
    }
}

impl FpSubspace {
    /// The span of arbitrary vectors; entries are reduced mod `p`.
    pub fn span(space: FpSpace, vectors: Vec<Vec<u32>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != space.dim) {
            return Err(Error::invalid("subspace", format!("vector of length {} in {space}", v.len())));
        }
        let rows = vectors
            .into_iter()
            .map(|v| v.into_iter().map(|x| x % space.p).collect())
            .collect();
        Ok(FpSubspace {
            space,
            basis: rref(rows, space.dim, space.p),
        })
    }

    pub fn zero(space: FpSpace) -> Self {
        FpSubspace { space, basis: vec![] }
    }

    pub fn whole(space: FpSpace) -> Self {
        let basis = (0..space.dim)
            .map(|i| (0..space.dim).map(|j| u32::from(i == j)).collect())
            .collect();
        FpSubspace { space, basis }
    }

    pub fn space(&self) -> FpSpace {
        self.space
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        pivots(&self.basis)
    }

    /// `v` minus its component along the basis, which vanishes on the pivot coordinates.
    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.space.p;
        let mut v = v.to_vec();
        for (row, pc) in self.basis.iter().zip(self.pivots()) {
            let f = v[pc];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &FpSubspace) -> bool {
        self.space == other.space && self.basis.iter().all(|r| other.contains(r))
    }

    /// Every subspace of `space`, by closing `{0}` under adding one vector.
    pub fn all(space: FpSpace) -> Vec<FpSubspace> {
        let vectors = space.vectors();
        let mut seen: BTreeSet<FpSubspace> = BTreeSet::from([FpSubspace::zero(space)]);
        let mut frontier = vec![FpSubspace::zero(space)];
        while let Some(s) = frontier.pop() {
            for v in &vectors {
                if s.contains(v) {
                    continue;
                }
                let mut rows = s.basis.clone();
                rows.push(v.clone());
                let t = FpSubspace {
                    space,
                    basis: rref(rows, space.dim, space.p),
                };
                if seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// A linear map `src → dst`, as a `dst.dim × src.dim` matrix acting on columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FpMapRepr", into = "FpMapRepr")]
pub struct FpMap {
    src: FpSpace,
    dst: FpSpace,
    matrix: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct FpMapRepr {
    src: FpSpace,
    dst: FpSpace,
    matrix: Vec<Vec<u32>>,
}

impl From<FpMap> for FpMapRepr {
    fn from(f: FpMap) -> Self {
        FpMapRepr {
            src: f.src,
            dst: f.dst,
            matrix: f.matrix,
        }
    }
}

impl TryFrom<FpMapRepr> for FpMap {
    type Error = Error;

    fn try_from(r: FpMapRepr) -> Result<Self> {
        FpMap::new(r.src, r.dst, r.matrix)
    }
}

impl FpMap {
    pub fn new(src: FpSpace, dst: FpSpace, matrix: Vec<Vec<u32>>) -> Result<Self> {
        if src.p != dst.p {
            return Err(Error::invalid("linear map", format!("{src} and {dst} have different fields")));
        }
        if matrix.len() != dst.dim || matrix.iter().any(|r| r.len() != src.dim) {
            return Err(Error::invalid("linear map", format!("matrix shape does not fit {src} → {dst}")));
        }
        let matrix = matrix
            .into_iter()
            .map(|r| r.into_iter().map(|x| x % src.p).collect())
            .collect();
        Ok(FpMap { src, dst, matrix })
    }

    pub fn from_fn(src: FpSpace, dst: FpSpace, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        FpMap {
            src,
            dst,
            matrix: (0..dst.dim)
                .map(|i| (0..src.dim).map(|j| f(i, j) % src.p).collect())
                .collect(),
        }
    }

    pub fn identity(x: FpSpace) -> Self {
        FpMap::from_fn(x, x, |i, j| u32::from(i == j))
    }

    pub fn src(&self) -> &FpSpace {
        &self.src
    }

    pub fn dst(&self) -> &FpSpace {
        &self.dst
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let p = self.src.p;
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| (acc + a * b) % p))
            .collect()
    }

    fn column(&self, j: usize) -> Vec<u32> {
        self.matrix.iter().map(|r| r[j]).collect()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FpMap) -> Result<FpMap> {
        if self.dst != g.src {
            return Err(Error::Composition(format!("target {} differs from source {}", self.dst, g.src)));
        }
        let p = self.src.p;
        Ok(FpMap::from_fn(self.src, g.dst, |i, j| {
            (0..self.dst.dim).fold(0, |acc, k| (acc + g.matrix[i][k] * self.matrix[k][j]) % p)
        }))
    }

    /// Every linear map `src → dst`, or `None` past the enumeration limit.
    pub fn enumerate(src: FpSpace, dst: FpSpace) -> Option<Vec<FpMap>> {
        if src.p != dst.p {
            return Some(vec![]);
        }
        let entries = src.dim * dst.dim;
        let total = u64::from(src.p).checked_pow(entries as u32).filter(|&t| t <= ENUMERATION_LIMIT)?;
        Some(
            (0..total)
                .map(|mut code| {
                    FpMap::from_fn(src, dst, |_, _| {
                        let d = (code % u64::from(src.p)) as u32;
                        code /= u64::from(src.p);
                        d
                    })
                })
                .collect(),
        )
    }
}

/// `□(f)(Q) = f⁻¹(Q)`.
pub fn vect_subst(f: &FpMap, q: &FpSubspace) -> FpSubspace {
    let xi = vect_quotient(q).unit;
    let m = f.then(&xi).expect("quotient map starts at the predicate's space");
    let p = f.src.p;
    FpSubspace {
        space: f.src,
        basis: rref(nullspace(m.matrix, f.src.dim, p), f.src.dim, p),
    }
}

/// `V/P ≅ F_p^{dim V − dim P}` on the non-pivot coordinates of `P`'s echelon
/// basis; the unit reduces `v` by the basis and reads off those coordinates.
pub fn vect_quotient(pred: &FpSubspace) -> Quotient<FpSpace, FpMap> {
    let v = pred.space;
    let piv = pred.pivots();
    let free: Vec<usize> = (0..v.dim).filter(|c| !piv.contains(c)).collect();
    let object = FpSpace { p: v.p, dim: free.len() };
    let reduced: Vec<Vec<u32>> = (0..v.dim)
        .map(|j| {
            let mut e = vec![0; v.dim];
            e[j] = 1;
            pred.reduce(&e)
        })
        .collect();
    let unit = FpMap::from_fn(v, object, |i, j| reduced[j][free[i]]);
    Quotient { object, unit }
}

/// `P ≅ F_p^{dim P}` with inclusion `t ↦ Σ t_i·b_i` over the echelon basis.
pub fn vect_comprehension(pred: &FpSubspace) -> Comprehension<FpSpace, FpMap> {
    let v = pred.space;
    let object = FpSpace { p: v.p, dim: pred.dim() };
    let counit = FpMap::from_fn(object, v, |i, j| pred.basis[j][i]);
    Comprehension { object, counit }
}

/// Finite-dimensional vector spaces over a prime field with linear maps and subspaces.
#[derive(Debug, Clone, Copy, Default)]
pub struct VectChain;

fn check_pred(x: &FpSpace, p: &FpSubspace) -> Result<()> {
    if &p.space != x {
        return Err(Error::invalid("subspace", format!("lives in {} rather than {x}", p.space)));
    }
    Ok(())
}

impl Chain for VectChain {
    type Object = FpSpace;
    type Pred = FpSubspace;
    type Map = FpMap;

    fn name(&self) -> &'static str {
        "vect"
    }

    fn same_object(&self, a: &FpSpace, b: &FpSpace) -> bool {
        a == b
    }

    fn src<'a>(&self, f: &'a FpMap) -> &'a FpSpace {
        &f.src
    }

    fn dst<'a>(&self, f: &'a FpMap) -> &'a FpSpace {
        &f.dst
    }

    fn identity(&self, x: &FpSpace) -> FpMap {
        FpMap::identity(*x)
    }

    fn compose(&self, g: &FpMap, f: &FpMap) -> Result<FpMap> {
        f.then(g)
    }

    fn map_residual(&self, f: &FpMap, g: &FpMap) -> f64 {
        if f == g {
            0.0
        } else {
            1.0
        }
    }

    fn subst(&self, f: &FpMap, q: &FpSubspace) -> FpSubspace {
        vect_subst(f, q)
    }

    fn top(&self, x: &FpSpace) -> FpSubspace {
        FpSubspace::whole(*x)
    }

    fn bottom(&self, x: &FpSpace) -> FpSubspace {
        FpSubspace::zero(*x)
    }

    fn leq(&self, _x: &FpSpace, p: &FpSubspace, q: &FpSubspace) -> bool {
        p.is_subspace_of(q)
    }

    fn pred_residual(&self, p: &FpSubspace, q: &FpSubspace) -> f64 {
        if p == q {
            0.0
        } else {
            1.0
        }
    }

    fn ortho(&self, _x: &FpSpace, _p: &FpSubspace) -> Option<FpSubspace> {
        None
    }

    fn quotient(&self, x: &FpSpace, p: &FpSubspace) -> Result<Quotient<FpSpace, FpMap>> {
        check_pred(x, p)?;
        Ok(vect_quotient(p))
    }

    fn comprehension(&self, x: &FpSpace, p: &FpSubspace) -> Result<Comprehension<FpSpace, FpMap>> {
        check_pred(x, p)?;
        Ok(vect_comprehension(p))
    }

    /// `g = f ∘ s` where `s : V/P → V` fills the pivot coordinates with zeros.
    fn quotient_transpose(&self, x: &FpSpace, p: &FpSubspace, f: &FpMap) -> Result<FpMap> {
        check_pred(x, p)?;
        if &f.src != x {
            return Err(Error::Composition(format!("map source {} is not {x}", f.src)));
        }
        if let Some(b) = p.basis.iter().find(|b| f.apply(b).iter().any(|&a| a != 0)) {
            return Err(Error::NotAHom(format!("f does not vanish on {b:?}")));
        }
        let piv = p.pivots();
        let free: Vec<usize> = (0..x.dim).filter(|c| !piv.contains(c)).collect();
        let q = FpSpace { p: x.p, dim: free.len() };
        Ok(FpMap::from_fn(q, f.dst, |i, j| f.matrix[i][free[j]]))
    }

    /// `g(z)` is `f(z)` read off at the pivot coordinates of `P`.
    fn comprehension_transpose(&self, x: &FpSpace, p: &FpSubspace, f: &FpMap) -> Result<FpMap> {
        check_pred(x, p)?;
        if &f.dst != x {
            return Err(Error::Composition(format!("map target {} is not {x}", f.dst)));
        }
        if let Some(j) = (0..f.src.dim).find(|&j| !p.contains(&f.column(j))) {
            return Err(Error::NotAHom(format!("f(e_{j}) lies outside the subspace")));
        }
        let piv = p.pivots();
        let c = FpSpace { p: x.p, dim: p.dim() };
        Ok(FpMap::from_fn(f.src, c, |i, j| f.matrix[piv[i]][j]))
    }
}

fn random_matrix(rng: &mut CaseRng, x: FpSpace, y: FpSpace) -> FpMap {
    FpMap::from_fn(x, y, |_, _| rng.gen_range(0..x.p))
}

impl Sampler for VectChain {
    fn sample_object(&self, rng: &mut CaseRng, b: &Bounds) -> Result<FpSpace> {
        let p = SAMPLED_PRIMES[rng.gen_range(0..SAMPLED_PRIMES.len())];
        FpSpace::new(p, rng.gen_range(0..=b.max_vect_dim))
    }

    /// Same field as `x`.
    fn sample_peer(&self, rng: &mut CaseRng, x: &FpSpace, b: &Bounds) -> Result<FpSpace> {
        FpSpace::new(x.p, rng.gen_range(0..=b.max_vect_dim))
    }

    fn sample_pred(&self, rng: &mut CaseRng, x: &FpSpace, _b: &Bounds) -> FpSubspace {
        let k = rng.gen_range(0..=x.dim);
        let vectors = (0..k).map(|_| (0..x.dim).map(|_| rng.gen_range(0..x.p)).collect()).collect();
        FpSubspace::span(*x, vectors).expect("vectors have the space's length")
    }

    fn sample_map(&self, rng: &mut CaseRng, x: &FpSpace, y: &FpSpace, _b: &Bounds) -> FpMap {
        random_matrix(rng, *x, *y)
    }

    /// `h ∘ ξ_P` for a random `h`, which kills `P`.
    fn sample_quotient_hom(&self, rng: &mut CaseRng, _x: &FpSpace, p: &FpSubspace, y: &FpSpace, _b: &Bounds) -> FpMap {
        let q = vect_quotient(p);
        q.unit.then(&random_matrix(rng, q.object, *y)).expect("endpoints match")
    }

    /// `ι_P ∘ h` for a random `h`, whose image lies in `P`.
    fn sample_comprehension_hom(
        &self,
        rng: &mut CaseRng,
        z: &FpSpace,
        _x: &FpSpace,
        p: &FpSubspace,
        _b: &Bounds,
    ) -> FpMap {
        let c = vect_comprehension(p);
        random_matrix(rng, *z, c.object).then(&c.counit).expect("endpoints match")
    }

    fn perturb_map(&self, rng: &mut CaseRng, f: &FpMap, _b: &Bounds) -> Option<FpMap> {
        if f.src.dim == 0 || f.dst.dim == 0 {
            return None;
        }
        let mut g = f.clone();
        let (i, j) = (rng.gen_range(0..f.dst.dim), rng.gen_range(0..f.src.dim));
        g.matrix[i][j] = (g.matrix[i][j] + rng.gen_range(1..f.src.p)) % f.src.p;
        Some(g)
    }
}

impl Exhaustive for VectChain {
    fn objects(&self, b: &Bounds) -> Vec<FpSpace> {
        SAMPLED_PRIMES
            .iter()
            .flat_map(|&p| (0..=b.max_vect_dim).map(move |dim| FpSpace { p, dim }))
            .collect()
    }

    /// Spaces of dimension at most 2 over each sampled field.
    fn test_codomains(&self, b: &Bounds) -> Vec<FpSpace> {
        self.objects(b).into_iter().filter(|s| s.dim <= 2).collect()
    }

    fn preds(&self, x: &FpSpace) -> Vec<FpSubspace> {
        FpSubspace::all(*x)
    }

    fn all_maps(&self, x: &FpSpace, y: &FpSpace) -> Option<Vec<FpMap>> {
        FpMap::enumerate(*x, *y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(p: u32, dim: usize) -> FpSpace {
        FpSpace::new(p, dim).unwrap()
    }

    #[test]
    fn quotient_of_f2_squared() {
        let v = space(2, 2);
        let p = FpSubspace::span(v, vec![vec![1, 0]]).unwrap();
        let q = vect_quotient(&p);
        assert_eq!(q.object.dim(), 1);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(q.unit.apply(&[a, b]), vec![b]);
            }
        }
        let id = vect_quotient(&FpSubspace::zero(v));
        assert_eq!(id.unit, FpMap::identity(v));
        assert_eq!(vect_quotient(&FpSubspace::whole(v)).object.dim(), 0);
    }

    #[test]
    fn comprehension_of_diagonal_in_f3() {
        let v = space(3, 2);
        let p = FpSubspace::span(v, vec![vec![1, 1]]).unwrap();
        let c = vect_comprehension(&p);
        assert_eq!(c.object.dim(), 1);
        for t in 0..3 {
            assert_eq!(c.counit.apply(&[t]), vec![t, t]);
        }
        assert_eq!(vect_comprehension(&FpSubspace::whole(v)).counit, FpMap::identity(v));
        assert_eq!(vect_comprehension(&FpSubspace::zero(v)).object.dim(), 0);
    }

    #[test]
    fn quotient_kernel_is_exactly_p() {
        let v = space(3, 3);
        for p in FpSubspace::all(v) {
            let q = vect_quotient(&p);
            for x in v.vectors() {
                assert_eq!(q.unit.apply(&x).iter().all(|&a| a == 0), p.contains(&x));
            }
        }
    }

    #[test]
    fn subspace_counts() {
        // Gaussian binomials: F2^3 has 1 + 7 + 7 + 1, F3^3 has 1 + 13 + 13 + 1
        assert_eq!(FpSubspace::all(space(2, 3)).len(), 16);
        assert_eq!(FpSubspace::all(space(3, 3)).len(), 28);
        assert_eq!(FpSubspace::all(space(3, 0)).len(), 1);
    }

    #[test]
    fn subst_is_preimage() {
        let v = space(2, 2);
        let f = FpMap::new(v, v, vec![vec![1, 1], vec![0, 0]]).unwrap();
        let q = FpSubspace::zero(v);
        let pre = vect_subst(&f, &q);
        let brute: Vec<Vec<u32>> = v.vectors().into_iter().filter(|x| f.apply(x) == vec![0, 0]).collect();
        assert_eq!(pre, FpSubspace::span(v, brute).unwrap());
        assert_eq!(vect_subst(&f, &FpSubspace::whole(v)), FpSubspace::whole(v));
    }

    #[test]
    fn transposes_factor() {
        let v = space(3, 2);
        let p = FpSubspace::span(v, vec![vec![1, 1]]).unwrap();
        // f(a, b) = a − b kills the diagonal
        let f = FpMap::new(v, space(3, 1), vec![vec![1, 2]]).unwrap();
        let g = VectChain.quotient_transpose(&v, &p, &f).unwrap();
        assert_eq!(VectChain.compose(&g, &vect_quotient(&p).unit).unwrap(), f);
        assert!(VectChain.quotient_transpose(&v, &p, &FpMap::identity(v)).is_err());

        let h = FpMap::new(space(3, 1), v, vec![vec![2], vec![2]]).unwrap();
        let g = VectChain.comprehension_transpose(&v, &p, &h).unwrap();
        assert_eq!(VectChain.compose(&vect_comprehension(&p).counit, &g).unwrap(), h);
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(FpMap::enumerate(space(3, 2), space(3, 2)).unwrap().len(), 81);
        assert!(FpMap::enumerate(space(3, 3), space(3, 4)).is_none());
        assert!(FpMap::enumerate(space(2, 1), space(3, 1)).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let v = space(3, 2);
        let p = FpSubspace::span(v, vec![vec![2, 2]]).unwrap();
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"space":{"p":3,"dim":2},"basis":[[1,1]]}"#);
        assert_eq!(serde_json::from_str::<FpSubspace>(&j).unwrap(), p);
        assert!(serde_json::from_str::<FpSpace>(r#"{"p":4,"dim":1}"#).is_err());
    }
}
