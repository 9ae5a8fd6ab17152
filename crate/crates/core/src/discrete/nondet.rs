use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sets::{random_set, random_subset};
use super::{check_subset, Atom, FiniteSet, Target, ENUMERATION_LIMIT};
use crate::chain::{Chain, Comprehension, Measurement, Quotient, Summand};
use crate::error::{Error, Result};
use crate::harness::{Bounds, CaseRng, Exhaustive, Sampler};

/// A non-empty subset of `Y + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NdImage {
    atoms: BTreeSet<Atom>,
    star: bool,
}

impl NdImage {
    pub fn new(atoms: impl IntoIterator<Item = Atom>, star: bool) -> Result<Self> {
        let atoms: BTreeSet<Atom> = atoms.into_iter().collect();
        if atoms.is_empty() && !star {
            return Err(Error::invalid("non-deterministic image", "empty set"));
        }
        Ok(NdImage { atoms, star })
    }

    pub fn star() -> Self {
        NdImage {
            atoms: BTreeSet::new(),
            star: true,
        }
    }

    pub fn single(a: Atom) -> Self {
        NdImage {
            atoms: BTreeSet::from([a]),
            star: false,
        }
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    pub fn has_star(&self) -> bool {
        self.star
    }

    /// `{*}` exactly.
    pub fn is_star(&self) -> bool {
        self.star && self.atoms.is_empty()
    }
}

/// A map `X → P*(Y + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "NondetRepr", into = "NondetRepr")]
pub struct NondetMap {
    src: FiniteSet,
    dst: FiniteSet,
    table: Vec<NdImage>,
}

#[derive(Serialize, Deserialize)]
struct NondetRepr {
    src: FiniteSet,
    dst: FiniteSet,
    table: Vec<(Atom, Vec<Target>)>,
}

impl From<NondetMap> for NondetRepr {
    fn from(f: NondetMap) -> Self {
        let table = f
            .src
            .atoms()
            .iter()
            .zip(&f.table)
            .map(|(x, img)| {
                let mut ts: Vec<Target> = img.atoms.iter().map(|&a| Target::Atom(a)).collect();
                if img.star {
                    ts.push(Target::Star("*".into()));
                }
                (*x, ts)
            })
            .collect();
        NondetRepr {
            src: f.src,
            dst: f.dst,
            table,
        }
    }
}

impl TryFrom<NondetRepr> for NondetMap {
    type Error = Error;

    fn try_from(r: NondetRepr) -> Result<Self> {
        let pairs = r
            .table
            .into_iter()
            .map(|(x, ts)| {
                let mut atoms = Vec::new();
                let mut star = false;
                for t in ts {
                    match t {
                        Target::Atom(a) => atoms.push(a),
                        Target::Star(s) if s == "*" => star = true,
                        Target::Star(s) => {
                            return Err(Error::invalid("non-deterministic map", format!("bad target {s:?}")))
                        }
                    }
                }
                Ok((x, NdImage::new(atoms, star)?))
            })
            .collect::<Result<Vec<_>>>()?;
        NondetMap::new(r.src, r.dst, pairs)
    }
}

impl NondetMap {
    pub fn new(src: FiniteSet, dst: FiniteSet, pairs: impl IntoIterator<Item = (Atom, NdImage)>) -> Result<Self> {
        let mut table: Vec<Option<NdImage>> = vec![None; src.len()];
        for (x, img) in pairs {
            let i = src
                .index_of(x)
                .ok_or_else(|| Error::invalid("non-deterministic map", format!("{x} not in source")))?;
            if table[i].is_some() {
                return Err(Error::invalid("non-deterministic map", format!("two entries for {x}")));
            }
            if let Some(y) = img.atoms.iter().find(|y| !dst.contains(**y)) {
                return Err(Error::invalid("non-deterministic map", format!("{y} not in target")));
            }
            table[i] = Some(img);
        }
        let table = table
            .into_iter()
            .zip(src.atoms())
            .map(|(e, x)| e.ok_or_else(|| Error::invalid("non-deterministic map", format!("no entry for {x}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(NondetMap { src, dst, table })
    }

    pub fn from_fn(src: &FiniteSet, dst: &FiniteSet, f: impl Fn(Atom) -> NdImage) -> Result<Self> {
        NondetMap::new(src.clone(), dst.clone(), src.atoms().iter().map(|&x| (x, f(x))))
    }

    pub fn src(&self) -> &FiniteSet {
        &self.src
    }

    pub fn dst(&self) -> &FiniteSet {
        &self.dst
    }

    pub fn image(&self, x: Atom) -> &NdImage {
        &self.table[self.src.index_of(x).expect("atom outside source")]
    }

    pub fn identity(x: &FiniteSet) -> Self {
        NondetMap {
            src: x.clone(),
            dst: x.clone(),
            table: x.atoms().iter().map(|&a| NdImage::single(a)).collect(),
        }
    }

    /// `g ⊙ self`: union of `g`'s images, with `*` propagated.
    pub fn then(&self, g: &NondetMap) -> Result<NondetMap> {
        if self.dst != g.src {
            return Err(Error::Composition(format!(
                "target {} of first map differs from source {} of second",
                self.dst, g.src
            )));
        }
        let table = self
            .table
            .iter()
            .map(|img| {
                let mut atoms = BTreeSet::new();
                let mut star = img.star;
                for &y in &img.atoms {
                    let gy = g.image(y);
                    atoms.extend(gy.atoms.iter().copied());
                    star |= gy.star;
                }
                NdImage { atoms, star }
            })
            .collect();
        Ok(NondetMap {
            src: self.src.clone(),
            dst: g.dst.clone(),
            table,
        })
    }

    /// All non-empty subsets of `Y + 1` for every source atom, if few enough.
    pub fn enumerate(src: &FiniteSet, dst: &FiniteSet) -> Option<Vec<NondetMap>> {
        let images = all_images(dst)?;
        let choices = images.len() as u64;
        let count = choices.checked_pow(src.len() as u32)?;
        if count > ENUMERATION_LIMIT {
            return None;
        }
        let mut out = Vec::with_capacity(count as usize);
        for mut code in 0..count {
            let mut table = Vec::with_capacity(src.len());
            for _ in 0..src.len() {
                table.push(images[(code % choices) as usize].clone());
                code /= choices;
            }
            out.push(NondetMap {
                src: src.clone(),
                dst: dst.clone(),
                table,
            });
        }
        Some(out)
    }
}

fn all_images(dst: &FiniteSet) -> Option<Vec<NdImage>> {
    let n = dst.len();
    if n >= 16 {
        return None;
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << (n + 1)) {
        let atoms = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| dst.atoms()[i]).collect();
        out.push(NdImage {
            atoms,
            star: mask >> n & 1 == 1,
        });
    }
    Some(out)
}

/// `□(f)(Q) = {x | ∀y ∈ Y. y ∈ f(x) ⇒ y ∈ Q}`.
pub fn nondet_subst(f: &NondetMap, q: &FiniteSet) -> FiniteSet {
    f.src.filter(|x| f.image(x).atoms.iter().all(|y| q.contains(*y)))
}

/// Restriction of a hom `(P ⊆ X) → 0Y` to `¬P`.
///
/// The hom condition `P ⊆ □(f)(∅)` says `f(x) = {*}` for every `x ∈ P`.
pub fn nondet_transpose_quotient(x: &FiniteSet, p: &FiniteSet, f: &NondetMap) -> Result<NondetMap> {
    check_subset(p, x)?;
    if &f.src != x {
        return Err(Error::Composition("map source is not the predicate's object".into()));
    }
    if let Some(a) = p.atoms().iter().find(|&&a| !f.image(a).is_star()) {
        return Err(Error::NotAHom(format!("f({a}) ≠ {{*}} although {a} ∈ P")));
    }
    NondetMap::from_fn(&x.minus(p), &f.dst, |a| f.image(a).clone())
}

/// Extension of `g : ¬P → Y` by `{*}` on `P`.
pub fn nondet_untranspose(x: &FiniteSet, p: &FiniteSet, g: &NondetMap) -> Result<NondetMap> {
    check_subset(p, x)?;
    if g.src != x.minus(p) {
        return Err(Error::Composition("map source is not the quotient object".into()));
    }
    NondetMap::from_fn(x, &g.dst, |a| if p.contains(a) { NdImage::star() } else { g.image(a).clone() })
}

/// Closed form of `asrt_P`: `{x}` on `P`, `{*}` elsewhere.
pub fn nondet_assert(x: &FiniteSet, p: &FiniteSet) -> Result<NondetMap> {
    check_subset(p, x)?;
    NondetMap::from_fn(x, x, |a| if p.contains(a) { NdImage::single(a) } else { NdImage::star() })
}

/// Closed form of `instr_P`: `{κ₁x}` on `P`, `{κ₂x}` elsewhere.
pub fn nondet_instrument(x: &FiniteSet, p: &FiniteSet) -> Result<NondetInstrument> {
    check_subset(p, x)?;
    let table = x
        .atoms()
        .iter()
        .map(|&a| (a, BTreeSet::from([if p.contains(a) { Summand::Left(a) } else { Summand::Right(a) }])))
        .collect();
    Ok(NondetInstrument { src: x.clone(), table })
}

/// Instrument `X → P*(X + X)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NondetInstrument {
    pub src: FiniteSet,
    pub table: Vec<(Atom, BTreeSet<Summand<Atom>>)>,
}

/// Non-deterministic computation: Kleisli maps of the non-empty powerset monad, lifted.
#[derive(Debug, Clone, Copy, Default)]
pub struct NondetChain;

impl Chain for NondetChain {
    type Object = FiniteSet;
    type Pred = FiniteSet;
    type Map = NondetMap;

    fn name(&self) -> &'static str {
        "powerset"
    }

    fn same_object(&self, a: &FiniteSet, b: &FiniteSet) -> bool {
        a == b
    }

    fn src<'a>(&self, f: &'a NondetMap) -> &'a FiniteSet {
        &f.src
    }

    fn dst<'a>(&self, f: &'a NondetMap) -> &'a FiniteSet {
        &f.dst
    }

    fn identity(&self, x: &FiniteSet) -> NondetMap {
        NondetMap::identity(x)
    }

    fn compose(&self, g: &NondetMap, f: &NondetMap) -> Result<NondetMap> {
        f.then(g)
    }

    fn map_residual(&self, f: &NondetMap, g: &NondetMap) -> f64 {
        if f == g {
            0.0
        } else {
            1.0
        }
    }

    fn subst(&self, f: &NondetMap, q: &FiniteSet) -> FiniteSet {
        nondet_subst(f, q)
    }

    fn top(&self, x: &FiniteSet) -> FiniteSet {
        x.clone()
    }

    fn bottom(&self, _x: &FiniteSet) -> FiniteSet {
        FiniteSet::empty()
    }

    fn leq(&self, _x: &FiniteSet, p: &FiniteSet, q: &FiniteSet) -> bool {
        p.is_subset(q)
    }

    fn pred_residual(&self, p: &FiniteSet, q: &FiniteSet) -> f64 {
        if p == q {
            0.0
        } else {
            1.0
        }
    }

    fn ortho(&self, x: &FiniteSet, p: &FiniteSet) -> Option<FiniteSet> {
        Some(x.minus(p))
    }

    fn quotient(&self, x: &FiniteSet, p: &FiniteSet) -> Result<Quotient<FiniteSet, NondetMap>> {
        check_subset(p, x)?;
        let not_p = x.minus(p);
        let unit = NondetMap::from_fn(x, &not_p, |a| {
            if p.contains(a) {
                NdImage::star()
            } else {
                NdImage::single(a)
            }
        })?;
        Ok(Quotient { object: not_p, unit })
    }

    fn comprehension(&self, x: &FiniteSet, p: &FiniteSet) -> Result<Comprehension<FiniteSet, NondetMap>> {
        check_subset(p, x)?;
        Ok(Comprehension {
            object: p.clone(),
            counit: NondetMap::from_fn(p, x, NdImage::single)?,
        })
    }

    fn quotient_transpose(&self, x: &FiniteSet, p: &FiniteSet, f: &NondetMap) -> Result<NondetMap> {
        nondet_transpose_quotient(x, p, f)
    }

    fn quotient_untranspose(&self, x: &FiniteSet, p: &FiniteSet, g: &NondetMap) -> Result<NondetMap> {
        nondet_untranspose(x, p, g)
    }

    fn comprehension_transpose(&self, x: &FiniteSet, p: &FiniteSet, f: &NondetMap) -> Result<NondetMap> {
        check_subset(p, x)?;
        if &f.dst != x {
            return Err(Error::Composition("map target is not the predicate's object".into()));
        }
        if let Some(y) = f.table.iter().flat_map(|img| img.atoms.iter()).find(|y| !p.contains(**y)) {
            return Err(Error::NotAHom(format!("{y} is reachable but lies outside P")));
        }
        Ok(NondetMap {
            src: f.src.clone(),
            dst: p.clone(),
            table: f.table.clone(),
        })
    }
}

impl Measurement for NondetChain {
    type Instrument = NondetInstrument;

    fn pair_asserts(&self, x: &FiniteSet, on: &NondetMap, off: &NondetMap) -> Result<NondetInstrument> {
        let table = x
            .atoms()
            .iter()
            .map(|&a| {
                let set: BTreeSet<Summand<Atom>> = on
                    .image(a)
                    .atoms
                    .iter()
                    .map(|&b| Summand::Left(b))
                    .chain(off.image(a).atoms.iter().map(|&b| Summand::Right(b)))
                    .collect();
                if set.is_empty() {
                    return Err(Error::invalid("instrument", format!("both asserts diverge at {a}")));
                }
                Ok((a, set))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NondetInstrument { src: x.clone(), table })
    }

    fn codiagonal(&self, instr: &NondetInstrument) -> NondetMap {
        NondetMap {
            src: instr.src.clone(),
            dst: instr.src.clone(),
            table: instr
                .table
                .iter()
                .map(|(_, set)| NdImage {
                    atoms: set.iter().map(|s| s.merge()).collect(),
                    star: false,
                })
                .collect(),
        }
    }

    fn instrument_residual(&self, a: &NondetInstrument, b: &NondetInstrument) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }
}

fn random_image(rng: &mut CaseRng, y: &FiniteSet, allow_atoms: &FiniteSet) -> NdImage {
    loop {
        let atoms: BTreeSet<Atom> = y
            .atoms()
            .iter()
            .copied()
            .filter(|a| allow_atoms.contains(*a) && rng.gen_bool(0.4))
            .collect();
        let star = rng.gen_bool(0.4);
        if !atoms.is_empty() || star {
            return NdImage { atoms, star };
        }
    }
}

impl Sampler for NondetChain {
    fn sample_object(&self, rng: &mut CaseRng, b: &Bounds) -> Result<FiniteSet> {
        Ok(random_set(rng, b.max_set))
    }

    fn sample_pred(&self, rng: &mut CaseRng, x: &FiniteSet, _b: &Bounds) -> FiniteSet {
        random_subset(rng, x)
    }

    fn sample_map(&self, rng: &mut CaseRng, x: &FiniteSet, y: &FiniteSet, _b: &Bounds) -> NondetMap {
        NondetMap {
            src: x.clone(),
            dst: y.clone(),
            table: x.atoms().iter().map(|_| random_image(rng, y, y)).collect(),
        }
    }

    fn sample_quotient_hom(
        &self,
        rng: &mut CaseRng,
        x: &FiniteSet,
        p: &FiniteSet,
        y: &FiniteSet,
        _b: &Bounds,
    ) -> NondetMap {
        NondetMap {
            src: x.clone(),
            dst: y.clone(),
            table: x
                .atoms()
                .iter()
                .map(|&a| if p.contains(a) { NdImage::star() } else { random_image(rng, y, y) })
                .collect(),
        }
    }

    fn sample_comprehension_hom(
        &self,
        rng: &mut CaseRng,
        z: &FiniteSet,
        x: &FiniteSet,
        p: &FiniteSet,
        _b: &Bounds,
    ) -> NondetMap {
        NondetMap {
            src: z.clone(),
            dst: x.clone(),
            table: z.atoms().iter().map(|_| random_image(rng, x, p)).collect(),
        }
    }

    fn perturb_map(&self, rng: &mut CaseRng, f: &NondetMap, _b: &Bounds) -> Option<NondetMap> {
        if f.src.is_empty() {
            return None;
        }
        let images = all_images(&f.dst)?;
        let i = rng.gen_range(0..f.table.len());
        let others: Vec<&NdImage> = images.iter().filter(|img| **img != f.table[i]).collect();
        if others.is_empty() {
            return None;
        }
        let mut g = f.clone();
        g.table[i] = others[rng.gen_range(0..others.len())].clone();
        Some(g)
    }
}

impl Exhaustive for NondetChain {
    fn objects(&self, b: &Bounds) -> Vec<FiniteSet> {
        (0..=b.max_set as u32).map(FiniteSet::range).collect()
    }

    fn test_codomains(&self, _b: &Bounds) -> Vec<FiniteSet> {
        (0..=2).map(FiniteSet::range).collect()
    }

    fn preds(&self, x: &FiniteSet) -> Vec<FiniteSet> {
        x.subsets()
    }

    fn all_maps(&self, x: &FiniteSet, y: &FiniteSet) -> Option<Vec<NondetMap>> {
        NondetMap::enumerate(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{derive_assert, derive_instrument, side_effect};

    fn s(ids: &[u32]) -> FiniteSet {
        FiniteSet::from_ids(ids)
    }

    const A: Atom = Atom(10);
    const B: Atom = Atom(11);

    #[test]
    fn subst_examples() {
        let f = NondetMap::new(
            s(&[1, 2]),
            s(&[10, 11]),
            [(Atom(1), NdImage::new([A], true).unwrap()), (Atom(2), NdImage::single(B))],
        )
        .unwrap();
        assert_eq!(nondet_subst(&f, &s(&[10])), s(&[1]));
        assert_eq!(nondet_subst(&f, &s(&[10, 11])), s(&[1, 2]));
        let all_star = NondetMap::from_fn(&s(&[1, 2]), &s(&[10]), |_| NdImage::star()).unwrap();
        assert_eq!(nondet_subst(&all_star, &FiniteSet::empty()), s(&[1, 2]));
    }

    #[test]
    fn quotient_transposes() {
        let x = s(&[1, 2]);
        let p = s(&[1]);
        let y = s(&[10, 11]);
        let f = NondetMap::new(x.clone(), y.clone(), [(Atom(1), NdImage::star()), (Atom(2), NdImage::single(A))])
            .unwrap();
        let g = nondet_transpose_quotient(&x, &p, &f).unwrap();
        assert_eq!(g.src(), &s(&[2]));
        assert_eq!(g.image(Atom(2)), &NdImage::single(A));
        assert_eq!(nondet_untranspose(&x, &p, &g).unwrap(), f);

        let g = NondetMap::new(s(&[2]), y.clone(), [(Atom(2), NdImage::new([A, B], false).unwrap())]).unwrap();
        let f = nondet_untranspose(&x, &p, &g).unwrap();
        assert!(f.image(Atom(1)).is_star());
        assert_eq!(f.image(Atom(2)).atoms().len(), 2);

        // {a, *} on P is not a hom into 0Y
        let bad = NondetMap::new(
            x.clone(),
            y,
            [(Atom(1), NdImage::new([A], true).unwrap()), (Atom(2), NdImage::single(A))],
        )
        .unwrap();
        assert!(matches!(nondet_transpose_quotient(&x, &p, &bad), Err(Error::NotAHom(_))));
    }

    #[test]
    fn empty_image_rejected() {
        assert!(NdImage::new([], false).is_err());
    }

    #[test]
    fn instrument_is_deterministic_split() {
        let x = s(&[1, 2, 3]);
        let p = s(&[2]);
        let asrt = derive_assert(&NondetChain, &x, &p).unwrap();
        assert!(asrt.image(Atom(1)).is_star());
        assert_eq!(asrt.image(Atom(2)), &NdImage::single(Atom(2)));
        let instr = derive_instrument(&NondetChain, &x, &p).unwrap();
        assert_eq!(instr.table[1].1, BTreeSet::from([Summand::Left(Atom(2))]));
        assert_eq!(instr.table[0].1, BTreeSet::from([Summand::Right(Atom(1))]));
        assert!(side_effect(&NondetChain, &x, &p).unwrap().free);
    }

    #[test]
    fn json_lists_star_last() {
        let f = NondetMap::new(s(&[1]), s(&[10]), [(Atom(1), NdImage::new([A], true).unwrap())]).unwrap();
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"src":[1],"dst":[10],"table":[[1,[10,"*"]]]}"#);
        assert_eq!(serde_json::from_str::<NondetMap>(&j).unwrap(), f);
    }
}
