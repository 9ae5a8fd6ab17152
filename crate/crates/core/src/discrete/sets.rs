use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_subset, Atom, FiniteSet, Target, ENUMERATION_LIMIT};
use crate::chain::{Chain, Comprehension, Measurement, Quotient, Summand};
use crate::error::{Error, Result};
use crate::harness::{Bounds, CaseRng, Exhaustive, Sampler};

/// A partial function `X → Y`, stored as a total map `X → Y + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartialFnRepr", into = "PartialFnRepr")]
pub struct PartialFn {
    src: FiniteSet,
    dst: FiniteSet,
    /// Aligned with `src.atoms()`; `None` is the bottom element `*`.
    table: Vec<Option<Atom>>,
}

#[derive(Serialize, Deserialize)]
struct PartialFnRepr {
    src: FiniteSet,
    dst: FiniteSet,
    table: Vec<(Atom, Target)>,
}

impl From<PartialFn> for PartialFnRepr {
    fn from(f: PartialFn) -> Self {
        let table = f
            .src
            .atoms()
            .iter()
            .zip(&f.table)
            .map(|(x, y)| (*x, y.map_or_else(|| Target::Star("*".into()), Target::Atom)))
            .collect();
        PartialFnRepr {
            src: f.src,
            dst: f.dst,
            table,
        }
    }
}

impl TryFrom<PartialFnRepr> for PartialFn {
    type Error = Error;

    fn try_from(r: PartialFnRepr) -> Result<Self> {
        let pairs = r
            .table
            .into_iter()
            .map(|(x, t)| match t {
                Target::Atom(a) => Ok((x, Some(a))),
                Target::Star(s) if s == "*" => Ok((x, None)),
                Target::Star(s) => Err(Error::invalid("partial function", format!("bad target {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        PartialFn::new(r.src, r.dst, pairs)
    }
}

impl PartialFn {
    /// Builds a partial function from `(x, f(x))` pairs; every source atom needs exactly one entry.
    pub fn new(
        src: FiniteSet,
        dst: FiniteSet,
        pairs: impl IntoIterator<Item = (Atom, Option<Atom>)>,
    ) -> Result<Self> {
        let mut table: Vec<Option<Option<Atom>>> = vec![None; src.len()];
        for (x, y) in pairs {
            let i = src
                .index_of(x)
                .ok_or_else(|| Error::invalid("partial function", format!("{x} not in source")))?;
            if table[i].is_some() {
                return Err(Error::invalid("partial function", format!("two entries for {x}")));
            }
            if let Some(y) = y {
                if !dst.contains(y) {
                    return Err(Error::invalid("partial function", format!("{y} not in target")));
                }
            }
            table[i] = Some(y);
        }
        let table = table
            .into_iter()
            .zip(src.atoms())
            .map(|(e, x)| e.ok_or_else(|| Error::invalid("partial function", format!("no entry for {x}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(PartialFn { src, dst, table })
    }

    pub fn from_fn(src: &FiniteSet, dst: &FiniteSet, f: impl Fn(Atom) -> Option<Atom>) -> Result<Self> {
        PartialFn::new(src.clone(), dst.clone(), src.atoms().iter().map(|&x| (x, f(x))))
    }

    pub fn src(&self) -> &FiniteSet {
        &self.src
    }

    pub fn dst(&self) -> &FiniteSet {
        &self.dst
    }

    /// `f(x)`, with `None` standing for `*`.
    ///
    /// Panics if `x` is not in the source.
    pub fn image(&self, x: Atom) -> Option<Atom> {
        let i = self.src.index_of(x).expect("atom outside source");
        self.table[i]
    }

    pub fn entries(&self) -> impl Iterator<Item = (Atom, Option<Atom>)> + '_ {
        self.src.atoms().iter().copied().zip(self.table.iter().copied())
    }

    /// The coprojection `κ₁ : X → X + 1` viewed as the identity partial map.
    pub fn identity(x: &FiniteSet) -> Self {
        PartialFn {
            src: x.clone(),
            dst: x.clone(),
            table: x.atoms().iter().map(|&a| Some(a)).collect(),
        }
    }

    /// `g ⊙ self`.
    pub fn then(&self, g: &PartialFn) -> Result<PartialFn> {
        if self.dst != g.src {
            return Err(Error::Composition(format!(
                "target {} of first map differs from source {} of second",
                self.dst, g.src
            )));
        }
        Ok(PartialFn {
            src: self.src.clone(),
            dst: g.dst.clone(),
            table: self.table.iter().map(|y| y.and_then(|y| g.image(y))).collect(),
        })
    }

    /// Every partial function `X → Y`, or `None` if there are more than the enumeration limit.
    pub fn enumerate(src: &FiniteSet, dst: &FiniteSet) -> Option<Vec<PartialFn>> {
        let choices = dst.len() as u64 + 1;
        let count = choices.checked_pow(src.len() as u32)?;
        if count > ENUMERATION_LIMIT {
            return None;
        }
        let options: Vec<Option<Atom>> = std::iter::once(None).chain(dst.atoms().iter().map(|&a| Some(a))).collect();
        let mut out = Vec::with_capacity(count as usize);
        for mut code in 0..count {
            let mut table = Vec::with_capacity(src.len());
            for _ in 0..src.len() {
                table.push(options[(code % choices) as usize]);
                code /= choices;
            }
            out.push(PartialFn {
                src: src.clone(),
                dst: dst.clone(),
                table,
            });
        }
        Some(out)
    }
}

/// `□(f)(Q) = f⁻¹(Q ∪ {*})`.
pub fn sets_subst(f: &PartialFn, q: &FiniteSet) -> FiniteSet {
    f.src.filter(|x| f.image(x).is_none_or(|y| q.contains(y)))
}

/// Quotient `¬P = X ∖ P` with unit `ξ_P` sending `P` to `*` and `¬P` to itself.
pub fn sets_quotient(x: &FiniteSet, p: &FiniteSet) -> Result<Quotient<FiniteSet, PartialFn>> {
    check_subset(p, x)?;
    let not_p = x.minus(p);
    let unit = PartialFn::from_fn(x, &not_p, |a| (!p.contains(a)).then_some(a))?;
    Ok(Quotient { object: not_p, unit })
}

/// Comprehension `P` with counit the inclusion `π_P : P → X`.
pub fn sets_comprehension(x: &FiniteSet, p: &FiniteSet) -> Result<Comprehension<FiniteSet, PartialFn>> {
    check_subset(p, x)?;
    let counit = PartialFn::from_fn(p, x, Some)?;
    Ok(Comprehension {
        object: p.clone(),
        counit,
    })
}

/// Closed form of `asrt_P`: `x ↦ x` on `P`, `*` elsewhere.
pub fn sets_assert(x: &FiniteSet, p: &FiniteSet) -> Result<PartialFn> {
    check_subset(p, x)?;
    PartialFn::from_fn(x, x, |a| p.contains(a).then_some(a))
}

/// A total map `X → X + X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetsInstrument {
    pub src: FiniteSet,
    pub table: Vec<(Atom, Summand<Atom>)>,
}

impl SetsInstrument {
    pub fn image(&self, x: Atom) -> Option<Summand<Atom>> {
        self.table.iter().find(|(a, _)| *a == x).map(|(_, s)| *s)
    }
}

/// Closed form of `instr_P`: `κ₁x` if `x ∈ P`, `κ₂x` otherwise.
pub fn sets_instrument(x: &FiniteSet, p: &FiniteSet) -> Result<SetsInstrument> {
    check_subset(p, x)?;
    Ok(SetsInstrument {
        src: x.clone(),
        table: x
            .atoms()
            .iter()
            .map(|&a| (a, if p.contains(a) { Summand::Left(a) } else { Summand::Right(a) }))
            .collect(),
    })
}

/// Sets and partial functions.
#[derive(Debug, Clone, Copy, Default)]
pub struct SetsChain;

impl Chain for SetsChain {
    type Object = FiniteSet;
    type Pred = FiniteSet;
    type Map = PartialFn;

    fn name(&self) -> &'static str {
        "sets"
    }

    fn same_object(&self, a: &FiniteSet, b: &FiniteSet) -> bool {
        a == b
    }

    fn src<'a>(&self, f: &'a PartialFn) -> &'a FiniteSet {
        &f.src
    }

    fn dst<'a>(&self, f: &'a PartialFn) -> &'a FiniteSet {
        &f.dst
    }

    fn identity(&self, x: &FiniteSet) -> PartialFn {
        PartialFn::identity(x)
    }

    fn compose(&self, g: &PartialFn, f: &PartialFn) -> Result<PartialFn> {
        f.then(g)
    }

    fn map_residual(&self, f: &PartialFn, g: &PartialFn) -> f64 {
        if f == g {
            0.0
        } else {
            1.0
        }
    }

    fn subst(&self, f: &PartialFn, q: &FiniteSet) -> FiniteSet {
        sets_subst(f, q)
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

    fn quotient(&self, x: &FiniteSet, p: &FiniteSet) -> Result<Quotient<FiniteSet, PartialFn>> {
        sets_quotient(x, p)
    }

    fn comprehension(&self, x: &FiniteSet, p: &FiniteSet) -> Result<Comprehension<FiniteSet, PartialFn>> {
        sets_comprehension(x, p)
    }

    /// Restriction of `f` to `¬P`.
    fn quotient_transpose(&self, x: &FiniteSet, p: &FiniteSet, f: &PartialFn) -> Result<PartialFn> {
        check_subset(p, x)?;
        if &f.src != x {
            return Err(Error::Composition("map source is not the predicate's object".into()));
        }
        if let Some(a) = p.atoms().iter().find(|&&a| f.image(a).is_some()) {
            return Err(Error::NotAHom(format!("f({a}) is defined although {a} ∈ P")));
        }
        PartialFn::from_fn(&x.minus(p), &f.dst, |a| f.image(a))
    }

    /// Extension of `g` by `*` on `P`.
    fn quotient_untranspose(&self, x: &FiniteSet, p: &FiniteSet, g: &PartialFn) -> Result<PartialFn> {
        check_subset(p, x)?;
        if g.src != x.minus(p) {
            return Err(Error::Composition("map source is not the quotient object".into()));
        }
        PartialFn::from_fn(x, &g.dst, |a| if p.contains(a) { None } else { g.image(a) })
    }

    /// Corestriction of `f` to `P + 1`.
    fn comprehension_transpose(&self, x: &FiniteSet, p: &FiniteSet, f: &PartialFn) -> Result<PartialFn> {
        check_subset(p, x)?;
        if &f.dst != x {
            return Err(Error::Composition("map target is not the predicate's object".into()));
        }
        if let Some((z, y)) = f.entries().find(|(_, y)| y.is_some_and(|y| !p.contains(y))) {
            return Err(Error::NotAHom(format!("f({z}) = {} lies outside P", y.unwrap())));
        }
        PartialFn::from_fn(&f.src, p, |a| f.image(a))
    }
}

impl Measurement for SetsChain {
    type Instrument = SetsInstrument;

    fn pair_asserts(&self, x: &FiniteSet, on: &PartialFn, off: &PartialFn) -> Result<SetsInstrument> {
        let table = x
            .atoms()
            .iter()
            .map(|&a| match (on.image(a), off.image(a)) {
                (Some(b), None) => Ok((a, Summand::Left(b))),
                (None, Some(b)) => Ok((a, Summand::Right(b))),
                _ => Err(Error::invalid(
                    "instrument",
                    format!("asserts at {a} are not complementary"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SetsInstrument { src: x.clone(), table })
    }

    fn codiagonal(&self, instr: &SetsInstrument) -> PartialFn {
        PartialFn {
            src: instr.src.clone(),
            dst: instr.src.clone(),
            table: instr.table.iter().map(|(_, s)| Some(s.merge())).collect(),
        }
    }

    fn instrument_residual(&self, a: &SetsInstrument, b: &SetsInstrument) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }
}

pub(crate) fn random_set(rng: &mut CaseRng, max: usize) -> FiniteSet {
    let n = rng.gen_range(0..=max);
    let pool = 2 * max as u32 + 2;
    let mut ids: Vec<u32> = (0..pool).collect();
    for i in 0..n {
        let j = rng.gen_range(i..ids.len());
        ids.swap(i, j);
    }
    FiniteSet::from_ids(&ids[..n])
}

pub(crate) fn random_subset(rng: &mut CaseRng, x: &FiniteSet) -> FiniteSet {
    x.filter(|_| rng.gen_bool(0.5))
}

fn random_target(rng: &mut CaseRng, y: &FiniteSet) -> Option<Atom> {
    let k = rng.gen_range(0..=y.len());
    (k < y.len()).then(|| y.atoms()[k])
}

impl Sampler for SetsChain {
    fn sample_object(&self, rng: &mut CaseRng, b: &Bounds) -> Result<FiniteSet> {
        Ok(random_set(rng, b.max_set))
    }

    fn sample_pred(&self, rng: &mut CaseRng, x: &FiniteSet, _b: &Bounds) -> FiniteSet {
        random_subset(rng, x)
    }

    fn sample_map(&self, rng: &mut CaseRng, x: &FiniteSet, y: &FiniteSet, _b: &Bounds) -> PartialFn {
        let table = x.atoms().iter().map(|_| random_target(rng, y)).collect();
        PartialFn {
            src: x.clone(),
            dst: y.clone(),
            table,
        }
    }

    fn sample_quotient_hom(
        &self,
        rng: &mut CaseRng,
        x: &FiniteSet,
        p: &FiniteSet,
        y: &FiniteSet,
        _b: &Bounds,
    ) -> PartialFn {
        let table = x
            .atoms()
            .iter()
            .map(|&a| if p.contains(a) { None } else { random_target(rng, y) })
            .collect();
        PartialFn {
            src: x.clone(),
            dst: y.clone(),
            table,
        }
    }

    fn sample_comprehension_hom(
        &self,
        rng: &mut CaseRng,
        z: &FiniteSet,
        x: &FiniteSet,
        p: &FiniteSet,
        _b: &Bounds,
    ) -> PartialFn {
        let table = z.atoms().iter().map(|_| random_target(rng, p)).collect();
        PartialFn {
            src: z.clone(),
            dst: x.clone(),
            table,
        }
    }

    fn perturb_map(&self, rng: &mut CaseRng, f: &PartialFn, _b: &Bounds) -> Option<PartialFn> {
        if f.src.is_empty() {
            return None;
        }
        let options: Vec<Option<Atom>> = std::iter::once(None).chain(f.dst.atoms().iter().map(|&a| Some(a))).collect();
        if options.len() < 2 {
            return None;
        }
        let i = rng.gen_range(0..f.table.len());
        let mut g = f.clone();
        let others: Vec<Option<Atom>> = options.into_iter().filter(|o| *o != f.table[i]).collect();
        g.table[i] = others[rng.gen_range(0..others.len())];
        Some(g)
    }
}

impl Exhaustive for SetsChain {
    fn objects(&self, b: &Bounds) -> Vec<FiniteSet> {
        (0..=b.max_set as u32).map(FiniteSet::range).collect()
    }

    fn test_codomains(&self, _b: &Bounds) -> Vec<FiniteSet> {
        (0..=2).map(FiniteSet::range).collect()
    }

    fn preds(&self, x: &FiniteSet) -> Vec<FiniteSet> {
        x.subsets()
    }

    fn all_maps(&self, x: &FiniteSet, y: &FiniteSet) -> Option<Vec<PartialFn>> {
        PartialFn::enumerate(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{derive_assert, derive_instrument, hom_check, side_effect, truth, PredObject};

    fn s(ids: &[u32]) -> FiniteSet {
        FiniteSet::from_ids(ids)
    }

    // atoms 10, 11 stand for a, b
    const A: u32 = 10;
    const B: u32 = 11;

    #[test]
    fn compose_follows_the_kleisli_rule() {
        let f = PartialFn::new(s(&[1, 2]), s(&[A]), [(Atom(1), Some(Atom(A))), (Atom(2), None)]).unwrap();
        let g = PartialFn::new(s(&[A]), s(&[99]), [(Atom(A), Some(Atom(99)))]).unwrap();
        let h = SetsChain.compose(&g, &f).unwrap();
        assert_eq!(h.image(Atom(1)), Some(Atom(99)));
        assert_eq!(h.image(Atom(2)), None);
        assert_eq!(SetsChain.compose(&SetsChain.identity(&s(&[A])), &f).unwrap(), f);
        assert!(SetsChain.compose(&f, &f).is_err());
    }

    #[test]
    fn hom_check_uses_preimage() {
        let f = PartialFn::new(s(&[1, 2]), s(&[A]), [(Atom(1), Some(Atom(A))), (Atom(2), None)]).unwrap();
        let src = PredObject { base: s(&[1, 2]), pred: s(&[1]) };
        let dst = PredObject { base: s(&[A]), pred: s(&[A]) };
        assert!(hom_check(&SetsChain, &f, &src, &dst).unwrap());
        assert!(hom_check(&SetsChain, &f, &src, &truth(&SetsChain, &s(&[A]))).unwrap());
    }

    #[test]
    fn subst_examples() {
        let f = PartialFn::new(
            s(&[1, 2, 3]),
            s(&[A, B]),
            [(Atom(1), Some(Atom(A))), (Atom(2), None), (Atom(3), Some(Atom(B)))],
        )
        .unwrap();
        assert_eq!(sets_subst(&f, &s(&[A])), s(&[1, 2]));
        assert_eq!(sets_subst(&f, &s(&[A, B])), s(&[1, 2, 3]));
        let total = PartialFn::from_fn(&s(&[1, 2]), &s(&[A]), |_| Some(Atom(A))).unwrap();
        assert_eq!(sets_subst(&total, &FiniteSet::empty()), FiniteSet::empty());
    }

    #[test]
    fn quotient_examples() {
        let q = sets_quotient(&s(&[1, 2, 3]), &s(&[1])).unwrap();
        assert_eq!(q.object, s(&[2, 3]));
        assert_eq!(q.unit.image(Atom(1)), None);
        assert_eq!(q.unit.image(Atom(2)), Some(Atom(2)));
        assert_eq!(q.unit.image(Atom(3)), Some(Atom(3)));

        let x = s(&[1, 2, 3]);
        let q = sets_quotient(&x, &FiniteSet::empty()).unwrap();
        assert_eq!(q.object, x);
        assert_eq!(q.unit, PartialFn::identity(&x));

        let q = sets_quotient(&x, &x).unwrap();
        assert!(q.object.is_empty());
        assert!(q.unit.entries().all(|(_, y)| y.is_none()));

        assert!(sets_quotient(&x, &s(&[7])).is_err());
    }

    #[test]
    fn comprehension_examples() {
        let c = sets_comprehension(&s(&[1, 2]), &s(&[1])).unwrap();
        assert_eq!(c.counit.image(Atom(1)), Some(Atom(1)));
        let c = sets_comprehension(&s(&[1, 2]), &s(&[1, 2])).unwrap();
        assert_eq!(c.counit, PartialFn::identity(&s(&[1, 2])));

        // factorization through π_P is the unique restriction
        let x = s(&[1, 2]);
        let p = s(&[1]);
        let f = PartialFn::new(s(&[50]), x.clone(), [(Atom(50), Some(Atom(1)))]).unwrap();
        let g = SetsChain.comprehension_transpose(&x, &p, &f).unwrap();
        assert_eq!(g.image(Atom(50)), Some(Atom(1)));
        let c = sets_comprehension(&x, &p).unwrap();
        assert_eq!(SetsChain.compose(&c.counit, &g).unwrap(), f);
        let solutions = PartialFn::enumerate(&s(&[50]), &p)
            .unwrap()
            .into_iter()
            .filter(|h| SetsChain.compose(&c.counit, h).unwrap() == f)
            .count();
        assert_eq!(solutions, 1);
    }

    #[test]
    fn assert_and_instrument_match_closed_forms() {
        let x = s(&[1, 2, 3]);
        let p = s(&[1, 2]);
        let asrt = derive_assert(&SetsChain, &x, &p).unwrap();
        assert_eq!(asrt.image(Atom(1)), Some(Atom(1)));
        assert_eq!(asrt.image(Atom(3)), None);
        assert_eq!(asrt, sets_assert(&x, &p).unwrap());

        let x = s(&[1, 2]);
        let p = s(&[1]);
        let instr = derive_instrument(&SetsChain, &x, &p).unwrap();
        assert_eq!(instr.image(Atom(1)), Some(Summand::Left(Atom(1))));
        assert_eq!(instr.image(Atom(2)), Some(Summand::Right(Atom(2))));
        assert_eq!(instr, sets_instrument(&x, &p).unwrap());
        assert!(side_effect(&SetsChain, &x, &p).unwrap().free);
    }

    #[test]
    fn json_uses_star_for_bottom() {
        let f = PartialFn::new(s(&[1, 2]), s(&[A]), [(Atom(1), Some(Atom(A))), (Atom(2), None)]).unwrap();
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"src":[1,2],"dst":[10],"table":[[1,10],[2,"*"]]}"#);
        let back: PartialFn = serde_json::from_str(&j).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<PartialFn>(r#"{"src":[1],"dst":[],"table":[[1,"?"]]}"#).is_err());
    }
}
