use serde::{Deserialize, Serialize};

use super::{Elem, RingObj};
use crate::discrete::ENUMERATION_LIMIT;
use crate::error::{Error, Result};

/// A map `X → Y` of the chain: a subunital ring map `uY·R_Y → uX·R_X`.
///
/// Stored as `y ↦ f(uY·y)` over the whole ambient ring of `Y`, so two maps
/// are equal iff their tables are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct SubunitalMap {
    src: RingObj,
    dst: RingObj,
    table: Vec<Elem>,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    src: RingObj,
    dst: RingObj,
    /// Pairs `[y, f(y)]` over the carrier of `dst`.
    table: Vec<(Elem, Elem)>,
}

impl From<SubunitalMap> for MapRepr {
    fn from(f: SubunitalMap) -> Self {
        let table = f.dst.carrier().into_iter().map(|y| (y, f.apply(y))).collect();
        MapRepr {
            src: f.src,
            dst: f.dst,
            table,
        }
    }
}

impl TryFrom<MapRepr> for SubunitalMap {
    type Error = Error;

    fn try_from(r: MapRepr) -> Result<Self> {
        let lookup = |y: Elem| r.table.iter().find(|(a, _)| *a == y).map(|(_, b)| *b);
        if let Some(y) = r.dst.carrier().into_iter().find(|&y| lookup(y).is_none()) {
            return Err(Error::invalid("subunital map", format!("no entry for {y}")));
        }
        SubunitalMap::new(&r.src, &r.dst, |y| lookup(y).expect("checked above"))
    }
}

impl SubunitalMap {
    /// Validates additivity, multiplicativity and that values land in `src`.
    pub fn new(src: &RingObj, dst: &RingObj, f: impl Fn(Elem) -> Elem) -> Result<Self> {
        let map = SubunitalMap::from_fn_unchecked(src, dst, f);
        map.validate()?;
        Ok(map)
    }

    pub(crate) fn from_fn_unchecked(src: &RingObj, dst: &RingObj, f: impl Fn(Elem) -> Elem) -> Self {
        let s = dst.ring();
        let table = s.elements().iter().map(|&y| f(s.mul(dst.unit(), y))).collect();
        SubunitalMap {
            src: src.clone(),
            dst: dst.clone(),
            table,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (r, s) = (self.src.ring(), self.dst.ring());
        let c = self.dst.carrier();
        for &a in &c {
            let fa = self.apply(a);
            if !self.src.contains(fa) {
                return Err(Error::invalid("subunital map", format!("f({a}) = {fa} lies outside {}", self.src)));
            }
            for &b in &c {
                if self.apply(s.add(a, b)) != r.add(fa, self.apply(b)) {
                    return Err(Error::invalid("subunital map", format!("not additive at {a}, {b}")));
                }
                if self.apply(s.mul(a, b)) != r.mul(fa, self.apply(b)) {
                    return Err(Error::invalid("subunital map", format!("not multiplicative at {a}, {b}")));
                }
            }
        }
        Ok(())
    }

    pub fn src(&self) -> &RingObj {
        &self.src
    }

    pub fn dst(&self) -> &RingObj {
        &self.dst
    }

    /// `f(uY·y)` for any `y` of the ambient ring of `dst`.
    pub fn apply(&self, y: Elem) -> Elem {
        self.table[self.dst.ring().index(y) as usize]
    }

    pub fn identity(x: &RingObj) -> Self {
        SubunitalMap::from_fn_unchecked(x, x, |a| a)
    }

    /// `g ⊙ self`, whose ring map is `self ∘ g`.
    pub fn then(&self, g: &SubunitalMap) -> Result<SubunitalMap> {
        if self.dst != g.src {
            return Err(Error::Composition(format!(
                "target {} of first map differs from source {} of second",
                self.dst, g.src
            )));
        }
        Ok(SubunitalMap::from_fn_unchecked(&self.src, &g.dst, |z| self.apply(g.apply(z))))
    }

    /// Reinterprets the same values with new endpoints; the caller guarantees validity.
    pub(crate) fn retarget(&self, src: &RingObj, dst: &RingObj) -> SubunitalMap {
        SubunitalMap::from_fn_unchecked(src, dst, |y| self.apply(y))
    }

    /// Every subunital map `X → Y`, or `None` past the enumeration limit.
    ///
    /// An additive map out of `uY·R_Y` is fixed by the images of its cyclic
    /// generators, each of which must be killed by the generator's order;
    /// multiplicativity is then checked on all pairs.
    pub fn enumerate(src: &RingObj, dst: &RingObj) -> Option<Vec<SubunitalMap>> {
        let (r, s) = (src.ring(), dst.ring());
        let gens = dst.generators();
        let targets = src.carrier();
        let choices: Vec<Vec<Elem>> = gens
            .iter()
            .map(|&(_, d)| targets.iter().copied().filter(|&a| r.scale(d, a) == r.zero()).collect())
            .collect();
        let total = choices
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64).filter(|&t| t <= ENUMERATION_LIMIT))?;

        let carrier = dst.carrier();
        // coordinates k with y = Σ k_i·g_i
        let coords: Vec<Vec<u32>> = carrier
            .iter()
            .map(|&y| {
                gens.iter()
                    .map(|&(g, d)| {
                        let i = g.residues().iter().position(|&x| x != 0).expect("generator is non-zero");
                        (0..d)
                            .find(|&k| s.scale(k, g).residues()[i] == y.residues()[i])
                            .expect("carrier element is a combination of generators")
                    })
                    .collect()
            })
            .collect();

        let mut out = Vec::new();
        let mut pick = vec![0usize; gens.len()];
        for _ in 0..total {
            let values: Vec<Elem> = coords
                .iter()
                .map(|k| {
                    k.iter()
                        .zip(&pick)
                        .zip(&choices)
                        .fold(r.zero(), |acc, ((&ki, &pi), c)| r.add(acc, r.scale(ki, c[pi])))
                })
                .collect();
            let at = |y: Elem| values[carrier.binary_search(&y).expect("carrier is sorted")];
            let multiplicative = carrier
                .iter()
                .enumerate()
                .all(|(i, &a)| carrier.iter().enumerate().all(|(j, &b)| at(s.mul(a, b)) == r.mul(values[i], values[j])));
            if multiplicative {
                out.push(SubunitalMap::from_fn_unchecked(src, dst, at));
            }
            for (p, c) in pick.iter_mut().zip(&choices) {
                *p += 1;
                if *p < c.len() {
                    break;
                }
                *p = 0;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ring_subst, FiniteRing};

    #[test]
    fn subst_example() {
        let r = FiniteRing::cyclic(6).unwrap();
        let x = RingObj::whole(&r);
        let f = SubunitalMap::new(&x, &x, |a| r.mul(r.int(3), a)).unwrap();
        assert_eq!(ring_subst(&f, r.one()), r.one());
        assert_eq!(ring_subst(&f, r.zero()), r.int(4));
        let id = SubunitalMap::identity(&x);
        assert_eq!(ring_subst(&id, r.int(3)), r.int(3));
    }

    #[test]
    fn enumeration_of_z6_endomaps() {
        let r = FiniteRing::cyclic(6).unwrap();
        let x = RingObj::whole(&r);
        let all = SubunitalMap::enumerate(&x, &x).unwrap();
        // multiplication by each idempotent
        assert_eq!(all.len(), 4);
        for f in &all {
            f.validate().unwrap();
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // every function on the carrier, filtered by the ring-map laws
        let r = FiniteRing::new(&[2, 2]).unwrap();
        let s = FiniteRing::cyclic(4).unwrap();
        let x = RingObj::whole(&s);
        let y = RingObj::whole(&r);
        let targets = x.carrier();
        let domain = y.carrier();
        let mut brute = 0;
        for code in 0..targets.len().pow(domain.len() as u32) {
            let mut c = code;
            let vals: Vec<Elem> = domain
                .iter()
                .map(|_| {
                    let v = targets[c % targets.len()];
                    c /= targets.len();
                    v
                })
                .collect();
            let f = |a: Elem| vals[domain.iter().position(|&d| d == a).unwrap()];
            if SubunitalMap::new(&x, &y, f).is_ok() {
                brute += 1;
            }
        }
        assert_eq!(SubunitalMap::enumerate(&x, &y).unwrap().len(), brute);
    }

    #[test]
    fn rejects_non_multiplicative() {
        let r = FiniteRing::cyclic(6).unwrap();
        let x = RingObj::whole(&r);
        assert!(SubunitalMap::new(&x, &x, |a| r.mul(r.int(2), a)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = FiniteRing::cyclic(6).unwrap();
        let x = RingObj::whole(&r);
        let f = SubunitalMap::new(&x, &x, |a| r.mul(r.int(3), a)).unwrap();
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<SubunitalMap>(&j).unwrap(), f);
    }
}
