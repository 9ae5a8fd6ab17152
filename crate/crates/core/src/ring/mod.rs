//! Finite commutative rings `Z_{n₁} × … × Z_{n_k}` with subunital maps.
//!
//! An object of the chain is a corner `uR` of an ambient ring, for an
//! idempotent `u`; `uR` is itself a ring with unit `u`. Maps point in the
//! direction of computation, so a map `X → Y` is a subunital ring map
//! `uY·R_Y → uX·R_X`.

mod chain;
mod maps;

pub use chain::{moduli_up_to, RingChain};
pub use maps::SubunitalMap;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::{Comprehension, Quotient};
use crate::error::{Error, Result};

/// Largest number of cyclic factors in a ring.
pub const MAX_FACTORS: usize = 6;
/// Largest ring order accepted.
pub const MAX_ORDER: u32 = 1024;

/// A ring element as its residue tuple. Serializes as an array of residues.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem {
    res: [u8; MAX_FACTORS],
    len: u8,
}

impl Elem {
    pub fn residues(&self) -> &[u8] {
        &self.res[..self.len as usize]
    }

    fn from_residues(rs: &[u32]) -> Option<Elem> {
        if rs.len() > MAX_FACTORS {
            return None;
        }
        let mut res = [0u8; MAX_FACTORS];
        for (slot, &r) in res.iter_mut().zip(rs) {
            *slot = u8::try_from(r).ok()?;
        }
        Some(Elem { res, len: rs.len() as u8 })
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.residues() {
            [r] => write!(f, "{r}"),
            rs => {
                write!(f, "(")?;
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{r}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.residues().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rs = Vec::<u32>::deserialize(d)?;
        Elem::from_residues(&rs).ok_or_else(|| serde::de::Error::custom("residue tuple too long or too large"))
    }
}

struct Tables {
    order: u32,
    elems: Vec<Elem>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

/// `Z_{n₁} × … × Z_{n_k}`; elements are indexed in mixed radix with the first modulus most significant.
#[derive(Clone)]
pub struct FiniteRing {
    moduli: Vec<u32>,
    tables: Arc<Tables>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.moduli == other.moduli
    }
}

impl Eq for FiniteRing {}

impl std::hash::Hash for FiniteRing {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.moduli.hash(state)
    }
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "0");
        }
        for (i, n) in self.moduli.iter().enumerate() {
            if i > 0 {
                write!(f, "×")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

impl Serialize for FiniteRing {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.moduli.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteRing {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let moduli = Vec::<u32>::deserialize(d)?;
        FiniteRing::new(&moduli).map_err(serde::de::Error::custom)
    }
}

impl FiniteRing {
    pub fn new(moduli: &[u32]) -> Result<Self> {
        if moduli.len() > MAX_FACTORS {
            return Err(Error::invalid("ring", format!("more than {MAX_FACTORS} factors")));
        }
        if let Some(n) = moduli.iter().find(|&&n| !(2..=255).contains(&n)) {
            return Err(Error::invalid("ring", format!("modulus {n} outside 2..=255")));
        }
        let order = moduli.iter().try_fold(1u32, |acc, &n| acc.checked_mul(n).filter(|&o| o <= MAX_ORDER));
        let order = order.ok_or_else(|| Error::invalid("ring", format!("order exceeds {MAX_ORDER}")))?;

        let decode = |mut i: u32| {
            let mut rs = vec![0u32; moduli.len()];
            for (slot, &n) in rs.iter_mut().zip(moduli).rev() {
                *slot = i % n;
                i /= n;
            }
            rs
        };
        let encode = |rs: &[u32]| rs.iter().zip(moduli).fold(0u32, |acc, (&r, &n)| acc * n + r);
        let residues: Vec<Vec<u32>> = (0..order).map(decode).collect();
        let elems = residues
            .iter()
            .map(|rs| Elem::from_residues(rs).expect("moduli fit in u8"))
            .collect();
        let n = order as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (&residues[i], &residues[j]);
                let s: Vec<u32> = a.iter().zip(b).zip(moduli).map(|((x, y), m)| (x + y) % m).collect();
                let p: Vec<u32> = a.iter().zip(b).zip(moduli).map(|((x, y), m)| (x * y) % m).collect();
                add[i * n + j] = encode(&s);
                mul[i * n + j] = encode(&p);
            }
        }
        let neg = residues
            .iter()
            .map(|a| encode(&a.iter().zip(moduli).map(|(x, m)| (m - x) % m).collect::<Vec<_>>()))
            .collect();
        Ok(FiniteRing {
            moduli: moduli.to_vec(),
            tables: Arc::new(Tables {
                order,
                elems,
                add,
                mul,
                neg,
            }),
        })
    }

    /// `Z_n`.
    pub fn cyclic(n: u32) -> Result<Self> {
        FiniteRing::new(&[n])
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn order(&self) -> u32 {
        self.tables.order
    }

    /// Position of `a` in the mixed-radix enumeration. Panics if `a` is not an element.
    pub fn index(&self, a: Elem) -> u32 {
        assert!(self.contains(a), "{a} is not an element of {self}");
        a.residues()
            .iter()
            .zip(&self.moduli)
            .fold(0u32, |acc, (&r, &n)| acc * n + r as u32)
    }

    pub fn elem(&self, index: u32) -> Elem {
        self.tables.elems[index as usize]
    }

    pub fn elements(&self) -> &[Elem] {
        &self.tables.elems
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.len as usize == self.moduli.len() && a.residues().iter().zip(&self.moduli).all(|(&r, &n)| (r as u32) < n)
    }

    /// Element from a residue tuple, reducing each residue.
    pub fn from_residues(&self, rs: &[u32]) -> Result<Elem> {
        if rs.len() != self.moduli.len() {
            return Err(Error::invalid("ring element", format!("{} residues for {} moduli", rs.len(), self.moduli.len())));
        }
        let reduced: Vec<u32> = rs.iter().zip(&self.moduli).map(|(r, n)| r % n).collect();
        Ok(Elem::from_residues(&reduced).expect("reduced residues fit"))
    }

    /// The image of the integer `k`.
    pub fn int(&self, k: u32) -> Elem {
        let rs: Vec<u32> = self.moduli.iter().map(|n| k % n).collect();
        Elem::from_residues(&rs).expect("reduced residues fit")
    }

    pub fn zero(&self) -> Elem {
        self.int(0)
    }

    pub fn one(&self) -> Elem {
        self.int(1)
    }

    fn op(&self, table: &[u32], a: Elem, b: Elem) -> Elem {
        let n = self.order();
        self.elem(table[(self.index(a) * n + self.index(b)) as usize])
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.op(&self.tables.add, a, b)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.op(&self.tables.mul, a, b)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.elem(self.tables.neg[self.index(a) as usize])
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `k·a` for a natural number `k`.
    pub fn scale(&self, k: u32, a: Elem) -> Elem {
        let rs: Vec<u32> = a
            .residues()
            .iter()
            .zip(&self.moduli)
            .map(|(&r, n)| (r as u32 * (k % n)) % n)
            .collect();
        Elem::from_residues(&rs).expect("reduced residues fit")
    }

    pub fn is_idempotent(&self, e: Elem) -> bool {
        self.mul(e, e) == e
    }
}

/// A corner `uR` of an ambient ring, with unit `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RingObjRepr", into = "RingObjRepr")]
pub struct RingObj {
    ring: FiniteRing,
    unit: Elem,
}

#[derive(Serialize, Deserialize)]
struct RingObjRepr {
    moduli: FiniteRing,
    unit: Elem,
}

impl From<RingObj> for RingObjRepr {
    fn from(o: RingObj) -> Self {
        RingObjRepr {
            moduli: o.ring,
            unit: o.unit,
        }
    }
}

impl TryFrom<RingObjRepr> for RingObj {
    type Error = Error;

    fn try_from(r: RingObjRepr) -> Result<Self> {
        RingObj::corner(&r.moduli, r.unit)
    }
}

impl fmt::Display for RingObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit == self.ring.one() {
            write!(f, "{}", self.ring)
        } else {
            write!(f, "{}·{}", self.unit, self.ring)
        }
    }
}

impl RingObj {
    /// The whole ring.
    pub fn whole(ring: &FiniteRing) -> Self {
        RingObj {
            ring: ring.clone(),
            unit: ring.one(),
        }
    }

    /// The corner `uR`; `u` must be idempotent.
    pub fn corner(ring: &FiniteRing, u: Elem) -> Result<Self> {
        if !ring.contains(u) {
            return Err(Error::invalid("ring object", format!("{u} is not an element of {ring}")));
        }
        if !ring.is_idempotent(u) {
            return Err(Error::invalid("ring object", format!("{u} is not idempotent")));
        }
        Ok(RingObj { ring: ring.clone(), unit: u })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn unit(&self) -> Elem {
        self.unit
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.ring.contains(a) && self.ring.mul(self.unit, a) == a
    }

    /// Elements of `uR`, in ambient index order.
    pub fn carrier(&self) -> Vec<Elem> {
        self.ring
            .elements()
            .iter()
            .copied()
            .filter(|&a| self.ring.mul(self.unit, a) == a)
            .collect()
    }

    /// `u - e`, the complement of `e` inside the corner.
    pub fn ortho(&self, e: Elem) -> Elem {
        self.ring.sub(self.unit, e)
    }

    /// Additive generators of `uR`: the unit's component in each factor,
    /// paired with its additive order. Factors where the unit vanishes are skipped.
    pub(crate) fn generators(&self) -> Vec<(Elem, u32)> {
        let m = self.ring.moduli();
        (0..m.len())
            .filter_map(|i| {
                let u_i = self.unit.residues()[i] as u32;
                if u_i == 0 {
                    return None;
                }
                let mut rs = vec![0u32; m.len()];
                rs[i] = u_i;
                let g = self.ring.from_residues(&rs).expect("arity matches");
                Some((g, m[i] / gcd(u_i, m[i])))
            })
            .collect()
    }

    /// The moduli `d_i` with `uR ≅ Π Z_{d_i}` as unital rings (factors `Z_1` dropped).
    pub fn iso_type(&self) -> Vec<u32> {
        self.generators().into_iter().map(|(_, d)| d).collect()
    }
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    num_integer::Integer::gcd(&a, &b)
}

fn check_pred(x: &RingObj, e: Elem) -> Result<()> {
    if !x.contains(e) || !x.ring.is_idempotent(e) {
        return Err(Error::invalid("ring predicate", format!("{e} is not an idempotent of {x}")));
    }
    Ok(())
}

/// Every idempotent of the corner `x`, in ambient index order.
pub fn ring_idempotents(x: &RingObj) -> Vec<Elem> {
    x.carrier().into_iter().filter(|&e| x.ring.is_idempotent(e)).collect()
}

/// `□(f)(e) = f(e) + f(1)⊥`.
pub fn ring_subst(f: &SubunitalMap, e: Elem) -> Elem {
    let x = f.src();
    let r = x.ring();
    r.add(f.apply(e), x.ortho(f.apply(f.dst().unit())))
}

/// `{X|e} = eR` with `π_e(x) = ex`.
pub fn ring_comprehension(x: &RingObj, e: Elem) -> Result<Comprehension<RingObj, SubunitalMap>> {
    check_pred(x, e)?;
    let object = RingObj::corner(&x.ring, e)?;
    let counit = SubunitalMap::from_fn_unchecked(&object, x, |a| x.ring.mul(e, a));
    Ok(Comprehension { object, counit })
}

/// `X/e = e⊥R` with `ξ_e` the inclusion.
pub fn ring_quotient(x: &RingObj, e: Elem) -> Result<Quotient<RingObj, SubunitalMap>> {
    check_pred(x, e)?;
    let object = RingObj::corner(&x.ring, x.ortho(e))?;
    let unit = SubunitalMap::from_fn_unchecked(x, &object, |a| a);
    Ok(Quotient { object, unit })
}

/// `R ≅ eR × e⊥R` for an idempotent `e` of the corner `R`.
#[derive(Debug, Clone, Serialize)]
pub struct RingDecomposition {
    pub whole: RingObj,
    pub left: RingObj,
    pub right: RingObj,
    /// `x ↦ (ex, e⊥x)` over the carrier of `whole`.
    pub forward: Vec<(Elem, (Elem, Elem))>,
    pub left_type: Vec<u32>,
    pub right_type: Vec<u32>,
}

impl RingDecomposition {
    /// `(a, b) ↦ a + b`.
    pub fn recompose(&self, a: Elem, b: Elem) -> Elem {
        self.whole.ring.add(a, b)
    }

    /// Checks that `forward` is a bijective unital ring map whose inverse is `recompose`.
    pub fn verify(&self) -> Result<()> {
        let r = &self.whole.ring;
        let fail = |msg: String| Err(Error::invalid("decomposition", msg));
        let left = self.left.carrier();
        let right = self.right.carrier();
        if left.len() * right.len() != self.forward.len() {
            return fail(format!("{}·{} ≠ {}", left.len(), right.len(), self.forward.len()));
        }
        for &(x, (a, b)) in &self.forward {
            if self.recompose(a, b) != x {
                return fail(format!("{a} + {b} ≠ {x}"));
            }
        }
        for &a in &left {
            for &b in &right {
                let x = self.recompose(a, b);
                if !self.whole.contains(x) || self.image(x) != Some((a, b)) {
                    return fail(format!("({a}, {b}) does not round-trip"));
                }
            }
        }
        for &(x, (a, b)) in &self.forward {
            for &(y, (c, d)) in &self.forward {
                let sum = self.image(r.add(x, y));
                let prod = self.image(r.mul(x, y));
                if sum != Some((r.add(a, c), r.add(b, d))) || prod != Some((r.mul(a, c), r.mul(b, d))) {
                    return fail(format!("not a ring map at {x}, {y}"));
                }
            }
        }
        if self.image(self.whole.unit) != Some((self.left.unit, self.right.unit)) {
            return fail("unit not preserved".into());
        }
        Ok(())
    }

    pub fn image(&self, x: Elem) -> Option<(Elem, Elem)> {
        self.forward.iter().find(|(y, _)| *y == x).map(|(_, ab)| *ab)
    }
}

/// Splits the corner `x` along the idempotent `e`.
pub fn ring_decompose(x: &RingObj, e: Elem) -> Result<RingDecomposition> {
    check_pred(x, e)?;
    let r = &x.ring;
    let e_perp = x.ortho(e);
    let left = RingObj::corner(r, e)?;
    let right = RingObj::corner(r, e_perp)?;
    let forward = x
        .carrier()
        .into_iter()
        .map(|a| (a, (r.mul(e, a), r.mul(e_perp, a))))
        .collect();
    Ok(RingDecomposition {
        whole: x.clone(),
        left_type: left.iso_type(),
        right_type: right.iso_type(),
        left,
        right,
        forward,
    })
}

/// Checks that `k ↦ Σ k_i·g_i` is a unital ring isomorphism `Π Z_{d_i} → uR`,
/// which confirms `iso_type`.
pub fn verify_iso_type(x: &RingObj) -> Result<()> {
    let gens = x.generators();
    let ds: Vec<u32> = gens.iter().map(|(_, d)| *d).collect();
    let r = &x.ring;
    let model = if ds.is_empty() { None } else { Some(FiniteRing::new(&ds)?) };
    let embed = |k: Elem| -> Elem {
        gens.iter()
            .zip(k.residues())
            .fold(r.zero(), |acc, ((g, _), &ki)| r.add(acc, r.scale(ki as u32, *g)))
    };
    let carrier = x.carrier();
    let Some(model) = model else {
        return if carrier.len() == 1 {
            Ok(())
        } else {
            Err(Error::invalid("iso type", format!("{x} is not the zero ring")))
        };
    };
    if model.order() as usize != carrier.len() {
        return Err(Error::invalid("iso type", format!("{} has {} elements, model {}", x, carrier.len(), model.order())));
    }
    let mut seen = std::collections::HashSet::new();
    for &k in model.elements() {
        if !seen.insert(embed(k)) {
            return Err(Error::invalid("iso type", "embedding not injective"));
        }
        for &l in model.elements() {
            if embed(model.add(k, l)) != r.add(embed(k), embed(l)) || embed(model.mul(k, l)) != r.mul(embed(k), embed(l)) {
                return Err(Error::invalid("iso type", format!("not a ring map at {k}, {l}")));
            }
        }
    }
    if embed(model.one()) != x.unit {
        return Err(Error::invalid("iso type", "unit not preserved"));
    }
    Ok(())
}

/// `asrt_e(x) = ex`.
pub fn ring_assert(x: &RingObj, e: Elem) -> Result<SubunitalMap> {
    check_pred(x, e)?;
    let r = &x.ring;
    Ok(SubunitalMap::from_fn_unchecked(x, x, |a| r.mul(e, a)))
}

/// The instrument as a map `R × R → R`, `(x, y) ↦ ex + e⊥y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingInstrument {
    pub object: RingObj,
    pub pred: Elem,
    /// Values on the carrier squared, row-major in carrier order.
    pub table: Vec<Elem>,
}

impl RingInstrument {
    pub fn apply(&self, a: Elem, b: Elem) -> Elem {
        let c = self.object.carrier();
        let i = c.iter().position(|&x| x == a).expect("left argument in carrier");
        let j = c.iter().position(|&x| x == b).expect("right argument in carrier");
        self.table[i * c.len() + j]
    }
}

/// `instr_e(x, y) = ex + e⊥y`.
pub fn ring_instrument(x: &RingObj, e: Elem) -> Result<RingInstrument> {
    check_pred(x, e)?;
    let r = &x.ring;
    let e_perp = x.ortho(e);
    let c = x.carrier();
    let table = c
        .iter()
        .flat_map(|&a| c.iter().map(move |&b| r.add(r.mul(e, a), r.mul(e_perp, b))))
        .collect();
    Ok(RingInstrument {
        object: x.clone(),
        pred: e,
        table,
    })
}

/// The prime-power factorization of `n`, ascending.
pub fn prime_power_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The idempotents of `Z_n` that pick out each prime-power factor, in ascending factor order.
///
/// Splitting along them one after another realizes `Z_n ≅ Π Z_{q_i}`.
pub fn crt_idempotents(n: u32) -> Result<Vec<Elem>> {
    let r = FiniteRing::cyclic(n)?;
    prime_power_factors(n)
        .into_iter()
        .map(|q| {
            let e = (0..n)
                .find(|&k| k % q == 1 % q && k % (n / q) == 0)
                .expect("coprime factors admit a CRT idempotent");
            Ok(r.int(e))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> FiniteRing {
        FiniteRing::cyclic(n).unwrap()
    }

    #[test]
    fn idempotent_examples() {
        let z6 = RingObj::whole(&z(6));
        let es: Vec<u32> = ring_idempotents(&z6).iter().map(|e| e.residues()[0] as u32).collect();
        assert_eq!(es, vec![0, 1, 3, 4]);
        assert_eq!(ring_idempotents(&RingObj::whole(&z(5))).len(), 2);
        let z2z3 = FiniteRing::new(&[2, 3]).unwrap();
        let es: Vec<Vec<u8>> = ring_idempotents(&RingObj::whole(&z2z3))
            .iter()
            .map(|e| e.residues().to_vec())
            .collect();
        assert_eq!(es, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn corners_of_z6() {
        let r = z(6);
        let x = RingObj::whole(&r);
        let c = ring_comprehension(&x, r.int(3)).unwrap();
        assert_eq!(c.object.carrier(), vec![r.int(0), r.int(3)]);
        assert_eq!(c.object.iso_type(), vec![2]);
        assert_eq!(c.counit.apply(r.int(5)), r.int(3));

        let q = ring_quotient(&x, r.int(3)).unwrap();
        assert_eq!(q.object.unit(), r.int(4));
        assert_eq!(q.object.carrier(), vec![r.int(0), r.int(2), r.int(4)]);
        assert_eq!(q.object.iso_type(), vec![3]);
        verify_iso_type(&c.object).unwrap();
        verify_iso_type(&q.object).unwrap();

        let q1 = ring_quotient(&x, r.one()).unwrap();
        assert_eq!(q1.object.carrier(), vec![r.zero()]);
    }

    #[test]
    fn decomposition_of_z6() {
        let r = z(6);
        let d = ring_decompose(&RingObj::whole(&r), r.int(3)).unwrap();
        assert_eq!(d.image(r.int(5)), Some((r.int(3), r.int(2))));
        assert_eq!(d.left_type, vec![2]);
        assert_eq!(d.right_type, vec![3]);
        d.verify().unwrap();
        let d1 = ring_decompose(&RingObj::whole(&r), r.one()).unwrap();
        assert!(d1.right.carrier().len() == 1);
        d1.verify().unwrap();
    }

    #[test]
    fn instrument_example() {
        let r = z(6);
        let i = ring_instrument(&RingObj::whole(&r), r.int(3)).unwrap();
        assert_eq!(i.apply(r.int(1), r.int(5)), r.int(5));
        for &a in r.elements() {
            assert_eq!(i.apply(a, a), a);
        }
        let i1 = ring_instrument(&RingObj::whole(&r), r.one()).unwrap();
        assert_eq!(i1.apply(r.int(2), r.int(5)), r.int(2));
    }

    #[test]
    fn crt_splitting() {
        assert_eq!(prime_power_factors(360), vec![8, 9, 5]);
        let es = crt_idempotents(12).unwrap();
        let r = z(12);
        assert_eq!(es, vec![r.int(9), r.int(4)]);
        let types: Vec<Vec<u32>> = es
            .iter()
            .map(|&e| RingObj::corner(&r, e).unwrap().iso_type())
            .collect();
        assert_eq!(types, vec![vec![4], vec![3]]);
    }

    #[test]
    fn json_shapes() {
        let r = FiniteRing::new(&[2, 3]).unwrap();
        let o = RingObj::corner(&r, r.from_residues(&[1, 0]).unwrap()).unwrap();
        let j = serde_json::to_string(&o).unwrap();
        assert_eq!(j, r#"{"moduli":[2,3],"unit":[1,0]}"#);
        assert_eq!(serde_json::from_str::<RingObj>(&j).unwrap(), o);
        assert!(serde_json::from_str::<RingObj>(r#"{"moduli":[6],"unit":[2]}"#).is_err());
    }
}
