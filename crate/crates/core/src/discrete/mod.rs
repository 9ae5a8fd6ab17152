//! Finite sets with partial functions, and the non-deterministic variant
//! with maps into non-empty subsets of `Y + 1`.

mod nondet;
mod sets;

pub use nondet::{
    nondet_assert, nondet_instrument, nondet_subst, nondet_transpose_quotient, nondet_untranspose, NdImage,
    NondetChain, NondetInstrument, NondetMap,
};
pub use sets::{
    PartialFn, SetsChain, SetsInstrument, sets_assert, sets_comprehension, sets_instrument, sets_quotient,
    sets_subst,
};
pub(crate) use sets::random_set;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An opaque, ordered element identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Atom(pub u32);

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite set of atoms, kept sorted and duplicate-free so equality is structural.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FiniteSet {
    atoms: Vec<Atom>,
}

impl<'de> Deserialize<'de> for FiniteSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let atoms = Vec::<Atom>::deserialize(d)?;
        FiniteSet::new(atoms).map_err(serde::de::Error::custom)
    }
}

impl FiniteSet {
    /// Rejects duplicates; sorts otherwise.
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        atoms.sort_unstable();
        let before = atoms.len();
        atoms.dedup();
        if atoms.len() != before {
            return Err(Error::invalid("finite set", "duplicate atom"));
        }
        Ok(FiniteSet { atoms })
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(n: u32) -> Self {
        FiniteSet {
            atoms: (0..n).map(Atom).collect(),
        }
    }

    pub fn from_ids(ids: &[u32]) -> Self {
        let mut atoms: Vec<Atom> = ids.iter().copied().map(Atom).collect();
        atoms.sort_unstable();
        atoms.dedup();
        FiniteSet { atoms }
    }

    pub fn empty() -> Self {
        FiniteSet::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.atoms.binary_search(&a).is_ok()
    }

    pub fn index_of(&self, a: Atom) -> Option<usize> {
        self.atoms.binary_search(&a).ok()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.atoms.iter().all(|a| other.contains(*a))
    }

    pub fn filter(&self, mut keep: impl FnMut(Atom) -> bool) -> FiniteSet {
        FiniteSet {
            atoms: self.atoms.iter().copied().filter(|a| keep(*a)).collect(),
        }
    }

    /// `self ∖ other`.
    pub fn minus(&self, other: &FiniteSet) -> FiniteSet {
        self.filter(|a| !other.contains(a))
    }

    /// All subsets, in binary-counter order.
    pub fn subsets(&self) -> Vec<FiniteSet> {
        let n = self.atoms.len();
        (0..1usize << n)
            .map(|mask| FiniteSet {
                atoms: (0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.atoms[i]).collect(),
            })
            .collect()
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// JSON target of a partial map: an atom or the string `"*"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum Target {
    Atom(Atom),
    Star(String),
}

/// Candidate-space cap for exhaustive uniqueness checks.
pub const ENUMERATION_LIMIT: u64 = 100_000;

pub(crate) fn check_subset(p: &FiniteSet, x: &FiniteSet) -> Result<()> {
    if p.is_subset(x) {
        Ok(())
    } else {
        Err(Error::invalid("predicate", format!("{p} is not a subset of {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_rejected() {
        assert!(FiniteSet::new([Atom(1), Atom(1)]).is_err());
        let s = FiniteSet::new([Atom(3), Atom(1)]).unwrap();
        assert_eq!(s.atoms(), &[Atom(1), Atom(3)]);
    }

    #[test]
    fn subsets_are_complete() {
        let x = FiniteSet::range(3);
        let subs = x.subsets();
        assert_eq!(subs.len(), 8);
        assert!(subs.contains(&FiniteSet::empty()));
        assert!(subs.contains(&x));
    }

    #[test]
    fn json_is_sorted_array() {
        let s = FiniteSet::from_ids(&[2, 1]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,2]");
        let back: FiniteSet = serde_json::from_str("[2,1]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<FiniteSet>("[1,1]").is_err());
    }
}
