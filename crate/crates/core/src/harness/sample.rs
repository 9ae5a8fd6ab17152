use std::hash::Hash;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::error::Result;

pub type CaseRng = ChaCha8Rng;

/// Size bounds for generated cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest finite set generated (sets, powerset, dist).
    pub max_set: usize,
    /// Largest denominator of a generated rational.
    pub max_den: u32,
    /// Largest matrix block (vn) or Hilbert-space dimension (hilb).
    pub max_block_dim: usize,
    /// Largest number of blocks in a generated matrix algebra.
    pub max_blocks: usize,
    /// Largest ring order.
    pub max_ring: usize,
    /// Largest dimension of an F_p space.
    pub max_vect_dim: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_set: 4,
            max_den: 16,
            max_block_dim: 3,
            max_blocks: 2,
            max_ring: 12,
            max_vect_dim: 3,
        }
    }
}

/// RNG for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, index: u64) -> CaseRng {
    ChaCha8Rng::seed_from_u64(case_seed(seed, index))
}

/// Per-case seed; recorded in witnesses so a failing case can be replayed alone.
pub fn case_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Seeded generation of objects, predicates and homs for one instance.
///
/// The hom generators satisfy their hom condition by construction.
pub trait Sampler: Chain {
    fn sample_object(&self, rng: &mut CaseRng, b: &Bounds) -> Result<Self::Object>;
    /// An object that admits maps to and from `x`.
    fn sample_peer(&self, rng: &mut CaseRng, _x: &Self::Object, b: &Bounds) -> Result<Self::Object> {
        self.sample_object(rng, b)
    }

    fn sample_pred(&self, rng: &mut CaseRng, x: &Self::Object, b: &Bounds) -> Self::Pred;
    fn sample_map(&self, rng: &mut CaseRng, x: &Self::Object, y: &Self::Object, b: &Bounds) -> Self::Map;

    /// A hom `(X, p) → 0Y`.
    fn sample_quotient_hom(
        &self,
        rng: &mut CaseRng,
        x: &Self::Object,
        p: &Self::Pred,
        y: &Self::Object,
        b: &Bounds,
    ) -> Self::Map;

    /// A hom `1Z → (X, p)`.
    fn sample_comprehension_hom(
        &self,
        rng: &mut CaseRng,
        z: &Self::Object,
        x: &Self::Object,
        p: &Self::Pred,
        b: &Bounds,
    ) -> Self::Map;

    /// A valid map with the same endpoints as `f` but different from it, if one exists.
    fn perturb_map(&self, rng: &mut CaseRng, f: &Self::Map, b: &Bounds) -> Option<Self::Map>;
}

/// Exact instances whose small hom-sets can be listed in full.
pub trait Exhaustive: Chain
where
    Self::Map: Eq + Hash,
{
    /// Every object within the bounds.
    fn objects(&self, b: &Bounds) -> Vec<Self::Object>;
    /// A small family of codomains used for the universal-property checks.
    fn test_codomains(&self, b: &Bounds) -> Vec<Self::Object>;
    fn preds(&self, x: &Self::Object) -> Vec<Self::Pred>;
    /// Every map `X → Y`, or `None` when the candidate space exceeds the enumeration limit.
    fn all_maps(&self, x: &Self::Object, y: &Self::Object) -> Option<Vec<Self::Map>>;
}
