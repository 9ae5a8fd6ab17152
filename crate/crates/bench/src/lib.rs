//! Fixtures shared by the benchmarks.

use effectus::harness::{case_rng, Bounds, Sampler};
use effectus::Result;

/// A sampled object, predicate, peer object and quotient hom, fixed by `seed`.
pub struct Fixture<C: Sampler> {
    pub x: C::Object,
    pub p: C::Pred,
    pub y: C::Object,
    pub hom: C::Map,
}

pub fn fixture<C: Sampler>(c: &C, seed: u64, b: &Bounds) -> Result<Fixture<C>> {
    let mut rng = case_rng(seed, 0);
    let x = c.sample_object(&mut rng, b)?;
    let p = c.sample_pred(&mut rng, &x, b);
    let y = c.sample_peer(&mut rng, &x, b)?;
    let hom = c.sample_quotient_hom(&mut rng, &x, &p, &y, b);
    Ok(Fixture { x, p, y, hom })
}
