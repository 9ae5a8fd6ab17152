//! Deliberately broken instances, used to check that the laws have teeth.

use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::formulas::{AssertFormula, InstrumentFormula};
use super::sample::{case_rng, Bounds, CaseRng, Exhaustive, Sampler};
use crate::chain::{Chain, Comprehension, Measurement, Quotient};
use crate::error::{Error, Result};

const CORRUPTION_SEED: u64 = 0xC0FF_EE00;

/// Which transpose formula to break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Corruption {
    Quotient,
    Comprehension,
}

impl Corruption {
    pub fn name(self) -> &'static str {
        match self {
            Corruption::Quotient => "quotient",
            Corruption::Comprehension => "comprehension",
        }
    }
}

impl FromStr for Corruption {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quotient" => Ok(Corruption::Quotient),
            "comprehension" => Ok(Corruption::Comprehension),
            _ => Err(Error::invalid("corruption", format!("unknown transpose `{s}`"))),
        }
    }
}

/// Wraps an instance, replacing the chosen transpose's output by a different
/// valid map with the same endpoints. With `which = None` it is the instance itself.
#[derive(Debug, Clone)]
pub struct Corrupted<C> {
    pub inner: C,
    pub which: Option<Corruption>,
    pub bounds: Bounds,
}

impl<C: Sampler> Corrupted<C> {
    pub fn new(inner: C, which: Option<Corruption>, bounds: Bounds) -> Self {
        Corrupted { inner, which, bounds }
    }

    fn spoil(&self, target: Corruption, g: C::Map) -> C::Map {
        if self.which != Some(target) {
            return g;
        }
        let mut rng = case_rng(CORRUPTION_SEED, 0);
        self.inner.perturb_map(&mut rng, &g, &self.bounds).unwrap_or(g)
    }
}

impl<C: Sampler> Chain for Corrupted<C> {
    type Object = C::Object;
    type Pred = C::Pred;
    type Map = C::Map;

    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn tolerance(&self) -> f64 {
        self.inner.tolerance()
    }

    fn same_object(&self, a: &C::Object, b: &C::Object) -> bool {
        self.inner.same_object(a, b)
    }

    fn src<'a>(&self, f: &'a C::Map) -> &'a C::Object {
        self.inner.src(f)
    }

    fn dst<'a>(&self, f: &'a C::Map) -> &'a C::Object {
        self.inner.dst(f)
    }

    fn identity(&self, x: &C::Object) -> C::Map {
        self.inner.identity(x)
    }

    fn compose(&self, g: &C::Map, f: &C::Map) -> Result<C::Map> {
        self.inner.compose(g, f)
    }

    fn map_residual(&self, f: &C::Map, g: &C::Map) -> f64 {
        self.inner.map_residual(f, g)
    }

    fn subst(&self, f: &C::Map, q: &C::Pred) -> C::Pred {
        self.inner.subst(f, q)
    }

    fn top(&self, x: &C::Object) -> C::Pred {
        self.inner.top(x)
    }

    fn bottom(&self, x: &C::Object) -> C::Pred {
        self.inner.bottom(x)
    }

    fn leq(&self, x: &C::Object, p: &C::Pred, q: &C::Pred) -> bool {
        self.inner.leq(x, p, q)
    }

    fn pred_residual(&self, p: &C::Pred, q: &C::Pred) -> f64 {
        self.inner.pred_residual(p, q)
    }

    fn ortho(&self, x: &C::Object, p: &C::Pred) -> Option<C::Pred> {
        self.inner.ortho(x, p)
    }

    fn ceil(&self, x: &C::Object, p: &C::Pred) -> C::Pred {
        self.inner.ceil(x, p)
    }

    fn floor(&self, x: &C::Object, p: &C::Pred) -> C::Pred {
        self.inner.floor(x, p)
    }

    fn quotient(&self, x: &C::Object, p: &C::Pred) -> Result<Quotient<C::Object, C::Map>> {
        self.inner.quotient(x, p)
    }

    fn comprehension(&self, x: &C::Object, p: &C::Pred) -> Result<Comprehension<C::Object, C::Map>> {
        self.inner.comprehension(x, p)
    }

    fn quotient_transpose(&self, x: &C::Object, p: &C::Pred, f: &C::Map) -> Result<C::Map> {
        let g = self.inner.quotient_transpose(x, p, f)?;
        Ok(self.spoil(Corruption::Quotient, g))
    }

    fn quotient_untranspose(&self, x: &C::Object, p: &C::Pred, g: &C::Map) -> Result<C::Map> {
        self.inner.quotient_untranspose(x, p, g)
    }

    fn comprehension_transpose(&self, x: &C::Object, p: &C::Pred, f: &C::Map) -> Result<C::Map> {
        let g = self.inner.comprehension_transpose(x, p, f)?;
        Ok(self.spoil(Corruption::Comprehension, g))
    }

    fn comprehension_untranspose(&self, x: &C::Object, p: &C::Pred, g: &C::Map) -> Result<C::Map> {
        self.inner.comprehension_untranspose(x, p, g)
    }

    fn maps_equal(&self, f: &C::Map, g: &C::Map) -> bool {
        self.inner.maps_equal(f, g)
    }

    fn preds_equal(&self, p: &C::Pred, q: &C::Pred) -> bool {
        self.inner.preds_equal(p, q)
    }

    fn is_sharp(&self, x: &C::Object, p: &C::Pred) -> bool {
        self.inner.is_sharp(x, p)
    }
}

impl<C: Sampler + Measurement> Measurement for Corrupted<C> {
    type Instrument = C::Instrument;

    fn pair_asserts(&self, x: &C::Object, on: &C::Map, off: &C::Map) -> Result<C::Instrument> {
        self.inner.pair_asserts(x, on, off)
    }

    fn codiagonal(&self, instr: &C::Instrument) -> C::Map {
        self.inner.codiagonal(instr)
    }

    fn instrument_residual(&self, a: &C::Instrument, b: &C::Instrument) -> f64 {
        self.inner.instrument_residual(a, b)
    }
}

impl<C: Sampler> Sampler for Corrupted<C> {
    fn sample_object(&self, rng: &mut CaseRng, b: &Bounds) -> Result<C::Object> {
        self.inner.sample_object(rng, b)
    }

    fn sample_peer(&self, rng: &mut CaseRng, x: &C::Object, b: &Bounds) -> Result<C::Object> {
        self.inner.sample_peer(rng, x, b)
    }

    fn sample_pred(&self, rng: &mut CaseRng, x: &C::Object, b: &Bounds) -> C::Pred {
        self.inner.sample_pred(rng, x, b)
    }

    fn sample_map(&self, rng: &mut CaseRng, x: &C::Object, y: &C::Object, b: &Bounds) -> C::Map {
        self.inner.sample_map(rng, x, y, b)
    }

    fn sample_quotient_hom(&self, rng: &mut CaseRng, x: &C::Object, p: &C::Pred, y: &C::Object, b: &Bounds) -> C::Map {
        self.inner.sample_quotient_hom(rng, x, p, y, b)
    }

    fn sample_comprehension_hom(
        &self,
        rng: &mut CaseRng,
        z: &C::Object,
        x: &C::Object,
        p: &C::Pred,
        b: &Bounds,
    ) -> C::Map {
        self.inner.sample_comprehension_hom(rng, z, x, p, b)
    }

    fn perturb_map(&self, rng: &mut CaseRng, f: &C::Map, b: &Bounds) -> Option<C::Map> {
        self.inner.perturb_map(rng, f, b)
    }
}

impl<C> Exhaustive for Corrupted<C>
where
    C: Sampler + Exhaustive,
    C::Map: Eq + Hash,
{
    fn objects(&self, b: &Bounds) -> Vec<C::Object> {
        self.inner.objects(b)
    }

    fn test_codomains(&self, b: &Bounds) -> Vec<C::Object> {
        self.inner.test_codomains(b)
    }

    fn preds(&self, x: &C::Object) -> Vec<C::Pred> {
        self.inner.preds(x)
    }

    fn all_maps(&self, x: &C::Object, y: &C::Object) -> Option<Vec<C::Map>> {
        self.inner.all_maps(x, y)
    }
}

impl<C: Sampler + AssertFormula> AssertFormula for Corrupted<C> {
    fn closed_assert(&self, x: &C::Object, p: &C::Pred) -> Result<C::Map> {
        self.inner.closed_assert(x, p)
    }
}

impl<C: Sampler + InstrumentFormula> InstrumentFormula for Corrupted<C> {
    fn closed_instrument(&self, x: &C::Object, p: &C::Pred) -> Result<C::Instrument> {
        self.inner.closed_instrument(x, p)
    }

    fn totality_residual(&self, x: &C::Object, instr: &C::Instrument) -> f64 {
        self.inner.totality_residual(x, instr)
    }

    fn expects_side_effect_free(&self, x: &C::Object, p: &C::Pred) -> Option<bool> {
        self.inner.expects_side_effect_free(x, p)
    }
}
