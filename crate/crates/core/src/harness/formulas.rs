//! Closed forms of the derived constructions, one per instance, used as the
//! independent side of the factorization and instrument laws.

use num_complex::Complex64;

use crate::chain::{Chain, Measurement};
use crate::discrete::{
    nondet_assert, nondet_instrument, sets_assert, sets_instrument, FiniteSet, NondetChain, NondetInstrument,
    PartialFn, SetsChain, SetsInstrument, NondetMap,
};
use crate::dist::{dist_assert, dist_instrument, DistChain, DistInstrument, FuzzyPred, Kernel};
use crate::error::Result;
use crate::linear::{ClosedSubspace, HilbChain, HilbMap, HilbSpace};
use crate::ring::{ring_assert, ring_instrument, Elem, RingChain, RingInstrument, RingObj, SubunitalMap};
use crate::vn::{vn_assert, vn_instrument, AlgElement, CMatrix, CpsuMap, VnChain, VnInstrument, VnObject};

/// Entry spread above which a vN predicate is treated as clearly non-central.
const NON_CENTRAL: f64 = 1e-2;

pub trait AssertFormula: Chain {
    /// `asrt_p` written out directly.
    fn closed_assert(&self, x: &Self::Object, p: &Self::Pred) -> Result<Self::Map>;
}

pub trait InstrumentFormula: Measurement {
    /// `instr_p` written out directly.
    fn closed_instrument(&self, x: &Self::Object, p: &Self::Pred) -> Result<Self::Instrument>;

    /// How far `instr` is from being total. 0 for a total instrument.
    fn totality_residual(&self, x: &Self::Object, instr: &Self::Instrument) -> f64;

    /// Whether measuring `p` should leave `X` untouched; `None` when `p` sits too
    /// close to the boundary for the prediction to be decided numerically.
    fn expects_side_effect_free(&self, x: &Self::Object, p: &Self::Pred) -> Option<bool>;
}

impl AssertFormula for SetsChain {
    fn closed_assert(&self, x: &FiniteSet, p: &FiniteSet) -> Result<PartialFn> {
        sets_assert(x, p)
    }
}

impl InstrumentFormula for SetsChain {
    fn closed_instrument(&self, x: &FiniteSet, p: &FiniteSet) -> Result<SetsInstrument> {
        sets_instrument(x, p)
    }

    fn totality_residual(&self, x: &FiniteSet, instr: &SetsInstrument) -> f64 {
        let total = x.atoms().iter().all(|&a| instr.image(a).is_some());
        if total {
            0.0
        } else {
            1.0
        }
    }

    fn expects_side_effect_free(&self, _x: &FiniteSet, _p: &FiniteSet) -> Option<bool> {
        Some(true)
    }
}

impl AssertFormula for NondetChain {
    fn closed_assert(&self, x: &FiniteSet, p: &FiniteSet) -> Result<NondetMap> {
        nondet_assert(x, p)
    }
}

impl InstrumentFormula for NondetChain {
    fn closed_instrument(&self, x: &FiniteSet, p: &FiniteSet) -> Result<NondetInstrument> {
        nondet_instrument(x, p)
    }

    fn totality_residual(&self, x: &FiniteSet, instr: &NondetInstrument) -> f64 {
        let total = x
            .atoms()
            .iter()
            .all(|&a| instr.table.iter().any(|(b, out)| *b == a && !out.is_empty()));
        if total {
            0.0
        } else {
            1.0
        }
    }

    fn expects_side_effect_free(&self, _x: &FiniteSet, _p: &FiniteSet) -> Option<bool> {
        Some(true)
    }
}

impl AssertFormula for DistChain {
    fn closed_assert(&self, x: &FiniteSet, p: &FuzzyPred) -> Result<Kernel> {
        dist_assert(x, p)
    }
}

impl InstrumentFormula for DistChain {
    fn closed_instrument(&self, x: &FiniteSet, p: &FuzzyPred) -> Result<DistInstrument> {
        dist_instrument(x, p)
    }

    fn totality_residual(&self, x: &FiniteSet, instr: &DistInstrument) -> f64 {
        x.atoms()
            .iter()
            .map(|&a| {
                let mass: f64 = instr
                    .rows
                    .iter()
                    .filter(|(b, _)| *b == a)
                    .flat_map(|(_, ws)| ws.iter().map(|(_, w)| w.to_f64()))
                    .sum();
                (1.0 - mass).abs()
            })
            .fold(0.0, f64::max)
    }

    fn expects_side_effect_free(&self, _x: &FiniteSet, _p: &FuzzyPred) -> Option<bool> {
        Some(true)
    }
}

impl AssertFormula for RingChain {
    fn closed_assert(&self, x: &RingObj, e: &Elem) -> Result<SubunitalMap> {
        ring_assert(x, *e)
    }
}

impl InstrumentFormula for RingChain {
    fn closed_instrument(&self, x: &RingObj, e: &Elem) -> Result<RingInstrument> {
        ring_instrument(x, *e)
    }

    /// Totality of a ring instrument is unitality: `instr(1, 1) = 1`.
    fn totality_residual(&self, x: &RingObj, instr: &RingInstrument) -> f64 {
        let u = x.unit();
        if instr.apply(u, u) == u {
            0.0
        } else {
            1.0
        }
    }

    fn expects_side_effect_free(&self, _x: &RingObj, _e: &Elem) -> Option<bool> {
        Some(true)
    }
}

impl AssertFormula for VnChain {
    fn closed_assert(&self, x: &VnObject, p: &AlgElement) -> Result<CpsuMap> {
        vn_assert(x, p)
    }
}

impl InstrumentFormula for VnChain {
    fn closed_instrument(&self, x: &VnObject, p: &AlgElement) -> Result<VnInstrument> {
        vn_instrument(x, p)
    }

    fn totality_residual(&self, x: &VnObject, instr: &VnInstrument) -> f64 {
        let one = AlgElement::identity(&x.algebra());
        instr.apply(&one, &one).max_abs_diff(&one)
    }

    /// Measuring `p` is side-effect free exactly when `p` is central, i.e. a
    /// scalar on every block.
    fn expects_side_effect_free(&self, _x: &VnObject, p: &AlgElement) -> Option<bool> {
        let spread = p.blocks().iter().map(scalar_defect).fold(0.0, f64::max);
        if spread <= self.tol.eq {
            Some(true)
        } else if spread > NON_CENTRAL {
            Some(false)
        } else {
            None
        }
    }
}

fn scalar_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    if n == 0 {
        return 0.0;
    }
    let mean = m.trace() / Complex64::new(n as f64, 0.0);
    let scalar = CMatrix::identity(n, n) * mean;
    (m - scalar).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// In Hilbert spaces every predicate is sharp and `asrt_P` is the projector onto `P`.
impl AssertFormula for HilbChain {
    fn closed_assert(&self, x: &HilbSpace, p: &ClosedSubspace) -> Result<HilbMap> {
        HilbMap::new(x, x, p.projector())
    }
}
