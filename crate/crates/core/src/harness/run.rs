use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::corrupt::{Corrupted, Corruption};
use super::formulas::{AssertFormula, InstrumentFormula};
use super::laws;
use super::report::{summarize, LawReport, Outcome, Record, SuiteReport};
use super::sample::{case_seed, Bounds, CaseRng, Exhaustive, Sampler};
use crate::discrete::{NondetChain, SetsChain};
use crate::dist::DistChain;
use crate::error::{Error, Result};
use crate::linear::{HilbChain, VectChain};
use crate::ring::RingChain;
use crate::tolerance::Tolerances;
use crate::vn::VnChain;

/// Rings up to this order are decomposed along every idempotent.
pub const DECOMPOSITION_MAX_RING: u32 = 36;

pub const DEFAULT_SEED: u64 = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceId {
    Sets,
    Powerset,
    Dist,
    Vect,
    Hilb,
    Ring,
    Vn,
}

impl InstanceId {
    pub const ALL: [InstanceId; 7] = [
        InstanceId::Sets,
        InstanceId::Powerset,
        InstanceId::Dist,
        InstanceId::Vect,
        InstanceId::Hilb,
        InstanceId::Ring,
        InstanceId::Vn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceId::Sets => "sets",
            InstanceId::Powerset => "powerset",
            InstanceId::Dist => "dist",
            InstanceId::Vect => "vect",
            InstanceId::Hilb => "hilb",
            InstanceId::Ring => "ring",
            InstanceId::Vn => "vn",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            InstanceId::Sets => "finite sets and partial functions; predicates are subsets",
            InstanceId::Powerset => "non-deterministic maps into non-empty subsets of Y + 1; predicates are subsets",
            InstanceId::Dist => "subprobability kernels with exact rationals; predicates are fuzzy",
            InstanceId::Vect => "vector spaces over F_p; predicates are subspaces",
            InstanceId::Hilb => "finite-dimensional Hilbert spaces; predicates are closed subspaces",
            InstanceId::Ring => "products of Z_n with subunital maps; predicates are idempotents",
            InstanceId::Vn => "finite-dimensional von Neumann algebras with cPsU maps; predicates are effects",
        }
    }

    pub fn default_cases(self) -> usize {
        match self {
            InstanceId::Dist => 500,
            _ => 200,
        }
    }

    /// Laws that apply to this instance, in reporting order.
    pub fn laws(self) -> &'static [Law] {
        use Law::*;
        match self {
            InstanceId::Sets | InstanceId::Powerset | InstanceId::Dist => &[
                Composition,
                SubstFunctor,
                TruthFalsum,
                QuotientAdjunction,
                ComprehensionAdjunction,
                Factorization,
                Coincidence,
                Sharpness,
                Instrument,
            ],
            InstanceId::Vect => &[Composition, SubstFunctor, TruthFalsum, QuotientAdjunction, ComprehensionAdjunction],
            InstanceId::Hilb => &[
                Composition,
                SubstFunctor,
                TruthFalsum,
                QuotientAdjunction,
                ComprehensionAdjunction,
                Factorization,
                Coincidence,
                Sharpness,
                Decomposition,
            ],
            InstanceId::Ring => &[
                Composition,
                SubstFunctor,
                TruthFalsum,
                QuotientAdjunction,
                ComprehensionAdjunction,
                Factorization,
                Coincidence,
                Sharpness,
                Instrument,
                Decomposition,
            ],
            InstanceId::Vn => &[
                Composition,
                SubstFunctor,
                TruthFalsum,
                QuotientAdjunction,
                ComprehensionAdjunction,
                Factorization,
                Coincidence,
                Sharpness,
                Instrument,
                CompletePositivity,
                CauchySchwarz,
            ],
        }
    }

    /// Whether the adjunction laws enumerate hom-sets instead of sampling.
    pub fn exhaustive_adjunctions(self) -> bool {
        matches!(self, InstanceId::Sets | InstanceId::Powerset | InstanceId::Vect | InstanceId::Ring)
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstanceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InstanceId::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::invalid("instance", format!("unknown instance `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    Composition,
    SubstFunctor,
    TruthFalsum,
    QuotientAdjunction,
    ComprehensionAdjunction,
    Factorization,
    Coincidence,
    Sharpness,
    Instrument,
    CompletePositivity,
    CauchySchwarz,
    Decomposition,
}

impl Law {
    pub const ALL: [Law; 12] = [
        Law::Composition,
        Law::SubstFunctor,
        Law::TruthFalsum,
        Law::QuotientAdjunction,
        Law::ComprehensionAdjunction,
        Law::Factorization,
        Law::Coincidence,
        Law::Sharpness,
        Law::Instrument,
        Law::CompletePositivity,
        Law::CauchySchwarz,
        Law::Decomposition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Composition => "composition",
            Law::SubstFunctor => "subst-functor",
            Law::TruthFalsum => "truth-falsum",
            Law::QuotientAdjunction => "quotient-adjunction",
            Law::ComprehensionAdjunction => "comprehension-adjunction",
            Law::Factorization => "factorization",
            Law::Coincidence => "coincidence",
            Law::Sharpness => "sharpness",
            Law::Instrument => "instrument",
            Law::CompletePositivity => "complete-positivity",
            Law::CauchySchwarz => "cauchy-schwarz",
            Law::Decomposition => "decomposition",
        }
    }

    /// The statement being checked.
    pub fn statement(self) -> &'static str {
        match self {
            Law::Composition => {
                "Kleisli composition g ⊙ f = [g, κ₂] ∘ f is associative, with identities as units."
            }
            Law::SubstFunctor => {
                "Substitution is functorial and preserves truth: □(id)(q) = q, □(g ⊙ f)(q) = □(f)(□(g)(q)) and □(f)(1) = 1."
            }
            Law::TruthFalsum => "Every map f : X → Y is a hom 0X → (Y, q) and a hom (X, p) → 1Y, for all p and q.",
            Law::QuotientAdjunction => {
                "Every hom f : (X, p) → 0Y factors as g ⊙ ξ_p for exactly one g : X/p → Y, \
                 and transposing is inverse to precomposing with ξ_p."
            }
            Law::ComprehensionAdjunction => {
                "Every hom f : 1Z → (X, p) factors as π_p ⊙ g for exactly one g : Z → {X|p}, \
                 and transposing is inverse to postcomposing with π_p."
            }
            Law::Factorization => "π_{⌈p⌉} ⊙ ξ_{p⊥} equals the instance's assert map asrt_p.",
            Law::Coincidence => "The quotient X/p⊥ and the comprehension {X|⌈p⌉} are the same object.",
            Law::Sharpness => {
                "⌊p⊥⌋ = ⌈p⌉⊥, and p is sharp exactly when asrt_p is idempotent, \
                 exactly when ξ_{p⊥} ⊙ π_{⌈p⌉} is the identity."
            }
            Law::Instrument => {
                "instr_p = [asrt_p, asrt_{p⊥}] equals the instance's instrument and is total; \
                 ∇ ∘ instr_p = id precisely for the predicates the instance deems side-effect free."
            }
            Law::CompletePositivity => {
                "Units, counits, asserts, instruments and transposes are completely positive and subunital."
            }
            Law::CauchySchwarz => "‖f(c*d)‖² ≤ ‖f(c*c)‖·‖f(d*d)‖ for every cPsU map f and effects c, d.",
            Law::Decomposition => {
                "A sharp predicate splits its object: R ≅ eR × e⊥R for an idempotent e, H = P ⊕ P⊥ for a closed subspace P."
            }
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::invalid("law", format!("unknown law `{s}`")))
    }
}

/// Everything that determines one law report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub instance: InstanceId,
    pub law: Law,
    pub seed: u64,
    /// Sampled cases; `None` uses the instance default.
    pub cases: Option<usize>,
    /// Overrides the equality tolerance of the float-backed instances.
    pub tolerance: Option<f64>,
    pub bounds: Bounds,
    pub corrupt: Option<Corruption>,
    /// Runs the single sampled case with this case seed instead of `cases` fresh ones.
    pub replay: Option<u64>,
}

impl CaseSpec {
    pub fn new(instance: InstanceId, law: Law, seed: u64) -> Self {
        CaseSpec {
            instance,
            law,
            seed,
            cases: None,
            tolerance: None,
            bounds: Bounds::default(),
            corrupt: None,
            replay: None,
        }
    }

    fn tolerances(&self) -> Tolerances {
        self.tolerance.map(Tolerances::with_eq).unwrap_or_default()
    }
}

/// Selection for a whole run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Empty selects every instance.
    pub instances: Vec<InstanceId>,
    /// Empty selects every applicable law.
    pub laws: Vec<Law>,
    pub seed: u64,
    pub cases: Option<usize>,
    pub tolerance: Option<f64>,
    pub bounds: Bounds,
    pub corrupt: Option<Corruption>,
    pub replay: Option<u64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            instances: Vec::new(),
            laws: Vec::new(),
            seed: DEFAULT_SEED,
            cases: None,
            tolerance: None,
            bounds: Bounds::default(),
            corrupt: None,
            replay: None,
        }
    }
}

impl SuiteConfig {
    pub fn specs(&self) -> Vec<CaseSpec> {
        let instances: &[InstanceId] = if self.instances.is_empty() {
            &InstanceId::ALL
        } else {
            &self.instances
        };
        let mut specs = Vec::new();
        for &instance in instances {
            for &law in instance.laws() {
                if self.laws.is_empty() || self.laws.contains(&law) {
                    specs.push(CaseSpec {
                        instance,
                        law,
                        seed: self.seed,
                        cases: self.cases,
                        tolerance: self.tolerance,
                        bounds: self.bounds,
                        corrupt: self.corrupt,
                        replay: self.replay,
                    });
                }
            }
        }
        specs
    }
}

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let reports = config.specs().par_iter().filter_map(run_law).collect();
    SuiteReport::new(config.seed, reports)
}

/// Checks one law on one instance; `None` when the law does not apply there.
pub fn run_law(spec: &CaseSpec) -> Option<LawReport> {
    if !spec.instance.laws().contains(&spec.law) {
        return None;
    }
    let tol = spec.tolerances();
    let records = match spec.instance {
        InstanceId::Sets => exact(&wrap(SetsChain, spec), spec),
        InstanceId::Powerset => exact(&wrap(NondetChain, spec), spec),
        InstanceId::Ring if spec.law == Law::Decomposition => match laws::ring_decomposition_jobs(DECOMPOSITION_MAX_RING) {
            Ok(jobs) => enumerated(&jobs, |(x, e)| vec![laws::ring_decomposition(x, *e)]),
            Err(e) => vec![failed_setup(&e)],
        },
        InstanceId::Ring => exact(&wrap(RingChain, spec), spec),
        InstanceId::Dist => measured(&wrap(DistChain, spec), spec),
        InstanceId::Vect => vect(&wrap(VectChain, spec), spec),
        InstanceId::Hilb => hilb(&wrap(HilbChain::new(tol), spec), spec),
        InstanceId::Vn => vn(&wrap(VnChain::new(tol), spec), spec),
    };
    Some(summarize(spec.instance.name(), spec.law.name(), spec.seed, records))
}

fn wrap<C: Sampler>(c: C, spec: &CaseSpec) -> Corrupted<C> {
    Corrupted::new(c, spec.corrupt, spec.bounds)
}

fn failed_setup(e: &Error) -> Record {
    Record {
        case: 0,
        case_seed: None,
        outcome: Outcome::error(e),
    }
}

type SampledLaw<C> = fn(&C, &mut CaseRng, &Bounds) -> Outcome;

fn sampled<C: Sampler>(c: &C, spec: &CaseSpec, law: SampledLaw<C>) -> Vec<Record> {
    let seeds: Vec<u64> = match spec.replay {
        Some(s) => vec![s],
        None => {
            let n = spec.cases.unwrap_or_else(|| spec.instance.default_cases());
            (0..n as u64).map(|i| case_seed(spec.seed, i)).collect()
        }
    };
    seeds
        .par_iter()
        .enumerate()
        .map(|(case, &s)| {
            let mut rng = CaseRng::seed_from_u64(s);
            Record {
                case,
                case_seed: Some(s),
                outcome: law(c, &mut rng, &spec.bounds),
            }
        })
        .collect()
}

fn enumerated<T: Sync>(jobs: &[T], check: impl Fn(&T) -> Vec<Outcome> + Send + Sync) -> Vec<Record> {
    let per_job: Vec<Vec<Outcome>> = jobs.par_iter().map(check).collect();
    per_job
        .into_iter()
        .flatten()
        .enumerate()
        .map(|(case, outcome)| Record {
            case,
            case_seed: None,
            outcome,
        })
        .collect()
}

/// Laws every instance with an orthocomplement supports, all sampled.
fn structural<C: Sampler>(c: &C, spec: &CaseSpec) -> Vec<Record> {
    let law: SampledLaw<C> = match spec.law {
        Law::Composition => laws::composition,
        Law::SubstFunctor => laws::subst_functor,
        Law::TruthFalsum => laws::truth_falsum,
        Law::QuotientAdjunction => laws::quotient_adjunction,
        Law::ComprehensionAdjunction => laws::comprehension_adjunction,
        Law::Coincidence => laws::coincidence,
        Law::Sharpness => laws::sharpness,
        other => unreachable!("{other} is dispatched per instance"),
    };
    sampled(c, spec, law)
}

fn exhaustive_adjunction<C: Exhaustive>(c: &C, spec: &CaseSpec) -> Vec<Record>
where
    C::Map: Eq + Hash,
{
    let jobs = laws::adjunction_jobs(c, &spec.bounds);
    if spec.law == Law::QuotientAdjunction {
        enumerated(&jobs, |(x, p, y)| laws::quotient_exhaustive(c, x, p, y))
    } else {
        enumerated(&jobs, |(x, p, z)| laws::comprehension_exhaustive(c, x, p, z))
    }
}

fn measured<C: Sampler + AssertFormula + InstrumentFormula>(c: &C, spec: &CaseSpec) -> Vec<Record> {
    match spec.law {
        Law::Factorization => sampled(c, spec, laws::factorization),
        Law::Instrument => sampled(c, spec, laws::instrument),
        _ => structural(c, spec),
    }
}

fn exact<C>(c: &C, spec: &CaseSpec) -> Vec<Record>
where
    C: Sampler + Exhaustive + AssertFormula + InstrumentFormula,
    C::Map: Eq + Hash,
{
    match spec.law {
        Law::QuotientAdjunction | Law::ComprehensionAdjunction => exhaustive_adjunction(c, spec),
        _ => measured(c, spec),
    }
}

fn vect<C>(c: &C, spec: &CaseSpec) -> Vec<Record>
where
    C: Sampler + Exhaustive,
    C::Map: Eq + Hash,
{
    match spec.law {
        Law::QuotientAdjunction | Law::ComprehensionAdjunction => exhaustive_adjunction(c, spec),
        _ => structural(c, spec),
    }
}

fn hilb(c: &Corrupted<HilbChain>, spec: &CaseSpec) -> Vec<Record> {
    match spec.law {
        Law::Factorization => sampled(c, spec, laws::factorization),
        Law::Decomposition => sampled(c, spec, laws::hilb_decomposition),
        _ => structural(c, spec),
    }
}

fn vn(c: &Corrupted<VnChain>, spec: &CaseSpec) -> Vec<Record> {
    match spec.law {
        Law::CompletePositivity => sampled(c, spec, laws::complete_positivity),
        Law::CauchySchwarz => sampled(c, spec, laws::cauchy_schwarz),
        _ => measured(c, spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for i in InstanceId::ALL {
            assert_eq!(i.name().parse::<InstanceId>().unwrap(), i);
        }
        for l in Law::ALL {
            assert_eq!(l.name().parse::<Law>().unwrap(), l);
            assert_eq!(serde_json::to_value(l).unwrap(), serde_json::json!(l.name()));
        }
        assert!("nope".parse::<Law>().is_err());
    }

    #[test]
    fn every_law_applies_somewhere() {
        for l in Law::ALL {
            assert!(InstanceId::ALL.iter().any(|i| i.laws().contains(&l)), "{l}");
        }
    }

    #[test]
    fn inapplicable_law_yields_no_report() {
        assert!(run_law(&CaseSpec::new(InstanceId::Vect, Law::Instrument, 1)).is_none());
    }

    #[test]
    fn reports_are_deterministic() {
        let mut spec = CaseSpec::new(InstanceId::Dist, Law::QuotientAdjunction, 5);
        spec.cases = Some(20);
        let a = run_law(&spec).unwrap();
        let b = run_law(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.passed(), "{a:?}");
    }

    #[test]
    fn corruption_is_caught() {
        for corrupt in [Corruption::Quotient, Corruption::Comprehension] {
            let law = match corrupt {
                Corruption::Quotient => Law::QuotientAdjunction,
                Corruption::Comprehension => Law::ComprehensionAdjunction,
            };
            let mut spec = CaseSpec::new(InstanceId::Sets, law, 3);
            spec.corrupt = Some(corrupt);
            let r = run_law(&spec).unwrap();
            assert!(r.failures > 0);
        }
    }

    #[test]
    fn replay_runs_one_case() {
        let mut spec = CaseSpec::new(InstanceId::Vn, Law::Composition, 9);
        spec.replay = Some(case_seed(9, 3));
        let r = run_law(&spec).unwrap();
        assert_eq!(r.cases, 1);
        assert_eq!(r.witnesses.len(), 0);
    }
}
