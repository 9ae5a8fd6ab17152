//! Seeded law checking across all instances.
//!
//! Each law is checked per instance either on sampled cases (one RNG per case,
//! derived from the run seed) or exhaustively over small enumerated hom-sets.
//! Failures are reported with a witness that can be replayed from its case seed.

mod corrupt;
mod formulas;
mod laws;
mod report;
mod run;
mod sample;

pub use corrupt::{Corrupted, Corruption};
pub use formulas::{AssertFormula, InstrumentFormula};
pub use report::{LawReport, SuiteReport, Witness, MAX_WITNESSES};
pub use run::{run_law, run_suite, CaseSpec, InstanceId, Law, SuiteConfig, DECOMPOSITION_MAX_RING, DEFAULT_SEED};
pub use sample::{case_rng, case_seed, Bounds, CaseRng, Exhaustive, Sampler};
