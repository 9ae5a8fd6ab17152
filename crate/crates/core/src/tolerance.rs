use serde::{Deserialize, Serialize};

/// Numerical tolerances for the float-backed instances.
///
/// `eq` decides equality of maps and predicates; `hom` is the slack granted to
/// hom-condition preconditions of the transposes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eq: f64,
    pub hom: f64,
}

impl Tolerances {
    pub const DEFAULT_EQ: f64 = 1e-9;
    pub const DEFAULT_HOM: f64 = 1e-6;

    /// Overrides the equality tolerance, keeping the hom slack at least as loose.
    pub fn with_eq(eq: f64) -> Self {
        Tolerances {
            eq,
            hom: Self::DEFAULT_HOM.max(eq),
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eq: Self::DEFAULT_EQ,
            hom: Self::DEFAULT_HOM,
        }
    }
}
