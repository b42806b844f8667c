//! Brute-force cross-checks.
//!
//! Everything here is computed directly from the definitions: Gabor
//! coefficients by quadrature, the coefficient energy by summing shells in
//! `m`, the right-hand side of the Walnut expansion, truncated Gram matrices
//! and Rayleigh ratios of random span elements.

pub mod energy;
pub mod fourier;
pub mod gram;
pub mod probe;
pub mod quadrature;
pub mod system;
pub mod test_function;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use energy::{
    analysis_energy, analysis_energy_with, coefficient, inner_product, walnut_identity_check, walnut_rhs,
    EnergyConfig, EnergyEstimate, WalnutTerms,
};
pub use gram::{eigen_extremes, gram_matrix, identity_deviation};
pub use probe::{bump_probe, frame_ratio_probe, frame_ratio_probe_with, ProbeOutcome};
pub use system::GaborSystem;
pub use test_function::{Atom, AtomCombination, TestFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("quadrature needs {needed} nodes on one panel, budget is {budget}")]
    ResolutionInsufficient { needed: usize, budget: usize },
    #[error("coefficient shells did not settle by |m| = {m_max} (tail bound {tail_bound:e})")]
    NonConvergence { m_max: usize, tail_bound: f64 },
    #[error("gram matrix is not hermitian (deviation {deviation:e})")]
    NonHermitian { deviation: f64 },
    #[error("test function is identically zero")]
    ZeroTestFunction,
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OracleQuantity {
    WalnutDiscrepancy,
    RayleighRatio,
    GramLambdaMin,
    GramLambdaMax,
    GramIdentityDeviation,
}

impl OracleQuantity {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleQuantity::WalnutDiscrepancy => "WalnutDiscrepancy",
            OracleQuantity::RayleighRatio => "RayleighRatio",
            OracleQuantity::GramLambdaMin => "GramLambdaMin",
            OracleQuantity::GramLambdaMax => "GramLambdaMax",
            OracleQuantity::GramIdentityDeviation => "GramIdentityDeviation",
        }
    }
}

impl std::fmt::Display for OracleQuantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One oracle number plus the truncation parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub quantity: OracleQuantity,
    pub value: f64,
    #[serde(default)]
    pub metadata: BTreeMap<String, f64>,
}

impl OracleReport {
    pub fn new(quantity: OracleQuantity, value: f64) -> Self {
        OracleReport { quantity, value, metadata: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.metadata.insert(key.to_string(), value);
        self
    }
}
