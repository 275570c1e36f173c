//! Numerical evaluation of the equivalent closed-range conditions and their
//! aggregation into a consistency-checked report.

mod conditions;
mod config;
mod probes;
mod report;

pub use conditions::{
    condition_i_kernel_test, condition_ii_density_test, condition_iii_gc_test, condition_window_test, kernel_depth_for,
    kernel_integral_empirical, kernel_integral_pushforward, GcPoint, KernelPoint, WindowPoint,
};
pub use config::{CriteriaConfig, DirectProbeConfig, KernelIntegral, LueckingConfig};
pub use probes::{
    default_probe_family, direct_norm_ratio_probe, luecking_centers, luecking_probe, DirectProbeReport, LueckingPoint,
    LueckingReport,
};
pub use report::{analyze, analyze_symbol, ClosedRangeReport, Curves, REPORT_SCHEMA};

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::hardy::HardyError;
use crate::nevanlinna::NevanlinnaError;
use crate::numerics::NumericsError;
use crate::symbols::SymbolError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriteriaError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate test function `{0}` has zero norm")]
    ZeroNorm(String),
    #[error(transparent)]
    Hardy(#[from] HardyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Nevanlinna(#[from] NevanlinnaError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum VerdictState {
    Closed,
    NotClosed,
    Inconclusive,
}

impl VerdictState {
    /// One-letter code used in tables.
    pub fn code(self) -> char {
        match self {
            Self::Closed => 'C',
            Self::NotClosed => 'N',
            Self::Inconclusive => '?',
        }
    }
}

/// Outcome of one criterion: the estimate and how it was thresholded.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Verdict {
    pub state: VerdictState,
    pub estimate: f64,
    /// At or above: `Closed`.
    pub threshold: f64,
    /// At or below: `NotClosed`.
    pub not_closed_threshold: f64,
    pub note: String,
}

impl Verdict {
    /// `Closed` at or above `threshold`, `NotClosed` at or below
    /// `threshold / band`, `Inconclusive` in between.
    pub fn from_estimate(estimate: f64, threshold: f64, band: f64, note: impl Into<String>) -> Self {
        let low = threshold / band;
        let state = if !estimate.is_finite() {
            VerdictState::Inconclusive
        } else if estimate >= threshold {
            VerdictState::Closed
        } else if estimate <= low {
            VerdictState::NotClosed
        } else {
            VerdictState::Inconclusive
        };
        Self {
            state,
            estimate,
            threshold,
            not_closed_threshold: low,
            note: note.into(),
        }
    }

    /// Inconclusive verdict carrying the error that prevented the estimate.
    pub fn failed(error: &CriteriaError) -> Self {
        Self {
            state: VerdictState::Inconclusive,
            estimate: f64::NAN,
            threshold: f64::NAN,
            not_closed_threshold: f64::NAN,
            note: format!("error: {error}"),
        }
    }
}
