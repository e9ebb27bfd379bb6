//! Stability of constant-mean-curvature surfaces in warped products:
//! slice spectra and theorem hypotheses, the ε-window polynomials and
//! their mean-curvature thresholds, `c0(M)`, the Q-sum identities, and
//! the integral inequalities on slices.

mod c0;
mod integrals;
mod qsum;
mod slice;
mod window;

pub use c0::{c0, classify, point_class, C0Case, C0Result, C0Piece, Classification, PointClass, TheoremPath};
pub use integrals::{slice_integral_checks, SliceIntegrals};
pub use qsum::{general_threshold, qsum, qsum_forms, qsum_general, GeneralThresholds, QSumInput, ThresholdValue};
pub use slice::{
    slice_monotonicity, slice_report, slice_threshold_radius, stab_main_threshold, thm_slice_hypothesis,
    MainCase, SliceHypothesis, SliceReport, ThresholdCmp, ThresholdRadius, DEFAULT_L_MAX,
};
pub use window::{
    delta_thresholds, eps_window_check, eps_window_scan, h2_threshold, h2_threshold_case, p_a_poly, p_poly, Regime,
    StabilityWindow, ThresholdCase, EPS_WINDOW_HI, EPS_WINDOW_LO,
};

/// Ties within this absolute margin are reported as [`Verdict::Boundary`].
pub const TIE_TOL: f64 = 1e-12;

/// Outcome of comparing a quantity with a required bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated,
    Boundary,
}

impl Verdict {
    /// Verdict for `margin >= 0`, ties within [`TIE_TOL`] flagged.
    pub fn from_margin(margin: f64) -> Self {
        if margin.abs() <= TIE_TOL {
            Verdict::Boundary
        } else if margin > 0.0 {
            Verdict::Satisfied
        } else {
            Verdict::Violated
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
            Verdict::Boundary => "boundary",
        }
    }

    /// Whether a non-strict (`>=`) inequality holds.
    pub fn holds_non_strict(&self) -> bool {
        !matches!(self, Verdict::Violated)
    }
}
