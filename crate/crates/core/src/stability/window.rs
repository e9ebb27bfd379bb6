//! The quartic `p(y) = 4(1+ε) - 2εy - ε²y²` on `y = 1 - ν² ∈ [0, 1]`
//! and the mean-curvature thresholds that make `p_a(y) = 4H_a² + p(y)`
//! positive when `ε` leaves `[-1, 1+√5]`.

use crate::error::{Error, Result};
use crate::numeric::linspace;

pub const EPS_WINDOW_LO: f64 = -1.0;
/// `1 + √5`.
pub const EPS_WINDOW_HI: f64 = 3.236_067_977_499_79;

/// Slack applied when comparing polynomial roots with `0` and `1`.
const ROOT_TOL: f64 = 1e-12;

fn check_y(y: f64) -> Result<()> {
    if (0.0..=1.0).contains(&y) {
        Ok(())
    } else {
        Err(Error::YOutOfRange(y))
    }
}

pub fn p_poly(eps: f64, y: f64) -> Result<f64> {
    check_y(y)?;
    Ok(4.0 * (1.0 + eps) - 2.0 * eps * y - eps * eps * y * y)
}

/// `p_a(y) = 4(H_a² + 1 + ε) - 2εy - ε²y²` with `H_a = H/a`.
pub fn p_a_poly(eps: f64, h_a: f64, y: f64) -> Result<f64> {
    check_y(y)?;
    Ok(4.0 * (h_a * h_a + 1.0 + eps) - 2.0 * eps * y - eps * eps * y * y)
}

/// Whether `p(ε, ·) >= 0` on `[0, 1]`, decided from the roots
/// `y = (-1 ∓ √(5+4ε))/ε` of the concave quadratic.
pub fn eps_window_check(eps: f64) -> bool {
    if eps == 0.0 {
        return true;
    }
    let disc = 5.0 + 4.0 * eps;
    if disc < 0.0 {
        return false;
    }
    let sq = disc.sqrt();
    let r1 = (-1.0 - sq) / eps;
    let r2 = (-1.0 + sq) / eps;
    let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    lo <= ROOT_TOL && hi >= 1.0 - ROOT_TOL
}

/// Same question answered by sampling `p` at `n` points of `[0, 1]`.
pub fn eps_window_scan(eps: f64, n: usize) -> bool {
    linspace(0.0, 1.0, n.max(2))
        .into_iter()
        .all(|y| 4.0 * (1.0 + eps) - 2.0 * eps * y - eps * eps * y * y >= -ROOT_TOL)
}

/// Which side of the window `ε` lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdCase {
    /// `ε > 1 + √5`: `H² > a²(ε² - 2ε - 4)/4`.
    I,
    /// `-2 <= ε < -1`: `H² > a²(|ε| - 1)`.
    II,
    /// `ε < -2`: `H² > a²(ε²/4 + |ε|/2 - 1)`.
    III,
}

impl ThresholdCase {
    pub fn id(&self) -> &'static str {
        match self {
            ThresholdCase::I => "i",
            ThresholdCase::II => "ii",
            ThresholdCase::III => "iii",
        }
    }
}

pub fn h2_threshold_case(eps: f64) -> Option<ThresholdCase> {
    if eps > EPS_WINDOW_HI {
        Some(ThresholdCase::I)
    } else if eps < -2.0 {
        Some(ThresholdCase::III)
    } else if eps < EPS_WINDOW_LO {
        Some(ThresholdCase::II)
    } else {
        None
    }
}

/// Infimal `H²` with `p_a > 0` on `[0, 1]`.
pub fn h2_threshold(eps: f64, a: f64) -> Result<(ThresholdCase, f64)> {
    if a == 0.0 {
        return Err(Error::ZeroA);
    }
    let case = h2_threshold_case(eps).ok_or(Error::EpsInWindow(eps))?;
    let a2 = a * a;
    let e = eps.abs();
    let v = match case {
        ThresholdCase::I => a2 * (eps * eps - 2.0 * eps - 4.0) / 4.0,
        ThresholdCase::II => a2 * (e - 1.0),
        ThresholdCase::III => a2 * (0.25 * e * e + 0.5 * e - 1.0),
    };
    Ok((case, v))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Window,
    Threshold { case: ThresholdCase, h2_min: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityWindow {
    pub regime: Regime,
    pub a: f64,
    pub eps: f64,
    pub delta: f64,
}

/// The window test and thresholds written in `δ = εa²`:
/// window iff `-a² <= δ <= a²(1+√5)`, otherwise `¼a⁻²δ² - ½δ - a²`,
/// `|δ| - a²` or `¼a⁻²δ² + ½|δ| - a²`.
pub fn delta_thresholds(delta: f64, a: f64) -> Result<StabilityWindow> {
    if a == 0.0 {
        return Err(Error::ZeroA);
    }
    let a2 = a * a;
    let eps = delta / a2;
    let d = delta.abs();
    let regime = if delta > a2 * EPS_WINDOW_HI {
        Regime::Threshold { case: ThresholdCase::I, h2_min: 0.25 * delta * delta / a2 - 0.5 * delta - a2 }
    } else if delta < -2.0 * a2 {
        Regime::Threshold { case: ThresholdCase::III, h2_min: 0.25 * delta * delta / a2 + 0.5 * d - a2 }
    } else if delta < -a2 {
        Regime::Threshold { case: ThresholdCase::II, h2_min: d - a2 }
    } else {
        Regime::Window
    };
    Ok(StabilityWindow { regime, a, eps, delta })
}
