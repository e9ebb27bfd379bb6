//! Slices `{t} × S²`: Jacobi spectra, the slice hypotheses for the
//! Schwarzschild-type families and the threshold radius where a slice's
//! own mean curvature meets them.

use super::{Verdict, TIE_TOL};
use crate::curvature::{curvature_state, ricci_eigenvalues, ricci_normal, scalar_curvature, CurvatureState, SCAN_POINTS};
use crate::embedding::mean_vector_norm;
use crate::error::{Error, Result};
use crate::numeric::{bisect, sup_on_grid, Extremum};
use crate::warping::{Interval, ModelKind, WarpingModel};

pub const DEFAULT_L_MAX: usize = 8;

/// A named threshold evaluated at one slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCmp {
    pub name: &'static str,
    pub required: f64,
    pub actual: f64,
    /// The theorem asks for `H² > required` rather than `>=`.
    pub strict: bool,
    pub verdict: Verdict,
}

impl ThresholdCmp {
    fn new(name: &'static str, required: f64, actual: f64, strict: bool) -> Self {
        Self { name, required, actual, strict, verdict: Verdict::from_margin(actual - required) }
    }

    pub fn satisfied(&self) -> bool {
        match self.verdict {
            Verdict::Satisfied => true,
            Verdict::Boundary => !self.strict,
            Verdict::Violated => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceReport {
    pub x: f64,
    pub t: f64,
    pub r: f64,
    pub h_mean: f64,
    pub k_tan: f64,
    pub k_rad: f64,
    /// `μ_l` for `l = 1..=l_max`.
    pub mu: Vec<f64>,
    pub stable: bool,
    pub stable_by_ordering: bool,
    pub stable_by_mu1: bool,
    pub thresholds: Vec<ThresholdCmp>,
}

fn ordering_holds(s: &CurvatureState) -> bool {
    s.k_tan - s.k_rad >= -TIE_TOL * (1.0 + s.k_tan.abs().max(s.k_rad.abs()))
}

/// Jacobi spectrum `μ_l = l(l+1)/h² - Ric(N,N) - ‖A‖²` of the slice at `x`,
/// with `ν = -1`, `‖A‖² = 2H²`.
pub fn slice_report(model: &WarpingModel, x: f64, l_max: usize) -> Result<SliceReport> {
    if l_max == 0 {
        return Err(Error::InvalidParameters("l_max must be at least 1".into()));
    }
    let s = curvature_state(model, x)?;
    let t = model.t_of(x)?;
    let hm = s.slice_h();
    let h2 = hm * hm;
    let shift = ricci_normal(&s, -1.0)? + 2.0 * h2;
    let mu: Vec<f64> = (1..=l_max)
        .map(|l| {
            let l = l as f64;
            l * (l + 1.0) / (s.h * s.h) - shift
        })
        .collect();
    let stable_by_mu1 = mu[0] >= -TIE_TOL * (1.0 + shift.abs());
    let stable_by_ordering = ordering_holds(&s);

    let mut thresholds = Vec::new();
    if let Ok(hyp) = thm_slice_hypothesis(model, s.h, hm) {
        thresholds.push(ThresholdCmp::new("slice_hypothesis", hyp.required_h2, h2, false));
    }
    if stable_by_ordering {
        thresholds.push(ThresholdCmp::new("main_i", -s.k_rad, h2, false));
    }
    if s.k_rad - s.k_tan >= -TIE_TOL * (1.0 + s.k_tan.abs()) {
        thresholds.push(ThresholdCmp::new("main_ii", -s.k_tan, h2, false));
    }
    let (e1, e2) = ricci_eigenvalues(&s);
    thresholds.push(ThresholdCmp::new("frensel", -0.5 * e1.min(e2), h2, true));
    if let Ok(mv) = mean_vector_norm(model, x) {
        let required = -3.0 * (scalar_curvature(&s) - 0.75 * mv * mv);
        thresholds.push(ThresholdCmp::new("codim1", required, h2, true));
    }

    Ok(SliceReport {
        x,
        t,
        r: s.h,
        h_mean: hm,
        k_tan: s.k_tan,
        k_rad: s.k_rad,
        mu,
        stable: stable_by_mu1,
        stable_by_ordering,
        stable_by_mu1,
        thresholds,
    })
}

/// Mean-curvature hypotheses of the slice theorems for `dss` and `rn`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceHypothesis {
    pub required_h2: f64,
    pub actual_h2: f64,
    pub margin: f64,
    pub verdict: Verdict,
    /// Charge gate `2q <= √15 m/4`, `rn` only.
    pub gate: Option<bool>,
    pub gate_margin: Option<f64>,
}

impl SliceHypothesis {
    pub fn satisfied(&self) -> bool {
        self.verdict.holds_non_strict() && self.gate.unwrap_or(true)
    }
}

fn required_h2(kind: &ModelKind, r: f64) -> Result<f64> {
    let r3 = r * r * r;
    match *kind {
        ModelKind::Dss { m, c } => Ok(m / (2.0 * r3) - c),
        ModelKind::Rn { m, q } => Ok((m - 2.0 * q * q / r) / (2.0 * r3)),
        _ => Err(Error::ModelNotDssOrRn),
    }
}

/// `H² >= m/(2r0³) - c` (dss) or `H² >= (m - 2q²/r0)/(2r0³)` together
/// with `2q <= √15 m/4` (rn).
pub fn thm_slice_hypothesis(model: &WarpingModel, r0: f64, h_mean: f64) -> Result<SliceHypothesis> {
    let required = required_h2(model.kind(), r0)?;
    let d = model.domain();
    if !d.contains(r0) {
        return Err(Error::OutOfDomain { x: r0, lo: d.lo, hi: d.hi });
    }
    let actual = h_mean * h_mean;
    let margin = actual - required;
    let (gate, gate_margin) = match *model.kind() {
        ModelKind::Rn { m, q } => {
            let gm = 15f64.sqrt() * m / 4.0 - 2.0 * q;
            (Some(gm >= -TIE_TOL), Some(gm))
        }
        _ => (None, None),
    };
    Ok(SliceHypothesis { required_h2: required, actual_h2: actual, margin, verdict: Verdict::from_margin(margin), gate, gate_margin })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRadius {
    pub r_star: f64,
    /// `3m/2` (dss) or `(3m + √(9m² - 32q²))/4` (rn).
    pub closed_form: f64,
}

/// Radius where `H(r)² - required(r)` changes sign, found by scanning the
/// domain and bisecting the first bracket.
pub fn slice_threshold_radius(model: &WarpingModel) -> Result<ThresholdRadius> {
    let kind = model.kind().clone();
    let closed_form = match kind {
        ModelKind::Dss { m, .. } => 1.5 * m,
        ModelKind::Rn { m, q } => (3.0 * m + (9.0 * m * m - 32.0 * q * q).max(0.0).sqrt()) / 4.0,
        _ => return Err(Error::ModelNotDssOrRn),
    };
    let margin = |r: f64| -> f64 {
        match (model.jet(r), required_h2(&kind, r)) {
            (Ok(j), Ok(req)) => {
                let hm = j.hp / j.h;
                hm * hm - req
            }
            _ => f64::NAN,
        }
    };
    let iv = model.default_interval(1e-9);
    let grid = iv.grid(SCAN_POINTS);
    let vals: Vec<f64> = grid.iter().map(|&r| margin(r)).collect();
    for i in 0..grid.len() - 1 {
        let (a, b) = (vals[i], vals[i + 1]);
        if a == 0.0 {
            return Ok(ThresholdRadius { r_star: grid[i], closed_form });
        }
        if a.is_finite() && b.is_finite() && a.signum() != b.signum() {
            let r_star = bisect(margin, grid[i], grid[i + 1], 0.0).ok_or(Error::NoCrossingInDomain)?;
            return Ok(ThresholdRadius { r_star, closed_form });
        }
    }
    Err(Error::NoCrossingInDomain)
}

/// Whether the slice mean curvature is non-increasing at `x`:
/// `h'' h - h'^2 <= 0` (in arc length).
pub fn slice_monotonicity(model: &WarpingModel, x: f64) -> Result<bool> {
    let j = model.jet(x)?;
    Ok(j.hpp * j.h - j.hp * j.hp <= TIE_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MainCase {
    /// `K_tan >= K_rad`; threshold `sup(-K_rad)`.
    I,
    /// `K_tan <= K_rad`; threshold `sup(-K_tan)`.
    II,
}

/// Supremum of `-K_rad` (case I) or `-K_tan` (case II) over the interval,
/// after checking the curvature ordering the case assumes.
pub fn stab_main_threshold(model: &WarpingModel, iv: Interval, case: MainCase) -> Result<Extremum> {
    let r = model.resolve(iv)?;
    let grid = r.grid(SCAN_POINTS);
    for &x in &grid {
        let s = curvature_state(model, x)?;
        let gap = match case {
            MainCase::I => s.k_tan - s.k_rad,
            MainCase::II => s.k_rad - s.k_tan,
        };
        if gap < -TIE_TOL * (1.0 + s.k_tan.abs().max(s.k_rad.abs())) {
            return Err(Error::CasePreconditionViolated { x });
        }
    }
    let f = |x: f64| match curvature_state(model, x) {
        Ok(s) => match case {
            MainCase::I => -s.k_rad,
            MainCase::II => -s.k_tan,
        },
        Err(_) => f64::NEG_INFINITY,
    };
    Ok(sup_on_grid(f, &grid, r.hi_capped, r.lo_capped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn round_sphere_is_neutral() {
        let m = WarpingModel::space_form(1.0).unwrap();
        let rep = slice_report(&m, FRAC_PI_4, DEFAULT_L_MAX).unwrap();
        assert!(rep.mu[0].abs() < 1e-14);
        assert!(rep.stable && rep.stable_by_ordering);
        assert_eq!(rep.mu.len(), 8);
        assert!(rep.mu.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn schwarzschild_slice_at_two() {
        let m = WarpingModel::dss(1.0, 0.0).unwrap();
        let rep = slice_report(&m, 2.0, 3).unwrap();
        assert!((rep.h_mean.powi(2) - 0.125).abs() < 1e-15);
        assert!((rep.mu[0] - 0.375).abs() < 1e-14);
        let hyp = rep.thresholds.iter().find(|c| c.name == "slice_hypothesis").unwrap();
        assert!((hyp.required - 0.0625).abs() < 1e-15);
        assert!(hyp.satisfied());
    }

    #[test]
    fn hypothesis_examples() {
        let m = WarpingModel::dss(1.0, 0.0).unwrap();
        let h = thm_slice_hypothesis(&m, 2.0, 0.125f64.sqrt()).unwrap();
        assert_eq!(h.verdict, Verdict::Satisfied);
        assert!((h.required_h2 - 0.0625).abs() < 1e-16);
        let rn = WarpingModel::rn(2.0, 0.5).unwrap();
        let h = thm_slice_hypothesis(&rn, 3.0, 0.1).unwrap();
        assert_eq!(h.gate, Some(true));
        assert!((h.gate_margin.unwrap() - (15f64.sqrt() / 2.0 - 1.0)).abs() < 1e-15);
        let hyp = WarpingModel::dss(1e-12, -1.0).unwrap();
        let h = thm_slice_hypothesis(&hyp, 1.0, 1.0).unwrap();
        assert!((h.required_h2 - 1.0).abs() < 1e-11);
        let sf = WarpingModel::space_form(1.0).unwrap();
        assert_eq!(thm_slice_hypothesis(&sf, 1.0, 1.0), Err(Error::ModelNotDssOrRn));
    }

    #[test]
    fn threshold_radius() {
        for c in [0.0, -1.0, 0.05] {
            let r = slice_threshold_radius(&WarpingModel::dss(1.0, c).unwrap()).unwrap();
            assert!((r.r_star - 1.5).abs() < 1e-10, "c={c}: {}", r.r_star);
        }
        let r = slice_threshold_radius(&WarpingModel::rn(2.0, 0.5).unwrap()).unwrap();
        assert!((r.r_star - (6.0 + 28f64.sqrt()) / 4.0).abs() < 1e-10);
        assert!((r.closed_form - 2.822_875_655_532_295).abs() < 1e-12);
        assert_eq!(
            slice_threshold_radius(&WarpingModel::dss(1.0, 0.0).unwrap().with_cap(1.4).unwrap()),
            Err(Error::NoCrossingInDomain)
        );
    }

    #[test]
    fn monotonicity() {
        assert!(slice_monotonicity(&WarpingModel::space_form(0.0).unwrap(), 1.0).unwrap());
        assert!(slice_monotonicity(&WarpingModel::space_form(1.0).unwrap(), 1.0).unwrap());
        let m = WarpingModel::dss(1.0, 0.0).unwrap();
        assert!(!slice_monotonicity(&m, 1.4).unwrap());
        assert!(slice_monotonicity(&m, 1.6).unwrap());
    }

    #[test]
    fn main_threshold() {
        let m = WarpingModel::dss(1.0, 0.0).unwrap();
        let e = stab_main_threshold(&m, Interval::new(2.0, f64::INFINITY), MainCase::I).unwrap();
        assert!((e.value - 0.0625).abs() < 1e-12 && e.attained);
        assert!(matches!(
            stab_main_threshold(&m, Interval::new(2.0, 4.0), MainCase::II),
            Err(Error::CasePreconditionViolated { .. })
        ));
        let rn = WarpingModel::rn(2.0, 0.5).unwrap();
        let e = stab_main_threshold(&rn, Interval::new(2.0, f64::INFINITY), MainCase::I).unwrap();
        assert!((e.value - 1.75 / 16.0).abs() < 1e-12);
        let sf = WarpingModel::space_form(1.0).unwrap();
        let e = stab_main_threshold(&sf, Interval::new(0.5, 2.5), MainCase::I).unwrap();
        assert!((e.value + 1.0).abs() < 1e-12);
    }
}
