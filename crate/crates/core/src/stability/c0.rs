//! Classification of an interval by the curvature ratio
//! `ρ = K_rad/K_tan` and the threshold `c0` above which stable CMC
//! surfaces have genus zero.
//!
//! With `K_tan > 0` each point falls in one class:
//!
//! | class  | ratio              | pointwise value                |
//! |--------|--------------------|--------------------------------|
//! | window | `0 <= ρ <= 2+√5`   | `0`                            |
//! | A      | `ρ > 2+√5`         | `K_tan (ρ² - 4ρ - 1)/4`        |
//! | B      | `-1 <= ρ < 0`      | `-K_rad`                       |
//! | C      | `ρ < -1`           | `K_tan (x² + 4x - 1)/4`, `x=-ρ` |
//!
//! The pointwise value is continuous across classes and equals
//! `h2_threshold(ρ - 1, √K_tan)` off the window.

use super::window::EPS_WINDOW_HI;
use crate::curvature::{brendle_from_state, curvature_state, CurvatureState, SCAN_POINTS};
use crate::error::{Error, Result};
use crate::numeric::{bisect, sup_on_grid};
use crate::warping::{Interval, ResolvedInterval, WarpingModel};

/// `2 + √5`.
const RHO_A: f64 = EPS_WINDOW_HI + 1.0;
const CLASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Window,
    A,
    B,
    C,
    /// `K_tan <= 0`.
    Inapplicable,
}

/// Off-window class of a `c0` piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum C0Case {
    A,
    B,
    C,
}

impl C0Case {
    pub fn id(&self) -> &'static str {
        match self {
            C0Case::A => "a",
            C0Case::B => "b",
            C0Case::C => "c",
        }
    }
}

fn class_of_ratio(rho: f64) -> PointClass {
    if rho > RHO_A + CLASS_TOL {
        PointClass::A
    } else if rho >= -CLASS_TOL {
        PointClass::Window
    } else if rho >= -1.0 - CLASS_TOL {
        PointClass::B
    } else {
        PointClass::C
    }
}

pub fn point_class(k_tan: f64, k_rad: f64) -> PointClass {
    if k_tan <= 0.0 {
        PointClass::Inapplicable
    } else {
        class_of_ratio(k_rad / k_tan)
    }
}

/// Pointwise threshold value for `K_tan > 0`.
fn point_value(k_tan: f64, k_rad: f64) -> f64 {
    let rho = k_rad / k_tan;
    match class_of_ratio(rho) {
        PointClass::A => k_tan * (rho * rho - 4.0 * rho - 1.0) / 4.0,
        PointClass::B => -k_rad,
        PointClass::C => {
            let x = -rho;
            k_tan * (x * x + 4.0 * x - 1.0) / 4.0
        }
        _ => 0.0,
    }
}

/// Supremum of the pointwise value over one class piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C0Piece {
    pub class: PointClass,
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    pub at: f64,
    pub attained: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct C0Result {
    pub case: C0Case,
    pub value: f64,
    pub at: f64,
    pub attained: bool,
    /// Class boundaries located by bisection.
    pub boundaries: Vec<f64>,
    pub pieces: Vec<C0Piece>,
    /// The interval also contains window points.
    pub mixed: bool,
}

struct Scan {
    iv: ResolvedInterval,
    grid: Vec<f64>,
    states: Vec<CurvatureState>,
}

fn scan(model: &WarpingModel, iv: Interval) -> Result<Scan> {
    let r = model.resolve(iv)?;
    let grid = r.grid(SCAN_POINTS);
    let states = grid.iter().map(|&x| curvature_state(model, x)).collect::<Result<Vec<_>>>()?;
    Ok(Scan { iv: r, grid, states })
}

fn ratio(model: &WarpingModel, x: f64) -> f64 {
    curvature_state(model, x).map(|s| s.k_rad / s.k_tan).unwrap_or(f64::NAN)
}

/// Split points between consecutive grid samples of different class.
fn class_boundaries(model: &WarpingModel, sc: &Scan) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..sc.grid.len() - 1 {
        let (s0, s1) = (&sc.states[i], &sc.states[i + 1]);
        if point_class(s0.k_tan, s0.k_rad) == point_class(s1.k_tan, s1.k_rad) {
            continue;
        }
        let (r0, r1) = (s0.k_rad / s0.k_tan, s1.k_rad / s1.k_tan);
        let mut cuts: Vec<f64> = [-1.0 - CLASS_TOL, -CLASS_TOL, RHO_A + CLASS_TOL]
            .into_iter()
            .filter(|&b| (r0 - b) * (r1 - b) <= 0.0)
            .filter_map(|b| bisect(|x| ratio(model, x) - b, sc.grid[i], sc.grid[i + 1], 0.0))
            .collect();
        cuts.sort_by(f64::total_cmp);
        out.extend(cuts);
    }
    out
}

/// `c0` over the interval: the maximum over class pieces of the supremum of
/// the pointwise value.
pub fn c0(model: &WarpingModel, iv: Interval) -> Result<C0Result> {
    let sc = scan(model, iv)?;
    if let Some(s) = sc.states.iter().find(|s| s.k_tan <= 0.0) {
        return Err(Error::HypothesisViolated(format!("K_tan = {:e} <= 0 at x = {}", s.k_tan, s.x)));
    }
    let boundaries = class_boundaries(model, &sc);
    let mut ends = vec![sc.iv.lo];
    ends.extend(boundaries.iter().copied());
    ends.push(sc.iv.hi);

    let value_at = |x: f64| {
        curvature_state(model, x)
            .map(|s| point_value(s.k_tan, s.k_rad))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let mut pieces = Vec::new();
    for (k, w) in ends.windows(2).enumerate() {
        if w[1] <= w[0] {
            continue;
        }
        let first = k == 0;
        let last = k == ends.len() - 2;
        let sub = ResolvedInterval {
            lo: w[0],
            hi: w[1],
            lo_capped: first && sc.iv.lo_capped,
            hi_capped: last && sc.iv.hi_capped,
        };
        let mid = 0.5 * (w[0] + w[1]);
        let class = curvature_state(model, mid).map(|s| point_class(s.k_tan, s.k_rad))?;
        let e = sup_on_grid(value_at, &sub.grid(SCAN_POINTS / 4), sub.hi_capped, sub.lo_capped);
        pieces.push(C0Piece { class, lo: w[0], hi: w[1], value: e.value, at: e.at, attained: e.attained });
    }

    let mixed = pieces.iter().any(|p| p.class == PointClass::Window);
    let best = pieces
        .iter()
        .filter(|p| p.class != PointClass::Window)
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| Error::HypothesisViolated("every point lies in the window 0 <= K_rad/K_tan <= 2+sqrt(5)".into()))?;
    let case = match best.class {
        PointClass::A => C0Case::A,
        PointClass::B => C0Case::B,
        _ => C0Case::C,
    };
    let at = best.at;
    let case = curvature_state(model, at)
        .ok()
        .and_then(|s| match point_class(s.k_tan, s.k_rad) {
            PointClass::A => Some(C0Case::A),
            PointClass::B => Some(C0Case::B),
            PointClass::C => Some(C0Case::C),
            _ => None,
        })
        .unwrap_or(case);
    Ok(C0Result { case, value: best.value, at, attained: best.attained, boundaries, pieces, mixed })
}

/// Which genus-zero result an interval falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremPath {
    /// Every point in the window: no mean-curvature threshold.
    Window,
    /// Some point outside the window: genus zero for `H² > c0`.
    Threshold,
    /// `K_tan <= 0` somewhere.
    Inapplicable,
}

impl TheoremPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremPath::Window => "window",
            TheoremPath::Threshold => "threshold",
            TheoremPath::Inapplicable => "inapplicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub path: TheoremPath,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub c0: Option<C0Result>,
    pub mixed: bool,
    /// Brendle's inequality at every scan point.
    pub brendle_holds: bool,
    /// `K_tan >= K_rad` at every scan point.
    pub ordering_holds: bool,
}

pub fn classify(model: &WarpingModel, iv: Interval) -> Result<Classification> {
    let sc = scan(model, iv)?;
    let brendle_holds = sc.states.iter().all(|s| brendle_from_state(s).holds);
    let ordering_holds = sc
        .states
        .iter()
        .all(|s| s.k_tan - s.k_rad >= -CLASS_TOL * (1.0 + s.k_tan.abs()));
    let inapplicable = sc.states.iter().any(|s| s.k_tan <= 0.0);
    let (ratio_min, ratio_max) = if inapplicable {
        (f64::NAN, f64::NAN)
    } else {
        let rho = |x: f64| ratio(model, x);
        let hi = sup_on_grid(rho, &sc.grid, sc.iv.hi_capped, sc.iv.lo_capped);
        let lo = sup_on_grid(|x| -rho(x), &sc.grid, sc.iv.hi_capped, sc.iv.lo_capped);
        (-lo.value, hi.value)
    };
    if inapplicable {
        return Ok(Classification {
            path: TheoremPath::Inapplicable,
            ratio_min,
            ratio_max,
            c0: None,
            mixed: false,
            brendle_holds,
            ordering_holds,
        });
    }
    let all_window = sc
        .states
        .iter()
        .all(|s| point_class(s.k_tan, s.k_rad) == PointClass::Window)
        && class_of_ratio(ratio_min) == PointClass::Window
        && class_of_ratio(ratio_max) == PointClass::Window;
    if all_window {
        return Ok(Classification {
            path: TheoremPath::Window,
            ratio_min,
            ratio_max,
            c0: None,
            mixed: false,
            brendle_holds,
            ordering_holds,
        });
    }
    let c = c0(model, iv)?;
    Ok(Classification {
        path: TheoremPath::Threshold,
        ratio_min,
        ratio_max,
        mixed: c.mixed,
        c0: Some(c),
        brendle_holds,
        ordering_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::window::h2_threshold;
    use crate::warping::FnProfile;
    use std::sync::Arc;

    #[test]
    fn value_matches_eps_threshold() {
        for &(kt, kr) in &[(1.0, 5.0), (2.0, -1.0), (0.5, -0.3), (1.5, -4.0), (1.0, -1.0)] {
            let v = point_value(kt, kr);
            let (_, h2) = h2_threshold(kr / kt - 1.0, kt.sqrt()).unwrap();
            assert!((v - h2).abs() < 1e-12 * (1.0 + v.abs()), "{kt} {kr}");
        }
    }

    #[test]
    fn case_c_dominates_radial() {
        for x in [1.0, 1.5, 3.0, 10.0] {
            let v = point_value(1.0, -x);
            assert!(v >= x - 1e-15);
        }
    }

    #[test]
    fn unit_hyperboloid() {
        let m = WarpingModel::hyperboloid(1.0).unwrap();
        let r = c0(&m, Interval::new(f64::NEG_INFINITY, f64::INFINITY)).unwrap();
        assert_eq!(r.case, C0Case::B);
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
        assert!(r.at.abs() < 1e-6);
        assert!(r.attained);
    }

    #[test]
    fn ellipsoid_classes() {
        let round = WarpingModel::ellipsoid(1.0).unwrap();
        let iv = round.default_interval(0.02);
        let c = classify(&round, Interval::new(iv.lo, iv.hi)).unwrap();
        assert_eq!(c.path, TheoremPath::Window);
        let thin = WarpingModel::ellipsoid(0.3).unwrap();
        let iv = thin.default_interval(0.02);
        let c = classify(&thin, Interval::new(iv.lo, iv.hi)).unwrap();
        assert_eq!(c.path, TheoremPath::Threshold);
        assert!(c.mixed);
        let r = c.c0.unwrap();
        assert_eq!(r.case, C0Case::A);
        assert!(!r.boundaries.is_empty());
    }

    #[test]
    fn constant_ratio_case_a() {
        let rho = 3.0 + 5f64.sqrt();
        let kt = 0.7;
        assert_eq!(point_class(kt, rho * kt), PointClass::A);
        let v = point_value(kt, rho * kt);
        assert!((v - kt * (rho * rho - 4.0 * rho - 1.0) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn inapplicable_and_window_errors() {
        let flat = WarpingModel::space_form(-1.0).unwrap();
        let c = classify(&flat, Interval::new(0.5, 2.0)).unwrap();
        assert_eq!(c.path, TheoremPath::Inapplicable);
        assert!(matches!(c0(&flat, Interval::new(0.5, 2.0)), Err(Error::HypothesisViolated(_))));
        let sphere = WarpingModel::space_form(1.0).unwrap();
        assert!(matches!(c0(&sphere, Interval::new(0.5, 2.0)), Err(Error::HypothesisViolated(_))));
        let p = FnProfile::new("bump", (-1.0, 1.0), |s| (2.0 + s * s, 2.0 * s, 2.0));
        let m = WarpingModel::profile(Arc::new(p)).unwrap();
        assert!(classify(&m, Interval::new(-0.5, 0.5)).is_ok());
    }
}
