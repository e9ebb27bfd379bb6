//! Warping functions `h` for metrics `dt^2 + h(t)^2 dω^2` on `I × S^2`.
//!
//! Four model families are supported:
//!
//! * space forms `h = sin(√c t)/√c`, `t`, `sinh(√-c t)/√-c`;
//! * de Sitter–Schwarzschild (`h'^2 = 1 - m/h - c h^2`);
//! * Reissner–Nordström (`h'^2 = 1 - m/h + q^2/h^2`);
//! * hypersurfaces of revolution with profile `u(s)`, reparametrised by
//!   arc length `t = G(s)`, `G' = sqrt(1 + u'^2)`.
//!
//! Every model is evaluated in its *model coordinate* `x`: the arc length
//! `t` for space forms, the area radius `r = h` for the two ODE families,
//! and the profile abscissa `s` for hypersurfaces of revolution. In that
//! coordinate the jet `(h, h', h'', h''')` (derivatives in `t`) is
//! available in closed form. Evaluation directly in `t` goes through the
//! integrated trajectory (ODE families) or through inversion of `G`
//! (profiles).

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::numeric::{bisect, d1_central4, geomspace_from, linspace};
use crate::quadrature::{composite, integrate_with_endpoints, EndpointSingularity};

/// Default finite stand-in for an infinite end of the model coordinate.
pub const DEFAULT_CAP: f64 = 100.0;

/// Warping function and its first three `t`-derivatives at a model coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub x: f64,
    pub h: f64,
    pub hp: f64,
    pub hpp: f64,
    pub hppp: f64,
}

/// Positive profile function `u(s)` of a hypersurface of revolution.
pub trait ProfileCurve: Send + Sync + fmt::Debug {
    /// Open interval of definition; either end may be infinite.
    fn interval(&self) -> (f64, f64);
    /// `(u, u', u'')` at `s`.
    fn eval(&self, s: f64) -> (f64, f64, f64);
    fn label(&self) -> String;
}

/// Profile `u(s) = sqrt(b^2 - s^2)/b` of the generalized ellipsoid
/// `x^2 + y^2 + z^2 + w^2/b^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    pub b: f64,
}

impl ProfileCurve for Ellipsoid {
    fn interval(&self) -> (f64, f64) {
        (-self.b, self.b)
    }

    fn eval(&self, s: f64) -> (f64, f64, f64) {
        let b = self.b;
        let w = b * b - s * s;
        let sw = w.sqrt();
        (sw / b, -s / (b * sw), -b / (w * sw))
    }

    fn label(&self) -> String {
        format!("ellipsoid(b={})", self.b)
    }
}

/// Profile `u(s) = sqrt(b^2 + s^2)/b` of the generalized hyperboloid
/// `x^2 + y^2 + z^2 - w^2/b^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperboloid {
    pub b: f64,
}

impl ProfileCurve for Hyperboloid {
    fn interval(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn eval(&self, s: f64) -> (f64, f64, f64) {
        let b = self.b;
        let w = b * b + s * s;
        let sw = w.sqrt();
        (sw / b, s / (b * sw), b / (w * sw))
    }

    fn label(&self) -> String {
        format!("hyperboloid(b={})", self.b)
    }
}

type ProfileFn = dyn Fn(f64) -> (f64, f64, f64) + Send + Sync;

/// Profile given by a caller-supplied closure returning `(u, u', u'')`.
#[derive(Clone)]
pub struct FnProfile {
    f: Arc<ProfileFn>,
    interval: (f64, f64),
    label: String,
}

impl FnProfile {
    pub fn new<F>(label: impl Into<String>, interval: (f64, f64), f: F) -> Self
    where
        F: Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            interval,
            label: label.into(),
        }
    }
}

impl fmt::Debug for FnProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnProfile")
            .field("label", &self.label)
            .field("interval", &self.interval)
            .finish()
    }
}

impl ProfileCurve for FnProfile {
    fn interval(&self) -> (f64, f64) {
        self.interval
    }

    fn eval(&self, s: f64) -> (f64, f64, f64) {
        (self.f)(s)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Profile sampled on a uniform grid. Derivatives at the nodes come from
/// fourth-order finite differences; values between nodes from quintic
/// Hermite interpolation of `(u, u', u'')`.
#[derive(Debug, Clone)]
pub struct SampledProfile {
    s0: f64,
    ds: f64,
    u: Vec<f64>,
    du: Vec<f64>,
    d2u: Vec<f64>,
}

impl SampledProfile {
    pub fn new(s: &[f64], u: &[f64]) -> Result<Self> {
        if s.len() != u.len() || s.len() < 5 {
            return Err(Error::InvalidParameters(
                "sampled profile needs matching s/u arrays with at least 5 points".into(),
            ));
        }
        let ds = (s[s.len() - 1] - s[0]) / (s.len() - 1) as f64;
        if ds <= 0.0 {
            return Err(Error::InvalidParameters("profile grid must be increasing".into()));
        }
        for (k, sk) in s.iter().enumerate() {
            if (sk - (s[0] + k as f64 * ds)).abs() > 1e-9 * (1.0 + sk.abs()) {
                return Err(Error::InvalidParameters("profile grid must be uniform".into()));
            }
        }
        if let Some((k, uk)) = u.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::NonpositiveProfile { s: s[k], u: *uk });
        }
        let n = u.len();
        let mut du = vec![0.0; n];
        let mut d2u = vec![0.0; n];
        let h = ds;
        for i in 0..n {
            let f = |k: isize| u[(i as isize + k) as usize];
            let (d1, d2) = if i >= 2 && i + 2 < n {
                (
                    (-f(2) + 8.0 * f(1) - 8.0 * f(-1) + f(-2)) / (12.0 * h),
                    (-f(2) + 16.0 * f(1) - 30.0 * f(0) + 16.0 * f(-1) - f(-2)) / (12.0 * h * h),
                )
            } else if i < 2 {
                let g = |k: usize| u[k];
                if i == 0 {
                    (
                        (-25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) / (12.0 * h),
                        (35.0 * g(0) - 104.0 * g(1) + 114.0 * g(2) - 56.0 * g(3) + 11.0 * g(4)) / (12.0 * h * h),
                    )
                } else {
                    (
                        (-3.0 * g(0) - 10.0 * g(1) + 18.0 * g(2) - 6.0 * g(3) + g(4)) / (12.0 * h),
                        (11.0 * g(0) - 20.0 * g(1) + 6.0 * g(2) + 4.0 * g(3) - g(4)) / (12.0 * h * h),
                    )
                }
            } else {
                let g = |k: usize| u[n - 1 - k];
                if i == n - 1 {
                    (
                        -(-25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) / (12.0 * h),
                        (35.0 * g(0) - 104.0 * g(1) + 114.0 * g(2) - 56.0 * g(3) + 11.0 * g(4)) / (12.0 * h * h),
                    )
                } else {
                    (
                        -(-3.0 * g(0) - 10.0 * g(1) + 18.0 * g(2) - 6.0 * g(3) + g(4)) / (12.0 * h),
                        (11.0 * g(0) - 20.0 * g(1) + 6.0 * g(2) + 4.0 * g(3) - g(4)) / (12.0 * h * h),
                    )
                }
            };
            du[i] = d1;
            d2u[i] = d2;
        }
        Ok(Self {
            s0: s[0],
            ds,
            u: u.to_vec(),
            du,
            d2u,
        })
    }
}

impl ProfileCurve for SampledProfile {
    fn interval(&self) -> (f64, f64) {
        (self.s0, self.s0 + self.ds * (self.u.len() - 1) as f64)
    }

    fn eval(&self, s: f64) -> (f64, f64, f64) {
        let n = self.u.len();
        let pos = ((s - self.s0) / self.ds).clamp(0.0, (n - 1) as f64);
        let k = (pos.floor() as usize).min(n - 2);
        let tau = pos - k as f64;
        quintic_hermite(
            tau,
            self.ds,
            [self.u[k], self.du[k], self.d2u[k]],
            [self.u[k + 1], self.du[k + 1], self.d2u[k + 1]],
        )
    }

    fn label(&self) -> String {
        format!("sampled({} points)", self.u.len())
    }
}

/// Quintic Hermite interpolant on one cell of width `w`, evaluated at the
/// local parameter `tau ∈ [0, 1]`. Returns value, first and second derivative.
fn quintic_hermite(tau: f64, w: f64, left: [f64; 3], right: [f64; 3]) -> (f64, f64, f64) {
    let t = tau;
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let basis = [
        1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5,
        t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5,
        0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5,
        0.5 * t3 - t4 + 0.5 * t5,
        -4.0 * t3 + 7.0 * t4 - 3.0 * t5,
        10.0 * t3 - 15.0 * t4 + 6.0 * t5,
    ];
    let d1 = [
        -30.0 * t2 + 60.0 * t3 - 30.0 * t4,
        1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4,
        t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4,
        1.5 * t2 - 4.0 * t3 + 2.5 * t4,
        -12.0 * t2 + 28.0 * t3 - 15.0 * t4,
        30.0 * t2 - 60.0 * t3 + 30.0 * t4,
    ];
    let d2 = [
        -60.0 * t + 180.0 * t2 - 120.0 * t3,
        -36.0 * t + 96.0 * t2 - 60.0 * t3,
        1.0 - 9.0 * t + 18.0 * t2 - 10.0 * t3,
        3.0 * t - 12.0 * t2 + 10.0 * t3,
        -24.0 * t + 84.0 * t2 - 60.0 * t3,
        60.0 * t - 180.0 * t2 + 120.0 * t3,
    ];
    let coef = [
        left[0],
        w * left[1],
        w * w * left[2],
        w * w * right[2],
        w * right[1],
        right[0],
    ];
    let dot = |b: &[f64; 6]| b.iter().zip(&coef).map(|(x, y)| x * y).sum::<f64>();
    (dot(&basis), dot(&d1) / w, dot(&d2) / (w * w))
}

/// Model family and parameters.
#[derive(Debug, Clone)]
pub enum ModelKind {
    SpaceForm { c: f64 },
    Dss { m: f64, c: f64 },
    Rn { m: f64, q: f64 },
    Profile(Arc<dyn ProfileCurve>),
}

/// Interval of the model coordinate on which the model is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    /// `lo` itself is a valid evaluation point (the horizon `r = s0`).
    pub lo_closed: bool,
    /// `lo` is a finite cap standing in for minus infinity.
    pub lo_capped: bool,
    /// `hi` is a finite cap standing in for infinity.
    pub hi_capped: bool,
}

impl Domain {
    pub fn contains(&self, x: f64) -> bool {
        let lo_ok = if self.lo_closed || self.lo_capped { x >= self.lo } else { x > self.lo };
        let hi_ok = if self.hi_capped { x <= self.hi } else { x < self.hi };
        lo_ok && hi_ok && x.is_finite()
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, lo: self.lo, hi: self.hi })
        }
    }
}

/// A closed sub-interval of the model coordinate. An infinite end is
/// replaced by the model's cap when resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }
}

/// An interval resolved against a model: finite ends, with flags marking
/// ends that were capped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_capped: bool,
    pub hi_capped: bool,
}

impl ResolvedInterval {
    /// `n` scan points. Capped ends get geometric spacing so the inner part
    /// of a long interval is resolved; doubly capped intervals use
    /// `asinh`-uniform spacing.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        match (self.lo_capped, self.hi_capped) {
            (false, false) => linspace(self.lo, self.hi, n),
            (false, true) => geomspace_from(self.lo, self.hi, n),
            (true, false) => {
                let mut g: Vec<f64> = geomspace_from(-self.hi, -self.lo, n).into_iter().map(|v| -v).collect();
                g.reverse();
                g
            }
            (true, true) => linspace(self.lo.asinh(), self.hi.asinh(), n)
                .into_iter()
                .map(f64::sinh)
                .collect(),
        }
    }
}

/// Second-order ODE `h'' = g(h)` behind the dSS and RN families.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Ode {
    Dss { m: f64, c: f64 },
    Rn { m: f64, q: f64 },
}

impl Ode {
    fn accel(&self, h: f64) -> f64 {
        match *self {
            Ode::Dss { m, c } => m / (2.0 * h * h) - c * h,
            Ode::Rn { m, q } => m / (2.0 * h * h) - q * q / (h * h * h),
        }
    }

    /// `dg/dh`.
    fn accel_slope(&self, h: f64) -> f64 {
        match *self {
            Ode::Dss { m, c } => -m / (h * h * h) - c,
            Ode::Rn { m, q } => -m / (h * h * h) + 3.0 * q * q / (h * h * h * h),
        }
    }

    /// `1 - m/h - c h^2` or `1 - m/h + q^2/h^2`: the value of `h'^2`.
    fn potential(&self, h: f64) -> f64 {
        match *self {
            Ode::Dss { m, c } => 1.0 - m / h - c * h * h,
            Ode::Rn { m, q } => 1.0 - m / h + q * q / (h * h),
        }
    }

    fn rk4(&self, h: f64, v: f64, dt: f64) -> (f64, f64) {
        let k1h = v;
        let k1v = self.accel(h);
        let k2h = v + 0.5 * dt * k1v;
        let k2v = self.accel(h + 0.5 * dt * k1h);
        let k3h = v + 0.5 * dt * k2v;
        let k3v = self.accel(h + 0.5 * dt * k2h);
        let k4h = v + dt * k3v;
        let k4v = self.accel(h + dt * k3h);
        (
            h + dt / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h),
            v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )
    }
}

/// One sample of an integrated warping function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub h: f64,
    pub hp: f64,
    pub hpp: f64,
}

/// Samples of `h(t)` produced by [`integrate_h`].
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub step: f64,
    /// Largest `|h'^2 - V(h)|` over the samples (first-integral drift).
    pub residual_max: f64,
    ode: Ode,
}

impl Trajectory {
    /// First-integral residual `h'^2 - V(h)` of a sample.
    pub fn residual(&self, s: &TrajectorySample) -> f64 {
        s.hp * s.hp - self.ode.potential(s.h)
    }

    pub fn t_end(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    /// Dense evaluation: one RK4 step from the nearest sample. Negative
    /// `t` uses the even extension `h(-t) = h(t)`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64)> {
        let (ta, sign) = if t < 0.0 { (-t, -1.0) } else { (t, 1.0) };
        let end = self.t_end();
        if ta > end + 1e-12 * (1.0 + end) || !t.is_finite() {
            return Err(Error::OutOfDomain { x: t, lo: -end, hi: end });
        }
        let k = ((ta / self.step).round() as usize).min(self.samples.len() - 1);
        let s = &self.samples[k];
        let (h, v) = self.ode.rk4(s.h, s.hp, ta - s.t);
        Ok((h, sign * v, self.ode.accel(h)))
    }
}

/// The maximal interval of `r > 0` with `1 - m/r - c r^2 > 0`.
///
/// For `c <= 0` the upper end is infinite.
pub fn dss_domain(m: f64, c: f64) -> Result<(f64, f64)> {
    if !(m > 0.0) || !m.is_finite() || !c.is_finite() {
        return Err(Error::InvalidParameters(format!("dss requires m > 0 (m = {m})")));
    }
    if c > 0.0 && c * m * m >= 4.0 / 27.0 {
        return Err(Error::InvalidParameters(format!(
            "dss requires c m^2 < 4/27 when c > 0 (c m^2 = {})",
            c * m * m
        )));
    }
    // Sign of r - m - c r^3 matches the sign of 1 - m/r - c r^2 for r > 0.
    let q = |r: f64| r - m - c * r * r * r;
    if c == 0.0 {
        return Ok((m, f64::INFINITY));
    }
    if c < 0.0 {
        let s0 = bisect(q, 0.0, m, 0.0).expect("q(0) < 0 < q(m) for c < 0");
        return Ok((s0, f64::INFINITY));
    }
    let peak = 1.0 / (3.0 * c).sqrt();
    let s0 = bisect(q, m, peak, 0.0).expect("q(m) < 0 < q(peak)");
    let s1 = bisect(q, peak, 1.0 / c.sqrt(), 0.0).expect("q(peak) > 0 > q(1/sqrt c)");
    Ok((s0, s1))
}

/// Larger root of `1 - m/r + q^2/r^2 = 0`.
///
/// Equal to `2q^2/(m - sqrt(m^2 - 4q^2))`; evaluated as
/// `(m + sqrt((m - 2q)(m + 2q)))/2`, which stays accurate both as
/// `q → 0` (where the literal form cancels) and as `2q → m`.
pub fn rn_s0(m: f64, q: f64) -> Result<f64> {
    if !(q > 0.0) || !(m > 2.0 * q) || !m.is_finite() {
        return Err(Error::InvalidParameters(format!(
            "rn requires m > 2q > 0 (m = {m}, q = {q})"
        )));
    }
    Ok(0.5 * (m + ((m - 2.0 * q) * (m + 2.0 * q)).sqrt()))
}

/// Closed-form `(h, h', h'')` of the space form of curvature `c`.
pub fn space_form_h(c: f64, t: f64) -> Result<(f64, f64, f64)> {
    let hi = if c > 0.0 { PI / c.sqrt() } else { f64::INFINITY };
    if !(t > 0.0 && t < hi) {
        return Err(Error::OutOfDomain { x: t, lo: 0.0, hi });
    }
    Ok(if c > 0.0 {
        let k = c.sqrt();
        let s = (k * t).sin();
        (s / k, (k * t).cos(), -k * s)
    } else if c == 0.0 {
        (t, 1.0, 0.0)
    } else {
        let k = (-c).sqrt();
        let s = (k * t).sinh();
        (s / k, (k * t).cosh(), k * s)
    })
}

/// Integrate the second-order warping ODE of a dSS or RN model from
/// `t = 0` (where `h = s0`, `h' = 0`) up to `t_max`.
///
/// The first step uses the degree-4 Taylor polynomial at `t = 0`; the rest
/// classical RK4 at fixed `step`.
pub fn integrate_h(model: &WarpingModel, t_max: f64, step: f64) -> Result<Trajectory> {
    let ode = model.ode().ok_or(Error::ModelNotDssOrRn)?;
    if !(step > 0.0) || !(t_max >= 0.0) {
        return Err(Error::InvalidParameters("step must be > 0 and t_max >= 0".into()));
    }
    let s0 = model.domain.lo;
    let s1 = model.s1();
    let n = (t_max / step).ceil() as usize;
    let mut samples = Vec::with_capacity(n + 1);
    let g0 = ode.accel(s0);
    samples.push(TrajectorySample { t: 0.0, h: s0, hp: 0.0, hpp: g0 });
    let mut residual_max = 0.0f64;
    let tol = 1e-9 * (1.0 + s0);
    for k in 1..=n {
        let t = (k as f64 * step).min(t_max);
        let (h, v) = if k == 1 {
            // h = s0 + g0 t^2/2 + g'(s0) g0 t^4/24 (odd terms vanish)
            let g1 = ode.accel_slope(s0);
            (
                s0 + g0 * t * t / 2.0 + g1 * g0 * t.powi(4) / 24.0,
                g0 * t + g1 * g0 * t.powi(3) / 6.0,
            )
        } else {
            let prev = samples[k - 1];
            ode.rk4(prev.h, prev.hp, t - prev.t)
        };
        if h < s0 - tol || h > s1 + tol || v < -1e-7 || !h.is_finite() {
            return Err(Error::DomainExit { t, h });
        }
        let res = (v * v - ode.potential(h)).abs();
        residual_max = residual_max.max(res);
        samples.push(TrajectorySample { t, h, hp: v, hpp: ode.accel(h) });
        if t >= t_max {
            break;
        }
    }
    if residual_max > 1e-8 {
        return Err(Error::StepTooLarge { residual: residual_max });
    }
    Ok(Trajectory { samples, step, residual_max, ode })
}

/// Step used for the lazily built trajectory of ODE models.
const TRAJECTORY_STEP: f64 = 1e-3;

/// A warping function with its domain, ready for evaluation.
#[derive(Clone)]
pub struct WarpingModel {
    kind: ModelKind,
    domain: Domain,
    /// Right end of the model coordinate before capping.
    s1: f64,
    /// Reference abscissa with `G(s_ref) = 0` (profiles only).
    s_ref: f64,
    trajectory: Arc<OnceLock<Result<Arc<Trajectory>>>>,
}

impl fmt::Debug for WarpingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WarpingModel")
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .finish()
    }
}

impl WarpingModel {
    pub fn space_form(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidParameters("c must be finite".into()));
        }
        let (hi, hi_capped) = if c > 0.0 { (PI / c.sqrt(), false) } else { (DEFAULT_CAP, true) };
        Ok(Self::build(
            ModelKind::SpaceForm { c },
            Domain { lo: 0.0, hi, lo_closed: false, lo_capped: false, hi_capped },
            if c > 0.0 { hi } else { f64::INFINITY },
            0.0,
        ))
    }

    pub fn dss(m: f64, c: f64) -> Result<Self> {
        let (s0, s1) = dss_domain(m, c)?;
        let (hi, hi_capped) = if s1.is_finite() { (s1, false) } else { (DEFAULT_CAP.max(10.0 * s0), true) };
        Ok(Self::build(
            ModelKind::Dss { m, c },
            Domain { lo: s0, hi, lo_closed: true, lo_capped: false, hi_capped },
            s1,
            0.0,
        ))
    }

    pub fn rn(m: f64, q: f64) -> Result<Self> {
        let s0 = rn_s0(m, q)?;
        Ok(Self::build(
            ModelKind::Rn { m, q },
            Domain {
                lo: s0,
                hi: DEFAULT_CAP.max(10.0 * s0),
                lo_closed: true,
                lo_capped: false,
                hi_capped: true,
            },
            f64::INFINITY,
            0.0,
        ))
    }

    /// Hypersurface of revolution with profile `curve`.
    pub fn profile(curve: Arc<dyn ProfileCurve>) -> Result<Self> {
        let (a, b) = curve.interval();
        if !(a < b) {
            return Err(Error::EmptyInterval { lo: a, hi: b });
        }
        let (lo, lo_capped) = if a.is_finite() { (a, false) } else { (-DEFAULT_CAP, true) };
        let (hi, hi_capped) = if b.is_finite() { (b, false) } else { (DEFAULT_CAP, true) };
        // Positivity on a probe grid strictly inside the interval.
        for k in 1..200 {
            let s = lo + (hi - lo) * k as f64 / 200.0;
            let (u, _, _) = curve.eval(s);
            if !(u > 0.0) {
                return Err(Error::NonpositiveProfile { s, u });
            }
        }
        let s_ref = if lo < 0.0 && hi > 0.0 { 0.0 } else { 0.5 * (lo + hi) };
        Ok(Self::build(
            ModelKind::Profile(curve),
            Domain { lo, hi, lo_closed: false, lo_capped, hi_capped },
            b,
            s_ref,
        ))
    }

    pub fn ellipsoid(b: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::InvalidParameters("ellipsoid requires b > 0".into()));
        }
        Self::profile(Arc::new(Ellipsoid { b }))
    }

    pub fn hyperboloid(b: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::InvalidParameters("hyperboloid requires b > 0".into()));
        }
        Self::profile(Arc::new(Hyperboloid { b }))
    }

    fn build(kind: ModelKind, domain: Domain, s1: f64, s_ref: f64) -> Self {
        Self {
            kind,
            domain,
            s1,
            s_ref,
            trajectory: Arc::new(OnceLock::new()),
        }
    }

    /// Replace the finite stand-in for infinite ends of the model coordinate.
    pub fn with_cap(mut self, cap: f64) -> Result<Self> {
        if !(cap > 0.0) || !cap.is_finite() {
            return Err(Error::InvalidParameters(format!("cap must be positive (got {cap})")));
        }
        if self.domain.hi_capped {
            if cap <= self.domain.lo {
                return Err(Error::InvalidParameters(format!(
                    "cap {cap} does not exceed the inner end {}",
                    self.domain.lo
                )));
            }
            self.domain.hi = cap;
        }
        if self.domain.lo_capped {
            self.domain.lo = -cap;
        }
        self.trajectory = Arc::new(OnceLock::new());
        Ok(self)
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Right end of the model coordinate, infinite when it was capped.
    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn label(&self) -> String {
        match &self.kind {
            ModelKind::SpaceForm { c } => format!("space_form(c={c})"),
            ModelKind::Dss { m, c } => format!("dss(m={m},c={c})"),
            ModelKind::Rn { m, q } => format!("rn(m={m},q={q})"),
            ModelKind::Profile(p) => p.label(),
        }
    }

    fn ode(&self) -> Option<Ode> {
        match self.kind {
            ModelKind::Dss { m, c } => Some(Ode::Dss { m, c }),
            ModelKind::Rn { m, q } => Some(Ode::Rn { m, q }),
            _ => None,
        }
    }

    pub fn is_ode(&self) -> bool {
        self.ode().is_some()
    }

    /// Resolve an interval against the domain, capping infinite ends.
    pub fn resolve(&self, iv: Interval) -> Result<ResolvedInterval> {
        let d = self.domain;
        let (lo, lo_capped) = if iv.lo == f64::NEG_INFINITY && d.lo_capped { (d.lo, true) } else { (iv.lo, false) };
        let (hi, hi_capped) = if iv.hi == f64::INFINITY && d.hi_capped { (d.hi, true) } else { (iv.hi, false) };
        if !(lo < hi) {
            return Err(Error::EmptyInterval { lo, hi });
        }
        d.check(lo)?;
        d.check(hi)?;
        Ok(ResolvedInterval { lo, hi, lo_capped, hi_capped })
    }

    /// The whole domain as an interval. Open ends are pulled in by a
    /// relative `margin` of the domain width.
    pub fn default_interval(&self, margin: f64) -> ResolvedInterval {
        let d = self.domain;
        let w = d.hi - d.lo;
        let lo = if d.lo_closed || d.lo_capped { d.lo } else { d.lo + margin * w };
        let hi = if d.hi_capped { d.hi } else { d.hi - margin * w };
        ResolvedInterval { lo, hi, lo_capped: d.lo_capped, hi_capped: d.hi_capped }
    }

    /// Closed-form jet at the model coordinate `x`.
    pub fn jet(&self, x: f64) -> Result<Jet> {
        self.domain.check(x)?;
        Ok(match &self.kind {
            ModelKind::SpaceForm { c } => {
                let (h, hp, hpp) = space_form_h(*c, x)?;
                Jet { x, h, hp, hpp, hppp: -c * hp }
            }
            ModelKind::Dss { .. } | ModelKind::Rn { .. } => {
                let ode = self.ode().unwrap();
                let hp = ode.potential(x).max(0.0).sqrt();
                Jet {
                    x,
                    h: x,
                    hp,
                    hpp: ode.accel(x),
                    hppp: ode.accel_slope(x) * hp,
                }
            }
            ModelKind::Profile(curve) => {
                let hpp_of = |s: f64| {
                    let (_, du, d2u) = curve.eval(s);
                    d2u / (1.0 + du * du).powi(2)
                };
                let (u, du, d2u) = curve.eval(x);
                let g = 1.0 + du * du;
                let step = self.fd_step(x);
                let dhpp_ds = d1_central4(hpp_of, x, step);
                Jet {
                    x,
                    h: u,
                    hp: du / g.sqrt(),
                    hpp: d2u / (g * g),
                    hppp: dhpp_ds / g.sqrt(),
                }
            }
        })
    }

    /// Finite-difference step in `s` that keeps a 5-point stencil inside
    /// the profile interval.
    fn fd_step(&self, x: f64) -> f64 {
        let d = self.domain;
        let room = (x - d.lo).min(d.hi - x) / 3.0;
        (1e-3 * (d.hi - d.lo).min(1.0)).min(room.max(1e-9))
    }

    /// Arc-length coordinate `t` of the model coordinate `x`.
    pub fn t_of(&self, x: f64) -> Result<f64> {
        self.domain.check(x)?;
        match &self.kind {
            ModelKind::SpaceForm { .. } => Ok(x),
            ModelKind::Dss { .. } | ModelKind::Rn { .. } => {
                let ode = self.ode().unwrap();
                let fp = |r: f64| 1.0 / ode.potential(r).sqrt();
                let s0 = self.domain.lo;
                if self.s1.is_finite() && x > 0.5 * (s0 + self.s1) {
                    let total = integrate_with_endpoints(fp, s0, self.s1, EndpointSingularity::BOTH, 32);
                    let rest = integrate_with_endpoints(
                        fp,
                        x,
                        self.s1,
                        EndpointSingularity { left: false, right: true },
                        32,
                    );
                    Ok(total - rest)
                } else {
                    Ok(integrate_with_endpoints(fp, s0, x, EndpointSingularity::LEFT, 32))
                }
            }
            ModelKind::Profile(curve) => Ok(self.arc_length(curve.as_ref(), x)),
        }
    }

    /// `dt/dx`: 1 for space forms, `1/h'` for the ODE families and
    /// `G'(s)` for profiles. Infinite at the horizon `x = s0`.
    pub fn dt_dx(&self, x: f64) -> Result<f64> {
        self.domain.check(x)?;
        Ok(match &self.kind {
            ModelKind::SpaceForm { .. } => 1.0,
            ModelKind::Dss { .. } | ModelKind::Rn { .. } => 1.0 / self.ode().unwrap().potential(x).max(0.0).sqrt(),
            ModelKind::Profile(curve) => {
                let (_, du, _) = curve.eval(x);
                (1.0 + du * du).sqrt()
            }
        })
    }

    fn arc_length(&self, curve: &dyn ProfileCurve, s: f64) -> f64 {
        composite(
            |v| {
                let (_, du, _) = curve.eval(v);
                (1.0 + du * du).sqrt()
            },
            self.s_ref,
            s,
            64,
            20,
        )
    }

    /// Largest admissible `t` (the image of the upper domain end).
    pub fn t_max(&self) -> Result<f64> {
        match &self.kind {
            ModelKind::Dss { .. } | ModelKind::Rn { .. } if !self.domain.hi_capped => {
                let ode = self.ode().unwrap();
                Ok(integrate_with_endpoints(
                    |r| 1.0 / ode.potential(r).sqrt(),
                    self.domain.lo,
                    self.s1,
                    EndpointSingularity::BOTH,
                    32,
                ))
            }
            ModelKind::SpaceForm { .. } => Ok(self.domain.hi),
            ModelKind::Profile(curve) => {
                let d = self.domain;
                Ok(self.arc_length(curve.as_ref(), d.hi - 1e-9 * (d.hi - d.lo)))
            }
            _ => self.t_of(self.domain.hi),
        }
    }

    /// Integrated trajectory of an ODE model, built on first use.
    pub fn trajectory(&self) -> Result<Arc<Trajectory>> {
        if !self.is_ode() {
            return Err(Error::ModelNotDssOrRn);
        }
        self.trajectory
            .get_or_init(|| {
                let t_end = self.t_max()?;
                integrate_h(self, t_end, TRAJECTORY_STEP).map(Arc::new)
            })
            .clone()
    }

    /// Model coordinate of the arc-length coordinate `t`.
    pub fn x_of_t(&self, t: f64) -> Result<f64> {
        match &self.kind {
            ModelKind::SpaceForm { .. } => {
                self.domain.check(t)?;
                Ok(t)
            }
            ModelKind::Dss { .. } | ModelKind::Rn { .. } => Ok(self.trajectory()?.eval(t)?.0),
            ModelKind::Profile(curve) => {
                let d = self.domain;
                let g = |s: f64| self.arc_length(curve.as_ref(), s) - t;
                let span = d.hi - d.lo;
                let (a, b) = (d.lo + 1e-9 * span, d.hi - 1e-9 * span);
                let mut s = bisect(g, a, b, 1e-6 * span).ok_or(Error::OutOfDomain {
                    x: t,
                    lo: self.arc_length(curve.as_ref(), a),
                    hi: self.arc_length(curve.as_ref(), b),
                })?;
                for _ in 0..8 {
                    let (_, du, _) = curve.eval(s);
                    let ds = g(s) / (1.0 + du * du).sqrt();
                    s -= ds;
                    if ds.abs() < 1e-15 * (1.0 + s.abs()) {
                        break;
                    }
                }
                Ok(s)
            }
        }
    }

    /// Jet at the arc-length coordinate `t`. For ODE models `h` and `h'`
    /// come from the integrated trajectory and `h''`, `h'''` from the ODE.
    pub fn jet_at_t(&self, t: f64) -> Result<Jet> {
        match &self.kind {
            ModelKind::SpaceForm { c } => {
                let (h, hp, hpp) = space_form_h(*c, t)?;
                Ok(Jet { x: t, h, hp, hpp, hppp: -c * hp })
            }
            ModelKind::Dss { .. } | ModelKind::Rn { .. } => {
                let ode = self.ode().unwrap();
                let (h, hp, hpp) = self.trajectory()?.eval(t)?;
                Ok(Jet { x: h, h, hp, hpp, hppp: ode.accel_slope(h) * hp })
            }
            ModelKind::Profile(_) => self.jet(self.x_of_t(t)?),
        }
    }
}

/// Reparametrize a profile by arc length: the returned model exposes
/// `h = u`, `h' = u'/sqrt(1+u'^2)`, `h'' = u''/(1+u'^2)^2`, and the
/// arc-length values `t = G(s_k)` on `s_grid`.
pub fn profile_reparametrize(curve: Arc<dyn ProfileCurve>, s_grid: &[f64]) -> Result<(WarpingModel, Vec<f64>)> {
    for &s in s_grid {
        let (u, _, _) = curve.eval(s);
        if !(u > 0.0) {
            return Err(Error::NonpositiveProfile { s, u });
        }
    }
    let model = WarpingModel::profile(curve)?;
    let t = s_grid.iter().map(|&s| model.t_of(s)).collect::<Result<Vec<_>>>()?;
    Ok((model, t))
}
