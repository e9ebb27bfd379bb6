//! Gauss–Legendre rules on intervals and on the unit sphere.
//!
//! The sphere rule is a tensor product of Gauss–Legendre nodes in
//! `cos(phi1)` with equally spaced nodes in `phi2`. One-dimensional
//! integrals with an inverse-square-root singularity at an endpoint (the
//! turning points of `1 - m/r - c r^2`) are handled by the substitution
//! `x = a + xi^2`, which turns the integrand smooth.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::warping::WarpingModel;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Cached rule with `n` points.
    pub fn get(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::compute(n)))
            .clone()
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre over `panels` equal sub-intervals of `[a, b]`.
pub fn composite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, points: usize) -> f64 {
    let rule = GaussLegendre::get(points);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == panels { b } else { lo + h };
            rule.integrate(&f, lo, hi)
        })
        .sum()
}

/// Which endpoints of an integral carry an inverse-square-root singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EndpointSingularity {
    pub left: bool,
    pub right: bool,
}

impl EndpointSingularity {
    pub const NONE: Self = Self { left: false, right: false };
    pub const LEFT: Self = Self { left: true, right: false };
    pub const BOTH: Self = Self { left: true, right: true };
}

/// Integral over `[a, b]` with optional `x = a + xi^2` / `x = b - xi^2`
/// substitutions at singular endpoints.
pub fn integrate_with_endpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    sing: EndpointSingularity,
    panels: usize,
) -> f64 {
    if b == a {
        return 0.0;
    }
    let (sign, a, b) = if b < a { (-1.0, b, a) } else { (1.0, a, b) };
    let val = match (sing.left, sing.right) {
        (false, false) => composite(&f, a, b, panels, 20),
        (true, false) => {
            let top = (b - a).sqrt();
            composite(|xi| 2.0 * xi * f(a + xi * xi), 0.0, top, panels, 20)
        }
        (false, true) => {
            let top = (b - a).sqrt();
            composite(|xi| 2.0 * xi * f(b - xi * xi), 0.0, top, panels, 20)
        }
        (true, true) => {
            let mid = 0.5 * (a + b);
            let top = (mid - a).sqrt();
            composite(|xi| 2.0 * xi * f(a + xi * xi), 0.0, top, panels, 20)
                + composite(|xi| 2.0 * xi * f(b - xi * xi), 0.0, top, panels, 20)
        }
    };
    sign * val
}

/// Antiderivative samples `A(x_k) = integral of f from x_0 to x_k` on a
/// strictly increasing grid.
///
/// Every cell is integrated with a 20-point Gauss–Legendre rule. With
/// `singular_left` the first cell uses the square-root substitution; its
/// value is checked against a 40-point evaluation and a large disagreement
/// is reported as a non-integrable singularity.
pub fn cumulative_integral<F: Fn(f64) -> f64>(f: F, grid: &[f64], singular_left: bool) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(grid.len());
    if grid.is_empty() {
        return Ok(out);
    }
    out.push(0.0);
    let r20 = GaussLegendre::get(20);
    let r40 = GaussLegendre::get(40);
    let mut acc = 0.0;
    for (k, w) in grid.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            return Err(Error::InvalidParameters("grid must be strictly increasing".into()));
        }
        let cell = if k == 0 && singular_left {
            let top = (b - a).sqrt();
            let g = |xi: f64| 2.0 * xi * f(a + xi * xi);
            let coarse = r20.integrate(g, 0.0, top);
            let fine = r40.integrate(g, 0.0, top);
            let scale = 1.0 + fine.abs();
            if !coarse.is_finite() || !fine.is_finite() || (coarse - fine).abs() > 1e-6 * scale {
                return Err(Error::NonIntegrableSingularity { coarse, fine });
            }
            fine
        } else {
            r20.integrate(&f, a, b)
        };
        acc += cell;
        out.push(acc);
    }
    Ok(out)
}

/// A product rule on the unit sphere.
#[derive(Debug, Clone)]
pub struct SphereRule {
    /// `(phi1, phi2)` pairs: polar angle and azimuth.
    pub nodes: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
    pub order: usize,
}

/// Tensor rule with `order` Gauss–Legendre nodes in `cos(phi1)` and
/// `2 * order` azimuthal nodes. Exact for spherical harmonics of degree
/// below `2 * order`.
pub fn sphere_rule(order: usize) -> Result<SphereRule> {
    if order < 2 {
        return Err(Error::OrderTooSmall(order));
    }
    let gl = GaussLegendre::get(order);
    let n_az = 2 * order;
    let daz = 2.0 * PI / n_az as f64;
    let mut nodes = Vec::with_capacity(order * n_az);
    let mut weights = Vec::with_capacity(order * n_az);
    for (x, w) in gl.nodes.iter().zip(&gl.weights) {
        let phi1 = x.acos();
        for j in 0..n_az {
            nodes.push((phi1, (j as f64 + 0.5) * daz));
            weights.push(w * daz);
        }
    }
    Ok(SphereRule { nodes, weights, order })
}

impl SphereRule {
    /// Integral over the unit sphere.
    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&(p1, p2), w)| w * f(p1, p2))
            .sum()
    }
}

/// Integral of `f(phi1, phi2)` over the slice through the model coordinate
/// `x`, a round sphere of radius `h`. The result at `order` is compared
/// with the result at `2 * order`.
pub fn integrate_slice<F: Fn(f64, f64) -> f64>(
    f: F,
    model: &WarpingModel,
    x: f64,
    order: usize,
) -> Result<f64> {
    let h = model.jet(x)?.h;
    let coarse = h * h * sphere_rule(order)?.integrate(&f);
    let fine = h * h * sphere_rule(2 * order)?.integrate(&f);
    if (coarse - fine).abs() > 1e-8 * (1.0 + fine.abs()) {
        return Err(Error::NonConverged { coarse, fine });
    }
    Ok(coarse)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let r = GaussLegendre::get(5);
        // degree 9 is exact for 5 points
        let v = r.integrate(|x| x.powi(8) + x.powi(9), -1.0, 1.0);
        assert!((v - 2.0 / 9.0).abs() < 1e-14);
        assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_rule_area_and_moments() {
        let rule = sphere_rule(8).unwrap();
        assert!(rule.weights.iter().all(|w| *w > 0.0));
        let area = rule.integrate(|_, _| 1.0);
        assert!((area - 4.0 * PI).abs() < 1e-13);
        let c2 = rule.integrate(|p, _| p.cos().powi(2));
        assert!((c2 - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_rule_y20_normalisation() {
        // Y_2^0 = sqrt(5/(16 pi)) (3 cos^2 - 1), unit L2 norm.
        let rule = sphere_rule(6).unwrap();
        let y20 = |p: f64, _: f64| (5.0 / (16.0 * PI)).sqrt() * (3.0 * p.cos().powi(2) - 1.0);
        let n = rule.integrate(|p, q| y20(p, q).powi(2));
        assert!((n - 1.0).abs() < 1e-10);
        // Y_1^1 real part ~ sin(phi1) cos(phi2), orthogonal to Y_2^0
        let o = rule.integrate(|p, q| y20(p, q) * p.sin() * q.cos());
        assert!(o.abs() < 1e-13);
    }

    #[test]
    fn order_too_small() {
        assert_eq!(sphere_rule(1).unwrap_err(), Error::OrderTooSmall(1));
    }

    #[test]
    fn sqrt_singularity_absorbed() {
        let v = cumulative_integral(|x| 1.0 / x.sqrt(), &[0.0, 1.0], true).unwrap();
        assert!((v[1] - 2.0).abs() < 1e-10);
        let v = integrate_with_endpoints(|x| 1.0 / x.sqrt(), 0.0, 1.0, EndpointSingularity::LEFT, 4);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_integrable_singularity_detected() {
        let err = cumulative_integral(|x| 1.0 / x, &[0.0, 1.0], true).unwrap_err();
        assert!(matches!(err, Error::NonIntegrableSingularity { .. }));
    }

    #[test]
    fn both_endpoints_singular() {
        // integral of 1/sqrt(x(1-x)) over [0,1] = pi
        let v = integrate_with_endpoints(
            |x| 1.0 / (x * (1.0 - x)).sqrt(),
            0.0,
            1.0,
            EndpointSingularity::BOTH,
            4,
        );
        assert!((v - PI).abs() < 1e-12);
    }

    #[test]
    fn cumulative_cosine_profile() {
        // f(t) = 1 - cos t for the round three-sphere
        let grid: Vec<f64> = (0..=30).map(|k| k as f64 * 0.1).collect();
        let f = cumulative_integral(f64::sin, &grid, false).unwrap();
        for (t, v) in grid.iter().zip(&f) {
            assert!((v - (1.0 - t.cos())).abs() < 1e-10);
        }
    }
}
