//! Finite-difference Riemannian geometry from a raw coordinate metric.
//!
//! Christoffel symbols come from sixth-order central differences of
//! `g`, the Riemann tensor from differences of the Christoffel symbols.
//! Conventions: `∇_{∂i}∂j = Γ^k_ij ∂k`,
//! `R(∂i,∂j)∂k = R^l_kij ∂l` with
//! `R^l_kij = ∂i Γ^l_jk - ∂j Γ^l_ik + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik`,
//! sectional curvature `<R(X,Y)Y,X>/|X∧Y|^2`, `Ric_jk = R^i_kij`.
//! The closed forms in [`crate::curvature`] use the opposite order of the
//! first two slots, `R̄(X,Y)Z = R(Y,X)Z`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::{curvature_state, riemann_apply, ricci_normal, scalar_curvature, Vec3W};
use crate::error::{Error, Result};
use crate::numeric::linspace;
use crate::warping::{ModelKind, WarpingModel};

/// Default finite-difference step, relative to the local length scale.
pub const FD_STEP: f64 = 5e-3;

/// Smallest admissible distance of `φ1` from a coordinate pole.
pub const POLE_MARGIN: f64 = 0.1;

/// Normal angles used when comparing `Ric(N,N)`.
pub const NU_SAMPLES: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

/// A metric in coordinates `(x, φ1, φ2)`.
pub trait CoordMetric {
    fn metric(&self, p: [f64; 3]) -> Result<Matrix3<f64>>;
}

/// Which coordinate plays the role of the first slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstCoordinate {
    /// The model coordinate `x`, with `g_xx = (dt/dx)^2`.
    Model,
    /// The arc length `t`, with `h(t)` from the trajectory or profile inversion.
    ArcLength,
}

/// `diag(g_00, h^2, h^2 sin^2 φ1)`.
#[derive(Debug, Clone)]
pub struct WarpedMetric<'a> {
    model: &'a WarpingModel,
    first: FirstCoordinate,
}

impl<'a> WarpedMetric<'a> {
    pub fn new(model: &'a WarpingModel, first: FirstCoordinate) -> Self {
        Self { model, first }
    }
}

impl CoordMetric for WarpedMetric<'_> {
    fn metric(&self, p: [f64; 3]) -> Result<Matrix3<f64>> {
        let (g00, h) = match self.first {
            FirstCoordinate::Model => {
                let d = self.model.dt_dx(p[0])?;
                (d * d, self.model.jet(p[0])?.h)
            }
            FirstCoordinate::ArcLength => (1.0, self.model.jet_at_t(p[0])?.h),
        };
        let s = p[1].sin();
        Ok(Matrix3::from_diagonal(&Vector3::new(g00, h * h, h * h * s * s)))
    }
}

/// `gamma[k][i][j] = Γ^k_ij`.
pub type Christoffel = [[[f64; 3]; 3]; 3];

fn check_pole(p: [f64; 3]) -> Result<()> {
    if p[1] < POLE_MARGIN || p[1] > PI - POLE_MARGIN {
        return Err(Error::PoleProximity(p[1]));
    }
    Ok(())
}

fn shifted(p: [f64; 3], axis: usize, d: f64) -> [f64; 3] {
    let mut q = p;
    q[axis] += d;
    q
}

/// Sixth-order central first-derivative stencil: `(offset, weight)`, to be
/// divided by `60 h`.
const STENCIL: [(f64, f64); 6] = [(-3.0, -1.0), (-2.0, 9.0), (-1.0, -45.0), (1.0, 45.0), (2.0, -9.0), (3.0, 1.0)];

/// Per-axis steps relative to the local length scale: `φ1` moves by
/// `step · sin φ1`, `φ2` by `step`, and the first coordinate by
/// `step · min(1, h)` in arc length, `h = sqrt(g_11)`.
fn axis_steps(g: &Matrix3<f64>, p: [f64; 3], step: f64) -> [f64; 3] {
    let h = g[(1, 1)].sqrt();
    [step * h.min(1.0) / g[(0, 0)].sqrt().max(1e-300), step * p[1].sin(), step]
}

fn invert(g: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    if !(g.determinant() > 0.0) {
        return Err(Error::SingularMetric);
    }
    g.try_inverse().ok_or(Error::SingularMetric)
}

fn christoffel_with_steps(metric: &dyn CoordMetric, p: [f64; 3], steps: [f64; 3]) -> Result<Christoffel> {
    let g = metric.metric(p)?;
    let ginv = invert(&g)?;
    let mut dg = [Matrix3::zeros(); 3];
    for (a, d) in dg.iter_mut().enumerate() {
        let h = steps[a];
        for (off, w) in STENCIL {
            *d += metric.metric(shifted(p, a, off * h))? * (w / (60.0 * h));
        }
    }
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for (k, gk) in gamma.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for l in 0..3 {
                    s += ginv[(k, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]);
                }
                gk[i][j] = 0.5 * s;
            }
        }
    }
    Ok(gamma)
}

/// Christoffel symbols at `p` from sixth-order differences of `g`.
pub fn christoffel_fd(metric: &dyn CoordMetric, p: [f64; 3], step: f64) -> Result<Christoffel> {
    check_pole(p)?;
    if !(step > 0.0) {
        return Err(Error::StepUnderflow);
    }
    let g = metric.metric(p)?;
    christoffel_with_steps(metric, p, axis_steps(&g, p, step))
}

/// Riemann tensor `r[l][k][i][j] = R^l_kij` at a point.
#[derive(Debug, Clone)]
pub struct Riemann {
    pub r: [[[[f64; 3]; 3]; 3]; 3],
    pub g: Matrix3<f64>,
    /// Largest `|R^l_kij + R^l_ijk + R^l_jki|`.
    pub bianchi_residual: f64,
}

impl Riemann {
    /// `R(X,Y)Z` in coordinates.
    pub fn apply(&self, x: &Vector3<f64>, y: &Vector3<f64>, z: &Vector3<f64>) -> Vector3<f64> {
        let mut out = Vector3::zeros();
        for l in 0..3 {
            let mut s = 0.0;
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        s += self.r[l][k][i][j] * z[k] * x[i] * y[j];
                    }
                }
            }
            out[l] = s;
        }
        out
    }

    pub fn inner(&self, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
        (u.transpose() * self.g * v)[(0, 0)]
    }

    pub fn sectional(&self, x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
        let num = self.inner(&self.apply(x, y, y), x);
        let area = self.inner(x, x) * self.inner(y, y) - self.inner(x, y).powi(2);
        num / area
    }

    pub fn ricci(&self, y: &Vector3<f64>, z: &Vector3<f64>) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    s += self.r[i][k][i][j] * y[j] * z[k];
                }
            }
        }
        s
    }

    /// Gram–Schmidt orthonormalization of the coordinate basis.
    pub fn frame(&self) -> [Vector3<f64>; 3] {
        let mut e: [Vector3<f64>; 3] = [Vector3::x(), Vector3::y(), Vector3::z()];
        for a in 0..3 {
            for b in 0..a {
                let c = self.inner(&e[a], &e[b]);
                e[a] -= e[b] * c;
            }
            let n = self.inner(&e[a], &e[a]).sqrt();
            e[a] /= n;
        }
        e
    }
}

/// Riemann tensor at `p` from differences of [`christoffel_fd`].
pub fn riemann_fd(metric: &dyn CoordMetric, p: [f64; 3], step: f64) -> Result<Riemann> {
    check_pole(p)?;
    if !(step > 0.0) {
        return Err(Error::StepUnderflow);
    }
    let g = metric.metric(p)?;
    let steps = axis_steps(&g, p, step);
    let gamma = christoffel_with_steps(metric, p, steps)?;
    // dgamma[a][l][i][j] = ∂_a Γ^l_ij
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
    for (a, da) in dgamma.iter_mut().enumerate() {
        let h = steps[a];
        for (off, w) in STENCIL {
            let c = christoffel_with_steps(metric, shifted(p, a, off * h), steps)?;
            for l in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        da[l][i][j] += c[l][i][j] * (w / (60.0 * h));
                    }
                }
            }
        }
    }
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for l in 0..3 {
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut v = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                    for m in 0..3 {
                        v += gamma[l][i][m] * gamma[m][j][k] - gamma[l][j][m] * gamma[m][i][k];
                    }
                    r[l][k][i][j] = v;
                }
            }
        }
    }
    let mut bianchi = 0.0f64;
    for l in 0..3 {
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    bianchi = bianchi.max((r[l][k][i][j] + r[l][i][j][k] + r[l][j][k][i]).abs());
                }
            }
        }
    }
    Ok(Riemann { r, g, bianchi_residual: bianchi })
}

/// Evaluation points `(x, φ1)` for [`verify_model`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleGrid {
    pub x: Vec<f64>,
    pub phi1: Vec<f64>,
}

impl OracleGrid {
    pub fn new(x: Vec<f64>, phi1: Vec<f64>) -> Self {
        Self { x, phi1 }
    }

    /// `nx × nphi` grid kept away from horizons, turning points and poles.
    pub fn default_for(model: &WarpingModel, nx: usize, nphi: usize) -> Self {
        let d = model.domain();
        let (lo, hi) = match model.kind() {
            ModelKind::SpaceForm { c } if *c > 0.0 => (0.1 * d.hi, 0.9 * d.hi),
            ModelKind::SpaceForm { .. } => (0.5, 3.0),
            ModelKind::Dss { .. } | ModelKind::Rn { .. } => {
                let s0 = d.lo;
                let top = if d.hi_capped { 6.0 * s0 } else { d.hi };
                (s0 + 0.1 * (top - s0), top - 0.1 * (top - s0))
            }
            ModelKind::Profile(_) => {
                if d.hi_capped || d.lo_capped {
                    (d.lo.max(-3.0), d.hi.min(3.0))
                } else {
                    let w = d.hi - d.lo;
                    (d.lo + 0.1 * w, d.hi - 0.1 * w)
                }
            }
        };
        Self {
            x: linspace(lo, hi, nx),
            phi1: linspace(0.2, PI - 0.2, nphi),
        }
    }
}

/// Per-point maximal relative errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointErrors {
    pub x: f64,
    pub phi1: f64,
    pub k_tan: f64,
    pub k_rad: f64,
    pub ricci: f64,
    pub scal: f64,
    pub riemann: f64,
    pub bianchi: f64,
}

/// Maximal relative errors of the closed forms against the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub model: String,
    pub nx: usize,
    pub nphi: usize,
    pub tol: f64,
    pub k_tan: f64,
    pub k_rad: f64,
    pub ricci: f64,
    pub scal: f64,
    pub riemann: f64,
    pub bianchi: f64,
    pub points: Vec<PointErrors>,
    pub pass: bool,
}

impl OracleReport {
    /// `(name, max error)` rows in a fixed order.
    pub fn rows(&self) -> [(&'static str, f64); 6] {
        [
            ("k_tan", self.k_tan),
            ("k_rad", self.k_rad),
            ("ricci_normal", self.ricci),
            ("scal", self.scal),
            ("riemann_frames", self.riemann),
            ("bianchi", self.bianchi),
        ]
    }
}

/// Relative error with denominator `max(|a|, |b|, 1e-3)`.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-3)
}

/// Seed for the random frames used by [`verify_model`].
pub const FRAME_SEED: u64 = 0x5eed_0ff4_a3e5;

/// Compare `K_tan`, `K_rad`, `Ric(N,N)` at the angles in [`NU_SAMPLES`],
/// `scal` and the closed-form curvature operator on random vectors with
/// the finite-difference tensors over `grid`.
pub fn verify_model(model: &WarpingModel, grid: &OracleGrid, tol: f64) -> Result<OracleReport> {
    let metric = WarpedMetric::new(model, FirstCoordinate::Model);
    let mut rng = ChaCha8Rng::seed_from_u64(FRAME_SEED);
    let mut points = Vec::with_capacity(grid.x.len() * grid.phi1.len());
    for &x in &grid.x {
        let state = curvature_state(model, x)?;
        for &phi1 in &grid.phi1 {
            let riem = riemann_fd(&metric, [x, phi1, 0.7], FD_STEP)?;
            let e = riem.frame();
            let k_tan = rel_err(state.k_tan, riem.sectional(&e[1], &e[2]));
            let k_rad = rel_err(state.k_rad, riem.sectional(&e[0], &e[1]))
                .max(rel_err(state.k_rad, riem.sectional(&e[0], &e[2])));
            let mut ricci = 0.0f64;
            for nu in NU_SAMPLES {
                let n = e[0] * nu + e[1] * (1.0 - nu * nu).sqrt();
                ricci = ricci.max(rel_err(ricci_normal(&state, nu)?, riem.ricci(&n, &n)));
            }
            let trace: f64 = e.iter().map(|v| riem.ricci(v, v)).sum();
            let scal = rel_err(scalar_curvature(&state), trace / 6.0);
            let mut riemann = 0.0f64;
            for _ in 0..3 {
                let mut draw = || Vec3W::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let (u, v, w) = (draw(), draw(), draw());
                let closed = riemann_apply(&state, u, v, w);
                let to_coord = |a: Vec3W| e[0] * a.0[0] + e[1] * a.0[1] + e[2] * a.0[2];
                let fd = riem.apply(&to_coord(v), &to_coord(u), &to_coord(w));
                for (k, ek) in e.iter().enumerate() {
                    riemann = riemann.max(rel_err(closed.0[k], riem.inner(&fd, ek)));
                }
            }
            points.push(PointErrors {
                x,
                phi1,
                k_tan,
                k_rad,
                ricci,
                scal,
                riemann,
                bianchi: riem.bianchi_residual,
            });
        }
    }
    let max = |f: fn(&PointErrors) -> f64| points.iter().map(f).fold(0.0, f64::max);
    let mut report = OracleReport {
        model: model.label(),
        nx: grid.x.len(),
        nphi: grid.phi1.len(),
        tol,
        k_tan: max(|p| p.k_tan),
        k_rad: max(|p| p.k_rad),
        ricci: max(|p| p.ricci),
        scal: max(|p| p.scal),
        riemann: max(|p| p.riemann),
        bianchi: max(|p| p.bianchi),
        points,
        pass: false,
    };
    report.pass = report.rows().iter().all(|(_, v)| *v <= tol);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_polar_christoffel() {
        let m = WarpingModel::space_form(0.0).unwrap();
        let g = christoffel_fd(&WarpedMetric::new(&m, FirstCoordinate::Model), [1.0, PI / 2.0, 0.3], FD_STEP).unwrap();
        assert!((g[0][2][2] + 1.0).abs() < 1e-10);
        assert!((g[0][1][1] + 1.0).abs() < 1e-10);
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert!((g[k][i][j] - g[k][j][i]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn schwarzschild_christoffel_both_coordinates() {
        let m = WarpingModel::dss(1.0, 0.0).unwrap();
        let r = 2.5;
        let j = m.jet(r).unwrap();
        let g = christoffel_fd(&WarpedMetric::new(&m, FirstCoordinate::Model), [r, 1.0, 0.0], FD_STEP).unwrap();
        // Γ^r_θθ = -r (1 - m/r)
        assert!((g[0][1][1] + r * (1.0 - 1.0 / r)).abs() < 1e-7);
        let t = m.t_of(r).unwrap();
        let g = christoffel_fd(&WarpedMetric::new(&m, FirstCoordinate::ArcLength), [t, 1.0, 0.0], FD_STEP).unwrap();
        // Γ^t_θθ = -h h'
        assert!((g[0][1][1] + j.h * j.hp).abs() < 1e-7);
    }

    #[test]
    fn pole_rejected() {
        let m = WarpingModel::space_form(1.0).unwrap();
        let err = riemann_fd(&WarpedMetric::new(&m, FirstCoordinate::Model), [1.0, 0.05, 0.0], FD_STEP).unwrap_err();
        assert_eq!(err, Error::PoleProximity(0.05));
    }

    #[test]
    fn round_sphere_sectional() {
        let m = WarpingModel::space_form(1.0).unwrap();
        let r = riemann_fd(&WarpedMetric::new(&m, FirstCoordinate::Model), [1.1, 0.9, 0.0], FD_STEP).unwrap();
        let e = r.frame();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            assert!((r.sectional(&e[a], &e[b]) - 1.0).abs() < 1e-6);
        }
        assert!(r.bianchi_residual < 1e-8);
    }

    #[test]
    fn schwarzschild_radial_sectional_in_arc_length() {
        let m = WarpingModel::dss(1.0, 0.0).unwrap();
        let t = m.t_of(2.0).unwrap();
        let r = riemann_fd(&WarpedMetric::new(&m, FirstCoordinate::ArcLength), [t, 1.2, 0.0], FD_STEP).unwrap();
        let e = r.frame();
        assert!((r.sectional(&e[0], &e[1]) + 1.0 / 16.0).abs() < 1e-6);
        assert!((r.sectional(&e[1], &e[2]) - 1.0 / 8.0).abs() < 1e-6);
    }

    #[test]
    fn fourth_order_convergence() {
        let m = WarpingModel::dss(1.0, 0.0).unwrap();
        let metric = WarpedMetric::new(&m, FirstCoordinate::Model);
        let exact = -1.0 / 16.0;
        let err = |h: f64| {
            let r = riemann_fd(&metric, [2.0, 1.0, 0.0], h).unwrap();
            let e = r.frame();
            (r.sectional(&e[0], &e[1]) - exact).abs()
        };
        let (e1, e2) = (err(0.2), err(0.1));
        assert!(e1 / e2 >= 8.0, "{e1} {e2}");
    }

    #[test]
    fn flat_space_verifies_tightly() {
        let m = WarpingModel::space_form(0.0).unwrap();
        // every closed form vanishes, so relative 1e-6 is absolute 1e-9
        let rep = verify_model(&m, &OracleGrid::default_for(&m, 5, 4), 1e-6).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
