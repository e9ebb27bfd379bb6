//! The warped product as a rotational hypersurface
//! `F(t, ω) = (f(t), h(t) ω)` of flat `(R^4, κ dx0^2 + Σ dxi^2)`,
//! with `κ f'^2 + h'^2 = 1` and `κ = sign(K_tan)`.
//!
//! Its second fundamental form with respect to `E = (-h', κ f' ω)` is
//! `a <·,·> + ε a dt^2`, `a = κ sqrt|K_tan|`, `ε = (K_rad - K_tan)/K_tan`.

use crate::curvature::{curvature_state, scalar_curvature, CurvatureState};
use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::quadrature::{cumulative_integral, GaussLegendre};
use crate::warping::{Interval, ModelKind, WarpingModel};

/// Default finite-difference step (in arc length and in angle) for the
/// numeric second fundamental form.
pub const FD_STEP: f64 = 1e-3;

/// Closed-form second fundamental form at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondForm {
    pub x: f64,
    pub kappa: f64,
    /// Coefficient of the metric, `κ sqrt|K_tan|`.
    pub a: f64,
    /// Coefficient of `dt^2`, `-(K_tan - K_rad)/sqrt|K_tan|`.
    pub dt2: f64,
    pub eps: f64,
    /// `ε a^2 = κ (K_rad - K_tan)`; finite even as `K_tan → 0`.
    pub delta: f64,
}

impl SecondForm {
    /// Value on the unit radial direction, `a + ε a`.
    pub fn radial_slot(&self) -> f64 {
        self.a + self.dt2
    }

    /// Norm of the mean curvature vector, `|tr II|/3 = |a (3 + ε)|/3`.
    pub fn mean_vector_norm(&self) -> f64 {
        (self.a * (3.0 + self.eps)).abs() / 3.0
    }

    /// `(6a^2 + 4εa^2)/6`: the Gauss equation's value of `κ · scal`.
    pub fn gauss_scal(&self) -> f64 {
        (6.0 * self.a * self.a + 4.0 * self.eps * self.a * self.a) / 6.0
    }
}

/// `Σ_i [II(e_i,X)^2 + II(e_i,JX)^2]` over an orthonormal frame of a
/// surface with normal `ν = <N, ∂t>`: `a^2 (2 + 2εy + ε^2 y^2) ‖X‖^2`,
/// `y = 1 - ν^2`.
pub fn codim1_ii_terms(a: f64, eps: f64, nu: f64, x_norm2: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&nu) {
        return Err(Error::NuOutOfRange(nu));
    }
    if x_norm2 < 0.0 {
        return Err(Error::NegativeNorm);
    }
    let y = 1.0 - nu * nu;
    Ok(a * a * (2.0 + 2.0 * eps * y + eps * eps * y * y) * x_norm2)
}

fn form_from_state(s: &CurvatureState) -> Result<SecondForm> {
    let scale = 1.0 + s.k_rad.abs();
    if s.k_tan.abs() <= 1e-14 * scale {
        return Err(Error::VanishingKTan { x: s.x, delta: s.k_rad - s.k_tan });
    }
    let kappa = s.k_tan.signum();
    let root = s.k_tan.abs().sqrt();
    let a = kappa * root;
    let dt2 = -(s.k_tan - s.k_rad) / root;
    Ok(SecondForm {
        x: s.x,
        kappa,
        a,
        dt2,
        eps: (s.k_rad - s.k_tan) / s.k_tan,
        delta: kappa * (s.k_rad - s.k_tan),
    })
}

pub fn second_form_closed(model: &WarpingModel, x: f64) -> Result<SecondForm> {
    form_from_state(&curvature_state(model, x)?)
}

/// `‖𝓗‖` of the codimension-one flat embedding at `x`.
pub fn mean_vector_norm(model: &WarpingModel, x: f64) -> Result<f64> {
    second_form_closed(model, x).map(|f| f.mean_vector_norm())
}

/// The embedding sampled on a grid of the model coordinate.
#[derive(Debug, Clone)]
pub struct FlatEmbedding {
    pub kappa: f64,
    pub model: WarpingModel,
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub f: Vec<f64>,
    pub h: Vec<f64>,
    /// Largest `|κ f'^2 + h'^2 - 1|` over the grid.
    pub relation_residual: f64,
}

/// `f'(t) = sqrt(κ(1 - h'^2))`.
fn f_prime(model: &WarpingModel, kappa: f64, x: f64) -> Result<f64> {
    let j = model.jet(x)?;
    Ok((kappa * (1.0 - j.hp * j.hp)).max(0.0).sqrt())
}

/// `df/dx` in the model coordinate.
fn df_dx(model: &WarpingModel, kappa: f64, x: f64) -> Result<f64> {
    if let ModelKind::Profile(_) = model.kind() {
        // f'(t) G'(s) = sqrt(1/(1+u'^2)) sqrt(1+u'^2) = 1
        return Ok(1.0);
    }
    Ok(f_prime(model, kappa, x)? * model.dt_dx(x)?)
}

/// Build the embedding over `iv`, sampled at `n` points.
pub fn build_embedding(model: &WarpingModel, iv: Interval, n: usize) -> Result<FlatEmbedding> {
    let r = model.resolve(iv)?;
    let grid = r.grid(n.max(2));
    let k_tan = |x: f64| curvature_state(model, x).map(|s| s.k_tan);
    let mut kappa = 0.0;
    for w in grid.windows(2) {
        let (k0, k1) = (k_tan(w[0])?, k_tan(w[1])?);
        if k0 == 0.0 {
            return Err(Error::VanishingKTan { x: w[0], delta: curvature_state(model, w[0])?.k_rad });
        }
        if k0.signum() != k1.signum() {
            let at = bisect(|v| k_tan(v).unwrap_or(0.0), w[0], w[1], 0.0).unwrap_or(w[1]);
            return Err(Error::SignChangeOfKTan { x: at });
        }
        kappa = k0.signum();
    }
    let last = *grid.last().unwrap();
    if k_tan(last)? == 0.0 {
        return Err(Error::VanishingKTan { x: last, delta: curvature_state(model, last)?.k_rad });
    }
    let singular_left = model.is_ode() && grid[0] <= model.domain().lo;
    let f = cumulative_integral(|v| df_dx(model, kappa, v).unwrap_or(f64::NAN), &grid, singular_left)?;
    let mut t = Vec::with_capacity(grid.len());
    let mut h = Vec::with_capacity(grid.len());
    let mut residual = 0.0f64;
    for &x in &grid {
        let j = model.jet(x)?;
        let fp = f_prime(model, kappa, x)?;
        residual = residual.max((kappa * fp * fp + j.hp * j.hp - 1.0).abs());
        t.push(model.t_of(x)?);
        h.push(j.h);
    }
    Ok(FlatEmbedding {
        kappa,
        model: model.clone(),
        x: grid,
        t,
        f,
        h,
        relation_residual: residual,
    })
}

/// Second fundamental form sampled by finite differences, in the
/// orthonormal frame `(∂t, e_φ1, e_φ2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondFormSample {
    pub tt: f64,
    pub p1p1: f64,
    pub p2p2: f64,
    pub tp1: f64,
    pub tp2: f64,
    pub p1p2: f64,
}

impl SecondFormSample {
    fn entries(&self) -> [f64; 6] {
        [self.tt, self.p1p1, self.p2p2, self.tp1, self.tp2, self.p1p2]
    }

    fn from_entries(e: [f64; 6]) -> Self {
        Self { tt: e[0], p1p1: e[1], p2p2: e[2], tp1: e[3], tp2: e[4], p1p2: e[5] }
    }

    /// Largest relative deviation from the closed form, with denominator
    /// `max(|closed|, |numeric|, 1e-3)`.
    pub fn max_rel_error(&self, closed: &SecondForm) -> f64 {
        let expect = [closed.radial_slot(), closed.a, closed.a, 0.0, 0.0, 0.0];
        self.entries()
            .iter()
            .zip(expect)
            .map(|(n, c)| (n - c).abs() / c.abs().max(n.abs()).max(1e-3))
            .fold(0.0, f64::max)
    }
}

fn omega(p1: f64, p2: f64) -> [f64; 3] {
    [p1.sin() * p2.cos(), p1.sin() * p2.sin(), p1.cos()]
}

fn d2_vec<F: Fn(f64) -> [f64; 4]>(f: F, x: f64, h: f64) -> [f64; 4] {
    let (a, b, c, d, e) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
    std::array::from_fn(|k| (-a[k] + 16.0 * b[k] - 30.0 * c[k] + 16.0 * d[k] - e[k]) / (12.0 * h * h))
}

fn d1_vec<F: Fn(f64) -> [f64; 4]>(f: F, x: f64, h: f64) -> [f64; 4] {
    let (a, b, d, e) = (f(x - 2.0 * h), f(x - h), f(x + h), f(x + 2.0 * h));
    std::array::from_fn(|k| (a[k] - 8.0 * b[k] + 8.0 * d[k] - e[k]) / (12.0 * h))
}

fn d11_vec<F: Fn(f64, f64) -> [f64; 4]>(f: F, x: f64, y: f64, hx: f64, hy: f64) -> [f64; 4] {
    d1_vec(|u| d1_vec(|v| f(u, v), y, hy), x, hx)
}

impl FlatEmbedding {
    /// Pseudo inner product `κ u0 v0 + Σ ui vi`.
    fn dot(&self, u: &[f64; 4], v: &[f64; 4]) -> f64 {
        self.kappa * u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
    }

    /// `F(x, φ1, φ2)` with `f` measured from `x0`.
    fn point(&self, x0: f64, x: f64, p1: f64, p2: f64) -> [f64; 4] {
        let gl = GaussLegendre::get(20);
        let f = gl.integrate(|v| df_dx(&self.model, self.kappa, v).unwrap_or(f64::NAN), x0, x);
        let h = self.model.jet(x).map_or(f64::NAN, |j| j.h);
        let w = omega(p1, p2);
        [f, h * w[0], h * w[1], h * w[2]]
    }

    fn sample_with_step(&self, x: f64, p1: f64, p2: f64, step: f64) -> Result<SecondFormSample> {
        let d = self.model.domain();
        let dtdx = self.model.dt_dx(x)?;
        let mut dx = step / dtdx;
        while !(d.contains(x - 2.0 * dx) && d.contains(x + 2.0 * dx)) {
            dx *= 0.5;
            if dx < 1e-9 * (1.0 + x.abs()) {
                return Err(Error::StepUnderflow);
            }
        }
        let j = self.model.jet(x)?;
        let fp = f_prime(&self.model, self.kappa, x)?;
        let w = omega(p1, p2);
        let e = [-j.hp, self.kappa * fp * w[0], self.kappa * fp * w[1], self.kappa * fp * w[2]];
        let ii = |v: [f64; 4]| -self.dot(&v, &e);
        let f3 = |u: f64, a: f64, b: f64| self.point(x, u, a, b);
        let xx = ii(d2_vec(|u| f3(u, p1, p2), x, dx));
        let aa = ii(d2_vec(|a| f3(x, a, p2), p1, step));
        let bb = ii(d2_vec(|b| f3(x, p1, b), p2, step));
        let xa = ii(d11_vec(|u, a| f3(u, a, p2), x, p1, dx, step));
        let xb = ii(d11_vec(|u, b| f3(u, p1, b), x, p2, dx, step));
        let ab = ii(d11_vec(|a, b| f3(x, a, b), p1, p2, step, step));
        let (gx, g1, g2) = (dtdx, j.h, j.h * p1.sin());
        Ok(SecondFormSample {
            tt: xx / (gx * gx),
            p1p1: aa / (g1 * g1),
            p2p2: bb / (g2 * g2),
            tp1: xa / (gx * g1),
            tp2: xb / (gx * g2),
            p1p2: ab / (g1 * g2),
        })
    }
}

/// Second fundamental form of the embedding at `(x, φ1, φ2)` from
/// fourth-order finite differences of `F`, with
/// `II(∂i,∂j) = -<∂i∂j F, E>`. Two step sizes are compared; when they
/// disagree the Richardson extrapolant is returned.
pub fn second_form_numeric(emb: &FlatEmbedding, x: f64, phi1: f64, phi2: f64, step: f64) -> Result<SecondFormSample> {
    if !(0.1..=std::f64::consts::PI - 0.1).contains(&phi1) {
        return Err(Error::PoleProximity(phi1));
    }
    if !(step > 1e-8) {
        return Err(Error::StepUnderflow);
    }
    let coarse = emb.sample_with_step(x, phi1, phi2, step)?;
    let fine = emb.sample_with_step(x, phi1, phi2, 0.5 * step)?;
    let (c, f) = (coarse.entries(), fine.entries());
    let scale = c.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let agree = c.iter().zip(&f).all(|(a, b)| (a - b).abs() <= 1e-7 * scale);
    if agree {
        Ok(fine)
    } else {
        Ok(SecondFormSample::from_entries(std::array::from_fn(|k| (16.0 * f[k] - c[k]) / 15.0)))
    }
}

/// Gauss closure residual `|6 κ scal - (6a^2 + 4εa^2)|` at `x`.
pub fn gauss_closure(model: &WarpingModel, x: f64) -> Result<(f64, f64)> {
    let s = curvature_state(model, x)?;
    let form = form_from_state(&s)?;
    Ok((6.0 * form.kappa * scalar_curvature(&s), 6.0 * form.gauss_scal()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn round_sphere_is_umbilic() {
        let m = WarpingModel::space_form(1.0).unwrap();
        let f = second_form_closed(&m, 1.0).unwrap();
        assert!((f.a - 1.0).abs() < 1e-15 && f.eps.abs() < 1e-15);
        assert!((f.mean_vector_norm() - 1.0).abs() < 1e-15);
        let emb = build_embedding(&m, Interval::new(0.2, 2.9), 50).unwrap();
        assert_eq!(emb.kappa, 1.0);
        for (t, f) in emb.t.iter().zip(&emb.f) {
            let expect = (0.2f64).cos() - t.cos();
            assert!((f - expect).abs() < 1e-10);
        }
        let s = second_form_numeric(&emb, 1.0, 1.0, 0.4, FD_STEP).unwrap();
        for v in [s.tt, s.p1p1, s.p2p2] {
            assert!((v - 1.0).abs() < 1e-6, "{s:?}");
        }
    }

    #[test]
    fn schwarzschild_values() {
        let m = WarpingModel::dss(1.0, 0.0).unwrap();
        let f = second_form_closed(&m, 2.0).unwrap();
        assert!((f.a - 0.125f64.sqrt()).abs() < 1e-15);
        assert!((f.eps + 1.5).abs() < 1e-14);
        assert!((f.delta + 3.0 / 16.0).abs() < 1e-15);
        assert!((f.mean_vector_norm() - 0.125f64.sqrt() / 2.0).abs() < 1e-15);
        let emb = build_embedding(&m, Interval::new(1.1, 5.0), 40).unwrap();
        assert_eq!(emb.kappa, 1.0);
        assert!(emb.relation_residual < 1e-10);
        let s = second_form_numeric(&emb, 2.0, PI / 2.0, 0.0, FD_STEP).unwrap();
        assert!(s.max_rel_error(&f) < 1e-6, "{s:?} vs {f:?}");
        assert!((s.tt - (f.a + f.eps * f.a)).abs() < 1e-6);
    }

    #[test]
    fn timelike_branch() {
        let m = WarpingModel::space_form(-4.0).unwrap();
        let emb = build_embedding(&m, Interval::new(0.1, 2.0), 30).unwrap();
        assert_eq!(emb.kappa, -1.0);
        assert!(emb.relation_residual < 1e-10);
        let f = second_form_closed(&m, 0.7).unwrap();
        assert!((f.a + 2.0).abs() < 1e-12);
        let s = second_form_numeric(&emb, 0.7, 1.2, 0.0, FD_STEP).unwrap();
        assert!(s.max_rel_error(&f) < 1e-6, "{s:?} vs {f:?}");
    }

    #[test]
    fn sign_change_is_rejected() {
        let m = WarpingModel::dss(1.0, -1.0).unwrap();
        let err = build_embedding(&m, Interval::new(0.8, 3.0), 40).unwrap_err();
        match err {
            Error::SignChangeOfKTan { x } => assert!((x - 1.0).abs() < 1e-9),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn flat_space_has_no_form() {
        let m = WarpingModel::space_form(0.0).unwrap();
        assert!(matches!(second_form_closed(&m, 1.0), Err(Error::VanishingKTan { .. })));
    }

    #[test]
    fn minimal_fixture_has_zero_mean_vector() {
        let f = SecondForm { x: 0.0, kappa: 1.0, a: 0.7, dt2: -2.1, eps: -3.0, delta: -3.0 * 0.49 };
        assert!(f.mean_vector_norm().abs() < 1e-15);
    }

    #[test]
    fn pole_is_rejected() {
        let m = WarpingModel::space_form(1.0).unwrap();
        let emb = build_embedding(&m, Interval::new(0.2, 2.9), 10).unwrap();
        assert_eq!(second_form_numeric(&emb, 1.0, 0.05, 0.0, FD_STEP).unwrap_err(), Error::PoleProximity(0.05));
    }

    #[test]
    fn gauss_closure_signs() {
        for m in [WarpingModel::dss(1.0, 0.05).unwrap(), WarpingModel::space_form(-1.0).unwrap()] {
            let (l, r) = gauss_closure(&m, 1.5).unwrap();
            assert!((l - r).abs() <= 1e-12 * l.abs().max(1.0));
        }
    }
}
