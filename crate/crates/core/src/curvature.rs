//! Closed-form curvature of `dt^2 + h(t)^2 dω^2`.
//!
//! With `K_tan = (1 - h'^2)/h^2` (planes tangent to the fiber) and
//! `K_rad = -h''/h` (planes containing `∂t`), the curvature tensor is
//!
//! ```text
//! R(X,Y)Z = K_tan (<X,Z>Y - <Y,Z>X)
//!         - (K_tan - K_rad) <<X,Z>Y - <Y,Z>X, ∂t> ∂t
//!         - (K_tan - K_rad) <Z,∂t> (<X,∂t>Y - <Y,∂t>X)
//! ```
//!
//! and `Ric(N,N) = Σ_i <R(N,e_i)N, e_i>`.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::numeric::{sup_on_grid, Extremum};
use crate::warping::{dss_domain, rn_s0, Interval, Jet, WarpingModel};

/// Number of scan points used for suprema and infima over intervals.
pub const SCAN_POINTS: usize = 2001;

/// Warping jet plus the two sectional curvatures at one model coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureState {
    pub x: f64,
    pub h: f64,
    pub hp: f64,
    pub hpp: f64,
    pub hppp: f64,
    pub k_tan: f64,
    pub k_rad: f64,
}

impl CurvatureState {
    pub fn from_jet(j: Jet) -> Self {
        Self {
            x: j.x,
            h: j.h,
            hp: j.hp,
            hpp: j.hpp,
            hppp: j.hppp,
            k_tan: (1.0 - j.hp * j.hp) / (j.h * j.h),
            k_rad: -j.hpp / j.h,
        }
    }

    /// Mean curvature `h'/h` of the slice through this point.
    pub fn slice_h(&self) -> f64 {
        self.hp / self.h
    }
}

pub fn curvature_state(model: &WarpingModel, x: f64) -> Result<CurvatureState> {
    Ok(CurvatureState::from_jet(model.jet(x)?))
}

/// `(K_tan, K_rad) = (m/r^3 + c, -m/(2r^3) + c)`.
pub fn dss_curvatures_in_r(m: f64, c: f64, r: f64) -> Result<(f64, f64)> {
    let (s0, s1) = dss_domain(m, c)?;
    if !(r >= s0 && r < s1) {
        return Err(Error::OutOfDomain { x: r, lo: s0, hi: s1 });
    }
    let r3 = r * r * r;
    Ok((m / r3 + c, -m / (2.0 * r3) + c))
}

/// `(K_tan, K_rad) = ((2m - 2q^2/r)/(2r^3), -(m - 2q^2/r)/(2r^3))`.
pub fn rn_curvatures_in_r(m: f64, q: f64, r: f64) -> Result<(f64, f64)> {
    let s0 = rn_s0(m, q)?;
    if !(r >= s0) || !r.is_finite() {
        return Err(Error::OutOfDomain { x: r, lo: s0, hi: f64::INFINITY });
    }
    let r3 = r * r * r;
    Ok((
        (2.0 * m - 2.0 * q * q / r) / (2.0 * r3),
        -(m - 2.0 * q * q / r) / (2.0 * r3),
    ))
}

/// Tangent vector in the orthonormal frame `(∂t, e1, e2)`, `e1, e2` tangent
/// to the fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3W(pub [f64; 3]);

impl Vec3W {
    pub const RADIAL: Self = Self([1.0, 0.0, 0.0]);

    pub fn new(radial: f64, f1: f64, f2: f64) -> Self {
        Self([radial, f1, f2])
    }

    /// Unit vector with `<N, ∂t> = ν`, rotated from `∂t` towards `e1`.
    pub fn unit_with_nu(nu: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&nu) {
            return Err(Error::NuOutOfRange(nu));
        }
        Ok(Self([nu, (1.0 - nu * nu).sqrt(), 0.0]))
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn radial(&self) -> f64 {
        self.0[0]
    }
}

impl Add for Vec3W {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Vec3W {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<Vec3W> for f64 {
    type Output = Vec3W;
    fn mul(self, v: Vec3W) -> Vec3W {
        Vec3W([self * v.0[0], self * v.0[1], self * v.0[2]])
    }
}

/// `R(X,Y)Z` from the three-term closed form.
pub fn riemann_apply(s: &CurvatureState, x: Vec3W, y: Vec3W, z: Vec3W) -> Vec3W {
    let d = s.k_tan - s.k_rad;
    let w = x.dot(&z) * y - y.dot(&z) * x;
    let tail = x.radial() * y - y.radial() * x;
    s.k_tan * w - (d * w.radial()) * Vec3W::RADIAL - (d * z.radial()) * tail
}

/// `Ric(N,N)` in the two algebraically equivalent forms
/// `2K_tan + (K_rad - K_tan)(1+ν^2)` and `2K_rad + (K_tan - K_rad)(1-ν^2)`.
pub fn ricci_normal_forms(s: &CurvatureState, nu: f64) -> Result<(f64, f64)> {
    if !(-1.0..=1.0).contains(&nu) {
        return Err(Error::NuOutOfRange(nu));
    }
    let n2 = nu * nu;
    Ok((
        2.0 * s.k_tan + (s.k_rad - s.k_tan) * (1.0 + n2),
        2.0 * s.k_rad + (s.k_tan - s.k_rad) * (1.0 - n2),
    ))
}

/// `Ric(N,N)` for a unit normal with `<N, ∂t> = ν`.
pub fn ricci_normal(s: &CurvatureState, nu: f64) -> Result<f64> {
    ricci_normal_forms(s, nu).map(|(a, _)| a)
}

/// Normalized scalar curvature `(K_tan + 2 K_rad)/3`.
pub fn scalar_curvature(s: &CurvatureState) -> f64 {
    (s.k_tan + 2.0 * s.k_rad) / 3.0
}

/// The two Ricci eigenvalues, `2 K_rad` (radial) and `K_tan + K_rad` (fiber).
pub fn ricci_eigenvalues(s: &CurvatureState) -> (f64, f64) {
    (2.0 * s.k_rad, s.k_tan + s.k_rad)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrendleCheck {
    /// `dK_rad/dt`.
    pub lhs: f64,
    /// `(h'/h)(K_tan - K_rad)`.
    pub rhs: f64,
    pub holds: bool,
}

/// Absolute slack in the Brendle verdict, so that equality cases hold.
pub const BRENDLE_SLACK: f64 = 1e-12;

/// `dK_rad/dt <= (h'/h)(K_tan - K_rad)`, with
/// `dK_rad/dt = -(h''' h - h'' h')/h^2`.
pub fn brendle_condition(model: &WarpingModel, x: f64) -> Result<BrendleCheck> {
    let s = curvature_state(model, x)?;
    Ok(brendle_from_state(&s))
}

pub fn brendle_from_state(s: &CurvatureState) -> BrendleCheck {
    let lhs = -(s.hppp * s.h - s.hpp * s.hp) / (s.h * s.h);
    let rhs = s.slice_h() * (s.k_tan - s.k_rad);
    BrendleCheck { lhs, rhs, holds: lhs <= rhs + BRENDLE_SLACK }
}

/// Infimum over the interval of the smallest Ricci eigenvalue
/// `min(2 K_rad, K_tan + K_rad)`.
pub fn ricci_infimum(model: &WarpingModel, iv: Interval) -> Result<Extremum> {
    let r = model.resolve(iv)?;
    let grid = r.grid(SCAN_POINTS);
    let f = |x: f64| {
        curvature_state(model, x)
            .map(|s| {
                let (a, b) = ricci_eigenvalues(&s);
                -a.min(b)
            })
            .unwrap_or(f64::NEG_INFINITY)
    };
    let sup = sup_on_grid(f, &grid, r.hi_capped, r.lo_capped);
    Ok(Extremum { value: -sup.value, ..sup })
}
