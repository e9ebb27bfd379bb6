//! The Hersch-type sum `Q(X,X) + Q(JX,JX)` for harmonic fields on a CMC
//! surface, and the curvature thresholds derived from it.

use super::TIE_TOL;
use crate::curvature::{curvature_state, ricci_infimum, scalar_curvature, SCAN_POINTS};
use crate::embedding::mean_vector_norm;
use crate::error::{Error, Result};
use crate::numeric::{sup_on_grid, Extremum};
use crate::warping::{Interval, WarpingModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QSumInput {
    /// Mean curvature of the surface.
    pub h: f64,
    pub a: f64,
    pub eps: f64,
    /// `<N, ∂t>`.
    pub nu: f64,
    /// `‖X‖²`.
    pub x_norm2: f64,
}

impl QSumInput {
    fn validate(&self) -> Result<()> {
        if !(-1.0..=1.0).contains(&self.nu) {
            return Err(Error::NuOutOfRange(self.nu));
        }
        if !(self.x_norm2 >= 0.0) {
            return Err(Error::NegativeNorm);
        }
        Ok(())
    }
}

/// `(factored, expanded)`:
/// `(4H² + a²(4 + 4ε - 2εy - ε²y²))‖X‖²` and
/// `(4H² + 6a² + 4εa²)‖X‖² - a²(2 + 2εy + ε²y²)‖X‖²`, `y = 1 - ν²`.
pub fn qsum_forms(q: &QSumInput) -> Result<(f64, f64)> {
    q.validate()?;
    let y = 1.0 - q.nu * q.nu;
    let (h2, a2, e) = (q.h * q.h, q.a * q.a, q.eps);
    let factored = (4.0 * h2 + a2 * (4.0 + 4.0 * e - 2.0 * e * y - e * e * y * y)) * q.x_norm2;
    let expanded = (4.0 * h2 + 6.0 * a2 + 4.0 * e * a2) * q.x_norm2 - a2 * (2.0 + 2.0 * e * y + e * e * y * y) * q.x_norm2;
    Ok((factored, expanded))
}

pub fn qsum(q: &QSumInput) -> Result<f64> {
    qsum_forms(q).map(|(f, _)| f)
}

/// `(4H² + 6 scal)‖X‖² - II_terms`, where `II_terms` collects the squared
/// second fundamental form of an isometric embedding paired with `X, JX`.
pub fn qsum_general(h: f64, scal: f64, ii_terms: f64, x_norm2: f64) -> Result<f64> {
    if !(x_norm2 >= 0.0) || !(ii_terms >= 0.0) {
        return Err(Error::NegativeNorm);
    }
    Ok((4.0 * h * h + 6.0 * scal) * x_norm2 - ii_terms)
}

/// A threshold on `H²`, clamped at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdValue {
    pub raw: f64,
    pub value: f64,
    /// `raw < 0`: every `H` qualifies.
    pub vacuous: bool,
    pub at: f64,
    pub attained: bool,
}

impl ThresholdValue {
    fn from_raw(raw: f64, e: &Extremum) -> Self {
        Self { raw, value: raw.max(0.0), vacuous: raw < -TIE_TOL, at: e.at, attained: e.attained }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralThresholds {
    /// `-3 inf(scal - ¾‖𝓗‖²)` for the codimension-one flat embedding.
    pub codim1: ThresholdValue,
    /// `-½ inf ric`.
    pub frensel: ThresholdValue,
}

pub(crate) fn codim1_raw(scal: f64, mean_vec: f64) -> f64 {
    -3.0 * (scal - 0.75 * mean_vec * mean_vec)
}

pub fn general_threshold(model: &WarpingModel, iv: Interval) -> Result<GeneralThresholds> {
    let r = model.resolve(iv)?;
    let grid = r.grid(SCAN_POINTS);
    let mut sign = 0.0;
    for &x in &grid {
        let kt = curvature_state(model, x)?.k_tan;
        let sg = if kt.abs() <= 1e-14 { 0.0 } else { kt.signum() };
        if sg == 0.0 || (sign != 0.0 && sg != sign) {
            return Err(Error::EmbeddingUnavailable(format!("K_tan vanishes or changes sign near x = {x}")));
        }
        sign = sg;
    }
    let f = |x: f64| -> f64 {
        match (curvature_state(model, x), mean_vector_norm(model, x)) {
            (Ok(s), Ok(mv)) => codim1_raw(scalar_curvature(&s), mv),
            _ => f64::NEG_INFINITY,
        }
    };
    let e = sup_on_grid(f, &grid, r.hi_capped, r.lo_capped);
    let codim1 = ThresholdValue::from_raw(e.value, &e);
    let ric = ricci_infimum(model, iv)?;
    let frensel = ThresholdValue::from_raw(-0.5 * ric.value, &ric);
    Ok(GeneralThresholds { codim1, frensel })
}
