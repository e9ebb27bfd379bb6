//! Integral inequalities evaluated on slices by spherical quadrature.

use std::f64::consts::PI;

use crate::curvature::{curvature_state, ricci_normal};
use crate::error::Result;
use crate::quadrature::integrate_slice;
use crate::warping::WarpingModel;

/// Relative slack for the equality cases.
const EQ_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceIntegrals {
    pub x: f64,
    pub order: usize,
    /// `∫(H² + K_tan) dΣ`, bounded below by `4π`.
    pub willmore: f64,
    pub willmore_holds: bool,
    /// `∫(2H² + Ric(N,N)) dΣ`, bounded above by `8π(1 - k)`, here `k = 0`.
    pub genus: f64,
    pub genus_bound: f64,
    pub genus_holds: bool,
    /// `∫ 1/h² dΣ`, equal to `4π`.
    pub gauss_bonnet: f64,
}

pub fn slice_integral_checks(model: &WarpingModel, x: f64, order: usize) -> Result<SliceIntegrals> {
    let s = curvature_state(model, x)?;
    let hm = s.slice_h();
    let ric = ricci_normal(&s, -1.0)?;
    let willmore = integrate_slice(|_, _| hm * hm + s.k_tan, model, x, order)?;
    let genus = integrate_slice(|_, _| 2.0 * hm * hm + ric, model, x, order)?;
    let gauss_bonnet = integrate_slice(|_, _| 1.0 / (s.h * s.h), model, x, order)?;
    let four_pi = 4.0 * PI;
    let genus_bound = 2.0 * four_pi;
    Ok(SliceIntegrals {
        x,
        order,
        willmore,
        willmore_holds: willmore >= four_pi * (1.0 - EQ_TOL),
        genus,
        genus_bound,
        genus_holds: genus <= genus_bound * (1.0 + EQ_TOL),
        gauss_bonnet,
    })
}
