#![allow(dead_code)]

use warpstab_core::WarpingModel;

/// One of the built-in families, parametrized by three numbers in `[0, 1)`.
pub fn model_from(kind: u8, p: f64, q: f64) -> WarpingModel {
    match kind % 5 {
        0 => WarpingModel::space_form(-1.0 + 2.0 * p).unwrap(),
        1 => {
            let m = 0.5 + 1.5 * p;
            WarpingModel::dss(m, -1.0 + (1.0 + 0.13 / (m * m)) * q).unwrap()
        }
        2 => {
            let m = 1.0 + 2.0 * p;
            WarpingModel::rn(m, 0.45 * m * q).unwrap()
        }
        3 => WarpingModel::ellipsoid(0.3 + 1.7 * p).unwrap(),
        _ => WarpingModel::hyperboloid(0.5 + 1.5 * p).unwrap(),
    }
}

/// A point inside the model's domain at relative position `u ∈ [0, 1]`,
/// kept away from horizons, poles and far caps.
pub fn point_in(model: &WarpingModel, u: f64) -> f64 {
    let d = model.domain();
    let iv = model.default_interval(0.05);
    let mut lo = if iv.lo_capped { -5.0 } else if iv.hi_capped { d.lo } else { iv.lo };
    let hi = if iv.hi_capped { lo.max(0.0) + 5.0 } else { iv.hi };
    if d.lo_closed || (iv.hi_capped && !iv.lo_capped) {
        lo += 0.02 * (hi - lo);
    }
    lo + (0.02 + 0.96 * u) * (hi - lo)
}

/// Oracle for the infimal `H²` with `4H_a² + p(y) > 0` on `[0, 1]`: the
/// quartic is scanned on a grid and `H` is bisected against its minimum.
pub fn h2_scan_oracle(eps: f64, a: f64, ny: usize) -> f64 {
    let pmin = (0..ny)
        .map(|i| {
            let y = i as f64 / (ny - 1) as f64;
            4.0 * (1.0 + eps) - 2.0 * eps * y - eps * eps * y * y
        })
        .fold(f64::INFINITY, f64::min);
    let positive = |h2: f64| {
        let ha2 = h2 / (a * a);
        4.0 * ha2 + pmin > 0.0
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while !positive(hi) {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if positive(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
