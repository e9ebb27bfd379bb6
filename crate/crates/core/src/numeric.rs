//! Small scalar routines shared by the geometry modules: bracketing
//! bisection, golden-section refinement, finite-difference stencils and
//! supremum scans over (possibly capped) intervals.

/// Bisection on a sign change of `f` over `[lo, hi]`.
///
/// Returns `None` when `f(lo)` and `f(hi)` have the same strict sign.
/// Iterates until the bracket stops shrinking in floating point or its
/// width falls below `xtol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= xtol {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= xtol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Fourth-order central first derivative.
pub fn d1_central4<F: Fn(f64) -> f64>(f: F, x: f64, step: f64) -> f64 {
    (-f(x + 2.0 * step) + 8.0 * f(x + step) - 8.0 * f(x - step) + f(x - 2.0 * step))
        / (12.0 * step)
}

/// Fourth-order central second derivative.
pub fn d2_central4<F: Fn(f64) -> f64>(f: F, x: f64, step: f64) -> f64 {
    (-f(x + 2.0 * step) + 16.0 * f(x + step) - 30.0 * f(x) + 16.0 * f(x - step)
        - f(x - 2.0 * step))
        / (12.0 * step * step)
}

/// `n` evenly spaced points covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let dx = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + i as f64 * dx })
                .collect()
        }
    }
}

/// Points clustered towards `lo`: the distance from `lo` grows geometrically
/// up to `hi - lo`. Used when `hi` is a finite stand-in for infinity.
pub fn geomspace_from(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 3 {
        return linspace(lo, hi, n);
    }
    let span = hi - lo;
    let dmin = span * 1e-7;
    let mut out = Vec::with_capacity(n);
    out.push(lo);
    for i in 0..n - 1 {
        let frac = i as f64 / (n - 2) as f64;
        out.push(lo + dmin * (span / dmin).powf(frac));
    }
    *out.last_mut().unwrap() = hi;
    out
}

/// Where a supremum was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub value: f64,
    pub at: f64,
    /// `false` when the best value sits on a finite cap standing in for an
    /// infinite endpoint; the reported value is then a limit, not a maximum.
    pub attained: bool,
}

/// Supremum of `f` over a sampled grid, refined by golden section in the
/// two cells adjacent to the best sample.
pub fn sup_on_grid<F: Fn(f64) -> f64>(f: F, grid: &[f64], capped_hi: bool, capped_lo: bool) -> Extremum {
    assert!(!grid.is_empty());
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut best = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[best] {
            best = i;
        }
    }
    let mut at = grid[best];
    let mut value = vals[best];
    if grid.len() >= 3 {
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(grid.len() - 1)];
        let xtol = 1e-13 * (1.0 + lo.abs().max(hi.abs()));
        let (xr, fr) = golden_max(&f, lo, hi, xtol);
        if fr > value {
            at = xr;
            value = fr;
        }
    }
    let n = grid.len();
    let on_cap = (capped_hi && best == n - 1) || (capped_lo && best == 0);
    Extremum {
        value,
        at,
        attained: !on_cap,
    }
}
