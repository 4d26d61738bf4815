use alloc::vec::Vec;

use crate::error::{Error, Result};

const MIN_DEPTH: u32 = 4;
const MAX_DEPTH: u32 = 50;

/// Adaptive Simpson estimate of ∫ₐᵇ f with absolute error target `tol`.
///
/// Swapping the limits flips the sign exactly.
pub fn quadrature<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::invalid("quadrature tolerance must be positive"));
    }
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return quadrature(f, b, a, tol).map(|v| -v);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(&f, a, b, fa, fm, fb, whole, tol, 0)
}

#[allow(clippy::too_many_arguments)]
fn simpson<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let sum = left + right;
    let delta = sum - whole;
    // below this the estimate is dominated by rounding, not truncation
    let floor = 8.0 * f64::EPSILON * sum.abs();
    if depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol.max(floor) {
        return Ok(sum + delta / 15.0);
    }
    if depth >= MAX_DEPTH || !(m > a && b > m) {
        return Err(Error::NonConvergence { a, b });
    }
    let l = simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
    let r = simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
    Ok(l + r)
}

/// Running integrals F(gᵢ) = ∫_{t0}^{gᵢ} f on a strictly increasing grid.
///
/// Each segment is integrated once with target `tol` and added to the
/// previous value.
pub fn cumulative_values<F>(f: F, t0: f64, grid: &[f64], tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("cumulative quadrature grid must be strictly increasing"));
    }
    if let Some(&first) = grid.first() {
        if first < t0 {
            return Err(Error::invalid("cumulative quadrature grid starts before t0"));
        }
    }
    let mut out = Vec::with_capacity(grid.len());
    let mut prev_t = t0;
    let mut acc = 0.0;
    for &g in grid {
        acc += quadrature(&f, prev_t, g, tol)?;
        out.push(acc);
        prev_t = g;
    }
    Ok(out)
}
