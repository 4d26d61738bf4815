use alloc::vec::Vec;

use super::{ProjTrajectory, RiccatiCoeffs};
use crate::curve::ScalarCurve;
use crate::error::{Error, Result};
use crate::liecore::{expm_sl2, mobius, ProjValue, Sl2Element};
use crate::math;
use crate::numkit::{cumulative_values, quadrature, Trajectory};

/// Grid size used by criterion checks when the caller does not choose one.
pub const DEFAULT_CRITERION_POINTS: usize = 201;

// |b₀b₂| below this counts as vanishing.
const ZERO_PRODUCT: f64 = 1e-14;

/// ẏ = D(t)(c₀ + c₁y + c₂y²): constant coefficients up to a time factor.
#[derive(Debug, Clone)]
pub struct SolvableSpec {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub d: ScalarCurve,
}

impl SolvableSpec {
    pub fn element(&self) -> Sl2Element {
        Sl2Element::new(self.c0, self.c1, self.c2)
    }
}

/// y(t) = Θ(exp(τ·(c₀a₀ + c₁a₁ + c₂a₂)), y₀) with τ = ∫_{t0}^t D.
pub fn solve_solvable(spec: &SolvableSpec, y0: ProjValue, t0: f64, t: f64, tol: f64) -> Result<ProjValue> {
    let tau = quadrature(|s| spec.d.eval(s), t0, t, tol)?;
    Ok(mobius(&expm_sl2(spec.element(), tau), y0))
}

/// [`solve_solvable`] on a whole grid, accumulating τ segment by segment.
pub fn solve_solvable_on(spec: &SolvableSpec, y0: ProjValue, t0: f64, grid: &[f64], tol: f64) -> Result<ProjTrajectory> {
    let taus = cumulative_values(|s| spec.d.eval(s), t0, grid, tol)?;
    let m = spec.element();
    let values = taus.iter().map(|&tau| mobius(&expm_sl2(m, tau), y0)).collect();
    Ok(ProjTrajectory { times: grid.to_vec(), values })
}

/// Outcome of [`check_scaling_integrability`].
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub holds: bool,
    /// Grid mean of E(t).
    pub k: f64,
    /// c₀c₂.
    pub l: f64,
    pub c0: f64,
    pub c2: f64,
    /// D(t) = √(b₀b₂/(c₀c₂)).
    pub d: ScalarCurve,
    /// G(t) = √(b₂c₀/(b₀c₂)), the factor in y′ = G(t)y.
    pub scale: ScalarCurve,
    pub max_deviation: f64,
    /// sign(b₀c₀), constant on the grid.
    pub orientation: f64,
}

impl CriterionReport {
    /// The equation reached by y′ = G(t)y.
    ///
    /// When b₀ and c₀ have opposite signs the transformed equation is
    /// D(−c₀ + Ky′ − c₂y′²); the orientation factor covers both cases.
    pub fn solvable_spec(&self) -> SolvableSpec {
        let s = self.orientation;
        SolvableSpec { c0: s * self.c0, c1: self.k, c2: s * self.c2, d: self.d.clone() }
    }

    /// Solves the original equation from y(t0) = y0 through the solvable
    /// form: scale, exponentiate, scale back.
    pub fn reconstruct(&self, y0: ProjValue, t0: f64, grid: &[f64], tol: f64) -> Result<ProjTrajectory> {
        if !self.holds {
            return Err(Error::invalid("criterion does not hold; no solvable form to reconstruct from"));
        }
        let g0 = self.scale.eval(t0)?;
        let start = scale_value(g0, y0, ScaleDirection::Forward, t0)?;
        let solved = solve_solvable_on(&self.solvable_spec(), start, t0, grid, tol)?;
        scale_projective(&self.scale, &solved, ScaleDirection::Inverse)
    }
}

fn product_at(b: &RiccatiCoeffs, t: f64) -> Result<(f64, f64, f64)> {
    let b0 = b.b0.eval(t)?;
    let b2 = b.b2.eval(t)?;
    let p = b0 * b2;
    if p.abs() < ZERO_PRODUCT {
        return Err(Error::ZeroCoefficient { t });
    }
    Ok((b0, b2, p))
}

/// Tests whether y′ = G(t)y maps ẏ = b₀ + b₁y + b₂y² onto
/// ẏ′ = D(t)(c₀ + Ky′ + c₂y′²) for a constant K.
///
/// The test statistic is E(t) = √(c₀c₂/(b₀b₂)) · (b₁ + ½(ḃ₂/b₂ − ḃ₀/b₀)),
/// which must be constant; K is its grid mean and `holds` compares the
/// largest deviation from K with `tol`.
pub fn check_scaling_integrability(
    b: &RiccatiCoeffs,
    c0: f64,
    c2: f64,
    grid: &[f64],
    tol: f64,
) -> Result<CriterionReport> {
    let l = c0 * c2;
    if l == 0.0 || !l.is_finite() {
        return Err(Error::invalid("c0*c2 must be nonzero"));
    }
    if grid.is_empty() {
        return Err(Error::invalid("grid must not be empty"));
    }
    let mut values = Vec::with_capacity(grid.len());
    let mut orientation = 0.0;
    for &t in grid {
        let (b0, b2, p) = product_at(b, t)?;
        if l / p < 0.0 {
            return Err(Error::SignMismatch { t });
        }
        let sign = if b0 * c0 > 0.0 { 1.0 } else { -1.0 };
        if orientation == 0.0 {
            orientation = sign;
        } else if sign != orientation {
            // b₀ changed sign between grid points, so b₀b₂ vanished there
            return Err(Error::ZeroCoefficient { t });
        }
        let log_rate = 0.5 * (b.b2.derivative(t)? / b2 - b.b0.derivative(t)? / b0);
        values.push(math::sqrt(l / p) * (b.b1.eval(t)? + log_rate));
    }
    let k = values.iter().sum::<f64>() / values.len() as f64;
    let max_deviation = values.iter().map(|e| (e - k).abs()).fold(0.0, f64::max);
    if !k.is_finite() {
        return Err(Error::NonFinite { t: grid[0] });
    }

    let (bd, bdd) = (b.clone(), b.clone());
    let d = ScalarCurve::from_fns(
        move |t| {
            let (_, _, p) = product_at(&bd, t)?;
            if p / l < 0.0 {
                return Err(Error::SignMismatch { t });
            }
            Ok(math::sqrt(p / l))
        },
        move |t| {
            let (b0, b2, p) = product_at(&bdd, t)?;
            if p / l < 0.0 {
                return Err(Error::SignMismatch { t });
            }
            let rate = 0.5 * (bdd.b0.derivative(t)? / b0 + bdd.b2.derivative(t)? / b2);
            Ok(math::sqrt(p / l) * rate)
        },
    );
    let (bs, bsd) = (b.clone(), b.clone());
    let ratio = move |b: &RiccatiCoeffs, t: f64| -> Result<(f64, f64, f64)> {
        let (b0, b2, _) = product_at(b, t)?;
        let r = (b2 * c0) / (b0 * c2);
        if r < 0.0 {
            return Err(Error::SignMismatch { t });
        }
        Ok((b0, b2, math::sqrt(r)))
    };
    let scale = ScalarCurve::from_fns(
        move |t| ratio(&bs, t).map(|(_, _, g)| g),
        move |t| {
            let (b0, b2, g) = ratio(&bsd, t)?;
            Ok(g * 0.5 * (bsd.b2.derivative(t)? / b2 - bsd.b0.derivative(t)? / b0))
        },
    );

    Ok(CriterionReport { holds: max_deviation <= tol, k, l, c0, c2, d, scale, max_deviation, orientation })
}

/// Direction of [`scale_solution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleDirection {
    /// y′ = G·y
    Forward,
    /// y = y′/G
    Inverse,
}

fn checked_scale(scale: &ScalarCurve, t: f64) -> Result<(f64, f64)> {
    let g = scale.eval(t)?;
    if g == 0.0 || !g.is_finite() {
        return Err(Error::DegenerateScale { t });
    }
    Ok((g, scale.derivative(t)?))
}

fn scale_value(g: f64, y: ProjValue, dir: ScaleDirection, t: f64) -> Result<ProjValue> {
    if g == 0.0 || !g.is_finite() {
        return Err(Error::DegenerateScale { t });
    }
    Ok(match (y, dir) {
        (ProjValue::Infinity, _) => ProjValue::Infinity,
        (ProjValue::Finite(v), ScaleDirection::Forward) => ProjValue::from(g * v),
        (ProjValue::Finite(v), ScaleDirection::Inverse) => ProjValue::from(v / g),
    })
}

/// Multiplies (or divides) every state of `y` by G(tᵢ). Node slopes follow
/// the product rule, so the result keeps a C¹ interpolant.
pub fn scale_solution(scale: &ScalarCurve, y: &Trajectory, dir: ScaleDirection) -> Result<Trajectory> {
    let n = y.dim();
    let mut states = Vec::with_capacity(n * y.len());
    let mut slopes = Vec::with_capacity(n * y.len());
    for (i, &t) in y.times().iter().enumerate() {
        let (g, dg) = checked_scale(scale, t)?;
        let dy = y.derivative_at(t)?;
        for (v, dv) in y.state(i).iter().zip(dy) {
            match dir {
                ScaleDirection::Forward => {
                    states.push(g * v);
                    slopes.push(dg * v + g * dv);
                }
                ScaleDirection::Inverse => {
                    states.push(v / g);
                    slopes.push((dv - dg / g * v) / g);
                }
            }
        }
    }
    Trajectory::with_derivatives(n, y.times().to_vec(), states, slopes)
}

/// [`scale_solution`] for projective samples; ∞ is fixed.
pub fn scale_projective(scale: &ScalarCurve, y: &ProjTrajectory, dir: ScaleDirection) -> Result<ProjTrajectory> {
    let values = y
        .iter()
        .map(|(t, v)| scale_value(scale.eval(t)?, v, dir, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjTrajectory { times: y.times.clone(), values })
}
