//! The Lie system on SL(2,ℝ) itself, its transport to the projective line,
//! and the gauge action of matrix curves on Riccati coefficients.
//!
//! Convention: ġ = M(t)g with M = b₀a₀ + b₁a₁ + b₂a₂ and g(t₀) = I. Then
//! x(t) = Θ(g(t), x₀) solves ẋ = b₀ + b₁x + b₂x².

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::curve::ScalarCurve;
use crate::error::{Error, Result};
use crate::liecore::{mat_mul, mobius, ProjValue, Sl2Element, Sl2Matrix};
use crate::math;
use crate::numkit::{integrate_observed, Control, FnField, IntegratorOptions, Trajectory};
use crate::riccati::{ProjTrajectory, RiccatiCoeffs};

/// Determinant tolerance for user-supplied matrix curves.
pub const CURVE_DET_TOL: f64 = 1e-6;

/// Sampled curve in SL(2,ℝ), stored as a 4-dimensional trajectory of the
/// entries (a, b, c, d) with dense output.
#[derive(Debug, Clone)]
pub struct Sl2Curve {
    traj: Trajectory,
}

impl Sl2Curve {
    /// Wraps a trajectory of entries; every node must have unit determinant.
    pub fn from_trajectory(traj: Trajectory) -> Result<Self> {
        if traj.dim() != 4 {
            return Err(Error::invalid("matrix curve trajectory must be 4-dimensional"));
        }
        for (i, &t) in traj.times().iter().enumerate() {
            let s = traj.state(i);
            let det = s[0] * s[3] - s[1] * s[2];
            if (det - 1.0).abs() > crate::liecore::DET_TOL {
                return Err(Error::InvalidCurve { t, det });
            }
        }
        Ok(Sl2Curve { traj })
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.traj
    }

    pub fn times(&self) -> &[f64] {
        self.traj.times()
    }

    pub fn len(&self) -> usize {
        self.traj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traj.is_empty()
    }

    pub fn matrix(&self, i: usize) -> Sl2Matrix {
        let s = self.traj.state(i);
        Sl2Matrix { a: s[0], b: s[1], c: s[2], d: s[3] }
    }

    pub fn matrices(&self) -> impl Iterator<Item = Sl2Matrix> + '_ {
        (0..self.len()).map(|i| self.matrix(i))
    }

    /// Interpolated matrix at `t`, projected back onto unit determinant.
    pub fn at(&self, t: f64) -> Result<Sl2Matrix> {
        let s = self.traj.sample(t)?;
        Sl2Matrix::normalized(s[0], s[1], s[2], s[3]).map_err(|_| Error::InvalidCurve {
            t,
            det: s[0] * s[3] - s[1] * s[2],
        })
    }

    pub fn last(&self) -> Sl2Matrix {
        self.matrix(self.len() - 1)
    }
}

/// Integrates ġ = M(t)g from g(t₀) = I, rescaling by det^{-1/2} after each
/// accepted step.
pub fn solve_group_equation(b: &RiccatiCoeffs, t0: f64, t1: f64, opts: &IntegratorOptions) -> Result<Sl2Curve> {
    let field = FnField::new(4, |t, g: &[f64], dg: &mut [f64]| {
        let m = b.at(t)?.matrix();
        dg.copy_from_slice(&mat_mul(m, [g[0], g[1], g[2], g[3]]));
        Ok(())
    });
    let mut renormalize = |t: f64, g: &mut [f64]| {
        let det = g[0] * g[3] - g[1] * g[2];
        if !(det > 0.0) {
            return Err(Error::InvalidCurve { t, det });
        }
        let s = 1.0 / math::sqrt(det);
        g.iter_mut().for_each(|v| *v *= s);
        Ok(Control::Continue)
    };
    let identity = Sl2Matrix::IDENTITY.to_array();
    let (traj, _) = integrate_observed(&field, &identity, t0, t1, opts, &mut renormalize)?;
    Ok(Sl2Curve { traj })
}

/// x(tᵢ) = Θ(g(tᵢ), x₀) at the curve's nodes.
pub fn transport_solution(g: &Sl2Curve, x0: ProjValue) -> ProjTrajectory {
    ProjTrajectory { times: g.times().to_vec(), values: g.matrices().map(|m| mobius(&m, x0)).collect() }
}

/// Θ(g(t), x₀) on an arbitrary grid inside the curve's span.
pub fn transport_on(g: &Sl2Curve, x0: ProjValue, grid: &[f64]) -> Result<ProjTrajectory> {
    let values = grid.iter().map(|&t| Ok(mobius(&g.at(t)?, x0))).collect::<Result<Vec<_>>>()?;
    Ok(ProjTrajectory { times: grid.to_vec(), values })
}

/// Matrix curve t ↦ [[α, β], [γ, δ]] given entrywise, with derivatives.
#[derive(Debug, Clone)]
pub struct MatrixCurve {
    pub alpha: ScalarCurve,
    pub beta: ScalarCurve,
    pub gamma: ScalarCurve,
    pub delta: ScalarCurve,
}

impl MatrixCurve {
    pub fn new(
        alpha: impl Into<ScalarCurve>,
        beta: impl Into<ScalarCurve>,
        gamma: impl Into<ScalarCurve>,
        delta: impl Into<ScalarCurve>,
    ) -> Self {
        MatrixCurve { alpha: alpha.into(), beta: beta.into(), gamma: gamma.into(), delta: delta.into() }
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0)
    }

    pub fn parse(alpha: &str, beta: &str, gamma: &str, delta: &str) -> Result<Self> {
        Ok(MatrixCurve {
            alpha: ScalarCurve::parse(alpha)?,
            beta: ScalarCurve::parse(beta)?,
            gamma: ScalarCurve::parse(gamma)?,
            delta: ScalarCurve::parse(delta)?,
        })
    }

    /// Entries and their derivatives at `t`, as `[α, β, γ, δ]` arrays.
    /// Fails when |αδ − βγ − 1| > [`CURVE_DET_TOL`].
    pub fn at(&self, t: f64) -> Result<([f64; 4], [f64; 4])> {
        let m = [self.alpha.eval(t)?, self.beta.eval(t)?, self.gamma.eval(t)?, self.delta.eval(t)?];
        let det = m[0] * m[3] - m[1] * m[2];
        if !((det - 1.0).abs() <= CURVE_DET_TOL) {
            return Err(Error::InvalidCurve { t, det });
        }
        let dm = [
            self.alpha.derivative(t)?,
            self.beta.derivative(t)?,
            self.gamma.derivative(t)?,
            self.delta.derivative(t)?,
        ];
        Ok((m, dm))
    }

    /// Largest |det − 1| over `grid`; errors at the first violation.
    pub fn check_unit_det(&self, grid: &[f64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &t in grid {
            let (m, _) = self.at(t)?;
            worst = worst.max((m[0] * m[3] - m[1] * m[2] - 1.0).abs());
        }
        Ok(worst)
    }

    /// Pointwise product `self · rhs`, differentiated by the product rule.
    pub fn compose(&self, rhs: &MatrixCurve) -> MatrixCurve {
        let pair = Arc::new((self.clone(), rhs.clone()));
        let entry = |k: usize| {
            let (p, q) = (pair.clone(), pair.clone());
            ScalarCurve::from_fns(
                move |t| Ok(mat_mul(p.0.raw(t)?, p.1.raw(t)?)[k]),
                move |t| {
                    let (a, da) = (q.0.raw(t)?, q.0.raw_derivative(t)?);
                    let (b, db) = (q.1.raw(t)?, q.1.raw_derivative(t)?);
                    Ok(mat_mul(da, b)[k] + mat_mul(a, db)[k])
                },
            )
        };
        MatrixCurve { alpha: entry(0), beta: entry(1), gamma: entry(2), delta: entry(3) }
    }

    fn raw(&self, t: f64) -> Result<[f64; 4]> {
        Ok([self.alpha.eval(t)?, self.beta.eval(t)?, self.gamma.eval(t)?, self.delta.eval(t)?])
    }

    fn raw_derivative(&self, t: f64) -> Result<[f64; 4]> {
        Ok([
            self.alpha.derivative(t)?,
            self.beta.derivative(t)?,
            self.gamma.derivative(t)?,
            self.delta.derivative(t)?,
        ])
    }
}

/// M̄(t) = Ȧ A⁻¹ + A M A⁻¹, decomposed as b₀′ = M̄₁₂, b₁′ = 2M̄₁₁, b₂′ = −M̄₂₁.
pub fn gauge_at(b: &RiccatiCoeffs, a: &MatrixCurve, t: f64) -> Result<Sl2Element> {
    let (m, dm) = a.at(t)?;
    let det = m[0] * m[3] - m[1] * m[2];
    let inv = [m[3] / det, -m[1] / det, -m[2] / det, m[0] / det];
    let conj = mat_mul(mat_mul(m, b.at(t)?.matrix()), inv);
    let drift = mat_mul(dm, inv);
    let bar = [drift[0] + conj[0], drift[1] + conj[1], drift[2] + conj[2], drift[3] + conj[3]];
    Ok(Sl2Element::new(bar[1], 2.0 * bar[0], -bar[2]))
}

/// Coefficients of the system satisfied by A(t)·g(t).
pub fn gauge_transform(b: &RiccatiCoeffs, a: &MatrixCurve) -> RiccatiCoeffs {
    let shared = Arc::new((b.clone(), a.clone()));
    let pick = |which: fn(Sl2Element) -> f64| {
        let s = shared.clone();
        ScalarCurve::from_fn(move |t| gauge_at(&s.0, &s.1, t).map(which))
    };
    RiccatiCoeffs { b0: pick(|e| e.b0), b1: pick(|e| e.b1), b2: pick(|e| e.b2) }
}

/// The two affine (solvable) subalgebras of sl(2,ℝ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subalgebra {
    /// span{a₀, a₁}: b₂ must vanish.
    Span01,
    /// span{a₁, a₂}: b₀ must vanish.
    Span12,
}

/// Whether the excluded coefficient stays within `tol` of zero on `grid`.
pub fn check_subalgebra(b: &RiccatiCoeffs, which: Subalgebra, grid: &[f64], tol: f64) -> Result<bool> {
    if grid.is_empty() {
        return Err(Error::invalid("grid must not be empty"));
    }
    let excluded = match which {
        Subalgebra::Span01 => &b.b2,
        Subalgebra::Span12 => &b.b0,
    };
    for &t in grid {
        if excluded.eval(t)?.abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riccati::{reduce_by_particular, solve_direct, transformed_at};
    use crate::uniform_grid;
    use core::f64::consts::FRAC_PI_2;

    fn opts() -> IntegratorOptions {
        IntegratorOptions::default()
    }

    #[test]
    fn zero_coefficients_give_identity() {
        let g = solve_group_equation(&RiccatiCoeffs::constant(0.0, 0.0, 0.0), 0.0, 2.0, &opts()).unwrap();
        for m in g.matrices() {
            assert_eq!(m, Sl2Matrix::IDENTITY);
        }
        let x = transport_solution(&g, ProjValue::Finite(0.4));
        assert!(x.values.iter().all(|v| *v == ProjValue::Finite(0.4)));
    }

    #[test]
    fn nilpotent_curves() {
        let g = solve_group_equation(&RiccatiCoeffs::constant(1.0, 0.0, 0.0), 0.0, 2.0, &opts()).unwrap();
        for (t, m) in g.times().iter().zip(g.matrices()) {
            assert!(m.max_abs_diff(&Sl2Matrix { a: 1.0, b: *t, c: 0.0, d: 1.0 }) < 1e-10);
        }
        let g = solve_group_equation(&RiccatiCoeffs::constant(0.0, 0.0, 1.0), 0.0, 0.9, &opts()).unwrap();
        for (t, m) in g.times().iter().zip(g.matrices()) {
            assert!(m.max_abs_diff(&Sl2Matrix { a: 1.0, b: 0.0, c: -*t, d: 1.0 }) < 1e-10);
        }
        let x = transport_solution(&g, ProjValue::Finite(1.0));
        for (t, v) in x.iter() {
            let want = 1.0 / (1.0 - t);
            assert!((v.finite().unwrap() - want).abs() <= 1e-6 * want);
        }
    }

    #[test]
    fn rotation_transports_tangent_through_pole() {
        let g = solve_group_equation(&RiccatiCoeffs::constant(1.0, 0.0, 1.0), 0.0, 3.0, &opts()).unwrap();
        let grid = [0.5, 1.0, 1.5, FRAC_PI_2, 2.0, 3.0];
        let x = transport_on(&g, ProjValue::Finite(0.0), &grid).unwrap();
        for (t, v) in x.iter() {
            let d = v.chordal_distance(ProjValue::Finite(math::tan(t)));
            assert!(d <= 1e-8, "t = {t}: {v}");
        }
        let at_pole = x.values[3];
        assert!(at_pole.finite().map_or(true, |v| v.abs() > 1e7));
    }

    #[test]
    fn identity_gauge_is_trivial() {
        let b = RiccatiCoeffs::parse("sin(t)", "t", "1+t^2").unwrap();
        let nb = gauge_transform(&b, &MatrixCurve::identity());
        for t in uniform_grid(-1.0, 1.0, 9) {
            assert!((nb.b0.eval(t).unwrap() - math::sin(t)).abs() < 1e-15);
            assert!((nb.b1.eval(t).unwrap() - t).abs() < 1e-15);
            assert!((nb.b2.eval(t).unwrap() - (1.0 + t * t)).abs() < 1e-15);
        }
    }

    #[test]
    fn diagonal_gauge_scales() {
        let g = 1.7;
        let b = RiccatiCoeffs::parse("cos(t)", "2*t", "exp(t)").unwrap();
        let a = MatrixCurve::new(g, 0.0, 0.0, 1.0 / g);
        for t in uniform_grid(0.0, 2.0, 7) {
            let e = gauge_at(&b, &a, t).unwrap();
            let o = b.at(t).unwrap();
            assert!((e.b0 - g * g * o.b0).abs() < 1e-13);
            assert!((e.b1 - o.b1).abs() < 1e-13);
            assert!((e.b2 - o.b2 / (g * g)).abs() < 1e-13);
        }
    }

    #[test]
    fn particular_solution_gauge() {
        let b = RiccatiCoeffs::constant(1.0, 0.0, 1.0);
        let a = MatrixCurve::new(1.0, ScalarCurve::parse("-tan(t)").unwrap(), 0.0, 1.0);
        for t in uniform_grid(0.0, 1.2, 13) {
            let e = gauge_at(&b, &a, t).unwrap();
            assert!(e.b0.abs() < 1e-12, "{}", e.b0);
            assert!((e.b1 - 2.0 * math::tan(t)).abs() < 1e-12);
            assert!((e.b2 - 1.0).abs() < 1e-15);
            let f = transformed_at(&b, &a, t).unwrap();
            assert!((f.b0 - e.b0).abs() + (f.b1 - e.b1).abs() + (f.b2 - e.b2).abs() < 1e-12);
        }
        let grid = uniform_grid(0.0, 1.2, 25);
        assert!(check_subalgebra(&gauge_transform(&b, &a), Subalgebra::Span12, &grid, 1e-10).unwrap());
    }

    #[test]
    fn reduction_lands_in_affine_subalgebra() {
        let b = RiccatiCoeffs::constant(1.0, 0.0, 1.0);
        let x1 = solve_direct(&b, ProjValue::Finite(0.0), 0.0, 1.2, &opts()).unwrap();
        let grid = uniform_grid(0.0, 1.2, 61);
        let r = reduce_by_particular(&b, &x1.finite_trajectory(&grid).unwrap()).unwrap();
        assert!(check_subalgebra(&r, Subalgebra::Span12, &grid, 0.0).unwrap());
        for &t in &grid {
            assert!((r.b1.eval(t).unwrap() - 2.0 * math::tan(t)).abs() < 1e-6);
        }
    }

    #[test]
    fn subalgebra_examples() {
        let grid = uniform_grid(0.0, 1.0, 11);
        let b = RiccatiCoeffs::parse("1", "t", "0").unwrap();
        assert!(check_subalgebra(&b, Subalgebra::Span01, &grid, 1e-12).unwrap());
        let b = RiccatiCoeffs::constant(1.0, 0.0, 1.0);
        assert!(!check_subalgebra(&b, Subalgebra::Span01, &grid, 1e-12).unwrap());
        assert!(!check_subalgebra(&b, Subalgebra::Span12, &grid, 1e-12).unwrap());
    }

    #[test]
    fn determinant_violation_is_reported() {
        let b = RiccatiCoeffs::constant(1.0, 0.0, 1.0);
        let a = MatrixCurve::parse("1+t", "0", "0", "1").unwrap();
        assert!(gauge_at(&b, &a, 0.0).is_ok());
        assert!(matches!(gauge_at(&b, &a, 0.5), Err(Error::InvalidCurve { .. })));
        assert!(gauge_transform(&b, &a).b0.eval(0.5).is_err());
    }
}
