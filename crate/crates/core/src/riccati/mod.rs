//! Riccati equations ẋ = b₀(t) + b₁(t)x + b₂(t)x².

mod criterion;
mod direct;
mod superpose;

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::curve::ScalarCurve;
use crate::error::{Error, Result};
use crate::groupflow::MatrixCurve;
use crate::liecore::{ProjValue, Sl2Element};
use crate::math;
use crate::numkit::{autonomous, quadrature, Trajectory, VectorField};

pub use criterion::{
    check_scaling_integrability, scale_projective, scale_solution, solve_solvable, solve_solvable_on, CriterionReport,
    ScaleDirection, SolvableSpec, DEFAULT_CRITERION_POINTS,
};
pub use direct::{solve_direct, Chart, ChartSegment, RiccatiSolution};
pub use superpose::{cross_ratio_constant, cross_ratio_superposition};

/// Residual bound used to accept a claimed particular solution.
pub const PARTICULAR_RESIDUAL_TOL: f64 = 1e-5;

/// Coefficient curves (b₀, b₁, b₂).
#[derive(Debug, Clone)]
pub struct RiccatiCoeffs {
    pub b0: ScalarCurve,
    pub b1: ScalarCurve,
    pub b2: ScalarCurve,
}

impl RiccatiCoeffs {
    pub fn new(b0: impl Into<ScalarCurve>, b1: impl Into<ScalarCurve>, b2: impl Into<ScalarCurve>) -> Self {
        RiccatiCoeffs { b0: b0.into(), b1: b1.into(), b2: b2.into() }
    }

    pub fn constant(b0: f64, b1: f64, b2: f64) -> Self {
        Self::new(b0, b1, b2)
    }

    /// Parses three expressions in `t`.
    pub fn parse(b0: &str, b1: &str, b2: &str) -> Result<Self> {
        Ok(RiccatiCoeffs {
            b0: ScalarCurve::parse(b0)?,
            b1: ScalarCurve::parse(b1)?,
            b2: ScalarCurve::parse(b2)?,
        })
    }

    /// The sl(2,ℝ) element b₀(t)a₀ + b₁(t)a₁ + b₂(t)a₂.
    pub fn at(&self, t: f64) -> Result<Sl2Element> {
        Ok(Sl2Element::new(self.b0.eval(t)?, self.b1.eval(t)?, self.b2.eval(t)?))
    }

    pub fn derivative_at(&self, t: f64) -> Result<Sl2Element> {
        Ok(Sl2Element::new(self.b0.derivative(t)?, self.b1.derivative(t)?, self.b2.derivative(t)?))
    }

    /// b₀ + b₁x + b₂x² at `(t, x)`.
    pub fn rhs(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.at(t)?.field_at(x))
    }
}

/// The one-dimensional vector field of a Riccati equation.
#[derive(Debug, Clone)]
pub struct RiccatiField {
    coeffs: RiccatiCoeffs,
}

impl VectorField for RiccatiField {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, t: f64, x: &[f64], dx: &mut [f64]) -> Result<()> {
        dx[0] = self.coeffs.rhs(t, x[0])?;
        Ok(())
    }
}

pub fn riccati_field(b: &RiccatiCoeffs) -> RiccatiField {
    RiccatiField { coeffs: b.clone() }
}

/// The generators ∂ₓ, x∂ₓ, x²∂ₓ.
pub fn generators() -> Vec<Box<dyn VectorField>> {
    vec![
        Box::new(autonomous(1, |_x, dx| dx[0] = 1.0)),
        Box::new(autonomous(1, |x, dx| dx[0] = x[0])),
        Box::new(autonomous(1, |x, dx| dx[0] = x[0] * x[0])),
    ]
}

/// Projective-line samples of a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjTrajectory {
    pub times: Vec<f64>,
    pub values: Vec<ProjValue>,
}

impl ProjTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, ProjValue)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    pub fn last(&self) -> Option<ProjValue> {
        self.values.last().copied()
    }
}

/// Max over nodes and midpoints of |ẋ − (b₀ + b₁x + b₂x²)| / (1 + |rhs|).
pub fn particular_residual(b: &RiccatiCoeffs, x1: &Trajectory) -> Result<(f64, f64)> {
    let times = x1.times();
    let mut probes = Vec::with_capacity(2 * times.len());
    for (i, &t) in times.iter().enumerate() {
        probes.push(t);
        if let Some(&next) = times.get(i + 1) {
            probes.push(0.5 * (t + next));
        }
    }
    let mut worst = (0.0, times[0]);
    let mut x = [0.0];
    let mut dx = [0.0];
    for t in probes {
        x1.sample_with_derivative(t, &mut x, &mut dx)?;
        let rhs = b.rhs(t, x[0])?;
        let r = (dx[0] - rhs).abs() / (1.0 + rhs.abs());
        if r > worst.0 {
            worst = (r, t);
        }
    }
    Ok(worst)
}

/// Given a particular solution x₁, the substitution x = x₁ + z turns the
/// equation into ż = (b₁ + 2b₂x₁)z + b₂z², i.e. coefficients (0, b₁ + 2b₂x₁, b₂).
///
/// The claimed solution is checked first (relative residual ≤
/// [`PARTICULAR_RESIDUAL_TOL`] at nodes and midpoints).
pub fn reduce_by_particular(b: &RiccatiCoeffs, x1: &Trajectory) -> Result<RiccatiCoeffs> {
    if x1.dim() != 1 {
        return Err(Error::invalid("particular solution must be one-dimensional"));
    }
    let (residual, t) = particular_residual(b, x1)?;
    if residual > PARTICULAR_RESIDUAL_TOL {
        return Err(Error::NotASolution { t, residual });
    }
    let traj = Arc::new(x1.clone());
    let x1c = ScalarCurve::sampled_shared(traj, 0);
    let (b1, b2) = (b.b1.clone(), b.b2.clone());
    let (x1d, b1d, b2d) = (x1c.clone(), b1.clone(), b2.clone());
    let new_b1 = ScalarCurve::from_fns(
        move |t| Ok(b1.eval(t)? + 2.0 * b2.eval(t)? * x1c.eval(t)?),
        move |t| {
            Ok(b1d.derivative(t)?
                + 2.0 * (b2d.derivative(t)? * x1d.eval(t)? + b2d.eval(t)? * x1d.derivative(t)?))
        },
    );
    Ok(RiccatiCoeffs { b0: ScalarCurve::constant(0.0), b1: new_b1, b2: b.b2.clone() })
}

/// Evaluates the transformed coefficients at `t` by the explicit formulas
///
/// ```text
/// b2' = δ²b₂ − δγb₁ + γ²b₀ + γδ̇ − δγ̇
/// b1' = −2βδb₂ + (αδ + βγ)b₁ − 2αγb₀ + δα̇ − αδ̇ + βγ̇ − γβ̇
/// b0' = β²b₂ − αβb₁ + α²b₀ + αβ̇ − βα̇
/// ```
pub fn transformed_at(b: &RiccatiCoeffs, a: &MatrixCurve, t: f64) -> Result<Sl2Element> {
    let ([al, be, ga, de], [dal, dbe, dga, dde]) = a.at(t)?;
    let e = b.at(t)?;
    let (b0, b1, b2) = (e.b0, e.b1, e.b2);
    let nb2 = de * de * b2 - de * ga * b1 + ga * ga * b0 + ga * dde - de * dga;
    let nb1 = -2.0 * be * de * b2 + (al * de + be * ga) * b1 - 2.0 * al * ga * b0 + de * dal - al * dde
        + be * dga
        - ga * dbe;
    let nb0 = be * be * b2 - al * be * b1 + al * al * b0 + al * dbe - be * dal;
    Ok(Sl2Element::new(nb0, nb1, nb2))
}

/// Coefficients of the equation satisfied by x′ = Θ(A(t), x(t)).
pub fn transform_coefficients(b: &RiccatiCoeffs, a: &MatrixCurve) -> RiccatiCoeffs {
    let shared = Arc::new((b.clone(), a.clone()));
    let pick = |which: fn(Sl2Element) -> f64| {
        let s = shared.clone();
        ScalarCurve::from_fn(move |t| transformed_at(&s.0, &s.1, t).map(which))
    };
    RiccatiCoeffs { b0: pick(|e| e.b0), b1: pick(|e| e.b1), b2: pick(|e| e.b2) }
}

/// Solves ẋ = b₀(t) + b₁(t)x by two quadratures:
/// x(t) = e^{B(t)} (x₀ + ∫_{t0}^t b₀(s) e^{−B(s)} ds) with B(t) = ∫_{t0}^t b₁.
///
/// The inner exponent is accumulated along the grid and reused by the outer
/// integral. The result carries the exact slopes b₀ + b₁x at each node.
pub fn solve_linear_inhomogeneous(
    b0: &ScalarCurve,
    b1: &ScalarCurve,
    x0: f64,
    t0: f64,
    grid: &[f64],
    tol: f64,
) -> Result<Trajectory> {
    if grid.is_empty() {
        return Err(Error::invalid("grid must not be empty"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid[0] < t0 {
        return Err(Error::invalid("grid must be strictly increasing and start at or after t0"));
    }
    let mut states = Vec::with_capacity(grid.len());
    let mut slopes = Vec::with_capacity(grid.len());
    let mut exponent = 0.0; // B at the left end of the current segment
    let mut forcing = 0.0; // ∫ b₀ e^{−B} up to the left end
    let mut left = t0;
    for &right in grid {
        if right > left {
            let base = exponent;
            let from = left;
            let weighted = |s: f64| -> Result<f64> {
                let inner = base + quadrature(|u| b1.eval(u), from, s, tol)?;
                Ok(b0.eval(s)? * math::exp(-inner))
            };
            forcing += quadrature(weighted, left, right, tol)?;
            exponent += quadrature(|u| b1.eval(u), left, right, tol)?;
        }
        let x = math::exp(exponent) * (x0 + forcing);
        if !x.is_finite() {
            return Err(Error::NonFinite { t: right });
        }
        states.push(x);
        slopes.push(b0.eval(right)? + b1.eval(right)? * x);
        left = right;
    }
    Trajectory::with_derivatives(1, grid.to_vec(), states, slopes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uniform_grid;

    #[test]
    fn field_examples() {
        let f = riccati_field(&RiccatiCoeffs::constant(0.0, 0.0, 0.0));
        let mut dx = [1.0];
        f.eval(0.3, &[2.0], &mut dx).unwrap();
        assert_eq!(dx[0], 0.0);
        let f = riccati_field(&RiccatiCoeffs::constant(1.0, 0.0, 1.0));
        f.eval(0.0, &[1.0], &mut dx).unwrap();
        assert_eq!(dx[0], 2.0);
        let f = riccati_field(&RiccatiCoeffs::constant(0.0, 1.0, 0.0));
        f.eval(0.0, &[-3.5], &mut dx).unwrap();
        assert_eq!(dx[0], -3.5);
    }

    #[test]
    fn linear_two_quadrature_examples() {
        let grid = uniform_grid(0.0, 2.0, 21);
        let x = solve_linear_inhomogeneous(&1.0.into(), &0.0.into(), 0.0, 0.0, &grid, 1e-12).unwrap();
        for (t, s) in grid.iter().zip(x.states()) {
            assert!((s[0] - t).abs() < 1e-12);
        }
        let x = solve_linear_inhomogeneous(&0.0.into(), &1.0.into(), 1.0, 0.0, &grid, 1e-12).unwrap();
        for (t, s) in grid.iter().zip(x.states()) {
            assert!((s[0] - math::exp(*t)).abs() < 1e-10 * math::exp(*t));
        }
        let x = solve_linear_inhomogeneous(&1.0.into(), &1.0.into(), 0.0, 0.0, &grid, 1e-12).unwrap();
        for (t, s) in grid.iter().zip(x.states()) {
            assert!((s[0] - (math::exp(*t) - 1.0)).abs() < 1e-8);
        }
    }

    #[test]
    fn reduction_rejects_non_solution() {
        let b = RiccatiCoeffs::constant(1.0, 0.0, 1.0);
        let grid = uniform_grid(0.0, 1.0, 11);
        let bogus = Trajectory::from_samples(1, grid.clone(), grid.iter().map(|t| 2.0 * t).collect()).unwrap();
        assert!(matches!(reduce_by_particular(&b, &bogus), Err(Error::NotASolution { .. })));
    }

    #[test]
    fn reduction_with_zero_particular() {
        let b = RiccatiCoeffs::new(0.0, ScalarCurve::parse("sin(t)").unwrap(), 0.0);
        let grid = uniform_grid(0.0, 1.0, 5);
        let zero = Trajectory::from_samples(1, grid.clone(), vec![0.0; 5]).unwrap();
        let r = reduce_by_particular(&b, &zero).unwrap();
        for &t in &grid {
            assert_eq!(r.b0.eval(t).unwrap(), 0.0);
            assert!((r.b1.eval(t).unwrap() - math::sin(t)).abs() < 1e-15);
            assert_eq!(r.b2.eval(t).unwrap(), 0.0);
        }
    }
}
