use alloc::vec::Vec;

use super::{ProjTrajectory, RiccatiCoeffs};
use crate::error::{Error, Result};
use crate::liecore::ProjValue;
use crate::numkit::{integrate_observed, Control, IntegratorOptions, Trajectory, VectorField};

/// Coordinate chart of the projective line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// x itself, used while |x| ≤ 1.
    Affine,
    /// w = 1/x, used while |x| > 1; w = 0 is the point at infinity.
    Inverse,
}

impl Chart {
    fn to_proj(self, s: f64) -> ProjValue {
        match self {
            Chart::Affine => ProjValue::Finite(s),
            Chart::Inverse => ProjValue::from_homogeneous(1.0, s),
        }
    }

    fn flip(self) -> Chart {
        match self {
            Chart::Affine => Chart::Inverse,
            Chart::Inverse => Chart::Affine,
        }
    }
}

struct ChartField<'a> {
    coeffs: &'a RiccatiCoeffs,
    chart: Chart,
}

impl VectorField for ChartField<'_> {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, t: f64, s: &[f64], ds: &mut [f64]) -> Result<()> {
        let e = self.coeffs.at(t)?;
        let s = s[0];
        ds[0] = match self.chart {
            Chart::Affine => e.b0 + s * (e.b1 + s * e.b2),
            // ẇ = −b₂ − b₁w − b₀w²
            Chart::Inverse => -(e.b2 + s * (e.b1 + s * e.b0)),
        };
        Ok(())
    }
}

/// Piece of a solution integrated in one chart.
#[derive(Debug, Clone)]
pub struct ChartSegment {
    pub chart: Chart,
    pub trajectory: Trajectory,
}

/// Solution of a Riccati equation on the projective line, as a sequence of
/// chart segments with dense output.
#[derive(Debug, Clone)]
pub struct RiccatiSolution {
    coeffs: RiccatiCoeffs,
    segments: Vec<ChartSegment>,
}

impl RiccatiSolution {
    pub fn segments(&self) -> &[ChartSegment] {
        &self.segments
    }

    pub fn t_start(&self) -> f64 {
        self.segments[0].trajectory.t_start()
    }

    pub fn t_end(&self) -> f64 {
        self.segments[self.segments.len() - 1].trajectory.t_end()
    }

    /// Number of chart switches performed.
    pub fn chart_switches(&self) -> usize {
        self.segments.len() - 1
    }

    pub fn value_at(&self, t: f64) -> Result<ProjValue> {
        let seg = self
            .segments
            .iter()
            .find(|s| t <= s.trajectory.t_end())
            .unwrap_or(&self.segments[self.segments.len() - 1]);
        Ok(seg.chart.to_proj(seg.trajectory.sample(t)?[0]))
    }

    pub fn final_value(&self) -> ProjValue {
        let seg = &self.segments[self.segments.len() - 1];
        seg.chart.to_proj(seg.trajectory.last()[0])
    }

    /// Values at the integrator's own nodes (switching times appear once).
    pub fn nodes(&self) -> ProjTrajectory {
        let mut times = Vec::new();
        let mut values = Vec::new();
        for seg in &self.segments {
            for (i, &t) in seg.trajectory.times().iter().enumerate() {
                if times.last().is_some_and(|&last| t <= last) {
                    continue;
                }
                times.push(t);
                values.push(seg.chart.to_proj(seg.trajectory.state(i)[0]));
            }
        }
        ProjTrajectory { times, values }
    }

    pub fn sample(&self, grid: &[f64]) -> Result<ProjTrajectory> {
        let values = grid.iter().map(|&t| self.value_at(t)).collect::<Result<Vec<_>>>()?;
        Ok(ProjTrajectory { times: grid.to_vec(), values })
    }

    /// Samples onto `grid` as an ordinary one-dimensional trajectory whose
    /// node slopes are the equation's right-hand side. Fails if the solution
    /// is at infinity on a grid point.
    pub fn finite_trajectory(&self, grid: &[f64]) -> Result<Trajectory> {
        let mut states = Vec::with_capacity(grid.len());
        let mut slopes = Vec::with_capacity(grid.len());
        for &t in grid {
            let x = self
                .value_at(t)?
                .finite()
                .ok_or(Error::Singularity { t, what: "solution is at infinity" })?;
            states.push(x);
            slopes.push(self.coeffs.rhs(t, x)?);
        }
        Trajectory::with_derivatives(1, grid.to_vec(), states, slopes)
    }
}

/// Integrates a Riccati equation on the projective line.
///
/// The state lives in the chart x while |x| ≤ 1 and in w = 1/x while
/// |x| > 1; charts switch after the first accepted step that leaves the unit
/// interval. Poles are therefore crossed as ordinary points w = 0.
pub fn solve_direct(
    b: &RiccatiCoeffs,
    x0: ProjValue,
    t0: f64,
    t1: f64,
    opts: &IntegratorOptions,
) -> Result<RiccatiSolution> {
    let (mut chart, mut s) = match x0 {
        ProjValue::Finite(x) if x.abs() <= 1.0 => (Chart::Affine, x),
        ProjValue::Finite(x) => (Chart::Inverse, 1.0 / x),
        ProjValue::Infinity => (Chart::Inverse, 0.0),
    };
    let mut segments = Vec::new();
    let mut t = t0;
    let mut budget = opts.max_steps;
    loop {
        let field = ChartField { coeffs: b, chart };
        let seg_opts = opts.with_max_steps(budget);
        let mut leave = |_t: f64, x: &mut [f64]| Ok(if x[0].abs() > 1.0 { Control::Stop } else { Control::Continue });
        let (traj, early) = integrate_observed(&field, &[s], t, t1, &seg_opts, &mut leave)?;
        budget = budget.saturating_sub(traj.len() - 1);
        let end_t = traj.t_end();
        let end_s = traj.last()[0];
        segments.push(ChartSegment { chart, trajectory: traj });
        if !early {
            break;
        }
        if budget == 0 {
            return Err(Error::MaxSteps { t: end_t, steps: opts.max_steps });
        }
        chart = chart.flip();
        s = 1.0 / end_s;
        t = end_t;
    }
    Ok(RiccatiSolution { coeffs: b.clone(), segments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn passes_through_tangent_pole() {
        let b = RiccatiCoeffs::constant(1.0, 0.0, 1.0);
        let sol = solve_direct(&b, ProjValue::Finite(0.0), 0.0, 3.0, &IntegratorOptions::default()).unwrap();
        assert!(sol.chart_switches() >= 2);
        let end = sol.final_value().finite().unwrap();
        assert!((end - math::tan(3.0)).abs() <= 1e-6, "{end}");
        for &t in &[0.5, 1.2, 1.5, 1.65, 2.0, 2.7] {
            let v = sol.value_at(t).unwrap();
            let d = v.chordal_distance(ProjValue::Finite(math::tan(t)));
            assert!(d <= 1e-8, "t = {t}: {v:?}");
        }
        let near_pole = sol.value_at(core::f64::consts::FRAC_PI_2).unwrap();
        assert!(near_pole.finite().map_or(true, |x| x.abs() > 1e6));
    }

    #[test]
    fn linear_case_is_exponential() {
        let b = RiccatiCoeffs::constant(0.0, 1.0, 0.0);
        let sol = solve_direct(&b, ProjValue::Finite(1.0), 0.0, 2.0, &IntegratorOptions::default()).unwrap();
        for &t in &[0.3, 1.0, 2.0] {
            let x = sol.value_at(t).unwrap().finite().unwrap();
            assert!((x - math::exp(t)).abs() <= 1e-8 * math::exp(t));
        }
    }

    #[test]
    fn starts_at_infinity() {
        let b = RiccatiCoeffs::constant(0.0, 0.0, 1.0);
        let sol = solve_direct(&b, ProjValue::Infinity, 0.0, 2.0, &IntegratorOptions::default()).unwrap();
        assert_eq!(sol.value_at(0.0).unwrap(), ProjValue::Infinity);
        for &t in &[0.25, 1.0, 2.0] {
            let x = sol.value_at(t).unwrap().finite().unwrap();
            assert!((x + 1.0 / t).abs() <= 1e-9 * (1.0 / t), "t = {t}: {x}");
        }
    }

    #[test]
    fn finite_trajectory_rejects_infinity() {
        let b = RiccatiCoeffs::constant(0.0, 0.0, 1.0);
        let sol = solve_direct(&b, ProjValue::Infinity, 0.0, 1.0, &IntegratorOptions::default()).unwrap();
        assert!(matches!(sol.finite_trajectory(&[0.0, 0.5]), Err(Error::Singularity { .. })));
        assert!(sol.finite_trajectory(&[0.5, 1.0]).is_ok());
    }
}
