use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Slack allowed when sampling just outside the stored time span.
const EDGE_SLACK: f64 = 1e-12;

/// Interpolant between consecutive samples.
#[derive(Debug, Clone, PartialEq)]
enum Interp {
    /// Dormand–Prince continuous extension: five coefficient vectors per step.
    Dense(Vec<f64>),
    /// Cubic Hermite with one derivative vector per node.
    Hermite(Vec<f64>),
}

/// Time-ordered samples `(t, x(t))` of a solution curve in ℝⁿ.
///
/// Every trajectory can be sampled at any `t` inside its span. Integrator
/// output carries the integrator's own dense output; trajectories built from
/// raw samples use cubic Hermite interpolation with either supplied or
/// finite-difference slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    dim: usize,
    times: Vec<f64>,
    states: Vec<f64>,
    interp: Interp,
}

impl Trajectory {
    fn validate(dim: usize, times: &[f64], states: &[f64]) -> Result<()> {
        if dim == 0 {
            return Err(Error::invalid("trajectory dimension must be positive"));
        }
        if times.is_empty() {
            return Err(Error::invalid("trajectory needs at least one sample"));
        }
        if states.len() != dim * times.len() {
            return Err(Error::invalid("state rows do not match trajectory dimension"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("trajectory times must be strictly increasing"));
        }
        if let Some(i) = states.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: times[i / dim] });
        }
        Ok(())
    }

    /// Builds a trajectory from raw samples; slopes come from three-point
    /// finite differences on the (possibly non-uniform) grid.
    pub fn from_samples(dim: usize, times: Vec<f64>, states: Vec<f64>) -> Result<Self> {
        Self::validate(dim, &times, &states)?;
        let slopes = fd_slopes(dim, &times, &states);
        Ok(Trajectory { dim, times, states, interp: Interp::Hermite(slopes) })
    }

    /// Builds a trajectory from samples plus exact derivatives at each node.
    pub fn with_derivatives(
        dim: usize,
        times: Vec<f64>,
        states: Vec<f64>,
        derivatives: Vec<f64>,
    ) -> Result<Self> {
        Self::validate(dim, &times, &states)?;
        if derivatives.len() != states.len() {
            return Err(Error::invalid("derivative rows do not match states"));
        }
        Ok(Trajectory { dim, times, states, interp: Interp::Hermite(derivatives) })
    }

    pub(crate) fn from_dense(dim: usize, times: Vec<f64>, states: Vec<f64>, coeffs: Vec<f64>) -> Self {
        debug_assert_eq!(coeffs.len(), 5 * dim * (times.len().saturating_sub(1)));
        Trajectory { dim, times, states, interp: Interp::Dense(coeffs) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    pub fn states(&self) -> impl Iterator<Item = &[f64]> {
        self.states.chunks_exact(self.dim)
    }

    /// Values of component `j` at every node.
    pub fn component(&self, j: usize) -> Vec<f64> {
        self.states().map(|s| s[j]).collect()
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn last(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    pub fn has_dense_output(&self) -> bool {
        matches!(self.interp, Interp::Dense(_))
    }

    fn locate(&self, t: f64) -> Result<usize> {
        let (start, end) = (self.t_start(), self.t_end());
        let slack = EDGE_SLACK * (1.0 + start.abs().max(end.abs()));
        if !(t >= start - slack && t <= end + slack) {
            return Err(Error::OutOfRange { t, start, end });
        }
        if self.len() == 1 {
            return Ok(0);
        }
        // index i of the step [times[i], times[i+1]] containing t
        let i = self.times.partition_point(|&s| s <= t);
        Ok(i.clamp(1, self.len() - 1) - 1)
    }

    /// Interpolated state at `t` and its time derivative.
    pub fn sample_with_derivative(&self, t: f64, x: &mut [f64], dx: &mut [f64]) -> Result<()> {
        let n = self.dim;
        let i = self.locate(t)?;
        if self.len() == 1 {
            x.copy_from_slice(self.state(0));
            dx.iter_mut().for_each(|v| *v = 0.0);
            return Ok(());
        }
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        match &self.interp {
            Interp::Dense(coeffs) => {
                let r = &coeffs[5 * n * i..5 * n * (i + 1)];
                let s1 = 1.0 - s;
                for j in 0..n {
                    let (r1, r2, r3, r4, r5) = (r[j], r[n + j], r[2 * n + j], r[3 * n + j], r[4 * n + j]);
                    x[j] = r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
                    dx[j] = (r2
                        + (1.0 - 2.0 * s) * r3
                        + s * (2.0 - 3.0 * s) * r4
                        + 2.0 * s * s1 * (s1 - s) * r5)
                        / h;
                }
            }
            Interp::Hermite(slopes) => {
                let (y0, y1) = (self.state(i), self.state(i + 1));
                let (m0, m1) = (&slopes[i * n..(i + 1) * n], &slopes[(i + 1) * n..(i + 2) * n]);
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                let d00 = 6.0 * s2 - 6.0 * s;
                let d10 = 3.0 * s2 - 4.0 * s + 1.0;
                let d01 = -6.0 * s2 + 6.0 * s;
                let d11 = 3.0 * s2 - 2.0 * s;
                for j in 0..n {
                    x[j] = h00 * y0[j] + h10 * h * m0[j] + h01 * y1[j] + h11 * h * m1[j];
                    dx[j] = (d00 * y0[j] + d01 * y1[j]) / h + d10 * m0[j] + d11 * m1[j];
                }
            }
        }
        Ok(())
    }

    /// Interpolated state at `t`.
    pub fn sample(&self, t: f64) -> Result<Vec<f64>> {
        let mut x = vec![0.0; self.dim];
        let mut dx = vec![0.0; self.dim];
        self.sample_with_derivative(t, &mut x, &mut dx)?;
        Ok(x)
    }

    /// Time derivative of the interpolant at `t`.
    pub fn derivative_at(&self, t: f64) -> Result<Vec<f64>> {
        let mut x = vec![0.0; self.dim];
        let mut dx = vec![0.0; self.dim];
        self.sample_with_derivative(t, &mut x, &mut dx)?;
        Ok(dx)
    }

    /// Samples onto `grid`, keeping interpolant slopes as Hermite data.
    pub fn resample(&self, grid: &[f64]) -> Result<Trajectory> {
        let n = self.dim;
        let mut states = vec![0.0; n * grid.len()];
        let mut slopes = vec![0.0; n * grid.len()];
        for (k, &t) in grid.iter().enumerate() {
            self.sample_with_derivative(t, &mut states[k * n..(k + 1) * n], &mut slopes[k * n..(k + 1) * n])?;
        }
        Trajectory::with_derivatives(n, grid.to_vec(), states, slopes)
    }

    /// Keeps only components `range` (positions out of a position/velocity
    /// state, for instance). Dense coefficients are sliced consistently.
    pub fn select(&self, range: core::ops::Range<usize>) -> Trajectory {
        let n = self.dim;
        let m = range.len();
        let pick = |flat: &[f64], rows: usize| -> Vec<f64> {
            let mut out = Vec::with_capacity(rows * m);
            for r in 0..rows {
                out.extend_from_slice(&flat[r * n + range.start..r * n + range.end]);
            }
            out
        };
        let states = pick(&self.states, self.len());
        let interp = match &self.interp {
            Interp::Dense(c) => Interp::Dense(pick(c, c.len() / n)),
            Interp::Hermite(s) => Interp::Hermite(pick(s, self.len())),
        };
        Trajectory { dim: m, times: self.times.clone(), states, interp }
    }
}

fn fd_slopes(n: usize, times: &[f64], states: &[f64]) -> Vec<f64> {
    let len = times.len();
    let mut slopes = vec![0.0; states.len()];
    if len < 2 {
        return slopes;
    }
    let y = |i: usize, j: usize| states[i * n + j];
    for i in 0..len {
        for j in 0..n {
            slopes[i * n + j] = if len == 2 {
                (y(1, j) - y(0, j)) / (times[1] - times[0])
            } else {
                // three-point Lagrange derivative on the nearest stencil
                let c = i.clamp(1, len - 2);
                let (ta, tb, tc) = (times[c - 1], times[c], times[c + 1]);
                let t = times[i];
                let la = (2.0 * t - tb - tc) / ((ta - tb) * (ta - tc));
                let lb = (2.0 * t - ta - tc) / ((tb - ta) * (tb - tc));
                let lc = (2.0 * t - ta - tb) / ((tc - ta) * (tc - tb));
                la * y(c - 1, j) + lb * y(c, j) + lc * y(c + 1, j)
            };
        }
    }
    slopes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_samples() {
        assert!(Trajectory::from_samples(1, vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(Trajectory::from_samples(1, vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(matches!(
            Trajectory::from_samples(1, vec![0.0, 1.0], vec![1.0, f64::NAN]),
            Err(Error::NonFinite { t }) if t == 1.0
        ));
    }

    #[test]
    fn fd_hermite_is_exact_for_quadratics() {
        let times: Vec<f64> = vec![0.0, 0.3, 1.0, 1.2, 2.0];
        let states: Vec<f64> = times.iter().map(|t| 1.0 + 2.0 * t - t * t).collect();
        let tr = Trajectory::from_samples(1, times, states).unwrap();
        for k in 0..=40 {
            let t = 0.05 * k as f64;
            let x = tr.sample(t).unwrap()[0];
            let dx = tr.derivative_at(t).unwrap()[0];
            assert!((x - (1.0 + 2.0 * t - t * t)).abs() < 1e-13);
            assert!((dx - (2.0 - 2.0 * t)).abs() < 1e-12);
        }
        assert!(tr.sample(2.5).is_err());
    }

    #[test]
    fn select_keeps_columns() {
        let tr = Trajectory::from_samples(2, vec![0.0, 1.0], vec![1.0, 10.0, 2.0, 20.0]).unwrap();
        let v = tr.select(1..2);
        assert_eq!(v.component(0), vec![10.0, 20.0]);
        assert_eq!(v.sample(0.5).unwrap(), vec![15.0]);
    }
}
