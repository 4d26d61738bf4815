//! Second-order Lie systems: time-dependent oscillators, the Pinney
//! equation and generalized Ermakov systems.
//!
//! Second-order equations are handled through their first-order companions.
//! State layouts: an oscillator copy is (x, v); a Pinney state is (x, v);
//! an Ermakov state is (x, y, vx, vy); the joint Pinney system is
//! (x, y, z, vx, vy, vz) with y the Pinney variable.

mod algebra;
mod generalized;
mod pinney;

use alloc::vec::Vec;

use crate::curve::ScalarCurve;
use crate::error::{Error, Result};
use crate::numkit::{cumulative_values, Trajectory, VectorField};

pub use algebra::{ermakov_generators, isotropic_generators, oscillator_generators, pinney_generators};
pub use generalized::{ermakov_field, ermakov_invariant, generalized_first_integral, ErmakovField, ErmakovSpec};
pub use pinney::{
    match_branch, pinney_field, pinney_invariants, pinney_joint_field, pinney_superpose, Branch, PinneyField,
    PinneyInvariants, PinneyJointField, PinneySpec, DISCRIMINANT_TOL,
};

/// States closer than this to x = 0 (or y = 0) are treated as singular.
pub const SINGULARITY_RADIUS: f64 = 1e-6;

/// Wronskians at or below this magnitude are degenerate.
pub const WRONSKIAN_TOL: f64 = 1e-10;

/// Harmonic oscillator with frequency ω(t) and mass m(t).
#[derive(Debug, Clone)]
pub struct OscillatorSpec {
    pub omega: ScalarCurve,
    pub mass: ScalarCurve,
}

impl OscillatorSpec {
    /// Unit mass.
    pub fn new(omega: impl Into<ScalarCurve>) -> Self {
        OscillatorSpec { omega: omega.into(), mass: ScalarCurve::constant(1.0) }
    }

    pub fn with_mass(mut self, mass: impl Into<ScalarCurve>) -> Self {
        self.mass = mass.into();
        self
    }
}

/// `copies` uncoupled oscillators, each block ẋ = v/m, v̇ = −mω²x.
#[derive(Debug, Clone)]
pub struct OscillatorField {
    spec: OscillatorSpec,
    copies: usize,
}

impl VectorField for OscillatorField {
    fn dim(&self) -> usize {
        2 * self.copies
    }

    fn eval(&self, t: f64, s: &[f64], ds: &mut [f64]) -> Result<()> {
        let m = self.spec.mass.eval(t)?;
        if !(m > 0.0) {
            return Err(Error::Domain { t, what: "mass must be positive" });
        }
        let w = self.spec.omega.eval(t)?;
        let stiffness = m * w * w;
        for (block, out) in s.chunks_exact(2).zip(ds.chunks_exact_mut(2)) {
            out[0] = block[1] / m;
            out[1] = -stiffness * block[0];
        }
        Ok(())
    }
}

pub fn oscillator_field(spec: &OscillatorSpec, copies: usize) -> Result<OscillatorField> {
    if copies == 0 {
        return Err(Error::invalid("need at least one oscillator copy"));
    }
    Ok(OscillatorField { spec: spec.clone(), copies })
}

/// W = x·v_z − z·v_x.
pub fn wronskian(x: f64, vx: f64, z: f64, vz: f64) -> f64 {
    x * vz - z * vx
}

/// Brings `other` onto the time grid of `base`: unchanged when the grids
/// already agree, resampled through its interpolant when it covers the span.
pub(crate) fn align(base: &Trajectory, other: &Trajectory) -> Result<Trajectory> {
    let (a, b) = (base.times(), other.times());
    let same = a.len() == b.len() && a.iter().zip(b).all(|(p, q)| (p - q).abs() <= 1e-12 * (1.0 + p.abs()));
    if same {
        return Ok(other.clone());
    }
    let slack = 1e-12 * (1.0 + base.t_end().abs());
    if other.t_start() > base.t_start() + slack || other.t_end() < base.t_end() - slack {
        return Err(Error::GridMismatch("second trajectory does not cover the first one's time span"));
    }
    other.resample(a)
}

/// Builds a second oscillator solution from one known solution x₁ (unit mass):
///
/// ```text
/// x₂(t) = k′x₁(t) + k x₁(t) ∫_{t₀}^t x₁⁻²
/// v₂(t) = k′v₁(t) + k (v₁(t) ∫_{t₀}^t x₁⁻² + 1/x₁(t))
/// ```
///
/// with t₀ the first sample of `x1`. The integral is taken over the
/// trajectory's interpolant.
pub fn partial_superpose_oscillator(x1: &Trajectory, k: f64, kprime: f64, tol: f64) -> Result<Trajectory> {
    if x1.dim() != 2 {
        return Err(Error::invalid("oscillator trajectory must have state (x, v)"));
    }
    let times = x1.times();
    for (i, &t) in times.iter().enumerate() {
        if x1.state(i)[0].abs() < SINGULARITY_RADIUS {
            return Err(Error::ZeroCrossing { t });
        }
    }
    let inv_sq = |t: f64| -> Result<f64> {
        let x = x1.sample(t)?[0];
        if x.abs() < SINGULARITY_RADIUS {
            return Err(Error::ZeroCrossing { t });
        }
        Ok(1.0 / (x * x))
    };
    let integral = cumulative_values(inv_sq, times[0], times, tol)?;
    let mut states = Vec::with_capacity(2 * times.len());
    let mut slopes = Vec::with_capacity(2 * times.len());
    for (i, &t) in times.iter().enumerate() {
        let (x, v) = (x1.state(i)[0], x1.state(i)[1]);
        let d = x1.derivative_at(t)?;
        let (dx, dv) = (d[0], d[1]);
        let q = integral[i];
        states.push(kprime * x + k * x * q);
        states.push(kprime * v + k * (v * q + 1.0 / x));
        slopes.push(kprime * dx + k * (dx * q + 1.0 / x));
        slopes.push(kprime * dv + k * (dv * q + v / (x * x) - dx / (x * x)));
    }
    Trajectory::with_derivatives(2, times.to_vec(), states, slopes)
}

/// x = k₁x₁ + k₂x₂, v = k₁v₁ + k₂v₂ on the grid of `s1`.
pub fn linear_superpose(s1: &Trajectory, s2: &Trajectory, k1: f64, k2: f64) -> Result<Trajectory> {
    if s1.dim() != s2.dim() {
        return Err(Error::invalid("trajectories must share a dimension"));
    }
    let s2 = align(s1, s2)?;
    let n = s1.dim();
    let mut states = Vec::with_capacity(n * s1.len());
    let mut slopes = Vec::with_capacity(n * s1.len());
    for (i, &t) in s1.times().iter().enumerate() {
        let (d1, d2) = (s1.derivative_at(t)?, s2.derivative_at(t)?);
        for j in 0..n {
            states.push(k1 * s1.state(i)[j] + k2 * s2.state(i)[j]);
            slopes.push(k1 * d1[j] + k2 * d2[j]);
        }
    }
    Trajectory::with_derivatives(n, s1.times().to_vec(), states, slopes)
}

/// (k₁, k₂) with target = k₁·s1 + k₂·s2, each state being (x, v).
///
/// In terms of the first integrals F₁ = x v₁ − x₁ v and F₂ = x v₂ − x₂ v of
/// the three-copy system and W = x₁v₂ − x₂v₁: k₁ = F₂/W, k₂ = −F₁/W.
pub fn coefficients_from_state(s1: [f64; 2], s2: [f64; 2], target: [f64; 2]) -> Result<(f64, f64)> {
    let w = wronskian(s1[0], s1[1], s2[0], s2[1]);
    if w.abs() <= WRONSKIAN_TOL {
        return Err(Error::DegenerateWronskian { w });
    }
    let [x, v] = target;
    let f1 = x * s1[1] - s1[0] * v;
    let f2 = x * s2[1] - s2[0] * v;
    Ok((f2 / w, -f1 / w))
}
