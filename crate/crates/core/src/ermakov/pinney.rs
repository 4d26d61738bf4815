use alloc::vec::Vec;

use super::{align, wronskian, SINGULARITY_RADIUS, WRONSKIAN_TOL};
use crate::curve::ScalarCurve;
use crate::error::{Error, Result};
use crate::math;
use crate::numkit::{Trajectory, VectorField};

/// Discriminants down to −DISCRIMINANT_TOL are clamped to zero.
pub const DISCRIMINANT_TOL: f64 = 1e-9;

/// ẍ = −ω²(t)x + c/x³. The constant is called `c` throughout, matching the
/// invariants I₁, I₂.
#[derive(Debug, Clone)]
pub struct PinneySpec {
    pub omega: ScalarCurve,
    pub c: f64,
}

impl PinneySpec {
    pub fn new(omega: impl Into<ScalarCurve>, c: f64) -> Self {
        PinneySpec { omega: omega.into(), c }
    }
}

fn pinney_accel(c: f64, w: f64, x: f64, t: f64) -> Result<f64> {
    if x.abs() < SINGULARITY_RADIUS {
        return Err(Error::Singularity { t, what: "x = 0 in the Pinney term" });
    }
    Ok(-w * w * x + c / (x * x * x))
}

#[derive(Debug, Clone)]
pub struct PinneyField {
    spec: PinneySpec,
}

impl VectorField for PinneyField {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, t: f64, s: &[f64], ds: &mut [f64]) -> Result<()> {
        let w = self.spec.omega.eval(t)?;
        ds[0] = s[1];
        ds[1] = pinney_accel(self.spec.c, w, s[0], t)?;
        Ok(())
    }
}

pub fn pinney_field(spec: &PinneySpec) -> PinneyField {
    PinneyField { spec: spec.clone() }
}

/// Pinney equation for y together with two oscillators x, z sharing ω(t),
/// on states (x, y, z, vx, vy, vz).
#[derive(Debug, Clone)]
pub struct PinneyJointField {
    spec: PinneySpec,
}

impl VectorField for PinneyJointField {
    fn dim(&self) -> usize {
        6
    }

    fn eval(&self, t: f64, s: &[f64], ds: &mut [f64]) -> Result<()> {
        let w = self.spec.omega.eval(t)?;
        ds[0] = s[3];
        ds[1] = s[4];
        ds[2] = s[5];
        ds[3] = -w * w * s[0];
        ds[4] = pinney_accel(self.spec.c, w, s[1], t)?;
        ds[5] = -w * w * s[2];
        Ok(())
    }
}

pub fn pinney_joint_field(spec: &PinneySpec) -> PinneyJointField {
    PinneyJointField { spec: spec.clone() }
}

/// First integrals of the joint system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinneyInvariants {
    pub i1: f64,
    pub i2: f64,
    pub w: f64,
    pub c: f64,
}

impl PinneyInvariants {
    /// 4·I₁·I₂ − c·W².
    pub fn discriminant(&self) -> f64 {
        4.0 * self.i1 * self.i2 - self.c * self.w * self.w
    }
}

/// I₁ = ½((y·vx − x·vy)² + c(x/y)²), I₂ = ½((y·vz − z·vy)² + c(z/y)²) and
/// W = x·vz − z·vx at the joint state (x, y, z, vx, vy, vz).
pub fn pinney_invariants(state: [f64; 6], c: f64) -> Result<PinneyInvariants> {
    let [x, y, z, vx, vy, vz] = state;
    if y.abs() < SINGULARITY_RADIUS {
        return Err(Error::SingularState("y = 0"));
    }
    let a = y * vx - x * vy;
    let b = y * vz - z * vy;
    let (rx, rz) = (x / y, z / y);
    Ok(PinneyInvariants {
        i1: 0.5 * (a * a + c * rx * rx),
        i2: 0.5 * (b * b + c * rz * rz),
        w: wronskian(x, vx, z, vz),
        c,
    })
}

/// Sign in front of the discriminant root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

struct Rule {
    i1: f64,
    i2: f64,
    w: f64,
    s: f64,
}

impl Rule {
    fn new(inv: &PinneyInvariants, branch: Branch) -> Result<Rule> {
        if inv.w.abs() <= WRONSKIAN_TOL {
            return Err(Error::DegenerateWronskian { w: inv.w });
        }
        let disc = inv.discriminant();
        if disc < -DISCRIMINANT_TOL {
            return Err(Error::NegativeDiscriminant { value: disc });
        }
        Ok(Rule { i1: inv.i1, i2: inv.i2, w: inv.w, s: branch.sign() * math::sqrt(disc.max(0.0)) })
    }

    /// (y, vy, v̇y) from oscillator positions, velocities and accelerations.
    fn eval(&self, t: f64, x: [f64; 3], z: [f64; 3]) -> Result<(f64, f64, f64)> {
        let [x, vx, ax] = x;
        let [z, vz, az] = z;
        let (i1, i2, s, w2) = (self.i1, self.i2, self.s, self.w * self.w);
        let q = i2 * x * x + i1 * z * z + s * x * z;
        if q < 0.0 {
            return Err(Error::NegativeRadicand { t, value: q });
        }
        let y = core::f64::consts::SQRT_2 / self.w * math::sqrt(q);
        if y.abs() < SINGULARITY_RADIUS {
            return Err(Error::Singularity { t, what: "reconstructed y = 0" });
        }
        // y² = 2Q/W², so y·ẏ = Q̇/W²
        let dq = 2.0 * i2 * x * vx + 2.0 * i1 * z * vz + s * (vx * z + x * vz);
        let ddq = 2.0 * i2 * (vx * vx + x * ax) + 2.0 * i1 * (vz * vz + z * az) + s * (ax * z + 2.0 * vx * vz + x * az);
        let vy = dq / (y * w2);
        let ay = ddq / (y * w2) - dq * vy / (y * y * w2);
        Ok((y, vy, ay))
    }
}

fn osc_state(traj: &Trajectory, i: usize) -> Result<[f64; 3]> {
    let s = traj.state(i);
    let d = traj.derivative_at(traj.times()[i])?;
    Ok([s[0], s[1], d[1]])
}

/// Reconstructs the Pinney solution
///
/// ```text
/// y = (√2/W) (I₂x² + I₁z² ± √(4I₁I₂ − cW²) xz)^{1/2}
/// ```
///
/// from two unit-mass oscillator solutions x and z (states (x, v)). The
/// output has state (y, vy) on the grid of `x`; vy and its slope come from
/// differentiating y² along the oscillators.
pub fn pinney_superpose(x: &Trajectory, z: &Trajectory, inv: &PinneyInvariants, branch: Branch) -> Result<Trajectory> {
    if x.dim() != 2 || z.dim() != 2 {
        return Err(Error::invalid("oscillator trajectories must have state (x, v)"));
    }
    let rule = Rule::new(inv, branch)?;
    let z = align(x, z)?;
    let mut states = Vec::with_capacity(2 * x.len());
    let mut slopes = Vec::with_capacity(2 * x.len());
    for (i, &t) in x.times().iter().enumerate() {
        let (y, vy, ay) = rule.eval(t, osc_state(x, i)?, osc_state(&z, i)?)?;
        states.extend([y, vy]);
        slopes.extend([vy, ay]);
    }
    Trajectory::with_derivatives(2, x.times().to_vec(), states, slopes)
}

/// The branch whose value at the first sample is closest to (y₀, vy₀).
pub fn match_branch(x: &Trajectory, z: &Trajectory, inv: &PinneyInvariants, y0: f64, vy0: f64) -> Result<Branch> {
    let z = align(x, z)?;
    let t = x.t_start();
    let (xs, zs) = (osc_state(x, 0)?, osc_state(&z, 0)?);
    let mut best = (f64::INFINITY, Branch::Plus);
    for branch in [Branch::Plus, Branch::Minus] {
        let (y, vy, _) = Rule::new(inv, branch)?.eval(t, xs, zs)?;
        let miss = (y - y0).abs() + (vy - vy0).abs();
        if miss < best.0 {
            best = (miss, branch);
        }
    }
    Ok(best.1)
}
