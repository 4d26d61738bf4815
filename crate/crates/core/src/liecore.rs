//! Concrete sl(2,ℝ) / SL(2,ℝ): basis, closed-form exponential, the Möbius
//! action on the projective line and numerical structure-constant checks.
//!
//! Basis convention: the fundamental vector fields of
//!
//! ```text
//! a0 = [[0, 1], [0, 0]]   a1 = [[1/2, 0], [0, -1/2]]   a2 = [[0, 0], [-1, 0]]
//! ```
//!
//! under the Möbius action are exactly ∂ₓ, x∂ₓ and x²∂ₓ, so a curve
//! b₀a₀ + b₁a₁ + b₂a₂ drives the Riccati equation ẋ = b₀ + b₁x + b₂x².
//! The matrix commutators are the sign mirror of the vector-field ones:
//! [a0,a1] = −a0, [a0,a2] = −2a1, [a1,a2] = −a2.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Mul;

use crate::error::{Error, Result};
use crate::math;
use crate::numkit::VectorField;

/// Tolerance on |det − 1| accepted by [`Sl2Matrix::new`].
pub const DET_TOL: f64 = 1e-9;

/// Below this |μ²| the exponential uses the truncated series.
pub const NILPOTENT_THRESHOLD: f64 = 1e-14;

/// Real 2×2 matrix [[a, b], [c, d]] with unit determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2Matrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Sl2Matrix {
    pub const IDENTITY: Sl2Matrix = Sl2Matrix { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Checked constructor: fails unless |ad − bc − 1| ≤ [`DET_TOL`].
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Sl2Matrix { a, b, c, d };
        let det = m.det();
        if (det - 1.0).abs() > DET_TOL || !det.is_finite() {
            return Err(Error::InvalidCurve { t: f64::NAN, det });
        }
        Ok(m)
    }

    /// Scales an invertible matrix with positive determinant onto SL(2,ℝ).
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::InvalidCurve { t: f64::NAN, det });
        }
        let s = 1.0 / math::sqrt(det);
        Ok(Sl2Matrix { a: a * s, b: b * s, c: c * s, d: d * s })
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Inverse via the adjugate (exact for unit determinant).
    pub fn inverse(&self) -> Self {
        Sl2Matrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn max_abs_diff(&self, other: &Sl2Matrix) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

impl Mul for Sl2Matrix {
    type Output = Sl2Matrix;

    fn mul(self, o: Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// Element b₀a₀ + b₁a₁ + b₂a₂ of sl(2,ℝ).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sl2Element {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
}

impl Sl2Element {
    pub fn new(b0: f64, b1: f64, b2: f64) -> Self {
        Sl2Element { b0, b1, b2 }
    }

    /// Traceless matrix [[b₁/2, b₀], [−b₂, −b₁/2]] as `[m11, m12, m21, m22]`.
    pub fn matrix(&self) -> [f64; 4] {
        [0.5 * self.b1, self.b0, -self.b2, -0.5 * self.b1]
    }

    /// Decomposes a matrix in the basis, discarding any trace part.
    pub fn from_matrix(m: [f64; 4]) -> Self {
        Sl2Element { b0: m[1], b1: m[0] - m[3], b2: -m[2] }
    }

    /// Value of the fundamental vector field b₀ + b₁x + b₂x² at `x`.
    pub fn field_at(&self, x: f64) -> f64 {
        self.b0 + x * (self.b1 + x * self.b2)
    }

    /// μ² with M² = μ²·I.
    pub fn mu_squared(&self) -> f64 {
        0.25 * self.b1 * self.b1 - self.b0 * self.b2
    }

    /// Matrix commutator [self, other].
    pub fn bracket(&self, other: &Sl2Element) -> Sl2Element {
        let p = self.matrix();
        let q = other.matrix();
        let pq = mat_mul(p, q);
        let qp = mat_mul(q, p);
        Sl2Element::from_matrix([pq[0] - qp[0], pq[1] - qp[1], pq[2] - qp[2], pq[3] - qp[3]])
    }
}

pub(crate) fn mat_mul(p: [f64; 4], q: [f64; 4]) -> [f64; 4] {
    [
        p[0] * q[0] + p[1] * q[2],
        p[0] * q[1] + p[1] * q[3],
        p[2] * q[0] + p[3] * q[2],
        p[2] * q[1] + p[3] * q[3],
    ]
}

/// The basis (a₀, a₁, a₂).
pub fn basis() -> [Sl2Element; 3] {
    [
        Sl2Element::new(1.0, 0.0, 0.0),
        Sl2Element::new(0.0, 1.0, 0.0),
        Sl2Element::new(0.0, 0.0, 1.0),
    ]
}

/// exp(s·M) in closed form, renormalized to unit determinant.
pub fn expm_sl2(m: Sl2Element, s: f64) -> Sl2Matrix {
    let mu2 = m.mu_squared();
    let [m11, m12, m21, m22] = m.matrix();
    let (c, k) = if mu2.abs() <= NILPOTENT_THRESHOLD {
        (1.0 + 0.5 * s * s * mu2, s)
    } else if mu2 > 0.0 {
        let mu = math::sqrt(mu2);
        (math::cosh(mu * s), math::sinh(mu * s) / mu)
    } else {
        let mu = math::sqrt(-mu2);
        (math::cos(mu * s), math::sin(mu * s) / mu)
    };
    let (a, b, cc, d) = (c + k * m11, k * m12, k * m21, c + k * m22);
    Sl2Matrix::normalized(a, b, cc, d).unwrap_or(Sl2Matrix { a, b, c: cc, d })
}

/// Point of the projective line ℝ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjValue {
    Finite(f64),
    Infinity,
}

impl ProjValue {
    /// `p/q`, with q = 0 (or an overflowing quotient) mapped to ∞.
    pub fn from_homogeneous(p: f64, q: f64) -> ProjValue {
        if q == 0.0 {
            return ProjValue::Infinity;
        }
        let x = p / q;
        if x.is_finite() {
            ProjValue::Finite(x)
        } else {
            ProjValue::Infinity
        }
    }

    /// Homogeneous coordinates (x, 1) or (1, 0).
    pub fn homogeneous(self) -> (f64, f64) {
        match self {
            ProjValue::Finite(x) => (x, 1.0),
            ProjValue::Infinity => (1.0, 0.0),
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ProjValue::Finite(x) => Some(x),
            ProjValue::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ProjValue::Infinity)
    }

    /// Chordal distance on the projective line (∞ is at distance
    /// 1/√(1+x²) from x); bounded by 1.
    pub fn chordal_distance(self, other: ProjValue) -> f64 {
        let (p1, q1) = self.homogeneous();
        let (p2, q2) = other.homogeneous();
        let cross = (p1 * q2 - p2 * q1).abs();
        cross / (math::sqrt(p1 * p1 + q1 * q1) * math::sqrt(p2 * p2 + q2 * q2))
    }
}

impl From<f64> for ProjValue {
    fn from(x: f64) -> Self {
        if x.is_finite() {
            ProjValue::Finite(x)
        } else {
            ProjValue::Infinity
        }
    }
}

impl core::fmt::Display for ProjValue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ProjValue::Finite(x) => write!(f, "{x}"),
            ProjValue::Infinity => f.write_str("inf"),
        }
    }
}

/// Möbius action x ↦ (ax + b)/(cx + d), total on ℝ ∪ {∞}.
pub fn mobius(m: &Sl2Matrix, p: ProjValue) -> ProjValue {
    let (x, w) = p.homogeneous();
    ProjValue::from_homogeneous(m.a * x + m.b * w, m.c * x + m.d * w)
}

/// Lie bracket of two vector fields at `(t, x)` by central differences of
/// step `h`: [X,Y]ⁱ = Σⱼ Xʲ ∂ⱼYⁱ − Yʲ ∂ⱼXⁱ.
pub fn commutator_fd<X, Y>(fx: &X, fy: &Y, t: f64, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    X: VectorField + ?Sized,
    Y: VectorField + ?Sized,
{
    let n = fx.dim();
    if fy.dim() != n || x.len() != n {
        return Err(Error::invalid("commutator fields and point must share a dimension"));
    }
    let mut vx = vec![0.0; n];
    let mut vy = vec![0.0; n];
    fx.eval(t, x, &mut vx)?;
    fy.eval(t, x, &mut vy)?;
    let mut out = vec![0.0; n];
    let mut probe = x.to_vec();
    let (mut xp, mut xm, mut yp, mut ym) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for j in 0..n {
        probe[j] = x[j] + h;
        fx.eval(t, &probe, &mut xp)?;
        fy.eval(t, &probe, &mut yp)?;
        probe[j] = x[j] - h;
        fx.eval(t, &probe, &mut xm)?;
        fy.eval(t, &probe, &mut ym)?;
        probe[j] = x[j];
        for i in 0..n {
            let dj_y = (yp[i] - ym[i]) / (2.0 * h);
            let dj_x = (xp[i] - xm[i]) / (2.0 * h);
            out[i] += vx[j] * dj_y - vy[j] * dj_x;
        }
    }
    Ok(out)
}

/// Table c_{αβ}^γ of an r-dimensional Lie algebra, stored antisymmetric in
/// (α, β).
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    r: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(r: usize) -> Self {
        StructureConstants { r, data: vec![0.0; r * r * r] }
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    /// Sets c_{αβ}^γ = value and c_{βα}^γ = −value.
    pub fn set(&mut self, alpha: usize, beta: usize, gamma: usize, value: f64) -> &mut Self {
        let r = self.r;
        self.data[(alpha * r + beta) * r + gamma] = value;
        self.data[(beta * r + alpha) * r + gamma] = -value;
        self
    }

    pub fn get(&self, alpha: usize, beta: usize, gamma: usize) -> f64 {
        self.data[(alpha * self.r + beta) * self.r + gamma]
    }

    /// [X₀,X₁] = X₀, [X₀,X₂] = 2X₁, [X₁,X₂] = X₂: the Riccati generators
    /// ∂ₓ, x∂ₓ, x²∂ₓ and the (x, p) oscillator generators.
    pub fn sl2_riccati() -> Self {
        let mut c = Self::zeros(3);
        c.set(0, 1, 0, 1.0).set(0, 2, 1, 2.0).set(1, 2, 2, 1.0);
        c
    }

    /// [X₁,X₂] = 2X₃, [X₁,X₃] = −X₁, [X₂,X₃] = X₂ with fields indexed
    /// (X₁, X₂, X₃) → (0, 1, 2): isotropic oscillator, Pinney and Ermakov.
    pub fn sl2_second_order() -> Self {
        let mut c = Self::zeros(3);
        c.set(0, 1, 2, 2.0).set(0, 2, 0, -1.0).set(1, 2, 1, 1.0);
        c
    }
}

/// Largest sup-norm deviation of [X_α, X_β] from Σ_γ c_{αβ}^γ X_γ over all
/// pairs and sample points.
pub fn verify_structure_constants(
    fields: &[&dyn VectorField],
    c: &StructureConstants,
    points: &[(f64, Vec<f64>)],
    h: f64,
) -> Result<f64> {
    let r = fields.len();
    if r == 0 || c.dim() != r {
        return Err(Error::invalid("structure-constant table does not match field count"));
    }
    if points.is_empty() {
        return Err(Error::invalid("need at least one sample point"));
    }
    let n = fields[0].dim();
    if fields.iter().any(|f| f.dim() != n) {
        return Err(Error::invalid("fields must share a dimension"));
    }
    let mut worst: f64 = 0.0;
    let mut values = vec![vec![0.0; n]; r];
    for (t, x) in points {
        for (f, v) in fields.iter().zip(values.iter_mut()) {
            f.eval(*t, x, v)?;
        }
        for alpha in 0..r {
            for beta in alpha + 1..r {
                let br = commutator_fd(fields[alpha], fields[beta], *t, x, h)?;
                for i in 0..n {
                    let expected: f64 = (0..r).map(|g| c.get(alpha, beta, g) * values[g][i]).sum();
                    worst = worst.max((br[i] - expected).abs());
                }
            }
        }
    }
    Ok(worst)
}
