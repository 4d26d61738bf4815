use crate::curve::ScalarCurve;
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::numkit::{quadrature, VectorField};

use super::SINGULARITY_RADIUS;

/// ẍ = f(y/x)/x³ − ω²(t)x, ÿ = g(y/x)/y³ − ω²(t)y.
///
/// `f` and `g` are expressions in the variable `u`.
#[derive(Debug, Clone)]
pub struct ErmakovSpec {
    pub omega: ScalarCurve,
    pub f: Expression,
    pub g: Expression,
}

impl ErmakovSpec {
    pub fn new(omega: impl Into<ScalarCurve>, f: Expression, g: Expression) -> Self {
        ErmakovSpec { omega: omega.into(), f, g }
    }

    /// Parses `f` and `g` as expressions in `u`.
    pub fn parse(omega: impl Into<ScalarCurve>, f: &str, g: &str) -> Result<Self> {
        Ok(Self::new(omega, Expression::parse_in(f, "u")?, Expression::parse_in(g, "u")?))
    }

    /// The classical case f ≡ k, g ≡ 0.
    pub fn classical(omega: impl Into<ScalarCurve>, k: f64) -> Self {
        Self::new(omega, Expression::constant(k), Expression::constant(0.0))
    }
}

/// Field of an Ermakov system on states (x, y, vx, vy).
#[derive(Debug, Clone)]
pub struct ErmakovField {
    spec: ErmakovSpec,
}

impl VectorField for ErmakovField {
    fn dim(&self) -> usize {
        4
    }

    fn eval(&self, t: f64, s: &[f64], ds: &mut [f64]) -> Result<()> {
        let (x, y) = (s[0], s[1]);
        if x.abs() < SINGULARITY_RADIUS {
            return Err(Error::Singularity { t, what: "x = 0" });
        }
        let w = self.spec.omega.eval(t)?;
        let u = y / x;
        ds[0] = s[2];
        ds[1] = s[3];
        ds[2] = -w * w * x + self.spec.f.eval(u)? / (x * x * x);
        ds[3] = -w * w * y + coupling_over_cube(self.spec.g.eval(u)?, y, t)?;
        Ok(())
    }
}

/// g/y³, with y = 0 allowed where g vanishes (e.g. the classical case g ≡ 0,
/// where y is a plain oscillator and crosses zero).
pub(super) fn coupling_over_cube(g: f64, y: f64, t: f64) -> Result<f64> {
    if g == 0.0 {
        return Ok(0.0);
    }
    if y.abs() < SINGULARITY_RADIUS {
        return Err(Error::Singularity { t, what: "y = 0" });
    }
    Ok(g / (y * y * y))
}

pub fn ermakov_field(spec: &ErmakovSpec) -> ErmakovField {
    ErmakovField { spec: spec.clone() }
}

/// (k/2)(y/x)² + ½(x·vy − y·vx)² at state (x, y, vx, vy).
pub fn ermakov_invariant(k: f64, state: [f64; 4]) -> Result<f64> {
    let [x, y, vx, vy] = state;
    if x.abs() < SINGULARITY_RADIUS {
        return Err(Error::SingularState("x = 0"));
    }
    let r = y / x;
    let l = x * vy - y * vx;
    Ok(0.5 * k * r * r + 0.5 * l * l)
}

/// ½(x·vy − y·vx)² + ∫₁^{x/y} [−u⁻³ f(1/u) + u g(1/u)] du.
///
/// The lower limit is fixed at u = 1; another choice would only add a
/// constant. For f ≡ k, g ≡ 0 this equals the Ermakov invariant minus k/2.
pub fn generalized_first_integral(spec: &ErmakovSpec, state: [f64; 4], quad_tol: f64) -> Result<f64> {
    let [x, y, vx, vy] = state;
    if x.abs() < SINGULARITY_RADIUS {
        return Err(Error::SingularState("x = 0"));
    }
    if y.abs() < SINGULARITY_RADIUS {
        return Err(Error::SingularState("y = 0"));
    }
    let upper = x / y;
    if upper <= 0.0 {
        return Err(Error::SignCrossing { u: upper });
    }
    let integrand = |u: f64| -> Result<f64> {
        let w = 1.0 / u;
        Ok(-w * w * w * spec.f.eval(w)? + u * spec.g.eval(w)?)
    };
    let l = x * vy - y * vx;
    Ok(0.5 * l * l + quadrature(integrand, 1.0, upper, quad_tol)?)
}
