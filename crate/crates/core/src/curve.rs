//! Scalar curves t ↦ ℝ with a derivative.

use alloc::sync::Arc;
use core::fmt;

use crate::error::Result;
use crate::expr::Expression;
use crate::numkit::Trajectory;

/// Boxed fallible real function, shareable across threads.
pub type CurveFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

// Step of the five-point stencil used when no derivative is known.
const FD_STEP: f64 = 1e-3;

#[derive(Clone)]
enum Repr {
    Const(f64),
    Expr { expr: Expression, deriv: Expression },
    Sampled { traj: Arc<Trajectory>, component: usize },
    Func { value: CurveFn, derivative: Option<CurveFn> },
}

/// A map t ↦ ℝ together with its derivative.
///
/// Expression-backed curves carry an exact symbolic derivative; sampled
/// curves differentiate their interpolant; closure curves use the supplied
/// derivative or, failing that, a fourth-order central difference.
#[derive(Clone)]
pub struct ScalarCurve(Repr);

impl ScalarCurve {
    pub fn constant(value: f64) -> Self {
        ScalarCurve(Repr::Const(value))
    }

    pub fn from_expr(expr: Expression) -> Self {
        let deriv = expr.differentiate();
        ScalarCurve(Repr::Expr { expr, deriv })
    }

    /// Parses an expression in `t`.
    pub fn parse(source: &str) -> Result<Self> {
        Ok(Self::from_expr(Expression::parse(source)?))
    }

    /// Component `component` of a trajectory, interpolated.
    pub fn sampled(traj: Trajectory, component: usize) -> Self {
        Self::sampled_shared(Arc::new(traj), component)
    }

    pub fn sampled_shared(traj: Arc<Trajectory>, component: usize) -> Self {
        assert!(component < traj.dim(), "component out of range");
        ScalarCurve(Repr::Sampled { traj, component })
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        ScalarCurve(Repr::Func { value: Arc::new(f), derivative: None })
    }

    pub fn from_fns<F, D>(f: F, df: D) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
        D: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        ScalarCurve(Repr::Func { value: Arc::new(f), derivative: Some(Arc::new(df)) })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match &self.0 {
            Repr::Const(c) => Ok(*c),
            Repr::Expr { expr, .. } => expr.eval(t),
            Repr::Sampled { traj, component } => Ok(traj.sample(t)?[*component]),
            Repr::Func { value, .. } => value(t),
        }
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        match &self.0 {
            Repr::Const(_) => Ok(0.0),
            Repr::Expr { deriv, .. } => deriv.eval(t),
            Repr::Sampled { traj, component } => Ok(traj.derivative_at(t)?[*component]),
            Repr::Func { derivative: Some(d), .. } => d(t),
            Repr::Func { value, derivative: None } => {
                let h = FD_STEP * (1.0 + t.abs());
                let f2 = value(t + 2.0 * h)?;
                let f1 = value(t + h)?;
                let m1 = value(t - h)?;
                let m2 = value(t - 2.0 * h)?;
                Ok((-f2 + 8.0 * f1 - 8.0 * m1 + m2) / (12.0 * h))
            }
        }
    }

    /// The underlying expression, when the curve is expression-backed.
    pub fn expression(&self) -> Option<&Expression> {
        match &self.0 {
            Repr::Expr { expr, .. } => Some(expr),
            _ => None,
        }
    }

    pub fn derivative_expression(&self) -> Option<&Expression> {
        match &self.0 {
            Repr::Expr { deriv, .. } => Some(deriv),
            _ => None,
        }
    }

    /// `Some(c)` for curves known to be constant.
    pub fn as_constant(&self) -> Option<f64> {
        match &self.0 {
            Repr::Const(c) => Some(*c),
            Repr::Expr { expr, .. } if expr.is_constant() => expr.eval(0.0).ok(),
            _ => None,
        }
    }
}

impl From<f64> for ScalarCurve {
    fn from(value: f64) -> Self {
        ScalarCurve::constant(value)
    }
}

impl From<Expression> for ScalarCurve {
    fn from(expr: Expression) -> Self {
        ScalarCurve::from_expr(expr)
    }
}

impl fmt::Debug for ScalarCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Const(c) => write!(f, "ScalarCurve::Const({c})"),
            Repr::Expr { expr, .. } => write!(f, "ScalarCurve::Expr({expr})"),
            Repr::Sampled { traj, component } => write!(
                f,
                "ScalarCurve::Sampled({} samples on [{}, {}], component {component})",
                traj.len(),
                traj.t_start(),
                traj.t_end()
            ),
            Repr::Func { .. } => f.write_str("ScalarCurve::Func(..)"),
        }
    }
}

impl fmt::Display for ScalarCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Const(c) => write!(f, "{c}"),
            Repr::Expr { expr, .. } => write!(f, "{expr}"),
            Repr::Sampled { .. } => f.write_str("<sampled>"),
            Repr::Func { .. } => f.write_str("<function>"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn derivatives_by_kind() {
        assert_eq!(ScalarCurve::constant(2.0).derivative(5.0).unwrap(), 0.0);
        let e = ScalarCurve::parse("t^3").unwrap();
        assert_eq!(e.derivative(2.0).unwrap(), 12.0);
        let f = ScalarCurve::from_fn(|t| Ok(math::sin(t)));
        assert!((f.derivative(0.7).unwrap() - math::cos(0.7)).abs() < 1e-11);
        let g = ScalarCurve::from_fns(|t| Ok(t * t), |t| Ok(2.0 * t));
        assert_eq!(g.derivative(3.0).unwrap(), 6.0);
    }

    #[test]
    fn constant_detection() {
        assert_eq!(ScalarCurve::parse("2*pi").unwrap().as_constant(), Some(2.0 * core::f64::consts::PI));
        assert_eq!(ScalarCurve::parse("t").unwrap().as_constant(), None);
    }
}
