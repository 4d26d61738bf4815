//! Non-autonomous ODE integration, quadrature and finite differences.

mod field;
mod integrate;
mod quad;
mod trajectory;

pub use field::{autonomous, FnField, VectorField};
pub use integrate::{
    integrate_observed, integrate_ode, Control, IntegratorOptions, Method, NoObserver, StepObserver,
    DEFAULT_MAX_MAGNITUDE,
};
pub use quad::{cumulative_values, quadrature};
pub use trajectory::Trajectory;

use crate::curve::ScalarCurve;
use crate::error::Result;

/// ∫_{t0}^{gᵢ} f on `grid`, returned as a sampled curve whose node values
/// are the running integrals and whose node slopes are f(gᵢ) itself.
pub fn cumulative_quadrature(f: &ScalarCurve, t0: f64, grid: &[f64], tol: f64) -> Result<ScalarCurve> {
    let values = cumulative_values(|t| f.eval(t), t0, grid, tol)?;
    let slopes = grid.iter().map(|&t| f.eval(t)).collect::<Result<alloc::vec::Vec<_>>>()?;
    let traj = Trajectory::with_derivatives(1, grid.to_vec(), values, slopes)?;
    Ok(ScalarCurve::sampled(traj, 0))
}

/// Largest ‖ẋ(t) − X(t, x(t))‖∞ of a trajectory against a field, probing
/// every node and every midpoint between nodes. The trajectory's own
/// interpolant supplies ẋ.
pub fn field_residual<V: VectorField + ?Sized>(field: &V, traj: &Trajectory) -> Result<f64> {
    let n = traj.dim();
    if field.dim() != n {
        return Err(crate::Error::invalid("field and trajectory dimensions differ"));
    }
    let times = traj.times();
    let mut x = alloc::vec![0.0; n];
    let mut dx = alloc::vec![0.0; n];
    let mut rhs = alloc::vec![0.0; n];
    let mut worst: f64 = 0.0;
    for (i, &t) in times.iter().enumerate() {
        let mid = times.get(i + 1).map(|&next| 0.5 * (t + next));
        for probe in core::iter::once(t).chain(mid) {
            traj.sample_with_derivative(probe, &mut x, &mut dx)?;
            field.eval(probe, &x, &mut rhs)?;
            for (a, b) in dx.iter().zip(&rhs) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    Ok(worst)
}

/// Central difference (f(t+h) − f(t−h)) / 2h.
pub fn fd_derivative<F>(f: F, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(h > 0.0) {
        return Err(crate::Error::invalid("finite-difference step must be positive"));
    }
    Ok((f(t + h)? - f(t - h)?) / (2.0 * h))
}
