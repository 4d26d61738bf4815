use alloc::vec;
use alloc::vec::Vec;

use super::field::VectorField;
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::math;

/// Default blow-up bound on any state component.
pub const DEFAULT_MAX_MAGNITUDE: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Classical fourth-order Runge–Kutta with a fixed step.
    Rk4 { step: f64 },
    /// Dormand–Prince 5(4) with embedded error control.
    Rk45 { abs_tol: f64, rel_tol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub method: Method,
    pub max_steps: usize,
    /// Any state component above this magnitude aborts with [`Error::BlowUp`].
    pub max_magnitude: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions::rk45(1e-12, 1e-10)
    }
}

impl IntegratorOptions {
    pub fn rk45(abs_tol: f64, rel_tol: f64) -> Self {
        IntegratorOptions {
            method: Method::Rk45 { abs_tol, rel_tol },
            max_steps: 1_000_000,
            max_magnitude: DEFAULT_MAX_MAGNITUDE,
        }
    }

    pub fn rk4(step: f64) -> Self {
        IntegratorOptions {
            method: Method::Rk4 { step },
            max_steps: 1_000_000,
            max_magnitude: DEFAULT_MAX_MAGNITUDE,
        }
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn with_max_magnitude(mut self, bound: f64) -> Self {
        self.max_magnitude = bound;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            Method::Rk4 { step } if !(step > 0.0) => {
                return Err(Error::invalid("step must be positive"))
            }
            Method::Rk45 { abs_tol, rel_tol } if !(abs_tol > 0.0 && rel_tol > 0.0) => {
                return Err(Error::invalid("tolerances must be positive"))
            }
            _ => {}
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps must be positive"));
        }
        if !(self.max_magnitude > 0.0) {
            return Err(Error::invalid("blow-up bound must be positive"));
        }
        Ok(())
    }
}

/// What the driver should do after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Hook run after every accepted step. It may project the state (in place)
/// or end integration early.
pub trait StepObserver {
    fn accepted(&mut self, t: f64, x: &mut [f64]) -> Result<Control>;
}

/// Observer that never intervenes.
pub struct NoObserver;

impl StepObserver for NoObserver {
    fn accepted(&mut self, _t: f64, _x: &mut [f64]) -> Result<Control> {
        Ok(Control::Continue)
    }
}

impl<F> StepObserver for F
where
    F: FnMut(f64, &mut [f64]) -> Result<Control>,
{
    fn accepted(&mut self, t: f64, x: &mut [f64]) -> Result<Control> {
        self(t, x)
    }
}

/// Integrates ẋ = X(t, x) from `t0` to `t1`.
///
/// The output includes both endpoints. The adaptive method keeps the
/// estimated local error of each step below `abs_tol + rel_tol·|x|`
/// componentwise (RMS norm) and carries its dense output, so the result can
/// be sampled anywhere in `[t0, t1]`.
pub fn integrate_ode<V: VectorField + ?Sized>(
    field: &V,
    x0: &[f64],
    t0: f64,
    t1: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    integrate_observed(field, x0, t0, t1, opts, &mut NoObserver).map(|(tr, _)| tr)
}

/// Like [`integrate_ode`] but with a [`StepObserver`]. Returns the trajectory
/// and whether the observer stopped integration before `t1`.
pub fn integrate_observed<V: VectorField + ?Sized, O: StepObserver + ?Sized>(
    field: &V,
    x0: &[f64],
    t0: f64,
    t1: f64,
    opts: &IntegratorOptions,
    observer: &mut O,
) -> Result<(Trajectory, bool)> {
    opts.validate()?;
    if !(t1 > t0) {
        return Err(Error::invalid("integration interval needs t1 > t0"));
    }
    if x0.len() != field.dim() {
        return Err(Error::invalid("initial state length differs from field dimension"));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: t0 });
    }
    check_bound(x0, t0, opts.max_magnitude)?;
    match opts.method {
        Method::Rk45 { abs_tol, rel_tol } => {
            dopri5(field, x0, t0, t1, abs_tol, rel_tol, opts, observer)
        }
        Method::Rk4 { step } => rk4(field, x0, t0, t1, step, opts, observer),
    }
}

fn check_bound(x: &[f64], last_good: f64, bound: f64) -> Result<()> {
    for v in x {
        if !v.is_finite() || v.abs() > bound {
            return Err(Error::BlowUp { t: last_good, bound });
        }
    }
    Ok(())
}

fn rk4<V: VectorField + ?Sized, O: StepObserver + ?Sized>(
    field: &V,
    x0: &[f64],
    t0: f64,
    t1: f64,
    step: f64,
    opts: &IntegratorOptions,
    observer: &mut O,
) -> Result<(Trajectory, bool)> {
    let n = x0.len();
    let mut times = vec![t0];
    let mut states = x0.to_vec();
    let mut derivs = vec![0.0; n];
    field.eval(t0, x0, &mut derivs[..n])?;

    let mut x = x0.to_vec();
    let mut t = t0;
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut steps = 0usize;
    let mut stopped = false;
    while t < t1 {
        if steps == opts.max_steps {
            return Err(Error::MaxSteps { t, steps });
        }
        steps += 1;
        let remaining = t1 - t;
        // land exactly on t1 instead of leaving a sliver
        let h = if remaining <= step * (1.0 + 1e-9) { remaining } else { step };
        field.eval(t, &x, &mut k1)?;
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        field.eval(t + 0.5 * h, &tmp, &mut k2)?;
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        field.eval(t + 0.5 * h, &tmp, &mut k3)?;
        for i in 0..n {
            tmp[i] = x[i] + h * k3[i];
        }
        let t_next = if h == remaining { t1 } else { t + h };
        field.eval(t_next, &tmp, &mut k4)?;
        for i in 0..n {
            tmp[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        check_bound(&tmp, t, opts.max_magnitude)?;
        let control = observer.accepted(t_next, &mut tmp)?;
        t = t_next;
        x.copy_from_slice(&tmp);
        times.push(t);
        states.extend_from_slice(&x);
        field.eval(t, &x, &mut k1)?;
        derivs.extend_from_slice(&k1);
        if control == Control::Stop {
            stopped = t < t1;
            break;
        }
    }
    Ok((Trajectory::with_derivatives(n, times, states, derivs)?, stopped))
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// continuous extension
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

fn rms_norm(err: &[f64], x: &[f64], x_new: &[f64], atol: f64, rtol: f64) -> f64 {
    let n = err.len();
    let sum: f64 = (0..n)
        .map(|i| {
            let sc = atol + rtol * x[i].abs().max(x_new[i].abs());
            let r = err[i] / sc;
            r * r
        })
        .sum();
    math::sqrt(sum / n as f64)
}

/// Starting step size (Hairer, Nørsett & Wanner, II.4).
#[allow(clippy::too_many_arguments)]
fn initial_step<V: VectorField + ?Sized>(
    field: &V,
    t0: f64,
    x0: &[f64],
    f0: &[f64],
    span: f64,
    atol: f64,
    rtol: f64,
) -> Result<f64> {
    let n = x0.len();
    let sc: Vec<f64> = x0.iter().map(|v| atol + rtol * v.abs()).collect();
    let norm = |v: &[f64]| {
        let s: f64 = v.iter().zip(&sc).map(|(a, s)| (a / s) * (a / s)).sum();
        math::sqrt(s / n as f64)
    };
    let d0 = norm(x0);
    let d1 = norm(f0);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(span);
    let x1: Vec<f64> = x0.iter().zip(f0).map(|(x, f)| x + h0 * f).collect();
    let mut f1 = vec![0.0; n];
    field.eval(t0 + h0, &x1, &mut f1)?;
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        math::pow(0.01 / d1.max(d2), 1.0 / 5.0)
    };
    Ok((100.0 * h0).min(h1).min(span))
}

#[allow(clippy::too_many_arguments)]
fn dopri5<V: VectorField + ?Sized, O: StepObserver + ?Sized>(
    field: &V,
    x0: &[f64],
    t0: f64,
    t1: f64,
    atol: f64,
    rtol: f64,
    opts: &IntegratorOptions,
    observer: &mut O,
) -> Result<(Trajectory, bool)> {
    let n = x0.len();
    let span = t1 - t0;
    let mut times = vec![t0];
    let mut states = x0.to_vec();
    let mut coeffs: Vec<f64> = Vec::new();

    let mut x = x0.to_vec();
    let mut t = t0;
    let mut k1 = vec![0.0; n];
    field.eval(t, &x, &mut k1)?;
    let mut h = initial_step(field, t0, x0, &k1, span, atol, rtol)?;

    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut err = vec![0.0; n];
    let mut steps = 0usize;
    let mut last_rejected = false;

    while t < t1 {
        if steps == opts.max_steps {
            return Err(Error::MaxSteps { t, steps });
        }
        steps += 1;
        let last = t + h * (1.0 + 1e-12) >= t1;
        if last {
            h = t1 - t;
        }
        if h <= 4.0 * f64::EPSILON * (t.abs() + 1e-6 * span.abs()) {
            return Err(Error::StepUnderflow { t });
        }

        for i in 0..n {
            tmp[i] = x[i] + h * A21 * k1[i];
        }
        field.eval(t + C2 * h, &tmp, &mut k2)?;
        for i in 0..n {
            tmp[i] = x[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        field.eval(t + C3 * h, &tmp, &mut k3)?;
        for i in 0..n {
            tmp[i] = x[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        field.eval(t + C4 * h, &tmp, &mut k4)?;
        for i in 0..n {
            tmp[i] = x[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        field.eval(t + C5 * h, &tmp, &mut k5)?;
        for i in 0..n {
            tmp[i] = x[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let t_new = if last { t1 } else { t + h };
        field.eval(t_new, &tmp, &mut k6)?;
        for i in 0..n {
            x_new[i] = x[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        field.eval(t_new, &x_new, &mut k7)?;
        for i in 0..n {
            err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let e = rms_norm(&err, &x, &x_new, atol, rtol);
        if !e.is_finite() {
            // non-finite stage values: shrink hard and retry
            h *= FAC_MIN;
            last_rejected = true;
            continue;
        }

        if e <= 1.0 {
            check_bound(&x_new, t, opts.max_magnitude)?;
            // dense output coefficients for [t, t_new]
            let base = coeffs.len();
            coeffs.resize(base + 5 * n, 0.0);
            {
                let r = &mut coeffs[base..];
                for i in 0..n {
                    let ydiff = x_new[i] - x[i];
                    let bspl = h * k1[i] - ydiff;
                    r[i] = x[i];
                    r[n + i] = ydiff;
                    r[2 * n + i] = bspl;
                    r[3 * n + i] = ydiff - h * k7[i] - bspl;
                    r[4 * n + i] = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                }
            }
            tmp.copy_from_slice(&x_new);
            let control = observer.accepted(t_new, &mut x_new)?;
            t = t_new;
            x.copy_from_slice(&x_new);
            times.push(t);
            states.extend_from_slice(&x);
            // FSAL unless the observer moved the state
            if x_new == tmp {
                k1.copy_from_slice(&k7);
            } else {
                field.eval(t, &x, &mut k1)?;
            }

            let mut fac = SAFETY * math::pow(e.max(1e-10), -0.2);
            fac = fac.clamp(FAC_MIN, FAC_MAX);
            if last_rejected {
                fac = fac.min(1.0);
            }
            last_rejected = false;
            h *= fac;
            if control == Control::Stop {
                let early = t < t1;
                return Ok((Trajectory::from_dense(n, times, states, coeffs), early));
            }
        } else {
            let fac = (SAFETY * math::pow(e, -0.2)).clamp(FAC_MIN, 1.0);
            h *= fac;
            last_rejected = true;
        }
    }
    Ok((Trajectory::from_dense(n, times, states, coeffs), false))
}
