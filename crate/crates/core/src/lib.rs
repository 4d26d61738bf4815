//! Numerical toolkit for Lie systems whose Vessiot–Guldberg algebra is
//! sl(2,ℝ): Riccati equations, time-dependent harmonic oscillators, the
//! Pinney equation and generalized Ermakov systems.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! filesystem or a terminal lives in the companion `liesys` crate.
//!
//! Module map:
//!
//! - [`expr`]: one-variable expression language with symbolic derivatives.
//! - [`curve`]: [`ScalarCurve`], the t ↦ ℝ maps every coefficient is built from.
//! - [`numkit`]: Dormand–Prince / RK4 integration, adaptive quadrature, finite differences.
//! - [`liecore`]: SL(2,ℝ) matrices, the Möbius action, structure-constant checks.
//! - [`groupflow`]: the group-level equation, transport to the projective line, gauge action.
//! - [`riccati`]: projective direct solver, cross-ratio superposition, reductions, integrability criterion.
//! - [`ermakov`]: oscillators, Pinney and Ermakov systems, their first integrals and superposition rules.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod curve;
pub mod ermakov;
mod error;
pub mod expr;
pub mod groupflow;
pub mod liecore;
pub(crate) mod math;
pub mod numkit;
pub mod riccati;

pub use curve::ScalarCurve;
pub use error::{Error, Expected, Result};
pub use expr::Expression;
pub use liecore::{ProjValue, Sl2Element, Sl2Matrix};
pub use numkit::{IntegratorOptions, Method, Trajectory, VectorField};
pub use riccati::RiccatiCoeffs;

/// `n` evenly spaced points covering `[t0, t1]`, both endpoints included.
///
/// `n < 2` yields just `[t0]`.
pub fn uniform_grid(t0: f64, t1: f64, n: usize) -> alloc::vec::Vec<f64> {
    if n < 2 {
        return alloc::vec![t0];
    }
    let step = (t1 - t0) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { t1 } else { t0 + step * i as f64 })
        .collect()
}
