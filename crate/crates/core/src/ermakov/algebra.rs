//! Generator triples spanning the sl(2,ℝ) algebras of the second-order
//! systems.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::generalized::{coupling_over_cube, ErmakovSpec};
use super::SINGULARITY_RADIUS;
use crate::error::{Error, Result};
use crate::numkit::{autonomous, FnField, VectorField};

/// p∂ₓ, ½(x∂ₓ − p∂ₚ), −x∂ₚ on (x, p). Same table as the Riccati fields; the
/// oscillator field is (1/m)X₀ + mω²X₂.
pub fn oscillator_generators() -> Vec<Box<dyn VectorField>> {
    vec![
        Box::new(autonomous(2, |s, d| {
            d[0] = s[1];
            d[1] = 0.0;
        })),
        Box::new(autonomous(2, |s, d| {
            d[0] = 0.5 * s[0];
            d[1] = -0.5 * s[1];
        })),
        Box::new(autonomous(2, |s, d| {
            d[0] = 0.0;
            d[1] = -s[0];
        })),
    ]
}

/// X₁ = Σ xᵢ∂_{vᵢ}, X₂ = Σ vᵢ∂_{xᵢ}, X₃ = ½Σ(xᵢ∂_{xᵢ} − vᵢ∂_{vᵢ}) on
/// (x₁, v₁, x₂, v₂).
pub fn isotropic_generators() -> Vec<Box<dyn VectorField>> {
    vec![
        Box::new(autonomous(4, |s, d| {
            d.copy_from_slice(&[0.0, s[0], 0.0, s[2]]);
        })),
        Box::new(autonomous(4, |s, d| {
            d.copy_from_slice(&[s[1], 0.0, s[3], 0.0]);
        })),
        Box::new(autonomous(4, |s, d| {
            d.copy_from_slice(&[0.5 * s[0], -0.5 * s[1], 0.5 * s[2], -0.5 * s[3]]);
        })),
    ]
}

/// L₁ = x∂ᵥ, L₂ = v∂ₓ + (c/x³)∂ᵥ, L₃ = ½(x∂ₓ − v∂ᵥ) on (x, v).
pub fn pinney_generators(c: f64) -> Vec<Box<dyn VectorField>> {
    vec![
        Box::new(autonomous(2, |s, d| {
            d[0] = 0.0;
            d[1] = s[0];
        })),
        Box::new(FnField::new(2, move |t, s: &[f64], d: &mut [f64]| {
            if s[0].abs() < SINGULARITY_RADIUS {
                return Err(Error::Singularity { t, what: "x = 0 in the Pinney term" });
            }
            d[0] = s[1];
            d[1] = c / (s[0] * s[0] * s[0]);
            Ok(())
        })),
        Box::new(autonomous(2, |s, d| {
            d[0] = 0.5 * s[0];
            d[1] = -0.5 * s[1];
        })),
    ]
}

/// N₁ = x∂_{vx} + y∂_{vy}, N₂ = vx∂ₓ + vy∂_y + (f(y/x)/x³)∂_{vx} +
/// (g(y/x)/y³)∂_{vy}, N₃ = ½(x∂ₓ − vx∂_{vx} + y∂_y − vy∂_{vy}) on
/// (x, y, vx, vy). `spec.omega` is not used.
pub fn ermakov_generators(spec: &ErmakovSpec) -> Vec<Box<dyn VectorField>> {
    let (f, g) = (spec.f.clone(), spec.g.clone());
    vec![
        Box::new(autonomous(4, |s, d| {
            d.copy_from_slice(&[0.0, 0.0, s[0], s[1]]);
        })),
        Box::new(FnField::new(4, move |t, s: &[f64], d: &mut [f64]| -> Result<()> {
            let (x, y) = (s[0], s[1]);
            if x.abs() < SINGULARITY_RADIUS {
                return Err(Error::Singularity { t, what: "x = 0" });
            }
            let u = y / x;
            d.copy_from_slice(&[s[2], s[3], f.eval(u)? / (x * x * x), coupling_over_cube(g.eval(u)?, y, t)?]);
            Ok(())
        })),
        Box::new(autonomous(4, |s, d| {
            d.copy_from_slice(&[0.5 * s[0], 0.5 * s[1], -0.5 * s[2], -0.5 * s[3]]);
        })),
    ]
}
