use crate::error::{Error, Result};
use crate::liecore::ProjValue;
use crate::math;

// Relative threshold below which two projective points count as equal.
const COINCIDENCE_TOL: f64 = 1e-14;

fn bracket(u: (f64, f64), v: (f64, f64)) -> f64 {
    u.0 * v.1 - v.0 * u.1
}

fn norm(u: (f64, f64)) -> f64 {
    math::sqrt(u.0 * u.0 + u.1 * u.1)
}

fn distinct(x1: ProjValue, x2: ProjValue, x3: ProjValue) -> Result<[(f64, f64); 3]> {
    let v = [x1.homogeneous(), x2.homogeneous(), x3.homogeneous()];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if bracket(v[i], v[j]).abs() <= COINCIDENCE_TOL * norm(v[i]) * norm(v[j]) {
            return Err(Error::CoincidentSolutions);
        }
    }
    Ok(v)
}

/// Combines three distinct solutions into a fourth:
///
/// ```text
/// x = (k x₁(x₃ − x₂) + x₂(x₁ − x₃)) / (k(x₃ − x₂) + (x₁ − x₃))
/// ```
///
/// evaluated in homogeneous coordinates, so any input may be ∞. With this
/// parametrization k = 0 gives x₂, k = 1 gives x₃ and k → ∞ gives x₁; the
/// k belonging to a given x is [`cross_ratio_constant`], which is the
/// reciprocal of the classical cross-ratio (x−x₁)(x₃−x₂)/((x−x₂)(x₃−x₁)).
pub fn cross_ratio_superposition(x1: ProjValue, x2: ProjValue, x3: ProjValue, k: f64) -> Result<ProjValue> {
    let [v1, v2, v3] = distinct(x1, x2, x3)?;
    let b32 = bracket(v3, v2);
    let b13 = bracket(v1, v3);
    let num = k * v1.0 * b32 + v2.0 * b13;
    let den = k * v1.1 * b32 + v2.1 * b13;
    Ok(ProjValue::from_homogeneous(num, den))
}

/// The constant k for which [`cross_ratio_superposition`] returns `x`:
/// k = (x − x₂)(x₃ − x₁) / ((x − x₁)(x₃ − x₂)), ∞ when x = x₁.
pub fn cross_ratio_constant(x: ProjValue, x1: ProjValue, x2: ProjValue, x3: ProjValue) -> Result<ProjValue> {
    let [v1, v2, v3] = distinct(x1, x2, x3)?;
    let v = x.homogeneous();
    Ok(ProjValue::from_homogeneous(bracket(v, v2) * bracket(v3, v1), bracket(v, v1) * bracket(v3, v2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ProjValue::{Finite, Infinity};

    #[test]
    fn special_values_of_k() {
        let (x1, x2, x3) = (Finite(0.3), Finite(-1.0), Finite(2.5));
        let at1 = cross_ratio_superposition(x1, x2, x3, 1.0).unwrap().finite().unwrap();
        assert!((at1 - 2.5).abs() < 1e-15);
        assert_eq!(cross_ratio_superposition(x1, x2, x3, 0.0).unwrap(), x2);
        let far = cross_ratio_superposition(x1, x2, x3, 1e12).unwrap().finite().unwrap();
        assert!((far - 0.3).abs() < 1e-10);
    }

    #[test]
    fn infinity_as_input_and_output() {
        let x = cross_ratio_superposition(Infinity, Finite(0.0), Finite(1.0), 0.5).unwrap();
        // (∞, 0, 1) is the standard frame: the rule returns k itself
        assert_eq!(x, Finite(0.5));
        let k = cross_ratio_constant(x, Infinity, Finite(0.0), Finite(1.0)).unwrap();
        assert!((k.finite().unwrap() - 0.5).abs() < 1e-15);
        let k = cross_ratio_constant(Finite(0.3), Finite(0.3), Finite(0.0), Finite(1.0)).unwrap();
        assert_eq!(k, Infinity);
    }

    #[test]
    fn recovers_k() {
        let (x1, x2, x3) = (Finite(-0.7), Finite(0.2), Finite(1.9));
        for k in [-3.0, -0.5, 0.25, 2.0, 7.5] {
            let x = cross_ratio_superposition(x1, x2, x3, k).unwrap();
            let back = cross_ratio_constant(x, x1, x2, x3).unwrap().finite().unwrap();
            assert!((back - k).abs() <= 1e-12 * (1.0 + k.abs()));
        }
    }

    #[test]
    fn coincident_inputs_rejected() {
        let e = cross_ratio_superposition(Finite(1.0), Finite(1.0), Finite(2.0), 1.0);
        assert!(matches!(e, Err(Error::CoincidentSolutions)));
        let e = cross_ratio_superposition(Infinity, Finite(0.0), Infinity, 1.0);
        assert!(matches!(e, Err(Error::CoincidentSolutions)));
    }
}
