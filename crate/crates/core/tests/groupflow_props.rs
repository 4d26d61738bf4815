mod common;

use common::{random_smooth, random_unit_curve, rel_err, rng};
use liesys_core::groupflow::{gauge_at, gauge_transform, solve_group_equation, transport_on};
use liesys_core::riccati::{solve_direct, transform_coefficients};
use liesys_core::{uniform_grid, IntegratorOptions, ProjValue, RiccatiCoeffs};
use proptest::prelude::*;

fn opts() -> IntegratorOptions {
    IntegratorOptions::rk45(1e-13, 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// |bᵢ| ≤ 0.42 on [0, 2] and |x0| ≤ 0.3 keep the first pole beyond t = 2.
    #[test]
    fn transport_agrees_with_direct_integration(seed in any::<u64>(), x0 in -0.3f64..0.3) {
        let mut r = rng(seed);
        let b = RiccatiCoeffs { b0: random_smooth(&mut r, 0.2), b1: random_smooth(&mut r, 0.2), b2: random_smooth(&mut r, 0.2) };
        let grid = uniform_grid(0.0, 2.0, 81);
        let g = solve_group_equation(&b, 0.0, 2.0, &opts()).unwrap();
        for m in g.matrices() {
            prop_assert!((m.det() - 1.0).abs() <= 1e-12);
        }
        let moved = transport_on(&g, ProjValue::Finite(x0), &grid).unwrap();
        let direct = solve_direct(&b, ProjValue::Finite(x0), 0.0, 2.0, &opts()).unwrap().sample(&grid).unwrap();
        for (a, d) in moved.values.iter().zip(&direct.values) {
            let (a, d) = (a.finite().unwrap(), d.finite().unwrap());
            prop_assert!(rel_err(a, d) <= 1e-6, "{} vs {}", a, d);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauge_matches_explicit_formulas(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = RiccatiCoeffs { b0: random_smooth(&mut r, 1.0), b1: random_smooth(&mut r, 1.0), b2: random_smooth(&mut r, 1.0) };
        let a = random_unit_curve(&mut r);
        let (matrix, explicit) = (gauge_transform(&b, &a), transform_coefficients(&b, &a));
        for t in uniform_grid(0.0, 1.0, 21) {
            for (p, q) in [(&matrix.b0, &explicit.b0), (&matrix.b1, &explicit.b1), (&matrix.b2, &explicit.b2)] {
                let (p, q) = (p.eval(t).unwrap(), q.eval(t).unwrap());
                prop_assert!((p - q).abs() <= 1e-9, "t = {}: {} vs {}", t, p, q);
            }
        }
    }

    /// Gauging by A and then by B is gauging by B·A.
    #[test]
    fn gauge_composes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = RiccatiCoeffs { b0: random_smooth(&mut r, 1.0), b1: random_smooth(&mut r, 1.0), b2: random_smooth(&mut r, 1.0) };
        let a = random_unit_curve(&mut r);
        let c = random_unit_curve(&mut r);
        let stepwise = gauge_transform(&gauge_transform(&b, &a), &c);
        let product = c.compose(&a);
        for t in uniform_grid(0.0, 1.0, 21) {
            let once = gauge_at(&b, &product, t).unwrap();
            let twice = stepwise.at(t).unwrap();
            for (p, q) in [(once.b0, twice.b0), (once.b1, twice.b1), (once.b2, twice.b2)] {
                prop_assert!((p - q).abs() <= 1e-8, "t = {}: {} vs {}", t, p, q);
            }
        }
    }
}
