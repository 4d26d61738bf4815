use liesys_core::ermakov::{
    coefficients_from_state, ermakov_field, ermakov_invariant, generalized_first_integral, match_branch,
    oscillator_field, pinney_invariants, pinney_superpose, wronskian, Branch, ErmakovSpec, OscillatorSpec,
};
use liesys_core::numkit::integrate_ode;
use liesys_core::{uniform_grid, Error, IntegratorOptions, ScalarCurve, Trajectory};
use proptest::prelude::*;

fn opts() -> IntegratorOptions {
    IntegratorOptions::rk45(1e-12, 1e-10)
}

/// ω(t) = w₀ + a·sin(νt), bounded away from zero.
fn omega() -> impl Strategy<Value = ScalarCurve> {
    (0.5f64..2.0, 0.0f64..0.4, 0.2f64..2.0)
        .prop_map(|(w0, a, nu)| ScalarCurve::parse(&format!("{w0} + {a}*sin({nu}*t)")).unwrap())
}

fn unit() -> impl Strategy<Value = f64> {
    -1.0f64..1.0
}

fn drift(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    v.iter().map(|x| (x - v[0]).abs()).fold(0.0, f64::max)
}

fn oscillator(omega: &ScalarCurve, s0: [f64; 2], grid: &[f64]) -> Trajectory {
    let field = oscillator_field(&OscillatorSpec::new(omega.clone()), 1).unwrap();
    let tight = IntegratorOptions::rk45(1e-13, 1e-12);
    integrate_ode(&field, &s0, grid[0], grid[grid.len() - 1], &tight).unwrap().resample(grid).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// W = x₁v₂ − x₂v₁, which is also the isotropic invariant F.
    #[test]
    fn wronskian_is_constant(w in omega(), s in [unit(), unit(), unit(), unit()]) {
        let field = oscillator_field(&OscillatorSpec::new(w), 2).unwrap();
        let traj = integrate_ode(&field, &s, 0.0, 10.0, &opts()).unwrap();
        let d = drift(traj.states().map(|s| wronskian(s[0], s[1], s[2], s[3])));
        prop_assert!(d <= 1e-8, "drift {}", d);
    }

    #[test]
    fn ermakov_invariant_is_conserved(w in omega(), k in 0.2f64..2.0, y0 in unit(), v in [unit(), unit()]) {
        let spec = ErmakovSpec::classical(w, k);
        let s0 = [1.0, y0, v[0], v[1]];
        let traj = integrate_ode(&ermakov_field(&spec), &s0, 0.0, 10.0, &opts()).unwrap();
        let d = drift(traj.states().map(|s| ermakov_invariant(k, [s[0], s[1], s[2], s[3]]).unwrap()));
        prop_assert!(d <= 1e-6, "drift {}", d);
    }

    #[test]
    fn generalized_integral_is_conserved(w in omega(), y0 in 0.5f64..1.5, v in [unit(), unit()]) {
        let spec = ErmakovSpec::new(
            w,
            liesys_core::Expression::parse_in("1 + u^2", "u").unwrap(),
            liesys_core::Expression::parse_in("u", "u").unwrap(),
        );
        let s0 = [1.0, y0, 0.3 * v[0], 0.3 * v[1]];
        let traj = integrate_ode(&ermakov_field(&spec), &s0, 0.0, 5.0, &opts()).unwrap();
        let d = drift(traj.states().map(|s| generalized_first_integral(&spec, [s[0], s[1], s[2], s[3]], 1e-13).unwrap()));
        prop_assert!(d <= 1e-6, "drift {}", d);
    }

    /// Invariants of the reconstructed triple (x, y, z) match the inputs,
    /// and the branch picked at t₀ stays valid on the whole interval.
    #[test]
    fn pinney_superposition_round_trips(
        w in omega(),
        xs in [unit(), unit()],
        zs in [unit(), unit()],
        c in 0.3f64..2.0,
        y0 in 0.5f64..2.0,
        vy0 in unit(),
    ) {
        let wr = wronskian(xs[0], xs[1], zs[0], zs[1]);
        prop_assume!(wr.abs() > 0.1);
        let (xs, zs) = if wr > 0.0 { (xs, zs) } else { (zs, xs) };
        let grid = uniform_grid(0.0, 4.0, 401);
        let x = oscillator(&w, xs, &grid);
        let z = oscillator(&w, zs, &grid);
        let inv = pinney_invariants([xs[0], y0, zs[0], xs[1], vy0, zs[1]], c).unwrap();
        prop_assert!(inv.discriminant() >= -1e-9);
        let branch = match_branch(&x, &z, &inv, y0, vy0).unwrap();
        let y = pinney_superpose(&x, &z, &inv, branch).unwrap();
        prop_assert!((y.state(0)[0] - y0).abs() <= 1e-9 && (y.state(0)[1] - vy0).abs() <= 1e-9);
        for i in (0..grid.len()).step_by(20) {
            let (a, b, d) = (x.state(i), y.state(i), z.state(i));
            let again = pinney_invariants([a[0], b[0], d[0], a[1], b[1], d[1]], c).unwrap();
            for (p, q) in [(again.i1, inv.i1), (again.i2, inv.i2), (again.w, inv.w)] {
                prop_assert!((p - q).abs() <= 1e-6, "t = {}: {} vs {}", grid[i], p, q);
            }
        }
    }

    #[test]
    fn linear_coefficients_reproduce_the_target(s1 in [unit(), unit()], s2 in [unit(), unit()], k in [unit(), unit()]) {
        prop_assume!(wronskian(s1[0], s1[1], s2[0], s2[1]).abs() > 0.05);
        let target = [k[0] * s1[0] + k[1] * s2[0], k[0] * s1[1] + k[1] * s2[1]];
        let (k1, k2) = coefficients_from_state(s1, s2, target).unwrap();
        prop_assert!((k1 - k[0]).abs() <= 1e-9 && (k2 - k[1]).abs() <= 1e-9);
    }
}

#[test]
fn wrong_branch_is_detected_or_differs() {
    // with c > 0 both branches give positive y; the wrong one must miss the data
    let w = ScalarCurve::constant(1.0);
    let grid = uniform_grid(0.0, 3.0, 301);
    let (xs, zs) = ([1.0, 0.2], [0.1, 1.0]);
    let x = oscillator(&w, xs, &grid);
    let z = oscillator(&w, zs, &grid);
    let (y0, vy0) = (1.3, 0.4);
    let inv = pinney_invariants([xs[0], y0, zs[0], xs[1], vy0, zs[1]], 1.0).unwrap();
    let right = match_branch(&x, &z, &inv, y0, vy0).unwrap();
    let wrong = if right == Branch::Plus { Branch::Minus } else { Branch::Plus };
    match pinney_superpose(&x, &z, &inv, wrong) {
        Ok(y) => assert!((y.state(0)[0] - y0).abs() > 1e-3),
        Err(e) => assert!(matches!(e, Error::NegativeRadicand { .. })),
    }
}
