//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use liesys_core::expr::{BinOp, Constant, Func, Node};
use liesys_core::groupflow::MatrixCurve;
use liesys_core::{Expression, ProjValue, RiccatiCoeffs, ScalarCurve};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// |a − b| / max(1, |b|).
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

const FUNCS: [Func; 7] = [Func::Sin, Func::Cos, Func::Tan, Func::Exp, Func::Log, Func::Sqrt, Func::Abs];
const OPS: [BinOp; 5] = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow];

fn random_leaf(rng: &mut StdRng) -> Node {
    match rng.gen_range(0..10) {
        0..=4 => Node::Var,
        5..=7 => Node::Num(rng.gen_range(1..=20) as f64 / 4.0),
        8 => Node::Const(Constant::Pi),
        _ => Node::Const(Constant::E),
    }
}

/// Random tree of depth at most `depth` with non-negative literals, so the
/// printed form reparses to the identical tree.
pub fn random_tree(rng: &mut StdRng, depth: usize) -> Node {
    if depth <= 1 || rng.gen_bool(0.25) {
        return random_leaf(rng);
    }
    match rng.gen_range(0..10) {
        0 => Node::neg(random_tree(rng, depth - 1)),
        1..=3 => Node::call(FUNCS[rng.gen_range(0..FUNCS.len())], random_tree(rng, depth - 1)),
        _ => {
            let op = OPS[rng.gen_range(0..OPS.len())];
            let lhs = random_tree(rng, depth - 1);
            let rhs = if op == BinOp::Pow && rng.gen_bool(0.7) {
                Node::Num([2.0, 3.0, 0.5, 1.5][rng.gen_range(0..4)])
            } else {
                random_tree(rng, depth - 1)
            };
            Node::bin(op, lhs, rhs)
        }
    }
}

/// `a + b·sin(w·t + p) + c·t` with coefficients bounded by `amp`.
pub fn random_smooth_source(rng: &mut StdRng, amp: f64) -> String {
    let a = rng.gen_range(-amp..amp);
    let b = rng.gen_range(-amp..amp) * 0.5;
    let w = rng.gen_range(0.5..2.0);
    let p = rng.gen_range(0.0..3.0);
    let c = rng.gen_range(-amp..amp) * 0.3;
    format!("{a} + {b}*sin({w}*t + {p}) + {c}*t")
}

pub fn random_smooth(rng: &mut StdRng, amp: f64) -> ScalarCurve {
    ScalarCurve::parse(&random_smooth_source(rng, amp)).unwrap()
}

/// Interval on which [`random_riccati`] solutions from [−0.5, 0.5] are
/// guaranteed pole-free.
pub const POLE_FREE: (f64, f64) = (0.0, 1.0);

/// Coefficients with |bᵢ| ≤ 0.54 on [0, 1]. Comparing with
/// ẏ = 0.54(1 + y + y²) from y = 0.5, no solution starting in [−0.5, 0.5]
/// reaches a pole before t ≈ 1.5.
pub fn random_riccati(rng: &mut StdRng) -> RiccatiCoeffs {
    RiccatiCoeffs { b0: random_smooth(rng, 0.3), b1: random_smooth(rng, 0.3), b2: random_smooth(rng, 0.3) }
}

/// Relative error for finite pairs, chordal distance otherwise.
pub fn proj_err(a: ProjValue, b: ProjValue) -> f64 {
    match (a, b) {
        (ProjValue::Finite(x), ProjValue::Finite(y)) => rel_err(x, y),
        _ => a.chordal_distance(b),
    }
}

/// Polynomial α, β, γ with δ = (1 + βγ)/α, α ≥ 0.5 on [0, 1].
pub fn random_unit_curve(rng: &mut StdRng) -> MatrixCurve {
    let mut poly = |c0: f64| {
        let (a, b) = (rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2));
        format!("{c0} + {a}*t + {b}*t^2")
    };
    let alpha = poly(1.0);
    let beta = poly(0.3);
    let gamma = poly(-0.4);
    let delta = format!("(1 + ({beta})*({gamma}))/({alpha})");
    MatrixCurve::parse(&alpha, &beta, &gamma, &delta).unwrap()
}

/// Outcome of comparing a symbolic derivative against central differences.
pub enum DerivCheck {
    /// Value or stencil hit a domain error, or the difference quotient is
    /// too poorly conditioned to serve as an oracle.
    Skipped,
    Checked { symbolic: f64, numeric: f64 },
}

/// Compares `d/dt e` at `t` with the central difference of step `h`.
///
/// The difference quotient is trusted only when it is well conditioned on
/// its own terms: rounding (≈ ε·|e|/h) must be small against the quotient,
/// and the quotients at h/2, h and 2h must agree the way a smooth function's
/// do (error shrinking by ~4 per halving). The symbolic value plays no part
/// in the decision.
pub fn derivative_check(e: &Expression, de: &Expression, t: f64, h: f64) -> DerivCheck {
    let offsets = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
    let vals: Option<Vec<f64>> = offsets.iter().map(|&k| e.eval(t + k * h).ok()).collect();
    let Some(v) = vals else { return DerivCheck::Skipped };
    let Ok(symbolic) = de.eval(t) else { return DerivCheck::Skipped };
    let half = (v[3] - v[2]) / h;
    let numeric = (v[4] - v[1]) / (2.0 * h);
    let wide = (v[5] - v[0]) / (4.0 * h);
    let scale = 1.0 + numeric.abs();
    let rounding = 4.0 * f64::EPSILON * v.iter().fold(0.0f64, |m, x| m.max(x.abs())) / (0.5 * h);
    let truncation = (wide - numeric).abs() / 3.0;
    let converging = (numeric - half).abs() <= 0.5 * (wide - numeric).abs() + 2.0 * rounding;
    if !symbolic.is_finite() || rounding > 1e-7 * scale || truncation > 1e-7 * scale || !converging {
        return DerivCheck::Skipped;
    }
    DerivCheck::Checked { symbolic, numeric }
}
