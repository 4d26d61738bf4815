use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the toolkit can report.
///
/// Each variant renders with its own message prefix (`syntax error`,
/// `domain error`, ...) so front ends can surface the kind verbatim.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: Expected },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("domain error at t = {t}: {what}")]
    Domain { t: f64, what: &'static str },
    #[error("non-finite result at t = {t}")]
    NonFinite { t: f64 },
    #[error("blow-up: state exceeded {bound:e} after last good t = {t}")]
    BlowUp { t: f64, bound: f64 },
    #[error("max steps exceeded: {steps} steps taken, stopped at t = {t}")]
    MaxSteps { t: f64, steps: usize },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("quadrature non-convergence on [{a}, {b}]")]
    NonConvergence { a: f64, b: f64 },
    #[error("singularity at t = {t}: {what}")]
    Singularity { t: f64, what: &'static str },
    #[error("singular state: {0}")]
    SingularState(&'static str),
    #[error("invalid curve at t = {t}: determinant {det} is not 1")]
    InvalidCurve { t: f64, det: f64 },
    #[error("not a solution: residual {residual:e} at t = {t}")]
    NotASolution { t: f64, residual: f64 },
    #[error("coincident solutions: superposition needs pairwise distinct inputs")]
    CoincidentSolutions,
    #[error("zero coefficient at t = {t}: b0*b2 vanishes")]
    ZeroCoefficient { t: f64 },
    #[error("sign error at t = {t}: c0*c2/(b0*b2) is negative")]
    SignMismatch { t: f64 },
    #[error("degenerate scale at t = {t}")]
    DegenerateScale { t: f64 },
    #[error("degenerate wronskian: |W| = {w:e}")]
    DegenerateWronskian { w: f64 },
    #[error("negative discriminant: 4*I1*I2 - c*W^2 = {value:e}")]
    NegativeDiscriminant { value: f64 },
    #[error("negative radicand at t = {t}: {value:e}")]
    NegativeRadicand { t: f64, value: f64 },
    #[error("zero crossing at t = {t}")]
    ZeroCrossing { t: f64 },
    #[error("sign crossing: integration path from u = 1 to u = {u} passes through 0")]
    SignCrossing { u: f64 },
    #[error("out of range: t = {t} outside [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

/// Set of tokens a parser would have accepted at the failing offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected(pub Vec<&'static str>);

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [] => f.write_str("nothing"),
            [one] => f.write_str(one),
            [init @ .., last] => {
                for (i, tok) in init.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(tok)?;
                }
                write!(f, " or {last}")
            }
        }
    }
}
