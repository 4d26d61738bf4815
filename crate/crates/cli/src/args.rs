use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "liesys", version, about = "Solve, superpose and check SL(2,R) Lie systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Integrate a system and write its trajectory
    Solve(Params),
    /// Combine solutions read from CSV files into a new one
    Superpose(Params),
    /// Track first integrals along a solution
    Invariant(Params),
    /// Apply a time-dependent SL(2) transformation to Riccati coefficients
    Transform(Params),
    /// Reduce a Riccati equation with a known particular solution
    Reduce(Params),
    /// Test the scaling integrability condition
    CheckIntegrability(Params),
    /// Check the commutator table of a system's generators
    VerifyAlgebra(Params),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::Superpose(_) => "superpose",
            Command::Invariant(_) => "invariant",
            Command::Transform(_) => "transform",
            Command::Reduce(_) => "reduce",
            Command::CheckIntegrability(_) => "check-integrability",
            Command::VerifyAlgebra(_) => "verify-algebra",
        }
    }

    pub fn params(&self) -> &Params {
        match self {
            Command::Solve(p)
            | Command::Superpose(p)
            | Command::Invariant(p)
            | Command::Transform(p)
            | Command::Reduce(p)
            | Command::CheckIntegrability(p)
            | Command::VerifyAlgebra(p) => p,
        }
    }

    pub fn params_mut(&mut self) -> &mut Params {
        match self {
            Command::Solve(p)
            | Command::Superpose(p)
            | Command::Invariant(p)
            | Command::Transform(p)
            | Command::Reduce(p)
            | Command::CheckIntegrability(p)
            | Command::VerifyAlgebra(p) => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum System {
    Riccati,
    Oscillator,
    Pinney,
    Ermakov,
    Group,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rk45,
    Rk4,
}

/// Every flag any command understands. Commands validate what they need.
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    /// System to work on (same as --system)
    #[arg(value_enum, value_name = "SYSTEM")]
    pub system_arg: Option<System>,
    #[arg(long, value_enum)]
    pub system: Option<System>,
    /// key = value file supplying defaults for any flag
    #[arg(long)]
    pub config: Option<PathBuf>,

    // Riccati coefficients and initial data
    #[arg(long, allow_hyphen_values = true)]
    pub b0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b2: Option<String>,
    /// Initial value; `inf` is accepted for Riccati equations
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub vy0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub vz0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    /// CSV output path
    #[arg(long)]
    pub out: Option<PathBuf>,

    // second-order systems
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<String>,
    /// Pinney constant
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Superposition constant; doubles as the Pinney constant when --c is absent
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Ermakov coupling f(u)
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Ermakov coupling g(u)
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,

    // transformation A(t)
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,

    // integrability target
    #[arg(long, allow_hyphen_values = true)]
    pub c0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c2: Option<f64>,

    // superposition
    /// Comma-separated CSV inputs
    #[arg(long, value_delimiter = ',')]
    pub inputs: Option<Vec<PathBuf>>,
    #[arg(long, allow_hyphen_values = true)]
    pub k1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub kprime: Option<f64>,
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,

    // sampling and checks
    /// Number of check points
    #[arg(long)]
    pub points: Option<usize>,
    /// Output on this many uniform samples instead of integrator nodes
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,

    // integrator
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub max_magnitude: Option<f64>,
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("invalid value `{value}` for {key}"))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, String> {
    T::from_str(value, true).map_err(|_| format!("invalid value `{value}` for {key}"))
}

fn fill<T>(slot: &mut Option<T>, parsed: Result<T, String>) -> Result<(), String> {
    let v = parsed?;
    if slot.is_none() {
        *slot = Some(v);
    }
    Ok(())
}

impl Params {
    pub fn system(&self) -> Option<System> {
        self.system.or(self.system_arg)
    }

    /// Sets `key` from a config file unless the flag was already given.
    /// Keys are flag names; `_` and `-` are interchangeable.
    pub fn fill_default(&mut self, key: &str, value: &str) -> Result<(), String> {
        let key = key.replace('_', "-");
        let text = || Ok(value.to_string());
        match key.as_str() {
            "system" => fill(&mut self.system, parse_enum("system", value)),
            "b0" => fill(&mut self.b0, text()),
            "b1" => fill(&mut self.b1, text()),
            "b2" => fill(&mut self.b2, text()),
            "x0" => fill(&mut self.x0, text()),
            "v0" => fill(&mut self.v0, parse_num(&key, value)),
            "y0" => fill(&mut self.y0, parse_num(&key, value)),
            "vy0" => fill(&mut self.vy0, parse_num(&key, value)),
            "z0" => fill(&mut self.z0, parse_num(&key, value)),
            "vz0" => fill(&mut self.vz0, parse_num(&key, value)),
            "t0" => fill(&mut self.t0, parse_num(&key, value)),
            "t1" => fill(&mut self.t1, parse_num(&key, value)),
            "out" => fill(&mut self.out, Ok(PathBuf::from(value))),
            "omega" => fill(&mut self.omega, text()),
            "mass" => fill(&mut self.mass, text()),
            "c" => fill(&mut self.c, parse_num(&key, value)),
            "k" => fill(&mut self.k, parse_num(&key, value)),
            "f" => fill(&mut self.f, text()),
            "g" => fill(&mut self.g, text()),
            "alpha" => fill(&mut self.alpha, text()),
            "beta" => fill(&mut self.beta, text()),
            "gamma" => fill(&mut self.gamma, text()),
            "delta" => fill(&mut self.delta, text()),
            "c0" => fill(&mut self.c0, parse_num(&key, value)),
            "c2" => fill(&mut self.c2, parse_num(&key, value)),
            "inputs" => fill(&mut self.inputs, Ok(value.split(',').map(|s| PathBuf::from(s.trim())).collect())),
            "k1" => fill(&mut self.k1, parse_num(&key, value)),
            "k2" => fill(&mut self.k2, parse_num(&key, value)),
            "kprime" => fill(&mut self.kprime, parse_num(&key, value)),
            "branch" => fill(&mut self.branch, parse_enum("branch", value)),
            "points" => fill(&mut self.points, parse_num(&key, value)),
            "samples" => fill(&mut self.samples, parse_num(&key, value)),
            "tol" => fill(&mut self.tol, parse_num(&key, value)),
            "seed" => fill(&mut self.seed, parse_num(&key, value)),
            "method" => fill(&mut self.method, parse_enum("method", value)),
            "abs-tol" => fill(&mut self.abs_tol, parse_num(&key, value)),
            "rel-tol" => fill(&mut self.rel_tol, parse_num(&key, value)),
            "step" => fill(&mut self.step, parse_num(&key, value)),
            "max-steps" => fill(&mut self.max_steps, parse_num(&key, value)),
            "max-magnitude" => fill(&mut self.max_magnitude, parse_num(&key, value)),
            _ => Err(format!("unknown key `{key}`")),
        }
    }
}
