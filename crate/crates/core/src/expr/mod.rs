//! Scalar expressions in a single variable.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | var | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | tan | exp | log | sqrt | abs
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-t^2`
//! is `-(t^2)` and `2^3^2` is `2^(3^2)`. The variable is `t` unless the
//! expression was parsed with [`Expression::parse_in`].

mod diff;
mod display;
mod parse;

use alloc::boxed::Box;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::math;

pub use parse::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => core::f64::consts::PI,
            Constant::E => core::f64::consts::E,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }
}

/// Syntax tree node.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var,
    Const(Constant),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    pub fn bin(op: BinOp, lhs: Node, rhs: Node) -> Node {
        Node::Bin(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Node) -> Node {
        Node::Call(func, Box::new(arg))
    }

    pub fn neg(inner: Node) -> Node {
        Node::Neg(Box::new(inner))
    }

    /// True when the subtree does not mention the variable.
    pub fn is_constant(&self) -> bool {
        match self {
            Node::Num(_) | Node::Const(_) => true,
            Node::Var => false,
            Node::Neg(a) | Node::Call(_, a) => a.is_constant(),
            Node::Bin(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Num(_) | Node::Var | Node::Const(_) => 1,
            Node::Neg(a) | Node::Call(_, a) => 1 + a.depth(),
            Node::Bin(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn eval(&self, t: f64) -> Result<f64> {
        let v = match self {
            Node::Num(v) => *v,
            Node::Var => t,
            Node::Const(c) => c.value(),
            Node::Neg(a) => -a.eval(t)?,
            Node::Bin(op, a, b) => {
                let x = a.eval(t)?;
                let y = b.eval(t)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(Error::Domain { t, what: "division by zero" });
                        }
                        x / y
                    }
                    BinOp::Pow => power(x, y, t)?,
                }
            }
            Node::Call(f, a) => {
                let x = a.eval(t)?;
                match f {
                    Func::Sin => math::sin(x),
                    Func::Cos => math::cos(x),
                    Func::Tan => math::tan(x),
                    Func::Exp => math::exp(x),
                    Func::Log => {
                        if x <= 0.0 {
                            return Err(Error::Domain { t, what: "log of non-positive value" });
                        }
                        math::ln(x)
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(Error::Domain { t, what: "sqrt of negative value" });
                        }
                        math::sqrt(x)
                    }
                    Func::Abs => x.abs(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { t })
        }
    }
}

fn power(base: f64, exponent: f64, t: f64) -> Result<f64> {
    if base < 0.0 && math::trunc(exponent) != exponent {
        return Err(Error::Domain { t, what: "non-integer power of negative base" });
    }
    if base == 0.0 && exponent < 0.0 {
        return Err(Error::Domain { t, what: "division by zero" });
    }
    Ok(math::pow(base, exponent))
}

/// A parsed expression together with the name of its free variable.
///
/// Immutable once built; evaluation takes `&self` and is safe to share
/// across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Node,
    var: String,
}

impl Expression {
    /// Parses `source` with `t` as the variable.
    pub fn parse(source: &str) -> Result<Self> {
        Self::parse_in(source, "t")
    }

    /// Parses `source` with `var` as the variable name (`u` for the
    /// Ermakov coupling functions, for instance).
    pub fn parse_in(source: &str, var: &str) -> Result<Self> {
        let root = parse::parse_with_var(source, var)?;
        Ok(Expression { root, var: var.into() })
    }

    pub fn from_node(root: Node, var: &str) -> Self {
        Expression { root, var: var.into() }
    }

    pub fn constant(value: f64) -> Self {
        Expression::from_node(Node::Num(value), "t")
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn is_constant(&self) -> bool {
        self.root.is_constant()
    }

    /// Evaluates at `t` in IEEE double arithmetic.
    ///
    /// Poles, logs of non-positive values, square roots of negatives and
    /// non-integer powers of negative bases are domain errors carrying `t`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.root.eval(t)
    }

    /// Exact symbolic derivative with respect to the variable.
    pub fn differentiate(&self) -> Expression {
        Expression {
            root: diff::derivative(&self.root),
            var: self.var.clone(),
        }
    }
}

impl core::fmt::Display for Expression {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        display::write_node(f, &self.root, &self.var)
    }
}

impl core::str::FromStr for Expression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expression::parse(s)
    }
}
