use core::fmt::{self, Write};

use super::{BinOp, Node};

fn precedence(node: &Node) -> u8 {
    match node {
        Node::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Node::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Node::Neg(_) => 3,
        Node::Bin(BinOp::Pow, ..) => 4,
        Node::Num(_) | Node::Var | Node::Const(_) | Node::Call(..) => 5,
    }
}

/// Writes `node` with the fewest parentheses that reparse to the same tree.
pub(super) fn write_node(f: &mut fmt::Formatter<'_>, node: &Node, var: &str) -> fmt::Result {
    write_prec(f, node, var, 0)
}

fn write_prec(f: &mut fmt::Formatter<'_>, node: &Node, var: &str, min: u8) -> fmt::Result {
    let wrap = precedence(node) < min;
    if wrap {
        f.write_char('(')?;
    }
    match node {
        // Negative literals only arise from folding; print them as a group.
        Node::Num(v) if v.is_sign_negative() => write!(f, "({v})")?,
        Node::Num(v) => write!(f, "{v}")?,
        Node::Var => f.write_str(var)?,
        Node::Const(c) => f.write_str(c.name())?,
        Node::Neg(a) => {
            f.write_char('-')?;
            write_prec(f, a, var, 3)?;
        }
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_prec(f, a, var, 0)?;
            f.write_char(')')?;
        }
        Node::Bin(op, a, b) => {
            let (sym, lhs_min, rhs_min) = match op {
                BinOp::Add => (" + ", 1, 2),
                BinOp::Sub => (" - ", 1, 2),
                BinOp::Mul => ("*", 2, 3),
                BinOp::Div => ("/", 2, 3),
                BinOp::Pow => ("^", 5, 3),
            };
            write_prec(f, a, var, lhs_min)?;
            f.write_str(sym)?;
            write_prec(f, b, var, rhs_min)?;
        }
    }
    if wrap {
        f.write_char(')')?;
    }
    Ok(())
}
