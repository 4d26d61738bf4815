use super::{BinOp, Func, Node};

fn is_num(node: &Node, value: f64) -> bool {
    matches!(node, Node::Num(v) if *v == value)
}

fn add(a: Node, b: Node) -> Node {
    if is_num(&a, 0.0) {
        return b;
    }
    if is_num(&b, 0.0) {
        return a;
    }
    Node::bin(BinOp::Add, a, b)
}

fn sub(a: Node, b: Node) -> Node {
    if is_num(&b, 0.0) {
        return a;
    }
    if is_num(&a, 0.0) {
        return neg(b);
    }
    Node::bin(BinOp::Sub, a, b)
}

fn mul(a: Node, b: Node) -> Node {
    if is_num(&a, 0.0) || is_num(&b, 0.0) {
        return Node::Num(0.0);
    }
    if is_num(&a, 1.0) {
        return b;
    }
    if is_num(&b, 1.0) {
        return a;
    }
    Node::bin(BinOp::Mul, a, b)
}

fn div(a: Node, b: Node) -> Node {
    if is_num(&a, 0.0) {
        return Node::Num(0.0);
    }
    if is_num(&b, 1.0) {
        return a;
    }
    Node::bin(BinOp::Div, a, b)
}

fn neg(a: Node) -> Node {
    match a {
        Node::Num(v) if v == 0.0 => Node::Num(0.0),
        Node::Neg(inner) => *inner,
        other => Node::neg(other),
    }
}

fn pow(a: Node, b: Node) -> Node {
    if is_num(&b, 1.0) {
        return a;
    }
    Node::bin(BinOp::Pow, a, b)
}

/// d/dt of `node` by the usual recursive rules. No algebraic simplification
/// beyond dropping zero and unit factors.
pub(super) fn derivative(node: &Node) -> Node {
    match node {
        Node::Num(_) | Node::Const(_) => Node::Num(0.0),
        Node::Var => Node::Num(1.0),
        Node::Neg(a) => neg(derivative(a)),
        Node::Bin(op, a, b) => {
            let (a, b) = (a.as_ref(), b.as_ref());
            match op {
                BinOp::Add => add(derivative(a), derivative(b)),
                BinOp::Sub => sub(derivative(a), derivative(b)),
                BinOp::Mul => add(
                    mul(derivative(a), b.clone()),
                    mul(a.clone(), derivative(b)),
                ),
                BinOp::Div => {
                    // (a'b - ab') / b^2
                    let top = sub(
                        mul(derivative(a), b.clone()),
                        mul(a.clone(), derivative(b)),
                    );
                    div(top, pow(b.clone(), Node::Num(2.0)))
                }
                BinOp::Pow => power_rule(a, b),
            }
        }
        Node::Call(func, a) => {
            let inner = derivative(a);
            if is_num(&inner, 0.0) {
                return Node::Num(0.0);
            }
            let a = a.as_ref().clone();
            let outer = match func {
                Func::Sin => Node::call(Func::Cos, a),
                Func::Cos => neg(Node::call(Func::Sin, a)),
                Func::Tan => div(
                    Node::Num(1.0),
                    pow(Node::call(Func::Cos, a), Node::Num(2.0)),
                ),
                Func::Exp => Node::call(Func::Exp, a),
                Func::Log => div(Node::Num(1.0), a),
                Func::Sqrt => div(
                    Node::Num(1.0),
                    mul(Node::Num(2.0), Node::call(Func::Sqrt, a)),
                ),
                // sign(a) written as a/abs(a); undefined at 0 like the kink itself
                Func::Abs => div(a.clone(), Node::call(Func::Abs, a)),
            };
            mul(outer, inner)
        }
    }
}

fn power_rule(base: &Node, exponent: &Node) -> Node {
    let db = derivative(base);
    let de = derivative(exponent);
    if exponent.is_constant() {
        // n * a^(n-1) * a'
        let reduced = match exponent {
            Node::Num(n) if *n >= 1.0 => Node::Num(n - 1.0),
            _ => Node::bin(BinOp::Sub, exponent.clone(), Node::Num(1.0)),
        };
        return mul(
            mul(exponent.clone(), pow(base.clone(), reduced)),
            db,
        );
    }
    let whole = Node::bin(BinOp::Pow, base.clone(), exponent.clone());
    if base.is_constant() {
        // a^v * ln(a) * v'
        return mul(mul(whole, Node::call(Func::Log, base.clone())), de);
    }
    // a^v * (v' ln a + v a'/a)
    mul(
        whole,
        add(
            mul(de, Node::call(Func::Log, base.clone())),
            div(mul(exponent.clone(), db), base.clone()),
        ),
    )
}
