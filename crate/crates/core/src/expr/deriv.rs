use super::{BinOp, Func, Node};

fn num(c: f64) -> Node {
    Node::Num(c)
}

fn is_num(n: &Node, c: f64) -> bool {
    matches!(n, Node::Num(v) if *v == c)
}

fn constant_value(n: &Node) -> Option<f64> {
    match n {
        Node::Num(c) => Some(*c),
        Node::Neg(a) => constant_value(a).map(|c| -c),
        _ => None,
    }
}

fn contains_var(n: &Node) -> bool {
    match n {
        Node::Num(_) => false,
        Node::Var => true,
        Node::Neg(a) | Node::Call(_, a) => contains_var(a),
        Node::Bin(_, a, b) => contains_var(a) || contains_var(b),
    }
}

fn neg(a: Node) -> Node {
    match a {
        Node::Num(c) => num(-c),
        Node::Neg(inner) => *inner,
        other => Node::Neg(Box::new(other)),
    }
}

fn add(a: Node, b: Node) -> Node {
    if is_num(&a, 0.0) {
        return b;
    }
    if is_num(&b, 0.0) {
        return a;
    }
    if let (Node::Num(x), Node::Num(y)) = (&a, &b) {
        return num(x + y);
    }
    if let Node::Neg(nb) = b {
        return Node::Bin(BinOp::Sub, Box::new(a), nb);
    }
    Node::Bin(BinOp::Add, Box::new(a), Box::new(b))
}

fn sub(a: Node, b: Node) -> Node {
    if is_num(&b, 0.0) {
        return a;
    }
    if is_num(&a, 0.0) {
        return neg(b);
    }
    if let (Node::Num(x), Node::Num(y)) = (&a, &b) {
        return num(x - y);
    }
    Node::Bin(BinOp::Sub, Box::new(a), Box::new(b))
}

fn mul(a: Node, b: Node) -> Node {
    if is_num(&a, 0.0) || is_num(&b, 0.0) {
        return num(0.0);
    }
    if is_num(&a, 1.0) {
        return b;
    }
    if is_num(&b, 1.0) {
        return a;
    }
    if is_num(&a, -1.0) {
        return neg(b);
    }
    if is_num(&b, -1.0) {
        return neg(a);
    }
    if let (Node::Num(x), Node::Num(y)) = (&a, &b) {
        return num(x * y);
    }
    Node::Bin(BinOp::Mul, Box::new(a), Box::new(b))
}

fn div(a: Node, b: Node) -> Node {
    if is_num(&a, 0.0) {
        return num(0.0);
    }
    if is_num(&b, 1.0) {
        return a;
    }
    Node::Bin(BinOp::Div, Box::new(a), Box::new(b))
}

fn pow(a: Node, b: Node) -> Node {
    if is_num(&b, 1.0) {
        return a;
    }
    if is_num(&b, 0.0) {
        return num(1.0);
    }
    Node::Bin(BinOp::Pow, Box::new(a), Box::new(b))
}

fn call(f: Func, a: Node) -> Node {
    Node::Call(f, Box::new(a))
}

pub(super) fn differentiate(node: &Node) -> Node {
    match node {
        Node::Num(_) => num(0.0),
        Node::Var => num(1.0),
        Node::Neg(a) => neg(differentiate(a)),
        Node::Bin(op, a, b) => {
            let (u, v) = (a.as_ref(), b.as_ref());
            match op {
                BinOp::Add => add(differentiate(u), differentiate(v)),
                BinOp::Sub => sub(differentiate(u), differentiate(v)),
                BinOp::Mul => add(mul(differentiate(u), v.clone()), mul(u.clone(), differentiate(v))),
                BinOp::Div => {
                    // (u'v - uv') / v^2
                    let numer = sub(mul(differentiate(u), v.clone()), mul(u.clone(), differentiate(v)));
                    div(numer, pow(v.clone(), num(2.0)))
                }
                BinOp::Pow => differentiate_pow(u, v),
            }
        }
        Node::Call(f, a) => {
            let u = a.as_ref().clone();
            let du = differentiate(a);
            let outer = match f {
                Func::Sin => call(Func::Cos, u),
                Func::Cos => neg(call(Func::Sin, u)),
                // 1 + tan(u)^2
                Func::Tan => add(num(1.0), pow(call(Func::Tan, u), num(2.0))),
                Func::Sinh => call(Func::Cosh, u),
                Func::Cosh => call(Func::Sinh, u),
                // 1 - tanh(u)^2
                Func::Tanh => sub(num(1.0), pow(call(Func::Tanh, u), num(2.0))),
                Func::Exp => call(Func::Exp, u),
                Func::Log => div(num(1.0), u),
                Func::Sqrt => div(num(1.0), mul(num(2.0), call(Func::Sqrt, u))),
                Func::Abs => call(Func::Sign, u),
                Func::Sign => num(0.0),
            };
            mul(outer, du)
        }
    }
}

fn differentiate_pow(u: &Node, v: &Node) -> Node {
    if !contains_var(v) {
        // c * u^(c-1) * u'
        let du = differentiate(u);
        let lowered = match constant_value(v) {
            Some(c) => pow(u.clone(), num(c - 1.0)),
            None => pow(u.clone(), sub(v.clone(), num(1.0))),
        };
        return mul(mul(v.clone(), lowered), du);
    }
    if !contains_var(u) {
        // u^v * log(u) * v'
        let this = pow(u.clone(), v.clone());
        return mul(mul(this, call(Func::Log, u.clone())), differentiate(v));
    }
    // u^v * (v' log(u) + v u'/u)
    let this = pow(u.clone(), v.clone());
    let inner = add(
        mul(differentiate(v), call(Func::Log, u.clone())),
        div(mul(v.clone(), differentiate(u)), u.clone()),
    );
    mul(this, inner)
}
