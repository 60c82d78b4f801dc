//! Single-variable real expressions: parsing, evaluation, printing and
//! symbolic differentiation.
//!
//! ```
//! use bisoliton::expr::Expr;
//! let f = Expr::parse("r^2 + 1", "r").unwrap();
//! assert_eq!(f.eval(3.0).unwrap(), 10.0);
//! let df = f.derivative();
//! assert_eq!(df.eval(3.0).unwrap(), 6.0);
//! ```
//!
//! `abs` is supported (its derivative is `sign`, which evaluates to 0 at the
//! origin), but generating functions built from it are not differentiable
//! everywhere and are best avoided.

mod deriv;
mod parser;

use std::fmt;

pub use parser::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
    /// Derivative of `abs`; `sign(0) = 0`.
    Sign,
}

impl Func {
    pub const ALL: [Func; 11] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
        Func::Sign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sign => "sign",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree over one variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var,
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression together with the name of its variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    var: String,
    root: Node,
}

/// Evaluation left the real domain of an elementary function.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{reason} in `{subexpr}` at {var} = {at}")]
pub struct DomainError {
    pub subexpr: String,
    pub reason: &'static str,
    pub var: String,
    pub at: f64,
}

impl Expr {
    /// Parses `src` with `var` as the only free identifier.
    ///
    /// The constants `pi` and `e` are recognised unless shadowed by the
    /// variable name.
    pub fn parse(src: &str, var: &str) -> Result<Expr, ParseError> {
        let root = parser::parse(src, var)?;
        Ok(Expr { var: var.to_string(), root })
    }

    pub fn from_node(root: Node, var: &str) -> Expr {
        Expr { var: var.to_string(), root }
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// The identity function `var`.
    pub fn identity(var: &str) -> Expr {
        Expr::from_node(Node::Var, var)
    }

    pub fn constant(value: f64, var: &str) -> Expr {
        Expr::from_node(Node::Num(value), var)
    }

    /// Same tree, different variable name.
    pub fn renamed(&self, var: &str) -> Expr {
        Expr { var: var.to_string(), root: self.root.clone() }
    }

    pub fn eval(&self, x: f64) -> Result<f64, DomainError> {
        eval_node(&self.root, x).map_err(|(node, reason)| DomainError {
            subexpr: print_node(node, &self.var),
            reason,
            var: self.var.clone(),
            at: x,
        })
    }

    /// Exact symbolic derivative with light constant folding.
    pub fn derivative(&self) -> Expr {
        Expr { var: self.var.clone(), root: deriv::differentiate(&self.root) }
    }

    /// Combines two expressions over the same variable.
    pub fn combine(op: BinOp, a: &Expr, b: &Expr) -> Expr {
        Expr {
            var: a.var.clone(),
            root: Node::Bin(op, Box::new(a.root.clone()), Box::new(b.root.clone())),
        }
    }

    pub fn node_count(&self) -> usize {
        fn count(n: &Node) -> usize {
            match n {
                Node::Num(_) | Node::Var => 1,
                Node::Neg(a) | Node::Call(_, a) => 1 + count(a),
                Node::Bin(_, a, b) => 1 + count(a) + count(b),
            }
        }
        count(&self.root)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_node(&self.root, &self.var, &mut out);
        f.write_str(&out)
    }
}

type NodeResult<'a> = Result<f64, (&'a Node, &'static str)>;

fn eval_node(node: &Node, x: f64) -> NodeResult<'_> {
    let v = match node {
        Node::Num(c) => *c,
        Node::Var => x,
        Node::Neg(a) => -eval_node(a, x)?,
        Node::Bin(op, a, b) => {
            let l = eval_node(a, x)?;
            let r = eval_node(b, x)?;
            match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => {
                    if r == 0.0 {
                        return Err((node, "division by zero"));
                    }
                    l / r
                }
                BinOp::Pow => pow(l, r).map_err(|why| (node, why))?,
            }
        }
        Node::Call(func, a) => {
            let u = eval_node(a, x)?;
            match func {
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Tan => u.tan(),
                Func::Sinh => u.sinh(),
                Func::Cosh => u.cosh(),
                Func::Tanh => u.tanh(),
                Func::Exp => u.exp(),
                Func::Log => {
                    if u <= 0.0 {
                        return Err((node, "log of a non-positive value"));
                    }
                    u.ln()
                }
                Func::Sqrt => {
                    if u < 0.0 {
                        return Err((node, "sqrt of a negative value"));
                    }
                    u.sqrt()
                }
                Func::Abs => u.abs(),
                Func::Sign => {
                    if u > 0.0 {
                        1.0
                    } else if u < 0.0 {
                        -1.0
                    } else {
                        0.0
                    }
                }
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err((node, "non-finite result"))
    }
}

fn pow(base: f64, exp: f64) -> Result<f64, &'static str> {
    if exp.fract() == 0.0 && exp.abs() <= i32::MAX as f64 {
        if base == 0.0 && exp < 0.0 {
            return Err("zero raised to a negative power");
        }
        return Ok(base.powi(exp as i32));
    }
    if base < 0.0 {
        return Err("negative base with non-integer exponent");
    }
    if base == 0.0 && exp < 0.0 {
        return Err("zero raised to a negative power");
    }
    Ok(base.powf(exp))
}

// Precedence levels used by the printer; larger binds tighter.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(node: &Node) -> u8 {
    match node {
        // negative literals are printed in parentheses
        Node::Num(_) | Node::Var | Node::Call(..) => PREC_ATOM,
        Node::Neg(_) => PREC_NEG,
        Node::Bin(BinOp::Add | BinOp::Sub, ..) => PREC_ADD,
        Node::Bin(BinOp::Mul | BinOp::Div, ..) => PREC_MUL,
        Node::Bin(BinOp::Pow, ..) => PREC_POW,
    }
}

fn print_node(node: &Node, var: &str) -> String {
    let mut out = String::new();
    write_node(node, var, &mut out);
    out
}

fn write_num(c: f64, out: &mut String) {
    // Rust's shortest round-trip formatting; never uses exponent notation.
    if c.is_sign_negative() {
        out.push_str(&format!("(-{})", -c));
    } else {
        out.push_str(&format!("{c}"));
    }
}

fn write_wrapped(node: &Node, var: &str, wrap: bool, out: &mut String) {
    if wrap {
        out.push('(');
        write_node(node, var, out);
        out.push(')');
    } else {
        write_node(node, var, out);
    }
}

fn write_node(node: &Node, var: &str, out: &mut String) {
    match node {
        Node::Num(c) => write_num(*c, out),
        Node::Var => out.push_str(var),
        Node::Neg(a) => {
            out.push('-');
            write_wrapped(a, var, precedence(a) < PREC_NEG, out);
        }
        Node::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_node(a, var, out);
            out.push(')');
        }
        Node::Bin(op, a, b) => {
            let p = precedence(node);
            let (wrap_l, wrap_r) = if *op == BinOp::Pow {
                (precedence(a) <= PREC_POW, precedence(b) < PREC_NEG)
            } else {
                (precedence(a) < p, precedence(b) <= p)
            };
            write_wrapped(a, var, wrap_l, out);
            if *op == BinOp::Pow {
                out.push(op.symbol());
            } else {
                out.push(' ');
                out.push(op.symbol());
                out.push(' ');
            }
            write_wrapped(b, var, wrap_r, out);
        }
    }
}
