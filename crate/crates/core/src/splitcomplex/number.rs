use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::expr::Expr;

/// `a + k′b` with `k′² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SplitComplex {
    pub a: f64,
    pub b: f64,
}

impl SplitComplex {
    pub const ONE: SplitComplex = SplitComplex { a: 1.0, b: 0.0 };
    pub const K: SplitComplex = SplitComplex { a: 0.0, b: 1.0 };

    pub const fn new(a: f64, b: f64) -> Self {
        SplitComplex { a, b }
    }

    pub fn conj(self) -> Self {
        SplitComplex { a: self.a, b: -self.b }
    }

    /// `z z̄ = a² − b²`.
    pub fn modulus_sq(self) -> f64 {
        self.a * self.a - self.b * self.b
    }

    /// Null coordinates `(a + b, a − b)`, in which multiplication is componentwise.
    pub fn null_coords(self) -> (f64, f64) {
        (self.a + self.b, self.a - self.b)
    }

    pub fn from_null_coords(p: f64, m: f64) -> Self {
        SplitComplex { a: 0.5 * (p + m), b: 0.5 * (p - m) }
    }
}

impl fmt::Display for SplitComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}k'", self.a, self.b)
    }
}

impl Add for SplitComplex {
    type Output = SplitComplex;
    fn add(self, o: SplitComplex) -> SplitComplex {
        SplitComplex { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for SplitComplex {
    type Output = SplitComplex;
    fn sub(self, o: SplitComplex) -> SplitComplex {
        SplitComplex { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for SplitComplex {
    type Output = SplitComplex;
    fn neg(self) -> SplitComplex {
        SplitComplex { a: -self.a, b: -self.b }
    }
}

impl Mul for SplitComplex {
    type Output = SplitComplex;
    fn mul(self, o: SplitComplex) -> SplitComplex {
        SplitComplex { a: self.a * o.a + self.b * o.b, b: self.a * o.b + self.b * o.a }
    }
}

pub fn sc_add(z: SplitComplex, w: SplitComplex) -> SplitComplex {
    z + w
}

pub fn sc_mul(z: SplitComplex, w: SplitComplex) -> SplitComplex {
    z * w
}

pub fn sc_conj(z: SplitComplex) -> SplitComplex {
    z.conj()
}

/// The split-holomorphic extension of a real function:
/// `f(a + k′b) = ½[f(a+b) + f(a−b)] + k′·½[f(a+b) − f(a−b)]`.
pub fn extend_with<F>(f: F, z: SplitComplex) -> Result<SplitComplex>
where
    F: Fn(f64) -> Result<f64>,
{
    let (p, m) = z.null_coords();
    Ok(SplitComplex::from_null_coords(f(p)?, f(m)?))
}

/// [`extend_with`] for a closed-form expression.
pub fn sc_extend(f: &Expr, z: SplitComplex) -> Result<SplitComplex> {
    extend_with(|x| Ok(f.eval(x)?), z)
}
