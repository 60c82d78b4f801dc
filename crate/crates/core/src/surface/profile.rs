use std::fmt;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::quadrature::{integrate, QuadPolicy};

/// A generating function `F` of one parameter, as consumed by the
/// representation formulas: its value, its derivative, and the weighted
/// integrals `∫ x² F'(x) dx` and `∫ x F'(x) dx`.
pub trait Profile: Send + Sync + fmt::Debug {
    fn value(&self, x: f64) -> Result<f64>;

    fn slope(&self, x: f64) -> Result<f64>;

    /// `[∫_a^b x² F'(x) dx, ∫_a^b x F'(x) dx]`.
    fn moments(&self, a: f64, b: f64, quad: &QuadPolicy) -> Result<[f64; 2]> {
        integrate(
            |x| {
                let d = self.slope(x)?;
                Ok([x * x * d, x * d])
            },
            a,
            b,
            quad,
        )
    }

    /// Short human-readable description for reports.
    fn describe(&self) -> String;
}

/// Generating function given by a closed-form expression; the derivative is
/// taken symbolically once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedProfile {
    f: Expr,
    fp: Expr,
}

impl ClosedProfile {
    pub fn new(f: Expr) -> Self {
        let fp = f.derivative();
        ClosedProfile { f, fp }
    }

    pub fn expr(&self) -> &Expr {
        &self.f
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.fp
    }
}

impl Profile for ClosedProfile {
    fn value(&self, x: f64) -> Result<f64> {
        self.f.eval(x).map_err(Error::from)
    }

    fn slope(&self, x: f64) -> Result<f64> {
        self.fp.eval(x).map_err(Error::from)
    }

    fn describe(&self) -> String {
        self.f.to_string()
    }
}
