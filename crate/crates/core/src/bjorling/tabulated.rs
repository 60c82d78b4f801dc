use crate::error::{Error, Result};
use crate::quadrature::QuadPolicy;
use crate::spline::CubicSpline;
use crate::surface::Profile;

/// How a tabulated derivative is continued outside its data interval.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Extension {
    /// Hold the endpoint value.
    #[default]
    Constant,
    /// Leave the endpoint with the tabulated slope and bend back to the
    /// endpoint value over `width`, then hold it:
    /// `v + v'·d·(1 − d/w)` for `0 ≤ d ≤ w`. The width is shrunk where
    /// needed so the continuation cannot change sign.
    LinearTaper { width: f64 },
}

/// Continuation beyond one end: `value + slope·d·(1 − d/width)` for
/// `d < width`, `value` afterwards; `d` is the distance from the endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
struct EndPiece {
    value: f64,
    slope: f64,
    width: f64,
}

impl EndPiece {
    fn new(value: f64, slope: f64, policy: Extension) -> Self {
        let width = match policy {
            Extension::Constant => 0.0,
            // max of d(1 − d/w) is w/4; keep |slope|·w/4 ≤ |value|/2
            Extension::LinearTaper { width } if slope != 0.0 => width.min(2.0 * value.abs() / slope.abs()),
            Extension::LinearTaper { .. } => 0.0,
        };
        EndPiece { value, slope, width }
    }

    fn at(&self, d: f64) -> f64 {
        if d < self.width {
            self.value + self.slope * d * (1.0 - d / self.width)
        } else {
            self.value
        }
    }
}

/// A generating function known through samples of its derivative. `F'` is a
/// not-a-knot cubic spline in the value variable, continued by an
/// [`Extension`] policy; `F` is anchored to vanish at `anchor`. All integrals
/// are exact: every piece is a polynomial of degree at most three.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProfile {
    spline: CubicSpline,
    anchor: f64,
    policy: Extension,
    below: EndPiece,
    above: EndPiece,
}

impl TabulatedProfile {
    /// `xs` must be strictly monotone (either direction).
    pub fn new(xs: &[f64], slopes: &[f64], anchor: f64, policy: Extension) -> Result<Self> {
        if let Extension::LinearTaper { width } = policy {
            if !(width > 0.0 && width.is_finite()) {
                return Err(Error::invalid(format!("taper width must be positive, got {width}")));
            }
        }
        let (mut xs, mut ys) = (xs.to_vec(), slopes.to_vec());
        if xs.len() >= 2 && xs[0] > xs[xs.len() - 1] {
            xs.reverse();
            ys.reverse();
        }
        let spline = CubicSpline::new(xs, ys)?;
        Ok(Self::from_spline(spline, anchor, policy))
    }

    fn from_spline(spline: CubicSpline, anchor: f64, policy: Extension) -> Self {
        let (lo, hi) = (spline.lo(), spline.hi());
        let ys = spline.values();
        // the continuation below lo runs in the −x direction
        let below = EndPiece::new(ys[0], -spline.derivative(lo), policy);
        let above = EndPiece::new(ys[ys.len() - 1], spline.derivative(hi), policy);
        TabulatedProfile { spline, anchor, policy, below, above }
    }

    pub fn with_extension(&self, policy: Extension) -> Result<Self> {
        if let Extension::LinearTaper { width } = policy {
            if !(width > 0.0 && width.is_finite()) {
                return Err(Error::invalid(format!("taper width must be positive, got {width}")));
            }
        }
        Ok(Self::from_spline(self.spline.clone(), self.anchor, policy))
    }

    /// Data interval `[lo, hi]`.
    pub fn data_interval(&self) -> (f64, f64) {
        (self.spline.lo(), self.spline.hi())
    }

    pub fn extension(&self) -> Extension {
        self.policy
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn knots(&self) -> &[f64] {
        self.spline.knots()
    }

    /// Tabulated derivative values at the knots.
    pub fn knot_slopes(&self) -> &[f64] {
        self.spline.values()
    }

    /// Effective taper widths below and above the data interval.
    pub fn taper_widths(&self) -> (f64, f64) {
        (self.below.width, self.above.width)
    }

    fn derivative_at(&self, x: f64) -> f64 {
        let (lo, hi) = self.data_interval();
        if x < lo {
            self.below.at(lo - x)
        } else if x > hi {
            self.above.at(x - hi)
        } else {
            self.spline.eval(x)
        }
    }

    /// Points where the piecewise-polynomial description of `F'` changes,
    /// strictly inside `(a, b)`, in increasing order.
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let (lo, hi) = self.data_interval();
        let knots = self.spline.knots();
        let mut out = Vec::new();
        let below_end = lo - self.below.width;
        if below_end > a && below_end < b && self.below.width > 0.0 {
            out.push(below_end);
        }
        let first = knots.partition_point(|&k| k <= a);
        let last = knots.partition_point(|&k| k < b);
        out.extend_from_slice(&knots[first..last.max(first)]);
        let above_end = hi + self.above.width;
        if above_end > a && above_end < b && self.above.width > 0.0 {
            out.push(above_end);
        }
        out
    }

    /// `[∫ F', ∫ x F', ∫ x² F']` over `[a, b]`.
    fn weighted_integrals(&self, a: f64, b: f64) -> [f64; 3] {
        if a == b {
            return [0.0; 3];
        }
        if b < a {
            return self.weighted_integrals(b, a).map(|v| -v);
        }
        let mut out = [0.0; 3];
        let mut left = a;
        for right in self.breakpoints(a, b).into_iter().chain(std::iter::once(b)) {
            let piece = gauss3(|x| {
                let d = self.derivative_at(x);
                [d, x * d, x * x * d]
            }, left, right);
            for k in 0..3 {
                out[k] += piece[k];
            }
            left = right;
        }
        out
    }
}

/// Three-point Gauss-Legendre rule, exact for polynomials of degree five.
fn gauss3(f: impl Fn(f64) -> [f64; 3], a: f64, b: f64) -> [f64; 3] {
    const NODE: f64 = 0.774_596_669_241_483_4; // sqrt(3/5)
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let l = f(mid - half * NODE);
    let c = f(mid);
    let r = f(mid + half * NODE);
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = half * (5.0 * (l[k] + r[k]) + 8.0 * c[k]) / 9.0;
    }
    out
}

impl Profile for TabulatedProfile {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.weighted_integrals(self.anchor, x)[0])
    }

    fn slope(&self, x: f64) -> Result<f64> {
        Ok(self.derivative_at(x))
    }

    fn moments(&self, a: f64, b: f64, _quad: &QuadPolicy) -> Result<[f64; 2]> {
        let [_, m1, m2] = self.weighted_integrals(a, b);
        Ok([m2, m1])
    }

    fn describe(&self) -> String {
        let (lo, hi) = self.data_interval();
        format!("tabulated on [{lo}, {hi}] ({} knots)", self.spline.knots().len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bjorling::strip::grid;

    fn profile(f: impl Fn(f64) -> f64, lo: f64, hi: f64, policy: Extension) -> TabulatedProfile {
        let xs = grid(lo, hi, 101);
        let ys: Vec<_> = xs.iter().map(|&x| f(x)).collect();
        TabulatedProfile::new(&xs, &ys, lo, policy).unwrap()
    }

    #[test]
    fn constant_extension_holds_endpoint_values() {
        let p = profile(|_| 1.0, -0.5, 0.5, Extension::Constant);
        assert_eq!(p.slope(2.0).unwrap(), 1.0);
        assert_eq!(p.slope(-7.0).unwrap(), 1.0);
        // F(x) = x + 0.5 everywhere
        assert!((p.value(2.0).unwrap() - 2.5).abs() < 1e-14);
        assert!((p.value(-1.0).unwrap() + 0.5).abs() < 1e-14);
    }

    #[test]
    fn extension_is_continuous_at_endpoints() {
        for policy in [Extension::Constant, Extension::LinearTaper { width: 0.3 }] {
            let p = profile(|x| 1.0 + x * x, -0.5, 0.5, policy);
            for edge in [-0.5, 0.5] {
                let inside = p.slope(edge).unwrap();
                let outside = p.slope(edge + edge.signum() * 1e-12).unwrap();
                assert!((inside - outside).abs() < 1e-11, "{policy:?} at {edge}");
            }
        }
    }

    #[test]
    fn taper_returns_to_endpoint_value_without_sign_change() {
        // steep slope at the end: the width must shrink
        let p = profile(|x| 0.1 + 2.0 * x, 0.0, 0.5, Extension::LinearTaper { width: 1.0 });
        let (lo_w, hi_w) = p.taper_widths();
        assert!(lo_w > 0.0 && lo_w <= 0.1 + 1e-12, "{lo_w}");
        assert_eq!(hi_w, 1.0);
        for i in 0..200 {
            let x = -0.3 + 0.005 * i as f64;
            if x < 0.0 {
                assert!(p.slope(x).unwrap() > 0.0, "{x}");
            }
        }
        assert_eq!(p.slope(-0.2).unwrap(), 0.1);
        assert!((p.slope(1.5).unwrap() - 1.1).abs() < 1e-12);
        assert!(p.slope(0.75).unwrap() > 1.1);
    }

    #[test]
    fn exact_integrals_match_adaptive_quadrature() {
        let p = profile(|x| x.cos(), -0.5, 0.8, Extension::LinearTaper { width: 0.4 });
        let q = QuadPolicy { abs_tol: 1e-13, rel_tol: 1e-14, max_subdivisions: 2000 };
        for (a, b) in [(-1.2, 1.9), (0.1, 0.1003), (0.7, -0.9)] {
            let exact = p.moments(a, b, &q).unwrap();
            let adaptive = crate::quadrature::integrate(
                |x| {
                    let d = p.slope(x)?;
                    Ok([x * x * d, x * d])
                },
                a,
                b,
                &q,
            )
            .unwrap();
            assert!((exact[0] - adaptive[0]).abs() < 1e-11, "{a}..{b}");
            assert!((exact[1] - adaptive[1]).abs() < 1e-11, "{a}..{b}");
        }
    }

    #[test]
    fn decreasing_abscissae_are_accepted() {
        let xs = [0.5, 0.25, 0.0];
        let p = TabulatedProfile::new(&xs, &[3.0, 2.0, 1.0], 0.0, Extension::Constant).unwrap();
        assert_eq!(p.data_interval(), (0.0, 0.5));
        assert!((p.slope(0.25).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_taper_width() {
        let p = profile(|_| 1.0, 0.0, 1.0, Extension::Constant);
        assert!(p.with_extension(Extension::LinearTaper { width: 0.0 }).is_err());
    }
}
