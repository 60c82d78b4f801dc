use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{inner, Signature, Vec3};
use crate::surface::{tangents, unit_normal, BcSurface, ParamPoint, DEFAULT_REGULARITY_TOL};

/// Default tolerance for the strip invariants.
pub const DEFAULT_STRIP_TOL: f64 = 1e-8;

/// One sample of a strip: curve point, curve velocity and unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripSample {
    pub t: f64,
    pub c: Vec3,
    pub cdot: Vec3,
    pub n: Vec3,
}

/// A curve with a prescribed unit normal field, sampled at increasing `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct BjorlingStrip {
    samples: Vec<StripSample>,
}

impl BjorlingStrip {
    pub fn new(samples: Vec<StripSample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("a strip needs at least two samples"));
        }
        for s in &samples {
            if !(s.t.is_finite() && s.c.is_finite() && s.cdot.is_finite() && s.n.is_finite()) {
                return Err(Error::invalid(format!("non-finite strip data at t = {}", s.t)));
            }
        }
        Ok(BjorlingStrip { samples })
    }

    /// Closed-form strip in the variable of the expressions, sampled at
    /// `count` equally spaced points of `[a, b]`; `c'` is differentiated
    /// symbolically.
    pub fn from_exprs(c: &[Expr; 3], n: &[Expr; 3], a: f64, b: f64, count: usize) -> Result<Self> {
        if count < 2 || !(a < b) {
            return Err(Error::invalid("closed-form strip needs a < b and at least two samples"));
        }
        let dc = [c[0].derivative(), c[1].derivative(), c[2].derivative()];
        let eval3 = |e: &[Expr; 3], t: f64| -> Result<Vec3> {
            Ok(Vec3::new(e[0].eval(t)?, e[1].eval(t)?, e[2].eval(t)?))
        };
        let samples = grid(a, b, count)
            .into_iter()
            .map(|t| Ok(StripSample { t, c: eval3(c, t)?, cdot: eval3(&dc, t)?, n: eval3(n, t)? }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(samples)
    }

    /// Tabulated strip without derivatives; `c'` is estimated by
    /// differentiating the interpolant through the nearest five samples
    /// (fourth order, centred inside, one-sided at the ends).
    pub fn from_table(ts: &[f64], cs: &[Vec3], ns: &[Vec3]) -> Result<Self> {
        let len = ts.len();
        if cs.len() != len || ns.len() != len {
            return Err(Error::invalid("strip columns differ in length"));
        }
        if len < 3 {
            return Err(Error::invalid("a tabulated strip needs at least three samples"));
        }
        if ts.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("strip parameter t must be strictly increasing"));
        }
        let width = len.min(STENCIL);
        let samples = (0..len)
            .map(|i| {
                let lo = i.saturating_sub(width / 2).min(len - width);
                let cdot = lagrange_derivative(&ts[lo..lo + width], &cs[lo..lo + width], ts[i]);
                StripSample { t: ts[i], c: cs[i], cdot, n: ns[i] }
            })
            .collect();
        Self::new(samples)
    }

    /// Strip traced by a surface along the diagonal `r = s = α`, `α ∈ [a, b]`.
    pub fn along_diagonal(surf: &BcSurface, a: f64, b: f64, count: usize) -> Result<Self> {
        if count < 2 || !(a < b) {
            return Err(Error::invalid("diagonal strip needs a < b and at least two samples"));
        }
        let ts = grid(a, b, count);
        let points: Vec<_> = ts.iter().map(|&t| ParamPoint::new(t, t)).collect();
        let cs = surf.eval_path(&points)?;
        let samples = ts
            .iter()
            .zip(points)
            .zip(cs)
            .map(|((&t, p), c)| {
                let fr = tangents(surf, p)?;
                let n = unit_normal(surf, p, DEFAULT_REGULARITY_TOL)?;
                Ok(StripSample { t, c, cdot: fr.xalpha, n })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(samples)
    }

    pub fn samples(&self) -> &[StripSample] {
        &self.samples
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.samples[0].t, self.samples[self.samples.len() - 1].t)
    }

    /// The same strip with every normal negated.
    pub fn negated_normals(&self) -> Self {
        let samples = self.samples.iter().map(|s| StripSample { n: -s.n, ..*s }).collect();
        BjorlingStrip { samples }
    }

    /// Orients every normal so that its third component is not positive.
    pub fn oriented(&self) -> Self {
        let samples = self
            .samples
            .iter()
            .map(|s| if s.n.z > 0.0 { StripSample { n: -s.n, ..*s } } else { *s })
            .collect();
        BjorlingStrip { samples }
    }
}

pub(crate) fn grid(a: f64, b: f64, count: usize) -> Vec<f64> {
    let step = (b - a) / (count - 1) as f64;
    (0..count).map(|i| if i + 1 == count { b } else { a + step * i as f64 }).collect()
}

/// Derivative at `x` of the parabola through three points.
/// Samples in the derivative stencil of [`BjorlingStrip::from_table`].
const STENCIL: usize = 5;

/// Derivative at `x` of the polynomial interpolating `(t_j, y_j)`:
/// `ℓ_j'(x) = Σ_{m≠j} 1/(t_j − t_m) Π_{l≠j,m} (x − t_l)/(t_j − t_l)`.
fn lagrange_derivative(t: &[f64], y: &[Vec3], x: f64) -> Vec3 {
    let k = t.len();
    let mut out = Vec3::ZERO;
    for j in 0..k {
        let mut w = 0.0;
        for m in (0..k).filter(|&m| m != j) {
            let mut prod = 1.0 / (t[j] - t[m]);
            for l in (0..k).filter(|&l| l != j && l != m) {
                prod *= (x - t[l]) / (t[j] - t[l]);
            }
            w += prod;
        }
        out += y[j] * w;
    }
    out
}

/// Outcome of one strip invariant, with the worst sample.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub worst_t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripReport {
    pub checks: Vec<InvariantCheck>,
    /// Whether any normal was negated to make `n3 < 0`.
    pub flipped: bool,
    /// The strip after orientation normalization.
    pub strip: BjorlingStrip,
}

impl StripReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Largest value of `f` over the samples, with its location.
fn worst_of(samples: &[StripSample], f: impl Fn(&StripSample) -> f64) -> (f64, Option<f64>) {
    samples.iter().fold((0.0, None), |(w, at), s| {
        let v = f(s);
        if v > w || v.is_nan() {
            (v, Some(s.t))
        } else {
            (w, at)
        }
    })
}

/// Checks the strip invariants and normalizes the orientation of the
/// normal field so that `n3 < 0`.
pub fn validate_strip(strip: &BjorlingStrip, tol: f64) -> StripReport {
    let b3 = Signature::B3;
    let s = strip.samples();
    let mut checks = Vec::new();

    let (w, at) = worst_of(s, |x| (inner(x.n, x.n, b3) - 1.0).abs());
    checks.push(InvariantCheck { name: "unit_normal", passed: w < tol, worst: w, worst_t: at });

    let (w, at) = worst_of(s, |x| inner(x.n, x.cdot, b3).abs());
    checks.push(InvariantCheck { name: "orthogonal", passed: w < tol, worst: w, worst_t: at });

    let smallest = s.iter().min_by(|a, b| a.n.z.abs().total_cmp(&b.n.z.abs())).unwrap();
    checks.push(InvariantCheck {
        name: "n3_nonzero",
        passed: smallest.n.z.abs() > tol,
        worst: smallest.n.z.abs(),
        worst_t: Some(smallest.t),
    });

    let first_sign = s[0].n.z.signum();
    let change = s.iter().find(|x| x.n.z.signum() != first_sign);
    checks.push(InvariantCheck {
        name: "n3_sign_constant",
        passed: change.is_none(),
        worst: change.map_or(0.0, |x| x.n.z),
        worst_t: change.map(|x| x.t),
    });

    let bad_t = s.windows(2).find(|w| !(w[1].t > w[0].t));
    checks.push(InvariantCheck {
        name: "t_increasing",
        passed: bad_t.is_none(),
        worst: bad_t.map_or(0.0, |w| w[1].t - w[0].t),
        worst_t: bad_t.map(|w| w[1].t),
    });

    StripReport { checks, flipped: s.iter().any(|x| x.n.z > 0.0), strip: strip.oriented() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_strip() -> BjorlingStrip {
        let surf = BcSurface::parse("r", "s").unwrap();
        BjorlingStrip::along_diagonal(&surf, -0.5, 0.5, 101).unwrap()
    }

    fn with_sample(strip: &BjorlingStrip, i: usize, n: Vec3) -> BjorlingStrip {
        let mut samples = strip.samples().to_vec();
        samples[i].n = n;
        BjorlingStrip::new(samples).unwrap()
    }

    #[test]
    fn diagonal_strip_passes_validation() {
        let rep = validate_strip(&identity_strip(), DEFAULT_STRIP_TOL);
        assert!(rep.all_passed(), "{:?}", rep.checks);
    }

    #[test]
    fn horizontal_normal_fails_n3_check() {
        let strip = with_sample(&identity_strip(), 40, Vec3::new(1.0, 0.0, 0.0));
        let rep = validate_strip(&strip, DEFAULT_STRIP_TOL);
        let c = rep.check("n3_nonzero").unwrap();
        assert!(!c.passed);
        assert_eq!(c.worst_t, Some(strip.samples()[40].t));
    }

    #[test]
    fn non_unit_normal_fails_unit_check() {
        let n = identity_strip().samples()[10].n * 1.5;
        let rep = validate_strip(&with_sample(&identity_strip(), 10, n), DEFAULT_STRIP_TOL);
        assert!(!rep.check("unit_normal").unwrap().passed);
        assert!(rep.check("n3_nonzero").unwrap().passed);
    }

    #[test]
    fn orientation_is_normalized() {
        let strip = identity_strip().oriented().negated_normals();
        assert!(strip.samples().iter().all(|s| s.n.z > 0.0));
        let rep = validate_strip(&strip, DEFAULT_STRIP_TOL);
        assert!(rep.flipped);
        assert!(rep.strip.samples().iter().all(|s| s.n.z < 0.0));
        assert_eq!(rep.strip, identity_strip().oriented());
    }

    #[test]
    fn closed_form_and_tabulated_strips_agree() {
        let c = ["t", "t^2", "sin(t)"].map(|s| Expr::parse(s, "t").unwrap());
        let n = ["0", "0", "-1"].map(|s| Expr::parse(s, "t").unwrap());
        let exact = BjorlingStrip::from_exprs(&c, &n, 0.0, 1.0, 201).unwrap();
        let ts: Vec<_> = exact.samples().iter().map(|s| s.t).collect();
        let cs: Vec<_> = exact.samples().iter().map(|s| s.c).collect();
        let ns: Vec<_> = exact.samples().iter().map(|s| s.n).collect();
        let table = BjorlingStrip::from_table(&ts, &cs, &ns).unwrap();
        for (a, b) in exact.samples().iter().zip(table.samples()) {
            assert!((a.cdot - b.cdot).norm_inf() < 1e-9, "t = {}", a.t);
        }
        assert_eq!(exact.samples()[200].cdot, Vec3::new(1.0, 2.0, 1f64.cos()));
        assert_eq!(exact.interval(), (0.0, 1.0));
    }

    #[test]
    fn derivative_rule_is_exact_on_quartics() {
        let t: [f64; 5] = [0.0, 0.3, 0.45, 0.8, 1.0];
        let y = t.map(|x| Vec3::new(x.powi(4), 2.0 * x, 1.0));
        for x in t {
            let d = lagrange_derivative(&t, &y, x);
            assert!((d - Vec3::new(4.0 * x.powi(3), 2.0, 0.0)).norm_inf() < 1e-13, "{x}");
        }
        let d = lagrange_derivative(&t[..3], &y[..3], 0.3);
        assert!((d.y - 2.0).abs() < 1e-14);
    }
}
