use super::number::{extend_with, SplitComplex};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{b3_to_l3, cross, inner, l3_to_b3, norm, Signature, Vec3};
use crate::quadrature::{integrate, QuadPolicy};

/// Tolerance for the unit, orthogonality and non-null checks on the data.
pub const DEFAULT_TMS_TOL: f64 = 1e-9;

/// Number of probes used to check the strip hypotheses on its interval.
const PROBES: usize = 257;

/// Intervals between tabulated values of `Φ`.
const TABLE_PANELS: usize = 64;

/// Closed-form strip in `L3`: a curve `c̃(t)` and a unit normal `ñ(t)` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TmsStrip {
    pub c: [Expr; 3],
    pub n: [Expr; 3],
    pub interval: (f64, f64),
}

impl TmsStrip {
    pub fn parse(c: [&str; 3], n: [&str; 3], var: &str, interval: (f64, f64)) -> Result<Self> {
        let parse3 = |src: [&str; 3]| -> Result<[Expr; 3]> {
            Ok([Expr::parse(src[0], var)?, Expr::parse(src[1], var)?, Expr::parse(src[2], var)?])
        };
        Ok(TmsStrip { c: parse3(c)?, n: parse3(n)?, interval })
    }
}

/// Whether the data curve is timelike (`w = t + k′s`) or spacelike (`w = s + k′t`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Timelike,
    Spacelike,
}

fn eval3(e: &[Expr; 3], t: f64) -> Result<Vec3> {
    Ok(Vec3::new(e[0].eval(t)?, e[1].eval(t)?, e[2].eval(t)?))
}

/// Timelike minimal surface solving the Björling problem in `L3`:
///
/// ```text
/// X(z) = Re( c̃(w) + k′ ∫_{t0}^{w} ñ(ξ) × c̃′(ξ) dξ )
/// ```
///
/// evaluated through null coordinates, where it reads
/// `X = ½[c̃(p) + c̃(m)] + ½[Φ(p) − Φ(m)]` with `Φ = ∫_{t0} ñ × c̃′` and
/// `(p, m)` the null coordinates of `w`.
#[derive(Debug, Clone)]
pub struct TmsSurface {
    strip: TmsStrip,
    dc: [Expr; 3],
    kind: CurveKind,
    t0: f64,
    quad: QuadPolicy,
    /// `Φ` at equally spaced points of the strip interval.
    knots: Vec<f64>,
    table: Vec<Vec3>,
}

fn check_strip(strip: &TmsStrip, dc: &[Expr; 3], tol: f64) -> Result<CurveKind> {
    let (lo, hi) = strip.interval;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(format!("strip interval [{lo}, {hi}] is empty")));
    }
    let l3 = Signature::L3;
    let mut kind = None;
    for i in 0..PROBES {
        let t = lo + (hi - lo) * i as f64 / (PROBES - 1) as f64;
        let cp = eval3(dc, t)?;
        let n = eval3(&strip.n, t)?;
        let q = inner(cp, cp, l3);
        let here = if q > tol {
            CurveKind::Spacelike
        } else if q < -tol {
            CurveKind::Timelike
        } else {
            return Err(Error::MixedCausalCharacter { t });
        };
        if *kind.get_or_insert(here) != here {
            return Err(Error::MixedCausalCharacter { t });
        }
        let nn = inner(n, n, l3);
        if (nn - 1.0).abs() > tol {
            return Err(Error::NotUnitNormal(nn));
        }
        let nc = inner(n, cp, l3);
        if nc.abs() > tol * (1.0 + q.abs().sqrt()) {
            return Err(Error::NotOrthogonal(nc));
        }
    }
    Ok(kind.expect("at least one probe"))
}

/// Solves the timelike Björling problem for closed-form `L3` data with the
/// integral anchored at `t0`.
pub fn solve_bjorling_tms(strip: &TmsStrip, t0: f64) -> Result<TmsSurface> {
    let dc = [strip.c[0].derivative(), strip.c[1].derivative(), strip.c[2].derivative()];
    let kind = check_strip(strip, &dc, DEFAULT_TMS_TOL)?;
    let (lo, hi) = strip.interval;
    let mut surf = TmsSurface {
        strip: strip.clone(),
        dc,
        kind,
        t0,
        quad: QuadPolicy::default(),
        knots: Vec::new(),
        table: Vec::new(),
    };
    let knots: Vec<f64> = (0..=TABLE_PANELS)
        .map(|i| if i == TABLE_PANELS { hi } else { lo + (hi - lo) * i as f64 / TABLE_PANELS as f64 })
        .collect();
    // Φ at lo from t0, then cumulative panels
    let mut table = Vec::with_capacity(knots.len());
    let mut acc = surf.phi_between(t0, lo)?;
    table.push(acc);
    for w in knots.windows(2) {
        acc += surf.phi_between(w[0], w[1])?;
        table.push(acc);
    }
    surf.knots = knots;
    surf.table = table;
    Ok(surf)
}

impl TmsSurface {
    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    /// Lower limit of the integral in the representation.
    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn strip(&self) -> &TmsStrip {
        &self.strip
    }

    /// `ñ(x) ×_{L3} c̃′(x)`
    pub fn integrand(&self, x: f64) -> Result<Vec3> {
        Ok(cross(eval3(&self.strip.n, x)?, eval3(&self.dc, x)?, Signature::L3))
    }

    fn phi_between(&self, a: f64, b: f64) -> Result<Vec3> {
        integrate(|x| self.integrand(x).map(Vec3::to_array), a, b, &self.quad).map(Vec3::from)
    }

    /// `Φ(x) = ∫_{t0}^{x} ñ × c̃′`, from the nearest tabulated value below `x`.
    pub fn phi(&self, x: f64) -> Result<Vec3> {
        let i = self.knots.partition_point(|&k| k <= x).saturating_sub(1).min(self.knots.len() - 1);
        Ok(self.table[i] + self.phi_between(self.knots[i], x)?)
    }

    pub fn curve(&self, t: f64) -> Result<Vec3> {
        eval3(&self.strip.c, t)
    }

    pub fn normal_data(&self, t: f64) -> Result<Vec3> {
        eval3(&self.strip.n, t)
    }

    /// `w` as a split-complex number for the parameter point `(t, s)`.
    pub fn w(&self, t: f64, s: f64) -> SplitComplex {
        match self.kind {
            CurveKind::Timelike => SplitComplex::new(t, s),
            CurveKind::Spacelike => SplitComplex::new(s, t),
        }
    }

    /// The point `X(t, s)` in `L3`.
    pub fn eval(&self, t: f64, s: f64) -> Result<Vec3> {
        let w = self.w(t, s);
        let mut out = [0.0; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let c = extend_with(|x| Ok(self.strip.c[k].eval(x)?), w)?;
            let phi = extend_with(|x| Ok(self.phi(x)?[k]), w)?;
            // Re(c(w) + k′Φ(w)) = Re c(w) + Im Φ(w)
            *slot = c.a + phi.b;
        }
        Ok(Vec3::from(out))
    }

    /// The same surface mapped to `B3` by the inverse coordinate bridge.
    pub fn eval_b3(&self, t: f64, s: f64) -> Result<Vec3> {
        Ok(l3_to_b3(self.eval(t, s)?))
    }

    /// Parameter point carrying the data at `t`: `(t, 0)` or `(0, t)`.
    pub fn data_point(&self, t: f64) -> (f64, f64) {
        match self.kind {
            CurveKind::Timelike => (t, 0.0),
            CurveKind::Spacelike => (0.0, t),
        }
    }

    fn partials(&self, t: f64, s: f64, h: f64) -> Result<(Vec3, Vec3)> {
        let xt = (self.eval(t + h, s)? - self.eval(t - h, s)?) * (0.5 / h);
        let xs = (self.eval(t, s + h)? - self.eval(t, s - h)?) * (0.5 / h);
        Ok((xt, xs))
    }

    /// `X_tt − X_ss` by central differences.
    pub fn wave_residual(&self, t: f64, s: f64, h: f64) -> Result<Vec3> {
        let x0 = self.eval(t, s)?;
        let xtt = (self.eval(t + h, s)? + self.eval(t - h, s)? - x0 * 2.0) * (1.0 / (h * h));
        let xss = (self.eval(t, s + h)? + self.eval(t, s - h)? - x0 * 2.0) * (1.0 / (h * h));
        Ok(xtt - xss)
    }

    /// `(⟨X_t, X_t⟩ + ⟨X_s, X_s⟩, ⟨X_t, X_s⟩)` in `L3`, by central differences.
    pub fn conformal_residuals(&self, t: f64, s: f64, h: f64) -> Result<(f64, f64)> {
        let (xt, xs) = self.partials(t, s, h)?;
        let l3 = Signature::L3;
        Ok((inner(xt, xt, l3) + inner(xs, xs, l3), inner(xt, xs, l3)))
    }

    /// Unit normal `X_t × X_s / ‖X_t × X_s‖` in `L3`, by central differences.
    pub fn normal_fd(&self, t: f64, s: f64, h: f64) -> Result<Vec3> {
        let (xt, xs) = self.partials(t, s, h)?;
        let c = cross(xt, xs, Signature::L3);
        Ok(c * (1.0 / norm(c, Signature::L3)))
    }

    /// Largest deviation of the surface from the data curve, and of the
    /// finite-difference normal from `±ñ`, at `count` points of the interval.
    pub fn bjorling_residuals(&self, count: usize, h: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.strip.interval;
        let mut curve = 0.0f64;
        let mut normal = 0.0f64;
        for i in 0..count.max(2) {
            let t = lo + (hi - lo) * i as f64 / (count.max(2) - 1) as f64;
            let (pt, ps) = self.data_point(t);
            curve = curve.max((self.eval(pt, ps)? - self.curve(t)?).norm_inf());
            let n = self.normal_fd(pt, ps, h)?;
            let data = self.normal_data(t)?;
            normal = normal.max((n - data).norm_inf().min((n + data).norm_inf()));
        }
        Ok((curve, normal))
    }
}

/// Maps Born-Infeld data in `B3` to `L3` by `(x, y, z) ↦ (z, x, y)`.
pub fn bridge_bi_to_tms(c: Vec3, n: Vec3) -> (Vec3, Vec3) {
    (b3_to_l3(c), b3_to_l3(n))
}

/// Inverse of [`bridge_bi_to_tms`].
pub fn bridge_tms_to_bi(c: Vec3, n: Vec3) -> (Vec3, Vec3) {
    (l3_to_b3(c), l3_to_b3(n))
}

/// [`bridge_bi_to_tms`] on closed-form component triples.
pub fn bridge_exprs(e: &[Expr; 3]) -> [Expr; 3] {
    [e[2].clone(), e[0].clone(), e[1].clone()]
}
