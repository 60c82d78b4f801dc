//! Generalized Born-Infeld soliton surfaces in the Barbashov-Chernikov form
//!
//! ```text
//! x − y = F(r) − ∫ σ² G'(σ) dσ
//! x + y = G(s) − ∫ ρ² F'(ρ) dρ
//! z     = ∫ ρ F'(ρ) dρ + ∫ σ G'(σ) dσ
//! ```
//!
//! with every antiderivative anchored at a base point `(r0, s0)` and the
//! integration constants chosen so that `X(r0, s0)` equals a prescribed base
//! value. Each coordinate is a sum of a function of `r` and a function of `s`,
//! so the surface is stored as `X = base + R(r) + S(s)`; this is what lets
//! grids and stencils chain short integrals instead of recomputing long ones.

mod checks;
mod frame;
mod profile;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::Vec3;
use crate::quadrature::{integrate_scalar, QuadPolicy};

pub use checks::{
    mean_curvature_fd, verify_bi_pde, wave_residual, wave_residual_order, BiPdePoint, BiPdeReport,
    PointStatus,
};
pub use frame::{
    alternative_form_gap, is_regular, ntilde, normal_to_param, stereographic, tangents, unit_normal,
    FrameReport, DEFAULT_PROJECTION_TOL, DEFAULT_UNIT_TOL,
};
pub use profile::{ClosedProfile, Profile};

/// Default tolerance on `|F'|`, `|G'|` and `|1 − r²s²|` below which a point is
/// treated as non-regular.
pub const DEFAULT_REGULARITY_TOL: f64 = 1e-8;

/// A point of the `(r, s)` parameter plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ParamPoint {
    pub r: f64,
    pub s: f64,
}

impl ParamPoint {
    pub const fn new(r: f64, s: f64) -> Self {
        ParamPoint { r, s }
    }

    /// Conformal coordinates `α = (r + s)/2`, `β = (r − s)/2`.
    pub fn alpha(self) -> f64 {
        0.5 * (self.r + self.s)
    }

    pub fn beta(self) -> f64 {
        0.5 * (self.r - self.s)
    }

    pub fn from_conformal(alpha: f64, beta: f64) -> Self {
        ParamPoint { r: alpha + beta, s: alpha - beta }
    }

    /// Inside the open region `|rs| < 1` where Born-Infeld solitons live.
    pub fn in_soliton_domain(self) -> bool {
        (self.r * self.s).abs() < 1.0
    }
}

/// Surface defined by a pair of generating functions.
#[derive(Debug, Clone)]
pub struct BcSurface {
    f: Arc<dyn Profile>,
    g: Arc<dyn Profile>,
    base: ParamPoint,
    base_value: Vec3,
    quad: QuadPolicy,
    f_at_base: f64,
    g_at_base: f64,
}

impl BcSurface {
    pub fn new(
        f: Arc<dyn Profile>,
        g: Arc<dyn Profile>,
        base: ParamPoint,
        base_value: Vec3,
        quad: QuadPolicy,
    ) -> Result<Self> {
        quad.validate()?;
        if !base.r.is_finite() || !base.s.is_finite() || !base_value.is_finite() {
            return Err(Error::invalid("base point and base value must be finite"));
        }
        let f_at_base = f.value(base.r)?;
        let g_at_base = g.value(base.s)?;
        Ok(BcSurface { f, g, base, base_value, quad, f_at_base, g_at_base })
    }

    /// Closed-form generating functions; derivatives are taken symbolically.
    pub fn from_exprs(
        f: Expr,
        g: Expr,
        base: ParamPoint,
        base_value: Vec3,
        quad: QuadPolicy,
    ) -> Result<Self> {
        Self::new(
            Arc::new(ClosedProfile::new(f)),
            Arc::new(ClosedProfile::new(g)),
            base,
            base_value,
            quad,
        )
    }

    /// Parses `F(r)` and `G(s)` and anchors the surface at the origin.
    pub fn parse(f_src: &str, g_src: &str) -> Result<Self> {
        Self::from_exprs(
            Expr::parse(f_src, "r")?,
            Expr::parse(g_src, "s")?,
            ParamPoint::default(),
            Vec3::ZERO,
            QuadPolicy::default(),
        )
    }

    pub fn f(&self) -> &Arc<dyn Profile> {
        &self.f
    }

    pub fn g(&self) -> &Arc<dyn Profile> {
        &self.g
    }

    pub fn base(&self) -> ParamPoint {
        self.base
    }

    pub fn base_value(&self) -> Vec3 {
        self.base_value
    }

    pub fn quad(&self) -> &QuadPolicy {
        &self.quad
    }

    /// Same generating functions with a different profile for `F`.
    pub fn with_f(&self, f: Arc<dyn Profile>) -> Result<Self> {
        Self::new(f, self.g.clone(), self.base, self.base_value, self.quad)
    }

    pub fn fprime(&self, r: f64) -> Result<f64> {
        self.f.slope(r)
    }

    pub fn gprime(&self, s: f64) -> Result<f64> {
        self.g.slope(s)
    }

    /// Change of the `r`-dependent part of `X` between `from` and `to`.
    pub fn r_increment(&self, from: f64, to: f64) -> Result<Vec3> {
        if from == to {
            return Ok(Vec3::ZERO);
        }
        let [a, b] = self.f.moments(from, to, &self.quad)?;
        let df = self.f.value(to)? - self.f.value(from)?;
        Ok(Vec3::new(0.5 * (df - a), -0.5 * (df + a), b))
    }

    /// Change of the `s`-dependent part of `X` between `from` and `to`.
    pub fn s_increment(&self, from: f64, to: f64) -> Result<Vec3> {
        if from == to {
            return Ok(Vec3::ZERO);
        }
        let [a, b] = self.g.moments(from, to, &self.quad)?;
        let dg = self.g.value(to)? - self.g.value(from)?;
        Ok(Vec3::new(0.5 * (dg - a), 0.5 * (dg + a), b))
    }

    /// `R(r)`, the `r`-dependent part, zero at `r0`.
    pub fn r_part(&self, r: f64) -> Result<Vec3> {
        if r == self.base.r {
            return Ok(Vec3::ZERO);
        }
        let [a, b] = self.f.moments(self.base.r, r, &self.quad)?;
        let df = self.f.value(r)? - self.f_at_base;
        Ok(Vec3::new(0.5 * (df - a), -0.5 * (df + a), b))
    }

    /// `S(s)`, the `s`-dependent part, zero at `s0`.
    pub fn s_part(&self, s: f64) -> Result<Vec3> {
        if s == self.base.s {
            return Ok(Vec3::ZERO);
        }
        let [a, b] = self.g.moments(self.base.s, s, &self.quad)?;
        let dg = self.g.value(s)? - self.g_at_base;
        Ok(Vec3::new(0.5 * (dg - a), 0.5 * (dg + a), b))
    }

    /// `X(r, s)`; equals the base value exactly at the base point.
    pub fn eval(&self, p: ParamPoint) -> Result<Vec3> {
        Ok(self.base_value + self.r_part(p.r)? + self.s_part(p.s)?)
    }

    /// `R` at many parameter values, chaining short integrals outward from `r0`.
    pub fn r_parts(&self, rs: &[f64]) -> Result<Vec<Vec3>> {
        chained(rs, self.base.r, |a, b| self.r_increment(a, b))
    }

    pub fn s_parts(&self, ss: &[f64]) -> Result<Vec<Vec3>> {
        chained(ss, self.base.s, |a, b| self.s_increment(a, b))
    }

    /// Evaluates a tensor grid; `out[i][j] = X(rs[i], ss[j])`.
    pub fn eval_grid(&self, rs: &[f64], ss: &[f64]) -> Result<Vec<Vec<Vec3>>> {
        let (rp, sp) = rayon::join(|| self.r_parts(rs), || self.s_parts(ss));
        let (rp, sp) = (rp?, sp?);
        Ok(rp
            .par_iter()
            .map(|r| sp.iter().map(|s| self.base_value + *r + *s).collect())
            .collect())
    }

    /// Evaluates along an arbitrary list of points with O(n) panel integrals.
    pub fn eval_path(&self, points: &[ParamPoint]) -> Result<Vec<Vec3>> {
        let rs: Vec<f64> = points.iter().map(|p| p.r).collect();
        let ss: Vec<f64> = points.iter().map(|p| p.s).collect();
        let rp = self.r_parts(&rs)?;
        let sp = self.s_parts(&ss)?;
        Ok(rp.into_iter().zip(sp).map(|(r, s)| self.base_value + r + s).collect())
    }

    /// `X(p + (dr, ds)) − X(p)` computed from local integrals only.
    pub fn displacement(&self, p: ParamPoint, dr: f64, ds: f64) -> Result<Vec3> {
        Ok(self.r_increment(p.r, p.r + dr)? + self.s_increment(p.s, p.s + ds)?)
    }
}

/// Values of a one-dimensional anchored antiderivative at `xs`, obtained by
/// sorting the abscissae and summing increments outward from `anchor`.
fn chained<F>(xs: &[f64], anchor: f64, increment: F) -> Result<Vec<Vec3>>
where
    F: Fn(f64, f64) -> Result<Vec3>,
{
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
    let split = order.partition_point(|&i| xs[i] < anchor);
    let mut out = vec![Vec3::ZERO; xs.len()];

    let mut acc = Vec3::ZERO;
    let mut at = anchor;
    for &i in &order[split..] {
        acc += increment(at, xs[i])?;
        at = xs[i];
        out[i] = acc;
    }
    let mut acc = Vec3::ZERO;
    let mut at = anchor;
    for &i in order[..split].iter().rev() {
        acc += increment(at, xs[i])?;
        at = xs[i];
        out[i] = acc;
    }
    Ok(out)
}

/// `∫_a^x f` by adaptive quadrature.
pub fn antiderivative(f: &Expr, a: f64, x: f64, quad: &QuadPolicy) -> Result<f64> {
    integrate_scalar(|t| f.eval(t).map_err(Error::from), a, x, quad)
}
