//! The Björling problem for Born-Infeld soliton surfaces: given a curve `c`
//! with a unit normal field `n` (a strip), recover generating functions `F`,
//! `G` whose surface contains `c` with normal `n` along it.
//!
//! The normal fixes the parameter curve `(r(t), s(t))` through the inverse
//! Gauss map; `c'` then fixes `F'` along `r(t)` and `G'` along `s(t)`. Outside
//! `r(I) × s(I)` the data say nothing, which [`perturb_nonunique`] exploits.

mod reconstruct;
mod strip;
mod tabulated;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{cross, norm, Signature, Vec3};
use crate::quadrature::{integrate, QuadPolicy};
use crate::surface::{tangents, BcSurface, ParamPoint, Profile};

pub use reconstruct::{
    extend_fg, param_curve, reconstruct_fg, ParamCurve, ReconstructOptions, ReconstructedFg,
    DEFAULT_CONSISTENCY_TOL, DEFAULT_FLAT_TOL,
};
pub use strip::{validate_strip, BjorlingStrip, InvariantCheck, StripReport, StripSample, DEFAULT_STRIP_TOL};
pub use tabulated::{Extension, TabulatedProfile};

/// Parameter domain `Ω = (I1 × I2) ∩ {|rs| < 1}` of a reconstructed surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub i1: (f64, f64),
    pub i2: (f64, f64),
}

impl Domain {
    pub fn contains(&self, p: ParamPoint) -> bool {
        p.r >= self.i1.0 && p.r <= self.i1.1 && p.s >= self.i2.0 && p.s <= self.i2.1 && p.in_soliton_domain()
    }
}

#[derive(Debug, Clone)]
pub struct BjorlingSolution {
    pub surface: BcSurface,
    pub domain: Domain,
    pub fg: ReconstructedFg,
}

/// Builds the surface of reconstructed generating functions, with the
/// integration constants fixed so that `X(r(a), s(a)) = c(a)`.
pub fn surface_from_fg(fg: &ReconstructedFg) -> Result<BjorlingSolution> {
    let surface =
        BcSurface::new(fg.f_profile(), fg.g_profile(), fg.base(), fg.start_point, QuadPolicy::default())?;
    Ok(BjorlingSolution { surface, domain: Domain { i1: fg.i1(), i2: fg.i2() }, fg: fg.clone() })
}

/// Reconstructs `F`, `G` from the strip and returns the solving surface.
pub fn solve_bjorling(strip: &BjorlingStrip, opts: &ReconstructOptions) -> Result<BjorlingSolution> {
    surface_from_fg(&reconstruct_fg(strip, opts)?)
}

/// How well a surface matches a strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionResiduals {
    /// `max_t ‖X(r(t), s(t)) − c(t)‖∞`
    pub curve: f64,
    /// `max_t min(‖N − n‖∞, ‖N + n‖∞)`
    pub normal: f64,
    pub worst_curve_t: f64,
    pub worst_normal_t: f64,
}

/// Evaluates the surface along the parameter curve of the strip and compares
/// position and normal with the data. The surface normal is the normalized
/// `B3` cross product of the surface tangents.
pub fn verify_solution(surf: &BcSurface, strip: &BjorlingStrip) -> Result<SolutionResiduals> {
    use rayon::prelude::*;
    let oriented = strip.oriented();
    let points: Vec<ParamPoint> = oriented.samples().iter().map(|x| reconstruct::invert_normal(x.n)).collect();
    let positions = surf.eval_path(&points)?;
    let normals = points
        .par_iter()
        .map(|&p| {
            let fr = tangents(surf, p)?;
            let c = cross(fr.xr, fr.xs, Signature::B3);
            Ok(c * (1.0 / norm(c, Signature::B3)))
        })
        .collect::<Result<Vec<Vec3>>>()?;
    let mut out = SolutionResiduals { curve: 0.0, normal: 0.0, worst_curve_t: f64::NAN, worst_normal_t: f64::NAN };
    for (i, x) in strip.samples().iter().enumerate() {
        let dc = (positions[i] - x.c).norm_inf();
        let dn = (normals[i] - x.n).norm_inf().min((normals[i] + x.n).norm_inf());
        if !(dc <= out.curve) {
            out.curve = dc;
            out.worst_curve_t = x.t;
        }
        if !(dn <= out.normal) {
            out.normal = dn;
            out.worst_normal_t = x.t;
        }
    }
    Ok(out)
}

/// `f(x) = A·exp(−1/(1 − u²))` with `u = (2x − c − d)/(d − c)` on `(c, d)`,
/// zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub c: f64,
    pub d: f64,
    pub amplitude: f64,
}

impl Bump {
    fn u(&self, x: f64) -> f64 {
        (2.0 * x - self.c - self.d) / (self.d - self.c)
    }

    pub fn value(&self, x: f64) -> f64 {
        let u = self.u(x);
        if u.abs() >= 1.0 {
            0.0
        } else {
            self.amplitude * (-1.0 / (1.0 - u * u)).exp()
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let u = self.u(x);
        if u.abs() >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - u * u;
        self.amplitude * (-1.0 / q).exp() * (-2.0 * u / (q * q)) * (2.0 / (self.d - self.c))
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.c + self.d)
    }
}

/// `max |d/du exp(−1/(1 − u²))|` over `(−1, 1)`, located by golden-section
/// search on `(0, 1)` where the derivative magnitude is unimodal.
fn unit_bump_max_slope() -> f64 {
    let g = |u: f64| {
        let q = 1.0 - u * u;
        (-1.0 / q).exp() * 2.0 * u / (q * q)
    };
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..100 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if g(x1) < g(x2) {
            a = x1;
        } else {
            b = x2;
        }
    }
    g(0.5 * (a + b))
}

/// A profile plus a bump: `F̃ = F + f`, `F̃' = F' + f'`.
#[derive(Debug, Clone)]
pub struct BumpedProfile {
    base: Arc<dyn Profile>,
    bump: Bump,
    quad: QuadPolicy,
}

impl BumpedProfile {
    pub fn new(base: Arc<dyn Profile>, bump: Bump) -> Self {
        BumpedProfile { base, bump, quad: QuadPolicy::default() }
    }
}

impl Profile for BumpedProfile {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.base.value(x)? + self.bump.value(x))
    }

    fn slope(&self, x: f64) -> Result<f64> {
        Ok(self.base.slope(x)? + self.bump.derivative(x))
    }

    fn moments(&self, a: f64, b: f64, quad: &QuadPolicy) -> Result<[f64; 2]> {
        let [m2, m1] = self.base.moments(a, b, quad)?;
        let (lo, hi) = (a.min(b).max(self.bump.c), a.max(b).min(self.bump.d));
        if lo >= hi {
            return Ok([m2, m1]);
        }
        let [e2, e1] = integrate(
            |x| {
                let d = self.bump.derivative(x);
                Ok([x * x * d, x * d])
            },
            lo,
            hi,
            &self.quad,
        )?;
        let sign = if b >= a { 1.0 } else { -1.0 };
        Ok([m2 + sign * e2, m1 + sign * e1])
    }

    fn describe(&self) -> String {
        format!(
            "{} + bump on ({}, {}) of height {}",
            self.base.describe(),
            self.bump.c,
            self.bump.d,
            self.bump.amplitude
        )
    }
}

const BUMP_PROBES: usize = 1025;

/// Adds a mollifier bump supported in `J = (c, d)` to `F`. The amplitude is
/// reduced if needed so that `|f'| ≤ ½ inf_J |F'|`.
pub fn perturb_nonunique(fg: &ReconstructedFg, j: (f64, f64), amplitude: f64) -> Result<ReconstructedFg> {
    let (c, d) = j;
    if !(c < d) || !c.is_finite() || !d.is_finite() {
        return Err(Error::invalid(format!("bump interval ({c}, {d}) is empty")));
    }
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::invalid(format!("bump amplitude must be positive, got {amplitude}")));
    }
    let (lo, hi) = fg.i1();
    if !(c > hi || d < lo) {
        return Err(Error::IntervalOverlapsData { c, d, lo, hi });
    }
    let mut inf = f64::INFINITY;
    for i in 0..BUMP_PROBES {
        let x = c + (d - c) * i as f64 / (BUMP_PROBES - 1) as f64;
        inf = inf.min(fg.fprime.slope(x)?.abs());
    }
    if !(inf > 0.0) {
        return Err(Error::AmplitudeUnachievable { c, d });
    }
    let max_slope_per_amplitude = unit_bump_max_slope() * 2.0 / (d - c);
    let cap = 0.5 * inf / max_slope_per_amplitude;
    let amplitude = amplitude.min(cap);
    Ok(ReconstructedFg { bump: Some(Bump { c, d, amplitude }), ..fg.clone() })
}
