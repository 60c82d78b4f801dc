//! Tangent frames, the Gauss map and its inverse.

use super::{BcSurface, ParamPoint};
use crate::error::{Error, Result};
use crate::geometry::{inner, Signature, Vec3};

/// Accepted deviation of `⟨N, N⟩` from 1 in [`normal_to_param`].
pub const DEFAULT_UNIT_TOL: f64 = 1e-9;

/// Threshold on `|1 + α² − β²|` in [`stereographic`].
pub const DEFAULT_PROJECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameReport {
    pub xr: Vec3,
    pub xs: Vec3,
    pub xalpha: Vec3,
    pub xbeta: Vec3,
    /// `⟨X_α, X_α⟩`
    pub eaa: f64,
    /// `⟨X_β, X_β⟩`
    pub ebb: f64,
    /// `⟨X_α, X_β⟩`
    pub eab: f64,
    pub regular: bool,
}

/// Closed-form partial derivatives; no quadrature involved.
pub fn tangents(surf: &BcSurface, p: ParamPoint) -> Result<FrameReport> {
    let fp = surf.fprime(p.r)?;
    let gp = surf.gprime(p.s)?;
    let (r, s) = (p.r, p.s);
    let xr = Vec3::new(0.5 * (1.0 - r * r) * fp, -0.5 * (1.0 + r * r) * fp, r * fp);
    let xs = Vec3::new(0.5 * (1.0 - s * s) * gp, 0.5 * (1.0 + s * s) * gp, s * gp);
    let xalpha = xr + xs;
    let xbeta = xr - xs;
    let b3 = Signature::B3;
    Ok(FrameReport {
        xr,
        xs,
        xalpha,
        xbeta,
        eaa: inner(xalpha, xalpha, b3),
        ebb: inner(xbeta, xbeta, b3),
        eab: inner(xalpha, xbeta, b3),
        regular: is_regular(surf, p, super::DEFAULT_REGULARITY_TOL),
    })
}

/// `F'(r) G'(s) ≠ 0` and `r²s² ≠ 1`, each with margin `tol`. Points where the
/// generating functions cannot be differentiated are reported as non-regular.
pub fn is_regular(surf: &BcSurface, p: ParamPoint, tol: f64) -> bool {
    let (Ok(fp), Ok(gp)) = (surf.fprime(p.r), surf.gprime(p.s)) else {
        return false;
    };
    fp.abs() > tol && gp.abs() > tol && (1.0 - p.r * p.r * p.s * p.s).abs() > tol
}

/// `Ñ(r, s) = (r + s, r − s, rs − 1) / (1 + rs)`, independent of `F` and `G`.
pub fn ntilde(p: ParamPoint) -> Vec3 {
    let d = 1.0 + p.r * p.s;
    Vec3::new((p.r + p.s) / d, (p.r - p.s) / d, (p.r * p.s - 1.0) / d)
}

/// Oriented unit normal `X_r × X_s / ‖X_r × X_s‖ = −sgn(F'G') Ñ`.
pub fn unit_normal(surf: &BcSurface, p: ParamPoint, tol: f64) -> Result<Vec3> {
    if !is_regular(surf, p, tol) {
        return Err(Error::NonRegularPoint { r: p.r, s: p.s });
    }
    let sign = (surf.fprime(p.r)? * surf.gprime(p.s)?).signum();
    Ok(-sign * ntilde(p))
}

/// Recovers `(r, s)` from a unit normal. The normal is first oriented so that
/// its third component is negative, which selects `Ñ` among `±Ñ`.
pub fn normal_to_param(n: Vec3, tol: f64) -> Result<ParamPoint> {
    let q = inner(n, n, Signature::B3);
    if (q - 1.0).abs() >= tol {
        return Err(Error::NotUnitNormal(q));
    }
    if n.z.abs() <= tol {
        return Err(Error::NormalThirdComponentZero);
    }
    let m = if n.z > 0.0 { -n } else { n };
    let d = 1.0 - m.z;
    Ok(ParamPoint::new((m.x + m.y) / d, (m.x - m.y) / d))
}

/// Compares the two equivalent forms of the inversion,
/// `(n1 + n2)/(1 − n3) = (1 + n3)/(n1 − n2)` and
/// `(n1 − n2)/(1 − n3) = (1 + n3)/(n1 + n2)`, after orienting `n3 < 0`.
/// Returns the larger discrepancy, or `None` when a denominator vanishes.
pub fn alternative_form_gap(n: Vec3) -> Option<f64> {
    let m = if n.z > 0.0 { -n } else { n };
    let (sum, diff) = (m.x + m.y, m.x - m.y);
    if diff == 0.0 || sum == 0.0 || m.z == 1.0 {
        return None;
    }
    let d = 1.0 - m.z;
    let g1 = (sum / d - (1.0 + m.z) / diff).abs();
    let g2 = (diff / d - (1.0 + m.z) / sum).abs();
    Some(g1.max(g2))
}

/// The point where the line through `(α, β, 0)` and the pole `(0, 0, 1)`
/// meets the unit quadric `x² − y² + z² = 1`; this is `Ñ` in conformal
/// coordinates.
pub fn stereographic(alpha: f64, beta: f64, tol: f64) -> Result<Vec3> {
    let d = 1.0 + alpha * alpha - beta * beta;
    if d.abs() <= tol {
        return Err(Error::ProjectionSingular(d));
    }
    Ok(Vec3::new(2.0 * alpha / d, 2.0 * beta / d, (alpha * alpha - beta * beta - 1.0) / d))
}
