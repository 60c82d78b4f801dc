//! Finite-difference verification of the surface equations.
//!
//! Stencils are built from displacements `X(p + d) − X(p)` computed with
//! local integrals, so the finite differences never subtract two long
//! quadratures from each other.

use super::{is_regular, tangents, BcSurface, ParamPoint, DEFAULT_REGULARITY_TOL};
use crate::error::{Error, Result};
use crate::geometry::{cross, inner, norm, Signature, Vec3};

const DEGENERATE_FORM_TOL: f64 = 1e-12;

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("finite-difference step must be positive, got {h}")))
    }
}

/// Mean curvature in the `B3` metric from fourth-order central differences of
/// `X` with step `h`: `H = (L𝒢 − 2M𝓕 + N𝓔) / (2(𝓔𝒢 − 𝓕²))`.
pub fn mean_curvature_fd(surf: &BcSurface, p: ParamPoint, h: f64) -> Result<f64> {
    check_step(h)?;
    for dr in [-2.0 * h, -h, 0.0, h, 2.0 * h] {
        for ds in [-2.0 * h, -h, 0.0, h, 2.0 * h] {
            let q = ParamPoint::new(p.r + dr, p.s + ds);
            if !is_regular(surf, q, DEFAULT_REGULARITY_TOL) {
                return Err(Error::NonRegularPoint { r: q.r, s: q.s });
            }
        }
    }
    // displacements of the stencil nodes from the centre
    let r1 = surf.r_increment(p.r, p.r + h)?;
    let rm1 = surf.r_increment(p.r, p.r - h)?;
    let r2 = surf.r_increment(p.r, p.r + 2.0 * h)?;
    let rm2 = surf.r_increment(p.r, p.r - 2.0 * h)?;
    let s1 = surf.s_increment(p.s, p.s + h)?;
    let sm1 = surf.s_increment(p.s, p.s - h)?;
    let s2 = surf.s_increment(p.s, p.s + 2.0 * h)?;
    let sm2 = surf.s_increment(p.s, p.s - 2.0 * h)?;

    let first = |p1: Vec3, m1: Vec3, p2: Vec3, m2: Vec3| (p1 * 8.0 - m1 * 8.0 - p2 + m2) * (1.0 / (12.0 * h));
    let second =
        |p1: Vec3, m1: Vec3, p2: Vec3, m2: Vec3| ((p1 + m1) * 16.0 - p2 - m2) * (1.0 / (12.0 * h * h));
    let xr = first(r1, rm1, r2, rm2);
    let xs = first(s1, sm1, s2, sm2);
    let xrr = second(r1, rm1, r2, rm2);
    let xss = second(s1, sm1, s2, sm2);
    let xrs = ((r1 + s1) - (r1 + sm1) - (rm1 + s1) + (rm1 + sm1)) * (0.25 / (h * h));

    let b3 = Signature::B3;
    let e = inner(xr, xr, b3);
    let f = inner(xr, xs, b3);
    let g = inner(xs, xs, b3);
    let det = e * g - f * f;
    if det.abs() < DEGENERATE_FORM_TOL {
        return Err(Error::DegenerateFirstForm { r: p.r, s: p.s, det });
    }
    let c = cross(xr, xs, b3);
    let n = c * (1.0 / norm(c, b3));
    let l = inner(xrr, n, b3);
    let m = inner(xrs, n, b3);
    let nn = inner(xss, n, b3);
    Ok((l * g - 2.0 * m * f + nn * e) / (2.0 * det))
}

/// `X_αα − X_ββ` by central second differences in the conformal coordinates
/// `α = (r + s)/2`, `β = (r − s)/2`, i.e. on the nodes `(r ± h, s ± h)`.
pub fn wave_residual(surf: &BcSurface, p: ParamPoint, h: f64) -> Result<Vec3> {
    check_step(h)?;
    // X(α ± h, β) = X(r ± h, s ± h); X(α, β ± h) = X(r ± h, s ∓ h)
    let a_plus = surf.displacement(p, h, h)?;
    let a_minus = surf.displacement(p, -h, -h)?;
    let b_plus = surf.displacement(p, h, -h)?;
    let b_minus = surf.displacement(p, -h, h)?;
    let x_aa = (a_plus + a_minus) * (1.0 / (h * h));
    let x_bb = (b_plus + b_minus) * (1.0 / (h * h));
    Ok(x_aa - x_bb)
}

/// Ratio `‖res(h)‖∞ / ‖res(h/2)‖∞` of [`wave_residual`] under step halving,
/// together with both residual norms.
pub fn wave_residual_order(surf: &BcSurface, p: ParamPoint, h: f64) -> Result<(f64, f64, f64)> {
    let coarse = wave_residual(surf, p, h)?.norm_inf();
    let fine = wave_residual(surf, p, 0.5 * h)?.norm_inf();
    Ok((coarse / fine, coarse, fine))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Checked,
    /// `|rs| ≥ 1`: outside every soliton domain.
    OutsideSolitonDomain,
    NonRegular,
}

/// Per-point outcome of [`verify_bi_pde`].
#[derive(Debug, Clone, PartialEq)]
pub struct BiPdePoint {
    pub param: ParamPoint,
    pub status: PointStatus,
    /// Surface point `(x, y, φ)`.
    pub position: Vec3,
    pub phi_x: f64,
    pub phi_y: f64,
    pub phi_xx: f64,
    pub phi_xy: f64,
    pub phi_yy: f64,
    /// `(1 − φ_y²)φ_xx + 2φ_xφ_yφ_xy − (1 + φ_x²)φ_yy`
    pub pde_residual: f64,
    /// `φ_x² − φ_y² + 1`
    pub hyperbolicity: f64,
    /// `u = (φ_x − φ_y)/2`, `v = (φ_x + φ_y)/2`
    pub u: f64,
    pub v: f64,
    /// `(r, s)` recomputed from `(u, v)`.
    pub recovered: ParamPoint,
}

impl BiPdePoint {
    fn skipped(param: ParamPoint, status: PointStatus) -> Self {
        BiPdePoint {
            param,
            status,
            position: Vec3::ZERO,
            phi_x: f64::NAN,
            phi_y: f64::NAN,
            phi_xx: f64::NAN,
            phi_xy: f64::NAN,
            phi_yy: f64::NAN,
            pde_residual: f64::NAN,
            hyperbolicity: f64::NAN,
            u: f64::NAN,
            v: f64::NAN,
            recovered: ParamPoint::new(f64::NAN, f64::NAN),
        }
    }

    pub fn recovery_error(&self) -> f64 {
        (self.recovered.r - self.param.r).abs().max((self.recovered.s - self.param.s).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiPdeReport {
    pub points: Vec<BiPdePoint>,
}

impl BiPdeReport {
    fn checked(&self) -> impl Iterator<Item = &BiPdePoint> {
        self.points.iter().filter(|p| p.status == PointStatus::Checked)
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.checked().map(|p| p.pde_residual.abs()).fold(0.0, f64::max)
    }

    pub fn min_hyperbolicity(&self) -> f64 {
        self.checked().map(|p| p.hyperbolicity).fold(f64::INFINITY, f64::min)
    }

    pub fn max_recovery_error(&self) -> f64 {
        self.checked().map(|p| p.recovery_error()).fold(0.0, f64::max)
    }

    pub fn checked_count(&self) -> usize {
        self.checked().count()
    }
}

const NEWTON_MAX_ITER: usize = 50;

/// Solves `(x, y)(r, s) = target` by Newton's method seeded at `centre`,
/// returning the parameter point and `z − z(centre)` there.
fn invert_graph(surf: &BcSurface, centre: ParamPoint, target: (f64, f64)) -> Result<(ParamPoint, f64)> {
    let mut q = centre;
    let mut disp = Vec3::ZERO;
    let scale = 1.0 + target.0.abs().max(target.1.abs());
    for _ in 0..NEWTON_MAX_ITER {
        let fx = disp.x - target.0;
        let fy = disp.y - target.1;
        if fx.abs().max(fy.abs()) <= 4.0 * f64::EPSILON * scale {
            return Ok((q, disp.z));
        }
        let fr = tangents(surf, q)?;
        let (a, b, c, d) = (fr.xr.x, fr.xs.x, fr.xr.y, fr.xs.y);
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dr = (d * fx - b * fy) / det;
        let ds = (-c * fx + a * fy) / det;
        let next = ParamPoint::new(q.r - dr, q.s - ds);
        disp = surf.displacement(centre, next.r - centre.r, next.s - centre.s)?;
        let step = dr.abs().max(ds.abs());
        q = next;
        if step <= 1e-16 * (1.0 + q.r.abs().max(q.s.abs())) {
            return Ok((q, disp.z));
        }
    }
    Err(Error::GraphInversionFailure { r: centre.r, s: centre.s })
}

/// Recovers the height function `φ(x, y)` around each grid point by locally
/// inverting `(r, s) ↦ (x, y)` and checks the Born-Infeld equation and its
/// hyperbolicity condition with finite differences of step `h` in `(x, y)`.
pub fn verify_bi_pde(surf: &BcSurface, grid: &[ParamPoint], h: f64) -> Result<BiPdeReport> {
    use rayon::prelude::*;
    check_step(h)?;
    let points = grid
        .par_iter()
        .map(|&p| verify_point(surf, p, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(BiPdeReport { points })
}

fn verify_point(surf: &BcSurface, p: ParamPoint, h: f64) -> Result<BiPdePoint> {
    if !p.in_soliton_domain() {
        return Ok(BiPdePoint::skipped(p, PointStatus::OutsideSolitonDomain));
    }
    if !is_regular(surf, p, DEFAULT_REGULARITY_TOL) {
        return Ok(BiPdePoint::skipped(p, PointStatus::NonRegular));
    }
    let position = surf.eval(p)?;
    // φ(x0 + i h, y0 + j h) − φ(x0, y0)
    let mut phi = [[0.0; 3]; 3];
    for (i, di) in [-1.0, 0.0, 1.0].into_iter().enumerate() {
        for (j, dj) in [-1.0, 0.0, 1.0].into_iter().enumerate() {
            if i == 1 && j == 1 {
                continue;
            }
            phi[i][j] = invert_graph(surf, p, (di * h, dj * h))?.1;
        }
    }
    let h2 = h * h;
    let phi_x = (phi[2][1] - phi[0][1]) / (2.0 * h);
    let phi_y = (phi[1][2] - phi[1][0]) / (2.0 * h);
    let phi_xx = (phi[2][1] + phi[0][1]) / h2;
    let phi_yy = (phi[1][2] + phi[1][0]) / h2;
    let phi_xy = (phi[2][2] - phi[2][0] - phi[0][2] + phi[0][0]) / (4.0 * h2);
    let pde_residual = (1.0 - phi_y * phi_y) * phi_xx + 2.0 * phi_x * phi_y * phi_xy - (1.0 + phi_x * phi_x) * phi_yy;
    let hyperbolicity = phi_x * phi_x - phi_y * phi_y + 1.0;
    let u = 0.5 * (phi_x - phi_y);
    let v = 0.5 * (phi_x + phi_y);
    // r = (√(1+4uv) − 1)/(2v) = 2u/(√(1+4uv) + 1), and symmetrically for s
    let root = (1.0 + 4.0 * u * v).sqrt();
    let recovered = ParamPoint::new(2.0 * u / (root + 1.0), 2.0 * v / (root + 1.0));
    Ok(BiPdePoint {
        param: p,
        status: PointStatus::Checked,
        position,
        phi_x,
        phi_y,
        phi_xx,
        phi_xy,
        phi_yy,
        pde_residual,
        hyperbolicity,
        u,
        v,
        recovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surf(f: &str, g: &str) -> BcSurface {
        BcSurface::parse(f, g).unwrap()
    }

    #[test]
    fn mean_curvature_vanishes() {
        let h = mean_curvature_fd(&surf("r", "s"), ParamPoint::new(0.3, -0.2), 1e-3).unwrap();
        assert!(h.abs() < 1e-5, "H = {h}");
        let h = mean_curvature_fd(&surf("sin(r)", "s + s^3"), ParamPoint::new(0.2, 0.1), 1e-3).unwrap();
        assert!(h.abs() < 1e-5, "H = {h}");
    }

    #[test]
    fn mean_curvature_rejects_singular_points() {
        let r = mean_curvature_fd(&surf("r", "s"), ParamPoint::new(1.0, 1.0), 1e-3);
        assert!(matches!(r, Err(Error::NonRegularPoint { .. })));
        let r = mean_curvature_fd(&surf("r^2", "s"), ParamPoint::new(0.001, 0.3), 1e-3);
        assert!(matches!(r, Err(Error::NonRegularPoint { .. })));
    }

    #[test]
    fn wave_equation_holds() {
        for (f, g) in [("r", "s"), ("exp(r)", "s")] {
            let res = wave_residual(&surf(f, g), ParamPoint::new(0.4, 0.1), 1e-3).unwrap();
            assert!(res.norm_inf() < 1e-5, "{f}, {g}: {res}");
        }
    }

    #[test]
    fn bi_pde_on_identity_surface() {
        let s = surf("r", "s");
        let grid: Vec<_> = (0..5)
            .flat_map(|i| (0..5).map(move |j| ParamPoint::new(-0.4 + 0.2 * i as f64, -0.4 + 0.2 * j as f64)))
            .collect();
        let rep = verify_bi_pde(&s, &grid, 1e-3).unwrap();
        assert_eq!(rep.checked_count(), 25);
        assert!(rep.max_abs_residual() < 1e-3, "{}", rep.max_abs_residual());
        assert!(rep.min_hyperbolicity() > 0.0);
    }

    #[test]
    fn bi_pde_recovers_parameters_from_gradient() {
        let s = surf("r", "s");
        let rep = verify_bi_pde(&s, &[ParamPoint::new(0.3, 0.2)], 1e-3).unwrap();
        assert!(rep.points[0].recovery_error() < 1e-6, "{:?}", rep.points[0]);
    }

    #[test]
    fn bi_pde_flags_points_outside_domain() {
        let s = surf("r", "s");
        let rep = verify_bi_pde(&s, &[ParamPoint::new(1.5, 0.9), ParamPoint::new(0.1, 0.1)], 1e-3).unwrap();
        assert_eq!(rep.points[0].status, PointStatus::OutsideSolitonDomain);
        assert_eq!(rep.points[1].status, PointStatus::Checked);
        assert_eq!(rep.checked_count(), 1);
    }
}
