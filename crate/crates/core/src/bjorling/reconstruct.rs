use std::sync::Arc;

use super::strip::{BjorlingStrip, DEFAULT_STRIP_TOL};
use super::tabulated::{Extension, TabulatedProfile};
use super::Bump;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::spline::CubicSpline;
use crate::surface::{ParamPoint, Profile};

/// `|r'|` or `|s'|` at or below this is treated as vanishing.
pub const DEFAULT_FLAT_TOL: f64 = 1e-9;

/// Default relative tolerance for `c3' = r F' r' + s G' s'`.
pub const DEFAULT_CONSISTENCY_TOL: f64 = 1e-6;

/// The parameter curve `t ↦ (r(t), s(t))` obtained by inverting the normal.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamCurve {
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    /// `r'(t)` and `s'(t)` from spline differentiation.
    pub dr: Vec<f64>,
    pub ds: Vec<f64>,
    /// Sample indices where `r'` or `s'` vanishes.
    pub flat: Vec<usize>,
}

impl ParamCurve {
    pub fn point(&self, i: usize) -> ParamPoint {
        ParamPoint::new(self.r[i], self.s[i])
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Maps an oriented normal (`n3 < 0`) to `(r, s)`.
pub(crate) fn invert_normal(n: Vec3) -> ParamPoint {
    let d = 1.0 - n.z;
    ParamPoint::new((n.x + n.y) / d, (n.x - n.y) / d)
}

/// `(r(t), s(t)) = ((n1 + n2)/(1 − n3), (n1 − n2)/(1 − n3))` after orienting the
/// normal so that `n3 < 0`, with derivatives from cubic splines in `t`.
pub fn param_curve(strip: &BjorlingStrip) -> Result<ParamCurve> {
    let strip = strip.oriented();
    let samples = strip.samples();
    if samples.iter().any(|x| x.n.z.abs() <= DEFAULT_STRIP_TOL) {
        return Err(Error::NormalThirdComponentZero);
    }
    let t: Vec<f64> = samples.iter().map(|x| x.t).collect();
    let (r, s): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .map(|x| {
            let p = invert_normal(x.n);
            (p.r, p.s)
        })
        .unzip();
    let rs = CubicSpline::new(t.clone(), r.clone())?;
    let ss = CubicSpline::new(t.clone(), s.clone())?;
    let dr: Vec<f64> = t.iter().map(|&x| rs.derivative(x)).collect();
    let ds: Vec<f64> = t.iter().map(|&x| ss.derivative(x)).collect();
    let flat = (0..t.len())
        .filter(|&i| dr[i].abs() <= DEFAULT_FLAT_TOL || ds[i].abs() <= DEFAULT_FLAT_TOL)
        .collect();
    Ok(ParamCurve { t, r, s, dr, ds, flat })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructOptions {
    pub consistency_tol: f64,
    pub extension: Extension,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions { consistency_tol: DEFAULT_CONSISTENCY_TOL, extension: Extension::Constant }
    }
}

/// Generating functions recovered from a strip.
#[derive(Debug, Clone)]
pub struct ReconstructedFg {
    pub curve: ParamCurve,
    /// `F'` against `r` and `G'` against `s`, anchored at `r(a)` and `s(a)`.
    pub fprime: TabulatedProfile,
    pub gprime: TabulatedProfile,
    /// Values of `F'(r(t))` and `G'(s(t))` at the samples.
    pub fprime_samples: Vec<f64>,
    pub gprime_samples: Vec<f64>,
    /// Largest `|c3' − (r F' r' + s G' s')| / (1 + |c'|∞)` over the samples.
    pub max_consistency_residual: f64,
    /// `c(a)`, the value the surface takes at `(r(a), s(a))`.
    pub start_point: Vec3,
    /// Optional perturbation of `F` used to exhibit non-uniqueness.
    pub bump: Option<Bump>,
}

impl ReconstructedFg {
    /// `I1 = r(I)`.
    pub fn i1(&self) -> (f64, f64) {
        self.fprime.data_interval()
    }

    /// `I2 = s(I)`.
    pub fn i2(&self) -> (f64, f64) {
        self.gprime.data_interval()
    }

    pub fn base(&self) -> ParamPoint {
        self.curve.point(0)
    }

    pub fn f_profile(&self) -> Arc<dyn Profile> {
        let tab: Arc<dyn Profile> = Arc::new(self.fprime.clone());
        match self.bump {
            Some(bump) => Arc::new(super::BumpedProfile::new(tab, bump)),
            None => tab,
        }
    }

    pub fn g_profile(&self) -> Arc<dyn Profile> {
        Arc::new(self.gprime.clone())
    }
}

fn strictly_monotone(values: &[f64], curve: &ParamCurve, derivs: &[f64], which: char) -> Result<()> {
    let increasing = values[values.len() - 1] > values[0];
    for (i, w) in values.windows(2).enumerate() {
        let ok = if increasing { w[1] > w[0] } else { w[1] < w[0] };
        if !ok {
            return Err(Error::NonMonotoneParamCurve { which, t: curve.t[i + 1] });
        }
    }
    if let Some(i) = derivs.iter().position(|d| d.abs() <= DEFAULT_FLAT_TOL) {
        return Err(Error::NonMonotoneParamCurve { which, t: curve.t[i] });
    }
    Ok(())
}

/// Tabulates `F'(r(t))` and `G'(s(t))` from the strip:
///
/// ```text
/// F' = [s²(c1' + c2') + (c1' − c2')] / [(1 − r²s²) r']
/// G' = [(c1' + c2') + r²(c1' − c2')] / [(1 − r²s²) s']
/// ```
///
/// and checks the third component `c3' = r F' r' + s G' s'`.
pub fn reconstruct_fg(strip: &BjorlingStrip, opts: &ReconstructOptions) -> Result<ReconstructedFg> {
    if !(opts.consistency_tol > 0.0) {
        return Err(Error::invalid("consistency tolerance must be positive"));
    }
    let curve = param_curve(strip)?;
    strictly_monotone(&curve.r, &curve, &curve.dr, 'r')?;
    strictly_monotone(&curve.s, &curve, &curve.ds, 's')?;
    for i in 0..curve.len() {
        let rs = curve.r[i] * curve.s[i];
        if rs.abs() >= 1.0 {
            return Err(Error::DomainViolation { t: curve.t[i], rs });
        }
    }

    let samples = strip.samples();
    let mut fps = Vec::with_capacity(curve.len());
    let mut gps = Vec::with_capacity(curve.len());
    let mut worst = 0.0f64;
    for (i, x) in samples.iter().enumerate() {
        let (r, s) = (curve.r[i], curve.s[i]);
        let plus = x.cdot.x + x.cdot.y;
        let minus = x.cdot.x - x.cdot.y;
        let k = 1.0 - r * r * s * s;
        // F'r' and G's', free of the spline derivative
        let fr = (s * s * plus + minus) / k;
        let gs = (plus + r * r * minus) / k;
        let residual = (x.cdot.z - (r * fr + s * gs)) / (1.0 + x.cdot.norm_inf());
        if !(residual.abs() <= opts.consistency_tol) {
            return Err(Error::ConsistencyFailure { t: x.t, residual });
        }
        worst = worst.max(residual.abs());
        fps.push(fr / curve.dr[i]);
        gps.push(gs / curve.ds[i]);
    }

    let fprime = TabulatedProfile::new(&curve.r, &fps, curve.r[0], opts.extension)?;
    let gprime = TabulatedProfile::new(&curve.s, &gps, curve.s[0], opts.extension)?;
    Ok(ReconstructedFg {
        start_point: samples[0].c,
        curve,
        fprime,
        gprime,
        fprime_samples: fps,
        gprime_samples: gps,
        max_consistency_residual: worst,
        bump: None,
    })
}

/// Re-extends both tabulated derivatives with a different policy.
pub fn extend_fg(fg: &ReconstructedFg, policy: Extension) -> Result<ReconstructedFg> {
    Ok(ReconstructedFg {
        fprime: fg.fprime.with_extension(policy)?,
        gprime: fg.gprime.with_extension(policy)?,
        ..fg.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::surface::BcSurface;

    fn diagonal(f: &str, g: &str) -> BjorlingStrip {
        let surf = BcSurface::parse(f, g).unwrap();
        BjorlingStrip::along_diagonal(&surf, -0.5, 0.5, 201).unwrap()
    }

    fn constant_normal_strip() -> BjorlingStrip {
        let c = ["t", "0", "0"].map(|s| Expr::parse(s, "t").unwrap());
        let n = ["0", "0", "-1"].map(|s| Expr::parse(s, "t").unwrap());
        BjorlingStrip::from_exprs(&c, &n, 0.0, 1.0, 11).unwrap()
    }

    #[test]
    fn constant_normal_is_degenerate() {
        let pc = param_curve(&constant_normal_strip()).unwrap();
        assert!(pc.r.iter().chain(&pc.s).all(|&v| v == 0.0));
        assert_eq!(pc.flat.len(), 11);
        assert!(matches!(
            reconstruct_fg(&constant_normal_strip(), &ReconstructOptions::default()),
            Err(Error::NonMonotoneParamCurve { which: 'r', .. })
        ));
    }

    #[test]
    fn identity_strip_recovers_diagonal() {
        let pc = param_curve(&diagonal("r", "s")).unwrap();
        for i in 0..pc.len() {
            assert!((pc.r[i] - pc.t[i]).abs() < 1e-9);
            assert!((pc.s[i] - pc.t[i]).abs() < 1e-9);
        }
        assert!(pc.flat.is_empty());
    }

    #[test]
    fn orientation_does_not_change_param_curve() {
        let strip = diagonal("sin(r)", "s");
        assert_eq!(param_curve(&strip).unwrap(), param_curve(&strip.negated_normals()).unwrap());
    }

    #[test]
    fn identity_strip_reconstructs_unit_derivatives() {
        let fg = reconstruct_fg(&diagonal("r", "s"), &ReconstructOptions::default()).unwrap();
        for x in [-0.5, -0.31, 0.0, 0.27, 0.5] {
            assert!((fg.fprime.slope(x).unwrap() - 1.0).abs() < 1e-4);
            assert!((fg.gprime.slope(x).unwrap() - 1.0).abs() < 1e-4);
        }
        assert!(fg.max_consistency_residual < 1e-12);
        assert_eq!(fg.i1(), (-0.5, 0.5));
    }

    #[test]
    fn cubic_generating_function_is_recovered() {
        let fg = reconstruct_fg(&diagonal("r + r^3/3", "s"), &ReconstructOptions::default()).unwrap();
        for i in 0..=20 {
            let r = -0.5 + 0.05 * i as f64;
            assert!((fg.fprime.slope(r).unwrap() - (1.0 + r * r)).abs() < 1e-3);
        }
    }

    #[test]
    fn tampered_normal_breaks_consistency() {
        let strip = diagonal("r", "s");
        let mut samples = strip.samples().to_vec();
        // rotate the normal in the (x, z)-plane at one sample
        let n = samples[60].n;
        let (c, s) = (1e-3f64.cos(), 1e-3f64.sin());
        samples[60].n = Vec3::new(c * n.x - s * n.z, n.y, s * n.x + c * n.z);
        let tampered = BjorlingStrip::new(samples).unwrap();
        assert!(matches!(
            reconstruct_fg(&tampered, &ReconstructOptions::default()),
            Err(Error::ConsistencyFailure { .. })
        ));
    }

    #[test]
    fn domain_violation_is_reported() {
        // unit normals with n3 < 0 always give |rs| < 1; this field is not unit
        let samples = (0..11)
            .map(|i| {
                let t = 0.1 * i as f64;
                crate::bjorling::StripSample {
                    t,
                    c: Vec3::ZERO,
                    cdot: Vec3::ZERO,
                    n: Vec3::new(2.0 + t, 0.5 * t, -0.5),
                }
            })
            .collect();
        let strip = BjorlingStrip::new(samples).unwrap();
        assert!(matches!(
            reconstruct_fg(&strip, &ReconstructOptions::default()),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn extension_policy_can_be_swapped() {
        let fg = reconstruct_fg(&diagonal("r + r^3/3", "s"), &ReconstructOptions::default()).unwrap();
        assert_eq!(fg.fprime.slope(2.0).unwrap(), fg.fprime.slope(0.5).unwrap());
        let tapered = extend_fg(&fg, Extension::LinearTaper { width: 0.5 }).unwrap();
        assert!(tapered.fprime.slope(0.6).unwrap() > tapered.fprime.slope(0.5).unwrap());
        assert_eq!(tapered.fprime.slope(0.3).unwrap(), fg.fprime.slope(0.3).unwrap());
    }
}
