use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Vec3;

pub const DEFAULT_GRID_DENSITY: usize = 64;

/// Entries with magnitude at or below this count as vanishing.
pub const DEFAULT_ZERO_TOL: f64 = 1e-8;

/// Label attached to every report.
pub const EVIDENCE_NOTE: &str =
    "sampled evidence on a finite grid; a numerical certificate, not a proof of injectivity";

/// Closed parameter rectangle `[t0, t1] × [s0, s1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub t: (f64, f64),
    pub s: (f64, f64),
}

impl Rect {
    pub fn validate(&self) -> Result<()> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        if ok(self.t) && ok(self.s) {
            Ok(())
        } else {
            Err(Error::invalid(format!("degenerate rectangle {:?} x {:?}", self.t, self.s)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianSample {
    pub t: f64,
    pub s: f64,
    /// `j[a][b] = ∂X_{comp a} / ∂(t, s)_b`
    pub j: [[f64; 2]; 2],
    pub det: f64,
}

/// A grid point where a hypothesis fails, and which one.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub t: f64,
    pub s: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianReport {
    /// Indices of the two components of `X` forming the map.
    pub components: (usize, usize),
    pub samples: Vec<JacobianSample>,
    /// (i): both diagonal entries and the determinant nonvanishing, each with
    /// constant sign over the grid.
    pub minors_nonvanishing: bool,
    /// (ii): determinant nonvanishing and each diagonal entry of constant,
    /// nonzero sign.
    pub det_nonzero_and_diag_sign_constant: bool,
    /// Set when (ii) fails only because a diagonal entry vanishes while the
    /// determinant does not; whether that counts as a sign change is a matter
    /// of reading.
    pub zero_diagonal_ambiguity: bool,
    pub witnesses: Vec<Witness>,
    pub note: &'static str,
}

impl JacobianReport {
    pub fn certified(&self) -> bool {
        self.minors_nonvanishing || self.det_nonzero_and_diag_sign_constant
    }
}

/// Sign classification of one quantity over the grid.
#[derive(Debug, Default)]
struct SignTrack {
    zero: Option<(f64, f64)>,
    pos: bool,
    neg: bool,
    change: Option<(f64, f64)>,
}

impl SignTrack {
    fn add(&mut self, v: f64, tol: f64, at: (f64, f64)) {
        if !(v.abs() > tol) {
            self.zero.get_or_insert(at);
        } else if v > 0.0 {
            self.pos = true;
            if self.neg {
                self.change.get_or_insert(at);
            }
        } else {
            self.neg = true;
            if self.pos {
                self.change.get_or_insert(at);
            }
        }
    }

    fn nonvanishing(&self) -> bool {
        self.zero.is_none()
    }

    fn constant_nonzero_sign(&self) -> bool {
        self.zero.is_none() && self.change.is_none()
    }

    fn witnesses(&self, name: &str, out: &mut Vec<Witness>) {
        if let Some((t, s)) = self.zero {
            out.push(Witness { t, s, reason: format!("{name} vanishes") });
        }
        if let Some((t, s)) = self.change {
            out.push(Witness { t, s, reason: format!("{name} changes sign") });
        }
    }
}

/// Samples the Jacobian of `(t, s) ↦ (X_i, X_j)` by central differences on a
/// `density × density` grid over the rectangle and evaluates the two
/// Gale-Nikaidô injectivity hypotheses on it.
pub fn gale_nikaido_check<F>(
    eval: F,
    rect: Rect,
    density: usize,
    components: (usize, usize),
    zero_tol: f64,
) -> Result<JacobianReport>
where
    F: Fn(f64, f64) -> Result<Vec3> + Sync,
{
    rect.validate()?;
    if density < 2 {
        return Err(Error::invalid("grid density must be at least 2"));
    }
    if components.0 > 2 || components.1 > 2 || components.0 == components.1 {
        return Err(Error::invalid(format!("invalid component pair {components:?}")));
    }
    let span = (rect.t.1 - rect.t.0).max(rect.s.1 - rect.s.0);
    let h = 1e-6 * span.max(1.0);
    let at = |(a, b): (f64, f64), i: usize| a + (b - a) * i as f64 / (density - 1) as f64;
    let points: Vec<(f64, f64)> =
        (0..density).flat_map(|i| (0..density).map(move |k| (i, k))).map(|(i, k)| (at(rect.t, i), at(rect.s, k))).collect();
    let samples = points
        .par_iter()
        .map(|&(t, s)| {
            let dt = (eval(t + h, s)? - eval(t - h, s)?) * (0.5 / h);
            let ds = (eval(t, s + h)? - eval(t, s - h)?) * (0.5 / h);
            let (a, b) = components;
            let j = [[dt[a], ds[a]], [dt[b], ds[b]]];
            Ok(JacobianSample { t, s, j, det: j[0][0] * j[1][1] - j[0][1] * j[1][0] })
        })
        .collect::<Result<Vec<_>>>()?;

    let (mut d1, mut d2, mut det) = (SignTrack::default(), SignTrack::default(), SignTrack::default());
    for x in &samples {
        d1.add(x.j[0][0], zero_tol, (x.t, x.s));
        d2.add(x.j[1][1], zero_tol, (x.t, x.s));
        det.add(x.det, zero_tol, (x.t, x.s));
    }
    let minors = d1.constant_nonzero_sign() && d2.constant_nonzero_sign() && det.constant_nonzero_sign();
    let second = det.nonvanishing() && d1.constant_nonzero_sign() && d2.constant_nonzero_sign();
    let diag_signs_ok = d1.change.is_none() && d2.change.is_none();
    let ambiguity = !second && det.nonvanishing() && diag_signs_ok && !(d1.nonvanishing() && d2.nonvanishing());
    let mut witnesses = Vec::new();
    d1.witnesses("J11", &mut witnesses);
    d2.witnesses("J22", &mut witnesses);
    det.witnesses("det J", &mut witnesses);
    Ok(JacobianReport {
        components,
        samples,
        minors_nonvanishing: minors,
        det_nonzero_and_diag_sign_constant: second,
        zero_diagonal_ambiguity: ambiguity,
        witnesses,
        note: EVIDENCE_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{BcSurface, ParamPoint};

    fn plane(t: f64, s: f64) -> Result<Vec3> {
        Ok(Vec3::new(s, 0.0, t))
    }

    fn close(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> bool {
        (0..2).all(|i| (0..2).all(|k| (a[i][k] - b[i][k]).abs() < 1e-9))
    }

    const RECT: Rect = Rect { t: (-1.0, 1.0), s: (-1.0, 1.0) };

    #[test]
    fn plane_over_x2_x3_is_not_certified() {
        let rep = gale_nikaido_check(plane, RECT, 16, (1, 2), DEFAULT_ZERO_TOL).unwrap();
        assert!(rep.samples.iter().all(|x| close(x.j, [[0.0, 0.0], [1.0, 0.0]])));
        assert!(!rep.minors_nonvanishing);
        assert!(!rep.det_nonzero_and_diag_sign_constant);
        assert!(!rep.zero_diagonal_ambiguity);
        assert!(!rep.certified());
        assert!(rep.witnesses.iter().any(|w| w.reason == "det J vanishes"));
    }

    #[test]
    fn plane_over_x1_x3_is_ambiguous() {
        let rep = gale_nikaido_check(plane, RECT, 16, (0, 2), DEFAULT_ZERO_TOL).unwrap();
        assert!(rep.samples.iter().all(|x| close(x.j, [[0.0, 1.0], [1.0, 0.0]])));
        assert!(rep.samples.iter().all(|x| (x.det + 1.0).abs() < 1e-9));
        assert!(!rep.minors_nonvanishing);
        assert!(!rep.det_nonzero_and_diag_sign_constant);
        assert!(rep.zero_diagonal_ambiguity);
    }

    #[test]
    fn graph_surface_is_certified() {
        let surf = BcSurface::parse("r", "s").unwrap();
        let eval = |r: f64, s: f64| surf.eval(ParamPoint::new(r, s));
        let rect = Rect { t: (-0.3, 0.3), s: (-0.3, 0.3) };
        let rep = gale_nikaido_check(eval, rect, 12, (0, 1), DEFAULT_ZERO_TOL).unwrap();
        assert!(rep.minors_nonvanishing);
        assert!(rep.det_nonzero_and_diag_sign_constant);
        assert!(rep.witnesses.is_empty());
        // closed-form Jacobian of (x, y) in (r, s)
        for x in &rep.samples {
            let (r, s) = (x.t, x.s);
            assert!((x.j[0][0] - 0.5 * (1.0 - r * r)).abs() < 1e-8);
            assert!((x.j[1][1] - 0.5 * (1.0 + s * s)).abs() < 1e-8);
            assert!((x.det - 0.5 * (1.0 - r * r * s * s)).abs() < 1e-8);
        }
    }

    #[test]
    fn sign_change_is_witnessed() {
        let f = |t: f64, s: f64| Ok(Vec3::new(t * t + s, s, 0.0));
        let rep = gale_nikaido_check(f, RECT, 9, (0, 1), DEFAULT_ZERO_TOL).unwrap();
        assert!(!rep.minors_nonvanishing);
        assert!(rep.witnesses.iter().any(|w| w.reason.starts_with("J11")));
    }

    #[test]
    fn rejects_degenerate_input() {
        let flat = Rect { t: (0.0, 0.0), s: (0.0, 1.0) };
        assert!(gale_nikaido_check(plane, flat, 8, (1, 2), DEFAULT_ZERO_TOL).is_err());
        assert!(gale_nikaido_check(plane, RECT, 8, (1, 1), DEFAULT_ZERO_TOL).is_err());
    }
}
