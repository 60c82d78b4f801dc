//! Adaptive Gauss-Kronrod (7/15 point) quadrature for vector-valued integrands.

// node and weight tables are quoted to their published precision
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and subdivision budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPolicy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadPolicy {
    fn default() -> Self {
        QuadPolicy { abs_tol: 1e-10, rel_tol: 1e-12, max_subdivisions: 200 }
    }
}

impl QuadPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol >= 0.0) || self.max_subdivisions == 0 {
            return Err(Error::invalid("quadrature policy needs abs_tol > 0, rel_tol >= 0, max_subdivisions >= 1"));
        }
        Ok(())
    }
}

// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod panel: integral estimate and per-component error estimate.
pub fn gk15<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Result<([f64; N], f64)>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    for k in 0..N {
        kronrod[k] = WGK[7] * fc[k];
        gauss[k] = WG[3] * fc[k];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        for k in 0..N {
            let s = f1[k] + f2[k];
            kronrod[k] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * s;
            }
        }
    }
    let mut err = 0.0f64;
    for k in 0..N {
        kronrod[k] *= half;
        gauss[k] *= half;
        err = err.max((kronrod[k] - gauss[k]).abs());
    }
    Ok((kronrod, err))
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Integrates a vector-valued function over `[a, b]`, bisecting the panel with
/// the largest error estimate until the total estimate meets the policy.
///
/// Exactly antisymmetric: `integrate(f, b, a) == -integrate(f, a, b)`.
pub fn integrate<const N: usize, F>(mut f: F, a: f64, b: f64, policy: &QuadPolicy) -> Result<[f64; N]>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    if a == b {
        return Ok([0.0; N]);
    }
    if b < a {
        let v = integrate(f, b, a, policy)?;
        return Ok(v.map(|x| -x));
    }
    let (value, error) = gk15(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut splits = 0;
    loop {
        let magnitude = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if total_err <= policy.abs_tol.max(policy.rel_tol * magnitude) {
            break;
        }
        if splits >= policy.max_subdivisions {
            return Err(Error::QuadratureNonConvergence { a, b, error: total_err });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::QuadratureNonConvergence { a, b, error: total_err });
        }
        let (lv, le) = gk15(&mut f, worst.a, mid)?;
        let (rv, re) = gk15(&mut f, mid, worst.b)?;
        heap.push(Panel { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Panel { a: mid, b: worst.b, value: rv, error: re });
        splits += 1;
        // re-sum to avoid drift from repeated subtraction
        total = [0.0; N];
        total_err = 0.0;
        for p in heap.iter() {
            for (t, v) in total.iter_mut().zip(p.value) {
                *t += v;
            }
            total_err += p.error;
        }
    }
    // sum in order of position for reproducibility
    let mut panels: Vec<_> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut out = [0.0; N];
    for p in &panels {
        for (o, v) in out.iter_mut().zip(p.value) {
            *o += v;
        }
    }
    Ok(out)
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F>(mut f: F, a: f64, b: f64, policy: &QuadPolicy) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate(|x| f(x).map(|v| [v]), a, b, policy).map(|[v]| v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(v: f64) -> Result<[f64; 1]> {
        Ok([v])
    }

    #[test]
    fn polynomials_are_exact() {
        let p = QuadPolicy::default();
        let v = integrate(|x| ok(x.powi(20)), 0.0, 1.0, &p).unwrap()[0];
        assert!((v - 1.0 / 21.0).abs() < 1e-16);
    }

    #[test]
    fn antisymmetric_and_zero_width() {
        let p = QuadPolicy::default();
        let f = |x: f64| ok((3.0 * x).sin() / (1.0 + x * x));
        let a = integrate(f, -0.3, 2.0, &p).unwrap()[0];
        let b = integrate(f, 2.0, -0.3, &p).unwrap()[0];
        assert_eq!(a, -b);
        assert_eq!(integrate(f, 1.0, 1.0, &p).unwrap()[0], 0.0);
    }

    #[test]
    fn hard_integrand_subdivides() {
        let p = QuadPolicy::default();
        // ∫_0^1 sqrt(x) = 2/3 (endpoint singularity in the derivative)
        let v = integrate(|x| ok(x.sqrt()), 0.0, 1.0, &p).unwrap()[0];
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let p = QuadPolicy { abs_tol: 1e-14, rel_tol: 0.0, max_subdivisions: 3 };
        let r = integrate(|x| ok((50.0 * x).sin().abs()), 0.0, 10.0, &p);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }
}
