use bisoliton::geometry::{inner, Signature};
use bisoliton::surface::{
    mean_curvature_fd, normal_to_param, ntilde, tangents, unit_normal, verify_bi_pde, wave_residual,
    BcSurface, ParamPoint, DEFAULT_REGULARITY_TOL, DEFAULT_UNIT_TOL,
};

const PAIRS: [(&str, &str); 5] = [
    ("r", "s"),
    ("r + r^3/3", "s"),
    ("sin(r)", "s"),
    ("exp(r) - 1", "s + s^3/3"),
    ("tanh(r)", "sinh(s)"),
];

fn axis(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// 25×25 grid over [−1, 1]² restricted to |rs| ≤ 0.8 and |F'G'| ≥ 0.1.
fn sample_points(surf: &BcSurface) -> Vec<ParamPoint> {
    let a = axis(25, -1.0, 1.0);
    let mut out = Vec::new();
    for &r in &a {
        for &s in &a {
            let p = ParamPoint::new(r, s);
            let fg = surf.fprime(r).unwrap() * surf.gprime(s).unwrap();
            if (r * s).abs() <= 0.8 && fg.abs() >= 0.1 {
                out.push(p);
            }
        }
    }
    out
}

#[test]
fn mean_curvature_vanishes_on_test_family() {
    for (f, g) in PAIRS {
        let surf = BcSurface::parse(f, g).unwrap();
        let pts = sample_points(&surf);
        assert!(pts.len() > 400);
        let worst = pts
            .iter()
            .map(|&p| mean_curvature_fd(&surf, p, 1e-3).unwrap().abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-4, "F = {f}, G = {g}: max |H| = {worst:e}");
    }
}

#[test]
fn conformal_and_null_identities() {
    let b3 = Signature::B3;
    for (f, g) in PAIRS {
        let surf = BcSurface::parse(f, g).unwrap();
        for p in sample_points(&surf) {
            let fr = tangents(&surf, p).unwrap();
            let fg = surf.fprime(p.r).unwrap() * surf.gprime(p.s).unwrap();
            let want = (1.0 + p.r * p.s).powi(2) * fg;
            assert!((fr.eaa - want).abs() / (1.0 + fr.eaa.abs()) < 1e-9);
            assert!((fr.eaa + fr.ebb).abs() < 1e-9);
            assert!(fr.eab.abs() < 1e-9);
            assert!(inner(fr.xr, fr.xr, b3).abs() < 1e-10);
            assert!(inner(fr.xs, fr.xs, b3).abs() < 1e-10);
        }
    }
}

#[test]
fn normal_formula_and_inversion() {
    for (f, g) in PAIRS {
        let surf = BcSurface::parse(f, g).unwrap();
        for p in sample_points(&surf) {
            let n = unit_normal(&surf, p, DEFAULT_REGULARITY_TOL).unwrap();
            let nt = ntilde(p);
            assert!(nt.z < 0.0);
            assert!((inner(nt, nt, Signature::B3) - 1.0).abs() < 1e-12);
            let q = normal_to_param(n, DEFAULT_UNIT_TOL).unwrap();
            assert!((q.r - p.r).abs() < 1e-9 && (q.s - p.s).abs() < 1e-9, "{p:?} -> {q:?}");
        }
    }
}

#[test]
fn wave_residual_is_small() {
    for (f, g) in PAIRS {
        let surf = BcSurface::parse(f, g).unwrap();
        for p in sample_points(&surf).into_iter().step_by(7) {
            let res = wave_residual(&surf, p, 1e-3).unwrap().norm_inf();
            assert!(res < 1e-5, "F = {f}, G = {g} at {p:?}: {res:e}");
        }
    }
}

#[test]
fn identity_surface_satisfies_born_infeld() {
    let surf = BcSurface::parse("r", "s").unwrap();
    let a = axis(9, -0.4, 0.4);
    let grid: Vec<_> = a.iter().flat_map(|&r| a.iter().map(move |&s| ParamPoint::new(r, s))).collect();
    let rep = verify_bi_pde(&surf, &grid, 1e-3).unwrap();
    assert_eq!(rep.checked_count(), 81);
    assert!(rep.max_abs_residual() < 1e-3, "{:e}", rep.max_abs_residual());
    assert!(rep.min_hyperbolicity() > 0.0);
    assert!(rep.max_recovery_error() < 1e-5, "{:e}", rep.max_recovery_error());
}
