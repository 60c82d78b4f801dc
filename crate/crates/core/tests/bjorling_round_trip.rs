use bisoliton::bjorling::{
    perturb_nonunique, reconstruct_fg, solve_bjorling, surface_from_fg, validate_strip, verify_solution,
    BjorlingStrip, ReconstructOptions, DEFAULT_STRIP_TOL,
};
use bisoliton::surface::{BcSurface, ParamPoint};

const PAIRS: [(&str, &str); 5] = [
    ("r", "s"),
    ("r + r^3/3", "s"),
    ("sin(r)", "s"),
    ("exp(r) - 1", "s + s^3/3"),
    ("tanh(r)", "sinh(s)"),
];

fn strip_for(surf: &BcSurface) -> BjorlingStrip {
    BjorlingStrip::along_diagonal(surf, -0.5, 0.5, 201).unwrap()
}

#[test]
fn forward_then_backward_reproduces_generating_functions() {
    for (f, g) in PAIRS {
        let truth = BcSurface::parse(f, g).unwrap();
        let strip = strip_for(&truth);
        assert!(validate_strip(&strip, DEFAULT_STRIP_TOL).all_passed());
        let sol = solve_bjorling(&strip, &ReconstructOptions::default()).unwrap();
        for i in 0..=40 {
            let x = -0.5 + 0.025 * i as f64;
            let df = (sol.surface.fprime(x).unwrap() - truth.fprime(x).unwrap()).abs();
            let dg = (sol.surface.gprime(x).unwrap() - truth.gprime(x).unwrap()).abs();
            assert!(df < 1e-4 && dg < 1e-4, "{f}, {g} at {x}: {df:e} {dg:e}");
        }
        let res = verify_solution(&sol.surface, &strip).unwrap();
        assert!(res.curve < 1e-5 && res.normal < 1e-5, "{f}, {g}: {res:?}");
        for (r, s) in [(-0.45, 0.4), (0.3, 0.3), (0.5, -0.5), (0.0, 0.2)] {
            let p = ParamPoint::new(r, s);
            let d = (sol.surface.eval(p).unwrap() - truth.eval(p).unwrap()).norm_inf();
            assert!(d < 1e-5, "{f}, {g} at ({r}, {s}): {d:e}");
        }
    }
}

#[test]
fn bump_gives_a_second_solution() {
    for (f, g) in PAIRS {
        let truth = BcSurface::parse(f, g).unwrap();
        let strip = strip_for(&truth);
        let fg = reconstruct_fg(&strip, &ReconstructOptions::default()).unwrap();
        let bumped = perturb_nonunique(&fg, (1.0, 1.5), 0.05).unwrap();
        let a = surface_from_fg(&fg).unwrap().surface;
        let b = surface_from_fg(&bumped).unwrap().surface;
        for surf in [&a, &b] {
            let res = verify_solution(surf, &strip).unwrap();
            assert!(res.curve < 1e-5 && res.normal < 1e-5, "{f}, {g}: {res:?}");
        }
        let axis: Vec<f64> = (0..=10).map(|i| -0.5 + 0.1 * i as f64).collect();
        let ga = a.eval_grid(&axis, &axis).unwrap();
        let gb = b.eval_grid(&axis, &axis).unwrap();
        let agree = ga.iter().flatten().zip(gb.iter().flatten()).map(|(x, y)| (*x - *y).norm_inf()).fold(0.0, f64::max);
        assert!(agree < 1e-6, "{f}, {g}: {agree:e}");
        for &s in &axis {
            let p = ParamPoint::new(1.25, s);
            let diff = (a.eval(p).unwrap() - b.eval(p).unwrap()).norm_inf();
            assert!(diff > 1e-3, "{f}, {g} at s = {s}: {diff:e}");
        }
    }
}
