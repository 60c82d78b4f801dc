//! Seeded generator of random expressions that are smooth and finite on
//! `[-1, 1]`, for comparing symbolic derivatives with finite differences.

use rand::Rng;

fn constant<R: Rng>(rng: &mut R) -> String {
    format!("({:.3})", rng.gen_range(-2.0..2.0))
}

pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> String {
    if depth == 0 {
        return if rng.gen_bool(0.7) { "x".to_string() } else { constant(rng) };
    }
    let a = random_expr(rng, depth - 1);
    match rng.gen_range(0..13) {
        0 => format!("{a} + {}", random_expr(rng, depth - 1)),
        1 => format!("{a} - ({})", random_expr(rng, depth - 1)),
        2 => format!("({a}) * ({})", random_expr(rng, depth - 1)),
        3 => format!("({a}) / (1 + ({})^2)", random_expr(rng, depth - 1)),
        4 => format!("sin({a})"),
        5 => format!("cos({a})"),
        6 => format!("tanh({a})"),
        7 => format!("exp(0.5 * sin({a}))"),
        8 => format!("sqrt(1 + ({a})^2)"),
        9 => format!("log(2 + cos({a}))"),
        10 => format!("({a})^2"),
        11 => format!("({a})^3"),
        _ => format!("{} * ({a})", constant(rng)),
    }
}

/// Points in `[-1, 1]`.
pub fn random_points<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}
