//! `bisoliton verify`: the invariant suite of a surface on a parameter grid.

use anyhow::Result;
use bisoliton::geometry::{cross, inner, norm, Signature, Vec3};
use bisoliton::surface::{
    is_regular, mean_curvature_fd, normal_to_param, ntilde, tangents, unit_normal, verify_bi_pde, wave_residual,
    BcSurface, ParamPoint, DEFAULT_REGULARITY_TOL, DEFAULT_UNIT_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::surface::pass_word;
use super::{axis, Outcome};
use crate::config::VerifyConfig;
use crate::output::{fmt_f64, write_checks, Check, Table};
use crate::Context;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Checked,
    SkippedRs,
    SkippedFg,
    NonRegular,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Checked => "checked",
            Status::SkippedRs => "skipped_rs",
            Status::SkippedFg => "skipped_fg",
            Status::NonRegular => "non_regular",
        }
    }
}

/// Invariant values at one point, in report column order.
const COLUMNS: [&str; 11] = [
    "mean_curvature",
    "conformal_eaa",
    "conformal_sum",
    "conformal_eab",
    "null_r",
    "null_s",
    "normal",
    "inversion",
    "ntilde3",
    "unit",
    "wave",
];

#[derive(Debug, Clone, Copy)]
struct PointReport {
    p: ParamPoint,
    status: Status,
    values: [f64; 11],
}

fn point(surf: &BcSurface, cfg: &VerifyConfig, p: ParamPoint) -> Result<PointReport> {
    let mut out = PointReport { p, status: Status::Checked, values: [f64::NAN; 11] };
    if (p.r * p.s).abs() > cfg.max_rs {
        out.status = Status::SkippedRs;
        return Ok(out);
    }
    if (surf.fprime(p.r)? * surf.gprime(p.s)?).abs() < cfg.min_fg {
        out.status = Status::SkippedFg;
        return Ok(out);
    }
    if !is_regular(surf, p, DEFAULT_REGULARITY_TOL) {
        out.status = Status::NonRegular;
        return Ok(out);
    }
    let b3 = Signature::B3;
    let fr = tangents(surf, p)?;
    let fg = surf.fprime(p.r)? * surf.gprime(p.s)?;
    let cx = cross(fr.xr, fr.xs, b3);
    let from_tangents = cx * (1.0 / norm(cx, b3));
    let mut formula = unit_normal(surf, p, DEFAULT_REGULARITY_TOL)?;
    if cfg.debug_corrupt_normal {
        formula = Vec3::new(formula.y, formula.x, formula.z);
    }
    let nt = ntilde(p);
    let inversion = match normal_to_param(formula, DEFAULT_UNIT_TOL) {
        Ok(q) => (q.r - p.r).abs().max((q.s - p.s).abs()),
        Err(_) => f64::INFINITY,
    };
    out.values = [
        mean_curvature_fd(surf, p, cfg.fd_step).map_or(f64::NAN, f64::abs),
        (fr.eaa - (1.0 + p.r * p.s).powi(2) * fg).abs() / (1.0 + fr.eaa.abs()),
        (fr.eaa + fr.ebb).abs(),
        fr.eab.abs(),
        inner(fr.xr, fr.xr, b3).abs(),
        inner(fr.xs, fr.xs, b3).abs(),
        (from_tangents - formula).norm_inf(),
        inversion,
        nt.z,
        (inner(nt, nt, b3) - 1.0).abs(),
        wave_residual(surf, p, cfg.fd_step).map_or(f64::NAN, Vec3::norm_inf),
    ];
    Ok(out)
}

fn sample_points(cfg: &VerifyConfig, seed: u64) -> Vec<ParamPoint> {
    let rs = axis(cfg.grid[0], cfg.r[0], cfg.r[1]);
    let ss = axis(cfg.grid[1], cfg.s[0], cfg.s[1]);
    let mut pts: Vec<ParamPoint> = rs.iter().flat_map(|&r| ss.iter().map(move |&s| ParamPoint::new(r, s))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cfg.random_points {
        let r = rng.gen_range(cfg.r[0]..=cfg.r[1]);
        let s = rng.gen_range(cfg.s[0]..=cfg.s[1]);
        pts.push(ParamPoint::new(r, s));
    }
    pts
}

/// Largest value of column `k`, NaN if any point has NaN there (which fails
/// every [`Check`]), 0 for no points.
fn worst(reports: &[&PointReport], k: usize) -> f64 {
    if reports.is_empty() {
        return 0.0;
    }
    reports
        .iter()
        .map(|r| r.values[k])
        .fold(f64::NEG_INFINITY, |m: f64, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

pub fn run(ctx: &Context) -> Result<Outcome> {
    let cfg = ctx.config.verify.as_ref().ok_or_else(|| anyhow::anyhow!("config has no [verify] section"))?;
    let surf = BcSurface::parse(&cfg.f, &cfg.g)?;
    let pts = sample_points(cfg, ctx.seed);
    let reports = pts.par_iter().map(|&p| point(&surf, cfg, p)).collect::<Result<Vec<_>>>()?;
    let checked: Vec<&PointReport> = reports.iter().filter(|r| r.status == Status::Checked).collect();
    let n = checked.len();
    let tol = &cfg.tolerances;

    let mut checks = vec![
        Check::below("mean_curvature", worst(&checked, 0), tol.mean_curvature, n),
        Check::below("conformal_eaa", worst(&checked, 1), tol.conformal, n),
        Check::below("conformal_sum", worst(&checked, 2), tol.conformal, n),
        Check::below("conformal_eab", worst(&checked, 3), tol.conformal, n),
        Check::below("null_r", worst(&checked, 4), tol.null, n),
        Check::below("null_s", worst(&checked, 5), tol.null, n),
        Check::below("normal_formula", worst(&checked, 6), tol.normal, n),
        Check::below("inversion", worst(&checked, 7), tol.inversion, n),
        Check::below("ntilde_third_component", worst(&checked, 8), 0.0, n),
        Check::below("ntilde_unit", worst(&checked, 9), tol.unit, n),
        Check::below("wave", worst(&checked, 10), tol.wave, n),
        Check::above("checked_points", n as f64, 0.0, n),
    ];
    if cfg.bi_pde {
        let grid: Vec<ParamPoint> = checked.iter().map(|r| r.p).collect();
        let rep = verify_bi_pde(&surf, &grid, cfg.fd_step)?;
        let m = rep.checked_count();
        checks.push(Check::below("bi_pde_residual", rep.max_abs_residual(), tol.bi_pde, m));
        checks.push(Check::above("bi_pde_hyperbolicity", rep.min_hyperbolicity(), 0.0, m));
        checks.push(Check::below("bi_pde_recovery", rep.max_recovery_error(), tol.recovery, m));
    }

    let mut header = vec!["r", "s", "status"];
    header.extend(COLUMNS);
    let mut table = Table::new(&header);
    for r in &reports {
        let mut row = vec![fmt_f64(r.p.r), fmt_f64(r.p.s), r.status.as_str().to_string()];
        row.extend(r.values.map(fmt_f64));
        table.push(row);
    }
    let files = vec![ctx.path("verify_report.csv"), ctx.path("verify_points.csv")];
    write_checks(&files[0], &checks)?;
    table.write(&files[1])?;

    let mut summary = vec![format!(
        "verify: {} points ({} from seed {}), {} checked",
        reports.len(),
        cfg.random_points,
        ctx.seed,
        n
    )];
    summary.extend(checks.iter().map(|c| format!("{}: {:e} ({})", c.name, c.value, pass_word(c.passed()))));
    Ok(Outcome { passed: checks.iter().all(Check::passed), files, summary })
}
