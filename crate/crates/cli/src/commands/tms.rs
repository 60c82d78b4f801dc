//! `bisoliton bjorling-tms`: timelike minimal surfaces from closed-form `L3`
//! strips, with a sampled Gale-Nikaidô injectivity check.

use anyhow::Result;
use bisoliton::geometry::{l3_to_b3, Vec3};
use bisoliton::splitcomplex::{gale_nikaido_check, solve_bjorling_tms, CurveKind, JacobianReport, Rect, TmsStrip};
use rayon::prelude::*;

use super::surface::pass_word;
use super::{axis, Outcome};
use crate::output::{fmt_bool, fmt_f64, write_checks, Check, MeshOutput, Table};
use crate::Context;

/// Samples along the strip interval for the curve and normal residuals.
const STRIP_PROBES: usize = 201;

#[derive(Debug, Clone, Copy)]
struct VertexReport {
    position: Vec3,
    normal: Vec3,
    regular: bool,
    wave: f64,
    conformal_sum: f64,
    conformal_mixed: f64,
}

fn jacobian_table(rep: &JacobianReport) -> Table {
    let mut t = Table::new(&["t", "s", "j11", "j12", "j21", "j22", "det"]);
    for x in &rep.samples {
        t.push([x.t, x.s, x.j[0][0], x.j[0][1], x.j[1][0], x.j[1][1], x.det].map(fmt_f64).to_vec());
    }
    t
}

pub fn run(ctx: &Context) -> Result<Outcome> {
    let cfg = ctx.config.bjorling_tms.as_ref().ok_or_else(|| anyhow::anyhow!("config has no [bjorling_tms] section"))?;
    let c = [cfg.c[0].as_str(), cfg.c[1].as_str(), cfg.c[2].as_str()];
    let n = [cfg.n[0].as_str(), cfg.n[1].as_str(), cfg.n[2].as_str()];
    let strip = TmsStrip::parse(c, n, &cfg.var, (cfg.interval[0], cfg.interval[1]))?;
    let surf = solve_bjorling_tms(&strip, cfg.t0)?;
    let map = |x: Vec3| if cfg.to_b3 { l3_to_b3(x) } else { x };
    let (h, dh) = (cfg.fd_step, cfg.derivative_step);

    let ts = axis(cfg.grid[0], cfg.t[0], cfg.t[1]);
    let ss = axis(cfg.grid[1], cfg.s[0], cfg.s[1]);
    let points: Vec<(f64, f64)> = ts.iter().flat_map(|&t| ss.iter().map(move |&s| (t, s))).collect();
    let reports = points
        .par_iter()
        .map(|&(t, s)| {
            let normal = surf.normal_fd(t, s, dh)?;
            let regular = normal.is_finite();
            let (sum, mixed) = surf.conformal_residuals(t, s, dh)?;
            Ok(VertexReport {
                position: map(surf.eval(t, s)?),
                normal: if regular { map(normal) } else { Vec3::ZERO },
                regular,
                wave: surf.wave_residual(t, s, h)?.norm_inf(),
                conformal_sum: sum.abs(),
                conformal_mixed: mixed.abs(),
            })
        })
        .collect::<bisoliton::Result<Vec<_>>>()?;

    let mesh = MeshOutput {
        vertices: reports.iter().map(|v| v.position).collect(),
        normals: reports.iter().map(|v| v.normal).collect(),
        regular: reports.iter().map(|v| v.regular).collect(),
        abs_rs: vec![0.0; reports.len()],
        faces: MeshOutput::grid_faces(ts.len(), ss.len(), |i| reports[i].regular),
    };
    let mut table = Table::new(&[
        "i", "j", "t", "s", "x", "y", "z", "regular", "n1", "n2", "n3", "wave", "conformal_sum", "conformal_mixed",
    ]);
    let nv = ss.len();
    for (idx, (&(t, s), v)) in points.iter().zip(&reports).enumerate() {
        let mut row = vec![(idx / nv).to_string(), (idx % nv).to_string()];
        row.extend([t, s, v.position.x, v.position.y, v.position.z].map(fmt_f64));
        row.push(fmt_bool(v.regular).to_string());
        row.extend([v.normal.x, v.normal.y, v.normal.z, v.wave, v.conformal_sum, v.conformal_mixed].map(fmt_f64));
        table.push(row);
    }

    let (curve, normal) = surf.bjorling_residuals(STRIP_PROBES, dh)?;
    let worst = |f: fn(&VertexReport) -> f64| {
        reports.iter().map(f).fold(0.0, |m: f64, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
    };
    let checks = vec![
        Check::below("curve_residual", curve, cfg.max_curve_residual, STRIP_PROBES),
        Check::below("normal_residual", normal, cfg.max_normal_residual, STRIP_PROBES),
        Check::below("max_wave_residual", worst(|v| v.wave), cfg.max_wave_residual, reports.len()),
        Check::below("max_conformal_sum", worst(|v| v.conformal_sum), cfg.max_conformal_residual, reports.len()),
        Check::below("max_conformal_mixed", worst(|v| v.conformal_mixed), cfg.max_conformal_residual, reports.len()),
    ];

    let mut files = vec![ctx.path("tms.obj"), ctx.path("tms_report.csv"), ctx.path("tms_checks.csv")];
    mesh.write_obj(&files[0])?;
    table.write(&files[1])?;
    write_checks(&files[2], &checks)?;

    let rect = Rect { t: (cfg.t[0], cfg.t[1]), s: (cfg.s[0], cfg.s[1]) };
    let eval = |t: f64, s: f64| surf.eval(t, s).map(map);
    let mut gale = Table::new(&[
        "components",
        "minors_nonvanishing",
        "det_nonzero_and_diag_sign_constant",
        "zero_diagonal_ambiguity",
        "certified",
        "witnesses",
        "note",
    ]);
    let kind = match surf.kind() {
        CurveKind::Timelike => "timelike, w = t + k's",
        CurveKind::Spacelike => "spacelike, w = s + k't",
    };
    let mut summary = vec![format!(
        "bjorling-tms: {kind}, {} vertices{}",
        mesh.vertices.len(),
        if cfg.to_b3 { ", mapped to B3" } else { "" }
    )];
    for pair in &cfg.components {
        let rep = gale_nikaido_check(eval, rect, cfg.density, (pair[0], pair[1]), cfg.zero_tol)?;
        let label = format!("X{}_X{}", pair[0] + 1, pair[1] + 1);
        let path = ctx.path(&format!("jacobian_{label}.csv"));
        jacobian_table(&rep).write(&path)?;
        files.push(path);
        let witnesses: Vec<String> =
            rep.witnesses.iter().map(|w| format!("{} at ({}, {})", w.reason, fmt_f64(w.t), fmt_f64(w.s))).collect();
        gale.push(vec![
            label.clone(),
            fmt_bool(rep.minors_nonvanishing).to_string(),
            fmt_bool(rep.det_nonzero_and_diag_sign_constant).to_string(),
            fmt_bool(rep.zero_diagonal_ambiguity).to_string(),
            fmt_bool(rep.certified()).to_string(),
            witnesses.join("; "),
            rep.note.to_string(),
        ]);
        summary.push(format!(
            "gale-nikaido {label}: (i) {}, (ii) {}, zero-diagonal ambiguity {}",
            rep.minors_nonvanishing, rep.det_nonzero_and_diag_sign_constant, rep.zero_diagonal_ambiguity
        ));
    }
    let gale_path = ctx.path("gale_report.csv");
    gale.write(&gale_path)?;
    files.push(gale_path);

    summary.extend(checks.iter().map(|c| format!("{}: {:e} ({})", c.name, c.value, pass_word(c.passed()))));
    Ok(Outcome { passed: checks.iter().all(Check::passed), files, summary })
}
