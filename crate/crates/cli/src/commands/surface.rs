//! `bisoliton surface`: batch evaluation of a surface from `F` and `G`.

use anyhow::Result;
use bisoliton::geometry::Vec3;
use bisoliton::surface::{
    is_regular, mean_curvature_fd, ntilde, tangents, unit_normal, BcSurface, ParamPoint, DEFAULT_REGULARITY_TOL,
};
use rayon::prelude::*;

use super::{axis, Outcome};
use crate::config::SurfaceConfig;
use crate::output::{fmt_bool, fmt_f64, write_checks, Check, MeshOutput, Table};
use crate::Context;

/// Per-vertex diagnostics; NaN where a quantity is undefined.
#[derive(Debug, Clone, Copy)]
struct VertexReport {
    regular: bool,
    mean_curvature: f64,
    conformal_eaa: f64,
    conformal_sum: f64,
    conformal_eab: f64,
    ntilde: Vec3,
    normal: Vec3,
}

const NAN3: Vec3 = Vec3 { x: f64::NAN, y: f64::NAN, z: f64::NAN };

fn vertex(surf: &BcSurface, p: ParamPoint, h: f64) -> Result<VertexReport> {
    let nt = if 1.0 + p.r * p.s != 0.0 { ntilde(p) } else { NAN3 };
    let mut out = VertexReport {
        regular: false,
        mean_curvature: f64::NAN,
        conformal_eaa: f64::NAN,
        conformal_sum: f64::NAN,
        conformal_eab: f64::NAN,
        ntilde: nt,
        normal: Vec3::ZERO,
    };
    if !is_regular(surf, p, DEFAULT_REGULARITY_TOL) {
        return Ok(out);
    }
    let fr = tangents(surf, p)?;
    let fg = surf.fprime(p.r)? * surf.gprime(p.s)?;
    out.regular = true;
    out.conformal_eaa = (fr.eaa - (1.0 + p.r * p.s).powi(2) * fg).abs() / (1.0 + fr.eaa.abs());
    out.conformal_sum = (fr.eaa + fr.ebb).abs();
    out.conformal_eab = fr.eab.abs();
    out.normal = unit_normal(surf, p, DEFAULT_REGULARITY_TOL)?;
    // the stencil may reach a non-regular neighbour near the boundary of the regular set
    out.mean_curvature = mean_curvature_fd(surf, p, h).unwrap_or(f64::NAN);
    Ok(out)
}

fn max_defined(it: impl Iterator<Item = f64>) -> (f64, usize) {
    it.filter(|v| !v.is_nan()).fold((0.0, 0), |(m, n), v| (m.max(v.abs()), n + 1))
}

pub fn run(ctx: &Context) -> Result<Outcome> {
    let cfg: &SurfaceConfig =
        ctx.config.surface.as_ref().ok_or_else(|| anyhow::anyhow!("config has no [surface] section"))?;
    let surf = BcSurface::parse(&cfg.f, &cfg.g)?;
    let rs = axis(cfg.grid[0], cfg.r[0], cfg.r[1]);
    let ss = axis(cfg.grid[1], cfg.s[0], cfg.s[1]);
    let positions = surf.eval_grid(&rs, &ss)?;
    let points: Vec<ParamPoint> = rs.iter().flat_map(|&r| ss.iter().map(move |&s| ParamPoint::new(r, s))).collect();
    let reports = points.par_iter().map(|&p| vertex(&surf, p, cfg.fd_step)).collect::<Result<Vec<_>>>()?;

    let nv = ss.len();
    let mesh = MeshOutput {
        vertices: positions.iter().flatten().copied().collect(),
        normals: reports.iter().map(|v| v.normal).collect(),
        regular: reports.iter().map(|v| v.regular).collect(),
        abs_rs: points.iter().map(|p| (p.r * p.s).abs()).collect(),
        faces: MeshOutput::grid_faces(rs.len(), nv, |i| reports[i].regular),
    };

    let mut table = Table::new(&[
        "i", "j", "r", "s", "x", "y", "z", "regular", "abs_rs", "mean_curvature", "conformal_eaa", "conformal_sum",
        "conformal_eab", "ntilde1", "ntilde2", "ntilde3", "n1", "n2", "n3",
    ]);
    for (idx, (p, v)) in points.iter().zip(&reports).enumerate() {
        let x = mesh.vertices[idx];
        let mut row = vec![(idx / nv).to_string(), (idx % nv).to_string()];
        row.extend([p.r, p.s, x.x, x.y, x.z].map(fmt_f64));
        row.push(fmt_bool(v.regular).to_string());
        row.extend(
            [
                mesh.abs_rs[idx],
                v.mean_curvature,
                v.conformal_eaa,
                v.conformal_sum,
                v.conformal_eab,
                v.ntilde.x,
                v.ntilde.y,
                v.ntilde.z,
                v.normal.x,
                v.normal.y,
                v.normal.z,
            ]
            .map(fmt_f64),
        );
        table.push(row);
    }

    let (h, hn) = max_defined(reports.iter().map(|v| v.mean_curvature));
    let (ea, en) = max_defined(reports.iter().map(|v| v.conformal_eaa));
    let (es, _) = max_defined(reports.iter().map(|v| v.conformal_sum));
    let (eb, _) = max_defined(reports.iter().map(|v| v.conformal_eab));
    let checks = vec![
        Check::below("max_abs_mean_curvature", h, cfg.max_mean_curvature, hn),
        Check::below("max_conformal_eaa", ea, cfg.max_conformal_residual, en),
        Check::below("max_conformal_sum", es, cfg.max_conformal_residual, en),
        Check::below("max_conformal_eab", eb, cfg.max_conformal_residual, en),
    ];

    let files = vec![ctx.path("surface.obj"), ctx.path("surface_report.csv"), ctx.path("surface_checks.csv")];
    mesh.write_obj(&files[0])?;
    table.write(&files[1])?;
    write_checks(&files[2], &checks)?;

    let regular = mesh.regular.iter().filter(|&&b| b).count();
    let mut summary = vec![format!(
        "surface: {} vertices ({} regular), {} faces",
        mesh.vertices.len(),
        regular,
        mesh.faces.len()
    )];
    summary.extend(checks.iter().map(|c| format!("{}: {:e} ({})", c.name, c.value, pass_word(c.passed()))));
    Ok(Outcome { passed: checks.iter().all(Check::passed), files, summary })
}

pub(crate) fn pass_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
