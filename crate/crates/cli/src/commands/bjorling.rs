//! `bisoliton bjorling`: recover `F`, `G` from a strip and solve the Björling
//! problem, optionally exhibiting non-uniqueness with a bump in `F`.

use std::path::Path;

use anyhow::{bail, Context as _, Result};
use bisoliton::bjorling::{
    param_curve, perturb_nonunique, reconstruct_fg, surface_from_fg, validate_strip, verify_solution, BjorlingStrip,
    Extension, ReconstructOptions, StripReport, StripSample,
};
use bisoliton::expr::Expr;
use bisoliton::geometry::Vec3;
use bisoliton::surface::{is_regular, unit_normal, BcSurface, ParamPoint, DEFAULT_REGULARITY_TOL};
use bisoliton::Error;
use rayon::prelude::*;

use super::surface::pass_word;
use super::{axis, Outcome};
use crate::config::{BjorlingConfig, PerturbConfig};
use crate::output::{fmt_f64, write_checks, Check, MeshOutput, Table};
use crate::Context;

const STRIP_COLUMNS: [&str; 7] = ["t", "c1", "c2", "c3", "n1", "n2", "n3"];
const DERIV_COLUMNS: [&str; 3] = ["dc1", "dc2", "dc3"];

/// Reads a strip CSV with header `t,c1,c2,c3,n1,n2,n3` and optional
/// `dc1,dc2,dc3`; without the latter, `c'` is estimated from the table.
pub fn read_strip_csv(path: &Path) -> Result<BjorlingStrip> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("cannot read strip file {}", path.display()))?;
    let header = rdr.headers()?.clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let mut idx = [0usize; 7];
    for (slot, name) in idx.iter_mut().zip(STRIP_COLUMNS) {
        *slot = col(name).with_context(|| format!("{}: missing column `{name}`", path.display()))?;
    }
    let didx: Vec<Option<usize>> = DERIV_COLUMNS.iter().map(|n| col(n)).collect();
    let with_derivs = match didx.iter().filter(|d| d.is_some()).count() {
        0 => false,
        3 => true,
        _ => bail!("{}: give all of dc1, dc2, dc3 or none", path.display()),
    };
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let get = |i: usize, name: &str| -> Result<f64> {
            let raw = rec.get(i).unwrap_or("");
            raw.parse::<f64>()
                .with_context(|| format!("{}: data row {}, column `{name}`: `{raw}` is not a number", path.display(), line + 1))
        };
        let mut v = [0.0; 10];
        for (k, name) in STRIP_COLUMNS.iter().enumerate() {
            v[k] = get(idx[k], name)?;
        }
        if with_derivs {
            for (k, name) in DERIV_COLUMNS.iter().enumerate() {
                v[7 + k] = get(didx[k].unwrap(), name)?;
            }
        }
        rows.push(v);
    }
    if rows.len() < 3 {
        bail!("{}: a strip needs at least 3 rows, found {}", path.display(), rows.len());
    }
    let ts: Vec<f64> = rows.iter().map(|v| v[0]).collect();
    let cs: Vec<Vec3> = rows.iter().map(|v| Vec3::new(v[1], v[2], v[3])).collect();
    let ns: Vec<Vec3> = rows.iter().map(|v| Vec3::new(v[4], v[5], v[6])).collect();
    let strip = if with_derivs {
        let samples = rows
            .iter()
            .zip(cs.iter().zip(&ns))
            .map(|(v, (&c, &n))| StripSample { t: v[0], c, cdot: Vec3::new(v[7], v[8], v[9]), n })
            .collect();
        BjorlingStrip::new(samples)?
    } else {
        BjorlingStrip::from_table(&ts, &cs, &ns)?
    };
    Ok(strip)
}

/// Writes a strip in the format read by [`read_strip_csv`].
pub fn write_strip_csv(strip: &BjorlingStrip, path: &Path, with_derivs: bool) -> Result<()> {
    let mut header: Vec<&'static str> = STRIP_COLUMNS.to_vec();
    if with_derivs {
        header.extend(DERIV_COLUMNS);
    }
    let mut t = Table::new(&header);
    for x in strip.samples() {
        let mut row: Vec<String> = [x.t, x.c.x, x.c.y, x.c.z, x.n.x, x.n.y, x.n.z].map(fmt_f64).to_vec();
        if with_derivs {
            row.extend([x.cdot.x, x.cdot.y, x.cdot.z].map(fmt_f64));
        }
        t.push(row);
    }
    t.write(path)
}

fn load_strip(ctx: &Context, cfg: &BjorlingConfig) -> Result<BjorlingStrip> {
    if let Some(file) = &cfg.strip_file {
        return read_strip_csv(&ctx.config.resolve(file));
    }
    if let Some(st) = &cfg.strip {
        let parse = |src: &[String; 3]| -> Result<[Expr; 3]> {
            Ok([Expr::parse(&src[0], &st.var)?, Expr::parse(&src[1], &st.var)?, Expr::parse(&src[2], &st.var)?])
        };
        return Ok(BjorlingStrip::from_exprs(&parse(&st.c)?, &parse(&st.n)?, st.interval[0], st.interval[1], st.samples)?);
    }
    if let Some(d) = &cfg.diagonal {
        let surf = BcSurface::parse(&d.f, &d.g)?;
        return Ok(BjorlingStrip::along_diagonal(&surf, d.interval[0], d.interval[1], d.samples)?);
    }
    bail!("config has no strip source")
}

/// Turns failed strip invariants into the matching solver error.
fn strip_error(report: &StripReport) -> anyhow::Error {
    if report.check("n3_nonzero").is_some_and(|c| !c.passed) {
        let at = report.check("n3_nonzero").and_then(|c| c.worst_t).unwrap_or(f64::NAN);
        return anyhow::Error::new(Error::NormalThirdComponentZero).context(format!("strip normal at t = {at}"));
    }
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} (worst {:e} at t = {})", c.name, c.worst, c.worst_t.unwrap_or(f64::NAN)))
        .collect();
    anyhow::Error::new(Error::InvalidInput(format!("strip invariants fail: {}", failed.join(", "))))
}

fn mesh(surf: &BcSurface, r: (f64, f64), s: (f64, f64), grid: [usize; 2]) -> Result<MeshOutput> {
    let rs = axis(grid[0], r.0, r.1);
    let ss = axis(grid[1], s.0, s.1);
    let points: Vec<ParamPoint> = rs.iter().flat_map(|&r| ss.iter().map(move |&s| ParamPoint::new(r, s))).collect();
    let vertices = surf.eval_path(&points)?;
    let keep: Vec<bool> = points
        .par_iter()
        .map(|&p| (p.r * p.s).abs() < 1.0 && is_regular(surf, p, DEFAULT_REGULARITY_TOL))
        .collect();
    let normals = points
        .par_iter()
        .zip(keep.par_iter())
        .map(|(&p, &k)| if k { unit_normal(surf, p, DEFAULT_REGULARITY_TOL) } else { Ok(Vec3::ZERO) })
        .collect::<bisoliton::Result<Vec<_>>>()?;
    Ok(MeshOutput {
        vertices,
        normals,
        abs_rs: points.iter().map(|p| (p.r * p.s).abs()).collect(),
        faces: MeshOutput::grid_faces(rs.len(), ss.len(), |i| keep[i]),
        regular: keep,
    })
}

fn max_gap(a: &BcSurface, b: &BcSurface, points: &[ParamPoint]) -> Result<Vec<f64>> {
    let xa = a.eval_path(points)?;
    let xb = b.eval_path(points)?;
    Ok(xa.iter().zip(&xb).map(|(p, q)| (*p - *q).norm_inf()).collect())
}

pub fn run(ctx: &Context, cli_perturb: Option<PerturbConfig>) -> Result<Outcome> {
    let cfg = ctx.config.bjorling.as_ref().ok_or_else(|| anyhow::anyhow!("config has no [bjorling] section"))?;
    let strip = load_strip(ctx, cfg)?;
    let report = validate_strip(&strip, cfg.strip_tol);
    if !report.all_passed() {
        return Err(strip_error(&report));
    }
    let extension = match cfg.taper {
        Some(width) => Extension::LinearTaper { width },
        None => Extension::Constant,
    };
    let opts = ReconstructOptions { consistency_tol: cfg.consistency_tol, extension };
    param_curve(&report.strip)?;
    let fg = reconstruct_fg(&report.strip, &opts)?;
    let sol = surface_from_fg(&fg)?;
    let res = verify_solution(&sol.surface, &strip)?;
    let n = strip.samples().len();

    let mut checks = vec![
        Check::below("curve_residual", res.curve, cfg.max_curve_residual, n),
        Check::below("normal_residual", res.normal, cfg.max_normal_residual, n),
        Check::below("consistency_residual", fg.max_consistency_residual, cfg.consistency_tol, n),
    ];

    let mut table = Table::new(&["t", "r", "s", "dr", "ds", "fprime", "gprime"]);
    let c = &fg.curve;
    for i in 0..c.len() {
        table.push(
            [c.t[i], c.r[i], c.s[i], c.dr[i], c.ds[i], fg.fprime_samples[i], fg.gprime_samples[i]].map(fmt_f64).to_vec(),
        );
    }

    let (i1, i2) = (fg.i1(), fg.i2());
    let perturb = cli_perturb.or(cfg.perturb);
    let r_range = match &perturb {
        Some(p) => (i1.0.min(p.j[0]), i1.1.max(p.j[1])),
        None => i1,
    };
    let mut files = vec![ctx.path("bjorling.obj"), ctx.path("fg_table.csv"), ctx.path("bjorling_checks.csv")];
    mesh(&sol.surface, r_range, i2, cfg.grid)?.write_obj(&files[0])?;
    table.write(&files[1])?;

    let mut summary = vec![format!(
        "bjorling: {n} strip samples, r(I) = [{}, {}], s(I) = [{}, {}]{}",
        i1.0,
        i1.1,
        i2.0,
        i2.1,
        if report.flipped { ", normals flipped to n3 < 0" } else { "" }
    )];

    if let Some(p) = perturb {
        let pfg = perturb_nonunique(&fg, (p.j[0], p.j[1]), p.amplitude)?;
        let bump = pfg.bump.expect("perturbation sets a bump");
        let psol = surface_from_fg(&pfg)?;
        let pres = verify_solution(&psol.surface, &strip)?;
        let square: Vec<ParamPoint> = axis(cfg.grid[0], i1.0, i1.1)
            .into_iter()
            .flat_map(|r| axis(cfg.grid[1], i2.0, i2.1).into_iter().map(move |s| ParamPoint::new(r, s)))
            .filter(|p| (p.r * p.s).abs() < 1.0)
            .collect();
        let agreement = max_gap(&sol.surface, &psol.surface, &square)?.into_iter().fold(0.0, f64::max);
        let m = bump.midpoint();
        let line: Vec<ParamPoint> = axis(cfg.grid[1], i2.0, i2.1)
            .into_iter()
            .map(|s| ParamPoint::new(m, s))
            .filter(|p| (p.r * p.s).abs() < 1.0)
            .collect();
        let difference = max_gap(&sol.surface, &psol.surface, &line)?.into_iter().fold(f64::INFINITY, f64::min);
        let pchecks = vec![
            Check::below("perturbed_curve_residual", pres.curve, cfg.max_curve_residual, n),
            Check::below("perturbed_normal_residual", pres.normal, cfg.max_normal_residual, n),
            Check::below("agreement_on_data_square", agreement, p.max_agreement, square.len()),
            Check::above("difference_on_bump_midline", difference, p.min_difference, line.len()),
        ];
        let pfiles = [ctx.path("bjorling_perturbed.obj"), ctx.path("perturb_report.csv")];
        mesh(&psol.surface, r_range, i2, cfg.grid)?.write_obj(&pfiles[0])?;
        write_checks(&pfiles[1], &pchecks)?;
        files.extend(pfiles);
        summary.push(format!(
            "bump on ({}, {}) with amplitude {:e} (requested {:e})",
            bump.c, bump.d, bump.amplitude, p.amplitude
        ));
        checks.extend(pchecks);
    }

    write_checks(&files[2], &checks[..3])?;
    summary.extend(checks.iter().map(|c| format!("{}: {:e} ({})", c.name, c.value, pass_word(c.passed()))));
    Ok(Outcome { passed: checks.iter().all(Check::passed), files, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let surf = BcSurface::parse("sin(r)", "s").unwrap();
        let strip = BjorlingStrip::along_diagonal(&surf, -0.5, 0.5, 21).unwrap();
        for with in [true, false] {
            let path = dir.path().join(format!("strip_{with}.csv"));
            write_strip_csv(&strip, &path, with).unwrap();
            let back = read_strip_csv(&path).unwrap();
            assert_eq!(back.samples().len(), 21);
            for (a, b) in back.samples().iter().zip(strip.samples()) {
                assert_eq!(a.t, b.t);
                assert_eq!(a.c, b.c);
                assert_eq!(a.n, b.n);
                if with {
                    assert_eq!(a.cdot, b.cdot);
                }
            }
        }
    }

    #[test]
    fn strip_csv_errors_name_the_problem() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "t,c1,c2,c3,n1,n2\n0,0,0,0,0,0\n").unwrap();
        let err = read_strip_csv(&path).unwrap_err().to_string();
        assert!(err.contains("missing column `n3`"), "{err}");
        std::fs::write(&path, "t,c1,c2,c3,n1,n2,n3\n0,0,0,0,0,0,x\n1,0,0,0,0,0,1\n2,0,0,0,0,0,1\n").unwrap();
        let err = format!("{:#}", read_strip_csv(&path).unwrap_err());
        assert!(err.contains("row 1, column `n3`"), "{err}");
        std::fs::write(&path, "t,c1,c2,c3,n1,n2,n3,dc1\n0,0,0,0,0,0,1,1\n").unwrap();
        assert!(read_strip_csv(&path).is_err());
    }
}
