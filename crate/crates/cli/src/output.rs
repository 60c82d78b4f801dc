//! Meshes and CSV tables with fixed, round-trip float formatting.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{ensure, Context, Result};
use bisoliton::geometry::Vec3;

/// Floats are written with 17 significant digits so they round-trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_bool(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Quad mesh sampled on a parameter grid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeshOutput {
    pub vertices: Vec<Vec3>,
    /// Oriented unit normal per vertex; zero where undefined.
    pub normals: Vec<Vec3>,
    pub regular: Vec<bool>,
    pub abs_rs: Vec<f64>,
    /// 0-based vertex indices, counter-clockwise in the parameter plane.
    pub faces: Vec<[usize; 4]>,
}

impl MeshOutput {
    /// Builds the quads of a row-major `nu × nv` grid, keeping a cell only if
    /// `keep` holds at all four corners.
    pub fn grid_faces(nu: usize, nv: usize, keep: impl Fn(usize) -> bool) -> Vec<[usize; 4]> {
        let mut faces = Vec::new();
        for i in 0..nu.saturating_sub(1) {
            for k in 0..nv.saturating_sub(1) {
                let q = [i * nv + k, (i + 1) * nv + k, (i + 1) * nv + k + 1, i * nv + k + 1];
                if q.iter().all(|&v| keep(v)) {
                    faces.push(q);
                }
            }
        }
        faces
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        ensure!(
            self.normals.len() == n && self.regular.len() == n && self.abs_rs.len() == n,
            "mesh attribute arrays differ in length from the vertex list"
        );
        ensure!(self.faces.iter().flatten().all(|&v| v < n), "mesh face index out of range");
        Ok(())
    }

    pub fn write_obj(&self, path: &Path) -> Result<()> {
        self.validate()?;
        let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "# {} vertices, {} faces", self.vertices.len(), self.faces.len())?;
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", fmt_f64(v.x), fmt_f64(v.y), fmt_f64(v.z))?;
        }
        for n in &self.normals {
            writeln!(w, "vn {} {} {}", fmt_f64(n.x), fmt_f64(n.y), fmt_f64(n.z))?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// A CSV table built in memory and written in one go.
#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One thresholded quantity in a pass/fail report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// `true` if the value must stay below the threshold, `false` if above.
    pub upper: bool,
    pub count: usize,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, threshold: f64, count: usize) -> Self {
        Check { name: name.into(), value, threshold, upper: true, count }
    }

    pub fn above(name: impl Into<String>, value: f64, threshold: f64, count: usize) -> Self {
        Check { name: name.into(), value, threshold, upper: false, count }
    }

    pub fn passed(&self) -> bool {
        if self.upper {
            self.value < self.threshold
        } else {
            self.value > self.threshold
        }
    }
}

/// Writes `check,value,threshold,kind,points,pass` rows.
pub fn write_checks(path: &Path, checks: &[Check]) -> Result<()> {
    let mut t = Table::new(&["check", "value", "threshold", "kind", "points", "pass"]);
    for c in checks {
        t.push(vec![
            c.name.clone(),
            fmt_f64(c.value),
            fmt_f64(c.threshold),
            if c.upper { "max" } else { "min" }.to_string(),
            c.count.to_string(),
            fmt_bool(c.passed()).to_string(),
        ]);
    }
    t.write(path)
}
