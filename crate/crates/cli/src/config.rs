//! Run configuration: one TOML file with a section per command.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Seed used when neither the config nor the command line sets one.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub surface: Option<SurfaceConfig>,
    pub bjorling: Option<BjorlingConfig>,
    pub bjorling_tms: Option<TmsConfig>,
    pub verify: Option<VerifyConfig>,
    /// Directory the config was read from; relative paths resolve against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub f: String,
    pub g: String,
    pub r: [f64; 2],
    pub s: [f64; 2],
    #[serde(default = "default_grid")]
    pub grid: [usize; 2],
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default = "default_mean_curvature")]
    pub max_mean_curvature: f64,
    #[serde(default = "default_conformal")]
    pub max_conformal_residual: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BjorlingConfig {
    /// CSV strip file with header `t,c1,c2,c3,n1,n2,n3[,dc1,dc2,dc3]`.
    pub strip_file: Option<PathBuf>,
    /// Closed-form strip.
    pub strip: Option<ClosedStrip>,
    /// Strip sampled along the diagonal `r = s` of a known surface.
    pub diagonal: Option<DiagonalStrip>,
    #[serde(default = "default_grid")]
    pub grid: [usize; 2],
    #[serde(default = "default_strip_tol")]
    pub strip_tol: f64,
    #[serde(default = "default_consistency")]
    pub consistency_tol: f64,
    #[serde(default = "default_residual")]
    pub max_curve_residual: f64,
    #[serde(default = "default_residual")]
    pub max_normal_residual: f64,
    /// Width of a linear taper beyond the data; constant extension if absent.
    pub taper: Option<f64>,
    pub perturb: Option<PerturbConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedStrip {
    #[serde(default = "default_var")]
    pub var: String,
    pub c: [String; 3],
    pub n: [String; 3],
    pub interval: [f64; 2],
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagonalStrip {
    pub f: String,
    pub g: String,
    pub interval: [f64; 2],
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PerturbConfig {
    pub j: [f64; 2],
    pub amplitude: f64,
    #[serde(default = "default_agreement")]
    pub max_agreement: f64,
    #[serde(default = "default_difference")]
    pub min_difference: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TmsConfig {
    #[serde(default = "default_var")]
    pub var: String,
    pub c: [String; 3],
    pub n: [String; 3],
    pub interval: [f64; 2],
    #[serde(default)]
    pub t0: f64,
    /// Mesh and Jacobian rectangle in `(t, s)`.
    pub t: [f64; 2],
    pub s: [f64; 2],
    #[serde(default = "default_grid")]
    pub grid: [usize; 2],
    /// Map the surface back to `B3` before meshing and the Jacobian check.
    #[serde(default)]
    pub to_b3: bool,
    /// Component pairs (0-based) for the Gale-Nikaidô check.
    #[serde(default = "default_components")]
    pub components: Vec<[usize; 2]>,
    #[serde(default = "default_density")]
    pub density: usize,
    #[serde(default = "default_zero_tol")]
    pub zero_tol: f64,
    /// Step of the second differences in the wave residual.
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    /// Step of the first differences behind the normal and conformal residuals.
    #[serde(default = "default_derivative_step")]
    pub derivative_step: f64,
    #[serde(default = "default_tms_curve")]
    pub max_curve_residual: f64,
    #[serde(default = "default_residual")]
    pub max_normal_residual: f64,
    #[serde(default = "default_residual")]
    pub max_wave_residual: f64,
    #[serde(default = "default_tms_conformal")]
    pub max_conformal_residual: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub f: String,
    pub g: String,
    pub r: [f64; 2],
    pub s: [f64; 2],
    #[serde(default = "default_verify_grid")]
    pub grid: [usize; 2],
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    /// Points with `|rs|` above this are skipped.
    #[serde(default = "default_max_rs")]
    pub max_rs: f64,
    /// Points with `|F'G'|` below this are skipped.
    #[serde(default = "default_min_fg")]
    pub min_fg: f64,
    /// Extra uniformly random points in the rectangle, drawn from the seed.
    #[serde(default)]
    pub random_points: usize,
    /// Also recover the graph function and check the Born-Infeld equation.
    #[serde(default)]
    pub bi_pde: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Test hook: replaces the normal formula by a wrong one.
    #[serde(default)]
    pub debug_corrupt_normal: bool,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub mean_curvature: f64,
    pub conformal: f64,
    pub null: f64,
    pub normal: f64,
    pub inversion: f64,
    pub unit: f64,
    pub wave: f64,
    pub bi_pde: f64,
    /// Parameter error of the graph recovery `(x, y) ↦ (r, s)`.
    pub recovery: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            mean_curvature: 1e-4,
            conformal: 1e-9,
            null: 1e-10,
            normal: 1e-9,
            inversion: 1e-9,
            unit: 1e-12,
            wave: 1e-5,
            bi_pde: 1e-3,
            recovery: 1e-5,
        }
    }
}

fn default_grid() -> [usize; 2] {
    [33, 33]
}
fn default_verify_grid() -> [usize; 2] {
    [25, 25]
}
fn default_fd_step() -> f64 {
    1e-3
}
fn default_derivative_step() -> f64 {
    1e-4
}
fn default_mean_curvature() -> f64 {
    1e-4
}
fn default_conformal() -> f64 {
    1e-9
}
fn default_strip_tol() -> f64 {
    bisoliton::bjorling::DEFAULT_STRIP_TOL
}
fn default_consistency() -> f64 {
    bisoliton::bjorling::DEFAULT_CONSISTENCY_TOL
}
fn default_residual() -> f64 {
    1e-5
}
fn default_tms_curve() -> f64 {
    1e-10
}
fn default_tms_conformal() -> f64 {
    1e-6
}
fn default_var() -> String {
    "t".to_string()
}
fn default_samples() -> usize {
    201
}
fn default_agreement() -> f64 {
    1e-6
}
fn default_difference() -> f64 {
    1e-3
}
fn default_components() -> Vec<[usize; 2]> {
    vec![[1, 2], [0, 2]]
}
fn default_density() -> usize {
    bisoliton::splitcomplex::DEFAULT_GRID_DENSITY
}
fn default_zero_tol() -> f64 {
    bisoliton::splitcomplex::DEFAULT_ZERO_TOL
}
fn default_max_rs() -> f64 {
    0.8
}
fn default_min_fg() -> f64 {
    0.1
}

/// A configuration problem, naming the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError { field: field.into(), message: message.into() }
}

fn check_grid(field: &str, grid: [usize; 2]) -> Result<(), ConfigError> {
    if grid[0] < 2 || grid[1] < 2 {
        return Err(field_err(field, format!("grid resolution must be at least 2 in each direction, got {grid:?}")));
    }
    Ok(())
}

fn check_interval(field: &str, iv: [f64; 2]) -> Result<(), ConfigError> {
    if !(iv[0].is_finite() && iv[1].is_finite() && iv[0] < iv[1]) {
        return Err(field_err(field, format!("interval must be finite with lo < hi, got {iv:?}")));
    }
    Ok(())
}

fn check_tol(field: &str, v: f64) -> Result<(), ConfigError> {
    if !(v.is_finite() && v > 0.0) {
        return Err(field_err(field, format!("tolerance must be positive and finite, got {v}")));
    }
    Ok(())
}

impl RunConfig {
    /// Parses TOML text; syntax errors carry line and column.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| {
            let field = e.span().map(|sp| locate(text, sp.start)).unwrap_or_else(|| "<file>".to_string());
            field_err(field, e.message().trim().to_string())
        })
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
        let mut cfg = Self::from_toml(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(c) = &self.surface {
            check_interval("surface.r", c.r)?;
            check_interval("surface.s", c.s)?;
            check_grid("surface.grid", c.grid)?;
            check_tol("surface.fd_step", c.fd_step)?;
            check_tol("surface.max_mean_curvature", c.max_mean_curvature)?;
            check_tol("surface.max_conformal_residual", c.max_conformal_residual)?;
        }
        if let Some(c) = &self.bjorling {
            let sources = [c.strip_file.is_some(), c.strip.is_some(), c.diagonal.is_some()];
            if sources.iter().filter(|&&x| x).count() != 1 {
                return Err(field_err(
                    "bjorling",
                    "exactly one of `strip_file`, `[bjorling.strip]` or `[bjorling.diagonal]` is required",
                ));
            }
            if let Some(st) = &c.strip {
                check_interval("bjorling.strip.interval", st.interval)?;
                check_grid("bjorling.strip.samples", [st.samples, st.samples])?;
            }
            if let Some(d) = &c.diagonal {
                check_interval("bjorling.diagonal.interval", d.interval)?;
                check_grid("bjorling.diagonal.samples", [d.samples, d.samples])?;
            }
            check_grid("bjorling.grid", c.grid)?;
            check_tol("bjorling.strip_tol", c.strip_tol)?;
            check_tol("bjorling.consistency_tol", c.consistency_tol)?;
            check_tol("bjorling.max_curve_residual", c.max_curve_residual)?;
            check_tol("bjorling.max_normal_residual", c.max_normal_residual)?;
            if let Some(w) = c.taper {
                check_tol("bjorling.taper", w)?;
            }
            if let Some(p) = &c.perturb {
                p.validate("bjorling.perturb")?;
            }
        }
        if let Some(c) = &self.bjorling_tms {
            check_interval("bjorling_tms.interval", c.interval)?;
            check_interval("bjorling_tms.t", c.t)?;
            check_interval("bjorling_tms.s", c.s)?;
            check_grid("bjorling_tms.grid", c.grid)?;
            check_grid("bjorling_tms.density", [c.density, c.density])?;
            for (i, pair) in c.components.iter().enumerate() {
                if pair[0] > 2 || pair[1] > 2 || pair[0] == pair[1] {
                    return Err(field_err(
                        format!("bjorling_tms.components[{i}]"),
                        format!("need two distinct indices in 0..=2, got {pair:?}"),
                    ));
                }
            }
            check_tol("bjorling_tms.zero_tol", c.zero_tol)?;
            check_tol("bjorling_tms.fd_step", c.fd_step)?;
            check_tol("bjorling_tms.derivative_step", c.derivative_step)?;
            check_tol("bjorling_tms.max_curve_residual", c.max_curve_residual)?;
            check_tol("bjorling_tms.max_normal_residual", c.max_normal_residual)?;
            check_tol("bjorling_tms.max_wave_residual", c.max_wave_residual)?;
            check_tol("bjorling_tms.max_conformal_residual", c.max_conformal_residual)?;
        }
        if let Some(c) = &self.verify {
            check_interval("verify.r", c.r)?;
            check_interval("verify.s", c.s)?;
            check_grid("verify.grid", c.grid)?;
            check_tol("verify.fd_step", c.fd_step)?;
            check_tol("verify.max_rs", c.max_rs)?;
            if !(c.min_fg >= 0.0) {
                return Err(field_err("verify.min_fg", "must be non-negative"));
            }
            let t = &c.tolerances;
            for (name, v) in [
                ("mean_curvature", t.mean_curvature),
                ("conformal", t.conformal),
                ("null", t.null),
                ("normal", t.normal),
                ("inversion", t.inversion),
                ("unit", t.unit),
                ("wave", t.wave),
                ("bi_pde", t.bi_pde),
                ("recovery", t.recovery),
            ] {
                check_tol(&format!("verify.tolerances.{name}"), v)?;
            }
        }
        Ok(())
    }
}

impl PerturbConfig {
    fn validate(&self, field: &str) -> Result<(), ConfigError> {
        check_interval(&format!("{field}.j"), self.j)?;
        check_tol(&format!("{field}.amplitude"), self.amplitude)?;
        check_tol(&format!("{field}.max_agreement"), self.max_agreement)?;
        check_tol(&format!("{field}.min_difference"), self.min_difference)
    }

    /// Parses the command-line form `J=c,d amp=x`, one or two tokens.
    pub fn from_args(tokens: &[String]) -> Result<Self, ConfigError> {
        let mut j = None;
        let mut amp = None;
        for tok in tokens.iter().flat_map(|t| t.split_whitespace()) {
            let (key, value) =
                tok.split_once('=').ok_or_else(|| field_err("--perturb", format!("expected key=value, got `{tok}`")))?;
            let num = |v: &str| {
                v.trim().parse::<f64>().map_err(|_| field_err("--perturb", format!("`{v}` is not a number")))
            };
            match key.trim() {
                "J" | "j" => {
                    let (c, d) = value
                        .split_once(',')
                        .ok_or_else(|| field_err("--perturb", format!("J needs two values c,d, got `{value}`")))?;
                    j = Some([num(c)?, num(d)?]);
                }
                "amp" | "amplitude" => amp = Some(num(value)?),
                other => return Err(field_err("--perturb", format!("unknown key `{other}`"))),
            }
        }
        let out = PerturbConfig {
            j: j.ok_or_else(|| field_err("--perturb", "missing J=c,d"))?,
            amplitude: amp.ok_or_else(|| field_err("--perturb", "missing amp=x"))?,
            max_agreement: default_agreement(),
            min_difference: default_difference(),
        };
        out.validate("--perturb")?;
        Ok(out)
    }
}

/// `line L, column C` of a byte offset.
fn locate(text: &str, offset: usize) -> String {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    format!("line {line}, column {col}")
}
