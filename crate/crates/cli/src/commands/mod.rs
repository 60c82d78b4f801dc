//! The four subcommands and their shared plumbing.

pub mod bjorling;
pub mod surface;
pub mod tms;
pub mod verify;

use std::path::PathBuf;

use bisoliton::Error;

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    /// Every configured acceptance threshold passed.
    pub passed: bool,
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

/// `n` equally spaced values on `[lo, hi]`, endpoints exact.
pub(crate) fn axis(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

/// Name of a solver error and a remediation hint for it.
pub fn diagnose(err: &anyhow::Error) -> Option<(&'static str, &'static str)> {
    let e = err.chain().find_map(|c| c.downcast_ref::<Error>())?;
    Some(match e {
        Error::Parse(_) => ("Parse", "check the expression syntax; variables are r, s or the configured strip variable"),
        Error::Domain(_) => ("Domain", "an expression left its domain (log, sqrt, division); shrink the rectangle or interval"),
        Error::QuadratureNonConvergence { .. } => {
            ("QuadratureNonConvergence", "the integrand is singular or too oscillatory on this range; shrink it")
        }
        Error::NonRegularPoint { .. } => ("NonRegularPoint", "F'G' vanishes or |rs| = 1 here; move the point or the rectangle"),
        Error::DegenerateFirstForm { .. } => {
            ("DegenerateFirstForm", "the first fundamental form degenerates; stay inside |rs| < 1 with F'G' != 0")
        }
        Error::NormalThirdComponentZero => (
            "NormalThirdComponentZero",
            "every strip normal needs n3 != 0 (the normal may not be horizontal); trim the interval or fix the normal data",
        ),
        Error::NotUnitNormal(_) => ("NotUnitNormal", "normals must satisfy n1^2 - n2^2 + n3^2 = 1; normalize the data"),
        Error::NotOrthogonal(_) => ("NotOrthogonal", "the normal must be orthogonal to the curve tangent in the indefinite metric"),
        Error::ProjectionSingular(_) => ("ProjectionSingular", "the point lies where 1 + alpha^2 - beta^2 = 0"),
        Error::GraphInversionFailure { .. } => {
            ("GraphInversionFailure", "the surface is not a graph over (x, y) near this point; shrink the rectangle")
        }
        Error::NonMonotoneParamCurve { .. } => (
            "NonMonotoneParamCurve",
            "r(t) or s(t) turns back or is constant; split the strip at the turning point or use a shorter interval",
        ),
        Error::DomainViolation { .. } => ("DomainViolation", "the normals leave |rs| < 1; check that they are unit normals"),
        Error::ConsistencyFailure { .. } => (
            "ConsistencyFailure",
            "the curve and normal do not come from one surface; check c3' against the other components or raise consistency_tol",
        ),
        Error::IntervalOverlapsData { .. } => {
            ("IntervalOverlapsData", "move the bump interval J outside the data interval r(I)")
        }
        Error::AmplitudeUnachievable { .. } => ("AmplitudeUnachievable", "F' vanishes on J; choose another bump interval"),
        Error::MixedCausalCharacter { .. } => {
            ("MixedCausalCharacter", "the curve must stay timelike or stay spacelike; split the interval where it turns null")
        }
        Error::InvalidInput(_) => ("InvalidInput", "check the configuration values"),
    })
}

/// Remediation hint for an error, prefixed with its name.
pub fn hint(err: &anyhow::Error) -> Option<String> {
    diagnose(err).map(|(name, h)| format!("{name}: {h}"))
}
