use crate::expr::{DomainError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("domain error: {0}")]
    Domain(#[from] DomainError),

    #[error("quadrature did not converge on [{a}, {b}] (estimated error {error:.3e})")]
    QuadratureNonConvergence { a: f64, b: f64, error: f64 },

    #[error("non-regular parameter point (r, s) = ({r}, {s})")]
    NonRegularPoint { r: f64, s: f64 },

    #[error("degenerate first fundamental form at (r, s) = ({r}, {s}): EG - F^2 = {det:e}")]
    DegenerateFirstForm { r: f64, s: f64, det: f64 },

    #[error("normal has vanishing third component")]
    NormalThirdComponentZero,

    #[error("vector is not a unit normal: <n, n> = {0}")]
    NotUnitNormal(f64),

    #[error("normal is not orthogonal to the curve tangent: <n, c'> = {0}")]
    NotOrthogonal(f64),

    #[error("stereographic projection is singular: 1 + alpha^2 - beta^2 = {0:e}")]
    ProjectionSingular(f64),

    #[error("graph inversion (r, s) -> (x, y) failed near (r, s) = ({r}, {s})")]
    GraphInversionFailure { r: f64, s: f64 },

    #[error("parameter curve {which}(t) is not strictly monotone near t = {t}")]
    NonMonotoneParamCurve { which: char, t: f64 },

    #[error("|r s| >= 1 at t = {t} (r s = {rs})")]
    DomainViolation { t: f64, rs: f64 },

    #[error("strip data is inconsistent at t = {t}: c3' - (r F' r' + s G' s') = {residual:e}")]
    ConsistencyFailure { t: f64, residual: f64 },

    #[error("bump interval ({c}, {d}) overlaps the data interval [{lo}, {hi}]")]
    IntervalOverlapsData { c: f64, d: f64, lo: f64, hi: f64 },

    #[error("bump amplitude unachievable: F' vanishes on ({c}, {d})")]
    AmplitudeUnachievable { c: f64, d: f64 },

    #[error("curve changes causal character at t = {t}")]
    MixedCausalCharacter { t: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
