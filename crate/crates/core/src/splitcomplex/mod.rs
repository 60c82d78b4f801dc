//! Split-complex numbers and timelike minimal surfaces in `L3`.
//!
//! A split-complex function is evaluated exactly through null coordinates:
//! with `p = a + b` and `m = a − b`, multiplication is componentwise, so the
//! extension of a real function `f` to `a + k′b` is `(f(p), f(m))` in those
//! coordinates.

mod gale;
mod number;
mod tms;

pub use gale::{
    gale_nikaido_check, JacobianReport, JacobianSample, Rect, Witness, DEFAULT_GRID_DENSITY, DEFAULT_ZERO_TOL,
    EVIDENCE_NOTE,
};
pub use number::{extend_with, sc_add, sc_conj, sc_extend, sc_mul, SplitComplex};
pub use tms::{
    bridge_bi_to_tms, bridge_exprs, bridge_tms_to_bi, solve_bjorling_tms, CurveKind, TmsStrip, TmsSurface,
    DEFAULT_TMS_TOL,
};
