//! Points and vectors in the two indefinite 3-spaces used throughout the crate.
//!
//! `B3` carries the quadratic form `x² − y² + z²` and is the ambient space of
//! Born-Infeld soliton surfaces; `L3` is Lorentz-Minkowski space with
//! `x² + y² − z²`. The cyclic relabelling `(x, y, z) ↦ (z, x, y)` is an
//! isometry between them.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

/// Default tolerance for deciding that a vector is lightlike.
pub const DEFAULT_LIGHTLIKE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Max-norm, used for all residual reporting.
    #[inline]
    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// Euclidean cross product (the coordinate determinant vector).
    #[inline]
    pub fn euclidean_cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn map(self, f: impl Fn(f64) -> f64) -> Vec3 {
        Vec3::new(f(self.x), f(self.y), f(self.z))
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    #[inline]
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

/// Metric signature of the ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signature {
    /// diag(+1, −1, +1)
    B3,
    /// diag(+1, +1, −1)
    L3,
}

impl Signature {
    #[inline]
    pub const fn diag(self) -> [f64; 3] {
        match self {
            Signature::B3 => [1.0, -1.0, 1.0],
            Signature::L3 => [1.0, 1.0, -1.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalType {
    Spacelike,
    Timelike,
    Lightlike,
}

#[inline]
pub fn inner(u: Vec3, v: Vec3, sig: Signature) -> f64 {
    let g = sig.diag();
    g[0] * u.x * v.x + g[1] * u.y * v.y + g[2] * u.z * v.z
}

/// Cross product characterised by `inner(cross(u, v), w) = det[u; v; w]`.
///
/// Since `det[u; v; w] = e · w` with `e` the Euclidean cross product and the
/// metric is diagonal with entries ±1, the result is `e` with each component
/// multiplied by the corresponding metric entry.
#[inline]
pub fn cross(u: Vec3, v: Vec3, sig: Signature) -> Vec3 {
    let e = u.euclidean_cross(v);
    let g = sig.diag();
    Vec3::new(g[0] * e.x, g[1] * e.y, g[2] * e.z)
}

/// Pseudo-norm `sqrt(|⟨v, v⟩|)`.
#[inline]
pub fn norm(v: Vec3, sig: Signature) -> f64 {
    inner(v, v, sig).abs().sqrt()
}

pub fn causal_type(v: Vec3, sig: Signature, tol: f64) -> CausalType {
    let q = inner(v, v, sig);
    if q.abs() <= tol {
        CausalType::Lightlike
    } else if q > 0.0 {
        CausalType::Spacelike
    } else {
        CausalType::Timelike
    }
}

/// `(x, y, z) ↦ (z, x, y)`, an isometry from `B3` onto `L3`.
#[inline]
pub fn b3_to_l3(p: Vec3) -> Vec3 {
    Vec3::new(p.z, p.x, p.y)
}

/// Inverse of [`b3_to_l3`].
#[inline]
pub fn l3_to_b3(p: Vec3) -> Vec3 {
    Vec3::new(p.y, p.z, p.x)
}

/// Determinant of the matrix with rows `u`, `v`, `w`.
pub fn det3(u: Vec3, v: Vec3, w: Vec3) -> f64 {
    u.euclidean_cross(v).dot(w)
}
