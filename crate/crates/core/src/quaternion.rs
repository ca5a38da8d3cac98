//! Real quaternions `q = w + x·i + y·j + z·k` with Hamilton's product.
//!
//! ℍ is isomorphic to the Clifford algebra Cl(0,2); nothing here relies on that beyond
//! the multiplication table.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{QftError, Result};

/// Relative threshold below which the vector part is treated as absent in
/// [`Quaternion::polar`].
pub const AXIS_EPSILON: f64 = 1e-12;

/// Tolerance on `|axis| = 1` and `Sc(axis) = 0` accepted by [`exp_pure`].
pub const PURE_UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub const fn pure(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    /// Builds a quaternion from `[w, x, y, z]`.
    #[inline]
    pub const fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    #[inline]
    pub const fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Scalar part `Sc(q)`.
    #[inline]
    pub fn scalar(self) -> f64 {
        self.w
    }

    /// Vector part `Vec(q) = x·i + y·j + z·k`.
    #[inline]
    pub fn vector(self) -> Quaternion {
        Self::pure(self.x, self.y, self.z)
    }

    #[inline]
    pub fn conj(self) -> Quaternion {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// `|q|_Q`.
    #[inline]
    pub fn modulus(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// `q⁻¹ = conj(q) / |q|²`.
    pub fn inverse(self) -> Result<Quaternion> {
        let n2 = self.norm_squared();
        if n2 == 0.0 {
            return Err(QftError::domain("inverse of the zero quaternion"));
        }
        Ok(self.conj() / n2)
    }

    /// True when the scalar part vanishes and the modulus is one, within
    /// [`PURE_UNIT_TOLERANCE`].
    pub fn is_pure_unit(self) -> bool {
        self.w.abs() <= PURE_UNIT_TOLERANCE
            && (self.vector().modulus() - 1.0).abs() <= PURE_UNIT_TOLERANCE
    }

    /// Integer power by repeated squaring; `q⁰ = 1`.
    pub fn powi(self, mut exp: u32) -> Quaternion {
        let mut base = self;
        let mut acc = Quaternion::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Polar decomposition `q = |q|·e^{μθ}`.
    ///
    /// The angle comes from `atan2(|Vec(q)|, Sc(q))`, so it is well defined when the
    /// scalar part vanishes. Near-real quaternions get the axis `i` and the
    /// `degenerate` flag.
    pub fn polar(self) -> PolarForm {
        let modulus = self.modulus();
        let v = self.vector();
        let vn = v.modulus();
        if vn <= AXIS_EPSILON * modulus || modulus == 0.0 {
            let angle = if self.w < 0.0 { std::f64::consts::PI } else { 0.0 };
            return PolarForm {
                modulus,
                axis: Quaternion::I,
                angle,
                degenerate: true,
            };
        }
        PolarForm {
            modulus,
            axis: v / vn,
            angle: vn.atan2(self.w),
            degenerate: false,
        }
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(self, other: Quaternion) -> f64 {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }
}

/// `q = modulus · (cos(angle) + axis·sin(angle))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarForm {
    pub modulus: f64,
    /// Pure unit quaternion μ with μ² = −1.
    pub axis: Quaternion,
    /// In `[0, π]`.
    pub angle: f64,
    /// Set when the vector part was too small for the axis to be meaningful.
    pub degenerate: bool,
}

impl PolarForm {
    pub fn reconstruct(&self) -> Quaternion {
        let (s, c) = self.angle.sin_cos();
        (Quaternion::real(c) + self.axis * s) * self.modulus
    }
}

/// `e^{μθ} = cos θ + μ sin θ` for a pure unit axis μ.
pub fn exp_pure(axis: Quaternion, angle: f64) -> Result<Quaternion> {
    if !axis.is_pure_unit() {
        return Err(QftError::domain(format!(
            "exp_pure needs a pure unit axis, got {axis}"
        )));
    }
    Ok(exp_pure_unchecked(axis, angle))
}

#[inline]
pub(crate) fn exp_pure_unchecked(axis: Quaternion, angle: f64) -> Quaternion {
    let (s, c) = angle.sin_cos();
    Quaternion::new(c, axis.x * s, axis.y * s, axis.z * s)
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, r: Quaternion) {
        *self = *self + r;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, r: Quaternion) {
        *self = *self - r;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product: `ij = k = −ji`, `jk = i = −kj`, `ki = j = −ik`.
impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, r: Quaternion) -> Quaternion {
        let (a, b) = (self, r);
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl MulAssign for Quaternion {
    #[inline]
    fn mul_assign(&mut self, r: Quaternion) {
        *self = *self * r;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}
