//! Complex 3-vectors with the unmetric (non-conjugating) bilinear product.
//!
//! Branch conventions used everywhere in the crate live here: `csqrt` and
//! `casin` are the principal branches (cut of the square root along the
//! negative real axis, cuts of arcsin along the real axis outside `[-1, 1]`).

use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

/// Principal square root. `Re(csqrt(z)) >= 0`.
#[inline]
pub fn csqrt(z: Complex64) -> Complex64 {
    z.sqrt()
}

/// Principal arcsine.
#[inline]
pub fn casin(z: Complex64) -> Complex64 {
    z.asin()
}

/// Complex 3-vector housing area vectors `v`, rotation vectors `r` and
/// complex unit vectors `n`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexVec3 {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl ComplexVec3 {
    pub const fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        Self { x, y, z }
    }

    pub fn real(x: f64, y: f64, z: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), Complex64::new(y, 0.0), Complex64::new(z, 0.0))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_array(a: [Complex64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    /// Bilinear sum `a_x b_x + a_y b_y + a_z b_z`, no conjugation.
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    /// `sqrt(dot(a, a))`, principal branch.
    pub fn norm_v(&self) -> Complex64 {
        csqrt(self.dot(self))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.x.conj(), self.y.conj(), self.z.conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.x.im.abs() <= tol && self.y.im.abs() <= tol && self.z.im.abs() <= tol
    }

    /// Hermitian length, used only for tolerances.
    pub fn hermitian_norm(&self) -> f64 {
        (self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()).sqrt()
    }
}

impl Index<usize> for ComplexVec3 {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("ComplexVec3 index {i} out of range"),
        }
    }
}

impl Add for ComplexVec3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for ComplexVec3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for ComplexVec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<Complex64> for ComplexVec3 {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        self.scale(s)
    }
}
