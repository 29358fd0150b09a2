//! Rotation-vector chart of SO(3) and SO(3,C), the chart density, the
//! multiplicative selfdual split of Lorentz matrices and area bivectors.
//!
//! Conventions: metric `diag(-1, 1, 1, 1)`, `eps_123 = +1`, and
//! `so3c_exp(phi) = exp(-[phi]_x)` so that the extracted rotation vector
//! `r_a = eps_abc M^bc / 2` equals `phi_a sin(phi)/phi`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Matrix4, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::vec3::ComplexVec3;

pub type So3cMatrix = Matrix3<Complex64>;
pub type LorentzMatrix = Matrix4<f64>;
pub type RotationVector = ComplexVec3;

/// Total mass of the chart density over the unit ball, `(pi - 2)/(4 pi)`.
pub const HAAR_CHART_MASS: f64 = (PI - 2.0) / (4.0 * PI);

/// `(1/sqrt(1-r^2) - 1)/(8 pi^2 r^2)` on the real chart.
pub fn haar_density(r: &RotationVector) -> Result<f64> {
    if !r.is_real(0.0) {
        return Err(Error::Domain("chart density is defined on real rotation vectors".into()));
    }
    haar_density_r2(r.dot(r).re)
}

/// Density as a function of `r^2`.
pub fn haar_density_r2(r2: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r2) {
        return Err(Error::Domain(format!("rotation vector outside the open unit ball: r^2 = {r2}")));
    }
    // (1/s - 1)/r^2 = 1/(s (1 + s)) with s = sqrt(1 - r^2): no cancellation at r = 0.
    let s = (1.0 - r2).sqrt();
    Ok(1.0 / (8.0 * PI * PI * s * (1.0 + s)))
}

fn hat(p: &ComplexVec3) -> So3cMatrix {
    let z = Complex64::new(0.0, 0.0);
    So3cMatrix::new(z, -p.z, p.y, p.z, z, -p.x, -p.y, p.x, z)
}

/// `cos(phi) 1 + (1 - cos phi)/phi^2 phi phi^T - sin(phi)/phi [phi]_x`.
pub fn so3c_exp(phi: &ComplexVec3) -> So3cMatrix {
    let s = phi.dot(phi);
    let (c, sinc, vers) = if s.norm() < 1e-6 {
        (
            1.0 - s / 2.0 + s * s / 24.0,
            1.0 - s / 6.0 + s * s / 120.0,
            0.5 - s / 24.0 + s * s / 720.0,
        )
    } else {
        let t = s.sqrt();
        let c = t.cos();
        (c, t.sin() / t, (1.0 - c) / s)
    };
    let p = Vector3::new(phi.x, phi.y, phi.z);
    So3cMatrix::identity() * c + p * p.transpose() * vers - hat(phi) * sinc
}

/// `r_a = eps_abc M^bc / 2`.
pub fn so3c_r(m: &So3cMatrix) -> RotationVector {
    ComplexVec3::new(
        (m[(1, 2)] - m[(2, 1)]) * 0.5,
        (m[(2, 0)] - m[(0, 2)]) * 0.5,
        (m[(0, 1)] - m[(1, 0)]) * 0.5,
    )
}

/// Max deviation from `M^T M = 1`, `det M = 1`.
pub fn so3c_defect(m: &So3cMatrix) -> f64 {
    let orth = (m.transpose() * m - So3cMatrix::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    orth.max((m.determinant() - 1.0).norm())
}

pub fn minkowski_metric() -> LorentzMatrix {
    LorentzMatrix::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

/// Max deviation from `L^T eta L = eta`.
pub fn lorentz_defect(l: &LorentzMatrix) -> f64 {
    let eta = minkowski_metric();
    (l.transpose() * eta * l - eta).abs().max()
}

/// Active rotation by `angle` about the unit `axis`.
pub fn lorentz_rotation(axis: [f64; 3], angle: f64) -> LorentzMatrix {
    let n = Vector3::from(axis).normalize();
    let rot = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_unchecked(n), angle);
    let mut l = LorentzMatrix::identity();
    l.fixed_view_mut::<3, 3>(1, 1).copy_from(rot.matrix());
    l
}

/// Boost with the given rapidity along the unit `direction`.
pub fn lorentz_boost(direction: [f64; 3], rapidity: f64) -> LorentzMatrix {
    let n = Vector3::from(direction).normalize();
    let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
    let mut l = LorentzMatrix::identity();
    l[(0, 0)] = ch;
    for a in 0..3 {
        l[(0, a + 1)] = sh * n[a];
        l[(a + 1, 0)] = sh * n[a];
        for b in 0..3 {
            l[(a + 1, b + 1)] += (ch - 1.0) * n[a] * n[b];
        }
    }
    l
}

/// Selfdual 3-vector of an antisymmetric tensor:
/// `v_a = (i eps_abc F^bc / 2 + F^0a) / 2`.
fn selfdual_part(f: &LorentzMatrix, sign: f64) -> ComplexVec3 {
    let i = Complex64::new(0.0, sign);
    let comp = |a: usize, b: usize, c: usize| (i * f[(b, c)] + f[(0, a)]) * 0.5;
    ComplexVec3::new(comp(1, 2, 3), comp(2, 3, 1), comp(3, 1, 2))
}

/// Adjoint action of a proper orthochronous Lorentz matrix on the selfdual
/// and antiselfdual bivector subspaces.
pub fn lorentz_selfdual_split(l: &LorentzMatrix) -> Result<(So3cMatrix, So3cMatrix)> {
    if lorentz_defect(l) > 1e-10 || l.determinant() <= 0.0 || l[(0, 0)] < 1.0 - 1e-10 {
        return Err(Error::Domain("matrix is not a proper orthochronous Lorentz transformation".into()));
    }
    let mut plus = So3cMatrix::zeros();
    for b in 0..3 {
        // Boost generator F^{0b} = 1 has selfdual part e_b / 2.
        let mut f = LorentzMatrix::zeros();
        f[(0, b + 1)] = 1.0;
        f[(b + 1, 0)] = -1.0;
        let image = selfdual_part(&(l * f * l.transpose()), 1.0);
        for a in 0..3 {
            plus[(a, b)] = image[a] * 2.0;
        }
    }
    let minus = plus.map(|z| z.conj());
    Ok((plus, minus))
}

/// Selfdual and antiselfdual area vectors of the triangle spanned by two edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaBivector {
    pub plus_v: ComplexVec3,
    pub minus_v: ComplexVec3,
}

/// `2 (+-v) = +-i l1 x l2 - l1 l2^0 + l2 l1^0`.
pub fn bivector_split(l1: [f64; 4], l2: [f64; 4]) -> AreaBivector {
    let a = ComplexVec3::real(l1[1], l1[2], l1[3]);
    let b = ComplexVec3::real(l2[1], l2[2], l2[3]);
    let cross = a.cross(&b);
    let time = b.scale(Complex64::new(l1[0], 0.0)) - a.scale(Complex64::new(l2[0], 0.0));
    let half = Complex64::new(0.5, 0.0);
    AreaBivector {
        plus_v: (cross.scale(Complex64::i()) + time).scale(half),
        minus_v: (cross.scale(-Complex64::i()) + time).scale(half),
    }
}

impl AreaBivector {
    /// Applies `(R+, R-)` to both parts.
    pub fn rotate(&self, plus: &So3cMatrix, minus: &So3cMatrix) -> Self {
        Self { plus_v: apply(plus, &self.plus_v), minus_v: apply(minus, &self.minus_v) }
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        (self.minus_v - self.plus_v.conj()).hermitian_norm() <= tol
    }
}

pub fn apply(m: &So3cMatrix, v: &ComplexVec3) -> ComplexVec3 {
    let w = m * Vector3::new(v.x, v.y, v.z);
    ComplexVec3::new(w[0], w[1], w[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_dev(a: &So3cMatrix, b: &So3cMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn density_examples() {
        let d0 = haar_density(&ComplexVec3::zero()).unwrap();
        assert!((d0 - 1.0 / (16.0 * PI * PI)).abs() < 1e-18);
        let d = haar_density(&ComplexVec3::real(0.6, 0.0, 0.0)).unwrap();
        assert!((d - (1.0 / 0.8 - 1.0) / (8.0 * PI * PI * 0.36)).abs() < 1e-16);
        assert!(haar_density(&ComplexVec3::real(1.0, 0.0, 0.0)).is_err());
        let x = 1e-5;
        let series = (0.5 + 3.0 * x / 8.0 + 5.0 * x * x / 16.0) / (8.0 * PI * PI);
        assert!((haar_density_r2(x).unwrap() - series).abs() < 1e-15 * series);
    }

    #[test]
    fn exp_examples() {
        assert!(max_dev(&so3c_exp(&ComplexVec3::zero()), &So3cMatrix::identity()) < 1e-15);
        let m = so3c_exp(&ComplexVec3::real(0.0, 0.0, PI / 2.0));
        let want = So3cMatrix::new(
            c(0., 0.), c(1., 0.), c(0., 0.),
            c(-1., 0.), c(0., 0.), c(0., 0.),
            c(0., 0.), c(0., 0.), c(1., 0.),
        );
        assert!(max_dev(&m, &want) < 1e-15);
        assert!((so3c_r(&m) - ComplexVec3::real(0.0, 0.0, 1.0)).hermitian_norm() < 1e-15);
        let b = so3c_exp(&ComplexVec3::new(c(0., 0.), c(0., 0.), c(0., -0.3)));
        let want = ComplexVec3::new(c(0., 0.), c(0., 0.), c(0., -(0.3f64).sinh()));
        assert!((so3c_r(&b) - want).hermitian_norm() < 1e-15);
        assert!(so3c_defect(&b) < 1e-14);
    }

    #[test]
    fn split_examples() {
        let (p, m) = lorentz_selfdual_split(&LorentzMatrix::identity()).unwrap();
        assert!(max_dev(&p, &So3cMatrix::identity()) < 1e-15 && max_dev(&m, &So3cMatrix::identity()) < 1e-15);
        let theta = 0.7;
        let (p, _) = lorentz_selfdual_split(&lorentz_rotation([0.0, 0.0, 1.0], theta)).unwrap();
        let rot = so3c_exp(&ComplexVec3::real(0.0, 0.0, -theta));
        assert!(max_dev(&p, &rot) < 1e-14);
        assert!((p[(1, 0)].re - theta.sin()).abs() < 1e-15);
        let psi = 0.4;
        let (p, m) = lorentz_selfdual_split(&lorentz_boost([0.0, 0.0, 1.0], psi)).unwrap();
        let want = so3c_exp(&ComplexVec3::new(c(0., 0.), c(0., 0.), c(0., -psi)));
        assert!(max_dev(&p, &want) < 1e-14);
        assert!(max_dev(&m, &want.map(|z| z.conj())) < 1e-14);
        let mut bad = LorentzMatrix::identity();
        bad[(0, 0)] = -1.0;
        assert!(lorentz_selfdual_split(&bad).is_err());
    }

    #[test]
    fn bivector_examples() {
        let b = bivector_split([0., 1., 0., 0.], [0., 0., 1., 0.]);
        assert_eq!(b.plus_v, ComplexVec3::new(c(0., 0.), c(0., 0.), c(0., 0.5)));
        assert_eq!(b.plus_v.dot(&b.plus_v), c(-0.25, 0.0));
        let t = bivector_split([1., 0., 0., 0.], [0., 1., 0., 0.]);
        assert_eq!(t.plus_v, ComplexVec3::real(0.5, 0.0, 0.0));
        let z = bivector_split([0.3, 1., 2., -1.], [0.3, 1., 2., -1.]);
        assert_eq!(z.plus_v, ComplexVec3::zero());
        assert!(b.is_physical(0.0));
    }
}
