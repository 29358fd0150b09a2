//! Basic integrals over one selfdual sector: the tensor structure
//! `v d_a1 .. d_aj (1/v)`, the kernels tilde-J and tilde-I, the scalar `N_j`
//! with its sinh suppression, and the property-(iii) series bound.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::haar_so3::haar_density_r2;
use crate::math::exact::{binomial, factorial, measure_series, to_f64, Rational};
use crate::math::radial::{sphere_monomial_average, RadialExpr};
use crate::math::vec3::ComplexVec3;
use crate::quadrature::{
    damped_oscillatory, integrate_1d, integrate_ball_with, BallRule, Domain, IntegralResult, QuadratureSpec,
};
use crate::special_fn::{factorial_f64, q_over_sinh, rgamma, CouplingConfig};

/// Ordered tensor indices, stored zero-based (`0, 1, 2` for `x, y, z`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if let Some(bad) = indices.iter().find(|&&i| i > 2) {
            return Err(Error::Domain(format!("tensor index {bad} out of range 0..=2")));
        }
        Ok(Self(indices))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Repeats one axis `j` times.
    pub fn repeated(axis: usize, j: usize) -> Result<Self> {
        Self::new(vec![axis; j])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Every index tuple of length `j`, lexicographically.
    pub fn all(j: usize) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for _ in 0..j {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..3).map(move |a| {
                        let mut q = p.clone();
                        q.push(a);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// Parses one-based indices such as `1,3,3`, or `xyz`-letters; empty means no indices.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Self::empty());
        }
        let err = |m: String| Error::Parse { line: 1, message: m };
        let mut idx = Vec::new();
        if s.chars().all(|c| matches!(c, 'x' | 'y' | 'z')) {
            for c in s.chars() {
                idx.push(match c {
                    'x' => 0,
                    'y' => 1,
                    _ => 2,
                });
            }
            return Ok(Self(idx));
        }
        for tok in s.split(',') {
            let k: usize = tok.trim().parse().map_err(|_| err(format!("bad tensor index `{tok}`")))?;
            if !(1..=3).contains(&k) {
                return Err(err(format!("tensor index {k} outside 1..=3")));
            }
            idx.push(k - 1);
        }
        Ok(Self(idx))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "-");
        }
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Symbolic `r d_idx (1/r)`.
pub fn tensor_structure_expr(idx: &MultiIndex) -> RadialExpr {
    RadialExpr::r_pow(-1).derivatives(idx.as_slice()).mul(&RadialExpr::r_pow(1))
}

/// `v d_a1 .. d_aj (1/v)` at a complex vector, principal branch of `v`.
pub fn tensor_structure(v: &ComplexVec3, idx: &MultiIndex) -> Result<Complex64> {
    if idx.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if v.dot(v).norm() == 0.0 {
        return Err(Error::Singularity("tensor structure needs v.v != 0".into()));
    }
    tensor_structure_expr(idx).eval(v)
}

/// `C_j`: sphere average of `n^a1 .. n^aj v d_a1 .. d_aj (1/v)`, exact.
/// The contraction `x^a1..x^aj d_a1..d_aj` equals `D (D-1) .. (D-j+1)` with
/// the Euler operator `D = x.d`, applied symbolically here.
pub fn angular_constant(j: usize) -> Rational {
    let euler = |e: &RadialExpr| -> RadialExpr {
        (0..3).fold(RadialExpr::zero(), |acc, a| acc.add(&RadialExpr::coordinate(a).mul(&e.derivative(a))))
    };
    let mut e = RadialExpr::r_pow(-1);
    for k in 0..j {
        let shifted = e.scale(&Rational::from_integer((k as i64).into()));
        e = euler(&e).sub(&shifted);
    }
    e.mul(&RadialExpr::r_pow(1)).sphere_average()
}

/// Closed form `-(4 pi^2 / r) (z - r)^j / (j! (2i)^j) theta(z - r)`.
pub fn tilde_j(r: f64, z: f64, j: usize) -> Complex64 {
    if z <= r {
        return Complex64::zero();
    }
    let fact = factorial_f64(j);
    let two_i = Complex64::new(0.0, 2.0).powi(j as i32);
    -(4.0 * PI * PI / r) * (z - r).powi(j as i32) / (two_i * fact)
}

/// `e^{-it/2}/2 + (-1)^j e^{it/2}/2 - sum_{n <= j/2} (t/2i)^(j-2n)/(j-2n)!`,
/// i.e. the exponential bracket with its first Taylor terms removed.
/// Equals `sum_{k >= j+2, k = j mod 2} (t/2i)^k / k!`.
pub fn subtracted_bracket(t: f64, j: usize) -> Complex64 {
    let x = Complex64::new(0.0, -t / 2.0); // t / (2i)
    if t.abs() < 4.0 + j as f64 {
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..=j + 2 {
            term = term * x / k as f64;
        }
        let mut sum = term;
        let mut k = j + 2;
        loop {
            term = term * x * x / (((k + 1) * (k + 2)) as f64);
            k += 2;
            sum += term;
            if term.norm() <= 1e-18 * sum.norm().max(1e-300) || k > 400 {
                return sum;
            }
        }
    }
    let e = Complex64::new(0.0, t / 2.0).exp();
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut sum = e.conj() * 0.5 + e * (0.5 * sign);
    for n in 0..=j / 2 {
        let k = j - 2 * n;
        let fact = factorial_f64(k);
        sum -= x.powi(k as i32) / fact;
    }
    sum
}

/// Damping schedule used by [`tilde_j_oracle`] unless the caller supplies one.
pub fn tilde_j_oracle_spec() -> QuadratureSpec {
    let mut s = QuadratureSpec::default().with_geometric_schedule(0.05, 8);
    s.panel_width = 4.0;
    s
}

/// Brute-force tilde-J: the 3D `v` integral reduced to a radial one with
/// `int exp(i v.r/2) dO = 4 pi sin(vr/2)/(vr/2)`, then damped and extrapolated.
pub fn tilde_j_oracle(r: f64, z: f64, j: usize, spec: &QuadratureSpec) -> Result<IntegralResult> {
    if !(r > 0.0 && z > 0.0) {
        return Err(Error::Domain(format!("tilde-J oracle needs r > 0 and z > 0, got r = {r}, z = {z}")));
    }
    let f = move |v: f64| {
        if v == 0.0 {
            return Complex64::zero();
        }
        let x = v * r / 2.0;
        let sinc = x.sin() / x;
        subtracted_bracket(v * z, j) * (4.0 * PI * sinc / v.powi(j as i32))
    };
    damped_oscillatory(&f, Domain::HalfLine, spec)
}

fn kernel_terms(alpha: &MultiIndex) -> Vec<(f64, RadialExpr)> {
    // (z - r)^j / r = sum_s C(j,s) z^(j-s) (-1)^s r^(s-1); stores (sign * C(j,s), d_alpha r^(s-1)).
    let j = alpha.len() as i64;
    (0..=j)
        .map(|s| {
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            let c = binomial(j, s).to_f64().unwrap_or(f64::INFINITY) * sign;
            (c, RadialExpr::r_pow(s as i32 - 1).derivatives(alpha.as_slice()))
        })
        .collect()
}

/// Pointwise integrand of tilde-I without its constant prefactor:
/// `r_gamma D+R d_alpha[(z - r)^j/r]` inside `|r| < z`, zero outside.
pub(crate) fn tilde_i_integrand(z: f64, alpha: &MultiIndex, gamma_idx: &MultiIndex) -> impl Fn([f64; 3]) -> Complex64 + Sync {
    let j = alpha.len();
    let terms = kernel_terms(alpha);
    let zpow: Vec<f64> = (0..=j).map(|s| z.powi((j - s) as i32)).collect();
    let gi = gamma_idx.as_slice().to_vec();
    move |p: [f64; 3]| -> Complex64 {
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        if r2 >= z * z || r2 == 0.0 {
            return Complex64::zero();
        }
        let v = ComplexVec3::real(p[0], p[1], p[2]);
        let mut k = Complex64::zero();
        for (s, (c, e)) in terms.iter().enumerate() {
            if *c != 0.0 && !e.is_empty() {
                k += e.eval(&v).unwrap_or_default() * (c * zpow[s]);
            }
        }
        let mono: f64 = gi.iter().map(|&a| p[a]).product();
        k * mono * haar_density_r2(r2).unwrap_or(0.0)
    }
}

/// `4 pi^2 (-1)^(j+1) / j!`
pub(crate) fn tilde_i_prefactor(j: usize) -> f64 {
    let fact = factorial_f64(j);
    let sign = if j.is_multiple_of(2) { -1.0 } else { 1.0 };
    4.0 * PI * PI * sign / fact
}

/// tilde-I by ball quadrature:
/// `4 pi^2 (-1)^(j+1)/j! int r_gamma D+R d_alpha[(z - r)^j theta(z - r)/r]`.
pub fn tilde_i(z: f64, alpha: &MultiIndex, gamma_idx: &MultiIndex, spec: &QuadratureSpec) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain(format!("tilde-I needs 0 <= z <= 1, got {z}")));
    }
    if alpha.len() != gamma_idx.len() {
        return Err(Error::Domain("tilde-I pairs multi-indices of equal length".into()));
    }
    if z == 0.0 {
        return Ok(Complex64::zero());
    }
    let f = tilde_i_integrand(z, alpha, gamma_idx);
    let res = integrate_ball_with(&f, &[z], &BallRule::default(), spec)?;
    Ok(res.value * tilde_i_prefactor(alpha.len()))
}

/// Exact power series of tilde-I: returns `(power, a)` with
/// `tilde-I(z) = 2 pi sum a z^power`, powers `j + 2m + 2` for `m <= m_max`.
pub fn tilde_i_coefficients(alpha: &MultiIndex, gamma_idx: &MultiIndex, m_max: usize) -> Result<Vec<(usize, Rational)>> {
    if alpha.len() != gamma_idx.len() {
        return Err(Error::Domain("tilde-I pairs multi-indices of equal length".into()));
    }
    let j = alpha.len();
    let mut gpow = [0u32; 3];
    for &a in gamma_idx.as_slice() {
        gpow[a] += 1;
    }
    let c = measure_series(m_max);
    let jf = Rational::from_integer(factorial(j as u64));
    let sign = if j.is_multiple_of(2) { -1 } else { 1 };
    // Angular part of each s-term, before the radial 1/(s + 2m + 2).
    let mut angular: Vec<Rational> = Vec::with_capacity(j + 1);
    for s in 0..=j as i64 {
        let d = RadialExpr::r_pow(s as i32 - 1).derivatives(alpha.as_slice());
        let mut acc = Rational::zero();
        for (m, coef) in d.terms() {
            let p = [m.pow[0] + gpow[0], m.pow[1] + gpow[1], m.pow[2] + gpow[2]];
            acc += coef * sphere_monomial_average(p);
        }
        let sgn = if s % 2 == 0 { 1 } else { -1 };
        angular.push(acc * Rational::from_integer(binomial(j as i64, s) * sgn));
    }
    Ok((0..=m_max)
        .map(|m| {
            let mut a = Rational::zero();
            for (s, ang) in angular.iter().enumerate() {
                a += ang / Rational::from_integer(((s + 2 * m + 2) as i64).into());
            }
            (j + 2 * m + 2, a * &c[m] * Rational::from_integer(sign.into()) / &jf)
        })
        .collect())
}

/// tilde-I from its exact series, summed to `m_max`.
pub fn tilde_i_series(z: f64, alpha: &MultiIndex, gamma_idx: &MultiIndex, m_max: usize) -> Result<Complex64> {
    let coeffs = tilde_i_coefficients(alpha, gamma_idx, m_max)?;
    let s: f64 = coeffs.iter().map(|(p, a)| to_f64(a) * z.powi(*p as i32)).sum();
    Ok(Complex64::new(2.0 * PI * s, 0.0))
}

/// `tilde-I_0(z) = 2 pi ln((1 + sqrt(1 - z^2))/2)`.
pub fn tilde_i0_closed(z: f64) -> f64 {
    2.0 * PI * ((1.0 + (1.0 - z * z).sqrt()) / 2.0).ln()
}

/// One-dimensional radial oracle for the scalar tilde-I:
/// `-2 pi int_0^z (1/sqrt(1 - r^2) - 1)/r dr`.
pub fn tilde_i0_radial(z: f64, spec: &QuadratureSpec) -> Result<f64> {
    let f = |r: f64| {
        if r == 0.0 {
            return Complex64::zero();
        }
        let s = (1.0 - r * r).sqrt();
        Complex64::new(r / (s * (1.0 + s)), 0.0)
    };
    Ok(-2.0 * PI * integrate_1d(&f, 0.0, z, spec)?.value.re)
}

const POLE_RADIUS: f64 = 1e-6;

fn prefactor(cfg: &CouplingConfig) -> Complex64 {
    if cfg.euclidean {
        Complex64::new(0.5, 0.0)
    } else {
        Complex64::new(0.0, -0.5)
    }
}

fn check_poles(q2: Complex64, j: usize) -> Result<()> {
    for k in 0..=j / 2 {
        let n = (j + 1 - 2 * k) as f64;
        if (q2 + n * n).norm() < POLE_RADIUS {
            return Err(Error::Singularity(format!("Q^2 = {q2} at the pole -{}", n * n)));
        }
    }
    Ok(())
}

/// Scalar `N_j(v)`:
/// `pre [c/2]^-j Q/sinh(pi Q) prod_k (Q^2 + (j+1-2k)^2)^-1 (Q^2)^floor(j/2)`
/// with `c` the coupling, `Q = c v/2`, `pre = -i/2` (Minkowski) or `1/2` (Euclidean).
pub fn n_scalar(v: Complex64, j: usize, cfg: &CouplingConfig) -> Result<Complex64> {
    let c = cfg.coupling();
    let q = cfg.q(v);
    let q2 = q * q;
    check_poles(q2, j)?;
    let mut prod = Complex64::new(1.0, 0.0);
    for k in 0..=j / 2 {
        let n = (j + 1 - 2 * k) as f64;
        prod /= q2 + n * n;
    }
    Ok(prefactor(cfg) * (c / 2.0).powi(-(j as i32)) * q_over_sinh(q) * prod * q2.powi((j / 2) as i32))
}

/// Partial-fraction form of [`n_scalar`] before reduction to a common denominator.
pub fn n_scalar_sum_form(v: Complex64, j: usize, cfg: &CouplingConfig) -> Result<Complex64> {
    let c = cfg.coupling();
    let q = cfg.q(v);
    let q2 = q * q;
    check_poles(q2, j)?;
    let jf = factorial_f64(j + 1);
    let mut sum = Complex64::zero();
    for k in 0..=j / 2 {
        let n = (j + 1 - 2 * k) as i64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let w = binomial(j as i64 + 1, k as i64).to_f64().unwrap_or(f64::INFINITY) * (n as f64).powi(j as i32 + 1);
        sum += sign * w / (jf * (q2 + (n * n) as f64));
    }
    Ok(prefactor(cfg) * c.powi(-(j as i32)) * q_over_sinh(q) * sum)
}

/// Scalar and tensor parts of the basic integral for one selfdual sector.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicIntegralValue {
    pub j: usize,
    /// `N_j`-type scalar prefactor including the suppression factor.
    pub scalar: Complex64,
    pub suppression: Complex64,
    /// `v d_alpha (1/v)` for the requested multi-index.
    pub component: Complex64,
    /// All `3^j` components of the tensor structure.
    pub tensor: Vec<(MultiIndex, Complex64)>,
}

impl BasicIntegralValue {
    pub fn value(&self) -> Complex64 {
        self.scalar * self.component
    }
}

pub fn basic_integral(v: &ComplexVec3, alpha: &MultiIndex, cfg: &CouplingConfig) -> Result<BasicIntegralValue> {
    let j = alpha.len();
    let vn = v.norm_v();
    let scalar = n_scalar(vn, j, cfg)?;
    let suppression = q_over_sinh(cfg.q(vn));
    let tensor = if j <= 6 {
        MultiIndex::all(j)
            .into_iter()
            .map(|m| tensor_structure(v, &m).map(|t| (m, t)))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let component = tensor_structure(v, alpha)?;
    Ok(BasicIntegralValue { j, scalar, suppression, component, tensor })
}

/// `1/|Gamma((j+3)/2 + w) Gamma((j+3)/2 - w)|` with `w = i c v/4`
/// (`= (1 + i/gamma) v/4` for Minkowski coupling).
pub fn series_term_bound(j: usize, v: f64, cfg: &CouplingConfig) -> f64 {
    let w = Complex64::i() * cfg.coupling() * (v / 4.0);
    let a = Complex64::new((j as f64 + 3.0) / 2.0, 0.0);
    (rgamma(a + w) * rgamma(a - w)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exact::int;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tensor_structure_examples() {
        let v = ComplexVec3::new(c(0.3, 0.1), c(-0.2, 0.5), c(1.1, -0.4));
        assert_eq!(tensor_structure(&v, &MultiIndex::empty()).unwrap(), c(1.0, 0.0));
        let t = tensor_structure(&v, &MultiIndex::new(vec![1]).unwrap()).unwrap();
        assert!((t + v.y / v.dot(&v)).norm() < 1e-14);
        let tr: Complex64 = (0..3).map(|a| tensor_structure(&v, &MultiIndex::new(vec![a, a]).unwrap()).unwrap()).sum();
        assert!(tr.norm() < 1e-13);
        assert!(tensor_structure(&ComplexVec3::new(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)), &MultiIndex::new(vec![0]).unwrap()).is_err());
    }

    #[test]
    fn angular_constants() {
        assert_eq!(angular_constant(0), int(1));
        assert_eq!(angular_constant(1), int(-1));
        assert_eq!(angular_constant(2), int(2));
        assert_eq!(angular_constant(3), int(-6));
    }

    #[test]
    fn tilde_j_examples() {
        assert_eq!(tilde_j(0.5, 0.3, 1), Complex64::zero());
        assert!((tilde_j(0.5, 0.8, 0) - c(-8.0 * PI * PI, 0.0)).norm() < 1e-12);
        let h = 1e-5;
        let d = (tilde_j(0.5, 0.7 + h, 1) - tilde_j(0.5, 0.7 - h, 1)) / (2.0 * h);
        let want = -(4.0 * PI * PI / 0.5) / c(0.0, 2.0);
        assert!((d - want).norm() < 1e-6 * want.norm());
    }

    #[test]
    fn subtracted_bracket_branches_agree() {
        for j in 0..5 {
            for &t in &[0.3, 3.9, 4.1 + j as f64, 7.0] {
                let x = c(0.0, -t / 2.0);
                let mut series = Complex64::zero();
                let mut k = j + 2;
                while k < 120 {
                    series += x.powi(k as i32) / factorial(k as u64).to_f64().unwrap();
                    k += 2;
                }
                assert!((subtracted_bracket(t, j) - series).norm() < 1e-12, "j={j} t={t}");
            }
        }
        assert_eq!(subtracted_bracket(0.0, 0), Complex64::zero());
        assert!((subtracted_bracket(2.0, 0) - c(1f64.cos() - 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tilde_j_oracle_matches_closed_form() {
        let spec = tilde_j_oracle_spec();
        let o = tilde_j_oracle(0.5, 0.8, 0, &spec).unwrap();
        let want = tilde_j(0.5, 0.8, 0);
        assert!((o.value - want).norm() < 1e-3 * want.norm(), "{:?}", o);
        let zero = tilde_j_oracle(0.5, 0.3, 0, &spec).unwrap();
        assert!(zero.value.norm() < 1e-3 * 4.0 * PI * PI / 0.5);
        let o2 = tilde_j_oracle(0.4, 0.9, 2, &spec).unwrap();
        let w2 = tilde_j(0.4, 0.9, 2);
        assert!((o2.value - w2).norm() < 1e-3 * w2.norm(), "{:?} {w2}", o2);
    }

    #[test]
    fn tilde_i_scalar_matches_radial_oracle() {
        let spec = QuadratureSpec::default();
        let e = MultiIndex::empty();
        let q = tilde_i(0.5, &e, &e, &spec).unwrap();
        let radial = tilde_i0_radial(0.5, &spec).unwrap();
        assert!((q.re - radial).abs() < 1e-6, "{q} vs {radial}");
        assert!((radial - tilde_i0_closed(0.5)).abs() < 1e-10);
        let s = tilde_i_series(0.5, &e, &e, 60).unwrap();
        assert!((s.re - tilde_i0_closed(0.5)).abs() < 1e-12);
        assert_eq!(tilde_i(0.0, &e, &e, &spec).unwrap(), Complex64::zero());
    }

    #[test]
    fn tilde_i_tensor_quadrature_matches_series() {
        let spec = QuadratureSpec::default();
        for (a, g) in [(vec![2], vec![2]), (vec![0], vec![1]), (vec![0, 1], vec![0, 1]), (vec![2, 2], vec![0, 0])] {
            let (a, g) = (MultiIndex::new(a).unwrap(), MultiIndex::new(g).unwrap());
            let q = tilde_i(0.6, &a, &g, &spec).unwrap();
            let s = tilde_i_series(0.6, &a, &g, 80).unwrap();
            assert!((q - s).norm() < 1e-7 * s.norm().max(1e-3), "{a} {g}: {q} vs {s}");
        }
    }

    #[test]
    fn n_scalar_examples() {
        let cfg = CouplingConfig::new(1.0).unwrap();
        assert!((n_scalar(c(0.0, 0.0), 0, &cfg).unwrap() - c(0.0, -0.5 / PI)).norm() < 1e-15);
        let small = n_scalar(c(1e-3, 0.0), 2, &cfg).unwrap();
        assert!(small.norm() < 1e-6);
        let a = n_scalar(c(1.0, 0.0), 0, &cfg).unwrap();
        let b = n_scalar_sum_form(c(1.0, 0.0), 0, &cfg).unwrap();
        assert!((a - b).norm() < 1e-15);
        for j in 0..6 {
            let a = n_scalar(c(2.3, 0.0), j, &cfg).unwrap();
            let b = n_scalar_sum_form(c(2.3, 0.0), j, &cfg).unwrap();
            assert!((a - b).norm() < 1e-12 * a.norm(), "j={j}");
        }
        // Pole at Q^2 = -1: Q = i, v = 2i/(1 - i) = i - 1.
        assert!(matches!(n_scalar(c(-1.0, 1.0), 0, &cfg), Err(Error::Singularity(_))));
    }

    #[test]
    fn basic_integral_examples() {
        let cfg = CouplingConfig::new(1.0).unwrap();
        let v = ComplexVec3::real(0.3, 1.2, -0.5);
        let b = basic_integral(&v, &MultiIndex::empty(), &cfg).unwrap();
        assert_eq!(b.value(), n_scalar(v.norm_v(), 0, &cfg).unwrap());
        let b2 = basic_integral(&v, &MultiIndex::new(vec![0, 1]).unwrap(), &cfg).unwrap();
        assert_eq!(b2.tensor.len(), 9);
        let trace: Complex64 = b2.tensor.iter().filter(|(m, _)| m.as_slice()[0] == m.as_slice()[1]).map(|(_, t)| *t).sum();
        assert!(trace.norm() < 1e-13);
        let zero = basic_integral(&ComplexVec3::zero(), &MultiIndex::empty(), &cfg).unwrap();
        assert!((zero.scalar - c(0.0, -0.5 / PI)).norm() < 1e-15);
    }

    #[test]
    fn series_bound_examples() {
        let cfg = CouplingConfig::new(1.0).unwrap();
        assert!((series_term_bound(0, 0.0, &cfg) - 4.0 / PI).abs() < 1e-14);
        let r: Vec<f64> = (0..6).map(|k| series_term_bound(20 + 10 * k, 3.0, &cfg) / series_term_bound(18 + 10 * k, 3.0, &cfg)).collect();
        assert!(r.windows(2).all(|w| w[1] < w[0]) && r[5] < 0.02);
    }

    #[test]
    fn multi_index_parsing() {
        assert_eq!(MultiIndex::parse("1,3").unwrap(), MultiIndex::new(vec![0, 2]).unwrap());
        assert_eq!(MultiIndex::parse("zz").unwrap(), MultiIndex::new(vec![2, 2]).unwrap());
        assert_eq!(MultiIndex::parse("").unwrap(), MultiIndex::empty());
        assert!(MultiIndex::parse("4").is_err());
        assert_eq!(MultiIndex::new(vec![0, 2]).unwrap().to_string(), "1,3");
    }
}
