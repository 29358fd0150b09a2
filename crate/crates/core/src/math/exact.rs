//! Exact combinatorics over arbitrary-precision rationals.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n!!` with the conventions `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Taylor coefficients `c_0..=c_{k_max}` of `(1/sqrt(1-x) - 1)/x`,
/// `c_m = C(2m+2, m+1) / 4^(m+1)`.
pub fn measure_series(k_max: usize) -> Vec<Rational> {
    (0..=k_max as i64)
        .map(|m| {
            let four = BigInt::from(4).pow((m + 1) as u32);
            Rational::new(binomial(2 * m + 2, m + 1), four)
        })
        .collect()
}

pub fn to_f64(r: &Rational) -> f64 {
    // Scale down huge operands before converting to keep precision.
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n.max(d) - 1000).max(0) as usize;
        let nn = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let dd = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        nn / dd
    })
}

/// Gaussian rational `re + i im`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    /// `i^n` for any integer `n`.
    pub fn i_pow(n: i64) -> Self {
        match n.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc * self.clone())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn abs_bound(&self) -> Rational {
        self.re.abs() + self.im.abs()
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_series_leading_terms() {
        let c = measure_series(2);
        assert_eq!(c, vec![rat(1, 2), rat(3, 8), rat(5, 16)]);
    }

    #[test]
    fn measure_series_sums_to_closed_form() {
        let x: f64 = 0.3;
        let s: f64 = measure_series(20).iter().enumerate().map(|(m, c)| to_f64(c) * x.powi(m as i32)).sum();
        let want = (1.0 / (1.0 - x).sqrt() - 1.0) / x;
        // Tail after m = 20 is below 0.3^21 * c_21.
        assert!((s - want).abs() < 1e-11, "{s} vs {want}");
        let s_long: f64 =
            measure_series(40).iter().enumerate().map(|(m, c)| to_f64(c) * x.powi(m as i32)).sum();
        assert!((s_long - want).abs() < 1e-12);
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(double_factorial(5), BigInt::from(15));
        assert_eq!(double_factorial(-1), BigInt::one());
    }

    #[test]
    fn gaussian_powers_of_i() {
        assert_eq!(GaussRational::i().pow(3), GaussRational::i_pow(3));
        assert_eq!(GaussRational::i_pow(-1), -GaussRational::i());
    }
}
