//! Complex gamma and digamma, the Gauss hypergeometric function on `[0, 1)`,
//! the sinh suppression factor, harmonic coefficients of
//! `(d/dh)^(j+1) sin^(j+1) h`, the associated binomial sums, and the
//! `sinh(hx) / ((x^2+n^2) sinh(pi x))` table integral.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::math::exact::{binomial, Rational};
use crate::math::jet::Jet;
use crate::quadrature::{integrate_1d_with_breakpoints, QuadratureSpec};

/// Coupling constant data: `gamma` and the signature flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingConfig {
    pub gamma: f64,
    pub euclidean: bool,
}

impl CouplingConfig {
    pub fn new(gamma: f64) -> Result<Self> {
        Self::build(gamma, false)
    }

    pub fn euclidean(gamma_e: f64) -> Result<Self> {
        Self::build(gamma_e, true)
    }

    fn build(gamma: f64, euclidean: bool) -> Result<Self> {
        if gamma == 0.0 || !gamma.is_finite() {
            return Err(Error::Domain(format!("coupling gamma must be finite and nonzero, got {gamma}")));
        }
        Ok(Self { gamma, euclidean })
    }

    /// `1/gamma - i` (Minkowski) or `1/gamma_E + 1` (Euclidean).
    pub fn coupling(&self) -> Complex64 {
        if self.euclidean {
            Complex64::new(1.0 / self.gamma + 1.0, 0.0)
        } else {
            Complex64::new(1.0 / self.gamma, -1.0)
        }
    }

    /// `Q = coupling * v / 2`.
    pub fn q(&self, v: Complex64) -> Complex64 {
        self.coupling() * v * 0.5
    }

    /// `1 + i/gamma`, the selfdual weight of the action.
    pub fn selfdual_weight(&self) -> Complex64 {
        Complex64::new(1.0, 1.0 / self.gamma)
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln sin(w)` on some branch, stable for large `|Im w|`.
fn ln_sin(w: Complex64) -> Complex64 {
    let i = Complex64::i();
    if w.im.abs() < 20.0 {
        return w.sin().ln();
    }
    if w.im > 0.0 {
        // sin w = e^{-iw} (e^{2iw} - 1) / (2i)
        -i * w + ((i * w * 2.0).exp() - 1.0).ln() - (i * 2.0).ln()
    } else {
        // sin w = e^{iw} (1 - e^{-2iw}) / (2i)
        i * w + (1.0 - (-i * w * 2.0).exp()).ln() - (i * 2.0).ln()
    }
}

fn nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Gamma(z)` on a branch whose exponential is `Gamma(z)`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if nonpositive_integer(z) {
        return Err(Error::Singularity(format!("Gamma pole at {z}")));
    }
    if z.re < 0.5 {
        let rest = ln_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin(z * PI) - rest);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (k, p) in LANCZOS.iter().enumerate().skip(1) {
        x += *p / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln())
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// `1/Gamma(z)`, exactly zero at the poles.
pub fn rgamma(z: Complex64) -> Complex64 {
    match ln_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex64::zero(),
    }
}

/// Digamma by reflection, upward recurrence and the asymptotic series.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if nonpositive_integer(z) {
        return Err(Error::Singularity(format!("digamma pole at {z}")));
    }
    if z.re < 0.5 {
        let w = z * PI;
        let i = Complex64::i();
        let cot = if w.im >= 0.0 {
            let u = (i * w * 2.0).exp();
            i * (u + 1.0) / (u - 1.0)
        } else {
            let u = (-i * w * 2.0).exp();
            i * (u + 1.0) / (1.0 - u)
        };
        return Ok(digamma(Complex64::new(1.0, 0.0) - z)? - cot * PI);
    }
    let mut z = z;
    let mut acc = Complex64::zero();
    while z.norm() < 12.0 {
        acc -= z.inv();
        z += 1.0;
    }
    let z2 = (z * z).inv();
    let series = z2
        * (1.0 / 12.0
            - z2 * (1.0 / 120.0
                - z2 * (1.0 / 252.0 - z2 * (1.0 / 240.0 - z2 * (1.0 / 132.0 - z2 * (691.0 / 32760.0 - z2 / 12.0))))));
    Ok(acc + z.ln() - z.inv() * 0.5 - series)
}

fn check_hyp_args(c: Complex64, x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("hyp2f1 argument {x} outside [0, 1)")));
    }
    if nonpositive_integer(c) {
        return Err(Error::Domain(format!("hyp2f1 parameter c = {c} is a nonpositive integer")));
    }
    Ok(())
}

/// Direct Gauss series with at most `max_terms` terms.
pub fn hyp2f1_series(a: Complex64, b: Complex64, c: Complex64, x: f64, max_terms: usize) -> Result<Complex64> {
    check_hyp_args(c, x)?;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for n in 0..max_terms {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if term.is_zero() {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        reason: format!("hyp2f1 series did not converge within {max_terms} terms"),
        best: sum,
        error_estimate: term.norm(),
        evaluations: max_terms,
    })
}

const SERIES_CAP: usize = 100_000;

/// `2F1(a, b; c; x)` for `0 <= x < 1`: Gauss series for `x <= 1/2`, the
/// `x -> 1 - x` connection formula above that (with the logarithmic form
/// when `c = a + b`).
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    check_hyp_args(c, x)?;
    if x <= 0.5 {
        return hyp2f1_series(a, b, c, x, SERIES_CAP);
    }
    let s = c - a - b;
    let y = 1.0 - x;
    if s.norm() < 1e-14 {
        return hyp2f1_log_case(a, b, y);
    }
    let near_integer = (s.re - s.re.round()).abs() < 1e-6 && s.im.abs() < 1e-6;
    if near_integer {
        return hyp2f1_series(a, b, c, x, SERIES_CAP);
    }
    let one = Complex64::new(1.0, 0.0);
    let lg_c = ln_gamma(c)?;
    let t1 = (lg_c + ln_gamma(s)?).exp() * rgamma(c - a) * rgamma(c - b);
    let t2 = (lg_c + ln_gamma(-s)?).exp() * rgamma(a) * rgamma(b);
    let f1 = if t1.is_zero() { Complex64::zero() } else { hyp2f1_series(a, b, one - s, y, SERIES_CAP)? };
    let f2 = if t2.is_zero() { Complex64::zero() } else { hyp2f1_series(c - a, c - b, s + 1.0, y, SERIES_CAP)? };
    Ok(t1 * f1 + t2 * Complex64::new(y, 0.0).powc(s) * f2)
}

/// `c = a + b`: expansion in `1 - x` with digamma weights.
fn hyp2f1_log_case(a: Complex64, b: Complex64, y: f64) -> Result<Complex64> {
    let prefactor = (ln_gamma(a + b)?).exp() * rgamma(a) * rgamma(b);
    if prefactor.is_zero() {
        // One of a, b is a nonpositive integer: the Gauss series terminates.
        return hyp2f1_series(a, b, a + b, 1.0 - y, SERIES_CAP);
    }
    let ln_y = y.ln();
    let mut psi1 = digamma(Complex64::new(1.0, 0.0))?;
    let mut psia = digamma(a)?;
    let mut psib = digamma(b)?;
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::zero();
    let mut small = 0;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        let term = coeff * (psi1 * 2.0 - psia - psib - ln_y);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && n > 2 {
            small += 1;
            if small >= 2 {
                return Ok(prefactor * sum);
            }
        } else {
            small = 0;
        }
        coeff *= (a + nf) * (b + nf) / ((nf + 1.0) * (nf + 1.0)) * y;
        psi1 += 1.0 / (nf + 1.0);
        psia += (a + nf).inv();
        psib += (b + nf).inv();
    }
    Err(Error::Convergence {
        reason: "logarithmic hyp2f1 series did not converge".into(),
        best: prefactor * sum,
        error_estimate: f64::NAN,
        evaluations: SERIES_CAP,
    })
}

/// `Q / sinh(pi Q)` with `Q` from the coupling; flushes to 0 past the
/// exponent range. The value at `v = 0` is `1/pi`.
pub fn suppression_factor(v: Complex64, cfg: &CouplingConfig) -> Complex64 {
    q_over_sinh(cfg.q(v))
}

/// `Q / sinh(pi Q)`, entire in `Q`.
pub fn q_over_sinh(q: Complex64) -> Complex64 {
    let w = q * PI;
    if w.norm() < 1e-8 {
        return (1.0 - w * w / 6.0) / PI;
    }
    if w.re.abs() > 700.0 {
        return Complex64::zero();
    }
    if w.re.abs() > 20.0 {
        // sinh w = sign * e^{sign w} (1 - e^{-2 sign w}) / 2
        let sgn = w.re.signum();
        let e = (-w * sgn).exp();
        return q * 2.0 * sgn * e / (1.0 - e * e);
    }
    q / w.sinh()
}

/// Frequencies `j + 1 - 2k` and exact coefficients of `cos` in
/// `(d/dh)^(j+1) sin^(j+1) h`, `k = 0..=floor(j/2)`.
pub fn harmonic_coeffs(j: usize) -> Vec<(i64, Rational)> {
    let two_j = Rational::from_integer(BigInt::from(2).pow(j as u32));
    (0..=j / 2)
        .map(|k| {
            let freq = (j + 1 - 2 * k) as i64;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let c = binomial(j as i64 + 1, k as i64) * sign * BigInt::from(freq).pow(j as u32 + 1);
            (freq, Rational::from_integer(c) / two_j.clone())
        })
        .collect()
}

/// `sum_{k=0}^{floor(j/2)} (-1)^k (j+1-2k)^m C(j+1, k)`, exact.
pub fn binomial_sum(j: usize, m: u32) -> Rational {
    let mut acc = BigInt::zero();
    for k in 0..=j / 2 {
        let t = binomial(j as i64 + 1, k as i64) * BigInt::from(j as i64 + 1 - 2 * k as i64).pow(m);
        if k % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    Rational::from_integer(acc)
}

/// Integrand `sinh(hx) / ((x^2+n^2) sinh(pi x))`, overflow-free.
fn table_integrand(h: f64, n: f64, x: f64) -> f64 {
    if x == 0.0 {
        return h / (PI * n * n);
    }
    let a = h.abs();
    let ratio = (a - PI) * x;
    let num = -(-2.0 * a * x).exp_m1();
    let den = -(-2.0 * PI * x).exp_m1();
    h.signum() * ratio.exp() * num / den / (x * x + n * n)
}

/// Closed form of `int_0^inf sinh(hx) / ((x^2+n^2) sinh(pi x)) dx`.
pub fn table_integral_rhs(h: f64, n: usize) -> Result<Complex64> {
    if n == 0 || h.abs() >= PI {
        return Err(Error::Domain(format!("table integral needs n >= 1 and |h| < pi, got n = {n}, h = {h}")));
    }
    let i = Complex64::i();
    let nf = n as f64;
    let eih = |k: f64| Complex64::new(0.0, h * k).exp();
    let mut finite = Complex64::zero();
    for k in 1..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        finite += eih(k as f64) * (sign / (n - k) as f64);
    }
    let finite = finite * i / (2.0 * nf);
    let sign_n = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let log_term = i * sign_n * eih(nf) / (2.0 * nf) * (1.0 + eih(-1.0)).ln();

    // d^(n-1)/dy^(n-1) [(1+y)^(n-1) ln(1+y) / y] at y = e^{ih}.
    let order = n - 1;
    let y = Jet::new(vec![eih(1.0), Complex64::new(1.0, 0.0)], order);
    let one_plus_y = Jet::new(vec![eih(1.0) + 1.0, Complex64::new(1.0, 0.0)], order);
    let g = one_plus_y.powi(order as u32).mul_jet(&one_plus_y.ln()?).mul_jet(&y.recip()?);
    let deriv = g.derivative_at_zero(order)?;
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let deriv_term = i / (2.0 * fact) * deriv;
    Ok(finite + log_term + deriv_term)
}

/// Numerical left side and closed-form right side of the table integral.
pub fn table_integral(h: f64, n: usize, spec: &QuadratureSpec) -> Result<(Complex64, Complex64)> {
    let rhs = table_integral_rhs(h, n)?;
    let nf = n as f64;
    // Integrand decays like exp(-(pi - |h|) x); 50 e-folds is far below any tolerance.
    let x_max = 50.0 / (PI - h.abs());
    let f = |x: f64| Complex64::new(table_integrand(h, nf, x), 0.0);
    let breaks: Vec<f64> = (1..x_max.ceil() as usize).map(|k| k as f64).collect();
    let lhs = integrate_1d_with_breakpoints(&f, 0.0, x_max, &breaks, spec)?;
    Ok((lhs.value, rhs))
}

pub(crate) fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
