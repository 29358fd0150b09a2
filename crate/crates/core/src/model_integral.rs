//! The boost model integral `int exp(i A arsh(lambda sinh psi)) d psi`.
//!
//! The left side is integrated directly in `psi` with exponential damping,
//! independently of the closed form on the right side.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{damped_oscillatory, Domain, IntegralResult, QuadratureSpec};
use crate::special_fn::hyp2f1;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub a: f64,
    pub lambda: f64,
    pub spec: QuadratureSpec,
}

impl ModelParams {
    /// Uses [`ModelParams::default_spec`].
    pub fn new(a: f64, lambda: f64) -> Result<Self> {
        Self::with_spec(a, lambda, Self::default_spec())
    }

    pub fn with_spec(a: f64, lambda: f64, spec: QuadratureSpec) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) || !a.is_finite() {
            return Err(Error::Domain(format!("model integral needs 0 < lambda <= 1, got lambda = {lambda}")));
        }
        Ok(Self { a, lambda, spec })
    }

    /// Eight halvings of the damping from 0.2 with full-order extrapolation.
    /// The shorter default schedule leaves a 1e-4 bias near `lambda = 1`.
    pub fn default_spec() -> QuadratureSpec {
        QuadratureSpec::default().with_geometric_schedule(0.2, 8)
    }
}

/// `arsh(lambda sinh psi)` without overflow for large `|psi|`.
pub fn arsh_lambda_sinh(lambda: f64, psi: f64) -> f64 {
    let a = psi.abs();
    if a <= 20.0 {
        return (lambda * psi.sinh()).asinh();
    }
    // ln y with y = lambda sinh|psi|
    let ln_y = a + lambda.ln() + (-(-2.0 * a).exp()).ln_1p() - std::f64::consts::LN_2;
    let tail = (1.0 + (-2.0 * ln_y).exp()).sqrt().ln_1p();
    psi.signum() * (ln_y + tail)
}

/// Damped-oscillatory value of the model integral over the whole line.
pub fn model_lhs(p: &ModelParams) -> Result<IntegralResult> {
    let (a, lambda) = (p.a, p.lambda);
    let f = move |psi: f64| Complex64::new(0.0, a * arsh_lambda_sinh(lambda, psi)).exp();
    damped_oscillatory(&f, Domain::WholeLine, &p.spec)
}

/// `(1 - lambda^2) (pi A/2)/sinh(pi A/2) 2F1(1 + iA/2, 1 - iA/2; 2; 1 - lambda^2)`.
/// At `A = 0` this returns the `A -> 0` limit of the non-delta part.
pub fn model_rhs(p: &ModelParams) -> Result<Complex64> {
    let x = 1.0 - p.lambda * p.lambda;
    if x == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let t = PI * p.a.abs() / 2.0;
    let ratio = if t < 1e-8 { 1.0 } else if t > 700.0 { 0.0 } else { t / t.sinh() };
    let half = Complex64::new(0.0, p.a / 2.0);
    let f = hyp2f1(1.0 + half, 1.0 - half, Complex64::new(2.0, 0.0), x)?;
    Ok(f * (x * ratio))
}

/// Leading large-`|A|` behaviour of [`model_rhs`].
pub fn model_asymptotic(p: &ModelParams) -> Complex64 {
    let (a, l) = (p.a.abs(), p.lambda);
    let v = (2.0 * PI).sqrt() * (1.0 - l * l).powf(0.25) / (l * a).sqrt() * (-a * l.asin()).exp();
    Complex64::new(v, 0.0)
}
