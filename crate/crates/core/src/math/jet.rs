//! Truncated univariate power series ("jets") in the kernel variable `h`.
//!
//! Convention: `coeffs[k] = f^(k)(0) / k!`. Every operation is exact
//! truncation of formal power-series arithmetic at the jet's order, so a
//! coefficient is never silently polluted by dropped higher terms.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{FromPrimitive, Num, Zero};

use crate::error::{Error, Result};

/// Scalars a jet can carry. `BigRational` and `Complex64` both qualify.
pub trait JetScalar: Clone + Num + FromPrimitive {}
impl<T: Clone + Num + FromPrimitive> JetScalar for T {}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T = Complex64> {
    coeffs: Vec<T>,
}

impl<T: JetScalar> Jet<T> {
    /// Builds a jet of the given order, padding with zeros or truncating.
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        Self { coeffs }
    }

    pub fn constant(c: T, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The identity series `h`.
    pub fn variable(order: usize) -> Self {
        Self::new(vec![T::zero(), T::one()], order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn constant_term(&self) -> T {
        self.coeffs[0].clone()
    }

    /// Re-truncates (or zero-extends) to a new order.
    pub fn with_order(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    fn binary_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    /// `d^k/dh^k` at `h = 0`, i.e. `k! * coeffs[k]`.
    pub fn derivative_at_zero(&self, k: usize) -> Result<T> {
        if k > self.order() {
            return Err(Error::Order { have: self.order(), need: k });
        }
        let mut fact = T::one();
        for i in 2..=k {
            fact = fact * T::from_usize(i).expect("factorial factor");
        }
        Ok(fact * self.coeffs[k].clone())
    }

    /// Formal derivative. The result has order one less than `self`.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=n)
            .map(|k| self.coeffs[k].clone() * T::from_usize(k).expect("index"))
            .collect();
        Self::new(coeffs, n - 1)
    }

    /// Antiderivative with the given constant term; order grows by one.
    pub fn integral(&self, c0: T) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(c0);
        for (k, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a.clone() / T::from_usize(k + 1).expect("index"));
        }
        let order = self.order() + 1;
        Self::new(coeffs, order)
    }

    /// Truncated Cauchy product.
    pub fn mul_jet(&self, other: &Self) -> Self {
        let n = self.binary_order(other);
        let mut out = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs: out }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::constant(T::one(), self.order());
        for _ in 0..n {
            acc = acc.mul_jet(self);
        }
        acc
    }

    /// `1 / self`; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.is_zero() {
            return Err(Error::Domain("reciprocal of a jet with zero constant term".into()));
        }
        let n = self.order();
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        out.push(T::one() / a0.clone());
        for k in 1..=n {
            let mut s = T::zero();
            for j in 1..=k {
                s = s + self.coeffs[j].clone() * out[k - j].clone();
            }
            out.push(T::zero() - s / a0.clone());
        }
        Ok(Self { coeffs: out })
    }

    pub fn div_jet(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_jet(&other.recip()?))
    }

    /// `outer(inner(h))`; `inner` must have zero constant term.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Domain("composition argument has nonzero constant term".into()));
        }
        let n = outer.order().min(inner.order());
        let inner = inner.with_order(n);
        // Horner in the inner series.
        let mut acc = Self::constant(outer.coeff(n), n);
        for k in (0..n).rev() {
            acc = acc.mul_jet(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + outer.coeffs[k].clone();
        }
        Ok(acc)
    }
}

impl Jet<Complex64> {
    fn recurrence_with<F>(&self, b0: Complex64, mut step: F) -> Self
    where
        F: FnMut(usize, &[Complex64]) -> Complex64,
    {
        let n = self.order();
        let mut out = Vec::with_capacity(n + 1);
        out.push(b0);
        for k in 1..=n {
            let v = step(k, &out);
            out.push(v);
        }
        Self { coeffs: out }
    }

    pub fn exp(&self) -> Self {
        let a = &self.coeffs;
        self.recurrence_with(a[0].exp(), |k, b| {
            let mut s = Complex64::zero();
            for j in 1..=k {
                s += a[j] * b[k - j] * j as f64;
            }
            s / k as f64
        })
    }

    /// Natural log; the constant term must be nonzero (principal branch).
    pub fn ln(&self) -> Result<Self> {
        let a = &self.coeffs;
        if a[0].is_zero() {
            return Err(Error::Domain("log of a jet with zero constant term".into()));
        }
        let a0 = a[0];
        Ok(self.recurrence_with(a0.ln(), |k, b| {
            let mut s = Complex64::zero();
            for j in 1..k {
                s += b[j] * a[k - j] * j as f64;
            }
            (a[k] - s / k as f64) / a0
        }))
    }

    /// `ln(1 + self)`; the constant term must be zero.
    pub fn ln_1p(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("log(1+x) needs a jet with zero constant term".into()));
        }
        let mut shifted = self.clone();
        shifted.coeffs[0] = Complex64::new(1.0, 0.0);
        let mut out = shifted.ln()?;
        out.coeffs[0] = Complex64::zero();
        Ok(out)
    }

    /// Principal square root; the constant term must be nonzero.
    pub fn sqrt(&self) -> Result<Self> {
        let a = &self.coeffs;
        if a[0].is_zero() {
            return Err(Error::Domain("sqrt of a jet with zero constant term".into()));
        }
        let b0 = super::vec3::csqrt(a[0]);
        Ok(self.recurrence_with(b0, |k, b| {
            let mut s = Complex64::zero();
            for j in 1..k {
                s += b[j] * b[k - j];
            }
            (a[k] - s) / (b0 * 2.0)
        }))
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let a = &self.coeffs;
        let n = self.order();
        let mut s = vec![a[0].sin()];
        let mut c = vec![a[0].cos()];
        for k in 1..=n {
            let mut ss = Complex64::zero();
            let mut cc = Complex64::zero();
            for j in 1..=k {
                let w = a[j] * j as f64;
                ss += w * c[k - j];
                cc -= w * s[k - j];
            }
            s.push(ss / k as f64);
            c.push(cc / k as f64);
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    /// Principal arcsine; the constant term must be zero.
    pub fn asin(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("arcsin needs a jet with zero constant term".into()));
        }
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let one = Self::constant(Complex64::new(1.0, 0.0), n);
        let root = (one - self.mul_jet(self)).sqrt()?;
        let deriv = self.derivative().div_jet(&root.with_order(n - 1))?;
        Ok(deriv.integral(Complex64::zero()))
    }

    pub fn map_real<F: Fn(&num_rational::BigRational) -> f64>(
        src: &Jet<num_rational::BigRational>,
        f: F,
    ) -> Self {
        Self { coeffs: src.coeffs.iter().map(|c| Complex64::new(f(c), 0.0)).collect() }
    }
}

impl<T: JetScalar> Add for Jet<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.binary_order(&o);
        Self { coeffs: (0..=n).map(|k| self.coeffs[k].clone() + o.coeffs[k].clone()).collect() }
    }
}

impl<T: JetScalar> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let n = self.binary_order(&o);
        Self { coeffs: (0..=n).map(|k| self.coeffs[k].clone() - o.coeffs[k].clone()).collect() }
    }
}

impl<T: JetScalar> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_jet(&o)
    }
}

impl<T: JetScalar> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { coeffs: self.coeffs.into_iter().map(|c| T::zero() - c).collect() }
    }
}

/// Expression tree evaluated by [`jet_evaluate`].
#[derive(Debug, Clone, PartialEq)]
pub enum JetExpr {
    /// The expansion variable `h`.
    Var,
    Const(Complex64),
    Add(Box<JetExpr>, Box<JetExpr>),
    Sub(Box<JetExpr>, Box<JetExpr>),
    Mul(Box<JetExpr>, Box<JetExpr>),
    Div(Box<JetExpr>, Box<JetExpr>),
    Neg(Box<JetExpr>),
    Pow(Box<JetExpr>, u32),
    Exp(Box<JetExpr>),
    Log(Box<JetExpr>),
    /// `ln(1 + x)`, argument must vanish at `h = 0`.
    Log1p(Box<JetExpr>),
    Sqrt(Box<JetExpr>),
    Sin(Box<JetExpr>),
    Cos(Box<JetExpr>),
    /// Argument must vanish at `h = 0`.
    Arcsin(Box<JetExpr>),
    /// `outer` is expanded in its own variable and composed with `inner`,
    /// which must vanish at `h = 0`.
    Compose { outer: Box<JetExpr>, inner: Box<JetExpr> },
}

impl JetExpr {
    pub fn c(re: f64) -> Self {
        JetExpr::Const(Complex64::new(re, 0.0))
    }
    pub fn sin(self) -> Self {
        JetExpr::Sin(Box::new(self))
    }
    pub fn cos(self) -> Self {
        JetExpr::Cos(Box::new(self))
    }
    pub fn asin(self) -> Self {
        JetExpr::Arcsin(Box::new(self))
    }
    pub fn pow(self, n: u32) -> Self {
        JetExpr::Pow(Box::new(self), n)
    }
    pub fn times(self, o: JetExpr) -> Self {
        JetExpr::Mul(Box::new(self), Box::new(o))
    }
    pub fn plus(self, o: JetExpr) -> Self {
        JetExpr::Add(Box::new(self), Box::new(o))
    }
    pub fn compose(outer: JetExpr, inner: JetExpr) -> Self {
        JetExpr::Compose { outer: Box::new(outer), inner: Box::new(inner) }
    }
}

/// Expands `expr` as a power series in `h` through `order`.
pub fn jet_evaluate(expr: &JetExpr, order: usize) -> Result<Jet> {
    use JetExpr::*;
    Ok(match expr {
        Var => Jet::variable(order),
        Const(c) => Jet::constant(*c, order),
        Add(a, b) => jet_evaluate(a, order)? + jet_evaluate(b, order)?,
        Sub(a, b) => jet_evaluate(a, order)? - jet_evaluate(b, order)?,
        Mul(a, b) => jet_evaluate(a, order)? * jet_evaluate(b, order)?,
        Div(a, b) => jet_evaluate(a, order)?.div_jet(&jet_evaluate(b, order)?)?,
        Neg(a) => -jet_evaluate(a, order)?,
        Pow(a, n) => jet_evaluate(a, order)?.powi(*n),
        Exp(a) => jet_evaluate(a, order)?.exp(),
        Log(a) => jet_evaluate(a, order)?.ln()?,
        Log1p(a) => jet_evaluate(a, order)?.ln_1p()?,
        Sqrt(a) => jet_evaluate(a, order)?.sqrt()?,
        Sin(a) => jet_evaluate(a, order)?.sin(),
        Cos(a) => jet_evaluate(a, order)?.cos(),
        Arcsin(a) => jet_evaluate(a, order)?.asin()?,
        Compose { outer, inner } => {
            let inner = jet_evaluate(inner, order)?;
            let outer = jet_evaluate(outer, order)?;
            Jet::compose(&outer, &inner)?
        }
    })
}

/// Default jet order for extracting `d^(j+2l+2)/dh^(j+2l+2)`: two guard terms.
pub fn default_order(j: usize, l: usize) -> usize {
    j + 2 * l + 4
}
