//! Symbolic expressions `sum coeff * x^a y^b z^c r^q` with `r^2 = x^2+y^2+z^2`.
//!
//! Used wherever derivatives of functions of `r` must be exact: the tensor
//! structure `v d..d (1/v)`, the tilde-I kernel and the measure moments.
//! Canonical form eliminates `z^2` in favour of `r^2 - x^2 - y^2`, so each
//! expression has a unique representation and zero tests are exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::exact::{double_factorial, to_f64, Rational};
use super::vec3::ComplexVec3;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RadialMonomial {
    pub pow: [u32; 3],
    pub q: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RadialExpr {
    terms: BTreeMap<RadialMonomial, Rational>,
}

impl RadialExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0, 0, 0], 0, c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn monomial(pow: [u32; 3], q: i32, coeff: Rational) -> Self {
        let mut e = Self::zero();
        e.push(RadialMonomial { pow, q }, coeff);
        e
    }

    /// `r^q`.
    pub fn r_pow(q: i32) -> Self {
        Self::monomial([0, 0, 0], q, Rational::one())
    }

    /// The coordinate `x_axis`.
    pub fn coordinate(axis: usize) -> Self {
        let mut pow = [0; 3];
        pow[axis] = 1;
        Self::monomial(pow, 0, Rational::one())
    }

    /// `r_{i1} r_{i2} ...` for an index list over `{0,1,2}`.
    pub fn coordinate_product(indices: &[usize]) -> Self {
        let mut pow = [0; 3];
        for &i in indices {
            pow[i] += 1;
        }
        Self::monomial(pow, 0, Rational::one())
    }

    fn push(&mut self, m: RadialMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RadialMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.push(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.push(*m, c * s);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = RadialMonomial {
                    pow: [ma.pow[0] + mb.pow[0], ma.pow[1] + mb.pow[1], ma.pow[2] + mb.pow[2]],
                    q: ma.q + mb.q,
                };
                out.push(m, ca * cb);
            }
        }
        out
    }

    /// `d/dx_axis`, using `d r^q = q x_axis r^(q-2)`.
    pub fn derivative(&self, axis: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let a = m.pow[axis];
            if a > 0 {
                let mut pow = m.pow;
                pow[axis] -= 1;
                out.push(RadialMonomial { pow, q: m.q }, c * Rational::from_integer(BigInt::from(a)));
            }
            if m.q != 0 {
                let mut pow = m.pow;
                pow[axis] += 1;
                out.push(RadialMonomial { pow, q: m.q - 2 }, c * Rational::from_integer(BigInt::from(m.q)));
            }
        }
        out
    }

    /// Applies `d_{i1} d_{i2} ...`.
    pub fn derivatives(&self, indices: &[usize]) -> Self {
        indices.iter().fold(self.clone(), |e, &a| e.derivative(a))
    }

    pub fn laplacian(&self) -> Self {
        (0..3).fold(Self::zero(), |acc, a| acc.add(&self.derivative(a).derivative(a)))
    }

    /// Unique representative with every z-exponent at most one.
    pub fn canonical(&self) -> Self {
        let mut out = Self::zero();
        let mut stack: Vec<(RadialMonomial, Rational)> =
            self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        while let Some((m, c)) = stack.pop() {
            if m.pow[2] < 2 {
                out.push(m, c);
                continue;
            }
            let base = [m.pow[0], m.pow[1], m.pow[2] - 2];
            stack.push((RadialMonomial { pow: base, q: m.q + 2 }, c.clone()));
            stack.push((RadialMonomial { pow: [base[0] + 2, base[1], base[2]], q: m.q }, -c.clone()));
            stack.push((RadialMonomial { pow: [base[0], base[1] + 2, base[2]], q: m.q }, -c));
        }
        out
    }

    /// Exact test for the zero function.
    pub fn is_identically_zero(&self) -> bool {
        self.canonical().is_empty()
    }

    /// Evaluates at a complex vector with `r = sqrt(v.v)` (principal branch).
    pub fn eval(&self, v: &ComplexVec3) -> Result<Complex64> {
        let r = v.norm_v();
        let mut acc = Complex64::zero();
        for (m, c) in &self.terms {
            if m.q < 0 && r == Complex64::zero() {
                return Err(Error::Singularity("negative power of r at v.v = 0".into()));
            }
            let mono = v.x.powi(m.pow[0] as i32) * v.y.powi(m.pow[1] as i32) * v.z.powi(m.pow[2] as i32);
            acc += mono * r.powi(m.q) * to_f64(c);
        }
        Ok(acc)
    }

    /// Value at the origin for expressions that are polynomial there.
    pub fn value_at_origin(&self) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let deg = m.pow.iter().sum::<u32>() as i32 + m.q;
            if m.q < 0 && deg <= 0 {
                return Err(Error::Singularity("expression not regular at the origin".into()));
            }
            if deg == 0 {
                acc += c;
            }
        }
        Ok(acc)
    }

    /// Average over the unit sphere (`r = 1`).
    pub fn sphere_average(&self) -> Rational {
        self.terms.iter().map(|(m, c)| c * sphere_monomial_average(m.pow)).sum()
    }

    /// Collects the expression restricted to `r = 1` by monomial in `n`.
    pub fn on_unit_sphere(&self) -> BTreeMap<[u32; 3], Rational> {
        let mut out: BTreeMap<[u32; 3], Rational> = BTreeMap::new();
        for (m, c) in &self.canonical().terms {
            *out.entry(m.pow).or_insert_with(Rational::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

/// `<n_x^a n_y^b n_z^c>` over the unit sphere.
pub fn sphere_monomial_average(pow: [u32; 3]) -> Rational {
    if pow.iter().any(|p| p % 2 == 1) {
        return Rational::zero();
    }
    let num: BigInt = pow.iter().map(|&p| double_factorial(p as i64 - 1)).product();
    let total: u32 = pow.iter().sum();
    Rational::new(num, double_factorial(total as i64 + 1))
}
