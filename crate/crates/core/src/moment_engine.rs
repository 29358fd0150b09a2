//! Moments of the connection-integral distribution.
//!
//! Two independent routes produce the same moments: exact Taylor extraction
//! from the measure density (linear kernel), and jets of the generating
//! function `z'(h) tilde-I(z(h))`. The sinh-suppressed physical part misses
//! contributions supported on complex nodes; [`residual_node_fit`] measures
//! how well the difference lives on those nodes.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::basic_integrals::{
    angular_constant, n_scalar, subtracted_bracket, tilde_i, tilde_i_coefficients, tilde_i_integrand,
    tilde_i_prefactor, MultiIndex,
};
use crate::error::{Error, Result};
use crate::math::exact::{measure_series, to_f64, GaussRational, Rational};
use crate::math::jet::{default_order, Jet};
use crate::math::radial::RadialExpr;
use crate::quadrature::{gauss_legendre, integrate_1d_with_breakpoints, BallRule, QuadratureSpec};
use crate::special_fn::{factorial_f64, CouplingConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `z(h) = h`
    Linear,
    /// `z(h) = sin(h / (1 + i/gamma))`
    Holst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HKernel {
    pub kind: KernelKind,
    pub gamma: f64,
}

impl HKernel {
    pub fn linear() -> Self {
        Self { kind: KernelKind::Linear, gamma: f64::INFINITY }
    }

    pub fn holst(gamma: f64) -> Result<Self> {
        if gamma == 0.0 || !gamma.is_finite() {
            return Err(Error::Domain(format!("Holst kernel needs finite nonzero gamma, got {gamma}")));
        }
        Ok(Self { kind: KernelKind::Holst, gamma })
    }

    /// `1 + i/gamma`, conjugated for the antiselfdual sector.
    pub fn kappa(&self, antiselfdual: bool) -> Complex64 {
        let k = Complex64::new(1.0, 1.0 / self.gamma);
        if antiselfdual {
            k.conj()
        } else {
            k
        }
    }

    /// `(z(h), z'(h))` as jets in `h`.
    pub fn z_jets(&self, order: usize, antiselfdual: bool) -> (Jet, Jet) {
        match self.kind {
            KernelKind::Linear => (Jet::variable(order), Jet::constant(Complex64::new(1.0, 0.0), order)),
            KernelKind::Holst => {
                let k = self.kappa(antiselfdual);
                let arg = Jet::variable(order).scale(&k.inv());
                let (s, c) = arg.sin_cos();
                (s, c.scale(&k.inv()))
            }
        }
    }
}

/// Radial powers and tensor indices of one moment.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSpec {
    pub l: usize,
    pub m: usize,
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub gamma_idx: MultiIndex,
    pub delta_idx: MultiIndex,
    pub kernel: HKernel,
}

impl MomentSpec {
    pub fn new(
        l: usize,
        m: usize,
        alpha: MultiIndex,
        beta: MultiIndex,
        gamma_idx: MultiIndex,
        delta_idx: MultiIndex,
        kernel: HKernel,
    ) -> Result<Self> {
        if alpha.len() != gamma_idx.len() || beta.len() != delta_idx.len() {
            return Err(Error::Domain("moment multi-indices must pair with equal lengths".into()));
        }
        Ok(Self { l, m, alpha, beta, gamma_idx, delta_idx, kernel })
    }

    /// Moment with all multi-indices empty.
    pub fn scalar(l: usize, m: usize, kernel: HKernel) -> Self {
        let e = MultiIndex::empty();
        Self { l, m, alpha: e.clone(), beta: e.clone(), gamma_idx: e.clone(), delta_idx: e, kernel }
    }

    pub fn j(&self) -> usize {
        self.alpha.len()
    }

    pub fn k(&self) -> usize {
        self.beta.len()
    }
}

/// One sector of the measure route, exact:
/// `(2i)^(|alpha|+2n) d_alpha [lap]^n [r_gamma sum c_m r^(2m)]` at `r = 0`.
/// Lengths may differ; a parity mismatch gives zero.
pub fn measure_factor(n: usize, alpha: &MultiIndex, gamma_idx: &MultiIndex) -> Result<GaussRational> {
    let (ja, jg) = (alpha.len() + 2 * n, gamma_idx.len());
    if ja < jg || (ja - jg) % 2 == 1 {
        return Ok(GaussRational::zero());
    }
    let mm = (ja - jg) / 2;
    let c = measure_series(mm);
    let mut e = RadialExpr::coordinate_product(gamma_idx.as_slice())
        .mul(&RadialExpr::r_pow(2 * mm as i32))
        .scale(&c[mm])
        .derivatives(alpha.as_slice());
    for _ in 0..n {
        e = e.laplacian();
    }
    let value = e.value_at_origin()?;
    let two = Rational::from_integer(2.into());
    let mut pow2 = Rational::from_integer(1.into());
    for _ in 0..ja {
        pow2 *= two.clone();
    }
    Ok(GaussRational::i_pow(ja as i64).scale(&(value * pow2)))
}

/// Product of both sector factors, without the `8 pi^2`.
pub fn moment_via_measure_exact(n: usize, p: usize, spec: &MomentSpec) -> Result<GaussRational> {
    Ok(measure_factor(n, &spec.alpha, &spec.gamma_idx)? * measure_factor(p, &spec.beta, &spec.delta_idx)?)
}

pub fn moment_via_measure(n: usize, p: usize, spec: &MomentSpec) -> Result<Complex64> {
    Ok(moment_via_measure_exact(n, p, spec)?.to_complex() * (8.0 * PI * PI))
}

/// `(2i d/dh)^n [z'(h) g(z(h))]` at `h = 0`, with `g` given as a jet in `z`.
pub fn generating_moment(g: &Jet, kernel: &HKernel, n: usize, antiselfdual: bool) -> Result<Complex64> {
    let order = g.order();
    if order < n {
        return Err(Error::Order { have: order, need: n });
    }
    let (z, dz) = kernel.z_jets(order, antiselfdual);
    let f = Jet::compose(g, &z)?.mul_jet(&dz);
    Ok(Complex64::new(0.0, 2.0).powi(n as i32) * f.derivative_at_zero(n)?)
}

/// tilde-I as a jet in `z`, truncated at `order`.
pub fn tilde_i_jet(alpha: &MultiIndex, gamma_idx: &MultiIndex, order: usize) -> Result<Jet> {
    let j = alpha.len();
    let mut coeffs = vec![Complex64::zero(); order + 1];
    if order >= j + 2 {
        for (p, a) in tilde_i_coefficients(alpha, gamma_idx, (order - j - 2) / 2)? {
            coeffs[p] = Complex64::new(2.0 * PI * to_f64(&a), 0.0);
        }
    }
    Ok(Jet::new(coeffs, order))
}

/// One sector of the jet route: `(2i d/dh)^(j+2l+2) [z' tilde-I(z)]` at `h = 0`.
pub fn sector_moment(
    l: usize,
    alpha: &MultiIndex,
    gamma_idx: &MultiIndex,
    kernel: &HKernel,
    antiselfdual: bool,
    order: usize,
) -> Result<Complex64> {
    let n = alpha.len() + 2 * l + 2;
    if order < n {
        return Err(Error::Order { have: order, need: n });
    }
    generating_moment(&tilde_i_jet(alpha, gamma_idx, order)?, kernel, n, antiselfdual)
}

/// Jet route with the default order `j + 2l + 4` per sector.
pub fn moment_via_jets(spec: &MomentSpec) -> Result<Complex64> {
    let plus = default_order(spec.j(), spec.l);
    let minus = default_order(spec.k(), spec.m);
    moment_via_jets_with_order(spec, plus.max(minus))
}

/// Jet route at an explicit truncation order; too low an order is an error.
pub fn moment_via_jets_with_order(spec: &MomentSpec, order: usize) -> Result<Complex64> {
    let plus = sector_moment(spec.l, &spec.alpha, &spec.gamma_idx, &spec.kernel, false, order)?;
    let minus = sector_moment(spec.m, &spec.beta, &spec.delta_idx, &spec.kernel, true, order)?;
    Ok(plus * minus / 8.0)
}

/// Complex nodes `4 n~^2 (1 + i/gamma)^-2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSet {
    pub nodes: Vec<Complex64>,
    /// `n~` for each node.
    pub labels: Vec<usize>,
}

impl SupportSet {
    pub fn from_labels(labels: Vec<usize>, gamma: f64) -> Result<Self> {
        if gamma == 0.0 || !gamma.is_finite() {
            return Err(Error::Domain(format!("support nodes need finite nonzero gamma, got {gamma}")));
        }
        let k = Complex64::new(1.0, 1.0 / gamma);
        let nodes = labels.iter().map(|&n| 4.0 * (n * n) as f64 / (k * k)).collect();
        Ok(Self { nodes, labels })
    }

    /// All labels `j+1, j, .., 1`, the union of the supports at `n = j` and `n = j-1`.
    pub fn for_fit(j: usize, gamma: f64) -> Result<Self> {
        Self::from_labels((1..=j + 1).rev().collect(), gamma)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Nodes for `n~ = n+1, n-1, .., n mod 2 + 1`.
pub fn support_points(n: usize, gamma: f64) -> Result<SupportSet> {
    SupportSet::from_labels((0..=n / 2).map(|k| n + 1 - 2 * k).collect(), gamma)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeight {
    pub label: usize,
    pub node: Complex64,
    /// 0 for `node^l`, 1 for the confluent column `l node^(l-1)`.
    pub derivative: usize,
    pub weight: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeFit {
    pub weights: Vec<NodeWeight>,
    /// `|A w - d| / |d|`, zero when `d` vanishes.
    pub residual: f64,
    pub condition: f64,
    pub warning: Option<String>,
}

const CONDITION_WARN: f64 = 1e12;

/// Fits `full_l - physical_l = sum_(node, d) w l!/(l-d)! node^(l-d)` by least squares.
/// `multiplicity` 1 is the plain Vandermonde basis; 2 adds confluent columns.
pub fn residual_node_fit(
    full: &[Complex64],
    physical: &[Complex64],
    nodes: &SupportSet,
    multiplicity: usize,
) -> Result<NodeFit> {
    if full.len() != physical.len() {
        return Err(Error::Domain("moment lists differ in length".into()));
    }
    let rows = full.len();
    let mut cols = Vec::new();
    for (&node, &label) in nodes.nodes.iter().zip(&nodes.labels) {
        for d in 0..multiplicity.max(1) {
            cols.push((label, node, d));
        }
    }
    if rows <= cols.len() {
        return Err(Error::Domain(format!("{rows} moments cannot overdetermine {} node columns", cols.len())));
    }
    let b = DMatrix::from_iterator(rows, 1, full.iter().zip(physical).map(|(f, p)| f - p));
    let mut a = DMatrix::from_fn(rows, cols.len(), |l, c| {
        let (_, node, d) = cols[c];
        if l < d {
            return Complex64::zero();
        }
        let ff = (l + 1 - d..=l).fold(1.0, |acc, k| acc * k as f64);
        node.powi((l - d) as i32) * ff
    });
    let scales: Vec<f64> = (0..cols.len()).map(|c| a.column(c).norm()).collect();
    for (c, s) in scales.iter().enumerate() {
        a.column_mut(c).unscale_mut(*s);
    }
    let sv = a.clone().svd(false, false).singular_values;
    let condition = sv.max() / sv.min();
    let bnorm = b.norm();
    let mut weights: Vec<NodeWeight> = cols
        .iter()
        .map(|&(label, node, derivative)| NodeWeight { label, node, derivative, weight: Complex64::zero() })
        .collect();
    if bnorm == 0.0 {
        return Ok(NodeFit { weights, residual: 0.0, condition, warning: None });
    }
    let qr = a.clone().qr();
    let qhb = qr.q().adjoint() * &b;
    let w = qr
        .r()
        .solve_upper_triangular(&qhb)
        .ok_or_else(|| Error::Singularity("node basis is rank deficient".into()))?;
    let residual = (&a * &w - &b).norm() / bnorm;
    for (c, nw) in weights.iter_mut().enumerate() {
        nw.weight = w[c] / scales[c];
    }
    let warning = (condition > CONDITION_WARN).then(|| format!("node basis condition number {condition:.3e}"));
    Ok(NodeFit { weights, residual, condition, warning })
}

/// `(2i d/dh)^(j+2l+2) [z' z^j tilde-I_0(z)] / C_j` for `l = 0..count`.
pub fn full_moments(j: usize, count: usize, kernel: &HKernel) -> Result<Vec<Complex64>> {
    let cj = to_f64(&angular_constant(j));
    let order = j + 2 * count + 2;
    let e = MultiIndex::empty();
    let base = tilde_i_jet(&e, &e, order)?;
    let g = Jet::variable(order).powi(j as u32).mul_jet(&base);
    (0..count).map(|l| Ok(generating_moment(&g, kernel, j + 2 * l + 2, false)? / cj)).collect()
}

/// Cutoff beyond which `|N_j| v^(2l+2)` is below `e^-40` of its peak.
fn physical_cutoff(j: usize, l: usize, cfg: &CouplingConfig) -> f64 {
    let rate = PI * cfg.coupling().re.abs() / 2.0;
    let p = (2 * l + 3) as f64;
    let log_env = |v: f64| p * v.ln() - rate * v;
    let peak = log_env(p / rate);
    let mut v = (p / rate).max(1.0);
    while log_env(v) > peak - 40.0 - (j as f64) {
        v *= 1.1;
    }
    v
}

/// `4 pi int_0^vmax N_j(v) v^(2l+2) dv` for `l = 0..count`.
pub fn physical_moments(j: usize, count: usize, cfg: &CouplingConfig, spec: &QuadratureSpec) -> Result<Vec<Complex64>> {
    (0..count)
        .into_par_iter()
        .map(|l| {
            let vmax = physical_cutoff(j, l, cfg);
            let f = |v: f64| n_scalar(Complex64::new(v, 0.0), j, cfg).unwrap_or_default() * v.powi(2 * l as i32 + 2);
            let cuts: Vec<f64> = (1..).map(|k| 5.0 * k as f64).take_while(|&c| c < vmax).collect();
            // The oscillating integrand cancels heavily at large l; tolerances refer to int |f|.
            let abs_f = |v: f64| Complex64::new(f(v).norm(), 0.0);
            let loose = spec.clone().with_tolerances(1e-4, 0.0);
            let l1 = integrate_1d_with_breakpoints(&abs_f, 0.0, vmax, &cuts, &loose)?.value.re;
            let tight = spec.clone().with_tolerances(spec.rel_tol, spec.abs_tol.max(spec.rel_tol * l1));
            Ok(integrate_1d_with_breakpoints(&f, 0.0, vmax, &cuts, &tight)?.value * (4.0 * PI))
        })
        .collect()
}

/// Result of comparing the joint two-sector integral with its factorized form.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub deviation: f64,
}

fn fixed_ball_points(z: f64, f: &(impl Fn([f64; 3]) -> Complex64 + Sync)) -> Vec<(Complex64, f64)> {
    let (x, w) = gauss_legendre(24);
    let dirs = BallRule { n_theta: 8, n_phi: 16 }.directions();
    let tmax = z.min(1.0).asin();
    let mut out = Vec::with_capacity(x.len() * dirs.len());
    for (xi, wi) in x.iter().zip(&w) {
        let t = tmax * (xi + 1.0) / 2.0;
        let (r, jac) = (t.sin(), t.cos() * tmax / 2.0);
        let r = r.min(z * (1.0 - 1e-15));
        for (n, wd) in &dirs {
            let p = [r * n[0], r * n[1], r * n[2]];
            out.push((f(p), wi * wd * r * r * jac));
        }
    }
    out
}

/// Joint fixed-node rule over ball x ball against the product of two adaptive
/// single-sector quadratures.
pub fn factorization_check(z: f64, zstar: f64, spec: &MomentSpec, quad: &QuadratureSpec) -> Result<FactorizationCheck> {
    for w in [z, zstar] {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Domain(format!("factorization check needs 0 <= z <= 1, got {w}")));
        }
    }
    let rhs = tilde_i(z, &spec.alpha, &spec.gamma_idx, quad)? * tilde_i(zstar, &spec.beta, &spec.delta_idx, quad)?;
    if z == 0.0 || zstar == 0.0 {
        return Ok(FactorizationCheck { lhs: Complex64::zero(), rhs, deviation: 0.0 });
    }
    let fa = tilde_i_integrand(z, &spec.alpha, &spec.gamma_idx);
    let fb = tilde_i_integrand(zstar, &spec.beta, &spec.delta_idx);
    let pa = fixed_ball_points(z, &fa);
    let pb = fixed_ball_points(zstar, &fb);
    let joint: Complex64 = pa
        .par_iter()
        .map(|(va, wa)| pb.iter().map(|(vb, wb)| va * vb * (wa * wb)).sum::<Complex64>())
        .sum();
    let lhs = joint * (tilde_i_prefactor(spec.j()) * tilde_i_prefactor(spec.k()));
    let deviation = (lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
    Ok(FactorizationCheck { lhs, rhs, deviation })
}

/// The subtracted exponential bracket at fixed `z`, as a function of `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubtractedGenerating {
    pub z: f64,
    pub j: usize,
    pub kernel: HKernel,
}

impl SubtractedGenerating {
    pub fn eval(&self, v: f64) -> Complex64 {
        subtracted_bracket(v * self.z, self.j)
    }

    /// Lowest power of `z` present.
    pub fn leading_order(&self) -> usize {
        self.j + 2
    }

    /// Bracket at frequency `v` as a jet in `h` through `z(h)`.
    pub fn in_h(&self, v: f64, order: usize) -> Result<Jet> {
        let x = Complex64::new(0.0, -v / 2.0);
        let coeffs: Vec<Complex64> = (0..=order)
            .map(|k| {
                if k >= self.j + 2 && (k - self.j).is_multiple_of(2) {
                    x.powi(k as i32) / factorial_f64(k)
                } else {
                    Complex64::zero()
                }
            })
            .collect();
        let (z, _) = self.kernel.z_jets(order, false);
        Jet::compose(&Jet::new(coeffs, order), &z)
    }
}

pub fn subtracted_generating(z: f64, j: usize, kernel: HKernel) -> SubtractedGenerating {
    SubtractedGenerating { z, j, kernel }
}
