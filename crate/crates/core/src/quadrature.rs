//! Adaptive Gauss-Kronrod integration, a spherical product rule on the unit
//! ball, and damped oscillatory integrals extrapolated to zero damping.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Tolerances and regularization schedule shared by every integrator.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Strictly decreasing damping parameters `eps_k > 0`.
    pub damping_schedule: Vec<f64>,
    /// Degree of the extrapolating polynomial in `eps`.
    pub extrapolation_order: usize,
    /// Damped integrals are truncated where `eps * x` reaches this value.
    pub damping_cutoff: f64,
    /// Width of the fixed panels used for damped integrals.
    pub panel_width: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            damping_schedule: vec![0.2, 0.1, 0.05, 0.025, 0.0125],
            extrapolation_order: 3,
            damping_cutoff: 40.0,
            panel_width: 1.0,
        }
    }
}

impl QuadratureSpec {
    /// Geometric schedule `eps_0 * 2^-k`, `k < count`, with full-order extrapolation.
    pub fn with_geometric_schedule(mut self, eps0: f64, count: usize) -> Self {
        self.damping_schedule = (0..count).map(|k| eps0 * 0.5f64.powi(k as i32)).collect();
        self.extrapolation_order = count.saturating_sub(1);
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be positive".into()));
        }
        if self.damping_schedule.is_empty() || self.damping_schedule.iter().any(|&e| e.is_nan() || e <= 0.0) {
            return Err(Error::Domain("damping schedule must be non-empty and positive".into()));
        }
        if self.damping_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Domain("damping schedule must be strictly decreasing".into()));
        }
        if !(self.damping_cutoff > 0.0 && self.panel_width > 0.0) {
            return Err(Error::Domain("damping cutoff and panel width must be positive".into()));
        }
        Ok(())
    }

    fn tolerance(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl IntegralResult {
    pub fn zero() -> Self {
        Self { value: Complex64::new(0.0, 0.0), error_estimate: 0.0, evaluations: 0 }
    }

    fn accumulate(&mut self, o: &IntegralResult) {
        self.value += o.value;
        self.error_estimate += o.error_estimate;
        self.evaluations += o.evaluations;
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];

/// Gauss weights paired with `XGK[1], XGK[3], .., XGK[9]`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error).then_with(|| o.a.total_cmp(&self.a))
    }
}

/// Keeps rounded nodes off the panel endpoints, where integrable
/// singularities are allowed to sit.
fn interior(x: f64, a: f64, b: f64) -> f64 {
    if x <= a {
        a.next_up().min(b)
    } else if x >= b {
        b.next_down().max(a)
    } else {
        x
    }
}

/// One 21-point Kronrod application with the QUADPACK error heuristic.
fn gk21<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[10];
    let mut resg = Complex64::new(0.0, 0.0);
    let mut resabs = fc.norm() * WGK[10];
    let mut fv = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    for (i, slot) in fv.iter_mut().enumerate() {
        let dx = hl * XGK[i];
        let (f1, f2) = (f(interior(c - dx, a, b)), f(interior(c + dx, a, b)));
        resk += (f1 + f2) * WGK[i];
        resabs += (f1.norm() + f2.norm()) * WGK[i];
        if i % 2 == 1 {
            resg += (f1 + f2) * WG[i / 2];
        }
        *slot = (f1, f2);
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[10] * (fc - mean).norm();
    for (i, (f1, f2)) in fv.iter().enumerate() {
        resasc += WGK[i] * ((f1 - mean).norm() + (f2 - mean).norm());
    }
    let habs = hl.abs();
    resabs *= habs;
    resasc *= habs;
    let mut err = ((resk - resg) * hl).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    if !resk.re.is_finite() || !resk.im.is_finite() {
        err = f64::INFINITY;
    }
    Panel { a, b, value: resk * hl, error: err }
}

/// Adaptive integration of `f` over `[a, b]`.
pub fn integrate_1d<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    integrate_1d_with_breakpoints(f, a, b, &[], spec)
}

/// Adaptive integration that never lets a panel straddle a declared breakpoint.
pub fn integrate_1d_with_breakpoints<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Domain(format!("invalid integration range [{a}, {b}]")));
    }
    if a == b {
        return Ok(IntegralResult::zero());
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in edges.windows(2) {
        heap.push(gk21(f, w[0], w[1]));
        evaluations += 21;
    }
    let total = |heap: &BinaryHeap<Panel>| -> (Complex64, f64) {
        let mut panels: Vec<&Panel> = heap.iter().collect();
        panels.sort_by(|p, q| p.a.total_cmp(&q.a));
        panels.iter().fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| (v + p.value, e + p.error))
    };
    loop {
        let (value, error) = total(&heap);
        if error <= spec.tolerance(value) {
            return Ok(IntegralResult { value, error_estimate: error, evaluations });
        }
        if heap.len() >= spec.max_subdivisions {
            return Err(Error::Convergence {
                reason: format!("max_subdivisions = {} exceeded", spec.max_subdivisions),
                best: value,
                error_estimate: error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("non-empty panel heap");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::Convergence {
                reason: "panel width reached machine resolution".into(),
                best: value,
                error_estimate: error,
                evaluations,
            });
        }
        heap.push(gk21(f, worst.a, mid));
        heap.push(gk21(f, mid, worst.b));
        evaluations += 42;
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Angular part of the ball product rule.
#[derive(Debug, Clone, PartialEq)]
pub struct BallRule {
    /// Gauss-Legendre points in `cos(theta)`.
    pub n_theta: usize,
    /// Trapezoid points in `phi`.
    pub n_phi: usize,
}

impl Default for BallRule {
    fn default() -> Self {
        Self { n_theta: 16, n_phi: 32 }
    }
}

impl BallRule {
    /// Unit directions with weights summing to `4 pi`.
    pub fn directions(&self) -> Vec<([f64; 3], f64)> {
        let (ct, wt) = gauss_legendre(self.n_theta);
        let dphi = 2.0 * std::f64::consts::PI / self.n_phi as f64;
        let mut out = Vec::with_capacity(self.n_theta * self.n_phi);
        for (c, w) in ct.iter().zip(&wt) {
            let s = (1.0 - c * c).max(0.0).sqrt();
            for k in 0..self.n_phi {
                let phi = (k as f64 + 0.5) * dphi;
                out.push(([s * phi.cos(), s * phi.sin(), *c], w * dphi));
            }
        }
        out
    }
}

/// `int_{|r| <= 1} f(r) d^3 r` with the default angular rule.
pub fn integrate_ball<F: Fn([f64; 3]) -> Complex64 + Sync>(f: &F, spec: &QuadratureSpec) -> Result<IntegralResult> {
    integrate_ball_with(f, &[], &BallRule::default(), spec)
}

/// Ball integral with declared breakpoint radii. Radial nodes come from the
/// substitution `r = sin t`, which clusters them at `r = 1` and absorbs an
/// inverse square-root singularity there.
pub fn integrate_ball_with<F: Fn([f64; 3]) -> Complex64 + Sync>(
    f: &F,
    radii: &[f64],
    rule: &BallRule,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    let dirs = rule.directions();
    let shell = |t: f64| -> Complex64 {
        let (r, ct) = (t.sin(), t.cos());
        let s: Complex64 = dirs.iter().map(|(n, w)| f([r * n[0], r * n[1], r * n[2]]) * *w).sum();
        s * (r * r * ct)
    };
    let cuts: Vec<f64> = radii.iter().filter(|&&z| z > 0.0 && z < 1.0).map(|z| z.asin()).collect();
    let mut res = integrate_1d_with_breakpoints(&shell, 0.0, std::f64::consts::FRAC_PI_2, &cuts, spec)?;
    res.evaluations *= dirs.len();
    Ok(res)
}

/// Integration domain of a damped oscillatory integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `(0, inf)`
    HalfLine,
    /// `(-inf, inf)`
    WholeLine,
}

/// Result of extrapolating a sequence `I(eps_k)` to `eps = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub value: Complex64,
    pub error_estimate: f64,
    /// `|T_k - T_(k-1)|` for successive extrapolants `T_k` using points `0..=k`.
    pub residuals: Vec<f64>,
}

/// Neville extrapolation to zero of the samples `(eps, value)`.
pub fn extrapolate_to_zero(samples: &[(f64, Complex64)], order: usize) -> Extrapolation {
    let n = samples.len();
    // table[i][k]: polynomial through points i-k..=i evaluated at 0.
    let mut table: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![samples[i].1];
        for k in 1..=i.min(order) {
            let (xi, xik) = (samples[i].0, samples[i - k].0);
            let v = (row[k - 1] * xik - table[i - 1][k - 1] * xi) / (xik - xi);
            row.push(v);
        }
        table.push(row);
    }
    let diag: Vec<Complex64> = table.iter().map(|row| *row.last().expect("row")).collect();
    let residuals: Vec<f64> = diag.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let last = &table[n - 1];
    let value = *last.last().expect("row");
    let error_estimate = residuals.last().copied().unwrap_or(0.0);
    Extrapolation { value, error_estimate, residuals }
}

fn damped_half_line<F: Fn(f64) -> Complex64 + Sync>(
    f: &F,
    eps: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    let x_max = spec.damping_cutoff / eps;
    let n_panels = (x_max / spec.panel_width).ceil().max(1.0) as usize;
    let g = |x: f64| f(x) * (-eps * x).exp();
    let parts: Vec<Result<IntegralResult>> = (0..n_panels)
        .into_par_iter()
        .map(|k| {
            let a = k as f64 * spec.panel_width;
            let b = ((k + 1) as f64 * spec.panel_width).min(x_max);
            integrate_1d(&g, a, b, spec)
        })
        .collect();
    let mut total = IntegralResult::zero();
    for p in parts {
        total.accumulate(&p?);
    }
    Ok(total)
}

/// `lim_{eps -> 0+} int f(x) exp(-eps |x|) dx` over the chosen domain.
///
/// Reports [`Error::Divergence`] when the successive extrapolants move apart
/// instead of settling, which is how a delta-like contribution shows up.
pub fn damped_oscillatory<F: Fn(f64) -> Complex64 + Sync>(
    f: &F,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    spec.validate()?;
    let mut samples = Vec::with_capacity(spec.damping_schedule.len());
    let mut quad_err: f64 = 0.0;
    let mut evaluations = 0;
    for &eps in &spec.damping_schedule {
        let mut r = damped_half_line(f, eps, spec)?;
        if domain == Domain::WholeLine {
            let reflected = |x: f64| f(-x);
            r.accumulate(&damped_half_line(&reflected, eps, spec)?);
        }
        quad_err = quad_err.max(r.error_estimate);
        evaluations += r.evaluations;
        samples.push((eps, r.value));
    }
    let ex = extrapolate_to_zero(&samples, spec.extrapolation_order);
    if let (Some(first), Some(last)) = (ex.residuals.first(), ex.residuals.last()) {
        if ex.residuals.len() >= 2 && *last >= *first && *last > spec.tolerance(ex.value) {
            return Err(Error::Divergence { last: ex.value, residuals: ex.residuals });
        }
    }
    Ok(IntegralResult { value: ex.value, error_estimate: ex.error_estimate + quad_err, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn elementary_integrals() {
        let s = QuadratureSpec::default();
        let one = integrate_1d(&|_x| c(1.0), 0.0, 1.0, &s).unwrap();
        assert!((one.value - c(1.0)).norm() < 1e-14);
        let sing = integrate_1d(&|r: f64| c(1.0 / (1.0 - r * r).sqrt() - 1.0), 0.0, 1.0, &s).unwrap();
        // The last representable sliver below r = 1 carries ~sqrt(2 ulp) of mass.
        assert!((sing.value.re - (PI / 2.0 - 1.0)).abs() < 5e-8, "{sing:?}");
        let sine = integrate_1d(&|x: f64| c(x.sin()), 0.0, PI, &s).unwrap();
        assert!((sine.value.re - 2.0).abs() < 1e-13);
    }

    #[test]
    fn subdivision_cap_reports_best_estimate() {
        let s = QuadratureSpec { max_subdivisions: 3, ..QuadratureSpec::default() };
        let e = integrate_1d(&|x: f64| c(1.0 / x.sqrt()), 0.0, 1.0, &s).unwrap_err();
        assert!(matches!(e, Error::Convergence { .. }));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn ball_volume_and_mass() {
        let s = QuadratureSpec::default();
        let v = integrate_ball(&|_r| c(1.0), &s).unwrap();
        assert!((v.value.re - 4.0 * PI / 3.0).abs() < 1e-12);
        let dens = |r: [f64; 3]| {
            let r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
            if r2 < 1e-12 {
                return c(1.0 / (16.0 * PI * PI));
            }
            c((1.0 / (1.0 - r2).sqrt() - 1.0) / (8.0 * PI * PI * r2))
        };
        let m = integrate_ball(&dens, &s).unwrap();
        assert!((m.value.re - (PI - 2.0) / (4.0 * PI)).abs() < 1e-10);
    }

    #[test]
    fn damped_fourier_kernel() {
        let s = QuadratureSpec::default().with_geometric_schedule(0.2, 6);
        let r = damped_oscillatory(&|x: f64| Complex64::new(0.0, x).exp(), Domain::HalfLine, &s).unwrap();
        assert!((r.value - Complex64::new(0.0, 1.0)).norm() < 1e-6, "{:?}", r);
        let z = damped_oscillatory(&|x: f64| Complex64::new(0.0, 2.0 * x).exp(), Domain::WholeLine, &s).unwrap();
        assert!(z.value.norm() < 1e-6);
        let d = damped_oscillatory(&|_x: f64| c(1.0), Domain::WholeLine, &s).unwrap_err();
        assert!(matches!(d, Error::Divergence { .. }));
    }

    #[test]
    fn neville_recovers_polynomials_exactly() {
        let pts: Vec<(f64, Complex64)> =
            [0.2, 0.1, 0.05, 0.025].iter().map(|&e| (e, c(3.0 - 2.0 * e + 5.0 * e * e))).collect();
        let ex = extrapolate_to_zero(&pts, 3);
        assert!((ex.value - c(3.0)).norm() < 1e-12);
    }
}
