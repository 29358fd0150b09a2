//! Verification suites shared by the command-line tool and the test harness.
//! Each criterion appends its checks to a [`RunReport`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basic_integrals::{n_scalar, tensor_structure, tensor_structure_expr, tilde_j, tilde_j_oracle, tilde_j_oracle_spec, MultiIndex};
use crate::error::{Error, Result};
use crate::haar_so3::{bivector_split, haar_density_r2, lorentz_boost, lorentz_rotation, lorentz_selfdual_split, So3cMatrix, HAAR_CHART_MASS};
use crate::math::exact::{factorial, Rational};
use crate::math::jet::Jet;
use crate::math::vec3::ComplexVec3;
use crate::model_integral::{model_asymptotic, model_lhs, model_rhs, ModelParams};
use crate::moment_engine::{
    full_moments, moment_via_jets, moment_via_measure, physical_moments, residual_node_fit, HKernel, MomentSpec, SupportSet,
};
use crate::quadrature::{integrate_ball, QuadratureSpec};
use crate::report::RunReport;
use crate::simplicial::{action, build_prism_complex, holonomy, ConnectionAssignment, DiagonalRule, LeafComplex3, Tetrahedron};
use crate::special_fn::{binomial_sum, harmonic_coeffs, table_integral, CouplingConfig};

/// One acceptance criterion.
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub suite: &'static str,
    pub run: fn(&mut RunReport),
}

pub const CRITERIA: [Criterion; 11] = [
    Criterion { id: 1, name: "model integral identity", suite: "model", run: model_identity },
    Criterion { id: 2, name: "model asymptotic law", suite: "model", run: model_asymptotics },
    Criterion { id: 3, name: "binomial identities", suite: "identities", run: binomial_identities },
    Criterion { id: 4, name: "table integral", suite: "table", run: table_integrals },
    Criterion { id: 5, name: "tilde-J oracle", suite: "tilde-j", run: tilde_j_grid },
    Criterion { id: 6, name: "tensor tracelessness and symmetry", suite: "tensor", run: tensor_properties },
    Criterion { id: 7, name: "moment cross-path agreement", suite: "moments", run: moment_cross_path },
    Criterion { id: 8, name: "support-node residual fit", suite: "moments", run: support_node_fit },
    Criterion { id: 9, name: "suppression behaviour", suite: "suppression", run: suppression },
    Criterion { id: 10, name: "Haar chart mass", suite: "haar", run: haar_mass },
    Criterion { id: 11, name: "action sanity", suite: "action", run: action_sanity },
];

pub const SUITES: [&str; 10] =
    ["all", "identities", "model", "table", "tilde-j", "tensor", "moments", "suppression", "haar", "action"];

pub fn run_criterion(id: usize) -> Result<RunReport> {
    let c = CRITERIA
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::Domain(format!("no criterion {id}")))?;
    let mut r = RunReport::new(format!("verify criterion {id}"));
    (c.run)(&mut r);
    Ok(r)
}

pub fn run_suite(suite: &str) -> Result<RunReport> {
    if !SUITES.contains(&suite) {
        return Err(Error::Domain(format!("unknown suite `{suite}`; expected one of {}", SUITES.join(", "))));
    }
    let mut r = RunReport::new("verify");
    r.input("suite", suite);
    for c in CRITERIA.iter().filter(|c| suite == "all" || c.suite == suite) {
        (c.run)(&mut r);
    }
    if suite == "all" || suite == "identities" {
        harmonic_jets(&mut r);
    }
    Ok(r)
}

fn model_identity(r: &mut RunReport) {
    for a in [0.5, 1.0, 2.0, 4.0] {
        for lambda in [0.3, 0.6, 0.9] {
            let name = format!("model[A={a},lambda={lambda}]");
            let res = ModelParams::new(a, lambda).and_then(|p| Ok((model_lhs(&p)?, model_rhs(&p)?)));
            match res {
                Ok((lhs, rhs)) => {
                    r.check_close(&name, rhs, lhs.value, 1e-4, 0.0, "hypergeometric closed form");
                }
                Err(e) => r.fail(&name, &e),
            }
        }
    }
}

fn model_asymptotics(r: &mut RunReport) {
    let dev = |a: f64| -> Result<f64> {
        let p = ModelParams::new(a, 0.5)?;
        Ok((model_rhs(&p)?.re / model_asymptotic(&p).re - 1.0).abs())
    };
    match (dev(15.0), dev(30.0)) {
        (Ok(d15), Ok(d30)) => {
            r.check_below("asymptotic[A=30]", d30, 0.1, "large-A expansion");
            r.check_true("asymptotic improves 15 -> 30", d30 < d15, &format!("{d15:.3e} -> {d30:.3e}"), "large-A expansion");
        }
        (Err(e), _) | (_, Err(e)) => r.fail("asymptotic", &e),
    }
}

fn binomial_identities(r: &mut RunReport) {
    let mut zero_ok = true;
    let mut top_ok = true;
    let mut detail = String::new();
    for j in 0..=20usize {
        let mut m = j as i64 - 1;
        while m >= 1 {
            if !binomial_sum(j, m as u32).is_zero() {
                zero_ok = false;
                detail = format!("j={j} m={m}");
            }
            m -= 2;
        }
        let top = Rational::from_integer(factorial(j as u64 + 1) * num_bigint::BigInt::from(2).pow(j as u32));
        if binomial_sum(j, j as u32 + 1) != top {
            top_ok = false;
            detail = format!("top j={j}");
        }
    }
    r.check_true("binomial vanishing family j<=20", zero_ok, &detail, "exact rational");
    r.check_true("binomial top sum 2^j (j+1)! j<=20", top_ok, &detail, "exact rational");
}

/// Cosine coefficients against the rational jet of `(d/dh)^(j+1) sin^(j+1) h` through order 10.
fn harmonic_jets(r: &mut RunReport) {
    let mut ok = true;
    let mut detail = String::new();
    for j in 0..=8usize {
        let order = j + 1 + 10;
        let mut sin = vec![BigRational::zero(); order + 1];
        for (n, c) in sin.iter_mut().enumerate() {
            if n % 2 == 1 {
                let s = if (n / 2) % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                *c = s / Rational::from_integer(factorial(n as u64));
            }
        }
        let d = Jet::new(sin, order).powi(j as u32 + 1);
        let coeffs = harmonic_coeffs(j);
        for q in 0..=5usize {
            let p = j + 1 + 2 * q;
            let from_jet = d.coeff(p) * Rational::from_integer(factorial(p as u64)) / Rational::from_integer(factorial(2 * q as u64));
            let mut from_cos = Rational::zero();
            for (f, c) in &coeffs {
                let sign = if q % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                from_cos += c * sign * Rational::from_integer(num_bigint::BigInt::from(*f).pow(2 * q as u32))
                    / Rational::from_integer(factorial(2 * q as u64));
            }
            if from_jet != from_cos {
                ok = false;
                detail = format!("j={j} q={q}");
            }
        }
    }
    r.check_true("harmonic coefficients vs rational jets j<=8", ok, &detail, "exact rational jet");
}

fn table_integrals(r: &mut RunReport) {
    let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-14);
    for n in 1..=4 {
        for h in [-0.4, 0.4, 0.7] {
            let name = format!("table[n={n},h={h}]");
            match table_integral(h, n, &spec) {
                Ok((lhs, rhs)) => {
                    r.check_close(&name, rhs, lhs, 1e-8, 1.0, "table closed form");
                }
                Err(e) => r.fail(&name, &e),
            }
        }
    }
}

fn tilde_j_grid(r: &mut RunReport) {
    let spec = tilde_j_oracle_spec();
    for j in 0..=2usize {
        for rr in [0.3, 0.5, 0.7] {
            for z in [0.1, 1.0, 1.4] {
                let name = format!("tilde-J[j={j},r={rr},z={z}]");
                let closed = tilde_j(rr, z, j);
                // Zero below the light cone: compare on the scale of the integrand.
                let scale = 4.0 * PI * PI / rr * (z / 2.0).powi(j as i32) / crate::special_fn::factorial_f64(j);
                match tilde_j_oracle(rr, z, j, &spec) {
                    Ok(o) => {
                        r.check_close(&name, closed, o.value, 1e-3, scale, "damped radial quadrature");
                    }
                    Err(e) => r.fail(&name, &e),
                }
            }
        }
    }
}

fn random_complex_vec(rng: &mut ChaCha8Rng) -> ComplexVec3 {
    let mut c = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    ComplexVec3::new(c(), c(), c())
}

fn tensor_properties(r: &mut RunReport) {
    let mut exact_trace = true;
    let mut exact_sym = true;
    for j in 1..=4usize {
        for idx in MultiIndex::all(j) {
            let e = tensor_structure_expr(&idx);
            let s = idx.as_slice();
            for p in 0..j {
                for q in p + 1..j {
                    let mut sw = s.to_vec();
                    sw.swap(p, q);
                    let other = tensor_structure_expr(&MultiIndex::new(sw).expect("valid indices"));
                    exact_sym &= e.sub(&other).is_identically_zero();
                    if s[p] == 0 && s[q] == 0 {
                        let tr = (0..3).fold(crate::math::radial::RadialExpr::zero(), |acc, c| {
                            let mut t = s.to_vec();
                            t[p] = c;
                            t[q] = c;
                            acc.add(&tensor_structure_expr(&MultiIndex::new(t).expect("valid indices")))
                        });
                        exact_trace &= tr.is_identically_zero();
                    }
                }
            }
        }
    }
    r.check_true("tensor trace vanishes symbolically j<=4", exact_trace, "", "exact symbolic");
    r.check_true("tensor symmetric symbolically j<=4", exact_sym, "", "exact symbolic");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let v = random_complex_vec(&mut rng);
        for j in 2..=4usize {
            for rest in MultiIndex::all(j - 2) {
                let mut tr = Complex64::zero();
                let mut mag: f64 = 0.0;
                for c in 0..3 {
                    let mut t = vec![c, c];
                    t.extend_from_slice(rest.as_slice());
                    match tensor_structure(&v, &MultiIndex::new(t).expect("valid indices")) {
                        Ok(x) => {
                            tr += x;
                            mag = mag.max(x.norm());
                        }
                        Err(e) => {
                            r.fail("tensor at random v", &e);
                            return;
                        }
                    }
                }
                worst = worst.max(tr.norm() / mag.max(1e-300));
            }
        }
    }
    r.check_below("tensor trace at 20 random complex v", worst, 1e-12, "floating evaluation");
}

fn moment_cross_path(r: &mut RunReport) {
    let mut specs: Vec<(String, MomentSpec)> = Vec::new();
    for n in 0..=2 {
        for p in 0..=2 {
            specs.push((format!("moment[n={n},p={p}]"), MomentSpec::scalar(n, p, HKernel::linear())));
        }
    }
    let idx = |v: &[usize]| MultiIndex::new(v.to_vec()).expect("valid indices");
    if let Ok(s) = MomentSpec::new(1, 1, idx(&[0, 2]), idx(&[1]), idx(&[0, 2]), idx(&[1]), HKernel::linear()) {
        specs.push(("moment[n=1,p=1,tensor]".into(), s));
    }
    for (name, s) in specs {
        match (moment_via_measure(s.l, s.m, &s), moment_via_jets(&s)) {
            (Ok(a), Ok(b)) => {
                r.check_close(&name, a, b, 1e-10, 0.0, "exact measure Taylor coefficients");
            }
            (Err(e), _) | (_, Err(e)) => r.fail(&name, &e),
        }
    }
}

fn support_node_fit(r: &mut RunReport) {
    let quad = QuadratureSpec::default().with_tolerances(1e-11, 1e-14);
    for g in [1.0, 3.0] {
        let name = format!("node fit[j=0,gamma={g}]");
        let run = || -> Result<_> {
            let kernel = HKernel::holst(g)?;
            let cfg = CouplingConfig::new(g)?;
            let nodes = SupportSet::for_fit(0, g)?;
            let full = full_moments(0, 6, &kernel)?;
            let phys = physical_moments(0, 6, &cfg, &quad)?;
            Ok((residual_node_fit(&full, &phys, &nodes, 2)?, nodes))
        };
        match run() {
            Ok((fit, nodes)) => {
                r.check_below(&name, fit.residual, 1e-5, "jet moments minus quadrature moments");
                let off_axis = nodes.nodes.iter().all(|n| n.im != 0.0) && fit.weights.iter().all(|w| w.node.im != 0.0);
                r.check_true(&format!("{name} nodes off the real axis"), off_axis, "", "support set");
                if let Some(w) = fit.warning {
                    r.failures.push(format!("{name}: {w}"));
                }
            }
            Err(e) => r.fail(&name, &e),
        }
    }
}

fn suppression(r: &mut RunReport) {
    let cfg = match CouplingConfig::new(1.0) {
        Ok(c) => c,
        Err(e) => return r.fail("suppression", &e),
    };
    let mag = |v: f64, j: usize| n_scalar(Complex64::new(v, 0.0), j, &cfg).map(|z| z.norm());
    for j in 0..=3usize {
        let grid: Result<Vec<f64>> = (0..=140).map(|k| mag(5.0 + 0.25 * k as f64, j)).collect();
        match grid {
            Ok(g) => {
                let mono = g.windows(2).all(|w| w[1] < w[0]);
                r.check_true(&format!("monotone decay on [5,40] j={j}"), mono, "", "closed form");
                let slope = (g[140].ln() - g[100].ln()) / 10.0;
                let rate = -PI / 2.0 * cfg.coupling().re;
                r.check_close(&format!("log-slope on [30,40] j={j}"), Complex64::new(rate, 0.0), Complex64::new(slope, 0.0), 0.05, 0.0, "exponential rate of Q/sinh(pi Q)");
            }
            Err(e) => r.fail(&format!("suppression j={j}"), &e),
        }
    }
    let want = Complex64::new(0.0, -0.5 / PI);
    for v in [0.0, 1e-9] {
        match n_scalar(Complex64::new(v, 0.0), 0, &cfg) {
            Ok(x) => {
                r.check_close(&format!("small-v limit j=0 v={v}"), want, x, 1e-12, 0.0, "Q/sinh(pi Q) -> 1/pi");
            }
            Err(e) => r.fail("small-v limit", &e),
        }
    }
}

fn haar_mass(r: &mut RunReport) {
    let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-14);
    let f = |p: [f64; 3]| Complex64::new(haar_density_r2(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).unwrap_or(0.0), 0.0);
    match integrate_ball(&f, &spec) {
        Ok(m) => {
            r.check_close("Haar chart mass", Complex64::new(HAAR_CHART_MASS, 0.0), m.value, 1e-8, 1.0, "(pi-2)/(4 pi)");
        }
        Err(e) => r.fail("Haar chart mass", &e),
    }
}

fn random_lorentz(rng: &mut ChaCha8Rng) -> nalgebra::Matrix4<f64> {
    let mut unit = || {
        let v = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0f64)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1e-3);
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let (a, b) = (unit(), unit());
    lorentz_boost(a, rng.random_range(-1.0..1.0)) * lorentz_rotation(b, rng.random_range(-PI..PI))
}

fn action_sanity(r: &mut RunReport) {
    let cfg = CouplingConfig::new(1.0).expect("gamma = 1 is valid");
    let cx = match build_prism_complex(&LeafComplex3::single_tetrahedron(), 2, DiagonalRule::Staircase) {
        Ok(c) => c,
        Err(e) => return r.fail("prism complex", &e),
    };
    let tets: Vec<Tetrahedron> = cx.tetrahedra().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let random_areas = |rng: &mut ChaCha8Rng| {
        cx.triangles()
            .map(|t| {
                let mut v = || std::array::from_fn(|_| rng.random_range(-1.0..1.0));
                (*t, bivector_split(v(), v()))
            })
            .collect::<BTreeMap<_, _>>()
    };
    let areas = random_areas(&mut rng);
    match action(&cx, &areas, &BTreeMap::new(), &cfg) {
        Ok(s) => {
            r.check_close("action on flat connection", Complex64::zero(), s, 1e-14, 1.0, "arcsin(0) = 0");
        }
        Err(e) => r.fail("flat action", &e),
    }
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let areas = random_areas(&mut rng);
        let mut assign = ConnectionAssignment::new();
        for t in tets.iter().filter(|t| !cx.is_gauge(t)) {
            let res = lorentz_selfdual_split(&random_lorentz(&mut rng)).and_then(|(plus, _)| assign.set(&cx, *t, plus));
            if let Err(e) = res {
                return r.fail("random connection", &e);
            }
        }
        let mut curv: BTreeMap<_, So3cMatrix> = BTreeMap::new();
        for tri in cx.triangles() {
            let chain: Vec<Tetrahedron> = tets.iter().filter(|t| tri.iter().all(|v| t.contains(v))).take(2).copied().collect();
            match holonomy(&assign, &chain) {
                Ok(h) => {
                    curv.insert(*tri, h);
                }
                Err(e) => return r.fail("holonomy", &e),
            }
        }
        match action(&cx, &areas, &curv, &cfg) {
            Ok(s) => worst = worst.max(s.im.abs()),
            Err(e) => return r.fail("random action", &e),
        }
    }
    r.check_below("max |Im S| over 50 physical configurations", worst, 1e-10, "conjugate-pair reality");
}

/// Criterion ids with their names, for listings.
pub fn criteria() -> Vec<(usize, &'static str, &'static str)> {
    CRITERIA.iter().map(|c| (c.id, c.name, c.suite)).collect()
}
