use num_complex::Complex64;

use connint::basic_integrals::{tilde_i, tilde_i_series, tilde_j, tilde_j_oracle, tilde_j_oracle_spec, MultiIndex};
use connint::moment_engine::{factorization_check, moment_via_jets, moment_via_measure, HKernel, MomentSpec};
use connint::quadrature::QuadratureSpec;

fn idx(s: &str) -> MultiIndex {
    MultiIndex::parse(s).unwrap()
}

#[test]
fn factorization_on_grid() {
    let quad = QuadratureSpec::default();
    for (a, b) in [("", ""), ("3", "3"), ("1", "2")] {
        let j = idx(a).len();
        let spec = MomentSpec::new(0, 0, idx(a), idx(b), idx(a), idx(b), HKernel::linear()).unwrap();
        assert_eq!(spec.j(), j);
        for z in [0.3, 0.6, 0.9] {
            for zs in [0.3, 0.6, 0.9] {
                let f = factorization_check(z, zs, &spec, &quad).unwrap();
                assert!(f.deviation < 1e-6, "alpha={a} beta={b} z={z} z*={zs}: {f:?}");
            }
        }
    }
}

#[test]
fn linear_moments_agree_across_routes() {
    for (a, g) in [("", ""), ("3", "3"), ("1", "1"), ("1,2", "1,2"), ("3,3", "1,1")] {
        for (b, d) in [("", ""), ("2", "2")] {
            for l in 0..3 {
                for m in 0..3 {
                    let spec = MomentSpec::new(l, m, idx(a), idx(b), idx(g), idx(d), HKernel::linear()).unwrap();
                    let jets = moment_via_jets(&spec).unwrap();
                    let measure = moment_via_measure(l, m, &spec).unwrap();
                    let scale = measure.norm().max(1e-300);
                    assert!((jets - measure).norm() <= 1e-10 * scale, "{a}/{b}/{g}/{d} l={l} m={m}: {jets} vs {measure}");
                }
            }
        }
    }
}

#[test]
fn tilde_i_series_matches_quadrature() {
    let quad = QuadratureSpec::default();
    for (a, g) in [("3", "3"), ("1", "2"), ("1,1", "2,2"), ("1,2", "1,2")] {
        for z in [0.25, 0.7] {
            let q = tilde_i(z, &idx(a), &idx(g), &quad).unwrap();
            let s = tilde_i_series(z, &idx(a), &idx(g), 40).unwrap();
            assert!((q - s).norm() <= 1e-7 * s.norm() + 1e-14, "{a}/{g} z={z}: {q} vs {s}");
        }
    }
}

#[test]
fn tilde_j_oracle_respects_the_ladder() {
    // The brute-force integral itself satisfies d/dz J_j = J_(j-1) / (2i).
    let spec = tilde_j_oracle_spec();
    let (r, z, h) = (0.5, 1.3, 1e-3);
    for j in 1..=4 {
        let up = tilde_j_oracle(r, z + h, j, &spec).unwrap().value;
        let down = tilde_j_oracle(r, z - h, j, &spec).unwrap().value;
        let lower = tilde_j_oracle(r, z, j - 1, &spec).unwrap().value;
        let d = (up - down) / (2.0 * h);
        let want = lower / Complex64::new(0.0, 2.0);
        let scale = tilde_j(r, z, j - 1).norm();
        assert!((d - want).norm() <= 1e-4 * scale, "j={j}: {d} vs {want}");
    }
}

#[test]
fn scalar_over_suppression_falls_like_inverse_square() {
    use connint::basic_integrals::n_scalar;
    use connint::special_fn::{suppression_factor, CouplingConfig};
    let cfg = CouplingConfig::new(1.0).unwrap();
    for j in 0..=6 {
        let ratio = |t: f64| {
            let v = Complex64::new(t, 0.0);
            (n_scalar(v, j, &cfg).unwrap() / suppression_factor(v, &cfg)).norm()
        };
        // The pole at Q^2 = -(j+1)^2 delays the asymptotic regime for larger j.
        let t0 = if j <= 5 { 10.0 } else { 40.0 };
        let slope = (ratio(4.0 * t0).ln() - ratio(t0).ln()) / 4f64.ln();
        assert!((slope + 2.0).abs() <= 0.2, "j={j}: slope {slope}");
    }
}
