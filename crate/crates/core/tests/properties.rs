use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;

use connint::basic_integrals::{n_scalar, n_scalar_sum_form, tilde_j};
use connint::haar_so3::{
    apply, bivector_split, haar_density, lorentz_boost, lorentz_rotation, lorentz_selfdual_split, so3c_defect, so3c_exp,
    so3c_r, So3cMatrix,
};
use connint::math::vec3::ComplexVec3;
use connint::quadrature::{integrate_1d, QuadratureSpec};
use connint::simplicial::{
    action, build_prism_complex, curvature_factors, holonomy, reconstruct_omegas, ConnectionAssignment, DiagonalRule,
    LeafComplex3, Tetrahedron,
};
use connint::special_fn::{hyp2f1, suppression_factor, CouplingConfig};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cvec() -> impl Strategy<Value = ComplexVec3> {
    prop::array::uniform6(-1.0..1.0f64).prop_map(|a| ComplexVec3::new(c(a[0], a[1]), c(a[2], a[3]), c(a[4], a[5])))
}

fn unit(a: [f64; 3]) -> [f64; 3] {
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt().max(1e-3);
    [a[0] / n, a[1] / n, a[2] / n]
}

fn lorentz() -> impl Strategy<Value = connint::haar_so3::LorentzMatrix> {
    (prop::array::uniform3(-1.0..1.0f64), -2.0..2.0f64, prop::array::uniform3(-1.0..1.0f64), -1.5..1.5f64)
        .prop_map(|(ax, ang, dir, rap)| lorentz_rotation(unit(ax), ang) * lorentz_boost(unit(dir), rap))
}

fn mat_dev(a: &So3cMatrix, b: &So3cMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn vec_dev(a: &ComplexVec3, b: &ComplexVec3) -> f64 {
    (*a - *b).hermitian_norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn hyp2f1_contiguous_in_a(
        a in -2.0..2.0f64, ai in -1.0..1.0f64, b in -2.0..2.0f64, cc in 0.3..3.0f64, x in 0.0..0.9f64,
    ) {
        let a = c(a, ai);
        let (b, cc) = (c(b, 0.0), c(cc, 0.0));
        let lo = hyp2f1(a - 1.0, b, cc, x).unwrap();
        let mid = hyp2f1(a, b, cc, x).unwrap();
        let hi = hyp2f1(a + 1.0, b, cc, x).unwrap();
        let terms = [(cc - a) * lo, (a * 2.0 - cc + (b - a) * x) * mid, a * (x - 1.0) * hi];
        let scale = terms.iter().map(|t| t.norm()).fold(1.0, f64::max);
        let sum: Complex64 = terms.iter().sum();
        prop_assert!(sum.norm() <= 1e-9 * scale, "residual {} at scale {}", sum.norm(), scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadrature_is_linear(a in -3.0..3.0f64, b in -3.0..3.0f64, w in 0.5..6.0f64) {
        let spec = QuadratureSpec::default();
        let f = |x: f64| c((w * x).cos(), x * x);
        let g = |x: f64| c((-x).exp(), (w * x).sin());
        let h = |x: f64| f(x) * a + g(x) * b;
        let (rf, rg, rh) = (
            integrate_1d(&f, 0.0, 2.0, &spec).unwrap(),
            integrate_1d(&g, 0.0, 2.0, &spec).unwrap(),
            integrate_1d(&h, 0.0, 2.0, &spec).unwrap(),
        );
        let dev = (rh.value - (rf.value * a + rg.value * b)).norm();
        prop_assert!(dev <= 1e-10 * (1.0 + rh.value.norm()));
    }

    #[test]
    fn quadrature_error_estimate_bounds_true_error(w in 0.5..30.0f64, p in 0.0..4.0f64) {
        let spec = QuadratureSpec::default();
        let k = c(-p, w);
        let f = |x: f64| (k * x).exp();
        let r = integrate_1d(&f, 0.0, 1.0, &spec).unwrap();
        let exact = (k.exp() - 1.0) / k;
        prop_assert!((r.value - exact).norm() <= r.error_estimate + 1e-15);
        prop_assert!(r.error_estimate <= spec.abs_tol.max(spec.rel_tol * r.value.norm()));
    }

    #[test]
    fn selfdual_split_is_multiplicative(l1 in lorentz(), l2 in lorentz()) {
        let (p1, m1) = lorentz_selfdual_split(&l1).unwrap();
        let (p2, m2) = lorentz_selfdual_split(&l2).unwrap();
        let (p12, m12) = lorentz_selfdual_split(&(l1 * l2)).unwrap();
        let scale = 1.0 + (p1 * p2).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(mat_dev(&p12, &(p1 * p2)) <= 1e-10 * scale);
        prop_assert!(mat_dev(&m12, &(m1 * m2)) <= 1e-10 * scale);
        prop_assert!(so3c_defect(&p12) <= 1e-9 * scale * scale);
    }

    #[test]
    fn rotation_vector_is_equivariant(phi in cvec(), ax in prop::array::uniform3(-1.0..1.0f64), ang in -3.0..3.0f64) {
        let g = so3c_exp(&ComplexVec3::real(ax[0], ax[1], ax[2]).scale(c(ang, 0.0)));
        let m = so3c_exp(&phi);
        let lhs = so3c_r(&(g * m * g.transpose()));
        let rhs = apply(&g, &so3c_r(&m));
        prop_assert!(vec_dev(&lhs, &rhs) <= 1e-12 * (1.0 + rhs.hermitian_norm()));
    }

    #[test]
    fn haar_density_is_conjugation_invariant(r in prop::array::uniform3(-0.55..0.55f64), ax in prop::array::uniform3(-1.0..1.0f64), ang in -3.0..3.0f64) {
        let rv = ComplexVec3::real(r[0], r[1], r[2]);
        let g = so3c_exp(&ComplexVec3::real(ax[0], ax[1], ax[2]).scale(c(ang, 0.0)));
        let moved = apply(&g, &rv);
        let moved = ComplexVec3::real(moved.x.re, moved.y.re, moved.z.re);
        let (d0, d1) = (haar_density(&rv).unwrap(), haar_density(&moved).unwrap());
        prop_assert!((d0 - d1).abs() <= 1e-12 * d0);
    }

    #[test]
    fn suppression_conjugation_symmetry(re in -20.0..20.0f64, im in -5.0..5.0f64, gamma in 0.2..5.0f64) {
        let v = c(re, im);
        let (pos, neg) = (CouplingConfig::new(gamma).unwrap(), CouplingConfig::new(-gamma).unwrap());
        let a = suppression_factor(v.conj(), &neg);
        let b = suppression_factor(v, &pos).conj();
        prop_assert!((a - b).norm() <= 1e-13 * (1.0 + b.norm()));
        prop_assert!((suppression_factor(-v, &pos) - suppression_factor(v, &pos)).norm() <= 1e-13 * (1.0 + b.norm()));
    }

    #[test]
    fn scalar_partial_fractions_agree(re in -8.0..8.0f64, im in -3.0..3.0f64, gamma in 0.3..4.0f64, j in 0usize..8) {
        let cfg = CouplingConfig::new(gamma).unwrap();
        let v = c(re, im);
        if let (Ok(a), Ok(b)) = (n_scalar(v, j, &cfg), n_scalar_sum_form(v, j, &cfg)) {
            prop_assert!((a - b).norm() <= 1e-9 * (a.norm() + 1e-300), "{a} vs {b}");
        }
    }

    #[test]
    fn tilde_j_solves_its_ladder(r in 0.1..2.0f64, dz in 0.05..3.0f64, j in 1usize..=4) {
        // d/dz J_j = J_(j-1) / (2i) away from z = r.
        let z = r + dz;
        let h = 1e-5 * z;
        let d = (tilde_j(r, z + h, j) - tilde_j(r, z - h, j)) / (2.0 * h);
        let want = tilde_j(r, z, j - 1) / c(0.0, 2.0);
        prop_assert!((d - want).norm() <= 1e-6 * (1.0 + want.norm()));
        prop_assert_eq!(tilde_j(r, r * 0.99, j), Complex64::new(0.0, 0.0));
    }
}

fn prism() -> connint::simplicial::SimplicialComplex4 {
    build_prism_complex(&LeafComplex3::single_tetrahedron(), 2, DiagonalRule::Staircase).unwrap()
}

fn chain_through(cx: &connint::simplicial::SimplicialComplex4, tri: &[usize; 3]) -> Vec<Tetrahedron> {
    cx.tetrahedra().filter(|t| tri.iter().all(|v| t.contains(v))).copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn holonomy_roundtrip(phis in prop::collection::vec(cvec(), 17)) {
        let cx = prism();
        let mut assign = ConnectionAssignment::new();
        for (tet, phi) in cx.tetrahedra().zip(&phis) {
            if !cx.is_gauge(tet) {
                assign.set(&cx, *tet, so3c_exp(phi)).unwrap();
            }
        }
        for tri in cx.triangles() {
            let chain = chain_through(&cx, tri);
            let factors = curvature_factors(&assign, &chain).unwrap();
            let omegas = reconstruct_omegas(&assign.omega(&chain[0]), &factors);
            for (t, o) in chain.iter().zip(&omegas) {
                let want = assign.omega(t);
                let scale = 1.0 + want.iter().map(|z| z.norm()).fold(0.0, f64::max);
                prop_assert!(mat_dev(o, &want) <= 1e-10 * scale * scale);
            }
            let hol = holonomy(&assign, &chain).unwrap();
            let direct = assign.omega(&chain[0]).transpose() * assign.omega(chain.last().unwrap());
            prop_assert!(mat_dev(&hol, &direct) <= 1e-9 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn action_is_gauge_invariant(
        edges in prop::collection::vec(prop::array::uniform4(-1.0..1.0f64), 8),
        phis in prop::collection::vec(prop::array::uniform3(-0.6..0.6f64), 4),
        l in lorentz(),
        gamma in 0.3..4.0f64,
    ) {
        let cx = prism();
        let cfg = CouplingConfig::new(gamma).unwrap();
        let (gp, gm) = lorentz_selfdual_split(&l).unwrap();
        let tris: Vec<[usize; 3]> = cx.triangles().copied().take(4).collect();
        let mut areas = BTreeMap::new();
        let mut curv = BTreeMap::new();
        let mut moved_areas = BTreeMap::new();
        let mut moved_curv = BTreeMap::new();
        for (k, tri) in tris.iter().enumerate() {
            let area = bivector_split(edges[2 * k], edges[2 * k + 1]);
            if area.plus_v.dot(&area.plus_v).norm() < 1e-3 {
                continue;
            }
            let r = so3c_exp(&ComplexVec3::real(phis[k][0], phis[k][1], phis[k][2]));
            areas.insert(*tri, area);
            curv.insert(*tri, r);
            moved_areas.insert(*tri, area.rotate(&gp, &gm));
            moved_curv.insert(*tri, gp * r * gp.transpose());
        }
        let s0 = action(&cx, &areas, &curv, &cfg).unwrap();
        let s1 = action(&cx, &moved_areas, &moved_curv, &cfg).unwrap();
        let scale = 1.0 + areas.values().map(|a| a.plus_v.hermitian_norm()).sum::<f64>();
        prop_assert!((s0 - s1).norm() <= 1e-9 * scale, "{s0} vs {s1}");
    }
}
