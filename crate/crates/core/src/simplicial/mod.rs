//! Prism-built four-dimensional complexes over a three-dimensional leaf,
//! holonomies of tetrahedron connections, and the area-curvature action.

mod io;

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::haar_so3::{so3c_r, AreaBivector, So3cMatrix};
use crate::math::vec3::{casin, csqrt};
use crate::special_fn::CouplingConfig;

pub use io::{parse_action_data, parse_complex_vector, parse_leaf, parse_simplex, ActionData};

pub type Edge = [usize; 2];
pub type Triangle = [usize; 3];
pub type Tetrahedron = [usize; 4];
pub type FourSimplex = [usize; 5];

/// A connected pure 3-complex in which each triangle bounds at most two tetrahedra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafComplex3 {
    vertices: Vec<String>,
    tetrahedra: Vec<[usize; 4]>,
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn sorted<const N: usize>(mut a: [usize; N]) -> [usize; N] {
    a.sort_unstable();
    a
}

fn faces<const N: usize, const M: usize>(s: &[usize; N]) -> Vec<[usize; M]> {
    // M = N - 1: drop one vertex at a time.
    (0..N)
        .map(|skip| {
            let mut out = [0; M];
            let mut k = 0;
            for (i, &v) in s.iter().enumerate() {
                if i != skip {
                    out[k] = v;
                    k += 1;
                }
            }
            out
        })
        .collect()
}

impl LeafComplex3 {
    pub fn new(vertices: Vec<String>, tetrahedra: Vec<[String; 4]>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if !valid_label(v) {
                return Err(Error::Construction(format!("invalid vertex label `{v}`")));
            }
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::Construction(format!("duplicate vertex `{v}`")));
            }
        }
        let mut tets = Vec::with_capacity(tetrahedra.len());
        for t in &tetrahedra {
            let mut ids = [0; 4];
            for (k, l) in t.iter().enumerate() {
                ids[k] = *index.get(l).ok_or_else(|| Error::Construction(format!("unknown vertex `{l}`")))?;
            }
            let ids = sorted(ids);
            if ids.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Construction(format!("tetrahedron {} repeats a vertex", t.join(" "))));
            }
            tets.push(ids);
        }
        Self::from_indices(vertices, tets)
    }

    fn from_indices(vertices: Vec<String>, tets: Vec<[usize; 4]>) -> Result<Self> {
        if tets.is_empty() {
            return Err(Error::Construction("leaf has no tetrahedra".into()));
        }
        let unique: BTreeSet<_> = tets.iter().collect();
        if unique.len() != tets.len() {
            return Err(Error::Construction("duplicate tetrahedron".into()));
        }
        let mut owners: BTreeMap<[usize; 3], Vec<usize>> = BTreeMap::new();
        for (ti, t) in tets.iter().enumerate() {
            for f in faces::<4, 3>(t) {
                owners.entry(f).or_default().push(ti);
            }
        }
        if let Some((f, _)) = owners.iter().find(|(_, o)| o.len() > 2) {
            let names: Vec<&str> = f.iter().map(|&i| vertices[i].as_str()).collect();
            return Err(Error::Construction(format!("triangle {} bounds more than two tetrahedra", names.join(" "))));
        }
        // Connectivity through shared triangles.
        let mut seen = vec![false; tets.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for f in faces::<4, 3>(&tets[t]) {
                for &n in &owners[&f] {
                    if !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Construction("leaf is not connected".into()));
        }
        let used: BTreeSet<usize> = tets.iter().flatten().copied().collect();
        if used.len() != vertices.len() {
            return Err(Error::Construction("leaf has isolated vertices".into()));
        }
        Ok(Self { vertices, tetrahedra: tets })
    }

    /// One tetrahedron `a b c d`.
    pub fn single_tetrahedron() -> Self {
        let v: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        Self { vertices: v, tetrahedra: vec![[0, 1, 2, 3]] }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// Vertex indices of each tetrahedron, ascending.
    pub fn tetrahedra(&self) -> &[[usize; 4]] {
        &self.tetrahedra
    }
}

/// Order in which a prism's bottom vertices climb to the next leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalRule {
    /// Ascending leaf-vertex order.
    #[default]
    Staircase,
    /// Descending leaf-vertex order.
    ReverseStaircase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub label: String,
    pub leaf: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex4 {
    vertices: Vec<Vertex>,
    n_leaves: usize,
    edges: BTreeSet<Edge>,
    triangles: BTreeSet<Triangle>,
    tetrahedra: BTreeSet<Tetrahedron>,
    four_simplices: Vec<(FourSimplex, usize)>,
    gauge: BTreeSet<Tetrahedron>,
}

/// Stacks `n_leaves` copies of `leaf` and triangulates every prism by the staircase rule.
pub fn build_prism_complex(leaf: &LeafComplex3, n_leaves: usize, rule: DiagonalRule) -> Result<SimplicialComplex4> {
    if n_leaves < 2 {
        return Err(Error::Construction(format!("need at least two leaves, got {n_leaves}")));
    }
    let nv = leaf.vertices.len();
    let vertices: Vec<Vertex> = (0..n_leaves)
        .flat_map(|t| leaf.vertices.iter().map(move |l| Vertex { label: l.clone(), leaf: t }))
        .collect();
    let id = |local: usize, t: usize| t * nv + local;
    let mut four_simplices = Vec::new();
    for t in 0..n_leaves - 1 {
        for (pi, tet) in leaf.tetrahedra.iter().enumerate() {
            let mut order = *tet;
            if rule == DiagonalRule::ReverseStaircase {
                order.reverse();
            }
            for k in 0..4 {
                let mut s = [0; 5];
                for (i, &a) in order[..=k].iter().enumerate() {
                    s[i] = id(a, t);
                }
                for (i, &a) in order[k..].iter().enumerate() {
                    s[k + 1 + i] = id(a, t + 1);
                }
                four_simplices.push((sorted(s), t * leaf.tetrahedra.len() + pi));
            }
        }
    }
    let mut tetrahedra = BTreeSet::new();
    let mut tet_prisms: BTreeMap<Tetrahedron, Vec<usize>> = BTreeMap::new();
    for (s, prism) in &four_simplices {
        for f in faces::<5, 4>(s) {
            tetrahedra.insert(f);
            tet_prisms.entry(f).or_default().push(*prism);
        }
    }
    let gauge = tet_prisms
        .into_iter()
        .filter(|(_, p)| p.len() >= 2 && p.windows(2).all(|w| w[0] == w[1]))
        .map(|(t, _)| t)
        .collect();
    let triangles: BTreeSet<Triangle> = tetrahedra.iter().flat_map(faces::<4, 3>).collect();
    let edges: BTreeSet<Edge> = triangles.iter().flat_map(faces::<3, 2>).collect();
    Ok(SimplicialComplex4 { vertices, n_leaves, edges, triangles, tetrahedra, four_simplices, gauge })
}

impl SimplicialComplex4 {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn triangles(&self) -> impl Iterator<Item = &Triangle> {
        self.triangles.iter()
    }

    pub fn tetrahedra(&self) -> impl Iterator<Item = &Tetrahedron> {
        self.tetrahedra.iter()
    }

    pub fn four_simplices(&self) -> impl Iterator<Item = &FourSimplex> {
        self.four_simplices.iter().map(|(s, _)| s)
    }

    pub fn counts(&self) -> [usize; 5] {
        [self.vertices.len(), self.edges.len(), self.triangles.len(), self.tetrahedra.len(), self.four_simplices.len()]
    }

    pub fn has_triangle(&self, t: &Triangle) -> bool {
        self.triangles.contains(t)
    }

    pub fn has_tetrahedron(&self, t: &Tetrahedron) -> bool {
        self.tetrahedra.contains(t)
    }

    /// Edge joining two leaves.
    pub fn is_lapse_shift(&self, e: &Edge) -> bool {
        self.vertices[e[0]].leaf != self.vertices[e[1]].leaf
    }

    /// Triangle with a lapse-shift edge.
    pub fn in_f(&self, t: &Triangle) -> bool {
        faces::<3, 2>(t).iter().any(|e| self.is_lapse_shift(e))
    }

    /// Tetrahedron shared only by 4-simplices of one prism; its connection is fixed to 1.
    pub fn is_gauge(&self, t: &Tetrahedron) -> bool {
        self.gauge.contains(t)
    }

    pub fn vertex_name(&self, v: usize) -> String {
        let x = &self.vertices[v];
        format!("{}.{}", x.label, x.leaf)
    }

    /// `a.0-b.0-c.1`
    pub fn simplex_name(&self, s: &[usize]) -> String {
        s.iter().map(|&v| self.vertex_name(v)).collect::<Vec<_>>().join("-")
    }

    pub fn vertex_id(&self, label: &str, leaf: usize) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label && v.leaf == leaf)
    }

    /// Every face of every simplex is present and every triangle bounds some tetrahedron.
    pub fn check_incidence(&self) -> Result<()> {
        for s in self.four_simplices() {
            for f in faces::<5, 4>(s) {
                if !self.tetrahedra.contains(&f) {
                    return Err(Error::Construction(format!("missing face {}", self.simplex_name(&f))));
                }
            }
        }
        for t in &self.tetrahedra {
            for f in faces::<4, 3>(t) {
                if !self.triangles.contains(&f) {
                    return Err(Error::Construction(format!("missing face {}", self.simplex_name(&f))));
                }
            }
        }
        let covered: BTreeSet<Triangle> = self.tetrahedra.iter().flat_map(faces::<4, 3>).collect();
        for t in &self.triangles {
            for e in faces::<3, 2>(t) {
                if !self.edges.contains(&e) {
                    return Err(Error::Construction(format!("missing edge {}", self.simplex_name(&e))));
                }
            }
            if !covered.contains(t) {
                return Err(Error::Construction(format!("triangle {} bounds no tetrahedron", self.simplex_name(t))));
            }
        }
        Ok(())
    }
}

/// Triangles containing a lapse-shift edge.
pub fn f_set(cx: &SimplicialComplex4) -> Vec<Triangle> {
    cx.triangles().filter(|t| cx.in_f(t)).copied().collect()
}

/// Triangles with independent curvature, the complement of [`f_set`].
pub fn independent_set(cx: &SimplicialComplex4) -> Vec<Triangle> {
    cx.triangles().filter(|t| !cx.in_f(t)).copied().collect()
}

/// Selfdual connections per tetrahedron; absent entries are the identity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConnectionAssignment {
    omega: BTreeMap<Tetrahedron, So3cMatrix>,
}

impl ConnectionAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, cx: &SimplicialComplex4, tet: Tetrahedron, m: So3cMatrix) -> Result<()> {
        if !cx.has_tetrahedron(&tet) {
            return Err(Error::Adjacency(format!("{} is not a tetrahedron of the complex", cx.simplex_name(&tet))));
        }
        if cx.is_gauge(&tet) && m != So3cMatrix::identity() {
            return Err(Error::Construction(format!("{} is gauge fixed to the identity", cx.simplex_name(&tet))));
        }
        self.omega.insert(tet, m);
        Ok(())
    }

    pub fn omega(&self, tet: &Tetrahedron) -> So3cMatrix {
        self.omega.get(tet).copied().unwrap_or_else(So3cMatrix::identity)
    }
}

fn shares_triangle(a: &Tetrahedron, b: &Tetrahedron) -> bool {
    a.iter().filter(|v| b.contains(v)).count() == 3
}

/// `R_k = Omega_(k-1)^T Omega_k` along a chain of face-adjacent tetrahedra.
pub fn curvature_factors(assign: &ConnectionAssignment, chain: &[Tetrahedron]) -> Result<Vec<So3cMatrix>> {
    if chain.is_empty() {
        return Err(Error::Adjacency("empty chain".into()));
    }
    chain
        .windows(2)
        .map(|w| {
            if !shares_triangle(&w[0], &w[1]) {
                return Err(Error::Adjacency(format!("{:?} and {:?} share no triangle", w[0], w[1])));
            }
            Ok(assign.omega(&w[0]).transpose() * assign.omega(&w[1]))
        })
        .collect()
}

/// Ordered product `R_2 .. R_n`, equal to `Omega_1^T Omega_n`.
pub fn holonomy(assign: &ConnectionAssignment, chain: &[Tetrahedron]) -> Result<So3cMatrix> {
    Ok(curvature_factors(assign, chain)?.iter().fold(So3cMatrix::identity(), |acc, r| acc * r))
}

/// `Omega_n = Omega_1 R_2 .. R_n`.
pub fn reconstruct_omegas(omega1: &So3cMatrix, factors: &[So3cMatrix]) -> Vec<So3cMatrix> {
    let mut out = vec![*omega1];
    for r in factors {
        let next = out[out.len() - 1] * r;
        out.push(next);
    }
    out
}

/// `kappa sqrt(v^2) arcsin(v . r(R) / sqrt(v^2))` for one sector.
fn sector_term(kappa: Complex64, v: &crate::math::vec3::ComplexVec3, r: &So3cMatrix) -> Option<Complex64> {
    let v2 = v.dot(v);
    if v2.norm() == 0.0 {
        return None;
    }
    let s = csqrt(v2);
    Some(kappa * s * casin(v.dot(&so3c_r(r)) / s))
}

/// `S = 1/2 sum [(1 + i/gamma) sqrt(v+^2) arcsin(v+ . r(R+)/sqrt(v+^2)) + c.c.]`.
/// The conjugate term is built from the antiselfdual area and `conj(R+)`.
/// Triangles without a curvature entry are flat.
pub fn action(
    cx: &SimplicialComplex4,
    areas: &BTreeMap<Triangle, AreaBivector>,
    curvatures: &BTreeMap<Triangle, So3cMatrix>,
    cfg: &CouplingConfig,
) -> Result<Complex64> {
    let kappa = cfg.selfdual_weight();
    let mut total = Complex64::new(0.0, 0.0);
    for (tri, area) in areas {
        if !cx.has_triangle(tri) {
            return Err(Error::Adjacency(format!("{:?} is not a triangle of the complex", tri)));
        }
        let r = curvatures.get(tri).copied().unwrap_or_else(So3cMatrix::identity);
        let name = || Error::DegenerateArea(cx.simplex_name(tri));
        let plus = sector_term(kappa, &area.plus_v, &r).ok_or_else(name)?;
        let minus = sector_term(kappa, &area.minus_v.conj(), &r).ok_or_else(name)?.conj();
        total += (plus + minus) * 0.5;
    }
    if let Some(t) = curvatures.keys().find(|t| !areas.contains_key(*t)) {
        return Err(Error::DegenerateArea(format!("{} has curvature but no area", cx.simplex_name(t))));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar_so3::so3c_exp;
    use crate::math::vec3::ComplexVec3;

    fn prism() -> SimplicialComplex4 {
        build_prism_complex(&LeafComplex3::single_tetrahedron(), 2, DiagonalRule::Staircase).unwrap()
    }

    #[test]
    fn single_prism_counts() {
        let cx = prism();
        assert_eq!(cx.counts()[0], 8);
        assert_eq!(cx.counts()[4], 4);
        cx.check_incidence().unwrap();
        assert!(cx.edges().filter(|e| cx.vertices()[e[0]].leaf != cx.vertices()[e[1]].leaf).all(|e| cx.is_lapse_shift(e)));
        for t in cx.triangles() {
            let has = faces::<3, 2>(t).iter().any(|e| cx.is_lapse_shift(e));
            assert_eq!(has, cx.in_f(t));
        }
        assert_eq!(f_set(&cx).len() + independent_set(&cx).len(), cx.counts()[2]);
        assert!(!cx.in_f(&[0, 1, 2]));
        assert!(cx.in_f(&[0, 1, 5]));
        // Interior tetrahedra of one prism are gauge fixed; the two leaf copies are not.
        assert!(!cx.is_gauge(&[0, 1, 2, 3]) && !cx.is_gauge(&[4, 5, 6, 7]));
        assert_eq!(cx.tetrahedra().filter(|t| cx.is_gauge(t)).count(), 3);
        let rev = build_prism_complex(&LeafComplex3::single_tetrahedron(), 2, DiagonalRule::ReverseStaircase).unwrap();
        assert_eq!(rev.counts()[4], 4);
        rev.check_incidence().unwrap();
    }

    #[test]
    fn construction_errors() {
        let l = |v: &[&str], t: &[[&str; 4]]| {
            LeafComplex3::new(v.iter().map(|s| s.to_string()).collect(), t.iter().map(|x| x.map(|s| s.to_string())).collect())
        };
        assert!(l(&["a", "b", "c", "d", "e", "f"], &[["a", "b", "c", "d"], ["a", "b", "c", "e"], ["a", "b", "c", "f"]]).is_err());
        assert!(l(&["a", "b", "c", "d", "e", "f", "g", "h"], &[["a", "b", "c", "d"], ["e", "f", "g", "h"]]).is_err());
        assert!(l(&["a", "b", "c", "d"], &[["a", "b", "c", "c"]]).is_err());
        assert!(l(&["a", "b", "c", "d", "e"], &[["a", "b", "c", "d"], ["b", "c", "d", "e"]]).is_ok());
        assert!(build_prism_complex(&LeafComplex3::single_tetrahedron(), 1, DiagonalRule::Staircase).is_err());
    }

    #[test]
    fn holonomy_examples() {
        let cx = prism();
        let chain: Vec<Tetrahedron> = vec![[0, 1, 2, 3], [0, 1, 3, 7], [0, 2, 3, 7]];
        let id = ConnectionAssignment::new();
        assert_eq!(holonomy(&id, &chain).unwrap(), So3cMatrix::identity());
        let mut a = ConnectionAssignment::new();
        let o1 = so3c_exp(&ComplexVec3::real(0.0, 0.0, 0.4));
        let o3 = so3c_exp(&ComplexVec3::new(Complex64::new(0.1, 0.2), Complex64::new(0.0, -0.3), Complex64::new(0.5, 0.0)));
        a.set(&cx, chain[0], o1).unwrap();
        a.set(&cx, chain[2], o3).unwrap();
        let h = holonomy(&a, &chain).unwrap();
        assert!((h - o1.transpose() * o3).norm() < 1e-12);
        let mut rev = chain.clone();
        rev.reverse();
        assert!((holonomy(&a, &rev).unwrap() - h.transpose()).norm() < 1e-12);
        let f = curvature_factors(&a, &chain).unwrap();
        let rebuilt = reconstruct_omegas(&a.omega(&chain[0]), &f);
        for (k, t) in chain.iter().enumerate() {
            assert!((rebuilt[k] - a.omega(t)).norm() < 1e-12);
        }
        assert!(matches!(holonomy(&a, &[[0, 1, 2, 3], [0, 5, 6, 7]]), Err(Error::Adjacency(_))));
        assert!(a.set(&cx, [0, 1, 2, 7], o1).is_err());
    }

    #[test]
    fn action_examples() {
        let cx = prism();
        let cfg = CouplingConfig::new(2.0).unwrap();
        let tri = [0, 1, 2];
        let v = ComplexVec3::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.5));
        let area = AreaBivector { plus_v: v, minus_v: v.conj() };
        let areas = BTreeMap::from([(tri, area)]);
        assert_eq!(action(&cx, &areas, &BTreeMap::new(), &cfg).unwrap(), Complex64::new(0.0, 0.0));
        let eps = 1e-3;
        let curv = BTreeMap::from([(tri, so3c_exp(&ComplexVec3::real(0.0, 0.0, eps)))]);
        let s = action(&cx, &areas, &curv, &cfg).unwrap();
        assert!((s.re + eps / (2.0 * 2.0)).abs() < eps.powi(3) && s.im.abs() < 1e-15, "{s}");
        let zero = AreaBivector { plus_v: ComplexVec3::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)), minus_v: ComplexVec3::zero() };
        assert!(matches!(action(&cx, &BTreeMap::from([(tri, zero)]), &BTreeMap::new(), &cfg), Err(Error::DegenerateArea(_))));
    }
}
