//! Text formats.
//!
//! Leaf file:
//! ```text
//! # comment
//! vertex a b c d
//! tet a b c d
//! ```
//! Action data, with simplices named by `label.leaf` vertices joined by `-`:
//! ```text
//! area a.0-b.0-c.1 0,1,0,0 0,0,1,0      # two real edge 4-vectors (t,x,y,z)
//! conn a.0-b.0-c.0-d.0 0.1,0.2i,0       # rotation vector of the selfdual connection
//! curv a.0-b.0-c.1 a.0-b.0-c.0-c.1 ...  # chain whose holonomy is the curvature
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{holonomy, ConnectionAssignment, LeafComplex3, SimplicialComplex4, Tetrahedron, Triangle};
use crate::error::{Error, Result};
use crate::haar_so3::{bivector_split, so3c_exp, AreaBivector, So3cMatrix};
use crate::math::vec3::ComplexVec3;

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub fn parse_leaf(text: &str) -> Result<LeafComplex3> {
    let mut vertices = Vec::new();
    let mut tets = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let mut tok = content(raw).split_whitespace();
        match tok.next() {
            None => {}
            Some("vertex") => {
                let labels: Vec<String> = tok.map(str::to_string).collect();
                if labels.is_empty() {
                    return Err(perr(line, "`vertex` needs at least one label"));
                }
                vertices.extend(labels);
            }
            Some("tet") => {
                let t: Vec<String> = tok.map(str::to_string).collect();
                let t: [String; 4] = t.try_into().map_err(|_| perr(line, "`tet` needs exactly four labels"))?;
                tets.push(t);
            }
            Some(k) => return Err(perr(line, format!("unknown keyword `{k}`"))),
        }
    }
    LeafComplex3::new(vertices, tets)
}

/// Three comma-separated complex numbers such as `1+2i,0,-0.5i`.
pub fn parse_complex_vector(s: &str) -> Result<ComplexVec3> {
    parse_complex_vector_at(s, 1)
}

fn parse_complex_vector_at(s: &str, line: usize) -> Result<ComplexVec3> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(perr(line, format!("expected three components in `{s}`")));
    }
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (k, p) in parts.iter().enumerate() {
        let z: Complex64 = p.parse().map_err(|_| perr(line, format!("bad complex number `{p}`")))?;
        if !z.is_finite() {
            return Err(perr(line, format!("non-finite component `{p}`")));
        }
        out[k] = z;
    }
    Ok(ComplexVec3::from_array(out))
}

fn parse_four_vector(s: &str, line: usize) -> Result<[f64; 4]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(perr(line, format!("expected t,x,y,z in `{s}`")));
    }
    let mut out = [0.0; 4];
    for (k, p) in parts.iter().enumerate() {
        let x: f64 = p.parse().map_err(|_| perr(line, format!("bad real number `{p}`")))?;
        if !x.is_finite() {
            return Err(perr(line, format!("non-finite component `{p}`")));
        }
        out[k] = x;
    }
    Ok(out)
}

/// Sorted vertex ids of a simplex token like `a.0-b.0-c.1`.
pub fn parse_simplex(token: &str, cx: &SimplicialComplex4) -> Result<Vec<usize>> {
    parse_simplex_at(token, cx, 1)
}

fn parse_simplex_at(token: &str, cx: &SimplicialComplex4, line: usize) -> Result<Vec<usize>> {
    let mut ids = Vec::new();
    for v in token.split('-') {
        let (label, leaf) = v.rsplit_once('.').ok_or_else(|| perr(line, format!("vertex `{v}` lacks a `.leaf` suffix")))?;
        let leaf: usize = leaf.parse().map_err(|_| perr(line, format!("bad leaf index in `{v}`")))?;
        ids.push(cx.vertex_id(label, leaf).ok_or_else(|| perr(line, format!("unknown vertex `{v}`")))?);
    }
    ids.sort_unstable();
    if ids.windows(2).any(|w| w[0] == w[1]) {
        return Err(perr(line, format!("`{token}` repeats a vertex")));
    }
    Ok(ids)
}

fn triangle_at(token: &str, cx: &SimplicialComplex4, line: usize) -> Result<Triangle> {
    let t: Triangle = parse_simplex_at(token, cx, line)?
        .try_into()
        .map_err(|_| perr(line, format!("`{token}` is not a triangle")))?;
    if !cx.has_triangle(&t) {
        return Err(perr(line, format!("`{token}` is not a triangle of the complex")));
    }
    Ok(t)
}

fn tetrahedron_at(token: &str, cx: &SimplicialComplex4, line: usize) -> Result<Tetrahedron> {
    let t: Tetrahedron = parse_simplex_at(token, cx, line)?
        .try_into()
        .map_err(|_| perr(line, format!("`{token}` is not a tetrahedron")))?;
    if !cx.has_tetrahedron(&t) {
        return Err(perr(line, format!("`{token}` is not a tetrahedron of the complex")));
    }
    Ok(t)
}

/// Parsed per-triangle areas, per-tetrahedron connections and curvature chains.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ActionData {
    pub areas: BTreeMap<Triangle, AreaBivector>,
    pub connections: ConnectionAssignment,
    pub chains: BTreeMap<Triangle, Vec<Tetrahedron>>,
}

impl ActionData {
    /// Holonomy of each declared chain.
    pub fn curvatures(&self) -> Result<BTreeMap<Triangle, So3cMatrix>> {
        self.chains.iter().map(|(t, c)| Ok((*t, holonomy(&self.connections, c)?))).collect()
    }
}

pub fn parse_action_data(text: &str, cx: &SimplicialComplex4) -> Result<ActionData> {
    let mut data = ActionData::default();
    let mut seen_conn = std::collections::BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let tok: Vec<&str> = content(raw).split_whitespace().collect();
        let Some((&key, args)) = tok.split_first() else { continue };
        match key {
            "area" => {
                let [tri, a, b] = args else { return Err(perr(line, "`area` needs a triangle and two 4-vectors")) };
                let t = triangle_at(tri, cx, line)?;
                let biv = bivector_split(parse_four_vector(a, line)?, parse_four_vector(b, line)?);
                if data.areas.insert(t, biv).is_some() {
                    return Err(perr(line, format!("second area for `{tri}`")));
                }
            }
            "conn" => {
                let [tet, phi] = args else { return Err(perr(line, "`conn` needs a tetrahedron and a rotation vector")) };
                let t = tetrahedron_at(tet, cx, line)?;
                if !seen_conn.insert(t) {
                    return Err(perr(line, format!("second connection for `{tet}`")));
                }
                let m = so3c_exp(&parse_complex_vector_at(phi, line)?);
                data.connections.set(cx, t, m).map_err(|e| perr(line, e.to_string()))?;
            }
            "curv" => {
                let Some((tri, chain)) = args.split_first() else {
                    return Err(perr(line, "`curv` needs a triangle and a chain"));
                };
                let t = triangle_at(tri, cx, line)?;
                if chain.is_empty() {
                    return Err(perr(line, "empty chain"));
                }
                let mut tets = Vec::with_capacity(chain.len());
                for c in chain {
                    let tet = tetrahedron_at(c, cx, line)?;
                    if !t.iter().all(|v| tet.contains(v)) {
                        return Err(perr(line, format!("`{c}` does not contain `{tri}`")));
                    }
                    tets.push(tet);
                }
                if data.chains.insert(t, tets).is_some() {
                    return Err(perr(line, format!("second chain for `{tri}`")));
                }
            }
            k => return Err(perr(line, format!("unknown keyword `{k}`"))),
        }
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{build_prism_complex, DiagonalRule};

    const LEAF: &str = "# one tetrahedron\nvertex a b c\nvertex d\ntet a b c d\n";

    #[test]
    fn leaf_roundtrip() {
        let leaf = parse_leaf(LEAF).unwrap();
        assert_eq!(leaf, LeafComplex3::single_tetrahedron());
        assert!(matches!(parse_leaf("vertex a\nbogus"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_leaf("vertex a b c d\ntet a b c"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_leaf("vertex a b c d\ntet a b c e"), Err(Error::Construction(_))));
    }

    #[test]
    fn complex_vectors() {
        let v = parse_complex_vector("1+2i, 0 ,-0.5i").unwrap();
        assert_eq!(v.x, Complex64::new(1.0, 2.0));
        assert_eq!(v.z, Complex64::new(0.0, -0.5));
        assert!(parse_complex_vector("1,2").is_err());
        assert!(parse_complex_vector("1,2,inf").is_err());
        assert!(parse_complex_vector("1,,2").is_err());
    }

    #[test]
    fn action_data() {
        let cx = build_prism_complex(&parse_leaf(LEAF).unwrap(), 2, DiagonalRule::Staircase).unwrap();
        let text = "area a.0-b.0-c.0 0,1,0,0 0,0,1,0\n\
                    conn a.0-b.0-c.0-d.0 0,0,0.3\n\
                    curv a.0-b.0-c.0 a.0-b.0-c.0-d.0 a.0-b.0-c.0-d.1  # closes on the gauge tet\n";
        let d = parse_action_data(text, &cx).unwrap();
        assert_eq!(d.areas.len(), 1);
        let curv = d.curvatures().unwrap();
        assert!((curv[&[0, 1, 2]] - so3c_exp(&ComplexVec3::real(0.0, 0.0, 0.3)).transpose()).norm() < 1e-12);
        assert!(matches!(parse_action_data("area a.0-b.0-z.0 0,1,0,0 0,0,1,0", &cx), Err(Error::Parse { line: 1, .. })));
        assert!(parse_action_data("conn a.0-b.0-c.0-d.1 0,0,1", &cx).is_err());
        assert!(parse_action_data("curv a.0-b.0-c.0 a.0-b.0-d.0-d.1", &cx).is_err());
        assert!(parse_action_data("area a.0-b.0-c.0 0,1,0 0,0,1,0", &cx).is_err());
    }
}
