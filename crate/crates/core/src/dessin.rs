//! Dessins d'enfants: the bipartite ribbon graph of a connected covering
//! class, an Euler-characteristic genus cross-check, and DOT export.
//!
//! Black vertices are the cycles of g0, white vertices the cycles of g1 and
//! faces the cycles of g_inf; the n edges are labelled 1..n and the cyclic
//! order at each vertex is the cycle itself. Faces use g_inf directly rather
//! than the inverse of g0*g1; either choice yields a valid oriented map and
//! this one is fixed for determinism.

use std::fmt::Write as _;

use crate::enumerate::CoveringClass;
use crate::error::{Error, Result};

/// A bipartite ribbon graph with labelled edges 1..n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dessin {
    black: Vec<Vec<usize>>,
    white: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    edges: usize,
}

impl Dessin {
    /// Cyclically ordered edge lists of the black vertices (cycles of g0).
    pub fn black(&self) -> &[Vec<usize>] {
        &self.black
    }

    /// Cyclically ordered edge lists of the white vertices (cycles of g1).
    pub fn white(&self) -> &[Vec<usize>] {
        &self.white
    }

    /// Edge cycles of the faces (cycles of g_inf).
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Number of edges, the covering degree.
    pub fn edges(&self) -> usize {
        self.edges
    }
}

/// Builds the dessin of a connected covering class.
///
/// Errors on disconnected classes: dessins are connected by definition.
pub fn dessin_from_class(class: &CoveringClass) -> Result<Dessin> {
    if !class.connected() {
        return Err(Error::Disconnected);
    }
    Ok(Dessin {
        black: class.g0().cycles(),
        white: class.g1().cycles(),
        faces: class.g_inf().cycles(),
        edges: class.g0().degree(),
    })
}

/// Genus from the Euler characteristic: g = (2 - (V - E + F)) / 2 with
/// V the vertex count, E the edge count and F the face count.
///
/// Panics if the characteristic is odd or exceeds 2; for a dessin built from
/// a connected triple that would be an internal invariant violation.
pub fn euler_genus(dessin: &Dessin) -> u32 {
    let v = (dessin.black.len() + dessin.white.len()) as i64;
    let e = dessin.edges as i64;
    let f = dessin.faces.len() as i64;
    let chi = v - e + f;
    let doubled = 2 - chi;
    assert!(
        doubled >= 0 && doubled % 2 == 0,
        "Euler characteristic {chi} does not belong to an orientable surface"
    );
    (doubled / 2) as u32
}

/// Renders the dessin as a Graphviz graph. Black vertices are filled, white
/// ones hollow; edges carry their 1..n labels and every vertex records its
/// cyclic edge order in a `cyclic` attribute (the ribbon structure, which
/// plain graph formats cannot express; renderers may ignore it).
/// Output is deterministic.
pub fn export_dot(dessin: &Dessin) -> String {
    let mut owner_black = vec![0usize; dessin.edges + 1];
    let mut owner_white = vec![0usize; dessin.edges + 1];
    for (i, vertex) in dessin.black.iter().enumerate() {
        for &edge in vertex {
            owner_black[edge] = i;
        }
    }
    for (i, vertex) in dessin.white.iter().enumerate() {
        for &edge in vertex {
            owner_white[edge] = i;
        }
    }
    let cyclic = |edges: &[usize]| {
        edges
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = String::from("graph dessin {\n");
    for (i, vertex) in dessin.black.iter().enumerate() {
        writeln!(
            out,
            "  b{} [shape=circle, style=filled, fillcolor=black, label=\"\", cyclic=\"{}\"];",
            i + 1,
            cyclic(vertex)
        )
        .unwrap();
    }
    for (i, vertex) in dessin.white.iter().enumerate() {
        writeln!(
            out,
            "  w{} [shape=circle, label=\"\", cyclic=\"{}\"];",
            i + 1,
            cyclic(vertex)
        )
        .unwrap();
    }
    for edge in 1..=dessin.edges {
        writeln!(
            out,
            "  b{} -- w{} [label=\"{}\"];",
            owner_black[edge] + 1,
            owner_white[edge] + 1,
            edge
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_classes, EnumerationLimits};
    use crate::partition::RamificationScheme;

    fn only_class(scheme: &str) -> CoveringClass {
        let s: RamificationScheme = scheme.parse().unwrap();
        let classes = enumerate_classes(&s, &EnumerationLimits::default()).unwrap();
        assert_eq!(classes.len(), 1, "expected a unique class for {s}");
        classes.into_iter().next().unwrap()
    }

    #[test]
    fn trivial_covering_dessin() {
        let d = dessin_from_class(&only_class("1|1|1")).unwrap();
        assert_eq!(d.black().len(), 1);
        assert_eq!(d.white().len(), 1);
        assert_eq!(d.faces().len(), 1);
        assert_eq!(d.edges(), 1);
        assert_eq!(euler_genus(&d), 0);
    }

    #[test]
    fn power_map_star_tree() {
        // z -> z^3: one black vertex, three white, three edges, one face.
        let d = dessin_from_class(&only_class("3|1,1,1|3")).unwrap();
        assert_eq!(d.black().len(), 1);
        assert_eq!(d.white().len(), 3);
        assert_eq!(d.edges(), 3);
        assert_eq!(d.faces().len(), 1);
        assert_eq!(euler_genus(&d), 0);
    }

    #[test]
    fn torus_dessin_has_genus_one() {
        let class = only_class("1,5|3,3|3,3");
        let d = dessin_from_class(&class).unwrap();
        assert_eq!(d.black().len(), 2);
        assert_eq!(d.white().len(), 2);
        assert_eq!(d.edges(), 6);
        assert_eq!(d.faces().len(), 2);
        assert_eq!(euler_genus(&d), 1);
        // Vertex degree multisets are the scheme's partitions.
        let mut black_degrees: Vec<usize> = d.black().iter().map(Vec::len).collect();
        black_degrees.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(black_degrees, vec![5, 1]);
    }

    #[test]
    fn disconnected_class_is_rejected() {
        let s: RamificationScheme = "1,1|1,1|1,1".parse().unwrap();
        let classes = enumerate_classes(&s, &EnumerationLimits::default()).unwrap();
        assert_eq!(classes.len(), 1);
        assert!(matches!(
            dessin_from_class(&classes[0]),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn dot_export_of_trivial_covering() {
        let d = dessin_from_class(&only_class("1|1|1")).unwrap();
        let dot = export_dot(&d);
        assert!(dot.contains("b1 [shape=circle, style=filled"));
        assert!(dot.contains("w1 [shape=circle, label"));
        assert!(dot.contains("b1 -- w1 [label=\"1\"];"));
    }

    #[test]
    fn dot_export_structure_of_torus_class() {
        let d = dessin_from_class(&only_class("1,5|3,3|3,3")).unwrap();
        let dot = export_dot(&d);
        assert_eq!(dot.matches(" -- ").count(), 6);
        assert_eq!(dot.matches("cyclic=").count(), 4);
        // Stable across runs.
        assert_eq!(dot, export_dot(&dessin_from_class(&only_class("1,5|3,3|3,3")).unwrap()));
    }
}
