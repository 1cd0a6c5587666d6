//! The graph of consecutive nodes along strings.

use petgraph::graph::{NodeIndex, UnGraph};

use crate::exact::ExactScalar;

use super::truncation::NetTruncation;

/// Length of an internodal edge. The squared length is exact; the length
/// itself is exact when it lies in Q(√3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLength {
    pub length_sq: ExactScalar,
    pub length: Option<ExactScalar>,
}

impl EdgeLength {
    pub fn from_sq(length_sq: ExactScalar) -> Self {
        let length = length_sq.sqrt();
        EdgeLength { length_sq, length }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.length {
            Some(l) => l.to_f64(),
            None => self.length_sq.to_f64().sqrt(),
        }
    }
}

/// Node `i` of the truncation is graph node `NodeIndex::new(i)`.
pub type StringGraph = UnGraph<usize, EdgeLength>;

pub fn string_graph(net: &NetTruncation) -> StringGraph {
    let mut g = StringGraph::with_capacity(net.nodes().len(), net.nodes().len() * 2);
    for i in 0..net.nodes().len() {
        g.add_node(i);
    }
    for s in net.strings() {
        for w in s.nodes.windows(2) {
            let d = &net.nodes()[w[1]].point - &net.nodes()[w[0]].point;
            g.add_edge(
                NodeIndex::new(w[0]),
                NodeIndex::new(w[1]),
                EdgeLength::from_sq(d.norm_sq()),
            );
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{StringGeom, Vector};
    use crate::netlib::catalog::catalog;
    use crate::netlib::truncation::{generate, Assembly};

    #[test]
    fn unit_grid_edges() {
        let t = generate(&catalog("Z2").unwrap(), &ExactScalar::int(2)).unwrap();
        let g = string_graph(&t);
        assert_eq!(g.edge_count(), 2 * 5 * 4);
        assert!(g.edge_weights().all(|w| w.length == Some(ExactScalar::one())));
        assert_eq!(petgraph::algo::connected_components(&g), 1);
    }

    #[test]
    fn kagome_edges_have_unit_length() {
        let t = generate(&catalog("kag").unwrap(), &ExactScalar::int(4)).unwrap();
        let g = string_graph(&t);
        assert!(g.edge_weights().all(|w| w.length == Some(ExactScalar::one())));
    }

    #[test]
    fn halves_along_a_single_string() {
        let x = StringGeom::segment(&Vector::from_ints(&[0, 0]), &Vector::from_ints(&[1, 0])).unwrap();
        let half = Vector::new(vec![ExactScalar::frac(1, 2), ExactScalar::zero()]);
        let mut strings = vec![(x, 0)];
        for p in [Vector::from_ints(&[0, 0]), half.clone(), Vector::from_ints(&[1, 0])] {
            let up = &p + &Vector::from_ints(&[0, 1]);
            let down = &p - &Vector::from_ints(&[0, 1]);
            strings.push((StringGeom::segment(&down, &up).unwrap(), 1));
        }
        let t = NetTruncation::from_strings("probe", 2, ExactScalar::int(2), strings, Assembly::default())
            .unwrap();
        let g = string_graph(&t);
        let a = t.node_id(&Vector::from_ints(&[0, 0])).unwrap();
        let b = t.node_id(&half).unwrap();
        let e = g.find_edge(NodeIndex::new(a), NodeIndex::new(b)).unwrap();
        assert_eq!(g[e].length, Some(ExactScalar::frac(1, 2)));
        assert_eq!(
            g.edges(NodeIndex::new(b)).count(),
            2,
            "the middle node joins both halves"
        );
    }
}
