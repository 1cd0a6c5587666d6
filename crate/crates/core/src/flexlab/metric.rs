//! Intrinsic distance along strings.

use petgraph::algo::astar;
use petgraph::graph::NodeIndex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Point;
use crate::netlib::{string_graph, NetTruncation};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathMetric {
    pub distance: f64,
    /// Nodes of a shortest string path from `x` to `y`.
    pub path: Vec<Point>,
}

/// Shortest path between two nodes in the string graph, with a Euclidean
/// lower bound as the search heuristic.
pub fn string_path_metric(net: &NetTruncation, x: &Point, y: &Point) -> Result<PathMetric> {
    let id = |p: &Point| {
        net.node_id(p)
            .ok_or_else(|| Error::WindowTooSmall(format!("{:?} is not a node of the truncation", p.to_f64())))
    };
    let (a, b) = (id(x)?, id(y)?);
    let g = string_graph(net);
    let coords: Vec<Vec<f64>> = net.nodes().iter().map(|n| n.point.to_f64()).collect();
    let target = coords[b].clone();
    let (distance, nodes) = astar(
        &g,
        NodeIndex::new(a),
        |n| n.index() == b,
        |e| e.weight().to_f64(),
        |n| {
            coords[n.index()]
                .iter()
                .zip(&target)
                .map(|(u, v)| (u - v) * (u - v))
                .sum::<f64>()
                .sqrt()
        },
    )
    .ok_or(Error::Disconnected)?;
    Ok(PathMetric {
        distance,
        path: nodes.into_iter().map(|n| net.nodes()[n.index()].point.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ExactScalar, StringGeom, Vector};
    use crate::meshops::tensor;
    use crate::netlib::{catalog, generate, Assembly};
    use crate::supernatural::Supernatural;

    #[test]
    fn grid_distance_is_manhattan() {
        let t = generate(&catalog("Z2").unwrap(), &ExactScalar::int(3)).unwrap();
        let m = string_path_metric(&t, &Point::from_ints(&[0, 0]), &Point::from_ints(&[1, 1])).unwrap();
        assert!((m.distance - 2.0).abs() < 1e-15);
        assert_eq!(m.path.len(), 3);
    }

    #[test]
    fn refinement_keeps_the_distance() {
        for k in 1..=3 {
            let mesh = tensor("Z2", &Supernatural::infinite_at(&[2]).unwrap(), k, &ExactScalar::int(1)).unwrap();
            let m = string_path_metric(&mesh.net, &Point::from_ints(&[0, 0]), &Point::from_ints(&[1, 1])).unwrap();
            assert!((m.distance - 2.0).abs() < 1e-12, "depth {k}");
        }
    }

    #[test]
    fn same_string_is_euclidean() {
        let mesh = tensor("Z2", &Supernatural::infinite_at(&[2]).unwrap(), 2, &ExactScalar::int(1)).unwrap();
        let q = Point::new(vec![ExactScalar::frac(3, 4), ExactScalar::zero()]);
        let m = string_path_metric(&mesh.net, &Point::from_ints(&[0, 0]), &q).unwrap();
        assert!((m.distance - 0.75).abs() < 1e-15);
    }

    #[test]
    fn separate_strings_are_disconnected() {
        let a = StringGeom::segment(&Vector::from_ints(&[0, 0]), &Vector::from_ints(&[1, 0])).unwrap();
        let b = StringGeom::segment(&Vector::from_ints(&[0, 1]), &Vector::from_ints(&[1, 1])).unwrap();
        let pts = [[0, 0], [1, 0], [0, 1], [1, 1]].map(|p| Vector::from_ints(&p));
        let t = NetTruncation::assemble(
            "two",
            2,
            ExactScalar::int(2),
            pts.iter().cloned().map(|p| (p, 0)).collect(),
            vec![(a, 0), (b, 1)],
            Assembly { allow_lonely_nodes: true, ..Default::default() },
        )
        .unwrap();
        assert_eq!(
            string_path_metric(&t, &pts[0], &pts[2]),
            Err(Error::Disconnected)
        );
    }
}
