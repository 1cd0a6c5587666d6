//! Certification of a candidate map on a truncation window.

use std::fmt;

use rayon::prelude::*;

use crate::exact::{ExactScalar, Matrix, Point, ScaledIsometry, StringGeom, Vector};
use crate::netlib::{NetOracle, NetTruncation};

/// A node or string whose image is missing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Node { point: Point, image: Point },
    String { string: StringGeom, image: StringGeom },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Node { point, image } => {
                write!(f, "node {point:?} maps to {image:?}, which is not a node")
            }
            Witness::String { string, image } => {
                write!(f, "string {string:?} maps to {image:?}, which is not a string")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Certified,
    Refuted(Witness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedSymmetry {
    pub map: ScaledIsometry,
    /// Radius of the window on which the map was checked in both directions.
    pub certified_radius: ExactScalar,
    pub status: Status,
    /// The map matches the period lattices and the class representatives,
    /// so it is a symmetry of the infinite periodic structures.
    pub extends_to_net: bool,
}

impl CertifiedSymmetry {
    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.status {
            Status::Certified => None,
            Status::Refuted(w) => Some(w),
        }
    }
}

/// Window of `source` whose image under `map` stays inside `target`'s
/// window, or the whole source window when `target` answers exactly.
fn forward_radius(map: &ScaledIsometry, source: &NetTruncation, target: &NetTruncation) -> ExactScalar {
    if target.oracle().is_some() {
        return source.radius.clone();
    }
    let slack = &target.radius - &map.translation_part().max_abs();
    let inner = slack
        .checked_div(&map.linear().inf_norm())
        .unwrap_or_else(|_| ExactScalar::zero());
    let inner = if inner.is_negative() { ExactScalar::zero() } else { inner };
    std::cmp::min(inner, source.radius.clone())
}

fn check_direction(
    map: &ScaledIsometry,
    source: &NetTruncation,
    target: &NetTruncation,
    r: &ExactScalar,
) -> Option<Witness> {
    let nodes: Vec<&Point> = source.nodes_within(r).map(|(_, n)| &n.point).collect();
    let bad = nodes.par_iter().find_map_first(|p| {
        let image = map.apply_point(p).expect("dimension");
        (!target.is_node(&image)).then(|| Witness::Node {
            point: (*p).clone(),
            image,
        })
    });
    if bad.is_some() {
        return bad;
    }
    let strings: Vec<&StringGeom> = source.strings_within(r).map(|(_, s)| &s.geom).collect();
    strings.par_iter().find_map_first(|s| {
        let image = map.apply_string(s).expect("dimension");
        (!target.has_string(&image)).then(|| Witness::String {
            string: (*s).clone(),
            image,
        })
    })
}

/// Whether `M` maps the lattice of `a` onto the lattice of `b`.
fn maps_lattice_onto(m: &Matrix, a: &[Vector], b: &[Vector]) -> bool {
    let (Ok(pa), Ok(pb)) = (Matrix::from_columns(a), Matrix::from_columns(b)) else {
        return false;
    };
    let Ok(pb_inv) = pb.inverse() else {
        return false;
    };
    let k = &(&pb_inv * m) * &pa;
    k.is_integral() && k.det().abs().is_one()
}

/// Checks `T` on one node and one string per class in both directions.
fn representatives_map(map: &ScaledIsometry, source: &NetTruncation, target: &NetTruncation) -> bool {
    let mut seen_nodes = std::collections::BTreeSet::new();
    for n in source.nodes() {
        if seen_nodes.insert(n.class) && !target.is_node(&map.apply_point(&n.point).expect("dimension")) {
            return false;
        }
    }
    let mut seen_strings = std::collections::BTreeSet::new();
    for s in source.strings() {
        if seen_strings.insert(s.class) && !target.has_string(&map.apply_string(&s.geom).expect("dimension")) {
            return false;
        }
    }
    true
}

fn extends(map: &ScaledIsometry, source: &NetTruncation, target: &NetTruncation) -> bool {
    let (Some(pa), Some(pb)) = (&source.periods, &target.periods) else {
        return false;
    };
    if source.oracle().is_none() || target.oracle().is_none() {
        return false;
    }
    let inv = map.inverse();
    maps_lattice_onto(map.linear(), pa, pb)
        && representatives_map(map, source, target)
        && representatives_map(&inv, target, source)
}

/// Radius on which [`certify`] checks `map` from `source` to `target`.
pub(crate) fn certified_window(map: &ScaledIsometry, source: &NetTruncation, target: &NetTruncation) -> ExactScalar {
    let rf = forward_radius(map, source, target);
    let rb = forward_radius(&map.inverse(), target, source);
    std::cmp::min(rf, rb)
}

/// Checks that `map` sends the nodes and strings of `source` to those of
/// `target` and that its inverse does the same in reverse, on the largest
/// window where both checks are exact.
///
/// For periodic structures a map that carries one lattice onto the other
/// and the class representatives into the other structure is a symmetry
/// of the whole structures; the window scan is then skipped.
pub fn certify(map: &ScaledIsometry, source: &NetTruncation, target: &NetTruncation) -> CertifiedSymmetry {
    let inv = map.inverse();
    let rf = forward_radius(map, source, target);
    let rb = forward_radius(&inv, target, source);
    let radius = std::cmp::min(rf.clone(), rb.clone());
    // an exact proof on the infinite structures covers every window
    if extends(map, source, target) {
        return CertifiedSymmetry {
            map: map.clone(),
            certified_radius: radius,
            status: Status::Certified,
            extends_to_net: true,
        };
    }
    let refuted = |w| CertifiedSymmetry {
        map: map.clone(),
        certified_radius: radius.clone(),
        status: Status::Refuted(w),
        extends_to_net: false,
    };
    if let Some(w) = check_direction(map, source, target, &rf) {
        return refuted(w);
    }
    if let Some(w) = check_direction(&inv, target, source, &rb) {
        return refuted(w);
    }
    CertifiedSymmetry {
        map: map.clone(),
        certified_radius: radius.clone(),
        status: Status::Certified,
        extends_to_net: false,
    }
}

/// [`certify`] with `source = target = net`.
pub fn certify_symmetry(map: &ScaledIsometry, net: &NetTruncation) -> CertifiedSymmetry {
    certify(map, net, net)
}
