//! Finite truncations of nets to the box `[-R, R]^d`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, LineKey, Point, ScaledIsometry, StringGeom, StringKind, Vector};

use super::motif::{primitive_integer, Motif};
use super::oracle::{lattice_range, NetOracle, PeriodicOracle};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeEntry {
    pub point: Point,
    /// Translation class, or `0` when the net carries no class data.
    pub class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringEntry {
    /// The full string; the listed part is `geom` restricted to `clip`.
    pub geom: StringGeom,
    pub clip: (ExactScalar, ExactScalar),
    pub class: usize,
    /// Nodes on the clipped string in increasing parameter order.
    pub nodes: Vec<usize>,
}

impl StringEntry {
    /// The clipped piece as a segment (or a point for a degenerate clip).
    pub fn clipped_endpoints(&self) -> (Point, Point) {
        (
            self.geom.point_at(&self.clip.0),
            self.geom.point_at(&self.clip.1),
        )
    }
}

#[derive(Clone)]
pub struct NetTruncation {
    pub name: String,
    pub dimension: usize,
    pub radius: ExactScalar,
    pub periods: Option<Vec<Vector>>,
    nodes: Vec<NodeEntry>,
    strings: Vec<StringEntry>,
    node_strings: Vec<Vec<usize>>,
    node_index: HashMap<Point, usize>,
    line_index: HashMap<LineKey, Vec<usize>>,
    directions: Vec<Vector>,
    node_order: Vec<usize>,
    string_order: Vec<usize>,
    oracle: Option<Arc<dyn NetOracle>>,
}

impl PartialEq for NetTruncation {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.dimension == other.dimension
            && self.radius == other.radius
            && self.periods == other.periods
            && self.nodes == other.nodes
            && self.strings == other.strings
    }
}

impl fmt::Debug for NetTruncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NetTruncation")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .field("nodes", &self.nodes.len())
            .field("strings", &self.strings.len())
            .finish()
    }
}

/// Options for [`NetTruncation::assemble`].
#[derive(Default)]
pub struct Assembly {
    pub periods: Option<Vec<Vector>>,
    pub oracle: Option<Arc<dyn NetOracle>>,
    /// Skip the "every node lies on two strings" check (used for
    /// intermediate objects such as string-only truncations).
    pub allow_lonely_nodes: bool,
}

impl NetTruncation {
    /// Clips the strings, indexes everything and validates the result.
    pub fn assemble(
        name: &str,
        dimension: usize,
        radius: ExactScalar,
        nodes: Vec<(Point, usize)>,
        strings: Vec<(StringGeom, usize)>,
        opts: Assembly,
    ) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::Precondition("window radius must be positive".into()));
        }
        let mut nodes: Vec<NodeEntry> = nodes
            .into_iter()
            .filter(|(p, _)| p.in_box(&radius))
            .map(|(point, class)| NodeEntry { point, class })
            .collect();
        for n in &nodes {
            if n.point.dim() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: n.point.dim(),
                });
            }
        }
        nodes.sort_by(|a, b| a.point.cmp(&b.point));
        nodes.dedup_by(|a, b| a.point == b.point);

        let input = strings;
        let mut strings: Vec<StringEntry> = Vec::with_capacity(input.len());
        for (geom, class) in input {
            if geom.dim() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: geom.dim(),
                });
            }
            if let Some(clip) = geom.clip_to_box(&radius) {
                strings.push(StringEntry {
                    geom,
                    clip,
                    class,
                    nodes: Vec::new(),
                });
            }
        }
        strings.sort_by(|a, b| a.geom.cmp(&b.geom));
        strings.dedup_by(|a, b| a.geom == b.geom);

        let mut line_index: HashMap<LineKey, Vec<usize>> = HashMap::new();
        for (i, s) in strings.iter().enumerate() {
            line_index.entry(s.geom.key().clone()).or_default().push(i);
        }
        for ids in line_index.values() {
            check_colinear_disjoint(&strings, ids)?;
        }
        let mut directions: Vec<Vector> = strings.iter().map(|s| s.geom.direction().clone()).collect();
        directions.sort();
        directions.dedup();

        let node_index: HashMap<Point, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.point.clone(), i))
            .collect();
        let node_strings: Vec<Vec<usize>> = {
            use rayon::prelude::*;
            nodes
                .par_iter()
                .map(|n| {
                    let mut on = Vec::new();
                    for d in &directions {
                        let key = LineKey::through(&n.point, d).expect("nonzero direction");
                        if let Some(ids) = line_index.get(&key) {
                            on.extend(ids.iter().copied().filter(|&si| strings[si].geom.contains(&n.point)));
                        }
                    }
                    on
                })
                .collect()
        };
        for (ni, ss) in node_strings.iter().enumerate() {
            for &si in ss {
                strings[si].nodes.push(ni);
            }
            if !opts.allow_lonely_nodes && ss.len() < 2 {
                return Err(Error::Degenerate(format!(
                    "node {:?} lies on fewer than two strings",
                    nodes[ni].point
                )));
            }
        }
        {
            use rayon::prelude::*;
            strings.par_iter_mut().for_each(|s| {
                let geom = &s.geom;
                s.nodes.sort_by_cached_key(|&a| geom.param(&nodes[a].point));
            });
        }
        let mut node_order: Vec<usize> = (0..nodes.len()).collect();
        node_order.sort_by_cached_key(|&i| nodes[i].point.max_abs());
        let mut string_order: Vec<usize> = (0..strings.len()).collect();
        string_order.sort_by_cached_key(|&i| string_distance(&strings[i]));
        Ok(NetTruncation {
            name: name.to_string(),
            dimension,
            radius,
            periods: opts.periods,
            nodes,
            strings,
            node_strings,
            node_index,
            line_index,
            directions,
            node_order,
            string_order,
            oracle: opts.oracle,
        })
    }

    /// Nodes are the pairwise intersection points of the strings.
    pub fn from_strings(
        name: &str,
        dimension: usize,
        radius: ExactScalar,
        strings: Vec<(StringGeom, usize)>,
        opts: Assembly,
    ) -> Result<Self> {
        let geoms: Vec<&StringGeom> = strings.iter().map(|(g, _)| g).collect();
        let nodes = intersection_points(&geoms, &radius)
            .into_iter()
            .map(|p| (p, 0))
            .collect();
        Self::assemble(name, dimension, radius, nodes, strings, opts)
    }

    pub fn nodes(&self) -> &[NodeEntry] {
        &self.nodes
    }

    pub fn strings(&self) -> &[StringEntry] {
        &self.strings
    }

    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    pub fn node_id(&self, p: &Point) -> Option<usize> {
        self.node_index.get(p).copied()
    }

    /// Indices of the strings through node `i`.
    pub fn strings_at(&self, i: usize) -> &[usize] {
        &self.node_strings[i]
    }

    pub fn strings_on_line(&self, key: &LineKey) -> &[usize] {
        self.line_index.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn oracle(&self) -> Option<&Arc<dyn NetOracle>> {
        self.oracle.as_ref()
    }

    pub fn with_oracle(mut self, oracle: Option<Arc<dyn NetOracle>>) -> Self {
        self.oracle = oracle;
        self
    }

    /// Radius inside which membership queries are exact; `None` when an
    /// infinite oracle is attached.
    pub fn validity_radius(&self) -> Option<&ExactScalar> {
        match self.oracle {
            Some(_) => None,
            None => Some(&self.radius),
        }
    }

    /// Nodes in the box `[-r, r]^d`, nearest to the origin first.
    pub fn nodes_within(&self, r: &ExactScalar) -> impl Iterator<Item = (usize, &NodeEntry)> + '_ {
        let r = r.clone();
        self.node_order
            .iter()
            .map(|&i| (i, &self.nodes[i]))
            .filter(move |(_, n)| n.point.in_box(&r))
    }

    /// Strings that meet the box `[-r, r]^d`, nearest to the origin first.
    pub fn strings_within(&self, r: &ExactScalar) -> impl Iterator<Item = (usize, &StringEntry)> + '_ {
        let r = r.clone();
        self.string_order
            .iter()
            .map(|&i| (i, &self.strings[i]))
            .filter(move |(_, s)| s.geom.clip_to_box(&r).is_some())
    }

    /// Number of rays of the ray figure at node `i`.
    pub fn degree(&self, i: usize) -> usize {
        super::figure::node_rays(self, &self.nodes[i].point).len()
    }

    /// Neighbouring nodes along strings (consecutive nodes on a string).
    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &si in &self.node_strings[i] {
            let ns = &self.strings[si].nodes;
            if let Some(pos) = ns.iter().position(|&n| n == i) {
                if pos > 0 {
                    out.push(ns[pos - 1]);
                }
                if pos + 1 < ns.len() {
                    out.push(ns[pos + 1]);
                }
            }
        }
        out
    }

    /// Lines and pieces of lines making up the body on the line `key`, as
    /// parameter intervals inside the window.
    pub fn body_on_line(&self, key: &LineKey) -> Vec<(ExactScalar, ExactScalar)> {
        let mut iv: Vec<_> = self
            .strings_on_line(key)
            .iter()
            .map(|&i| self.strings[i].clip.clone())
            .collect();
        iv.sort();
        iv
    }

    /// Whether the segment of `line` between parameters `lo` and `hi` lies in
    /// the listed body.
    pub fn body_contains_piece(&self, key: &LineKey, lo: &ExactScalar, hi: &ExactScalar) -> bool {
        let mut reach = lo.clone();
        for (a, b) in self.body_on_line(key) {
            if a > reach {
                break;
            }
            if b > reach {
                reach = b;
            }
        }
        reach >= *hi
    }

    /// Listed strings containing `p`.
    pub fn strings_through_local(&self, p: &Point) -> Vec<StringGeom> {
        let mut out: Vec<StringGeom> = Vec::new();
        for d in &self.directions {
            let key = LineKey::through(p, d).expect("nonzero direction");
            for &i in self.strings_on_line(&key) {
                if self.strings[i].geom.contains(p) {
                    out.push(self.strings[i].geom.clone());
                }
            }
        }
        out
    }

    fn local_has_string(&self, s: &StringGeom) -> bool {
        self.strings_on_line(s.key())
            .iter()
            .any(|&i| self.strings[i].geom == *s)
    }
}

impl NetOracle for NetTruncation {
    fn dim(&self) -> usize {
        self.dimension
    }

    fn is_node(&self, p: &Point) -> bool {
        match &self.oracle {
            Some(o) => o.is_node(p),
            None => self.node_index.contains_key(p),
        }
    }

    fn has_string(&self, s: &StringGeom) -> bool {
        match &self.oracle {
            Some(o) => o.has_string(s),
            None => self.local_has_string(s),
        }
    }

    fn strings_through(&self, p: &Point) -> Vec<StringGeom> {
        match &self.oracle {
            Some(o) => o.strings_through(p),
            None => self.strings_through_local(p),
        }
    }
}

/// Sup-norm distance from the origin to the clipped piece, bounded below
/// by its nearest clip endpoint or node.
fn string_distance(s: &StringEntry) -> ExactScalar {
    let (a, b) = s.clipped_endpoints();
    std::cmp::min(a.max_abs(), b.max_abs())
}

fn check_colinear_disjoint(strings: &[StringEntry], ids: &[usize]) -> Result<()> {
    if ids.len() < 2 {
        return Ok(());
    }
    let bounds = |i: usize| (strings[i].geom.lo().cloned(), strings[i].geom.hi().cloned());
    let mut iv: Vec<_> = ids.iter().map(|&i| (bounds(i), i)).collect();
    // a missing lower bound sorts first
    iv.sort_by(|a, b| a.0 .0.cmp(&b.0 .0));
    for w in iv.windows(2) {
        let ((_, hi_a), a) = &w[0];
        let ((lo_b, _), b) = &w[1];
        let overlap = match (hi_a, lo_b) {
            (None, _) | (_, None) => true,
            (Some(h), Some(l)) => l < h,
        };
        if overlap {
            return Err(Error::OverlappingStrings(format!(
                "{:?} and {:?}",
                strings[*a].geom, strings[*b].geom
            )));
        }
    }
    Ok(())
}

/// Pairwise intersection points of the strings inside the box.
pub fn intersection_points(strings: &[&StringGeom], r: &ExactScalar) -> Vec<Point> {
    use rayon::prelude::*;
    let mut by_dir: HashMap<&Vector, Vec<&StringGeom>> = HashMap::new();
    for s in strings {
        by_dir.entry(s.direction()).or_default().push(s);
    }
    let mut groups: Vec<(&Vector, Vec<&StringGeom>)> = by_dir.into_iter().collect();
    groups.sort_by(|a, b| a.0.cmp(b.0));
    let mut pairs = Vec::new();
    for i in 0..groups.len() {
        for j in (i + 1)..groups.len() {
            pairs.push((i, j));
        }
    }
    let mut pts: Vec<Point> = pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let mut local = Vec::new();
            for a in &groups[i].1 {
                for b in &groups[j].1 {
                    if let crate::exact::Intersection::Point(p) = a.intersect(b) {
                        if p.in_box(r) {
                            local.push(p);
                        }
                    }
                }
            }
            local
        })
        .collect();
    // touching colinear pieces also meet at a point
    for (_, g) in &groups {
        for (i, a) in g.iter().enumerate() {
            for b in &g[i + 1..] {
                if let crate::exact::Intersection::Point(p) = a.intersect(b) {
                    if p.in_box(r) {
                        pts.push(p);
                    }
                }
            }
        }
    }
    // hashing first keeps the exact comparisons to the distinct points
    let unique: std::collections::HashSet<Point> = pts.into_iter().collect();
    let mut pts: Vec<Point> = unique.into_iter().collect();
    pts.sort();
    pts
}

/// Lattice translates of the motif strings that meet the window.
pub fn translate_strings(motif: &Motif, r: &ExactScalar) -> Result<Vec<(StringGeom, usize)>> {
    let lat = motif.lattice()?;
    let rf = r.to_f64();
    let mut out: Vec<(StringGeom, usize)> = Vec::new();
    for (class, s) in motif.string_reps.iter().enumerate() {
        let (reach, fixed) = match s.kind() {
            StringKind::Line => {
                let e = lat.coords(s.direction());
                let prim = primitive_integer(&e).ok_or_else(|| {
                    Error::NotRepresentable("string direction is not a lattice direction".into())
                })?;
                let i = (0..prim.len())
                    .filter(|&i| prim[i] != 0.into())
                    .min_by_key(|&i| num_traits::Signed::abs(&prim[i]))
                    .expect("nonzero");
                let steps: i64 = num_traits::ToPrimitive::to_i64(&num_traits::Signed::abs(&prim[i]))
                    .ok_or_else(|| Error::NotRepresentable("direction too large".into()))?;
                let reach = rf * (1.0 + s.direction().max_abs().to_f64()) + s.anchor().max_abs().to_f64();
                (reach, Some((i, steps)))
            }
            _ => {
                let (a, b) = s.endpoints();
                let m = [a, b]
                    .iter()
                    .flatten()
                    .map(|p| p.max_abs().to_f64())
                    .fold(0.0, f64::max);
                (rf + m, None)
            }
        };
        let mut ranges = lat.coefficient_bounds(reach);
        if let Some((i, steps)) = fixed {
            ranges[i] = (0, steps - 1);
        }
        for k in lattice_range(&ranges) {
            let t = lat.point(&k);
            let moved = ScaledIsometry::translation(t).apply_string(s)?;
            if moved.clip_to_box(r).is_some() {
                out.push((moved, class));
            }
        }
    }
    out.sort();
    out.dedup_by(|a, b| a.0 == b.0);
    Ok(out)
}

/// Lattice translates of the node representatives inside the window.
pub fn translate_nodes(motif: &Motif, r: &ExactScalar) -> Result<Vec<(Point, usize)>> {
    let lat = motif.lattice()?;
    let rf = r.to_f64();
    let mut out = Vec::new();
    for (class, p) in motif.node_reps.iter().enumerate() {
        let ranges = lat.coefficient_bounds(rf + p.max_abs().to_f64());
        for k in lattice_range(&ranges) {
            let q = &lat.point(&k) + p;
            if q.in_box(r) {
                out.push((q, class));
            }
        }
    }
    Ok(out)
}

/// The truncation of the periodic net of `motif` to `[-R, R]^d`.
pub fn generate(motif: &Motif, r: &ExactScalar) -> Result<NetTruncation> {
    motif.validate()?;
    let lat = motif.lattice()?;
    let need = 2.0 * lat.max_period_len();
    if r.to_f64() < need - 1e-12 {
        return Err(Error::WindowTooSmall(format!(
            "radius {} is below twice the longest period ({need:.4})",
            r
        )));
    }
    let strings = translate_strings(motif, r)?;
    let nodes = translate_nodes(motif, r)?;
    let oracle: Arc<dyn NetOracle> = Arc::new(PeriodicOracle::new(motif)?);
    NetTruncation::assemble(
        &motif.name,
        motif.dimension,
        r.clone(),
        nodes,
        strings,
        Assembly {
            periods: Some(motif.periods.clone()),
            oracle: Some(oracle),
            allow_lonely_nodes: false,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlib::catalog::catalog;

    fn r(n: i64) -> ExactScalar {
        ExactScalar::int(n)
    }

    #[test]
    fn z2_window_counts() {
        let t = generate(&catalog("Z2").unwrap(), &r(3)).unwrap();
        assert_eq!(t.nodes().len(), 49);
        assert_eq!(t.strings().len(), 14);
        assert!(t.strings().iter().all(|s| s.nodes.len() == 7));
    }

    #[test]
    fn too_small_window_is_rejected() {
        assert!(matches!(
            generate(&catalog("K4").unwrap(), &r(4)),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn nodes_are_exactly_the_string_intersections() {
        for name in ["Z2", "tri", "kag", "hex", "Scaff", "Bcu", "Z3", "Fcu", "Hxg"] {
            let m = catalog(name).unwrap();
            let rad = r(2 * m.lattice().unwrap().max_period_len().ceil() as i64);
            let t = generate(&m, &rad).unwrap();
            let geoms: Vec<&StringGeom> = t.strings().iter().map(|s| &s.geom).collect();
            let mut pts = intersection_points(&geoms, &rad);
            pts.sort();
            let mut nodes: Vec<Point> = t.nodes().iter().map(|n| n.point.clone()).collect();
            nodes.sort();
            assert_eq!(pts, nodes, "{name}");
        }
    }

    #[test]
    fn generation_is_monotone_in_radius() {
        let m = catalog("kag").unwrap();
        let small = generate(&m, &r(4)).unwrap();
        let big = generate(&m, &r(6)).unwrap();
        for n in small.nodes() {
            assert!(big.node_id(&n.point).is_some());
        }
        for s in small.strings() {
            assert!(big.has_string(&s.geom));
        }
    }

    #[test]
    fn adjacency_follows_parametrization() {
        let t = generate(&catalog("tri").unwrap(), &r(3)).unwrap();
        for s in t.strings() {
            let params: Vec<_> = s.nodes.iter().map(|&i| s.geom.param(&t.nodes()[i].point)).collect();
            assert!(params.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
