//! The minimal extension of a net whose scaling group contains given
//! dilations, at finite word depth.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, LineKey, Point, ScaledIsometry, StringGeom};
use crate::netlib::scaling::BodyIndex;
use crate::netlib::truncation::intersection_points;
use crate::netlib::{Assembly, NetTruncation};

use super::cover::cover_closed;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub word_depth: u32,
    pub scalings: usize,
    /// Lines on which images of distinct strings were merged.
    pub lines_merged: usize,
    pub nodes_in: usize,
    pub nodes_out: usize,
    /// Images of input nodes inside the window.
    pub orbit_nodes: usize,
    /// Orbit points that are not output nodes (empty when node inclusion holds).
    pub missing_orbit_nodes: Vec<Point>,
    /// Output nodes outside the orbit, created by new intersections.
    pub extra_intersection_nodes: usize,
    /// Cover pieces that reach the window boundary.
    pub window_truncated: usize,
    /// The window on which invariance was checked.
    pub invariance_checked_radius: ExactScalar,
    /// A generator image of the depth `k − 1` extension missing from depth `k`.
    pub invariance_witness: Option<String>,
}

impl ExtensionReport {
    pub fn node_inclusion(&self) -> bool {
        self.missing_orbit_nodes.is_empty()
    }

    pub fn invariant(&self) -> bool {
        self.invariance_witness.is_none()
    }
}

/// All products `∏ gᵢ^eᵢ` with `Σ|eᵢ| ≤ depth`, ascending.
pub fn scaling_words(gens: &[ExactScalar], depth: u32) -> Result<Vec<ExactScalar>> {
    for g in gens {
        if !g.is_positive() {
            return Err(Error::Precondition(format!("scaling {g} is not positive")));
        }
    }
    let mut words: BTreeSet<ExactScalar> = BTreeSet::from([ExactScalar::one()]);
    let mut frontier = words.clone();
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for w in &frontier {
            for g in gens {
                next.insert(w * g);
                next.insert(w * &g.inv()?);
            }
        }
        frontier = next.difference(&words).cloned().collect();
        words.extend(frontier.iter().cloned());
    }
    Ok(words.into_iter().collect())
}

/// Images of the strings under the scalings, merged per line by minimal
/// covers of their clipped parameter intervals.
fn covered_strings(
    strings: &[StringGeom],
    words: &[ExactScalar],
    r: &ExactScalar,
) -> Result<(Vec<StringGeom>, usize, usize)> {
    let dim = strings.first().map(StringGeom::dim).unwrap_or(2);
    // per line: clipped interval and whether the piece is unbounded below/above there
    let mut lines: BTreeMap<LineKey, Vec<((ExactScalar, ExactScalar), bool, bool)>> = BTreeMap::new();
    for u in words {
        let d = ScaledIsometry::dilation(dim, u.clone())?;
        for s in strings {
            let img = d.apply_string(s)?;
            if let Some((lo, hi)) = img.clip_to_box(r) {
                let open_lo = img.lo().is_none_or(|l| *l < lo);
                let open_hi = img.hi().is_none_or(|h| *h > hi);
                lines.entry(img.key().clone()).or_default().push(((lo, hi), open_lo, open_hi));
            }
        }
    }
    let results: Vec<(Vec<StringGeom>, bool, usize)> = lines
        .into_par_iter()
        .map(|(key, pieces)| {
            let mut uniq: Vec<_> = pieces.clone();
            uniq.sort_by(|a, b| a.0.cmp(&b.0));
            uniq.dedup_by(|a, b| a.0 == b.0);
            let iv: Vec<(ExactScalar, ExactScalar)> = uniq.iter().map(|p| p.0.clone()).collect();
            let (cover, class_map) = cover_closed(&iv);
            let mut out = Vec::new();
            let mut truncated = 0;
            for (c, (lo, hi)) in cover.iter().enumerate() {
                let members = || uniq.iter().zip(&class_map).filter(move |(_, &k)| k == c).map(|(p, _)| p);
                // a member that leaves the window at an end keeps that end open
                let open_lo = members().any(|p| p.1 && p.0 .0 == *lo);
                let open_hi = members().any(|p| p.2 && p.0 .1 == *hi);
                if open_lo || open_hi {
                    truncated += 1;
                }
                let geom = StringGeom::with_key(
                    key.clone(),
                    (!open_lo).then(|| lo.clone()),
                    (!open_hi).then(|| hi.clone()),
                );
                if let Ok(g) = geom {
                    out.push(g);
                }
            }
            let merged = cover.len() < uniq.len();
            (out, merged, truncated)
        })
        .collect();
    let merged = results.iter().filter(|r| r.1).count();
    let truncated = results.iter().map(|r| r.2).sum();
    Ok((results.into_iter().flat_map(|r| r.0).collect(), merged, truncated))
}

/// Strings and nodes of the extension at one word depth.
fn extension(net: &NetTruncation, words: &[ExactScalar], r: &ExactScalar) -> Result<(NetTruncation, usize, usize)> {
    let strings: Vec<StringGeom> = net.strings().iter().map(|s| s.geom.clone()).collect();
    let (out, merged, truncated) = covered_strings(&strings, words, r)?;
    let refs: Vec<&StringGeom> = out.iter().collect();
    let nodes = intersection_points(&refs, r).into_iter().map(|p| (p, 0)).collect();
    let ext = NetTruncation::assemble(
        &format!("{}_U", net.name),
        net.dimension,
        r.clone(),
        nodes,
        out.into_iter().map(|s| (s, 0)).collect(),
        Assembly {
            periods: None,
            oracle: None,
            allow_lonely_nodes: true,
        },
    )?;
    Ok((ext, merged, truncated))
}

/// The extension `N_U` truncated to `[-R, R]^d`, where `U` is approximated
/// by the words of length at most `word_depth` in the generators.
pub fn extend_net(
    net: &NetTruncation,
    gens: &[ExactScalar],
    word_depth: u32,
    r: &ExactScalar,
) -> Result<(NetTruncation, ExtensionReport)> {
    if !r.is_positive() {
        return Err(Error::Precondition("window radius must be positive".into()));
    }
    let words = scaling_words(gens, word_depth)?;
    let (ext, lines_merged, window_truncated) = extension(net, &words, r)?;

    let mut orbit: BTreeSet<Point> = BTreeSet::new();
    for u in &words {
        let d = ScaledIsometry::dilation(net.dimension, u.clone())?;
        for n in net.nodes() {
            let q = d.apply_point(&n.point)?;
            if q.in_box(r) {
                orbit.insert(q);
            }
        }
    }
    let missing_orbit_nodes: Vec<Point> = orbit.iter().filter(|q| ext.node_id(q).is_none()).cloned().collect();
    let extra_intersection_nodes = ext.nodes().iter().filter(|n| !orbit.contains(&n.point)).count();

    // invariance: each generator maps the depth k − 1 extension on the inner
    // window into the depth k extension
    let stretch = gens
        .iter()
        .map(|g| std::cmp::max(g.clone(), g.inv().expect("positive")))
        .max()
        .unwrap_or_else(ExactScalar::one);
    let inner = r.checked_div(&stretch)?;
    let invariance_witness = if word_depth == 0 || gens.is_empty() {
        None
    } else {
        let prev_words = scaling_words(gens, word_depth - 1)?;
        let (prev, _, _) = extension(net, &prev_words, r)?;
        invariance_failure(&prev, &ext, gens, &inner)?
    };

    let report = ExtensionReport {
        word_depth,
        scalings: words.len(),
        lines_merged,
        nodes_in: net.nodes().len(),
        nodes_out: ext.nodes().len(),
        orbit_nodes: orbit.len(),
        missing_orbit_nodes,
        extra_intersection_nodes,
        window_truncated,
        invariance_checked_radius: inner,
        invariance_witness,
    };
    Ok((ext, report))
}

fn invariance_failure(
    prev: &NetTruncation,
    ext: &NetTruncation,
    gens: &[ExactScalar],
    inner: &ExactScalar,
) -> Result<Option<String>> {
    let body = BodyIndex::new(ext.strings().iter().map(|s| (&s.geom, s.clip.clone())));
    let r = &ext.radius;
    for g in gens {
        for u in [g.clone(), g.inv()?] {
            let d = ScaledIsometry::dilation(prev.dimension, u.clone())?;
            for (_, n) in prev.nodes_within(inner) {
                let q = d.apply_point(&n.point)?;
                if ext.node_id(&q).is_none() {
                    return Ok(Some(format!("node {:?} maps by {u} to {q:?}, which is not a node", n.point)));
                }
            }
            for s in prev.strings() {
                let Some(piece) = s.geom.clip_to_box(inner).and_then(|(a, b)| (a < b).then_some((a, b))) else {
                    continue;
                };
                let img = d.apply_string(&s.geom)?;
                let (p, q) = (d.apply_point(&s.geom.point_at(&piece.0))?, d.apply_point(&s.geom.point_at(&piece.1))?);
                debug_assert!(p.in_box(r) && q.in_box(r));
                let (t0, t1) = (img.param(&p), img.param(&q));
                let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
                if !body.covers(img.key(), &lo, &hi) {
                    return Ok(Some(format!("string {:?} maps by {u} outside the body", s.geom)));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Vector;
    use crate::netlib::{catalog, generate};

    fn net(name: &str, r: i64) -> NetTruncation {
        generate(&catalog(name).unwrap(), &ExactScalar::int(r)).unwrap()
    }

    #[test]
    fn words_of_a_single_generator() {
        let w = scaling_words(&[ExactScalar::int(2)], 2).unwrap();
        let expect: Vec<ExactScalar> = [(1, 4), (1, 2), (1, 1), (2, 1), (4, 1)]
            .iter()
            .map(|&(a, b)| ExactScalar::frac(a, b))
            .collect();
        assert_eq!(w, expect);
        assert!(scaling_words(&[ExactScalar::int(-2)], 1).is_err());
    }

    #[test]
    fn dyadic_extension_of_the_grid() {
        let r = ExactScalar::int(2);
        let (ext, rep) = extend_net(&net("Z2", 2), &[ExactScalar::int(2)], 2, &r).unwrap();
        let quarter = Point::new(vec![ExactScalar::frac(1, 4), ExactScalar::frac(1, 4)]);
        assert!(ext.node_id(&quarter).is_some());
        assert!(rep.node_inclusion());
        assert!(rep.invariant(), "{:?}", rep.invariance_witness);
    }

    #[test]
    fn touching_images_merge_on_a_line() {
        let seg = StringGeom::segment(&Point::from_ints(&[1, 0]), &Point::from_ints(&[2, 0])).unwrap();
        let cross = StringGeom::line(&Point::from_ints(&[1, 0]), &Vector::from_ints(&[0, 1])).unwrap();
        let r = ExactScalar::int(4);
        let base = NetTruncation::from_strings("seg", 2, r.clone(), vec![(seg, 0), (cross, 1)], Assembly::default()).unwrap();
        let (ext, rep) = extend_net(&base, &[ExactScalar::frac(1, 2)], 1, &r).unwrap();
        let axis = LineKey::through(&Point::zero(2), &Vector::from_ints(&[1, 0])).unwrap();
        assert_eq!(
            ext.body_on_line(&axis),
            vec![(ExactScalar::frac(1, 2), ExactScalar::int(4))]
        );
        assert_eq!(rep.lines_merged, 1);
    }

    #[test]
    fn trivial_group_changes_nothing() {
        let r = ExactScalar::int(3);
        let n = net("Z2", 3);
        let (ext, rep) = extend_net(&n, &[ExactScalar::one()], 2, &r).unwrap();
        let pts = |t: &NetTruncation| t.nodes().iter().map(|n| n.point.clone()).collect::<Vec<_>>();
        assert_eq!(pts(&ext), pts(&n));
        let geoms = |t: &NetTruncation| t.strings().iter().map(|s| s.geom.clone()).collect::<Vec<_>>();
        assert_eq!(geoms(&ext), geoms(&n));
        assert_eq!(rep.extra_intersection_nodes, 0);
    }

    #[test]
    fn extension_is_monotone_in_depth() {
        let r = ExactScalar::int(4);
        let n = net("kag", 4);
        let (a, _) = extend_net(&n, &[ExactScalar::int(3)], 1, &r).unwrap();
        let (b, rep) = extend_net(&n, &[ExactScalar::int(3)], 2, &r).unwrap();
        assert!(rep.node_inclusion() && rep.invariant());
        for s in a.strings() {
            assert!(b.body_contains_piece(s.geom.key(), &s.clip.0, &s.clip.1));
        }
    }
}
