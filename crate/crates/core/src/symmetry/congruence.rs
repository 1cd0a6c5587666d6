//! Congruence and conformal isomorphism of truncations, chirality of finite
//! segment configurations, and strong transitivity of meshes.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::exact::{ExactScalar, Matrix, Point, ScaledIsometry, StringGeom};
use crate::netlib::figure::{ray_figure, FigureClass};
use crate::netlib::NetTruncation;

use super::candidates::{map_candidates, Orientation};
use super::certify::{certified_window, certify, CertifiedSymmetry};
use super::regular::class_representatives;

/// Target anchors examined per round of the search.
const ANCHOR_BATCH: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CongruenceOptions {
    pub allow_scaling: bool,
    pub allow_reflection: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Congruence {
    Equivalent(CertifiedSymmetry),
    /// A computable invariant differs.
    Distinct(String),
    /// Every candidate map was refuted on the window.
    DistinctUpTo { radius: ExactScalar, candidates: usize },
    Inconclusive(String),
}

/// Node indices used as anchors: class representatives of a periodic net or
/// the nodes of the inner half window otherwise.
fn anchors(net: &NetTruncation) -> Vec<usize> {
    if net.periods.is_some() {
        return class_representatives(net).into_iter().map(|(_, i)| i).collect();
    }
    let half = &net.radius * &ExactScalar::frac(1, 2);
    let mut ids: Vec<usize> = net.nodes_within(&half).map(|(i, _)| i).collect();
    ids.sort_by_key(|&i| {
        let p = &net.nodes()[i].point;
        (p.max_abs(), p.clone())
    });
    ids
}

/// Least squared internodal distance among the anchor nodes.
fn min_edge_sq(net: &NetTruncation, ids: &[usize]) -> Option<ExactScalar> {
    ids.iter()
        .flat_map(|&i| {
            let p = &net.nodes()[i].point;
            net.neighbours(i)
                .into_iter()
                .map(move |j| (&net.nodes()[j].point - p).norm_sq())
        })
        .min()
}

fn profile(net: &NetTruncation, ids: &[usize]) -> BTreeSet<(usize, FigureClass)> {
    ids.iter()
        .map(|&i| {
            let f = ray_figure(net, &net.nodes()[i].point);
            (f.degree(), f.class)
        })
        .collect()
}

/// Searches for an isometry (or similarity) from `a` onto `b`.
pub fn congruent(a: &NetTruncation, b: &NetTruncation, opts: CongruenceOptions) -> Congruence {
    if a.dimension != b.dimension {
        return Congruence::Distinct(format!("dimension {} vs {}", a.dimension, b.dimension));
    }
    let ids_a = anchors(a);
    let ids_b = anchors(b);
    let (Some(&pa), false) = (ids_a.first(), ids_b.is_empty()) else {
        return Congruence::Inconclusive("no anchor nodes in the window".into());
    };
    let prof_a = profile(a, &ids_a);
    let prof_b = profile(b, &ids_b);
    if a.periods.is_some() && b.periods.is_some() && prof_a != prof_b {
        let show = |p: &BTreeSet<(usize, FigureClass)>| {
            p.iter().map(|(d, f)| format!("{d}/{f}")).collect::<Vec<_>>().join(",")
        };
        return Congruence::Distinct(format!(
            "degree and figure {} vs {}",
            show(&prof_a),
            show(&prof_b)
        ));
    }
    let (Some(ea), Some(eb)) = (min_edge_sq(a, &ids_a), min_edge_sq(b, &ids_b)) else {
        return Congruence::Inconclusive("no edges at the anchor nodes".into());
    };
    let s = if opts.allow_scaling {
        &eb * &ea.inv().expect("positive length")
    } else if ea != eb {
        return Congruence::Distinct(format!("least edge length squared {ea} vs {eb}"));
    } else {
        ExactScalar::one()
    };
    let orient = if opts.allow_reflection {
        Orientation::Any
    } else {
        Orientation::Proper
    };
    let p = &a.nodes()[pa].point;
    let fa = ray_figure(a, p);
    // anchors are taken nearest first, a batch at a time, so a map found
    // early stops the search
    let mut cands: Vec<ScaledIsometry> = Vec::new();
    for batch in ids_b.chunks(ANCHOR_BATCH) {
        let fresh: Vec<Vec<ScaledIsometry>> = batch
            .par_iter()
            .map(|&qb| {
                let q = &b.nodes()[qb].point;
                let fb = ray_figure(b, q);
                if fb.degree() != fa.degree() {
                    return Vec::new();
                }
                map_candidates(p, &fa.rays, q, &fb.rays, &s, orient)
            })
            .collect();
        let start = cands.len();
        for m in fresh.into_iter().flatten() {
            if !cands.contains(&m) {
                cands.push(m);
            }
        }
        let found = cands[start..]
            .par_iter()
            .map(|m| certify(m, a, b))
            .find_first(CertifiedSymmetry::is_certified);
        if let Some(c) = found {
            return Congruence::Equivalent(c);
        }
    }
    if cands.is_empty() {
        return Congruence::Inconclusive("no candidate map matches the anchor figures".into());
    }
    Congruence::DistinctUpTo {
        radius: cands
            .iter()
            .map(|m| certified_window(m, a, b))
            .min()
            .expect("nonempty"),
        candidates: cands.len(),
    }
}

/// All segments through `p` or `q`, the union of two ray figures joined by
/// an edge.
pub fn double_ray_figure(net: &NetTruncation, p: &Point, q: &Point) -> Vec<StringGeom> {
    let mut out: Vec<StringGeom> = net.strings_through_local(p);
    out.extend(net.strings_through_local(q));
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiralityReport {
    /// Proper isometries from the configuration onto its mirror image.
    pub proper_maps: usize,
    /// Improper isometries from the configuration onto its mirror image.
    pub improper_maps: usize,
}

impl ChiralityReport {
    pub fn is_chiral(&self) -> bool {
        self.proper_maps == 0
    }
}

fn endpoints(segs: &[StringGeom]) -> Vec<Point> {
    let mut pts: Vec<Point> = segs
        .iter()
        .flat_map(|s| {
            let (a, b) = s.endpoints();
            [a, b]
        })
        .flatten()
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

/// Exhaustive search for isometries of space taking the segment set `segs`
/// onto its image under `mirror`.
pub fn chirality(segs: &[StringGeom], mirror: &ScaledIsometry) -> ChiralityReport {
    let target: BTreeSet<StringGeom> = segs
        .iter()
        .map(|s| mirror.apply_string(s).expect("dimension"))
        .collect();
    let src = endpoints(segs);
    let dst = endpoints(&target.iter().cloned().collect::<Vec<_>>());
    let mut report = ChiralityReport {
        proper_maps: 0,
        improper_maps: 0,
    };
    if src.len() != dst.len() || src.len() < 4 {
        return report;
    }
    // an affine frame among the endpoints
    let a = &src[0];
    let Some((b, c)) = (1..src.len())
        .flat_map(|i| ((i + 1)..src.len()).map(move |j| (i, j)))
        .map(|(i, j)| (&src[i], &src[j]))
        .find(|(b, c)| !(*b - a).cross(&(*c - a)).is_zero())
    else {
        return report;
    };
    let u1 = b - a;
    let u2 = c - a;
    let u3 = u1.cross(&u2);
    let frame_inv = Matrix::from_columns(&[u1.clone(), u2.clone(), u3])
        .and_then(|m| m.inverse())
        .expect("independent frame");
    let mut seen: Vec<ScaledIsometry> = Vec::new();
    for a2 in &dst {
        for b2 in &dst {
            for c2 in &dst {
                let w1 = b2 - a2;
                let w2 = c2 - a2;
                if w1.norm_sq() != u1.norm_sq() || w2.norm_sq() != u2.norm_sq() || w1.dot(&w2) != u1.dot(&u2) {
                    continue;
                }
                let w3 = w1.cross(&w2);
                for w in [w3.clone(), -&w3] {
                    let m = &Matrix::from_columns(&[w1.clone(), w2.clone(), w]).expect("3d") * &frame_inv;
                    if m.similarity_factor() != Some(ExactScalar::one()) {
                        continue;
                    }
                    let t = a2 - &m.apply(a);
                    let map = ScaledIsometry::new(m, t).expect("orthogonal");
                    if seen.contains(&map) {
                        continue;
                    }
                    let image: BTreeSet<StringGeom> =
                        segs.iter().map(|s| map.apply_string(s).expect("dimension")).collect();
                    if image == target {
                        if map.orientation() > 0 {
                            report.proper_maps += 1;
                        } else {
                            report.improper_maps += 1;
                        }
                        seen.push(map);
                    }
                }
            }
        }
    }
    report
}

/// The map `x ↦ −x₁ e₁ + x₂ e₂ + …`.
pub fn coordinate_mirror(dim: usize) -> ScaledIsometry {
    let rows: Vec<Vec<ExactScalar>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| match (i == j, i) {
                    (false, _) => ExactScalar::zero(),
                    (true, 0) => ExactScalar::int(-1),
                    (true, _) => ExactScalar::one(),
                })
                .collect()
        })
        .collect();
    ScaledIsometry::orthogonal(Matrix::from_rows(rows).expect("square")).expect("orthogonal")
}

/// A pair of nodes with its forced image pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSample {
    pub from: (Point, Point),
    pub to: (Point, Point),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongTransitivity {
    pub holds: bool,
    /// Per sample: the certified map, or the most informative refutation.
    pub results: Vec<Result<CertifiedSymmetry, String>>,
}

/// For each sample, the similarities forced by `p1 ↦ q1`, `p2 ↦ q2` are
/// certified on the net.
pub fn strongly_transitive(net: &NetTruncation, samples: &[PairSample]) -> StrongTransitivity {
    let results: Vec<Result<CertifiedSymmetry, String>> = samples
        .par_iter()
        .map(|smp| {
            let (p1, p2) = &smp.from;
            let (q1, q2) = &smp.to;
            let u = p2 - p1;
            let v = q2 - q1;
            if u.is_zero() || v.is_zero() {
                return Err("sample pair is degenerate".to_string());
            }
            let s = &v.norm_sq() * &u.norm_sq().inv().expect("nonzero");
            let fp = ray_figure(net, p1);
            let fq = ray_figure(net, q1);
            let cands: Vec<ScaledIsometry> = map_candidates(p1, &fp.rays, q1, &fq.rays, &s, Orientation::Any)
                .into_iter()
                .filter(|m| m.apply_vector(&u).ok().as_ref() == Some(&v))
                .collect();
            if cands.is_empty() {
                return Err(format!(
                    "no similarity of ratio squared {s} maps the figure at {p1:?} onto the figure at {q1:?}"
                ));
            }
            let mut last = None;
            for m in cands {
                let c = certify(&m, net, net);
                if c.is_certified() {
                    return Ok(c);
                }
                last = Some(c);
            }
            let c = last.expect("nonempty");
            Err(format!("forced map refuted: {}", c.witness().expect("refuted")))
        })
        .collect();
    StrongTransitivity {
        holds: results.iter().all(Result::is_ok),
        results,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlib::{catalog, generate};

    fn net(name: &str, r: i64) -> NetTruncation {
        generate(&catalog(name).unwrap(), &ExactScalar::int(r)).unwrap()
    }

    #[test]
    fn scaff_and_z3_differ_in_degree() {
        let c = congruent(&net("Scaff", 4), &net("Z3", 4), CongruenceOptions::default());
        assert!(matches!(c, Congruence::Distinct(_)));
    }

    #[test]
    fn rotated_scaled_grid_is_conformal() {
        let z2 = catalog("Z2").unwrap();
        let m = Matrix::from_int_rows(&[&[1, -1], &[1, 1]]).unwrap();
        let map = ScaledIsometry::new(m, Point::zero(2)).unwrap();
        let turned = z2.transformed(&map, "Z2-turned").unwrap();
        let a = net("Z2", 4);
        let b = generate(&turned, &ExactScalar::int(6)).unwrap();
        let opts = CongruenceOptions {
            allow_scaling: true,
            allow_reflection: false,
        };
        assert!(matches!(congruent(&a, &b, opts), Congruence::Equivalent(_)));
        assert!(!matches!(congruent(&a, &b, CongruenceOptions::default()), Congruence::Equivalent(_)));
    }

    #[test]
    fn grid_is_congruent_to_itself() {
        let a = net("Z2", 3);
        match congruent(&a, &a, CongruenceOptions::default()) {
            Congruence::Equivalent(c) => assert!(c.is_certified()),
            other => panic!("{other:?}"),
        }
    }
}
