//! Necessary conditions for string-length preserving placements of the
//! triadic kagome mesh.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, Point};
use crate::netlib::NetTruncation;

use super::curve::{cross, dot, norm, scale, sub, P2};
use super::placement::Placement;

/// Default angle tolerance in radians.
pub const ANGLE_TOL: f64 = 1e-6;
/// Largest stencil step along a string.
pub const STENCIL_STEP: f64 = 1e-3;

/// One-sided third-order derivative along `d` at `p`:
/// `(−11f0 + 18f1 − 9f2 + 2f3) / 6h`.
pub fn one_sided_tangent(q: &dyn Placement, p: P2, d: P2, h: f64) -> P2 {
    let f = |k: f64| q.eval([p[0] + k * h * d[0], p[1] + k * h * d[1]]);
    let (f0, f1, f2, f3) = (f(0.0), f(1.0), f(2.0), f(3.0));
    let c = |i: usize| (-11.0 * f0[i] + 18.0 * f1[i] - 9.0 * f2[i] + 2.0 * f3[i]) / (6.0 * h);
    [c(0), c(1)]
}

fn angle(u: P2, v: P2) -> f64 {
    cross(u, v).abs().atan2(dot(u, v))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RigidityWitness {
    /// The placed rays at `node` meet at a different angle.
    Angle { node: Vec<f64>, original: f64, placed: f64 },
    /// A placed string leaves `node` at a speed other than 1.
    Speed { node: Vec<f64>, direction: Vec<f64>, speed: f64 },
    /// Placed equilateral triangles stay unequal at every sampled scale.
    Ratio { side: f64, ratio: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum RigidityVerdict {
    ConsistentWithRigidity,
    Violation { witness: RigidityWitness },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityReport {
    pub samples: usize,
    pub rays: usize,
    pub max_angle_error: f64,
    pub max_speed_error: f64,
    /// Largest side ratio of placed equilateral node triples, per side
    /// length, finest scale first.
    pub ratios: Vec<(f64, f64)>,
    pub tol: f64,
    pub verdict: RigidityVerdict,
}

impl RigidityReport {
    pub fn consistent(&self) -> bool {
        self.verdict == RigidityVerdict::ConsistentWithRigidity
    }
}

fn to2(p: &Point) -> P2 {
    let c = p.to_f64();
    [c[0], c[1]]
}

/// The `n` nodes nearest the origin that lie on at least two strings.
pub fn rigidity_samples(net: &NetTruncation, n: usize) -> Vec<Point> {
    let mut nodes: Vec<(f64, usize)> = (0..net.nodes().len())
        .filter(|&i| net.strings_at(i).len() >= 2)
        .map(|i| (norm(to2(&net.nodes()[i].point)), i))
        .collect();
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    nodes.into_iter().take(n).map(|(_, i)| net.nodes()[i].point.clone()).collect()
}

/// Unit ray directions at node `i` with the stencil step for each.
fn rays(net: &NetTruncation, i: usize) -> Vec<(P2, f64)> {
    let mut out = Vec::new();
    for &si in net.strings_at(i) {
        let s = &net.strings()[si];
        let pos = s.nodes.iter().position(|&x| x == i).expect("node on string");
        let d = to2(&Point::new(s.geom.direction().coords().to_vec()));
        let d = scale(d, 1.0 / norm(d));
        let here = to2(&net.nodes()[i].point);
        for (next, sign) in [(pos.checked_add(1), 1.0), (pos.checked_sub(1), -1.0)] {
            if let Some(&j) = next.and_then(|k| s.nodes.get(k)) {
                let gap = norm(sub(to2(&net.nodes()[j].point), here));
                out.push((scale(d, sign), STENCIL_STEP.min(gap / 4.0)));
            }
        }
    }
    out
}

struct NodeCheck {
    rays: usize,
    angle: (f64, Option<RigidityWitness>),
    speed: (f64, Option<RigidityWitness>),
}

fn check_node(q: &dyn Placement, net: &NetTruncation, i: usize, tol: f64) -> NodeCheck {
    let p = to2(&net.nodes()[i].point);
    let rs = rays(net, i);
    let placed: Vec<P2> = rs.iter().map(|&(d, h)| one_sided_tangent(q, p, d, h)).collect();
    let mut speed = (0.0, None);
    for (v, (d, _)) in placed.iter().zip(&rs) {
        let e = (norm(*v) - 1.0).abs();
        if e > speed.0 {
            speed = (e, (e > tol).then(|| RigidityWitness::Speed {
                node: p.to_vec(),
                direction: d.to_vec(),
                speed: norm(*v),
            }));
        }
    }
    let mut ang = (0.0, None);
    for a in 0..rs.len() {
        for b in a + 1..rs.len() {
            let (original, now) = (angle(rs[a].0, rs[b].0), angle(placed[a], placed[b]));
            let e = (original - now).abs();
            if e > ang.0 {
                ang = (e, (e > tol).then(|| RigidityWitness::Angle { node: p.to_vec(), original, placed: now }));
            }
        }
    }
    NodeCheck { rays: rs.len(), angle: ang, speed }
}

/// Equilateral triples `(n0, a, b)` of string-graph neighbours at the
/// sampled nodes, grouped by squared side length.
fn equilateral_triples(net: &NetTruncation, ids: &[usize]) -> BTreeMap<ExactScalar, Vec<[usize; 3]>> {
    let mut out: BTreeMap<ExactScalar, Vec<[usize; 3]>> = BTreeMap::new();
    let pt = |i: usize| &net.nodes()[i].point;
    for &i in ids {
        let nb = net.neighbours(i);
        for (x, &a) in nb.iter().enumerate() {
            for &b in &nb[x + 1..] {
                let da = (pt(a) - pt(i)).norm_sq();
                if da == (pt(b) - pt(i)).norm_sq() && da == (pt(b) - pt(a)).norm_sq() {
                    out.entry(da).or_default().push([i, a, b]);
                }
            }
        }
    }
    out
}

/// Estimates the placed string tangents at each sample node and compares
/// angles and speeds with the original; then compares the placed sides of
/// equilateral node triples at every available scale.
///
/// A violation proves the placement is not string-length preserving or
/// not smooth at the node. Consistency proves nothing.
pub fn kagome_rigidity_probe(
    q: &dyn Placement,
    net: &NetTruncation,
    samples: &[Point],
    tol: f64,
) -> Result<RigidityReport> {
    if net.dimension != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: net.dimension });
    }
    let ids = samples
        .iter()
        .map(|p| {
            net.node_id(p).ok_or_else(|| {
                Error::WindowTooSmall(format!("sample {:?} is not a node of the truncation", p.to_f64()))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let checks: Vec<NodeCheck> = ids.par_iter().map(|&i| check_node(q, net, i, tol)).collect();
    let pick = |f: fn(&NodeCheck) -> &(f64, Option<RigidityWitness>)| {
        checks
            .iter()
            .map(f)
            .fold((0.0, None), |acc: (f64, Option<RigidityWitness>), c| {
                (acc.0.max(c.0), acc.1.or_else(|| c.1.clone()))
            })
    };
    let (max_angle_error, angle_w) = pick(|c| &c.angle);
    let (max_speed_error, speed_w) = pick(|c| &c.speed);
    let ratios: Vec<(f64, f64)> = equilateral_triples(net, &ids)
        .into_iter()
        .map(|(side_sq, triples)| {
            let worst = triples
                .iter()
                .map(|t| {
                    let [a, b, c] = t.map(|i| q.eval(to2(&net.nodes()[i].point)));
                    let d = [norm(sub(b, a)), norm(sub(c, b)), norm(sub(c, a))];
                    d.iter().copied().fold(0.0, f64::max) / d.iter().copied().fold(f64::INFINITY, f64::min)
                })
                .fold(1.0, f64::max);
            (side_sq.to_f64().sqrt(), worst)
        })
        .collect();
    let ratio_w = (!ratios.is_empty() && ratios.iter().all(|r| r.1 > 1.0 + tol)).then(|| {
        let (side, ratio) = ratios[0];
        RigidityWitness::Ratio { side, ratio }
    });
    let verdict = match angle_w.or(speed_w).or(ratio_w) {
        Some(witness) => RigidityVerdict::Violation { witness },
        None => RigidityVerdict::ConsistentWithRigidity,
    };
    Ok(RigidityReport {
        samples: ids.len(),
        rays: checks.iter().map(|c| c.rays).sum(),
        max_angle_error,
        max_speed_error,
        ratios,
        tol,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flexlab::placement::{nonisometric_family, FnPlacement, LinearPlacement};
    use crate::meshops::scaling_union;

    fn triadic() -> NetTruncation {
        scaling_union("kag", 3, 1, &ExactScalar::int(2)).unwrap().net
    }

    #[test]
    fn stencil_is_exact_on_quadratics() {
        let q = FnPlacement(|p: P2| [p[0] * p[0], p[0] + p[1]]);
        let v = one_sided_tangent(&q, [0.5, 0.0], [1.0, 0.0], 0.1);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isometries_are_consistent() {
        let net = triadic();
        let s = rigidity_samples(&net, 12);
        for q in [LinearPlacement::identity(), LinearPlacement::rotation(0.3), LinearPlacement::isometry(2.0, true, [0.5, -1.0])] {
            let r = kagome_rigidity_probe(&q, &net, &s, ANGLE_TOL).unwrap();
            assert!(r.consistent(), "{r:?}");
            assert!(!r.ratios.is_empty());
        }
    }

    #[test]
    fn shear_distorts_angles() {
        let net = triadic();
        let s = rigidity_samples(&net, 12);
        let r = kagome_rigidity_probe(&LinearPlacement::shear(0.2), &net, &s, ANGLE_TOL).unwrap();
        assert!(matches!(r.verdict, RigidityVerdict::Violation { witness: RigidityWitness::Angle { .. } }));
        assert!(r.ratios.iter().all(|x| x.1 > 1.01));
    }

    #[test]
    fn the_catalogue_is_rejected() {
        let net = triadic();
        let s = rigidity_samples(&net, 12);
        for (name, q) in nonisometric_family() {
            let r = kagome_rigidity_probe(&q, &net, &s, ANGLE_TOL).unwrap();
            assert!(!r.consistent(), "{name}");
        }
    }

    #[test]
    fn samples_must_be_nodes() {
        let net = triadic();
        let far = Point::from_ints(&[100, 0]);
        assert!(kagome_rigidity_probe(&LinearPlacement::identity(), &net, &[far], ANGLE_TOL).is_err());
    }
}
