//! Transitivity, local rotation groups and regularity of periodic nets.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, Point, ScaledIsometry};
use crate::netlib::figure::{ray_figure, FigureClass, RayFigure};
use crate::netlib::NetTruncation;

use super::candidates::{map_candidates, Orientation};
use super::certify::{certify_symmetry, CertifiedSymmetry};

/// Node of each translation class closest to the origin (ties broken
/// lexicographically).
pub fn class_representatives(net: &NetTruncation) -> Vec<(usize, usize)> {
    let mut best: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for (i, n) in net.nodes().iter().enumerate() {
        let key = |j: usize| {
            let p = &net.nodes()[j].point;
            (p.max_abs(), p.clone())
        };
        match best.get(&n.class) {
            Some(&j) if key(j) <= key(i) => {}
            _ => {
                best.insert(n.class, i);
            }
        }
    }
    best.into_iter().collect()
}

/// Rotations of the ray figure at `p`, each certified on the net.
pub fn local_rotations(net: &NetTruncation, p: &Point) -> Result<Vec<CertifiedSymmetry>> {
    if net.node_id(p).is_none() {
        return Err(Error::Precondition(format!("{p:?} is not a node of the truncation")));
    }
    let fig = ray_figure(net, p);
    let cands = map_candidates(p, &fig.rays, p, &fig.rays, &ExactScalar::one(), Orientation::Proper);
    Ok(cands.par_iter().map(|m| certify_symmetry(m, net)).collect())
}

/// Order of the linear part of an isometry (1 to 12), 0 if larger.
pub fn rotation_order(map: &ScaledIsometry) -> usize {
    let m = map.linear();
    let mut acc = m.clone();
    for k in 1..=12 {
        if acc.is_identity() {
            return k;
        }
        acc = &acc * m;
    }
    0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPair {
    pub from: usize,
    pub to: usize,
    /// Certified map, or the last refuted candidate.
    pub symmetry: Option<CertifiedSymmetry>,
}

impl ClassPair {
    pub fn holds(&self) -> bool {
        self.symmetry.as_ref().is_some_and(|s| s.is_certified())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityReport {
    pub transitive: bool,
    pub pairs: Vec<ClassPair>,
}

impl TransitivityReport {
    pub fn failure(&self) -> Option<&ClassPair> {
        self.pairs.iter().find(|p| !p.holds())
    }
}

fn require_periodic(net: &NetTruncation) -> Result<()> {
    if net.periods.is_none() {
        return Err(Error::Precondition(
            "transitivity is checked through translation classes of a periodic net".into(),
        ));
    }
    Ok(())
}

/// Finds a certified isometry `p -> q` of the net, trying the translation first.
pub(crate) fn isometry_between(net: &NetTruncation, p: &Point, q: &Point, fp: &RayFigure, fq: &RayFigure) -> Option<CertifiedSymmetry> {
    let shift = ScaledIsometry::translation(q - p);
    let first = certify_symmetry(&shift, net);
    if first.is_certified() {
        return Some(first);
    }
    let mut last = Some(first);
    for m in map_candidates(p, &fp.rays, q, &fq.rays, &ExactScalar::one(), Orientation::Any) {
        let c = certify_symmetry(&m, net);
        if c.is_certified() {
            return Some(c);
        }
        last = Some(c);
    }
    last
}

/// For each ordered pair of node classes, an isometry of the net taking the
/// representative of one class to the other.
pub fn check_transitive(net: &NetTruncation) -> Result<TransitivityReport> {
    require_periodic(net)?;
    let reps = class_representatives(net);
    let figs: Vec<RayFigure> = reps
        .iter()
        .map(|&(_, i)| ray_figure(net, &net.nodes()[i].point))
        .collect();
    let mut jobs = Vec::new();
    for a in 0..reps.len() {
        for b in 0..reps.len() {
            jobs.push((a, b));
        }
    }
    let pairs: Vec<ClassPair> = jobs
        .par_iter()
        .map(|&(a, b)| {
            let p = &net.nodes()[reps[a].1].point;
            let q = &net.nodes()[reps[b].1].point;
            let symmetry = if figs[a].rays.len() != figs[b].rays.len() {
                None
            } else {
                isometry_between(net, p, q, &figs[a], &figs[b])
            };
            ClassPair {
                from: reps[a].0,
                to: reps[b].0,
                symmetry,
            }
        })
        .collect();
    Ok(TransitivityReport {
        transitive: pairs.iter().all(ClassPair::holds),
        pairs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "kebab-case")]
pub enum Verdict {
    Regular,
    NotRegular(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Check {
    fn ok() -> Self {
        Check { holds: true, witness: None }
    }
    fn fail(w: String) -> Self {
        Check { holds: false, witness: Some(w) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub net: String,
    pub radius: String,
    pub degree: usize,
    pub figures: Vec<FigureClass>,
    pub transitive: Check,
    pub figure_regular: Check,
    pub condition_iii: Check,
    pub relatively_dense: bool,
    /// Transitive with every figure rotation extending, but with a
    /// semiregular figure.
    pub quasiregular: bool,
    /// Every certified map also normalizes the period lattice.
    pub extends_to_net: bool,
    pub verdict: Verdict,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        self.verdict == Verdict::Regular
    }
}

impl fmt::Display for RegularityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let figs: Vec<&str> = self.figures.iter().map(FigureClass::as_str).collect();
        write!(f, "{}: degree {}, figure {}, ", self.net, self.degree, figs.join("/"))?;
        match &self.verdict {
            Verdict::Regular => write!(f, "regular (certified on R = {})", self.radius),
            Verdict::NotRegular(r) => write!(f, "not regular: {r}"),
        }
    }
}

/// Certifies the rotations of each class figure.
fn condition_iii(net: &NetTruncation, reps: &[(usize, usize)]) -> Result<(Check, bool)> {
    let mut all_extend = true;
    for &(_, i) in reps {
        let p = &net.nodes()[i].point;
        let rots = local_rotations(net, p)?;
        // report the refuted rotation of highest order
        if let Some(c) = rots
            .iter()
            .filter(|c| !c.is_certified())
            .max_by_key(|c| rotation_order(&c.map))
        {
            let w = format!(
                "rotation of order {} about {p:?} is a figure symmetry but not a net symmetry: {}",
                rotation_order(&c.map),
                c.witness().expect("refuted")
            );
            return Ok((Check::fail(w), false));
        }
        all_extend &= rots.iter().all(|c| c.extends_to_net);
    }
    Ok((Check::ok(), all_extend))
}

/// Checks transitivity, the figure, figure rotations and density.
pub fn is_regular(net: &NetTruncation) -> Result<RegularityReport> {
    require_periodic(net)?;
    let reps = class_representatives(net);
    let figs: Vec<RayFigure> = reps
        .iter()
        .map(|&(_, i)| ray_figure(net, &net.nodes()[i].point))
        .collect();
    let mut figures: Vec<FigureClass> = figs.iter().map(|f| f.class).collect();
    figures.sort();
    figures.dedup();
    let degree = figs.iter().map(RayFigure::degree).max().unwrap_or(0);

    let tr = check_transitive(net)?;
    let transitive = match tr.failure() {
        None => Check::ok(),
        Some(p) => Check::fail(match &p.symmetry {
            Some(c) => format!(
                "no isometry from class {} to class {}; last candidate refuted: {}",
                p.from,
                p.to,
                c.witness().expect("refuted")
            ),
            None => format!("classes {} and {} have different degrees", p.from, p.to),
        }),
    };
    let figure_regular = if figures.len() == 1 && figures[0].is_regular_polytope() {
        Check::ok()
    } else {
        let names: Vec<&str> = figures.iter().map(FigureClass::as_str).collect();
        Check::fail(format!("vertex figure {} is not a regular polygon or polyhedron", names.join("/")))
    };
    // with transitivity one node suffices
    let probe: Vec<(usize, usize)> = if transitive.holds { reps[..1].to_vec() } else { reps.clone() };
    let (cond_iii, rot_extend) = condition_iii(net, &probe)?;
    let trans_extend = tr
        .pairs
        .iter()
        .all(|p| p.symmetry.as_ref().is_some_and(|s| s.extends_to_net));

    let verdict = if !transitive.holds {
        Verdict::NotRegular(format!("not transitive: {}", transitive.witness.as_deref().unwrap_or("")))
    } else if !figure_regular.holds {
        Verdict::NotRegular(figure_regular.witness.clone().unwrap_or_default())
    } else if !cond_iii.holds {
        Verdict::NotRegular(format!(
            "figure rotations do not extend: {}",
            cond_iii.witness.as_deref().unwrap_or("")
        ))
    } else {
        Verdict::Regular
    };
    let quasiregular = transitive.holds && cond_iii.holds && figures == [FigureClass::Cuboctahedron];
    Ok(RegularityReport {
        net: net.name.clone(),
        radius: net.radius.to_string(),
        degree,
        figures,
        transitive,
        figure_regular,
        condition_iii: cond_iii,
        relatively_dense: true,
        quasiregular,
        extends_to_net: trans_extend && rot_extend,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlib::{catalog, generate};

    fn net(name: &str, r: i64) -> NetTruncation {
        generate(&catalog(name).unwrap(), &ExactScalar::int(r)).unwrap()
    }

    #[test]
    fn octahedral_rotations_of_z3() {
        let t = net("Z3", 3);
        let rots = local_rotations(&t, &Point::zero(3)).unwrap();
        assert_eq!(rots.len(), 24);
        assert!(rots.iter().all(|c| c.is_certified() && c.extends_to_net));
    }

    #[test]
    fn grid_rotations_have_order_four() {
        let t = net("Z2", 3);
        let rots = local_rotations(&t, &Point::zero(2)).unwrap();
        assert_eq!(rots.len(), 4);
        assert!(rots.iter().any(|c| rotation_order(&c.map) == 4));
    }

    #[test]
    fn k4_blue_node_rotations() {
        let t = net("K4", 8);
        let b = Point::from_ints(&[-1, -1, 1]);
        let rots = local_rotations(&t, &b).unwrap();
        let orders: Vec<usize> = rots.iter().map(|c| rotation_order(&c.map)).collect();
        assert!(rots.iter().all(CertifiedSymmetry::is_certified));
        assert!(orders.contains(&2) && orders.contains(&3));
    }

    #[test]
    fn hxg_hexagon_rotation_is_refuted() {
        let t = net("Hxg", 4);
        let b = Point::from_ints(&[1, 1, 1]);
        let rots = local_rotations(&t, &b).unwrap();
        let six: Vec<_> = rots.iter().filter(|c| rotation_order(&c.map) == 6).collect();
        assert!(!six.is_empty());
        assert!(six.iter().all(|c| !c.is_certified()));
    }

    #[test]
    fn grid_is_regular_and_kagome_is_not() {
        assert!(is_regular(&net("Z2", 3)).unwrap().is_regular());
        let kag = is_regular(&net("kag", 4)).unwrap();
        assert!(!kag.is_regular());
        assert!(!kag.figure_regular.holds);
    }
}
