//! Regularity of meshes, the collapse of `Scaff ⊗ F` onto `ℤ³ ⊗ F`, and
//! conformal equivalence of triangular meshes.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, Intersection, Point, StringGeom, Vector};
use crate::netlib::catalog;
use crate::netlib::figure::{ray_figure, FigureClass};
use crate::netlib::NetOracle;
use crate::supernatural::{is_prime, Equivalence, Supernatural};
use crate::symmetry::regular::isometry_between;
use crate::symmetry::{
    congruent, local_rotations, rotation_order, strongly_transitive, Check, Congruence, CongruenceOptions,
    PairSample, Verdict,
};

use super::oracle::TensorOracle;
use super::tensor::{tensor, tensor_strings, MeshKind, MeshTruncation};

/// Nodes nearest the origin used as transitivity targets.
const TRANSITIVITY_SAMPLES: usize = 12;
/// Nodes whose figures are compared.
const FIGURE_SAMPLES: usize = 24;

/// Family label of a mesh built from `base` and `group`.
pub fn mesh_label(kind: MeshKind, base: &str, group: &Supernatural) -> String {
    match (kind, base) {
        (MeshKind::ScalingUnion, b) => format!("M_{b}/{group}"),
        (MeshKind::Grid, _) => "M_grid".to_string(),
        (MeshKind::Tensor, "kag") => format!("kagome-mesh({group})"),
        // even translates restore the missing lines of Scaff
        (MeshKind::Tensor, "Scaff") if group.is_even() => format!("M_Z3({group})"),
        (MeshKind::Tensor, b) => format!("M_{b}({group})"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeshRegularityReport {
    pub mesh: String,
    pub label: String,
    pub group: String,
    pub depth: u32,
    pub radius: String,
    pub degree: usize,
    pub figures: Vec<FigureClass>,
    pub transitive: Check,
    pub figure_regular: Check,
    pub condition_iii: Check,
    pub dense: Check,
    pub max_gap: f64,
    /// Regular with `F = ℚ`.
    pub strongly_regular: bool,
    /// The forced dilation of a node pair that separates fields from other groups.
    pub strong_transitivity_sample: Check,
    pub pure: bool,
    pub verdict: Verdict,
}

impl MeshRegularityReport {
    pub fn is_regular(&self) -> bool {
        self.verdict == Verdict::Regular
    }
}

impl fmt::Display for MeshRegularityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let figs: Vec<&str> = self.figures.iter().map(FigureClass::as_str).collect();
        write!(f, "{} [{}]: degree {}, figure {}, ", self.mesh, self.label, self.degree, figs.join("/"))?;
        match &self.verdict {
            Verdict::Regular => write!(
                f,
                "regular{}{}",
                if self.strongly_regular { ", strongly regular" } else { "" },
                if self.pure { ", pure" } else { "" }
            ),
            Verdict::NotRegular(r) => write!(f, "not regular: {r}"),
        }
    }
}

fn check(ok: bool, why: impl FnOnce() -> String) -> Check {
    Check {
        holds: ok,
        witness: (!ok).then(why),
    }
}

/// Smallest prime whose reciprocal is not in the group, if any.
fn missing_reciprocal(group: &Supernatural) -> Option<u64> {
    if group.is_field() {
        return None;
    }
    (2u64..).filter(|&p| is_prime(p)).find(|&p| !group.infinite_primes().contains(&p))
}

/// Transitivity, figure, figure rotations and density of a mesh truncation,
/// sampled at the nodes nearest the origin.
pub fn mesh_is_regular(mesh: &MeshTruncation) -> Result<MeshRegularityReport> {
    let group = mesh
        .group
        .as_ref()
        .filter(|_| mesh.kind != MeshKind::Grid)
        .ok_or_else(|| Error::Precondition("mesh regularity needs a tensor or scaling mesh with a group".into()))?;
    let net = &mesh.net;
    let near: Vec<usize> = net.nodes_within(&net.radius).map(|(i, _)| i).take(FIGURE_SAMPLES).collect();
    let &p0i = near
        .first()
        .ok_or_else(|| Error::Precondition("the window contains no nodes".into()))?;
    let p0 = net.nodes()[p0i].point.clone();
    let figs: Vec<_> = near.par_iter().map(|&i| ray_figure(net, &net.nodes()[i].point)).collect();
    let mut figures: Vec<FigureClass> = figs.iter().map(|f| f.class).collect();
    figures.sort();
    figures.dedup();
    let degree = figs.iter().map(|f| f.degree()).max().unwrap_or(0);

    let targets: Vec<usize> = near.iter().copied().skip(1).take(TRANSITIVITY_SAMPLES).collect();
    let moves: Vec<(Point, bool, String)> = targets
        .par_iter()
        .map(|&j| {
            let q = &net.nodes()[j].point;
            let fq = ray_figure(net, q);
            if fq.rays.len() != figs[0].rays.len() {
                return (q.clone(), false, "degrees differ".to_string());
            }
            match isometry_between(net, &p0, q, &figs[0], &fq) {
                Some(c) if c.is_certified() => (q.clone(), true, String::new()),
                Some(c) => (q.clone(), false, c.witness().expect("refuted").to_string()),
                None => (q.clone(), false, "no candidate".to_string()),
            }
        })
        .collect();
    let transitive = match moves.iter().find(|m| !m.1) {
        None => Check { holds: true, witness: None },
        Some((q, _, w)) => Check {
            holds: false,
            witness: Some(format!("no isometry from {p0:?} to {q:?}: {w}")),
        },
    };
    let figure_regular = check(figures.len() == 1 && figures[0].is_regular_polytope(), || {
        let names: Vec<&str> = figures.iter().map(FigureClass::as_str).collect();
        format!("vertex figure {} is not a regular polygon or polyhedron", names.join("/"))
    });
    let rots = local_rotations(net, &p0)?;
    let bad = rots.iter().filter(|c| !c.is_certified()).max_by_key(|c| rotation_order(&c.map));
    let condition_iii = check(bad.is_none(), || {
        let c = bad.expect("refuted");
        format!(
            "rotation of order {} about {p0:?} is not a mesh symmetry: {}",
            rotation_order(&c.map),
            c.witness().expect("refuted")
        )
    });
    let discrete = !group.is_field() && group.infinite_primes().is_empty();
    let dense = check(!discrete && mesh.gap.holds(), || {
        if discrete {
            format!("ℚ({group}) is discrete, so the nodes are not dense")
        } else {
            format!("largest node gap {:.6} exceeds the depth bound", mesh.gap.max_gap())
        }
    });

    // Tp0 = p0, T(p0 + a) = p0 + a/q scales by 1/q
    let a = catalog(&mesh.base)?.periods[0].clone();
    let strong_transitivity_sample = if mesh.kind == MeshKind::Tensor {
        let q = missing_reciprocal(group).unwrap_or(2);
        let sample = PairSample {
            from: (p0.clone(), &p0 + &a),
            to: (p0.clone(), &p0 + &a.scale(&ExactScalar::frac(1, q as i64))),
        };
        let st = strongly_transitive(net, &[sample]);
        check(st.holds, || st.results[0].clone().err().unwrap_or_default())
    } else {
        Check {
            holds: false,
            witness: Some("strong transitivity is only sampled on tensor meshes".into()),
        }
    };

    let verdict = if !dense.holds {
        Verdict::NotRegular(dense.witness.clone().unwrap_or_default())
    } else if !transitive.holds {
        Verdict::NotRegular(format!("not transitive: {}", transitive.witness.as_deref().unwrap_or("")))
    } else if !figure_regular.holds {
        Verdict::NotRegular(figure_regular.witness.clone().unwrap_or_default())
    } else if !condition_iii.holds {
        Verdict::NotRegular(format!(
            "figure rotations do not extend: {}",
            condition_iii.witness.as_deref().unwrap_or("")
        ))
    } else {
        Verdict::Regular
    };
    let regular = verdict == Verdict::Regular;
    Ok(MeshRegularityReport {
        mesh: net.name.clone(),
        label: mesh_label(mesh.kind, &mesh.base, group),
        group: group.to_string(),
        depth: mesh.depth,
        radius: net.radius.to_string(),
        degree,
        figures,
        transitive,
        figure_regular,
        condition_iii,
        dense,
        max_gap: mesh.gap.max_gap(),
        strongly_regular: regular && group.is_field(),
        strong_transitivity_sample,
        pure: group.is_pure(),
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Collapse {
    Collapsed,
    /// A string of `ℤ³ ⊗ F` that is not a string of `Scaff ⊗ F`.
    ProperSub(StringGeom),
}

/// Compares `Scaff ⊗ F` with `ℤ³ ⊗ F`: every depth-truncated string of
/// either mesh is tested against the exact membership of the other.
pub fn scaff_collapse(group: &Supernatural, depth: u32, r: &ExactScalar) -> Result<Collapse> {
    if depth < 2 {
        return Err(Error::Precondition("collapse is checked from depth 2".into()));
    }
    let scaff = TensorOracle::new(&catalog("Scaff")?, group)?;
    let z3 = TensorOracle::new(&catalog("Z3")?, group)?;
    let (_, _, z3_strings) = tensor_strings("Z3", group, depth, r)?;
    let (_, _, scaff_strings) = tensor_strings("Scaff", group, depth, r)?;
    debug_assert!(scaff_strings.iter().all(|(s, _)| z3.has_string(s)));
    if let Some((s, _)) = scaff_strings.iter().find(|(s, _)| !z3.has_string(s)) {
        return Err(Error::Hypothesis(format!("{s:?} of Scaff ⊗ F is not a line of Z3 ⊗ F")));
    }
    Ok(match z3_strings.iter().find(|(s, _)| !scaff.has_string(s)) {
        None => Collapse::Collapsed,
        Some((s, _)) => Collapse::ProperSub(s.clone()),
    })
}

/// Primes whose power in the node spacing along the first axis grows from
/// `depth` to `depth + 1`.
pub fn gap_growth_primes(base: &str, group: &Supernatural, depth: u32, r: &ExactScalar) -> Result<BTreeSet<u64>> {
    let a = axis_spacing(base, group, depth, r)?;
    let b = axis_spacing(base, group, depth + 1, r)?;
    // the spacing is 1/n along the axis, so the ratio is an integer
    let ratio = a.checked_div(&b)?.as_rational().cloned().filter(|q| q.is_integer()).map(|q| q.to_integer());
    let ratio = ratio.ok_or_else(|| Error::Hypothesis("spacings are not commensurate".into()))?;
    let mut out = BTreeSet::new();
    let mut rest = ratio;
    let mut p = 2u64;
    while !rest.is_one() {
        let bp = BigInt::from(p);
        if rest.is_multiple_of(&bp) {
            out.insert(p);
            while rest.is_multiple_of(&bp) {
                rest /= &bp;
            }
        }
        p += 1;
    }
    Ok(out)
}

/// Least distance between consecutive nodes on the first-axis line through
/// the origin.
fn axis_spacing(base: &str, group: &Supernatural, depth: u32, r: &ExactScalar) -> Result<ExactScalar> {
    let (motif, _, strings) = tensor_strings(base, group, depth, r)?;
    let axis = StringGeom::line(&Point::zero(motif.dimension), &Vector::basis(motif.dimension, 0))?;
    let mut params: Vec<ExactScalar> = strings
        .iter()
        .filter_map(|(s, _)| match axis.intersect(s) {
            Intersection::Point(p) if p.in_box(r) => Some(axis.param(&p)),
            _ => None,
        })
        .collect();
    params.sort();
    params.dedup();
    params
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .ok_or_else(|| Error::WindowTooSmall("fewer than two nodes on the axis".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConformalEvidence {
    /// A certified similarity between the two truncations.
    Similar { ratio_sq: ExactScalar },
    /// Primes with growing node spacing differ.
    Separated { only_first: Vec<u64>, only_second: Vec<u64> },
    /// No evidence either way.
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalCheck {
    pub first: Supernatural,
    pub second: Supernatural,
    pub equivalence: Equivalence,
    pub evidence: ConformalEvidence,
}

impl ConformalCheck {
    pub fn agrees(&self) -> bool {
        matches!(
            (&self.equivalence, &self.evidence),
            (Equivalence::Equivalent { .. }, ConformalEvidence::Similar { .. })
                | (Equivalence::Distinct { .. }, ConformalEvidence::Separated { .. })
        )
    }
}

/// Compares `tri ⊗ ℚ(n)` and `tri ⊗ ℚ(m)`: a similarity search when `n` and
/// `m` are finitely equivalent and the growth of the node spacing otherwise.
pub fn tri_mesh_conformal(n: &Supernatural, m: &Supernatural, r: &ExactScalar) -> Result<ConformalCheck> {
    let equivalence = n.finitely_equivalent(m);
    // past the largest finite exponent the truncations hold every finite
    // part and only infinite primes keep refining the spacing
    let depth = n
        .finite_exponents()
        .values()
        .chain(m.finite_exponents().values())
        .copied()
        .max()
        .unwrap_or(0)
        .max(1);
    let evidence = match &equivalence {
        Equivalence::Equivalent { .. } => {
            let a = tensor("tri", n, depth, r)?;
            let b = tensor("tri", m, depth, r)?;
            let opts = CongruenceOptions {
                allow_scaling: true,
                allow_reflection: false,
            };
            match congruent(&a.net, &b.net, opts) {
                Congruence::Equivalent(c) => ConformalEvidence::Similar {
                    ratio_sq: c.map.ratio_sq().clone(),
                },
                other => ConformalEvidence::Inconclusive(format!("{other:?}")),
            }
        }
        Equivalence::Distinct { .. } => {
            let gn = gap_growth_primes("tri", n, depth, r)?;
            let gm = gap_growth_primes("tri", m, depth, r)?;
            if gn == gm {
                ConformalEvidence::Inconclusive(format!("spacing grows by the same primes {gn:?}"))
            } else {
                ConformalEvidence::Separated {
                    only_first: gn.difference(&gm).copied().collect(),
                    only_second: gm.difference(&gn).copied().collect(),
                }
            }
        }
    };
    Ok(ConformalCheck {
        first: n.clone(),
        second: m.clone(),
        equivalence,
        evidence,
    })
}
