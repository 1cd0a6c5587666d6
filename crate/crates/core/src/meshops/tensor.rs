//! Truncations of tensor meshes, unions of scalings and grid meshes.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, LineKey, ScaledIsometry, StringGeom, Vector};
use crate::netlib::motif::Motif;
use crate::netlib::scaling::BodyIndex;
use crate::netlib::truncation::translate_strings;
use crate::netlib::{catalog, scaling_inclusion, Assembly, NetOracle, NetTruncation};
use crate::supernatural::Supernatural;

use super::oracle::{GridOracle, ScalingUnionOracle, TensorOracle};

/// Nets that can be tensored with a group.
pub const TENSOR_BASES: [&str; 6] = ["tri", "Z2", "Scaff", "Bcu", "Z3", "kag"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeshKind {
    Tensor,
    ScalingUnion,
    Grid,
}

/// Largest distance between consecutive nodes on the listed strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapCertificate {
    pub max_gap_sq: ExactScalar,
    /// Bound the gap must meet at this depth.
    pub bound_sq: ExactScalar,
}

impl GapCertificate {
    pub fn holds(&self) -> bool {
        self.max_gap_sq <= self.bound_sq
    }

    pub fn max_gap(&self) -> f64 {
        self.max_gap_sq.to_f64().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeshTruncation {
    pub net: NetTruncation,
    pub kind: MeshKind,
    pub base: String,
    /// The group `F` of a tensor mesh, or `ℚ(m^∞)` for a union of scalings.
    pub group: Option<Supernatural>,
    pub depth: u32,
    /// Divisor at `depth`: translates use `F ∩ (1/n)ℤ`, scalings go down to `m^-depth`.
    pub divisor: u64,
    pub gap: GapCertificate,
}

impl MeshTruncation {
    /// Lines of the body with their clipped parameter ranges.
    pub fn body(&self) -> BTreeSet<(LineKey, ExactScalar, ExactScalar)> {
        self.net
            .strings()
            .iter()
            .map(|s| (s.geom.key().clone(), s.clip.0.clone(), s.clip.1.clone()))
            .collect()
    }
}

/// Maximum squared distance between consecutive nodes along any string.
fn max_gap_sq(net: &NetTruncation) -> ExactScalar {
    let mut best = ExactScalar::zero();
    for s in net.strings() {
        for w in s.nodes.windows(2) {
            let d = (&net.nodes()[w[1]].point - &net.nodes()[w[0]].point).norm_sq();
            if d > best {
                best = d;
            }
        }
    }
    best
}

fn finish(
    name: String,
    radius: &ExactScalar,
    dim: usize,
    strings: Vec<(StringGeom, usize)>,
    oracle: Arc<dyn NetOracle>,
) -> Result<NetTruncation> {
    NetTruncation::from_strings(
        &name,
        dim,
        radius.clone(),
        strings,
        Assembly {
            periods: None,
            oracle: Some(oracle),
            allow_lonely_nodes: false,
        },
    )
}

fn small_divisor(n: &num_bigint::BigInt) -> Result<u64> {
    num_traits::ToPrimitive::to_u64(n)
        .filter(|&d| d <= 4096)
        .ok_or_else(|| Error::Precondition(format!("divisor {n} is too large for a desk-scale truncation")))
}

fn tensor_base(base: &str, group: &Supernatural) -> Result<Motif> {
    if !TENSOR_BASES.contains(&base) {
        return Err(Error::Precondition(format!(
            "{base} is not a tensor base (expected one of {})",
            TENSOR_BASES.join(", ")
        )));
    }
    if base == "kag" && group.is_even() {
        return Err(Error::Precondition(
            "kagome meshes need an odd group (1/2 must not lie in F)".into(),
        ));
    }
    catalog(base)
}

/// Strings of the depth-truncated tensor mesh meeting the window.
pub fn tensor_strings(base: &str, group: &Supernatural, depth: u32, r: &ExactScalar) -> Result<(Motif, u64, Vec<(StringGeom, usize)>)> {
    if depth == 0 {
        return Err(Error::Precondition("truncation depth must be at least 1".into()));
    }
    let motif = tensor_base(base, group)?;
    let n = small_divisor(&group.chain_term(depth))?;
    let inv = ExactScalar::frac(1, n as i64);
    let fine = Motif {
        periods: motif.periods.iter().map(|p| p.scale(&inv)).collect(),
        ..motif.clone()
    };
    Ok((motif, n, translate_strings(&fine, r)?))
}

/// The truncation of `N ⊗ F` at `depth`: the `F ∩ (1/n_depth)ℤ` translates
/// of the strings of `N`, with their intersections as nodes.
pub fn tensor(base: &str, group: &Supernatural, depth: u32, r: &ExactScalar) -> Result<MeshTruncation> {
    let (motif, n, strings) = tensor_strings(base, group, depth, r)?;
    let oracle: Arc<dyn NetOracle> = Arc::new(TensorOracle::new(&motif, group)?);
    let net = finish(format!("{base}⊗{group}"), r, motif.dimension, strings, oracle)?;
    let period = motif.periods.iter().map(Vector::norm_sq).max().expect("periods");
    let gap = GapCertificate {
        max_gap_sq: max_gap_sq(&net),
        bound_sq: &period * &ExactScalar::frac(1, (n * n) as i64),
    };
    Ok(MeshTruncation {
        net,
        kind: MeshKind::Tensor,
        base: base.to_string(),
        group: Some(group.clone()),
        depth,
        divisor: n,
        gap,
    })
}

/// The union of the scalings `m^-k |N|`, `0 ≤ k ≤ depth`, of a net with
/// `m|N| ⊆ |N|`, truncated to the window.
pub fn scaling_union(base: &str, m: u64, depth: u32, r: &ExactScalar) -> Result<MeshTruncation> {
    let motif = catalog(base)?;
    let check = scaling_inclusion(&motif, m, r)?;
    if !check.holds {
        return Err(Error::Precondition(format!(
            "{m}|{base}| is not contained in |{base}|: {:?} is missing",
            check.witness.expect("witness")
        )));
    }
    if depth > 8 {
        return Err(Error::Precondition("scaling depth above 8 is not supported".into()));
    }
    let mut strings: Vec<(StringGeom, usize)> = Vec::new();
    let mut scale = ExactScalar::one();
    let mf = ExactScalar::int(m as i64);
    for k in 0..=depth {
        let shrink = ScaledIsometry::dilation(motif.dimension, scale.inv()?)?;
        let level = motif.transformed(&shrink, &format!("{base}/{m}^{k}"))?;
        strings.extend(translate_strings(&level, r)?.into_iter().map(|(s, _)| (s, k as usize)));
        scale = &scale * &mf;
    }
    // keep the coarsest level of each line
    strings.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    strings.dedup_by(|a, b| a.0 == b.0);
    let oracle: Arc<dyn NetOracle> = Arc::new(ScalingUnionOracle::new(&motif, m)?);
    let net = finish(format!("{base}÷{m}"), r, motif.dimension, strings, oracle)?;
    let divisor = m.checked_pow(depth).ok_or_else(|| Error::Precondition("depth too large".into()))?;
    let period = motif.periods.iter().map(Vector::norm_sq).max().expect("periods");
    let gap = GapCertificate {
        max_gap_sq: max_gap_sq(&net),
        bound_sq: &period * &ExactScalar::frac(1, (divisor * divisor) as i64),
    };
    Ok(MeshTruncation {
        net,
        kind: MeshKind::ScalingUnion,
        base: base.to_string(),
        group: Some(Supernatural::infinite_at(&crate::supernatural::factorize(m).iter().map(|&(p, _)| p).collect::<Vec<_>>())?),
        depth,
        divisor,
        gap,
    })
}

/// Whether `k·|a| ⊆ |b|` on the window of `a`, as clipped line sets.
pub fn dilation_maps_into(a: &MeshTruncation, b: &MeshTruncation, k: &ExactScalar) -> Result<Option<StringGeom>> {
    let d = ScaledIsometry::dilation(a.net.dimension, k.clone())?;
    let body = BodyIndex::new(b.net.strings().iter().map(|s| (&s.geom, s.clip.clone())));
    let r = &b.net.radius;
    for s in a.net.strings() {
        let image = d.apply_string(&s.geom)?;
        let (p, q) = s.clipped_endpoints();
        let (p, q) = (d.apply_point(&p)?, d.apply_point(&q)?);
        if !(p.in_box(r) && q.in_box(r)) {
            continue;
        }
        let (t0, t1) = (image.param(&p), image.param(&q));
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        if !body.covers(image.key(), &lo, &hi) {
            return Ok(Some(image));
        }
    }
    Ok(None)
}

/// The grid mesh with vertical lines `x = a, a ∈ E1` and horizontal lines
/// `y = b, b ∈ E2`, truncated to the window.
pub fn grid_mesh(e1: &[BigRational], e2: &[BigRational], r: &ExactScalar) -> Result<MeshTruncation> {
    let sets: Vec<BTreeSet<ExactScalar>> = [e1, e2]
        .iter()
        .map(|e| e.iter().cloned().map(ExactScalar::rational).collect())
        .collect();
    let oracle = GridOracle::new(sets.clone())?;
    let mut strings = Vec::new();
    // axis j lines are indexed by the offsets of the other axis
    for (j, others) in [(1usize, &sets[0]), (0, &sets[1])] {
        let dir = Vector::basis(2, j);
        for a in others.iter().filter(|a| a.abs() <= *r) {
            let mut p = vec![ExactScalar::zero(), ExactScalar::zero()];
            p[1 - j] = a.clone();
            strings.push((StringGeom::line(&Vector::new(p), &dir)?, j));
        }
    }
    if strings.iter().all(|s| s.1 == 0) || strings.iter().all(|s| s.1 == 1) {
        return Err(Error::Precondition("both offset sets need an offset inside the window".into()));
    }
    let net = finish("grid".to_string(), r, 2, strings, Arc::new(oracle))?;
    let gap = GapCertificate {
        max_gap_sq: max_gap_sq(&net),
        bound_sq: max_gap_sq(&net),
    };
    Ok(MeshTruncation {
        net,
        kind: MeshKind::Grid,
        base: "grid".to_string(),
        group: None,
        depth: 1,
        divisor: 1,
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Point;
    use crate::netlib::generate;

    fn f(s: &str) -> Supernatural {
        s.parse().unwrap()
    }

    #[test]
    fn dyadic_grid_at_depth_three() {
        let m = tensor("Z2", &f("2^inf"), 3, &ExactScalar::one()).unwrap();
        let in_square = m
            .net
            .nodes()
            .iter()
            .filter(|n| n.point.coords().iter().all(|x| !x.is_negative()))
            .count();
        assert_eq!(in_square, 81);
        assert_eq!(m.gap.max_gap_sq, ExactScalar::frac(1, 64));
        assert!(m.gap.holds());
    }

    #[test]
    fn translates_contain_the_base_net() {
        let r = ExactScalar::int(2);
        let m = tensor("tri", &Supernatural::rationals(), 1, &r).unwrap();
        let net = generate(&catalog("tri").unwrap(), &r).unwrap();
        for n in net.nodes() {
            assert!(m.net.node_id(&n.point).is_some());
        }
        let body = m.body();
        for s in net.strings() {
            assert!(body.contains(&(s.geom.key().clone(), s.clip.0.clone(), s.clip.1.clone())));
        }
    }

    #[test]
    fn tensor_is_monotone_in_depth() {
        let r = ExactScalar::one();
        let a = tensor("tri", &f("3^inf"), 1, &r).unwrap().body();
        let b = tensor("tri", &f("3^inf"), 2, &r).unwrap().body();
        assert!(a.is_subset(&b));
        assert!(a.len() < b.len());
    }

    #[test]
    fn scaling_primes_act_between_depths() {
        let r = ExactScalar::one();
        for g in ["2^inf", "3^inf", "2^inf*3^inf"] {
            let group = f(g);
            let k = tensor("Z2", &group, 1, &r).unwrap();
            let k1 = tensor("Z2", &group, 2, &r).unwrap();
            for p in group.scaling_primes() {
                let shrink = ExactScalar::frac(1, p as i64);
                assert_eq!(dilation_maps_into(&k, &k1, &shrink).unwrap(), None, "{g} by 1/{p}");
            }
            // 1/5 is not a scaling of any of these groups
            assert!(dilation_maps_into(&k, &k1, &ExactScalar::frac(1, 5)).unwrap().is_some());
        }
    }

    #[test]
    fn kagome_needs_an_odd_group() {
        assert!(tensor("kag", &f("2^inf"), 1, &ExactScalar::int(2)).is_err());
        assert!(tensor("kag", &f("3^inf"), 1, &ExactScalar::int(2)).is_ok());
        assert!(tensor("hex", &f("3^inf"), 1, &ExactScalar::int(2)).is_err());
    }

    #[test]
    fn nodes_lie_on_two_listed_strings() {
        let m = tensor("Bcu", &f("3^inf"), 1, &ExactScalar::one()).unwrap();
        for (i, _) in m.net.nodes().iter().enumerate() {
            assert!(m.net.strings_at(i).len() >= 2);
        }
    }

    #[test]
    fn grid_equals_dyadic_tensor() {
        let r = ExactScalar::one();
        let quarters: Vec<BigRational> = (-4..=4).map(|k| BigRational::new(k.into(), 4.into())).collect();
        let g = grid_mesh(&quarters, &quarters, &r).unwrap();
        let t = tensor("Z2", &f("2^inf"), 2, &r).unwrap();
        let keys = |m: &MeshTruncation| m.body().into_iter().map(|b| b.0).collect::<BTreeSet<_>>();
        assert_eq!(keys(&g), keys(&t));
    }

    #[test]
    fn single_cross() {
        let zero = vec![BigRational::from_integer(0.into())];
        let g = grid_mesh(&zero, &zero, &ExactScalar::one()).unwrap();
        assert_eq!(g.net.nodes().len(), 1);
        assert_eq!(g.net.nodes()[0].point, Point::zero(2));
    }

    #[test]
    fn triadic_kagome_union() {
        let r = ExactScalar::int(4);
        let d0 = scaling_union("kag", 3, 0, &r).unwrap();
        let kag = generate(&catalog("kag").unwrap(), &r).unwrap();
        let points = |n: &NetTruncation| n.nodes().iter().map(|e| e.point.clone()).collect::<Vec<_>>();
        assert_eq!(points(&d0.net), points(&kag));
        let d1 = scaling_union("kag", 3, 1, &r).unwrap();
        let d2 = scaling_union("kag", 3, 2, &r).unwrap();
        assert!(d1.body().is_subset(&d2.body()));
        assert!(dilation_maps_into(&d1, &d2, &ExactScalar::frac(1, 3)).unwrap().is_none());
        assert!(scaling_union("kag", 2, 1, &r).is_err());
    }
}
