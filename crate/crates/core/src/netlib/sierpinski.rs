//! The line segment mesh of the Sierpinski triangle construction.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, LineKey, Point, StringGeom, Vector};

use super::truncation::{Assembly, NetTruncation};

/// Unions of overlapping or touching parameter intervals.
pub(crate) fn merge_intervals(
    mut iv: Vec<(ExactScalar, ExactScalar)>,
) -> Vec<(ExactScalar, ExactScalar)> {
    iv.sort();
    let mut out: Vec<(ExactScalar, ExactScalar)> = Vec::new();
    for (a, b) in iv {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// The construction on the unit triangle with corners `(0,0)`, `(1,0)` and
/// `(1/2, √3/2)`, subdivided `depth` times.
pub fn sierpinski(depth: u32) -> Result<NetTruncation> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    if depth > 12 {
        return Err(Error::Precondition("depth above 12 is not supported".into()));
    }
    let apex = Vector::new(vec![ExactScalar::frac(1, 2), ExactScalar::sqrt3() * ExactScalar::frac(1, 2)]);
    let mut level = vec![[
        Vector::from_ints(&[0, 0]),
        Vector::from_ints(&[1, 0]),
        apex,
    ]];
    let mut sides: BTreeMap<LineKey, Vec<(ExactScalar, ExactScalar)>> = BTreeMap::new();
    let mut nodes: Vec<Point> = Vec::new();
    for k in 0..=depth {
        let mut next = Vec::with_capacity(level.len() * 3);
        for tri in &level {
            for i in 0..3 {
                let (a, b) = (&tri[i], &tri[(i + 1) % 3]);
                let s = StringGeom::segment(a, b)?;
                let (p, q) = (s.lo().expect("segment").clone(), s.hi().expect("segment").clone());
                sides.entry(s.key().clone()).or_default().push((p, q));
                nodes.push(a.clone());
            }
            if k < depth {
                let half = ExactScalar::frac(1, 2);
                let mid = |x: &Vector, y: &Vector| (x + y).scale(&half);
                let (a, b, c) = (&tri[0], &tri[1], &tri[2]);
                let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
                next.push([a.clone(), ab.clone(), ca.clone()]);
                next.push([ab, b.clone(), bc.clone()]);
                next.push([ca, bc, c.clone()]);
            }
        }
        if k < depth {
            level = next;
        }
    }
    let mut strings = Vec::new();
    for (key, iv) in sides {
        for (lo, hi) in merge_intervals(iv) {
            strings.push((StringGeom::with_key(key.clone(), Some(lo), Some(hi))?, 0));
        }
    }
    NetTruncation::assemble(
        &format!("sierpinski-{depth}"),
        2,
        ExactScalar::one(),
        nodes.into_iter().map(|p| (p, 0)).collect(),
        strings,
        Assembly::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlib::figure::node_rays;

    #[test]
    fn node_counts_and_degrees() {
        for d in 1..=4u32 {
            let t = sierpinski(d).unwrap();
            let expected = 3 + 3 * (3usize.pow(d) - 1) / 2;
            assert_eq!(t.nodes().len(), expected, "depth {d}");
            let degs: Vec<usize> = (0..t.nodes().len()).map(|i| t.degree(i)).collect();
            assert_eq!(degs.iter().filter(|&&g| g == 2).count(), 3);
            assert!(degs.iter().all(|&g| g == 2 || g == 4));
        }
    }

    #[test]
    fn interior_angle_cycle() {
        let t = sierpinski(2).unwrap();
        let p = Vector::new(vec![ExactScalar::frac(1, 2), ExactScalar::zero()]);
        let mut angles: Vec<f64> = node_rays(&t, &p)
            .iter()
            .map(|v| {
                let f = v.to_f64();
                f[1].atan2(f[0])
            })
            .collect();
        angles.sort_by(f64::total_cmp);
        let mut gaps: Vec<f64> = angles.windows(2).map(|w| w[1] - w[0]).collect();
        gaps.push(angles[0] + std::f64::consts::TAU - angles[angles.len() - 1]);
        gaps.sort_by(f64::total_cmp);
        let third = std::f64::consts::FRAC_PI_3;
        for (g, want) in gaps.iter().zip([third, third, third, std::f64::consts::PI]) {
            assert!((g - want).abs() < 1e-12);
        }
    }
}
