//! Candidate similarities forced by matching ray figures.

use std::collections::BTreeSet;

use crate::exact::{ExactScalar, Matrix, Point, ScaledIsometry, Vector};
use crate::netlib::figure::ray_key;

/// Which orientation classes a search may return.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Proper,
    Any,
}

impl Orientation {
    fn allows(&self, sign: i32) -> bool {
        match self {
            Orientation::Proper => sign > 0,
            Orientation::Any => true,
        }
    }
}

/// Two non-parallel rays of `rays`, the first pair in order.
fn frame(rays: &[Vector]) -> Option<(usize, usize)> {
    for i in 0..rays.len() {
        for j in (i + 1)..rays.len() {
            if !rays[i].is_parallel(&rays[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Linear maps `M` with `MᵀM = s·I` sending the ray set `u` onto the ray set
/// `v` (up to positive rescaling of each ray).
pub fn linear_candidates(u: &[Vector], v: &[Vector], s: &ExactScalar, orient: Orientation) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = Vec::new();
    if u.len() != v.len() || u.is_empty() {
        return out;
    }
    let dim = u[0].dim();
    let Some((i1, i2)) = frame(u) else {
        return out;
    };
    let (u1, u2) = (&u[i1], &u[i2]);
    let target: BTreeSet<Vector> = v.iter().map(ray_key).collect();
    let gram = u1.dot(u2);
    let n1 = u1.norm_sq();
    let n2 = u2.norm_sq();
    let r = s.sqrt();
    for (a, v1) in v.iter().enumerate() {
        let Some(l1) = (s * &n1 * v1.norm_sq().inv().expect("nonzero ray")).sqrt() else {
            continue;
        };
        let w1 = v1.scale(&l1);
        for (b, v2) in v.iter().enumerate() {
            if a == b {
                continue;
            }
            let Some(l2) = (s * &n2 * v2.norm_sq().inv().expect("nonzero ray")).sqrt() else {
                continue;
            };
            let w2 = v2.scale(&l2);
            if w1.dot(&w2) != s * &gram {
                continue;
            }
            let maps: Vec<Matrix> = if dim == 2 {
                let src = Matrix::from_columns(&[u1.clone(), u2.clone()]).expect("2d frame");
                let dst = Matrix::from_columns(&[w1.clone(), w2.clone()]).expect("2d frame");
                vec![&dst * &src.inverse().expect("independent frame")]
            } else {
                let Some(r) = &r else { continue };
                let u3 = u1.cross(u2);
                let w3 = w1.cross(&w2).scale(&r.inv().expect("positive ratio"));
                let src = Matrix::from_columns(&[u1.clone(), u2.clone(), u3]).expect("3d frame");
                let inv = src.inverse().expect("independent frame");
                [w3.clone(), -&w3]
                    .into_iter()
                    .map(|w| &Matrix::from_columns(&[w1.clone(), w2.clone(), w]).expect("3d frame") * &inv)
                    .collect()
            };
            for m in maps {
                if m.similarity_factor().as_ref() != Some(s) {
                    continue;
                }
                if !orient.allows(m.det().signum()) {
                    continue;
                }
                let image: BTreeSet<Vector> = u.iter().map(|x| ray_key(&m.apply(x))).collect();
                if image == target && !out.contains(&m) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Similarities with ratio `√s` sending `p` to `q` and the rays `u` at `p`
/// onto the rays `v` at `q`.
pub fn map_candidates(
    p: &Point,
    u: &[Vector],
    q: &Point,
    v: &[Vector],
    s: &ExactScalar,
    orient: Orientation,
) -> Vec<ScaledIsometry> {
    linear_candidates(u, v, s, orient)
        .into_iter()
        .map(|m| {
            let t = q - &m.apply(p);
            ScaledIsometry::new(m, t).expect("similarity checked")
        })
        .collect()
}
