//! Ray figures of nodes and their classification.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact::{ExactScalar, Point, StringGeom, Vector};

use super::oracle::NetOracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureClass {
    Triangle,
    Square,
    Rectangle,
    Hexagon,
    Tetrahedron,
    Cube,
    Octahedron,
    Cuboctahedron,
    Other,
}

impl FigureClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            FigureClass::Triangle => "triangle",
            FigureClass::Square => "square",
            FigureClass::Rectangle => "rectangle",
            FigureClass::Hexagon => "hexagon",
            FigureClass::Tetrahedron => "tetrahedron",
            FigureClass::Cube => "cube",
            FigureClass::Octahedron => "octahedron",
            FigureClass::Cuboctahedron => "cuboctahedron",
            FigureClass::Other => "other",
        }
    }

    /// Regular polygons and regular polyhedra.
    pub fn is_regular_polytope(&self) -> bool {
        matches!(
            self,
            FigureClass::Triangle
                | FigureClass::Square
                | FigureClass::Hexagon
                | FigureClass::Tetrahedron
                | FigureClass::Cube
                | FigureClass::Octahedron
        )
    }
}

impl fmt::Display for FigureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The rays leaving a node along its strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayFigure {
    pub center: Point,
    /// Ray directions scaled to unit sup-norm, sorted.
    pub rays: Vec<Vector>,
    pub class: FigureClass,
    pub rank: usize,
    /// Normal of a planar figure in space (canonical direction).
    pub normal: Option<Vector>,
}

impl RayFigure {
    pub fn degree(&self) -> usize {
        self.rays.len()
    }
}

/// Scales `v` so that its largest coordinate has absolute value one.
pub(crate) fn ray_key(v: &Vector) -> Vector {
    let m = v.max_abs();
    v.scale(&m.inv().expect("nonzero ray"))
}

/// Rays at `p` along a single string, empty when `p` is not on it.
pub fn rays_along(s: &StringGeom, p: &Point) -> Vec<Vector> {
    if !s.contains(p) {
        return Vec::new();
    }
    let t = s.param(p);
    let d = s.direction();
    let mut out = Vec::new();
    if s.hi().is_none_or(|h| *h > t) {
        out.push(d.clone());
    }
    if s.lo().is_none_or(|l| *l < t) {
        out.push(-d);
    }
    out
}

/// Distinct rays at `p`.
pub fn node_rays<O: NetOracle + ?Sized>(net: &O, p: &Point) -> Vec<Vector> {
    let mut rays: Vec<Vector> = net
        .strings_through(p)
        .iter()
        .flat_map(|s| rays_along(s, p))
        .map(|v| ray_key(&v))
        .collect();
    rays.sort();
    rays.dedup();
    rays
}

pub fn ray_figure<O: NetOracle + ?Sized>(net: &O, p: &Point) -> RayFigure {
    let rays = node_rays(net, p);
    let rank = rank(&rays);
    let normal = if p.dim() == 3 && rank == 2 {
        let a = &rays[0];
        rays.iter()
            .map(|b| a.cross(b))
            .find(|c| !c.is_zero())
            .and_then(|c| c.canonical_direction())
    } else {
        None
    };
    let class = classify(&rays, p.dim(), rank);
    RayFigure {
        center: p.clone(),
        rays,
        class,
        rank,
        normal,
    }
}

/// `sign(u·v)·(u·v)² / (|u|²|v|²)`, the signed squared cosine.
pub fn signed_sq_cos(u: &Vector, v: &Vector) -> ExactScalar {
    let d = u.dot(v);
    let q = d.square() * (u.norm_sq() * v.norm_sq()).inv().expect("nonzero rays");
    if d.is_negative() {
        -q
    } else {
        q
    }
}

/// Multiset of signed squared cosines over unordered pairs.
pub fn cosine_profile(rays: &[Vector]) -> BTreeMap<ExactScalar, usize> {
    let mut m = BTreeMap::new();
    for (i, u) in rays.iter().enumerate() {
        for v in &rays[i + 1..] {
            *m.entry(signed_sq_cos(u, v)).or_insert(0) += 1;
        }
    }
    m
}

pub fn rank(vs: &[Vector]) -> usize {
    let Some(first) = vs.first() else { return 0 };
    let n = first.dim();
    let mut rows: Vec<Vec<ExactScalar>> = vs.iter().map(|v| v.coords().to_vec()).collect();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] * &inv;
                for k in 0..n {
                    let sub = &f * &rows[r][k];
                    rows[i][k] -= &sub;
                }
            }
        }
        r += 1;
    }
    r
}

fn profile_is(p: &BTreeMap<ExactScalar, usize>, want: &[(ExactScalar, usize)]) -> bool {
    p.len() == want.len() && want.iter().all(|(k, n)| p.get(k) == Some(n))
}

pub fn classify(rays: &[Vector], dim: usize, rank: usize) -> FigureClass {
    let p = cosine_profile(rays);
    let q = |n: i64, d: i64| ExactScalar::frac(n, d);
    let one = || ExactScalar::int(-1);
    let zero = ExactScalar::zero;
    match (rays.len(), rank) {
        (3, 2) if profile_is(&p, &[(q(-1, 4), 3)]) => FigureClass::Triangle,
        (4, 2) if profile_is(&p, &[(zero(), 4), (one(), 2)]) => FigureClass::Square,
        (4, 2) => {
            let others: Vec<_> = p.iter().filter(|(k, _)| **k != one()).collect();
            let rect = p.get(&one()) == Some(&2)
                && others.len() == 2
                && others.iter().all(|(_, n)| **n == 2)
                && !others[0].0.is_zero()
                && *others[0].0 == -others[1].0;
            if rect {
                FigureClass::Rectangle
            } else {
                FigureClass::Other
            }
        }
        (6, 2) if profile_is(&p, &[(q(1, 4), 6), (q(-1, 4), 6), (one(), 3)]) => {
            FigureClass::Hexagon
        }
        (4, 3) if dim == 3 && profile_is(&p, &[(q(-1, 9), 6)]) => FigureClass::Tetrahedron,
        (8, 3) if profile_is(&p, &[(q(1, 9), 12), (q(-1, 9), 12), (one(), 4)]) => {
            FigureClass::Cube
        }
        (6, 3) if profile_is(&p, &[(zero(), 12), (one(), 3)]) => FigureClass::Octahedron,
        (12, 3) if profile_is(&p, &[(q(1, 4), 24), (zero(), 12), (q(-1, 4), 24), (one(), 6)]) => {
            FigureClass::Cuboctahedron
        }
        _ => FigureClass::Other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlib::catalog::catalog;
    use crate::netlib::truncation::generate;

    #[test]
    fn catalog_figures() {
        let expected = [
            ("hex", 3, FigureClass::Triangle),
            ("Z2", 4, FigureClass::Square),
            ("tri", 6, FigureClass::Hexagon),
            ("kag", 4, FigureClass::Rectangle),
            ("K4", 3, FigureClass::Triangle),
            ("Scaff", 4, FigureClass::Square),
            ("Dia", 4, FigureClass::Tetrahedron),
            ("Z3", 6, FigureClass::Octahedron),
            ("Bcu", 8, FigureClass::Cube),
            ("Fcu", 12, FigureClass::Cuboctahedron),
            ("Hxg", 6, FigureClass::Hexagon),
        ];
        for (name, deg, class) in expected {
            let m = catalog(name).unwrap();
            let r = ExactScalar::int(2 * m.lattice().unwrap().max_period_len().ceil() as i64);
            let t = generate(&m, &r).unwrap();
            for p in &m.node_reps {
                let f = ray_figure(&t, p);
                assert_eq!(f.degree(), deg, "{name} at {p:?}");
                assert_eq!(f.class, class, "{name} at {p:?}");
            }
        }
    }

    #[test]
    fn rank_of_planar_set() {
        let vs = [
            Vector::from_ints(&[1, 0, 0]),
            Vector::from_ints(&[0, 1, 0]),
            Vector::from_ints(&[1, 1, 0]),
        ];
        assert_eq!(rank(&vs), 2);
    }
}
