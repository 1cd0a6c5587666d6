//! The catalog of named nets.
//!
//! Planar nets use internodal distance 1 with a node at the origin. The
//! three-dimensional nets other than the cubic grids keep the integral
//! cubic coordinates of their construction inside the face-centred cubic
//! net, since unit edge length would need √2.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, Point, StringGeom, Vector};

use super::motif::{equivalent_strings, Lattice, Motif};

pub const CATALOG: [&str; 11] = [
    "hex", "Z2", "tri", "kag", "K4", "Scaff", "Dia", "Z3", "Bcu", "Fcu", "Hxg",
];

pub const CATALOG_2D: [&str; 4] = ["hex", "Z2", "tri", "kag"];
pub const CATALOG_3D: [&str; 7] = ["K4", "Scaff", "Dia", "Z3", "Bcu", "Fcu", "Hxg"];

/// Three-letter RCSR symbol and common description.
pub fn abc_name(name: &str) -> Option<(&'static str, &'static str)> {
    Some(match canonical_name(name)? {
        "hex" => ("hcb", "graphene"),
        "Z2" => ("sql", "2D grid"),
        "tri" => ("hxl", "triangle grid"),
        "kag" => ("kgm", "2D kagome"),
        "K4" => ("srs", "SrSi2"),
        "Scaff" => ("nbo", "NbO"),
        "Dia" => ("dia", "diamond"),
        "Z3" => ("pcu", "primitive cubic"),
        "Bcu" => ("bcu", "body centred cubic"),
        "Fcu" => ("fcu", "face-centred cubic"),
        "Hxg" => ("hxg", "-"),
        _ => return None,
    })
}

/// Catalog id for a case-insensitive name or RCSR symbol.
pub fn canonical_name(name: &str) -> Option<&'static str> {
    let lower = name.to_ascii_lowercase();
    CATALOG.iter().copied().find(|c| {
        c.to_ascii_lowercase() == lower
            || matches!(
                (*c, lower.as_str()),
                ("hex", "hcb")
                    | ("Z2", "sql")
                    | ("tri", "hxl")
                    | ("kag", "kgm")
                    | ("K4", "srs")
                    | ("Scaff", "nbo")
                    | ("Z3", "pcu")
            )
    })
}

fn s(n: i64) -> ExactScalar {
    ExactScalar::int(n)
}

fn v(c: &[i64]) -> Vector {
    Vector::from_ints(c)
}

fn half() -> ExactScalar {
    ExactScalar::frac(1, 2)
}

/// √3/2.
fn h3() -> ExactScalar {
    ExactScalar::from_parts(0, 1, 1, 2)
}

fn line(p: &Point, d: &Vector) -> StringGeom {
    StringGeom::line(p, d).expect("nonzero direction")
}

fn seg(a: &Point, b: &Point) -> StringGeom {
    StringGeom::segment(a, b).expect("distinct endpoints")
}

pub fn catalog(name: &str) -> Result<Motif> {
    let id = canonical_name(name).ok_or_else(|| Error::UnknownNet(name.to_string()))?;
    let m = match id {
        "Z2" => z2(),
        "tri" => tri(),
        "kag" => kag(),
        "hex" => hex(),
        "Z3" => z3(),
        "Scaff" => scaff(),
        "Bcu" => bcu(),
        "Fcu" => fcu(),
        "Hxg" => hxg(),
        "K4" => k4()?,
        "Dia" => dia(),
        _ => unreachable!(),
    };
    m.validate()?;
    Ok(m)
}

fn motif(name: &str, periods: Vec<Vector>, nodes: Vec<Point>, strings: Vec<StringGeom>) -> Motif {
    Motif {
        name: name.to_string(),
        dimension: periods.len(),
        periods,
        node_reps: nodes,
        string_reps: strings,
    }
}

fn z2() -> Motif {
    let o = v(&[0, 0]);
    motif(
        "Z2",
        vec![v(&[1, 0]), v(&[0, 1])],
        vec![o.clone()],
        vec![line(&o, &v(&[1, 0])), line(&o, &v(&[0, 1]))],
    )
}

fn tri() -> Motif {
    let o = v(&[0, 0]);
    let a2 = Vector::new(vec![half(), h3()]);
    let a3 = Vector::new(vec![-half(), h3()]);
    motif(
        "tri",
        vec![v(&[1, 0]), a2.clone()],
        vec![o.clone()],
        vec![line(&o, &v(&[1, 0])), line(&o, &a2), line(&o, &a3)],
    )
}

fn kag() -> Motif {
    let o = v(&[0, 0]);
    let e = v(&[1, 0]);
    let top = Vector::new(vec![half(), h3()]);
    let up = Vector::new(vec![half(), h3()]);
    let down = Vector::new(vec![-half(), h3()]);
    motif(
        "kag",
        vec![v(&[2, 0]), Vector::new(vec![s(1), ExactScalar::sqrt3()])],
        vec![o.clone(), e.clone(), top],
        vec![line(&o, &v(&[1, 0])), line(&o, &up), line(&e, &down)],
    )
}

fn hex() -> Motif {
    let o = v(&[0, 0]);
    let b = v(&[1, 0]);
    motif(
        "hex",
        vec![Vector::new(vec![ExactScalar::frac(3, 2), h3()]), Vector::new(vec![s(0), ExactScalar::sqrt3()])],
        vec![o.clone(), b.clone()],
        vec![
            seg(&o, &b),
            seg(&o, &Vector::new(vec![-half(), h3()])),
            seg(&o, &Vector::new(vec![-half(), -h3()])),
        ],
    )
}

fn z3() -> Motif {
    let o = v(&[0, 0, 0]);
    motif(
        "Z3",
        vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])],
        vec![o.clone()],
        (0..3).map(|i| line(&o, &Vector::basis(3, i))).collect(),
    )
}

fn scaff() -> Motif {
    let x = v(&[1, 0, 0]);
    let y = v(&[0, 1, 0]);
    let z = v(&[0, 0, 1]);
    motif(
        "Scaff",
        vec![v(&[2, 0, 0]), v(&[0, 2, 0]), v(&[0, 0, 2])],
        vec![
            v(&[0, 0, 0]),
            v(&[1, 0, 0]),
            v(&[0, 0, 1]),
            v(&[1, 1, 0]),
            v(&[0, 1, 1]),
            v(&[1, 1, 1]),
        ],
        vec![
            line(&v(&[0, 0, 0]), &x),
            line(&v(&[0, 1, 1]), &x),
            line(&v(&[1, 0, 0]), &y),
            line(&v(&[0, 0, 1]), &y),
            line(&v(&[0, 0, 0]), &z),
            line(&v(&[1, 1, 0]), &z),
        ],
    )
}

fn bcu() -> Motif {
    let o = v(&[0, 0, 0]);
    let c = Vector::new(vec![half(), half(), half()]);
    motif(
        "Bcu",
        vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])],
        vec![o.clone(), c],
        [[1, 1, 1], [1, 1, -1], [1, -1, 1], [-1, 1, 1]]
            .iter()
            .map(|d| line(&o, &v(d)))
            .collect(),
    )
}

const FACE_DIAGONALS: [[i64; 3]; 6] = [
    [1, 1, 0],
    [1, -1, 0],
    [1, 0, 1],
    [1, 0, -1],
    [0, 1, 1],
    [0, 1, -1],
];

/// Node classes of the face-centred cubic net modulo `2ℤ³`: the body centre
/// `B` and the face-type nodes `g`, `r`, `v`.
const FCU_NODES: [[i64; 3]; 4] = [[1, 1, 1], [0, 0, 1], [1, 0, 0], [0, 1, 0]];

/// Normal of the hexagonal ray figure at a node of the hexagonally
/// coordinated net, by node class modulo 2.
pub fn hxg_normal(p: &Point) -> Option<Vector> {
    let class: Vec<i64> = p
        .coords()
        .iter()
        .map(|c| {
            let q = c.as_rational()?;
            q.is_integer()
                .then(|| (q.to_integer() % 2i64 + 2i64) % 2i64)
                .and_then(|b| i64::try_from(b).ok())
        })
        .collect::<Option<_>>()?;
    let n = match class.as_slice() {
        [1, 1, 1] => [1, -1, 1],
        [0, 0, 1] => [-1, 1, 1],
        [1, 0, 0] => [-1, -1, 1],
        [0, 1, 0] => [1, 1, 1],
        _ => return None,
    };
    Some(v(&n))
}

fn two_cube() -> Vec<Vector> {
    vec![v(&[2, 0, 0]), v(&[0, 2, 0]), v(&[0, 0, 2])]
}

/// Lines through node representatives, one per translation class.
fn line_classes(periods: &[Vector], candidates: impl Iterator<Item = StringGeom>) -> Vec<StringGeom> {
    let lat = Lattice::new(periods).expect("full rank");
    let mut out: Vec<StringGeom> = Vec::new();
    for l in candidates {
        if !out.iter().any(|m| equivalent_strings(&lat, m, &l)) {
            out.push(l);
        }
    }
    out
}

fn fcu() -> Motif {
    let nodes: Vec<Point> = FCU_NODES.iter().map(|c| v(c)).collect();
    let cands = nodes
        .iter()
        .flat_map(|p| FACE_DIAGONALS.iter().map(move |d| line(p, &v(d))))
        .collect::<Vec<_>>();
    let strings = line_classes(&two_cube(), cands.into_iter());
    motif("Fcu", two_cube(), nodes, strings)
}

/// Face diagonals perpendicular to the hexagon normal at `p`.
fn hxg_directions(p: &Point) -> Vec<Vector> {
    let n = hxg_normal(p).expect("face-centred cubic node");
    FACE_DIAGONALS
        .iter()
        .map(|d| v(d))
        .filter(|d| d.dot(&n).is_zero())
        .collect()
}

fn hxg() -> Motif {
    let nodes: Vec<Point> = FCU_NODES.iter().map(|c| v(c)).collect();
    let cands = nodes
        .iter()
        .flat_map(|p| hxg_directions(p).into_iter().map(move |d| line(p, &d)))
        .collect::<Vec<_>>();
    let strings = line_classes(&two_cube(), cands.into_iter());
    motif("Hxg", two_cube(), nodes, strings)
}

/// Reduces integer coordinates modulo 4 into `[-2, 2)`.
fn reduce4(p: &[i64]) -> [i64; 3] {
    let r = |c: i64| (c + 2).rem_euclid(4) - 2;
    [r(p[0]), r(p[1]), r(p[2])]
}

fn add(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn neg(a: &[i64; 3]) -> [i64; 3] {
    [-a[0], -a[1], -a[2]]
}

fn ray_set(p: &[i64; 3]) -> Vec<[i64; 3]> {
    hxg_directions(&v(p))
        .iter()
        .flat_map(|d| {
            let c: Vec<i64> = d.coords().iter().map(|x| x.floor().try_into().unwrap()).collect();
            let c = [c[0], c[1], c[2]];
            [c, neg(&c)]
        })
        .collect()
}

/// Node `B` and its left-handed edge triple.
const K4_START: [i64; 3] = [-1, -1, 1];
const K4_TRIPLE: [[i64; 3]; 3] = [[1, 1, 0], [0, -1, -1], [-1, 0, 1]];

/// Propagates the triangular edge triples of the `K₄` crystal from node `B`
/// through the hexagonally coordinated net, modulo `4ℤ³`.
pub fn k4_triples() -> Result<BTreeMap<[i64; 3], BTreeSet<[i64; 3]>>> {
    let mut triples: BTreeMap<[i64; 3], BTreeSet<[i64; 3]>> = BTreeMap::new();
    triples.insert(K4_START, K4_TRIPLE.into_iter().collect());
    let mut queue = VecDeque::from([K4_START]);
    while let Some(x) = queue.pop_front() {
        let t = triples[&x].clone();
        for d in t {
            let y = reduce4(&add(&x, &d));
            let back = neg(&d);
            if let Some(existing) = triples.get(&y) {
                if !existing.contains(&back) {
                    return Err(Error::Degenerate(format!(
                        "inconsistent edge triple at {y:?}"
                    )));
                }
                continue;
            }
            let rays = ray_set(&y);
            let completions: Vec<BTreeSet<[i64; 3]>> = rays
                .iter()
                .enumerate()
                .flat_map(|(i, a)| rays[i + 1..].iter().map(move |b| (*a, *b)))
                .filter(|(a, b)| add(&add(a, b), &back) == [0, 0, 0])
                .map(|(a, b)| [a, b, back].into_iter().collect())
                .collect();
            if completions.len() != 1 {
                return Err(Error::Degenerate(format!(
                    "edge triple at {y:?} is not uniquely determined"
                )));
            }
            triples.insert(y, completions.into_iter().next().unwrap());
            queue.push_back(y);
        }
    }
    Ok(triples)
}

fn k4() -> Result<Motif> {
    let triples = k4_triples()?;
    let mut edges: BTreeSet<([i64; 3], [i64; 3])> = BTreeSet::new();
    for (x, t) in &triples {
        for d in t {
            let y = add(x, d);
            let (lo, hi) = if *x <= y { (*x, y) } else { (y, *x) };
            let shift = add(&reduce4(&lo), &neg(&lo));
            edges.insert((add(&lo, &shift), add(&hi, &shift)));
        }
    }
    let nodes: Vec<Point> = triples.keys().map(|c| v(c)).collect();
    let strings = edges.iter().map(|(a, b)| seg(&v(a), &v(b))).collect();
    Ok(motif(
        "K4",
        vec![v(&[4, 0, 0]), v(&[0, 4, 0]), v(&[0, 0, 4])],
        nodes,
        strings,
    ))
}

fn dia() -> Motif {
    let a_nodes = [[0, 0, 0], [0, 2, 2], [2, 0, 2], [2, 2, 0]];
    let offsets = [[-1, -1, -1], [1, 1, -1], [1, -1, 1], [-1, 1, 1]];
    let b_nodes: Vec<[i64; 3]> = a_nodes.iter().map(|a| add(a, &[1, 1, 1])).collect();
    let nodes = a_nodes.iter().chain(&b_nodes).map(|c| v(c)).collect();
    let strings = b_nodes
        .iter()
        .flat_map(|b| offsets.iter().map(move |o| seg(&v(b), &v(&add(b, o)))))
        .collect();
    motif(
        "Dia",
        vec![v(&[4, 0, 0]), v(&[0, 4, 0]), v(&[0, 0, 4])],
        nodes,
        strings,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representative_counts() {
        let counts = |n: &str| {
            let m = catalog(n).unwrap();
            (m.node_reps.len(), m.string_reps.len())
        };
        assert_eq!(counts("Scaff"), (6, 6));
        assert_eq!(counts("K4"), (8, 12));
        assert_eq!(counts("Fcu"), (4, 12));
        assert_eq!(counts("Hxg"), (4, 6));
        assert_eq!(counts("Dia"), (8, 16));
        assert_eq!(counts("kag"), (3, 3));
    }

    #[test]
    fn k4_contains_node_b() {
        let m = catalog("K4").unwrap();
        assert!(m.node_reps.contains(&v(&[-1, -1, 1])));
        assert!(m.string_reps.iter().all(|s| s.kind() == crate::exact::StringKind::Segment));
    }

    #[test]
    fn hxg_lines_are_perpendicular_to_every_normal_on_them() {
        let m = catalog("Hxg").unwrap();
        for l in &m.string_reps {
            for k in -2..=2 {
                let p = l.point_at(&ExactScalar::int(k));
                if let Some(n) = hxg_normal(&p) {
                    assert!(l.direction().dot(&n).is_zero());
                }
            }
        }
    }

    #[test]
    fn names_and_aliases() {
        assert_eq!(canonical_name("srs"), Some("K4"));
        assert_eq!(canonical_name("fcu"), Some("Fcu"));
        assert_eq!(canonical_name("z2"), Some("Z2"));
        assert!(matches!(catalog("xyz"), Err(Error::UnknownNet(_))));
        assert_eq!(abc_name("Hxg").unwrap().0, "hxg");
    }
}
