//! Exact points, vectors and strings (lines, rays, segments).

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::scalar::ExactScalar;
use crate::error::{Error, Result};

/// A point or vector in dimension 2 or 3 with coordinates in Q(√3).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<ExactScalar>);

pub type Point = Vector;

impl Vector {
    pub fn new(coords: Vec<ExactScalar>) -> Self {
        Vector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Vector(vec![ExactScalar::zero(); dim])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Vector(c.iter().map(|&x| ExactScalar::int(x)).collect())
    }

    /// Unit basis vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = ExactScalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[ExactScalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(ExactScalar::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (x, y) in self.0.iter().zip(&other.0) {
            acc += &(x * y);
        }
        acc
    }

    pub fn norm_sq(&self) -> ExactScalar {
        self.dot(self)
    }

    pub fn scale(&self, k: &ExactScalar) -> Vector {
        Vector(self.0.iter().map(|x| x * k).collect())
    }

    /// Cross product; both operands must be 3D.
    pub fn cross(&self, o: &Vector) -> Vector {
        let (a, b) = (&self.0, &o.0);
        Vector(vec![
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ])
    }

    /// Index of the first nonzero coordinate.
    pub fn pivot(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }

    /// Scales so that the first nonzero coordinate equals 1.
    pub fn canonical_direction(&self) -> Option<Vector> {
        let p = self.pivot()?;
        let inv = self.0[p].inv().ok()?;
        Some(self.scale(&inv))
    }

    /// Positive rescaling so the first nonzero coordinate has absolute value 1;
    /// keeps the orientation.
    pub fn signed_direction(&self) -> Option<Vector> {
        let p = self.pivot()?;
        let inv = self.0[p].abs().inv().ok()?;
        Some(self.scale(&inv))
    }

    /// Unit vector when `|v|` lies in the field, otherwise the vector itself.
    pub fn normalized_if_possible(&self) -> Vector {
        match self.norm_sq().sqrt() {
            Some(n) if !n.is_zero() => self.scale(&n.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    /// True when `self = k·other` for some scalar `k` (including `k < 0`).
    pub fn is_parallel(&self, other: &Vector) -> bool {
        match (self.canonical_direction(), other.canonical_direction()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    /// Maximum absolute coordinate.
    pub fn max_abs(&self) -> ExactScalar {
        self.0
            .iter()
            .map(ExactScalar::abs)
            .max()
            .unwrap_or_else(ExactScalar::zero)
    }

    pub fn in_box(&self, r: &ExactScalar) -> bool {
        let neg = -r;
        self.0.iter().all(|x| x <= r && *x >= neg)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(ExactScalar::to_f64).collect()
    }
}

impl Index<usize> for Vector {
    type Output = ExactScalar;
    fn index(&self, i: usize) -> &ExactScalar {
        &self.0[i]
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, o: &Vector) -> Vector {
        Vector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, o: &Vector) -> Vector {
        Vector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Canonical description of an affine line: the direction has first nonzero
/// coordinate 1 and the offset point has that coordinate equal to 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LineKey {
    pub direction: Vector,
    pub offset: Point,
}

impl LineKey {
    pub fn through(p: &Point, d: &Vector) -> Option<LineKey> {
        let direction = d.canonical_direction()?;
        let piv = direction.pivot()?;
        let offset = p - &direction.scale(&p[piv]);
        Some(LineKey { direction, offset })
    }

    pub fn pivot(&self) -> usize {
        self.direction.pivot().expect("canonical direction")
    }

    /// Canonical parameter of a point on this line.
    pub fn param(&self, p: &Point) -> ExactScalar {
        p[self.pivot()].clone()
    }

    pub fn point_at(&self, t: &ExactScalar) -> Point {
        &self.offset + &self.direction.scale(t)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.point_at(&self.param(p)) == *p
    }
}

impl fmt::Display for LineKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + t{:?}", self.offset, self.direction)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StringKind {
    Segment,
    Ray,
    Line,
}

/// A string of a net in canonical form: the points `anchor + t·direction`
/// with `t` ranging over `[lo, hi]`, where a missing bound is infinite.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StringGeom {
    key: LineKey,
    lo: Option<ExactScalar>,
    hi: Option<ExactScalar>,
}

/// Result of intersecting two strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    Point(Point),
    /// Colinear strings sharing a nondegenerate interval.
    Overlap { lo: Point, hi: Point },
}

fn le_opt_lo(a: &Option<ExactScalar>, b: &Option<ExactScalar>) -> Option<ExactScalar> {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(x.clone().max(y.clone())),
    }
}

fn ge_opt_hi(a: &Option<ExactScalar>, b: &Option<ExactScalar>) -> Option<ExactScalar> {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(x.clone().min(y.clone())),
    }
}

impl StringGeom {
    pub fn line(p: &Point, d: &Vector) -> Result<Self> {
        let key = LineKey::through(p, d).ok_or_else(|| Error::Degenerate("zero direction".into()))?;
        Ok(StringGeom {
            key,
            lo: None,
            hi: None,
        })
    }

    pub fn segment(p: &Point, q: &Point) -> Result<Self> {
        if p.dim() != q.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                found: q.dim(),
            });
        }
        let key = LineKey::through(p, &(q - p))
            .ok_or_else(|| Error::Degenerate("segment endpoints coincide".into()))?;
        let (a, b) = (key.param(p), key.param(q));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        Ok(StringGeom {
            key,
            lo: Some(lo),
            hi: Some(hi),
        })
    }

    /// Closed half-line starting at `p` and heading along `d`.
    pub fn ray(p: &Point, d: &Vector) -> Result<Self> {
        let key = LineKey::through(p, d).ok_or_else(|| Error::Degenerate("zero direction".into()))?;
        let t = key.param(p);
        let forward = d[key.pivot()].is_positive();
        Ok(if forward {
            StringGeom {
                key,
                lo: Some(t),
                hi: None,
            }
        } else {
            StringGeom {
                key,
                lo: None,
                hi: Some(t),
            }
        })
    }

    /// A piece of the given line with canonical parameter bounds.
    pub fn with_key(key: LineKey, lo: Option<ExactScalar>, hi: Option<ExactScalar>) -> Result<Self> {
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a >= b {
                return Err(Error::Degenerate("empty or degenerate extent".into()));
            }
        }
        Ok(StringGeom { key, lo, hi })
    }

    /// Builds a string from an arbitrary anchor/direction parametrization with
    /// extent measured in that parametrization.
    pub fn from_parametrization(
        kind: StringKind,
        anchor: &Point,
        direction: &Vector,
        extent: (Option<ExactScalar>, Option<ExactScalar>),
    ) -> Result<Self> {
        let at = |t: &ExactScalar| anchor + &direction.scale(t);
        match kind {
            StringKind::Line => Self::line(anchor, direction),
            StringKind::Segment => match extent {
                (Some(a), Some(b)) => Self::segment(&at(&a), &at(&b)),
                _ => Err(Error::Parse("segment needs two bounds".into())),
            },
            StringKind::Ray => match extent {
                (Some(a), None) => Self::ray(&at(&a), direction),
                (None, Some(b)) => Self::ray(&at(&b), &-direction),
                _ => Err(Error::Parse("ray needs exactly one bound".into())),
            },
        }
    }

    pub fn kind(&self) -> StringKind {
        match (&self.lo, &self.hi) {
            (Some(_), Some(_)) => StringKind::Segment,
            (None, None) => StringKind::Line,
            _ => StringKind::Ray,
        }
    }

    pub fn key(&self) -> &LineKey {
        &self.key
    }

    /// Alias for [`key`](Self::key) matching the `(direction, offset)` naming.
    pub fn line_key(&self) -> LineKey {
        self.key.clone()
    }

    pub fn anchor(&self) -> &Point {
        &self.key.offset
    }

    pub fn direction(&self) -> &Vector {
        &self.key.direction
    }

    pub fn lo(&self) -> Option<&ExactScalar> {
        self.lo.as_ref()
    }

    pub fn hi(&self) -> Option<&ExactScalar> {
        self.hi.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.key.offset.dim()
    }

    pub fn param(&self, p: &Point) -> ExactScalar {
        self.key.param(p)
    }

    pub fn point_at(&self, t: &ExactScalar) -> Point {
        self.key.point_at(t)
    }

    pub fn param_in_extent(&self, t: &ExactScalar) -> bool {
        self.lo.as_ref().is_none_or(|l| l <= t) && self.hi.as_ref().is_none_or(|h| t <= h)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.key.contains(p) && self.param_in_extent(&self.key.param(p))
    }

    pub fn endpoints(&self) -> (Option<Point>, Option<Point>) {
        (
            self.lo.as_ref().map(|t| self.point_at(t)),
            self.hi.as_ref().map(|t| self.point_at(t)),
        )
    }

    /// Parameter interval of the part inside the closed box `[-r, r]^d`.
    /// The interval is a single point when the string only touches the box.
    pub fn clip_to_box(&self, r: &ExactScalar) -> Option<(ExactScalar, ExactScalar)> {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        let neg = -r;
        for i in 0..self.dim() {
            let a = &self.key.offset[i];
            let d = &self.key.direction[i];
            if d.is_zero() {
                if a > r || *a < neg {
                    return None;
                }
                continue;
            }
            let inv = d.inv().ok()?;
            let t1 = (&neg - a) * &inv;
            let t2 = (r - a) * &inv;
            let (l, h) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
            lo = le_opt_lo(&lo, &Some(l));
            hi = ge_opt_hi(&hi, &Some(h));
        }
        match (lo, hi) {
            (Some(l), Some(h)) if l <= h => Some((l, h)),
            _ => None,
        }
    }

    /// Restriction to a parameter interval; `None` when the result is empty
    /// or a single point.
    pub fn restrict(&self, lo: &ExactScalar, hi: &ExactScalar) -> Option<StringGeom> {
        let l = le_opt_lo(&self.lo, &Some(lo.clone()))?;
        let h = ge_opt_hi(&self.hi, &Some(hi.clone()))?;
        (l < h).then(|| StringGeom {
            key: self.key.clone(),
            lo: Some(l),
            hi: Some(h),
        })
    }

    pub fn intersect(&self, other: &StringGeom) -> Intersection {
        if self.key == other.key {
            let lo = le_opt_lo(&self.lo, &other.lo);
            let hi = ge_opt_hi(&self.hi, &other.hi);
            return match (lo, hi) {
                (Some(l), Some(h)) => match l.cmp(&h) {
                    std::cmp::Ordering::Greater => Intersection::Empty,
                    std::cmp::Ordering::Equal => Intersection::Point(self.point_at(&l)),
                    std::cmp::Ordering::Less => Intersection::Overlap {
                        lo: self.point_at(&l),
                        hi: self.point_at(&h),
                    },
                },
                // unbounded overlap: report the best finite witness
                (l, h) => {
                    let base = l.or(h).unwrap_or_else(ExactScalar::zero);
                    Intersection::Overlap {
                        lo: self.point_at(&base),
                        hi: self.point_at(&(&base + &ExactScalar::one())),
                    }
                }
            };
        }
        match line_intersection(&self.key, &other.key) {
            Some((t, s)) if self.param_in_extent(&t) && other.param_in_extent(&s) => {
                Intersection::Point(self.point_at(&t))
            }
            _ => Intersection::Empty,
        }
    }
}

/// Parameters `(t, s)` of the unique common point of two distinct lines.
pub fn line_intersection(k1: &LineKey, k2: &LineKey) -> Option<(ExactScalar, ExactScalar)> {
    if k1.direction == k2.direction {
        return None;
    }
    let (a1, d1, a2, d2) = (&k1.offset, &k1.direction, &k2.offset, &k2.direction);
    let dim = a1.dim();
    // a1 + t d1 = a2 + s d2  =>  t d1 - s d2 = a2 - a1
    let rhs = a2 - a1;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let det = &d1[j] * &d2[i] - &d1[i] * &d2[j];
            if det.is_zero() {
                continue;
            }
            let inv = det.inv().expect("nonzero");
            let t = (&d2[i] * &rhs[j] - &d2[j] * &rhs[i]) * &inv;
            let s = (&d1[i] * &rhs[j] - &d1[j] * &rhs[i]) * &inv;
            // two nonparallel lines in the plane always meet
            if dim == 2 {
                return Some((t, s));
            }
            let p = k1.point_at(&t);
            if p == k2.point_at(&s) {
                return Some((t, s));
            }
            return None;
        }
    }
    None
}
