//! Periodic motifs: representative nodes and strings plus period vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exact::{ExactScalar, Matrix, Point, ScaledIsometry, StringGeom, StringKind, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Motif {
    pub name: String,
    pub dimension: usize,
    pub periods: Vec<Vector>,
    pub node_reps: Vec<Point>,
    pub string_reps: Vec<StringGeom>,
}

/// Exact lattice arithmetic for the period vectors of a motif.
#[derive(Clone, Debug)]
pub struct Lattice {
    periods: Vec<Vector>,
    basis: Matrix,
    inverse: Matrix,
}

impl Lattice {
    pub fn new(periods: &[Vector]) -> Result<Self> {
        let basis = Matrix::from_columns(periods)?;
        let inverse = basis.inverse()?;
        Ok(Lattice {
            periods: periods.to_vec(),
            basis,
            inverse,
        })
    }

    pub fn periods(&self) -> &[Vector] {
        &self.periods
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Lattice coordinates `P⁻¹·v`.
    pub fn coords(&self, v: &Vector) -> Vector {
        self.inverse.apply(v)
    }

    pub fn point(&self, k: &[i64]) -> Vector {
        self.basis.apply(&Vector::from_ints(k))
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.coords(v).coords().iter().all(is_integer)
    }

    /// Whether the lines `a + ℝd` and `b + ℝd` differ by a lattice vector.
    pub fn same_line_class(&self, a: &Point, b: &Point, d: &Vector) -> bool {
        let c = self.coords(&(b - a));
        let e = self.coords(d);
        line_offset_in_group(&c, &e, is_integer)
    }

    /// Inclusive coefficient bounds for lattice vectors `t` with
    /// `|x + t|∞ ≤ r` for some `x` with `|x|∞ ≤ reach`.
    pub fn coefficient_bounds(&self, reach: f64) -> Vec<(i64, i64)> {
        (0..self.dim())
            .map(|j| {
                let row: f64 = (0..self.dim())
                    .map(|k| self.inverse.get(j, k).to_f64().abs())
                    .sum();
                let b = (row * reach).ceil() as i64 + 1;
                (-b, b)
            })
            .collect()
    }

    pub fn max_period_len(&self) -> f64 {
        self.periods
            .iter()
            .map(|p| p.norm_sq().to_f64().sqrt())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn is_integer(x: &ExactScalar) -> bool {
    x.as_rational().is_some_and(|q| q.is_integer())
}

/// With `c` and `e` in lattice coordinates: is there `λ` with `c − λe` in
/// `G^d`, where `G ⊇ ℤ` is an additive group given by `member`?
///
/// Exact when the primitive integer direction has a unit entry. Otherwise
/// only the shifts `k ∈ {0, …, |e_i| − 1}` are tried, which is exact for
/// `G = ℤ`. A direction that is not a multiple of a rational vector gives
/// `false`.
pub(crate) fn line_offset_in_group(
    c: &Vector,
    e: &Vector,
    member: impl Fn(&ExactScalar) -> bool,
) -> bool {
    let Some(prim) = primitive_integer(e) else {
        return false;
    };
    let prim: Vec<ExactScalar> = prim
        .into_iter()
        .map(|x| ExactScalar::rational(num_rational::BigRational::from_integer(x)))
        .collect();
    let fits = |lam: &ExactScalar| (0..c.dim()).all(|j| member(&(&c[j] - &(&prim[j] * lam))));
    if let Some(i) = prim.iter().position(|x| x.abs().is_one()) {
        return fits(&(&c[i] * &prim[i]));
    }
    let i = prim.iter().position(|x| !x.is_zero()).expect("nonzero direction");
    let inv = prim[i].inv().expect("nonzero");
    let steps = prim[i].abs().floor();
    let mut k = BigInt::zero();
    while k < steps {
        let lam = (&c[i] - &ExactScalar::rational(num_rational::BigRational::from_integer(k.clone()))) * &inv;
        if fits(&lam) {
            return true;
        }
        k += 1;
    }
    false
}

/// Primitive integer vector parallel to `e`, if `e` is a real multiple of a
/// rational vector.
pub(crate) fn primitive_integer(e: &Vector) -> Option<Vec<BigInt>> {
    let p = e.pivot()?;
    let scaled = e.scale(&e[p].inv().ok()?);
    let rats: Option<Vec<_>> = scaled.coords().iter().map(|x| x.as_rational().cloned()).collect();
    let rats = rats?;
    let den = rats.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|q| (q * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.into_iter().map(|x| x / &g).collect())
}

impl Motif {
    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(&self.periods)
    }

    pub fn is_linear(&self) -> bool {
        self.string_reps.iter().all(|s| s.kind() == StringKind::Line)
    }

    /// Distinct canonical string directions.
    pub fn directions(&self) -> Vec<Vector> {
        let mut ds: Vec<Vector> = self
            .string_reps
            .iter()
            .map(|s| s.direction().clone())
            .collect();
        ds.sort();
        ds.dedup();
        ds
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dimension;
        if d != 2 && d != 3 {
            return Err(Error::Precondition(format!("unsupported dimension {d}")));
        }
        if self.periods.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: self.periods.len(),
            });
        }
        for p in self.periods.iter().chain(&self.node_reps) {
            if p.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: p.dim(),
                });
            }
        }
        if let Some(s) = self.string_reps.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: s.dim(),
            });
        }
        let lat = self.lattice()?;
        for (i, a) in self.node_reps.iter().enumerate() {
            for b in &self.node_reps[..i] {
                if lat.contains(&(a - b)) {
                    return Err(Error::Degenerate(format!(
                        "node representatives {a:?} and {b:?} are lattice equivalent"
                    )));
                }
            }
        }
        for (i, s) in self.string_reps.iter().enumerate() {
            for t in &self.string_reps[..i] {
                if equivalent_strings(&lat, s, t) {
                    return Err(Error::Degenerate(format!(
                        "string representatives {s:?} and {t:?} are lattice equivalent"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Image of the motif under a linear or affine similarity.
    pub fn transformed(&self, t: &ScaledIsometry, name: &str) -> Result<Motif> {
        Ok(Motif {
            name: name.to_string(),
            dimension: self.dimension,
            periods: self
                .periods
                .iter()
                .map(|p| t.apply_vector(p))
                .collect::<Result<_>>()?,
            node_reps: self
                .node_reps
                .iter()
                .map(|p| t.apply_point(p))
                .collect::<Result<_>>()?,
            string_reps: self
                .string_reps
                .iter()
                .map(|s| t.apply_string(s))
                .collect::<Result<_>>()?,
        })
    }

    /// Mirror image in the hyperplane `x = 0`.
    pub fn mirror(&self) -> Result<Motif> {
        let mut rows = vec![vec![ExactScalar::zero(); self.dimension]; self.dimension];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = if i == 0 {
                ExactScalar::int(-1)
            } else {
                ExactScalar::one()
            };
        }
        let m = ScaledIsometry::orthogonal(Matrix::from_rows(rows)?)?;
        self.transformed(&m, &format!("{}-mirror", self.name))
    }
}

/// Whether `t` is a lattice translate of `s`.
pub(crate) fn equivalent_strings(lat: &Lattice, s: &StringGeom, t: &StringGeom) -> bool {
    if s.direction() != t.direction() || s.kind() != t.kind() {
        return false;
    }
    match s.kind() {
        StringKind::Line => lat.same_line_class(s.anchor(), t.anchor(), s.direction()),
        _ => {
            let (sa, sb) = s.endpoints();
            let (ta, tb) = t.endpoints();
            let shift = match (&sa, &ta) {
                (Some(x), Some(y)) => y - x,
                _ => tb.as_ref().expect("ray endpoint") - sb.as_ref().expect("ray endpoint"),
            };
            if !lat.contains(&shift) {
                return false;
            }
            let moved = ScaledIsometry::translation(shift)
                .apply_string(s)
                .expect("same dimension");
            moved == *t
        }
    }
}
