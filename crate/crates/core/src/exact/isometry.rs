//! Exact similarity maps `x ↦ M·x + t` with `MᵀM = r²·I`.
//!
//! The linear part is stored unnormalized together with the squared ratio
//! `r²`, so maps whose ratio lies outside the field (for instance a rotation
//! by π/4 combined with a √2 dilation) remain exact.

use std::fmt;

use super::geom::{Point, StringGeom, StringKind, Vector};
use super::matrix::Matrix;
use super::scalar::ExactScalar;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScaledIsometry {
    linear: Matrix,
    ratio_sq: ExactScalar,
    translation: Vector,
}

impl ScaledIsometry {
    pub fn identity(dim: usize) -> Self {
        Self::translation(Vector::zero(dim))
    }

    pub fn translation(t: Vector) -> Self {
        ScaledIsometry {
            linear: Matrix::identity(t.dim()),
            ratio_sq: ExactScalar::one(),
            translation: t,
        }
    }

    /// The dilation `D_r : x ↦ r·x`.
    pub fn dilation(dim: usize, r: ExactScalar) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::Degenerate("dilation ratio must be positive".into()));
        }
        Ok(ScaledIsometry {
            linear: Matrix::scalar(dim, r.clone()),
            ratio_sq: r.square(),
            translation: Vector::zero(dim),
        })
    }

    /// Any similarity; fails unless `MᵀM` is a positive multiple of `I`.
    pub fn new(linear: Matrix, translation: Vector) -> Result<Self> {
        if linear.dim() != translation.dim() {
            return Err(Error::DimensionMismatch {
                expected: linear.dim(),
                found: translation.dim(),
            });
        }
        let ratio_sq = linear
            .similarity_factor()
            .ok_or_else(|| Error::Degenerate("linear part is not a similarity".into()))?;
        Ok(ScaledIsometry {
            linear,
            ratio_sq,
            translation,
        })
    }

    /// A linear isometry fixing the origin; requires `QᵀQ = I` exactly.
    pub fn orthogonal(q: Matrix) -> Result<Self> {
        let t = Vector::zero(q.dim());
        let m = Self::new(q, t)?;
        if !m.ratio_sq.is_one() {
            return Err(Error::Degenerate("matrix is not orthogonal".into()));
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn linear(&self) -> &Matrix {
        &self.linear
    }

    pub fn translation_part(&self) -> &Vector {
        &self.translation
    }

    pub fn ratio_sq(&self) -> &ExactScalar {
        &self.ratio_sq
    }

    /// The ratio `r`, when it lies in Q(√3).
    pub fn ratio(&self) -> Option<ExactScalar> {
        self.ratio_sq.sqrt()
    }

    pub fn ratio_f64(&self) -> f64 {
        self.ratio_sq.to_f64().sqrt()
    }

    /// The orthogonal factor `M/r`, when `r` lies in Q(√3).
    pub fn rotation(&self) -> Option<Matrix> {
        let r = self.ratio()?;
        Some(self.linear.scale(&r.inv().ok()?))
    }

    pub fn is_isometry(&self) -> bool {
        self.ratio_sq.is_one()
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }

    /// `+1` for orientation preserving maps, `-1` otherwise.
    pub fn orientation(&self) -> i32 {
        self.linear.det().signum()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ScaledIsometry) -> ScaledIsometry {
        ScaledIsometry {
            linear: &self.linear * &other.linear,
            ratio_sq: &self.ratio_sq * &other.ratio_sq,
            translation: &self.linear.apply(&other.translation) + &self.translation,
        }
    }

    pub fn inverse(&self) -> ScaledIsometry {
        let inv_s = self.ratio_sq.inv().expect("positive ratio");
        let linear = self.linear.transpose().scale(&inv_s);
        let translation = -&linear.apply(&self.translation);
        ScaledIsometry {
            linear,
            ratio_sq: inv_s,
            translation,
        }
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: d,
            });
        }
        Ok(())
    }

    pub fn apply_point(&self, p: &Point) -> Result<Point> {
        self.check_dim(p.dim())?;
        Ok(&self.linear.apply(p) + &self.translation)
    }

    pub fn apply_vector(&self, v: &Vector) -> Result<Vector> {
        self.check_dim(v.dim())?;
        Ok(self.linear.apply(v))
    }

    pub fn apply_string(&self, s: &StringGeom) -> Result<StringGeom> {
        self.check_dim(s.dim())?;
        let d = self.linear.apply(s.direction());
        match s.kind() {
            StringKind::Line => StringGeom::line(&self.apply_point(s.anchor())?, &d),
            StringKind::Segment => {
                let (a, b) = s.endpoints();
                StringGeom::segment(
                    &self.apply_point(&a.expect("segment"))?,
                    &self.apply_point(&b.expect("segment"))?,
                )
            }
            StringKind::Ray => match s.endpoints() {
                (Some(start), None) => StringGeom::ray(&self.apply_point(&start)?, &d),
                (None, Some(start)) => StringGeom::ray(&self.apply_point(&start)?, &-&d),
                _ => unreachable!("ray has one endpoint"),
            },
        }
    }

    /// True when `M·L ⊆ L` for the lattice `L` spanned by `periods`.
    pub fn maps_lattice_into(&self, periods: &[Vector]) -> bool {
        let Ok(p) = Matrix::from_columns(periods) else {
            return false;
        };
        let Ok(pinv) = p.inverse() else {
            return false;
        };
        (&(&pinv * &self.linear) * &p).is_integral()
    }

    /// True when conjugation by the map permutes the lattice translations.
    pub fn normalizes_lattice(&self, periods: &[Vector]) -> bool {
        self.maps_lattice_into(periods) && self.inverse().maps_lattice_into(periods)
    }
}

impl fmt::Debug for ScaledIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x -> {:?}x + {:?} (r^2 = {})",
            self.linear, self.translation, self.ratio_sq
        )
    }
}
