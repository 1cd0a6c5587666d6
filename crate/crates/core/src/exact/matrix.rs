//! Small dense square matrices over Q(√3).

use std::fmt;
use std::ops::Mul;

use super::geom::Vector;
use super::scalar::ExactScalar;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: Vec<Vec<ExactScalar>>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        Ok(Matrix { rows })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| ExactScalar::int(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Result<Self> {
        let n = cols.len();
        if let Some(c) = cols.iter().find(|c| c.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.dim(),
            });
        }
        Ok(Matrix {
            rows: (0..n)
                .map(|i| cols.iter().map(|c| c[i].clone()).collect())
                .collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, ExactScalar::one())
    }

    pub fn scalar(n: usize, k: ExactScalar) -> Self {
        let mut rows = vec![vec![ExactScalar::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = k.clone();
        }
        Matrix { rows }
    }

    /// Counterclockwise planar rotation with the given cosine and sine.
    pub fn rotation2(c: ExactScalar, s: ExactScalar) -> Self {
        Matrix {
            rows: vec![vec![c.clone(), -&s], vec![s, c]],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<ExactScalar>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector(self.rows.iter().map(|r| r[j].clone()).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.dim();
        Matrix {
            rows: (0..n)
                .map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect())
                .collect(),
        }
    }

    pub fn scale(&self, k: &ExactScalar) -> Matrix {
        Matrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x * k).collect())
                .collect(),
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector(
            self.rows
                .iter()
                .map(|r| {
                    let mut acc = ExactScalar::zero();
                    for (a, b) in r.iter().zip(v.coords()) {
                        acc += &(a * b);
                    }
                    acc
                })
                .collect(),
        )
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> Matrix {
        Matrix {
            rows: self
                .rows
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip_r)
                .map(|(_, r)| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != skip_c)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect(),
        }
    }

    /// Cofactor expansion; matrices here are at most 3×3.
    pub fn det(&self) -> ExactScalar {
        match self.dim() {
            0 => ExactScalar::one(),
            1 => self.rows[0][0].clone(),
            2 => &self.rows[0][0] * &self.rows[1][1] - &self.rows[0][1] * &self.rows[1][0],
            n => {
                let mut acc = ExactScalar::zero();
                for j in 0..n {
                    let term = &self.rows[0][j] * &self.minor(0, j).det();
                    if j % 2 == 0 {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
                acc
            }
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.dim();
        let det = self.det();
        if det.is_zero() {
            return Err(Error::RankDeficient);
        }
        let inv_det = det.inv()?;
        if n == 1 {
            return Ok(Matrix {
                rows: vec![vec![inv_det]],
            });
        }
        let mut rows = vec![vec![ExactScalar::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let c = self.minor(j, i).det() * &inv_det;
                *slot = if (i + j) % 2 == 0 { c } else { -c };
            }
        }
        Ok(Matrix { rows })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    /// Returns `s` when `MᵀM = s·I` with `s > 0`.
    pub fn similarity_factor(&self) -> Option<ExactScalar> {
        let g = &self.transpose() * self;
        let s = g.rows[0][0].clone();
        (s.is_positive() && g == Self::scalar(self.dim(), s.clone())).then_some(s)
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> ExactScalar {
        self.rows
            .iter()
            .map(|r| r.iter().fold(ExactScalar::zero(), |acc, x| acc + x.abs()))
            .max()
            .unwrap_or_else(ExactScalar::zero)
    }

    /// True when every entry is a rational integer.
    pub fn is_integral(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|x| x.as_rational().is_some_and(|q| q.is_integer()))
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        let n = self.dim();
        let mut rows = vec![vec![ExactScalar::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut acc = ExactScalar::zero();
                for k in 0..n {
                    acc += &(&self.rows[i][k] * &o.rows[k][j]);
                }
                *slot = acc;
            }
        }
        Matrix { rows }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_integer_matrix() {
        let m = Matrix::from_int_rows(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]).unwrap();
        assert_eq!(m.det(), ExactScalar::int(5));
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!((&inv * &m).is_identity());
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(matches!(m.inverse(), Err(Error::RankDeficient)));
    }

    #[test]
    fn sixty_degree_rotation_is_orthogonal() {
        let c = ExactScalar::frac(1, 2);
        let s = ExactScalar::from_parts(0, 1, 1, 2);
        let r = Matrix::rotation2(c, s);
        assert_eq!(r.similarity_factor(), Some(ExactScalar::one()));
        let mut p = Matrix::identity(2);
        for _ in 0..6 {
            p = &p * &r;
        }
        assert!(p.is_identity());
    }
}
