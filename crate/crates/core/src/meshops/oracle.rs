//! Exact membership in tensor meshes, unions of scalings and grid meshes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, Point, ScaledIsometry, StringGeom, StringKind, Vector};
use crate::netlib::motif::{line_offset_in_group, primitive_integer, Lattice, Motif};
use crate::netlib::{NetOracle, PeriodicOracle};
use crate::supernatural::Supernatural;

/// Counts the distinct directions among the strings through a point.
fn nonparallel(strings: &[StringGeom]) -> usize {
    let mut dirs: Vec<&Vector> = strings.iter().map(StringGeom::direction).collect();
    dirs.sort();
    dirs.dedup();
    dirs.len()
}

/// Lines through `p` along each of `dirs` that pass `keep`.
fn lines_through(p: &Point, dirs: &[Vector], keep: impl Fn(&StringGeom) -> bool) -> Vec<StringGeom> {
    dirs.iter()
        .map(|d| StringGeom::line(p, d).expect("nonzero direction"))
        .filter(|l| keep(l))
        .collect()
}

/// The mesh `N ⊗ F` of a linear periodic net: the strings are the lines
/// `λ₁a₁ + … + λ_d a_d + l` with `λ_i ∈ F` and `l` a string of `N`.
#[derive(Clone, Debug)]
pub struct TensorOracle {
    lattice: Lattice,
    group: Supernatural,
    /// Anchor and direction of each string representative.
    reps: Vec<(Point, Vector)>,
    directions: Vec<Vector>,
}

impl TensorOracle {
    pub fn new(base: &Motif, group: &Supernatural) -> Result<Self> {
        if !base.is_linear() {
            return Err(Error::Precondition(format!("{} is not a linear net", base.name)));
        }
        let lattice = base.lattice()?;
        for s in &base.string_reps {
            let e = lattice.coords(s.direction());
            let prim = primitive_integer(&e).ok_or_else(|| {
                Error::NotRepresentable("string direction is not a lattice direction".into())
            })?;
            if !prim.iter().any(|x| x == &BigInt::one() || x == &-BigInt::one()) {
                return Err(Error::NotRepresentable(
                    "tensor meshes need string directions with a unit lattice coordinate".into(),
                ));
            }
        }
        Ok(TensorOracle {
            lattice,
            group: group.clone(),
            reps: base
                .string_reps
                .iter()
                .map(|s| (s.anchor().clone(), s.direction().clone()))
                .collect(),
            directions: base.directions(),
        })
    }

    fn member(&self, x: &ExactScalar) -> bool {
        x.as_rational().is_some_and(|q| self.group.contains(q))
    }

    fn is_line(&self, s: &StringGeom) -> bool {
        self.reps.iter().any(|(a, d)| {
            d.is_parallel(s.direction()) && {
                let c = self.lattice.coords(&(s.anchor() - a));
                let e = self.lattice.coords(d);
                line_offset_in_group(&c, &e, |x| self.member(x))
            }
        })
    }
}

impl NetOracle for TensorOracle {
    fn dim(&self) -> usize {
        self.lattice.dim()
    }

    fn is_node(&self, p: &Point) -> bool {
        p.dim() == self.dim() && nonparallel(&self.strings_through(p)) >= 2
    }

    fn has_string(&self, s: &StringGeom) -> bool {
        s.dim() == self.dim() && s.kind() == StringKind::Line && self.is_line(s)
    }

    fn strings_through(&self, p: &Point) -> Vec<StringGeom> {
        lines_through(p, &self.directions, |l| self.is_line(l))
    }
}

/// Extra exponents tried beyond the one that clears denominators.
const SCALING_SLACK: u32 = 8;

/// The union `⋃ₙ m⁻ⁿ|N|` for a linear periodic net with `m|N| ⊆ |N|`.
#[derive(Clone, Debug)]
pub struct ScalingUnionOracle {
    base: PeriodicOracle,
    factor: u64,
    directions: Vec<Vector>,
}

impl ScalingUnionOracle {
    pub fn new(base: &Motif, factor: u64) -> Result<Self> {
        if !base.is_linear() {
            return Err(Error::Precondition(format!("{} is not a linear net", base.name)));
        }
        if factor < 2 {
            return Err(Error::Precondition("scaling factor must be at least 2".into()));
        }
        Ok(ScalingUnionOracle {
            base: PeriodicOracle::new(base)?,
            factor,
            directions: base.directions(),
        })
    }

    /// Smallest `n` with `mⁿ·x` free of the primes of `m` in the denominators
    /// of the lattice coordinates of `x`.
    fn clearing_exponent(&self, x: &Point) -> u32 {
        let c = self.base.lattice().coords(x);
        let den = c.coords().iter().fold(BigInt::one(), |acc, v| acc.lcm(&v.denominator_lcm()));
        let m = BigInt::from(self.factor);
        let mut n = 0;
        let mut d = den;
        while !d.gcd(&m).is_one() && n < 256 {
            d /= d.gcd(&m);
            n += 1;
        }
        n
    }

    fn is_line(&self, s: &StringGeom) -> bool {
        let n0 = self.clearing_exponent(s.anchor());
        let m = ExactScalar::int(self.factor as i64);
        let mut scale = ExactScalar::one();
        for _ in 0..n0 {
            scale = &scale * &m;
        }
        for _ in 0..=SCALING_SLACK {
            let d = ScaledIsometry::dilation(s.dim(), scale.clone()).expect("positive factor");
            if self.base.has_string(&d.apply_string(s).expect("dimension")) {
                return true;
            }
            scale = &scale * &m;
        }
        false
    }
}

impl NetOracle for ScalingUnionOracle {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn is_node(&self, p: &Point) -> bool {
        p.dim() == self.dim() && nonparallel(&self.strings_through(p)) >= 2
    }

    fn has_string(&self, s: &StringGeom) -> bool {
        s.dim() == self.dim() && s.kind() == StringKind::Line && self.is_line(s)
    }

    fn strings_through(&self, p: &Point) -> Vec<StringGeom> {
        lines_through(p, &self.directions, |l| self.is_line(l))
    }
}

/// Axis-parallel lines `x_i = a_i (i ≠ j)` with each `a_i` in a finite
/// offset set `E_i`.
#[derive(Clone, Debug)]
pub struct GridOracle {
    offsets: Vec<BTreeSet<ExactScalar>>,
}

impl GridOracle {
    pub fn new(offsets: Vec<BTreeSet<ExactScalar>>) -> Result<Self> {
        if offsets.len() < 2 || offsets.iter().any(BTreeSet::is_empty) {
            return Err(Error::Precondition(
                "grid meshes need at least two nonempty offset sets".into(),
            ));
        }
        Ok(GridOracle { offsets })
    }

    pub fn offsets(&self) -> &[BTreeSet<ExactScalar>] {
        &self.offsets
    }

    /// Whether the axis line through `p` along axis `j` is a string.
    fn axis_line(&self, p: &Point, j: usize) -> bool {
        (0..self.offsets.len()).all(|i| i == j || self.offsets[i].contains(&p[i]))
    }
}

impl NetOracle for GridOracle {
    fn dim(&self) -> usize {
        self.offsets.len()
    }

    fn is_node(&self, p: &Point) -> bool {
        p.dim() == self.dim() && (0..self.dim()).filter(|&j| self.axis_line(p, j)).count() >= 2
    }

    fn has_string(&self, s: &StringGeom) -> bool {
        if s.dim() != self.dim() || s.kind() != StringKind::Line {
            return false;
        }
        let d = s.direction();
        let axes: Vec<usize> = (0..d.dim()).filter(|&i| !d[i].is_zero()).collect();
        axes.len() == 1 && self.axis_line(s.anchor(), axes[0])
    }

    fn strings_through(&self, p: &Point) -> Vec<StringGeom> {
        (0..self.dim())
            .filter(|&j| self.axis_line(p, j))
            .map(|j| StringGeom::line(p, &Vector::basis(self.dim(), j)).expect("nonzero"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlib::catalog;

    fn pt(c: &[(i64, i64)]) -> Point {
        Point::new(c.iter().map(|&(n, d)| ExactScalar::frac(n, d)).collect())
    }

    #[test]
    fn dyadic_grid_membership() {
        let o = TensorOracle::new(&catalog("Z2").unwrap(), &"2^inf".parse().unwrap()).unwrap();
        assert!(o.is_node(&pt(&[(1, 8), (3, 4)])));
        assert!(!o.is_node(&pt(&[(1, 3), (0, 1)])));
        let l = StringGeom::line(&pt(&[(0, 1), (5, 16)]), &Vector::from_ints(&[1, 0])).unwrap();
        assert!(o.has_string(&l));
    }

    #[test]
    fn scaff_translates_need_halves() {
        let scaff = catalog("Scaff").unwrap();
        let x = Vector::from_ints(&[1, 0, 0]);
        let missing = StringGeom::line(&Point::from_ints(&[0, 1, 0]), &x).unwrap();
        let odd = TensorOracle::new(&scaff, &"3^inf".parse().unwrap()).unwrap();
        let even = TensorOracle::new(&scaff, &"2^inf".parse().unwrap()).unwrap();
        assert!(!odd.has_string(&missing));
        assert!(even.has_string(&missing));
    }

    #[test]
    fn triadic_kagome_contains_thirds() {
        let o = ScalingUnionOracle::new(&catalog("kag").unwrap(), 3).unwrap();
        let l = StringGeom::line(&Point::zero(2), &Vector::from_ints(&[1, 0])).unwrap();
        let third = ScaledIsometry::dilation(2, ExactScalar::frac(1, 9)).unwrap();
        let moved = ScaledIsometry::translation(Vector::new(vec![ExactScalar::zero(), ExactScalar::sqrt3()]))
            .apply_string(&l)
            .unwrap();
        assert!(o.has_string(&third.apply_string(&moved).unwrap()));
        let half = ScaledIsometry::dilation(2, ExactScalar::frac(1, 2)).unwrap();
        assert!(!o.has_string(&half.apply_string(&moved).unwrap()));
    }

    #[test]
    fn grid_nodes_are_offset_products() {
        let e: BTreeSet<ExactScalar> = [0, 1, 3].iter().map(|&k| ExactScalar::int(k)).collect();
        let o = GridOracle::new(vec![e.clone(), e]).unwrap();
        assert!(o.is_node(&Point::from_ints(&[3, 1])));
        assert!(!o.is_node(&Point::from_ints(&[2, 1])));
        assert_eq!(o.strings_through(&Point::from_ints(&[2, 1])).len(), 1);
    }
}
