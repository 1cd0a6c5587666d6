//! Exact membership predicates for infinite nets and meshes.

use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{Point, ScaledIsometry, StringGeom, StringKind};

use super::motif::{equivalent_strings, Lattice, Motif};

/// Membership in an infinite string-node structure.
pub trait NetOracle: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn is_node(&self, p: &Point) -> bool;
    /// Whether `s` is exactly one of the strings.
    fn has_string(&self, s: &StringGeom) -> bool;
    /// All strings containing the point `p`.
    fn strings_through(&self, p: &Point) -> Vec<StringGeom>;
}

/// Oracle of the periodic net generated by a motif.
#[derive(Clone, Debug)]
pub struct PeriodicOracle {
    lattice: Lattice,
    motif: Motif,
}

impl PeriodicOracle {
    pub fn new(motif: &Motif) -> Result<Self> {
        if motif
            .string_reps
            .iter()
            .any(|s| s.kind() == StringKind::Ray)
        {
            return Err(Error::NotRepresentable(
                "periodic nets with ray strings are not supported".into(),
            ));
        }
        Ok(PeriodicOracle {
            lattice: motif.lattice()?,
            motif: motif.clone(),
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Index of the node class of `p`.
    pub fn node_class(&self, p: &Point) -> Option<usize> {
        self.motif
            .node_reps
            .iter()
            .position(|r| self.lattice.contains(&(p - r)))
    }

    /// Index of the string class of `s`.
    pub fn string_class(&self, s: &StringGeom) -> Option<usize> {
        self.motif
            .string_reps
            .iter()
            .position(|r| equivalent_strings(&self.lattice, r, s))
    }

    /// Lattice translates of a segment representative that contain `p`.
    fn segment_translates_through(&self, r: &StringGeom, p: &Point) -> Vec<StringGeom> {
        let (a, b) = r.endpoints();
        let (a, b) = (a.expect("segment"), b.expect("segment"));
        let ca = self.lattice.coords(&(p - &a));
        let cb = self.lattice.coords(&(p - &b));
        let ranges: Vec<(i64, i64)> = (0..ca.dim())
            .map(|j| {
                let (x, y) = if ca[j] <= cb[j] { (&ca[j], &cb[j]) } else { (&cb[j], &ca[j]) };
                (
                    x.ceil().to_i64().unwrap_or(i64::MIN),
                    y.floor().to_i64().unwrap_or(i64::MAX),
                )
            })
            .collect();
        let mut out = Vec::new();
        for k in lattice_range(&ranges) {
            let t = self.lattice.point(&k);
            let moved = ScaledIsometry::translation(t)
                .apply_string(r)
                .expect("same dimension");
            if moved.contains(p) {
                out.push(moved);
            }
        }
        out
    }
}

/// All integer tuples in a box of inclusive ranges.
pub(crate) fn lattice_range(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in ranges {
        let mut next = Vec::new();
        for prefix in &out {
            for k in lo..=hi {
                let mut v = prefix.clone();
                v.push(k);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

impl NetOracle for PeriodicOracle {
    fn dim(&self) -> usize {
        self.motif.dimension
    }

    fn is_node(&self, p: &Point) -> bool {
        p.dim() == self.dim() && self.node_class(p).is_some()
    }

    fn has_string(&self, s: &StringGeom) -> bool {
        s.dim() == self.dim() && self.string_class(s).is_some()
    }

    fn strings_through(&self, p: &Point) -> Vec<StringGeom> {
        let mut out: Vec<StringGeom> = Vec::new();
        for r in &self.motif.string_reps {
            match r.kind() {
                StringKind::Line => {
                    if self.lattice.same_line_class(r.anchor(), p, r.direction()) {
                        out.push(StringGeom::line(p, r.direction()).expect("nonzero"));
                    }
                }
                _ => out.extend(self.segment_translates_through(r, p)),
            }
        }
        out.sort();
        out.dedup();
        out
    }
}
