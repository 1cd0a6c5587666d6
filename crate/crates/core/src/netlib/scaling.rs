//! Inclusions `m·|N| ⊆ |N|` of scaled bodies.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, LineKey, ScaledIsometry, StringGeom};

use super::motif::Motif;
use super::truncation::translate_strings;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingReport {
    pub factor: u64,
    pub radius: ExactScalar,
    pub holds: bool,
    /// A string of the scaled net not contained in the body.
    pub witness: Option<StringGeom>,
    pub strings_checked: usize,
}

/// Parameter intervals of a body, grouped by supporting line.
pub(crate) struct BodyIndex {
    lines: HashMap<LineKey, Vec<(ExactScalar, ExactScalar)>>,
}

impl BodyIndex {
    pub(crate) fn new<'a>(pieces: impl IntoIterator<Item = (&'a StringGeom, (ExactScalar, ExactScalar))>) -> Self {
        let mut lines: HashMap<LineKey, Vec<(ExactScalar, ExactScalar)>> = HashMap::new();
        for (s, clip) in pieces {
            lines.entry(s.key().clone()).or_default().push(clip);
        }
        for v in lines.values_mut() {
            v.sort();
        }
        BodyIndex { lines }
    }

    /// Whether `[lo, hi]` on `key` is covered by the body.
    pub(crate) fn covers(&self, key: &LineKey, lo: &ExactScalar, hi: &ExactScalar) -> bool {
        let Some(iv) = self.lines.get(key) else {
            return false;
        };
        let mut reach = lo.clone();
        let mut started = false;
        for (a, b) in iv {
            if *a > reach {
                break;
            }
            if *b >= reach {
                reach = b.clone();
                started = true;
            }
        }
        started && reach >= *hi
    }
}

/// Checks that every string of `m·N` meeting `[-R, R]^d` lies, inside the
/// window, in the body of `N`.
pub fn scaling_inclusion(motif: &Motif, m: u64, r: &ExactScalar) -> Result<ScalingReport> {
    if m == 0 {
        return Err(Error::Precondition("scaling factor must be positive".into()));
    }
    if !r.is_positive() {
        return Err(Error::Precondition("window radius must be positive".into()));
    }
    motif.validate()?;
    let factor = ExactScalar::int(m as i64);
    let big = r * &(ExactScalar::one() + &factor);
    let body_strings = translate_strings(motif, &big)?;
    let body = BodyIndex::new(
        body_strings
            .iter()
            .filter_map(|(s, _)| s.clip_to_box(&big).map(|c| (s, c))),
    );
    let scaled = motif.transformed(
        &ScaledIsometry::dilation(motif.dimension, factor)?,
        &format!("{}x{}", m, motif.name),
    )?;
    let probes = translate_strings(&scaled, r)?;
    let mut checked = 0;
    for (s, _) in &probes {
        let (lo, hi) = s.clip_to_box(r).expect("probe meets window");
        checked += 1;
        if !body.covers(s.key(), &lo, &hi) {
            return Ok(ScalingReport {
                factor: m,
                radius: r.clone(),
                holds: false,
                witness: Some(s.clone()),
                strings_checked: checked,
            });
        }
    }
    Ok(ScalingReport {
        factor: m,
        radius: r.clone(),
        holds: true,
        witness: None,
        strings_checked: checked,
    })
}
