//! Regularity census of the catalog and the chirality of the K4 net.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{ExactScalar, Point};
use crate::netlib::catalog::{abc_name, catalog};
use crate::netlib::figure::FigureClass;
use crate::netlib::generate;

use super::congruence::{chirality, congruent, coordinate_mirror, double_ray_figure, ChiralityReport, Congruence, CongruenceOptions};
use super::regular::{is_regular, RegularityReport};

/// Nets of the catalog that are regular.
pub const REGULAR_NETS: [&str; 8] = ["hex", "Z2", "tri", "K4", "Scaff", "Dia", "Z3", "Bcu"];

pub fn expected_regular(name: &str) -> bool {
    REGULAR_NETS.contains(&name)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub net: String,
    pub abc: String,
    pub comment: String,
    pub degree: usize,
    pub figure: FigureClass,
    pub expected_regular: bool,
    pub report: RegularityReport,
}

impl CensusRow {
    pub fn matches_expectation(&self) -> bool {
        self.report.is_regular() == self.expected_regular
    }
}

/// Regularity reports for catalog nets, truncated at radius `r`.
pub fn census(names: &[&str], r: &ExactScalar) -> Result<Vec<CensusRow>> {
    names
        .par_iter()
        .map(|name| {
            let net = generate(&catalog(name)?, r)?;
            let report = is_regular(&net)?;
            let (abc, comment) = abc_name(name).unwrap_or(("-", "-"));
            Ok(CensusRow {
                net: net.name.clone(),
                abc: abc.to_string(),
                comment: comment.to_string(),
                degree: report.degree,
                figure: report.figures.first().copied().unwrap_or(FigureClass::Other),
                expected_regular: expected_regular(&net.name),
                report,
            })
        })
        .collect()
}

/// Plain text table with one line per net.
pub fn census_table(rows: &[CensusRow]) -> String {
    let mut out = format!(
        "{:<6} {:>6}  {:<14} {:<4} {:<20} {}\n",
        "net", "degree", "figure", "abc", "comment", "verdict"
    );
    for row in rows {
        let verdict = match &row.report.verdict {
            super::regular::Verdict::Regular => "regular".to_string(),
            super::regular::Verdict::NotRegular(r) => format!("not regular ({r})"),
        };
        out.push_str(&format!(
            "{:<6} {:>6}  {:<14} {:<4} {:<20} {}\n",
            row.net,
            row.degree,
            row.figure.as_str(),
            row.abc,
            row.comment,
            verdict
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K4Chirality {
    /// Isometries from the double ray figure at `B` onto its mirror image.
    pub double_figure: ChiralityReport,
    /// Whole-net search for a proper map from K4 onto its mirror image.
    pub whole_net: Congruence,
}

/// The double ray figure at `B = (−1,−1,1)` and a neighbour, and the
/// mirror-image search on a window of radius `r`.
pub fn k4_chirality(r: &ExactScalar) -> Result<K4Chirality> {
    let motif = catalog("K4")?;
    let net = generate(&motif, r)?;
    let b = Point::from_ints(&[-1, -1, 1]);
    let bi = net
        .node_id(&b)
        .ok_or_else(|| crate::Error::Precondition("window does not contain B".into()))?;
    let g = net.nodes()[*net.neighbours(bi).iter().min().expect("B has neighbours")]
        .point
        .clone();
    let segs = double_ray_figure(&net, &b, &g);
    let mirror = coordinate_mirror(3);
    let double_figure = chirality(&segs, &mirror);
    let mirrored = generate(&motif.mirror()?, r)?;
    let whole_net = congruent(
        &net,
        &mirrored,
        CongruenceOptions {
            allow_scaling: false,
            allow_reflection: false,
        },
    );
    Ok(K4Chirality {
        double_figure,
        whole_net,
    })
}
