//! The laminar curl flex of the grid mesh.

use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::meshops::MeshTruncation;
use crate::netlib::NetTruncation;

use super::checks::{
    collision_sampler, injectivity_condition, laminarity_test, unit_square_segments, verify_string_lengths,
    CollisionReport, InjectivityReport, LaminarityReport, LengthReport, LENGTH_TOL,
};
use super::curve::{norm, sub, P2};
use super::placement::{LaminarPlacement, Placement};

/// Tolerance knobs of the verification bundle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlexTolerances {
    pub curve_samples: usize,
    pub collision_pairs: usize,
    pub seed: u64,
    pub length_tol: f64,
    pub laminarity_h: f64,
    pub laminarity_tol: f64,
    /// Bound on the reconstruction residual for a green step.
    pub residual_tol: f64,
}

impl Default for FlexTolerances {
    fn default() -> Self {
        FlexTolerances {
            curve_samples: 1000,
            collision_pairs: super::checks::COLLISION_PAIRS,
            seed: 0,
            length_tol: LENGTH_TOL,
            laminarity_h: 1.0 / 32.0,
            laminarity_tol: 1e-6,
            residual_tol: 1e-10,
        }
    }
}

/// `t ↦ p_t`, the laminar placement with straight horizontal strings and
/// vertical strings curled with curvature `t·κ_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlexPath {
    pub kappa_max: f64,
    pub times: Vec<f64>,
}

impl FlexPath {
    pub fn placement(&self, t: f64) -> LaminarPlacement {
        LaminarPlacement::curl(t * self.kappa_max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub time: f64,
    pub kappa: f64,
    pub injectivity: InjectivityReport,
    pub collisions: CollisionReport,
    pub lengths: LengthReport,
    pub laminarity: LaminarityReport,
    /// Largest node displacement from the previous step.
    pub displacement: f64,
}

impl StepReport {
    pub fn green(&self, tol: &FlexTolerances) -> bool {
        self.injectivity.certified
            && self.collisions.injective_on_samples()
            && self.lengths.within_tolerance()
            && self.laminarity.laminar
            && self.laminarity.residual <= tol.residual_tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlexDemo {
    pub path: FlexPath,
    pub tolerances: FlexTolerances,
    pub steps: Vec<StepReport>,
}

impl FlexDemo {
    pub fn all_green(&self) -> bool {
        self.steps.iter().all(|s| s.green(&self.tolerances))
    }

    pub fn min_margin(&self) -> f64 {
        self.steps.iter().map(|s| s.injectivity.min_margin).fold(f64::INFINITY, f64::min)
    }

    pub fn max_length_error(&self) -> f64 {
        self.steps.iter().map(|s| s.lengths.max_error).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.steps.iter().map(|s| s.laminarity.residual).fold(0.0, f64::max)
    }

    pub fn max_displacement(&self) -> f64 {
        self.steps.iter().map(|s| s.displacement).fold(0.0, f64::max)
    }
}

/// Nodes of `net` in `[0,1]²` and the internodal segments between them.
pub fn unit_square_nodes(net: &NetTruncation) -> Vec<P2> {
    let mut pts: Vec<P2> = unit_square_segments(net).into_iter().flat_map(|(a, b)| [a, b]).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    pts
}

/// Placed vertices and edges of the part of `net` in `[0,1]²`.
pub fn placed_frame(q: &dyn Placement, net: &NetTruncation) -> (Vec<P2>, Vec<(usize, usize)>) {
    let nodes = unit_square_nodes(net);
    let index = |p: &P2| {
        nodes
            .binary_search_by(|x| x[0].total_cmp(&p[0]).then(x[1].total_cmp(&p[1])))
            .expect("segment endpoint")
    };
    let edges = unit_square_segments(net).iter().map(|(a, b)| (index(a), index(b))).collect();
    (nodes.iter().map(|&p| q.eval(p)).collect(), edges)
}

/// Runs the verification bundle on `p_t` for `t = i / steps`.
pub fn grid_flex_demo(kappa_max: f64, steps: usize, mesh: &MeshTruncation) -> Result<FlexDemo> {
    grid_flex_demo_with(kappa_max, steps, mesh, FlexTolerances::default())
}

pub fn grid_flex_demo_with(
    kappa_max: f64,
    steps: usize,
    mesh: &MeshTruncation,
    tolerances: FlexTolerances,
) -> Result<FlexDemo> {
    if !(kappa_max.is_finite() && (0.0..FRAC_PI_4).contains(&kappa_max)) {
        return Err(Error::Precondition(format!("κ_max = {kappa_max} must lie in [0, π/4)")));
    }
    if mesh.net.dimension != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: mesh.net.dimension });
    }
    let steps = steps.max(1);
    let path = FlexPath {
        kappa_max,
        times: (0..=steps).map(|i| i as f64 / steps as f64).collect(),
    };
    let nodes = unit_square_nodes(&mesh.net);
    let mut out = Vec::with_capacity(path.times.len());
    let mut previous: Option<LaminarPlacement> = None;
    for (step, &time) in path.times.iter().enumerate() {
        let q = path.placement(time);
        let displacement = previous.as_ref().map_or(0.0, |p| {
            nodes
                .par_iter()
                .map(|&x| norm(sub(q.eval(x), p.eval(x))))
                .reduce(|| 0.0, f64::max)
        });
        out.push(StepReport {
            step,
            time,
            kappa: time * kappa_max,
            injectivity: injectivity_condition(&q, tolerances.curve_samples)?,
            collisions: collision_sampler(&q, tolerances.collision_pairs, tolerances.seed + step as u64),
            lengths: verify_string_lengths(&q, &mesh.net, tolerances.length_tol)?,
            laminarity: laminarity_test(&q, tolerances.laminarity_h, tolerances.laminarity_tol)?,
            displacement,
        });
        previous = Some(q);
    }
    Ok(FlexDemo { path, tolerances, steps: out })
}
