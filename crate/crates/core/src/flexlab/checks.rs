//! Injectivity, length preservation and laminarity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Point;
use crate::netlib::NetTruncation;

use super::curve::{cone_margin, cross, norm, sub, validate_unit_speed, P2};
use super::placement::{LaminarPlacement, Placement};

/// Pairs drawn by the brute-force injectivity sampler.
pub const COLLISION_PAIRS: usize = 10_000;
/// Ratio `|q(x) − q(y)| / |x − y|` below which a sampled pair collides.
pub const COLLISION_RATIO: f64 = 1e-6;
/// Default tolerance for string-length errors.
pub const LENGTH_TOL: f64 = 1e-8;
const MAX_QUADRATURE_DEPTH: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    Horizontal,
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConeWitness {
    pub curve: Axis,
    pub param: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InjectivityReport {
    pub certified: bool,
    /// Least value of `α′·e − 1/√2` over the samples.
    pub min_margin: f64,
    pub witness: Option<ConeWitness>,
}

/// Tests `α1′(s)·(1,0) > 1/√2` and `α2′(t)·(0,1) > 1/√2` at `samples + 1`
/// equally spaced parameters of each curve.
pub fn injectivity_condition(pl: &LaminarPlacement, samples: usize) -> Result<InjectivityReport> {
    validate_unit_speed(pl.a1.as_ref(), samples)?;
    validate_unit_speed(pl.a2.as_ref(), samples)?;
    let n = samples.max(1);
    let mut worst: Option<ConeWitness> = None;
    for (axis, curve, e) in [
        (Axis::Horizontal, &pl.a1, [1.0, 0.0]),
        (Axis::Vertical, &pl.a2, [0.0, 1.0]),
    ] {
        for i in 0..=n {
            let param = curve.length() * i as f64 / n as f64;
            let margin = cone_margin(curve.tangent(param), e);
            if worst.is_none_or(|w| margin < w.margin) {
                worst = Some(ConeWitness { curve: axis, param, margin });
            }
        }
    }
    let worst = worst.expect("samples");
    let certified = worst.margin > 0.0;
    Ok(InjectivityReport {
        certified,
        min_margin: worst.margin,
        witness: (!certified).then_some(worst),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollisionReport {
    pub pairs: usize,
    /// Least sampled `|q(x) − q(y)| / |x − y|`.
    pub min_ratio: f64,
    pub collisions: usize,
}

impl CollisionReport {
    pub fn injective_on_samples(&self) -> bool {
        self.collisions == 0
    }
}

/// Draws `pairs` random point pairs of `[0,1]²` and compares the distance
/// of their images with their distance.
pub fn collision_sampler(q: &dyn Placement, pairs: usize, seed: u64) -> CollisionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(P2, P2)> = (0..pairs)
        .map(|_| ([rng.gen(), rng.gen()], [rng.gen(), rng.gen()]))
        .collect();
    let ratios: Vec<f64> = pts
        .par_iter()
        .filter_map(|&(x, y)| {
            let d = norm(sub(x, y));
            (d > 0.0).then(|| norm(sub(q.eval(x), q.eval(y))) / d)
        })
        .collect();
    CollisionReport {
        pairs,
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        collisions: ratios.iter().filter(|&&r| r < COLLISION_RATIO).count(),
    }
}

fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    (a, fa): (f64, f64),
    (m, fm): (f64, f64),
    (b, fb): (f64, f64),
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * tol {
        return Ok(left + right + diff / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature { a, b });
    }
    Ok(simpson_step(f, (a, fa), (lm, flm), (m, fm), left, tol / 2.0, depth - 1)?
        + simpson_step(f, (m, fm), (rm, frm), (b, fb), right, tol / 2.0, depth - 1)?)
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance
/// `tol`. A constant integrand on the first five nodes returns exactly.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let m = (a + b) / 2.0;
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let (fl, fr) = (f((a + m) / 2.0), f((m + b) / 2.0));
    if !(fa.is_finite() && fm.is_finite() && fb.is_finite()) {
        return Err(Error::Quadrature { a, b });
    }
    if fa == fm && fm == fb && fa == fl && fa == fr {
        return Ok(fa * (b - a));
    }
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, (a, fa), (m, fm), (b, fb), whole, tol, MAX_QUADRATURE_DEPTH)
}

/// Length of `u ↦ q(a + u(b − a))` on `[0, 1]`.
pub fn placed_length(q: &dyn Placement, a: P2, b: P2, tol: f64) -> Result<f64> {
    let d = sub(b, a);
    adaptive_simpson(
        |u| norm(q.directional([a[0] + u * d[0], a[1] + u * d[1]], d)),
        0.0,
        1.0,
        tol,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthReport {
    pub segments: usize,
    pub max_error: f64,
    /// Internodal segment with the largest error.
    pub worst: Option<(Vec<f64>, Vec<f64>)>,
    pub tol: f64,
}

impl LengthReport {
    pub fn within_tolerance(&self) -> bool {
        self.max_error <= self.tol
    }
}

fn in_unit_square(p: &Point) -> bool {
    p.coords().iter().all(|c| !c.is_negative() && c <= &crate::exact::ExactScalar::one())
}

/// Consecutive node pairs along the strings of a planar truncation whose
/// endpoints lie in `[0,1]²`.
pub fn unit_square_segments(net: &NetTruncation) -> Vec<(P2, P2)> {
    let to2 = |p: &Point| {
        let c = p.to_f64();
        [c[0], c[1]]
    };
    net.strings()
        .iter()
        .flat_map(|s| s.nodes.windows(2))
        .map(|w| (&net.nodes()[w[0]].point, &net.nodes()[w[1]].point))
        .filter(|(a, b)| in_unit_square(a) && in_unit_square(b))
        .map(|(a, b)| (to2(a), to2(b)))
        .collect()
}

/// Compares the placed arc length of every internodal segment in `[0,1]²`
/// with its length, integrating to `tol / 10`.
pub fn verify_string_lengths(q: &dyn Placement, net: &NetTruncation, tol: f64) -> Result<LengthReport> {
    if net.dimension != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: net.dimension });
    }
    let segs = unit_square_segments(net);
    let errors: Vec<f64> = segs
        .par_iter()
        .map(|&(a, b)| Ok((placed_length(q, a, b, tol / 10.0)? - norm(sub(b, a))).abs()))
        .collect::<Result<_>>()?;
    let worst = errors
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .map(|(i, &e)| (i, e));
    Ok(LengthReport {
        segments: segs.len(),
        max_error: worst.map_or(0.0, |w| w.1),
        worst: worst.map(|(i, _)| (segs[i].0.to_vec(), segs[i].1.to_vec())),
        tol,
    })
}

/// Central-difference estimate of `∂²q/∂s∂t` at `p`.
pub fn mixed_partial(q: &dyn Placement, p: P2, h: f64) -> P2 {
    let [s, t] = p;
    let a = q.eval([s + h, t + h]);
    let b = q.eval([s + h, t - h]);
    let c = q.eval([s - h, t + h]);
    let d = q.eval([s - h, t - h]);
    let k = 4.0 * h * h;
    [(a[0] - b[0] - c[0] + d[0]) / k, (a[1] - b[1] - c[1] + d[1]) / k]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaminarityReport {
    pub laminar: bool,
    pub h: f64,
    pub tol: f64,
    pub max_mixed_partial: f64,
    /// Grid point of the largest mixed partial.
    pub witness: Vec<f64>,
    /// Largest `|q(s,t) − q(s,0) − q(0,t) + q(0,0)|` on the grid.
    pub residual: f64,
}

/// Relative cross product below which two tangents count as collinear.
const COLLINEAR_TOL: f64 = 1e-9;

/// Estimates the mixed partial on the grid of spacing `h` inside `(0,1)²`
/// and reconstructs `q` from its restrictions to the axes.
pub fn laminarity_test(q: &dyn Placement, h: f64, tol: f64) -> Result<LaminarityReport> {
    if !(h > 0.0 && h < 0.5) {
        return Err(Error::Precondition(format!("grid spacing {h} outside (0, 1/2)")));
    }
    let n = (1.0 / h).floor() as usize;
    let grid: Vec<P2> = (0..=n)
        .flat_map(|i| (0..=n).map(move |j| [i as f64 * h, j as f64 * h]))
        .collect();
    let interior = |p: &P2| p.iter().all(|&c| c >= h && c + h <= 1.0);
    for p in grid.iter().filter(|p| interior(p)) {
        let [js, jt] = q.jacobian(*p);
        if cross(js, jt).abs() <= COLLINEAR_TOL * norm(js) * norm(jt) {
            return Err(Error::Hypothesis(format!(
                "tangents at ({}, {}) are collinear",
                p[0], p[1]
            )));
        }
    }
    let (max_mixed_partial, witness) = grid
        .par_iter()
        .filter(|p| interior(p))
        .map(|&p| (norm(mixed_partial(q, p, h)), p))
        .reduce(
            || (0.0, [0.5, 0.5]),
            // ties go to the lexicographically first point, independent of the split
            |a, b| {
                let first = |x: &P2, y: &P2| x[0].total_cmp(&y[0]).then(x[1].total_cmp(&y[1])).is_lt();
                if b.0 > a.0 || (b.0 == a.0 && first(&b.1, &a.1)) {
                    b
                } else {
                    a
                }
            },
        );
    let origin = q.eval([0.0, 0.0]);
    let residual = grid
        .par_iter()
        .map(|&[s, t]| {
            let (a, b, c) = (q.eval([s, t]), q.eval([s, 0.0]), q.eval([0.0, t]));
            norm([a[0] - b[0] - c[0] + origin[0], a[1] - b[1] - c[1] + origin[1]])
        })
        .reduce(|| 0.0, f64::max);
    Ok(LaminarityReport {
        laminar: max_mixed_partial <= tol,
        h,
        tol,
        max_mixed_partial,
        witness: witness.to_vec(),
        residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub point: Vec<f64>,
    pub h: f64,
    pub error_h: f64,
    pub error_half: f64,
    /// `error_h / error_half`; `NaN` when both vanish.
    pub ratio: f64,
}

impl ConvergenceReport {
    pub fn second_order(&self) -> bool {
        (3.5..=4.5).contains(&self.ratio)
    }
}

/// Errors of the mixed-partial estimate against `exact` at steps `h` and
/// `h/2`.
pub fn mixed_partial_convergence(q: &dyn Placement, exact: P2, p: P2, h: f64) -> ConvergenceReport {
    let error_h = norm(sub(mixed_partial(q, p, h), exact));
    let error_half = norm(sub(mixed_partial(q, p, h / 2.0), exact));
    ConvergenceReport {
        point: p.to_vec(),
        h,
        error_h,
        error_half,
        ratio: error_h / error_half,
    }
}
