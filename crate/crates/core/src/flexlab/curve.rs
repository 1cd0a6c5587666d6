//! Arc-length parametrized plane curves.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

pub type P2 = [f64; 2];

pub(crate) fn add(a: P2, b: P2) -> P2 {
    [a[0] + b[0], a[1] + b[1]]
}

pub(crate) fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn scale(a: P2, k: f64) -> P2 {
    [a[0] * k, a[1] * k]
}

pub(crate) fn norm(a: P2) -> f64 {
    a[0].hypot(a[1])
}

pub(crate) fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub(crate) fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Unit-speed tolerance for closed-form curves.
pub const CLOSED_FORM_SPEED_TOL: f64 = 1e-9;
/// Unit-speed tolerance for interpolated curves.
pub const INTERPOLATED_SPEED_TOL: f64 = 1e-6;

/// A curve `γ` on `[0, L]` with position and tangent.
pub trait Curve: Send + Sync {
    fn length(&self) -> f64;
    fn position(&self, s: f64) -> P2;
    fn tangent(&self, s: f64) -> P2;
    /// Tolerance on `|γ′| − 1` at validation samples.
    fn speed_tolerance(&self) -> f64 {
        CLOSED_FORM_SPEED_TOL
    }
}

/// `γ(s) = s·d` for a unit vector `d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Straight {
    pub direction: P2,
}

impl Straight {
    pub fn new(direction: P2) -> Result<Self> {
        let n = norm(direction);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Precondition("direction must be a nonzero finite vector".into()));
        }
        Ok(Straight {
            direction: scale(direction, 1.0 / n),
        })
    }
}

impl Curve for Straight {
    fn length(&self) -> f64 {
        1.0
    }
    fn position(&self, s: f64) -> P2 {
        scale(self.direction, s)
    }
    fn tangent(&self, _s: f64) -> P2 {
        self.direction
    }
}

/// The circular arc `((1 − cos κt)/κ, sin κt / κ)` leaving the origin
/// upwards with tangent `(sin κt, cos κt)`; the vertical unit segment for
/// `κ = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Curl {
    pub kappa: f64,
}

impl Curve for Curl {
    fn length(&self) -> f64 {
        1.0
    }
    fn position(&self, t: f64) -> P2 {
        if self.kappa == 0.0 {
            return [0.0, t];
        }
        let a = self.kappa * t;
        [(1.0 - a.cos()) / self.kappa, a.sin() / self.kappa]
    }
    fn tangent(&self, t: f64) -> P2 {
        let a = self.kappa * t;
        [a.sin(), a.cos()]
    }
}

/// Piecewise cubic Hermite interpolant of sampled positions and tangents.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampled {
    knots: Vec<f64>,
    points: Vec<P2>,
    tangents: Vec<P2>,
}

impl Sampled {
    pub fn new(knots: Vec<f64>, points: Vec<P2>, tangents: Vec<P2>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != points.len() || knots.len() != tangents.len() {
            return Err(Error::Precondition("need at least two samples with matching lengths".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("knots must increase".into()));
        }
        Ok(Sampled { knots, points, tangents })
    }

    /// Samples another curve at `n + 1` equally spaced parameters.
    pub fn from_curve(c: &dyn Curve, n: usize) -> Result<Self> {
        let n = n.max(1);
        let l = c.length();
        let knots: Vec<f64> = (0..=n).map(|i| l * i as f64 / n as f64).collect();
        let points = knots.iter().map(|&s| c.position(s)).collect();
        let tangents = knots.iter().map(|&s| c.tangent(s)).collect();
        Sampled::new(knots, points, tangents)
    }

    fn segment(&self, s: f64) -> (usize, f64, f64) {
        let i = match self.knots.binary_search_by(|k| k.partial_cmp(&s).expect("finite")) {
            Ok(i) => i.min(self.knots.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.knots.len() - 2),
        };
        let h = self.knots[i + 1] - self.knots[i];
        (i, (s - self.knots[i]) / h, h)
    }
}

impl Curve for Sampled {
    fn length(&self) -> f64 {
        self.knots[self.knots.len() - 1] - self.knots[0]
    }

    fn position(&self, s: f64) -> P2 {
        let (i, u, h) = self.segment(s);
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        let mut p = scale(self.points[i], h00);
        p = add(p, scale(self.tangents[i], h10 * h));
        p = add(p, scale(self.points[i + 1], h01));
        add(p, scale(self.tangents[i + 1], h11 * h))
    }

    fn tangent(&self, s: f64) -> P2 {
        let (i, u, h) = self.segment(s);
        let u2 = u * u;
        let d00 = (6.0 * u2 - 6.0 * u) / h;
        let d10 = 3.0 * u2 - 4.0 * u + 1.0;
        let d01 = (-6.0 * u2 + 6.0 * u) / h;
        let d11 = 3.0 * u2 - 2.0 * u;
        let mut p = scale(self.points[i], d00);
        p = add(p, scale(self.tangents[i], d10));
        p = add(p, scale(self.points[i + 1], d01));
        add(p, scale(self.tangents[i + 1], d11))
    }

    fn speed_tolerance(&self) -> f64 {
        INTERPOLATED_SPEED_TOL
    }
}

/// Largest `| |γ′(s)| − 1 |` over `n + 1` equally spaced samples; an error
/// when it exceeds the curve's tolerance.
pub fn validate_unit_speed(c: &dyn Curve, n: usize) -> Result<f64> {
    let n = n.max(1);
    let worst = (0..=n)
        .map(|i| (norm(c.tangent(c.length() * i as f64 / n as f64)) - 1.0).abs())
        .fold(0.0, f64::max);
    if worst > c.speed_tolerance() {
        return Err(Error::Hypothesis(format!(
            "curve speed deviates from 1 by {worst:.3e}"
        )));
    }
    Ok(worst)
}

/// Margin above `1/√2` in the angle constraint `γ′·e > 1/√2`.
pub(crate) fn cone_margin(tangent: P2, axis: P2) -> f64 {
    dot(tangent, axis) - FRAC_1_SQRT_2
}
