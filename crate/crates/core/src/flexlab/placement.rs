//! Placements of the unit square in the plane.

use std::sync::Arc;

use super::curve::{add, Curl, Curve, Straight, P2};

/// Step of the default central-difference Jacobian.
pub const JACOBIAN_STEP: f64 = 1e-6;

/// Columns of the Jacobian: `∂q/∂s` and `∂q/∂t`.
pub type Jacobian = [P2; 2];

/// A map `q` of the plane (at least of `[0,1]²`) into the plane.
///
/// Evaluators must be pure; verification loops call them in parallel.
pub trait Placement: Send + Sync {
    fn eval(&self, p: P2) -> P2;

    fn jacobian(&self, p: P2) -> Jacobian {
        let h = JACOBIAN_STEP;
        let col = |e: P2| {
            let a = self.eval([p[0] + h * e[0], p[1] + h * e[1]]);
            let b = self.eval([p[0] - h * e[0], p[1] - h * e[1]]);
            [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h)]
        };
        [col([1.0, 0.0]), col([0.0, 1.0])]
    }

    /// Derivative of `q` along `v` at `p`.
    fn directional(&self, p: P2, v: P2) -> P2 {
        let [js, jt] = self.jacobian(p);
        [js[0] * v[0] + jt[0] * v[1], js[1] * v[0] + jt[1] * v[1]]
    }
}

/// `p(s, t) = α1(s) + α2(t)`.
#[derive(Clone)]
pub struct LaminarPlacement {
    pub a1: Arc<dyn Curve>,
    pub a2: Arc<dyn Curve>,
}

impl LaminarPlacement {
    pub fn new(a1: Arc<dyn Curve>, a2: Arc<dyn Curve>) -> Self {
        LaminarPlacement { a1, a2 }
    }

    pub fn identity() -> Self {
        LaminarPlacement::curl(0.0)
    }

    /// Horizontal strings stay straight and vertical strings follow the
    /// circular curl of curvature `kappa`.
    pub fn curl(kappa: f64) -> Self {
        LaminarPlacement {
            a1: Arc::new(Straight { direction: [1.0, 0.0] }),
            a2: Arc::new(Curl { kappa }),
        }
    }
}

impl Placement for LaminarPlacement {
    fn eval(&self, p: P2) -> P2 {
        add(self.a1.position(p[0]), self.a2.position(p[1]))
    }

    fn jacobian(&self, p: P2) -> Jacobian {
        [self.a1.tangent(p[0]), self.a2.tangent(p[1])]
    }
}

/// `x ↦ Ax + b` with `A` given by rows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearPlacement {
    pub a: [[f64; 2]; 2],
    pub b: P2,
}

impl LinearPlacement {
    pub fn identity() -> Self {
        LinearPlacement::new([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn new(a: [[f64; 2]; 2]) -> Self {
        LinearPlacement { a, b: [0.0, 0.0] }
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        LinearPlacement::new([[c, -s], [s, c]])
    }

    /// Rotation by `theta`, optionally preceded by the reflection in the
    /// x-axis, followed by the translation `b`.
    pub fn isometry(theta: f64, reflect: bool, b: P2) -> Self {
        let r = LinearPlacement::rotation(theta).a;
        let a = if reflect {
            [[r[0][0], -r[0][1]], [r[1][0], -r[1][1]]]
        } else {
            r
        };
        LinearPlacement { a, b }
    }

    pub fn scaling(fx: f64, fy: f64) -> Self {
        LinearPlacement::new([[fx, 0.0], [0.0, fy]])
    }

    /// `(x, y) ↦ (x + k·y, y)`.
    pub fn shear(k: f64) -> Self {
        LinearPlacement::new([[1.0, k], [0.0, 1.0]])
    }

    /// `self` applied after `other`.
    pub fn compose(&self, other: &LinearPlacement) -> Self {
        let m = |i: usize, j: usize| self.a[i][0] * other.a[0][j] + self.a[i][1] * other.a[1][j];
        LinearPlacement {
            a: [[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]],
            b: self.eval(other.b),
        }
    }
}

impl Placement for LinearPlacement {
    fn eval(&self, p: P2) -> P2 {
        [
            self.a[0][0] * p[0] + self.a[0][1] * p[1] + self.b[0],
            self.a[1][0] * p[0] + self.a[1][1] * p[1] + self.b[1],
        ]
    }

    fn jacobian(&self, _p: P2) -> Jacobian {
        [[self.a[0][0], self.a[1][0]], [self.a[0][1], self.a[1][1]]]
    }
}

/// A placement given by a closure, differentiated numerically.
pub struct FnPlacement<F>(pub F);

impl<F: Fn(P2) -> P2 + Send + Sync> Placement for FnPlacement<F> {
    fn eval(&self, p: P2) -> P2 {
        (self.0)(p)
    }
}

/// Twenty linear maps that are not isometries: shears in both axes,
/// anisotropic and uniform scalings with factors at least 1.01 away from 1,
/// and rotated variants.
pub fn nonisometric_family() -> Vec<(String, LinearPlacement)> {
    let mut out = Vec::new();
    for k in [0.01, 0.05, 0.1, 0.2, 0.5] {
        out.push((format!("shear x+{k}y"), LinearPlacement::shear(k)));
        out.push((format!("shear y+{k}x"), LinearPlacement::new([[1.0, 0.0], [k, 1.0]])));
    }
    for f in [1.01, 1.05, 1.2] {
        out.push((format!("scale x by {f}"), LinearPlacement::scaling(f, 1.0)));
        out.push((format!("scale y by {f}"), LinearPlacement::scaling(1.0, f)));
    }
    out.push(("uniform scale 1.01".into(), LinearPlacement::scaling(1.01, 1.01)));
    out.push(("scale (1.1, 1/1.1)".into(), LinearPlacement::scaling(1.1, 1.0 / 1.1)));
    out.push((
        "rotated scale x by 1.02".into(),
        LinearPlacement::rotation(0.4).compose(&LinearPlacement::scaling(1.02, 1.0)),
    ));
    out.push((
        "shear 0.3 then rotation".into(),
        LinearPlacement::rotation(-1.1).compose(&LinearPlacement::shear(0.3)),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laminar_jacobian_matches_differences() {
        let p = LaminarPlacement::curl(0.7);
        let x = [0.3, 0.6];
        let exact = p.jacobian(x);
        let numeric = FnPlacement(|q| p.eval(q)).jacobian(x);
        for c in 0..2 {
            for r in 0..2 {
                assert!((exact[c][r] - numeric[c][r]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn composition_applies_right_first() {
        let a = LinearPlacement { a: [[0.0, -1.0], [1.0, 0.0]], b: [1.0, 0.0] };
        let b = LinearPlacement { a: [[2.0, 0.0], [0.0, 1.0]], b: [0.0, 3.0] };
        let c = a.compose(&b);
        let x = [0.5, -0.25];
        assert_eq!(c.eval(x), a.eval(b.eval(x)));
    }

    #[test]
    fn family_has_twenty_members() {
        assert_eq!(nonisometric_family().len(), 20);
    }
}
