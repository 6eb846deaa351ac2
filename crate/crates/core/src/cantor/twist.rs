//! Smooth area-preserving twist maps of the disc.
//!
//! In polar coordinates about a centre, a twist is `(r, θ) ↦ (r, θ + φ(r))`.
//! Its Jacobian determinant is 1 for any profile φ, since it shears the
//! angle along circles. The profile here is constant inside `r_in`, zero
//! outside `r_out`, and joined by a quintic smoothstep in between.

use std::f64::consts::PI;

use crate::error::DynamicsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistMap {
    pub center: [f64; 2],
    pub r_in: f64,
    pub r_out: f64,
    pub angle: f64,
}

/// Quadrant labels of the centred square, counter-clockwise from the upper
/// right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    A,
    B,
    C,
    D,
}

impl Sector {
    pub fn of(p: [f64; 2]) -> Self {
        match (p[0] >= 0.0, p[1] >= 0.0) {
            (true, true) => Sector::A,
            (false, true) => Sector::B,
            (false, false) => Sector::C,
            (true, false) => Sector::D,
        }
    }

    /// Centre of the sector's quarter of the square `[-1/2, 1/2]²`.
    pub fn centroid(self) -> [f64; 2] {
        match self {
            Sector::A => [0.25, 0.25],
            Sector::B => [-0.25, 0.25],
            Sector::C => [-0.25, -0.25],
            Sector::D => [0.25, -0.25],
        }
    }
}

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

fn smoothstep_derivative(t: f64) -> f64 {
    if !(0.0..=1.0).contains(&t) {
        return 0.0;
    }
    30.0 * t * t * (t - 1.0) * (t - 1.0)
}

impl TwistMap {
    pub fn new(center: [f64; 2], r_in: f64, r_out: f64, angle: f64) -> Result<Self, DynamicsError> {
        if !(r_in > 0.0 && r_out > r_in) {
            return Err(DynamicsError::InvalidRadii { r_in, r_out });
        }
        if center[0].hypot(center[1]) + r_out > 1.0 + 1e-12 {
            return Err(DynamicsError::AnnulusOutsideDisc { cx: center[0], cy: center[1], r_out });
        }
        Ok(Self { center, r_in, r_out, angle })
    }

    /// Rotation by π of everything within radius 3/4, which covers the
    /// embedded square, tapering to the identity at the unit circle.
    pub fn rho() -> Self {
        Self::new([0.0, 0.0], 0.75, 1.0, PI).expect("valid radii")
    }

    /// Rotation by π of the inner disc of radius 0.35, exchanging the parts of
    /// opposite sectors near the centre, with a collar out to 0.7.
    pub fn sigma() -> Self {
        Self::new([0.0, 0.0], 0.35, 0.7, PI).expect("valid radii")
    }

    /// Twist angle at radius `r`.
    pub fn profile(&self, r: f64) -> f64 {
        self.angle * (1.0 - smoothstep((r - self.r_in) / (self.r_out - self.r_in)))
    }

    pub fn profile_derivative(&self, r: f64) -> f64 {
        let w = self.r_out - self.r_in;
        -self.angle * smoothstep_derivative((r - self.r_in) / w) / w
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let (dx, dy) = (p[0] - self.center[0], p[1] - self.center[1]);
        let phi = self.profile(dx.hypot(dy));
        if phi == 0.0 {
            return p;
        }
        let (s, c) = phi.sin_cos();
        [self.center[0] + c * dx - s * dy, self.center[1] + s * dx + c * dy]
    }

    /// Closed-form Jacobian: `R(φ)·(I + φ'(r)·J d dᵀ / r)` with `d = p - c`.
    pub fn jacobian(&self, p: [f64; 2]) -> [[f64; 2]; 2] {
        let (dx, dy) = (p[0] - self.center[0], p[1] - self.center[1]);
        let r = dx.hypot(dy);
        let phi = self.profile(r);
        let (s, c) = phi.sin_cos();
        let k = if r > 0.0 { self.profile_derivative(r) / r } else { 0.0 };
        // I + k·(-dy, dx)ᵀ(dx, dy)
        let m = [[1.0 - k * dy * dx, -k * dy * dy], [k * dx * dx, 1.0 + k * dx * dy]];
        [[c * m[0][0] - s * m[1][0], c * m[0][1] - s * m[1][1]], [s * m[0][0] + c * m[1][0], s * m[0][1] + c * m[1][1]]]
    }

    /// Velocity field whose angular speed is the profile:
    /// `φ(r)·(-(y - cy), x - cx)`. Its time-1 flow is this twist map.
    pub fn field(&self, p: [f64; 2]) -> [f64; 2] {
        let (dx, dy) = (p[0] - self.center[0], p[1] - self.center[1]);
        let w = self.profile(dx.hypot(dy));
        [-w * dy, w * dx]
    }
}

/// Fourth-order central-difference Jacobian of a planar map.
pub fn numeric_jacobian(f: impl Fn([f64; 2]) -> [f64; 2], p: [f64; 2], h: f64) -> [[f64; 2]; 2] {
    let mut jac = [[0.0; 2]; 2];
    for j in 0..2 {
        let at = |k: f64| {
            let mut q = p;
            q[j] += k * h;
            f(q)
        };
        let (p1, m1, p2, m2) = (at(1.0), at(-1.0), at(2.0), at(-2.0));
        for i in 0..2 {
            jac[i][j] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h);
        }
    }
    jac
}

pub fn det2(m: [[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Step for [`numeric_jacobian`] on twist maps.
pub const JACOBIAN_STEP: f64 = 1e-4;
