//! Seeded sample points for the numerical suites.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_230_829;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Uniform points in the disc of the given radius about the origin.
    pub fn disc_points(&mut self, n: usize, radius: f64) -> Vec<[f64; 2]> {
        (0..n)
            .map(|_| loop {
                let p = [self.uniform(-radius, radius), self.uniform(-radius, radius)];
                if p[0].hypot(p[1]) < radius {
                    break p;
                }
            })
            .collect()
    }

    /// Chart points `(θ, x₁, x₂, x₃)` with `θ ∈ [0, 2π)` and `x ∈ [-1, 1]³`,
    /// keeping `|x| > tube`.
    pub fn chart_points(&mut self, n: usize, tube: f64) -> Vec<[f64; 4]> {
        (0..n)
            .map(|_| loop {
                let q =
                    [self.uniform(0.0, TAU), self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)];
                if (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt() > tube {
                    break q;
                }
            })
            .collect()
    }

    /// Points of the box `[-1, 1]⁴`.
    pub fn box_points(&mut self, n: usize) -> Vec<[f64; 4]> {
        (0..n).map(|_| std::array::from_fn(|_| self.uniform(-1.0, 1.0))).collect()
    }

    /// Random covector with entries in `[-1, 1]`.
    pub fn covector(&mut self) -> [f64; 4] {
        std::array::from_fn(|_| self.uniform(-1.0, 1.0))
    }
}
