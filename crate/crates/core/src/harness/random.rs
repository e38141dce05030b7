//! Reproducible random test fields.
//!
//! Generator: ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`), whose output
//! stream is fixed across platforms. A random field has modes `0 ≤ k ≤ n/4`,
//! with cosine and sine amplitudes drawn uniformly from `[-1, 1]` and scaled
//! by `1/(1 + k²)`; draws happen in the order `k = 0 (cos), 1 (cos, sin), 2 ...`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffeo::CircleDiffeo;
use crate::error::Result;
use crate::spectral::{Mode, PeriodicField};

/// Bounds for "mild" diffeomorphisms: `‖f‖∞ ≤ 0.3`, `‖f'‖∞ ≤ 0.5`.
pub const MILD_SUP: f64 = 0.3;
pub const MILD_SLOPE: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct FieldSampler {
    rng: ChaCha8Rng,
    n: usize,
}

impl FieldSampler {
    pub fn new(n: usize, seed: u64) -> Self {
        FieldSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
        }
    }

    fn modes(&mut self, k_max: usize) -> Vec<Mode> {
        let mut modes = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let w = 1.0 / (1.0 + (k * k) as f64);
            let c = w * self.rng.gen_range(-1.0..=1.0);
            let s = if k == 0 {
                0.0
            } else {
                w * self.rng.gen_range(-1.0..=1.0)
            };
            modes.push(Mode::new(k as i64, c, s));
        }
        modes
    }

    /// Random field supported on `|k| ≤ n/4`.
    pub fn field(&mut self) -> Result<PeriodicField> {
        let modes = self.modes(self.n / 4);
        PeriodicField::from_modes(self.n, &modes)
    }

    /// Random field on `|k| ≤ k_max`.
    pub fn field_with_band(&mut self, k_max: usize) -> Result<PeriodicField> {
        let modes = self.modes(k_max.min(self.n / 2 - 1));
        PeriodicField::from_modes(self.n, &modes)
    }

    /// Random diffeomorphism with displacement rescaled to the mild bounds.
    pub fn mild_diffeo(&mut self) -> Result<CircleDiffeo> {
        self.mild_diffeo_with_band(self.n / 4)
    }

    /// Mild diffeomorphism whose displacement lives on `|k| ≤ k_max`.
    pub fn mild_diffeo_with_band(&mut self, k_max: usize) -> Result<CircleDiffeo> {
        let f = self.field_with_band(k_max)?;
        let sup = f.sup_norm();
        let slope = f.derivative().sup_norm();
        let mut scale: f64 = 1.0;
        if sup > 0.0 {
            scale = scale.min(MILD_SUP / sup);
        }
        if slope > 0.0 {
            scale = scale.min(MILD_SLOPE / slope);
        }
        CircleDiffeo::new(f.scaled(scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        let a = FieldSampler::new(64, 7).field().unwrap();
        let b = FieldSampler::new(64, 7).field().unwrap();
        let c = FieldSampler::new(64, 8).field().unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn fields_are_band_limited() {
        let u = FieldSampler::new(64, 1).field().unwrap();
        assert!(u.coeffs()[17..].iter().all(|c| c.norm() < 1e-15));
        assert!(u.coeffs()[16].norm() > 0.0);
    }

    #[test]
    fn mild_diffeos_respect_bounds() {
        let mut s = FieldSampler::new(128, 3);
        for _ in 0..10 {
            let phi = s.mild_diffeo().unwrap();
            assert!(phi.displacement().sup_norm() <= MILD_SUP + 1e-15);
            assert!(phi.displacement().derivative().sup_norm() <= MILD_SLOPE + 1e-15);
        }
    }
}
