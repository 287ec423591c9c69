//! Random-state ensembles over the Bloch ball.
//!
//! All sampling goes through [`SeededSampler`], a ChaCha12 stream keyed by
//! (seed, stream). Substreams are derived by hashing, not by splitting the
//! parent's output, so a substream's draws do not depend on how much the
//! parent has already consumed. Each sampler method consumes a fixed number
//! of uniforms regardless of the values drawn, which keeps draw indices
//! aligned across parameter choices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::bloch::BlochVector;
use crate::error::{Error, Result};

/// splitmix64 finalizer; bijective on u64.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SeededSampler {
    seed: u64,
    stream: u64,
    rng: ChaCha12Rng,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        let mut word = mix64(seed) ^ mix64(stream.wrapping_add(0xD1B5_4A32_D192_ED03));
        for chunk in key.chunks_exact_mut(8) {
            word = mix64(word);
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        SeededSampler {
            seed,
            stream,
            rng: ChaCha12Rng::from_seed(key),
        }
    }

    /// Child stream keyed by (seed, stream, child); independent of how many
    /// draws this sampler has already made.
    pub fn substream(&self, child: u64) -> SeededSampler {
        SeededSampler::with_stream(self.seed, mix64(self.stream) ^ child)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// Fair coin; one uniform.
    pub fn coin(&mut self) -> bool {
        self.uniform() < 0.5
    }

    /// Uniform unit vector; two uniforms (cosine of polar angle, azimuth).
    pub fn sample_direction(&mut self) -> BlochVector {
        let cos_polar = 2.0 * self.uniform() - 1.0;
        let azimuth = 2.0 * std::f64::consts::PI * self.uniform();
        let sin_polar = (1.0 - cos_polar * cos_polar).max(0.0).sqrt();
        BlochVector::new(
            sin_polar * azimuth.cos(),
            sin_polar * azimuth.sin(),
            cos_polar,
        )
        .expect("unit vector is a valid Bloch vector")
    }

    /// Bloch-length draw for the Hilbert-Schmidt ensemble (density 3r^2 on
    /// [0, 1]); one uniform.
    pub fn sample_hs_length(&mut self) -> f64 {
        self.uniform().cbrt()
    }

    /// Hilbert-Schmidt random state; three uniforms.
    pub fn sample_hs_state(&mut self) -> BlochVector {
        let r = self.sample_hs_length();
        self.sample_direction().scale(r)
    }

    /// Uniform state on the given unitary orbit; two uniforms.
    pub fn sample_orbit(&mut self, orbit: OrbitSpec) -> BlochVector {
        self.sample_direction().scale(orbit.radius())
    }

    /// Angle between two independent uniform directions (density sin/2 on
    /// [0, pi]); one uniform.
    pub fn sample_angle(&mut self) -> f64 {
        (1.0 - 2.0 * self.uniform()).acos()
    }
}

/// Unitary orbit of qubit states with spectrum {1 - mu, mu}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSpec {
    smaller_eigenvalue: f64,
}

impl OrbitSpec {
    pub fn new(smaller_eigenvalue: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&smaller_eigenvalue) {
            return Err(Error::domain(format!(
                "orbit eigenvalue {smaller_eigenvalue} outside [0, 1/2]"
            )));
        }
        Ok(OrbitSpec { smaller_eigenvalue })
    }

    pub fn smaller_eigenvalue(&self) -> f64 {
        self.smaller_eigenvalue
    }

    /// Bloch radius shared by every state on the orbit.
    pub fn radius(&self) -> f64 {
        1.0 - 2.0 * self.smaller_eigenvalue
    }
}
