//! Seeded two-dimensional toy data sets with gold labels.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DataSet;
use crate::linalg::DenseMatrix;

/// Distance between adjacent blob centers, and the gap between rings.
pub const CENTER_SPACING: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyntheticKind {
    /// Isotropic Gaussians centered on a regular K-gon with unit edge.
    Blobs,
    /// Concentric circles of radius 1..=K with uniform radial jitter in `[−noise, noise]`.
    Rings,
    /// Interleaved half circles shifted one unit apart, alternating orientation.
    Moons,
}

impl std::str::FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blobs" => Ok(Self::Blobs),
            "rings" => Ok(Self::Rings),
            "moons" => Ok(Self::Moons),
            other => Err(Error::InvalidConfig(format!("unknown synthetic kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    pub per_cluster: usize,
    pub k: usize,
    pub noise: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(kind: SyntheticKind, k: usize, per_cluster: usize, noise: f64, seed: u64) -> Self {
        Self {
            kind,
            per_cluster,
            k,
            noise,
            seed,
        }
    }
}

/// Blob centers: vertices of a regular K-gon whose edges have length [`CENTER_SPACING`].
pub fn blob_centers(k: usize) -> Vec<[f64; 2]> {
    if k <= 1 {
        return vec![[0.0, 0.0]; k];
    }
    let radius = CENTER_SPACING / (2.0 * (PI / k as f64).sin());
    (0..k)
        .map(|c| {
            let t = 2.0 * PI * c as f64 / k as f64;
            [radius * t.cos(), radius * t.sin()]
        })
        .collect()
}

/// Points are emitted cluster by cluster; labels are cluster indices.
pub fn generate(spec: &SyntheticSpec) -> Result<DataSet> {
    if !(spec.noise >= 0.0 && spec.noise.is_finite()) {
        return Err(Error::InvalidConfig(format!("noise must be finite and nonnegative, got {}", spec.noise)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let gauss = Normal::new(0.0, spec.noise).expect("valid standard deviation");
    let n = spec.per_cluster * spec.k;
    let mut data = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(n);
    let centers = blob_centers(spec.k);
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..spec.per_cluster {
            let p = match spec.kind {
                SyntheticKind::Blobs => [
                    center[0] + gauss.sample(&mut rng),
                    center[1] + gauss.sample(&mut rng),
                ],
                SyntheticKind::Rings => {
                    let t = rng.random_range(0.0..2.0 * PI);
                    let jitter = if spec.noise > 0.0 {
                        rng.random_range(-spec.noise..=spec.noise)
                    } else {
                        0.0
                    };
                    let r = CENTER_SPACING * (c + 1) as f64 + jitter;
                    [r * t.cos(), r * t.sin()]
                }
                SyntheticKind::Moons => {
                    let t = rng.random_range(0.0..PI);
                    let shift = (c / 2 * 2) as f64;
                    let (x, y) = if c % 2 == 0 {
                        (t.cos() + shift, t.sin())
                    } else {
                        (1.0 - t.cos() + shift, 0.5 - t.sin())
                    };
                    [x + gauss.sample(&mut rng), y + gauss.sample(&mut rng)]
                }
            };
            data.extend_from_slice(&p);
            labels.push(c);
        }
    }
    DataSet::new(DenseMatrix::new(n, 2, data)?, Some(labels))
}
