//! Standard test signals (Blocks, Bumps, HeaviSine, Doppler, QuadChirp) and
//! deterministic noise replication.
//!
//! The signal formulas follow the standard Donoho–Johnstone definitions used
//! throughout the denoising literature; every constant is tabulated in
//! `docs/test_signals.md`. Samples are taken at `t_i = i / (count - 1)`,
//! inclusive of both endpoints.

use crate::error::{Error, Result};
use crate::grid::Grid;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// The five standard test signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalKind {
    Blocks,
    Bumps,
    Heavisine,
    Doppler,
    Quadchirp,
}

impl SignalKind {
    pub const ALL: [SignalKind; 5] = [
        SignalKind::Blocks,
        SignalKind::Bumps,
        SignalKind::Heavisine,
        SignalKind::Doppler,
        SignalKind::Quadchirp,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SignalKind::Blocks => "blocks",
            SignalKind::Bumps => "bumps",
            SignalKind::Heavisine => "heavisine",
            SignalKind::Doppler => "doppler",
            SignalKind::Quadchirp => "quadchirp",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "blocks" => Ok(SignalKind::Blocks),
            "bumps" => Ok(SignalKind::Bumps),
            "heavisine" => Ok(SignalKind::Heavisine),
            "doppler" => Ok(SignalKind::Doppler),
            "quadchirp" => Ok(SignalKind::Quadchirp),
            other => Err(Error::InvalidConfig(format!("unknown signal kind '{other}'"))),
        }
    }
}

impl std::fmt::Display for SignalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A real signal sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.count {
            return Err(Error::GridMismatch(format!(
                "got {} values for a grid of {} points",
                values.len(),
                grid.count
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("signal values must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        let values = vec![0.0; grid.count];
        Self { grid, values }
    }

    pub fn rms(&self) -> f64 {
        let n = self.values.len() as f64;
        (self.values.iter().map(|v| v * v).sum::<f64>() / n).sqrt()
    }

    /// Mean squared difference against another signal on the same grid.
    pub fn mse(&self, other: &SampledSignal) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("MSE requires identical grids".into()));
        }
        let n = self.values.len() as f64;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            / n)
    }
}

// ---------------------------------------------------------------------------
// signal formulas
// ---------------------------------------------------------------------------

const DJ_POSITIONS: [f64; 11] =
    [0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81];
const BLOCKS_HEIGHTS: [f64; 11] = [4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2];
const BUMPS_HEIGHTS: [f64; 11] = [4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2];
const BUMPS_WIDTHS: [f64; 11] =
    [0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005];
const DOPPLER_EPS: f64 = 0.05;

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn blocks(t: f64) -> f64 {
    DJ_POSITIONS
        .iter()
        .zip(&BLOCKS_HEIGHTS)
        .map(|(&pos, &h)| h * (1.0 + sgn(t - pos)) / 2.0)
        .sum()
}

fn bumps(t: f64) -> f64 {
    DJ_POSITIONS
        .iter()
        .zip(BUMPS_HEIGHTS.iter().zip(&BUMPS_WIDTHS))
        .map(|(&pos, (&h, &w))| h / (1.0 + ((t - pos) / w).abs()).powi(4))
        .sum()
}

fn heavisine(t: f64) -> f64 {
    4.0 * (4.0 * std::f64::consts::PI * t).sin() - sgn(t - 0.3) - sgn(0.72 - t)
}

fn doppler(t: f64) -> f64 {
    (t * (1.0 - t)).max(0.0).sqrt()
        * (2.0 * std::f64::consts::PI * (1.0 + DOPPLER_EPS) / (t + DOPPLER_EPS)).sin()
}

fn quadchirp(t: f64, count: usize) -> f64 {
    // cubic phase, quadratic instantaneous frequency
    (std::f64::consts::PI / 3.0 * count as f64 * t * t * t).sin()
}

/// Evaluate a test signal at `count` equidistant points of `[0, 1]`.
pub fn make_signal(kind: SignalKind, count: usize) -> Result<SampledSignal> {
    if count < 2 {
        return Err(Error::InvalidConfig(format!("signal needs at least 2 samples, got {count}")));
    }
    let grid = Grid::over(0.0, 1.0, count)?;
    let values = grid
        .points()
        .map(|t| match kind {
            SignalKind::Blocks => blocks(t),
            SignalKind::Bumps => bumps(t),
            SignalKind::Heavisine => heavisine(t),
            SignalKind::Doppler => doppler(t),
            SignalKind::Quadchirp => quadchirp(t, count),
        })
        .collect();
    SampledSignal::new(grid, values)
}

/// Affinely re-grid a signal onto `[alpha, beta]`, leaving the values unchanged.
pub fn map_to_interval(f: &SampledSignal, alpha: f64, beta: f64) -> Result<SampledSignal> {
    if !(beta > alpha) {
        return Err(Error::InvalidConfig(format!(
            "target interval must satisfy beta > alpha, got [{alpha}, {beta}]"
        )));
    }
    let grid = Grid::over(alpha, beta, f.grid.count)?;
    SampledSignal::new(grid, f.values.clone())
}

// ---------------------------------------------------------------------------
// noise replication
// ---------------------------------------------------------------------------

/// Gaussian noise configuration for replicated runs.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NoiseConfig {
    /// Standard deviation of the additive Gaussian noise (0 disables noise).
    pub sigma: f64,
    /// Number of replications to average over.
    pub replications: usize,
    /// Seed from which per-replication streams are derived.
    pub seed: u64,
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        Self { sigma: 0.0, replications: 1, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sigma < 0.0 || !self.sigma.is_finite() {
            return Err(Error::InvalidParameter(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if self.replications == 0 {
            return Err(Error::InvalidParameter("replications must be >= 1".into()));
        }
        Ok(())
    }
}

fn replication_rng(seed: u64, replication_index: usize) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&(replication_index as u64).to_le_bytes());
    // fixed domain tag so unrelated uses of the same seed do not collide
    bytes[16..24].copy_from_slice(b"gk-noise");
    ChaCha8Rng::from_seed(bytes)
}

/// Add i.i.d. zero-mean Gaussian noise. The stream depends only on
/// `(noise.seed, replication_index)`, so results are reproducible and
/// independent of execution order.
pub fn add_noise(
    f: &SampledSignal,
    noise: &NoiseConfig,
    replication_index: usize,
) -> Result<SampledSignal> {
    noise.validate()?;
    if replication_index >= noise.replications {
        return Err(Error::InvalidParameter(format!(
            "replication index {replication_index} out of range (replications = {})",
            noise.replications
        )));
    }
    if noise.sigma == 0.0 {
        return Ok(f.clone());
    }
    let mut rng = replication_rng(noise.seed, replication_index);
    let normal = Normal::new(0.0, noise.sigma)
        .map_err(|e| Error::InvalidParameter(format!("bad noise sigma: {e}")))?;
    let values = f.values.iter().map(|v| v + normal.sample(&mut rng)).collect();
    SampledSignal::new(f.grid, values)
}
