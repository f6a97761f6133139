use crate::error::{Error, Result};

/// Uniform evaluation grid: `count` points starting at `origin`, spaced by `step`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid {
    pub origin: f64,
    pub step: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(origin: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() || !origin.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "grid requires finite origin and step > 0, got origin = {origin}, step = {step}"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid requires at least 2 points, got {count}"
            )));
        }
        Ok(Self { origin, step, count })
    }

    /// Grid spanning `[lo, hi]` with the given number of points (both endpoints included).
    pub fn over(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidConfig(format!(
                "grid interval must satisfy hi > lo, got [{lo}, {hi}]"
            )));
        }
        Self::new(lo, (hi - lo) / (count - 1) as f64, count)
    }

    /// Grid covering `[lo, hi]` with nodes on the lattice `step * Z`.
    ///
    /// The origin is snapped down and the end snapped up to lattice points, so
    /// integer translates of nodes remain nodes whenever `1/step` is an integer.
    pub fn aligned_cover(lo: f64, hi: f64, step: f64) -> Result<Self> {
        let i_lo = (lo / step).floor() as i64;
        let i_hi = (hi / step).ceil() as i64;
        let count = (i_hi - i_lo).max(1) as usize + 1;
        Self::new(i_lo as f64 * step, step, count)
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    /// Half-open span covered by the grid, as a closed interval of endpoints.
    pub fn span(&self) -> (f64, f64) {
        (self.origin, self.end())
    }
}
