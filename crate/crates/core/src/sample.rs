//! Sample containers and grid validation.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// One trajectory on a one-dimensional grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathSample {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: u64,
}

/// `count` joint draws at a fixed list of times, stored row-major (`count x times.len()`).
#[derive(Debug, Clone, PartialEq)]
pub struct JointSample {
    pub times: Vec<f64>,
    pub count: usize,
    pub values: Vec<f64>,
    pub seed: u64,
}

impl JointSample {
    pub fn zeros(times: &[f64], count: usize, seed: u64) -> Self {
        Self {
            times: times.to_vec(),
            count,
            values: alloc::vec![0.0; count * times.len()],
            seed,
        }
    }

    pub fn width(&self) -> usize {
        self.times.len()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let w = self.width();
        &self.values[r * w..(r + 1) * w]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        let w = self.width();
        &mut self.values[r * w..(r + 1) * w]
    }

    /// All draws at the `k`-th time.
    pub fn column(&self, k: usize) -> Vec<f64> {
        let w = self.width();
        (0..self.count).map(|r| self.values[r * w + k]).collect()
    }

    /// Splits into individual paths; meaningful when `times` is a full grid.
    pub fn paths(&self) -> Vec<PathSample> {
        (0..self.count)
            .map(|r| PathSample {
                times: self.times.clone(),
                values: self.row(r).to_vec(),
                seed: self.seed,
            })
            .collect()
    }
}

/// Checks a path grid: starts at 0, strictly increasing, finite, at least two points.
pub fn check_path_grid(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 points, got {}",
            times.len()
        )));
    }
    if times[0] != 0.0 {
        return Err(Error::InvalidGrid(format!(
            "grid must start at 0, starts at {}",
            times[0]
        )));
    }
    check_times(times)
}

/// Checks a list of evaluation times: finite, nonnegative, strictly increasing, nonempty.
pub fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidGrid("empty time list".into()));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::InvalidGrid(format!(
            "time {t} is negative or not finite"
        )));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "times not strictly increasing: {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Sorted, deduplicated union of the given values.
pub fn merge_sorted(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs().max(1.0));
    v
}

/// Index of `x` in a sorted grid produced by [`merge_sorted`].
pub fn position(grid: &[f64], x: f64) -> usize {
    let i = grid.partition_point(|g| *g < x - 1e-14 * x.abs().max(1.0));
    debug_assert!(i < grid.len() && (grid[i] - x).abs() <= 1e-12 * x.abs().max(1.0));
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_checks() {
        assert!(check_path_grid(&[0.0, 1.0]).is_ok());
        assert!(check_path_grid(&[0.0]).is_err());
        assert!(check_path_grid(&[0.5, 1.0]).is_err());
        assert!(check_path_grid(&[0.0, 1.0, 1.0]).is_err());
        assert!(check_times(&[0.5, 0.25]).is_err());
        assert!(check_times(&[f64::NAN]).is_err());
    }

    #[test]
    fn merge_and_position() {
        let g = merge_sorted([1.0, 0.0, 0.5, 1.0, 0.5 + 1e-17]);
        assert_eq!(g, alloc::vec![0.0, 0.5, 1.0]);
        assert_eq!(position(&g, 0.5), 1);
        assert_eq!(position(&g, 1.0), 2);
    }
}
