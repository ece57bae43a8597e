//! Pivoted Cholesky factorisation of (possibly rank-deficient) Gram matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Relative eigenvalue floor below which a pivot counts as zero.
pub const PSD_FLOOR: f64 = 1e-10;
/// Largest relative diagonal jitter tried before a matrix is declared non-PSD.
pub const JITTER_BUDGET: f64 = 1e-8;

/// A factor `L` (n x rank, row-major) with `A ≈ L Lᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankFactor {
    pub n: usize,
    pub rank: usize,
    pub l: Vec<f64>,
    pub jitter: f64,
}

impl LowRankFactor {
    /// Writes `L z` into `out` for a standard normal vector `z` of length `rank`.
    pub fn apply(&self, z: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.n) {
            let row = &self.l[i * self.rank..(i + 1) * self.rank];
            *o = row.iter().zip(z).map(|(a, b)| a * b).sum();
        }
    }

    pub fn reconstruct(&self, i: usize, j: usize) -> f64 {
        let r = self.rank;
        (0..r).map(|k| self.l[i * r + k] * self.l[j * r + k]).sum()
    }
}

/// Factorises the symmetric `n x n` row-major matrix `a`, adding diagonal
/// jitter up to [`JITTER_BUDGET`] (relative to the largest diagonal) if needed.
pub fn psd_factor(a: &[f64], n: usize) -> Result<LowRankFactor> {
    if a.len() != n * n {
        return Err(Error::InvalidGrid(format!(
            "matrix has {} entries, expected {}",
            a.len(),
            n * n
        )));
    }
    let max_diag = (0..n).map(|i| a[i * n + i]).fold(0.0, f64::max);
    if n == 0 || max_diag == 0.0 {
        if (0..n * n).any(|k| a[k].abs() > 0.0) {
            return Err(Error::NotPsd(
                "zero diagonal with nonzero off-diagonal entries".into(),
            ));
        }
        return Ok(LowRankFactor {
            n,
            rank: 0,
            l: Vec::new(),
            jitter: 0.0,
        });
    }
    let mut jitter = 0.0;
    loop {
        let err = match try_factor(a, n, max_diag, jitter) {
            Ok(f) => return Ok(f),
            Err(e) => e,
        };
        jitter = if jitter == 0.0 {
            1e-12 * max_diag
        } else {
            jitter * 10.0
        };
        if jitter > JITTER_BUDGET * max_diag * (1.0 + 1e-9) {
            return Err(err);
        }
    }
}

fn try_factor(a: &[f64], n: usize, max_diag: f64, jitter: f64) -> Result<LowRankFactor> {
    let floor = PSD_FLOOR * max_diag;
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i] + jitter).collect();
    let mut chosen = vec![false; n];
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for _ in 0..n {
        let mut p = usize::MAX;
        let mut best = f64::NEG_INFINITY;
        for i in 0..n {
            if !chosen[i] && d[i] > best {
                best = d[i];
                p = i;
            }
        }
        if best <= floor {
            break;
        }
        let piv = best.sqrt();
        let mut col = vec![0.0; n];
        col[p] = piv;
        for i in 0..n {
            if chosen[i] || i == p {
                continue;
            }
            let mut s = a[i * n + p];
            for c in &cols {
                s -= c[i] * c[p];
            }
            col[i] = s / piv;
            d[i] -= col[i] * col[i];
        }
        chosen[p] = true;
        cols.push(col);
    }
    if let Some(i) = (0..n).find(|&i| !chosen[i] && d[i] < -floor) {
        return Err(Error::NotPsd(format!(
            "negative Schur pivot {:.3e} at index {i}",
            d[i]
        )));
    }
    let rank = cols.len();
    let mut l = vec![0.0; n * rank];
    for (k, c) in cols.iter().enumerate() {
        for i in 0..n {
            l[i * rank + k] = c[i];
        }
    }
    let f = LowRankFactor { n, rank, l, jitter };
    let tol = JITTER_BUDGET * max_diag * 10.0;
    for i in 0..n {
        for j in 0..=i {
            let target = a[i * n + j] + if i == j { jitter } else { 0.0 };
            let err = (f.reconstruct(i, j) - target).abs();
            if err > tol {
                return Err(Error::NotPsd(format!(
                    "reconstruction error {err:.3e} at ({i}, {j})"
                )));
            }
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gram(times: &[f64], k: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let n = times.len();
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] = k(times[i], times[j]);
            }
        }
        g
    }

    #[test]
    fn full_rank_matches_nalgebra_cholesky() {
        let t = [0.5, 1.0, 1.7, 3.0];
        let g = gram(&t, f64::min);
        let f = psd_factor(&g, 4).unwrap();
        assert_eq!(f.rank, 4);
        let m = nalgebra::DMatrix::from_row_slice(4, 4, &g);
        let ch = nalgebra::Cholesky::new(m.clone()).unwrap();
        let ll = ch.l() * ch.l().transpose();
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(f.reconstruct(i, j), ll[(i, j)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn rank_one_kernel_has_rank_one() {
        let t = [0.0, 1.0, 2.0, 4.0];
        let g = gram(&t, |s, u| (s * u).sqrt());
        let f = psd_factor(&g, 4).unwrap();
        assert_eq!(f.rank, 1);
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let g = [1.0, 2.0, 2.0, 1.0];
        assert!(matches!(psd_factor(&g, 2), Err(Error::NotPsd(_))));
    }

    #[test]
    fn zero_matrix_factors_to_rank_zero() {
        let f = psd_factor(&[0.0; 4], 2).unwrap();
        assert_eq!(f.rank, 0);
    }
}
