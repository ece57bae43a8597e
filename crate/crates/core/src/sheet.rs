//! Two-parameter sheets on rectangular grids built from independent cell increments.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::levy::{weighted_cell_sums, LevyModel, Marginal};
use crate::report::VerdictReport;
use crate::rng::{self, CellStreams};
use crate::sample::{check_path_grid, merge_sorted, position, PathSample};
use crate::verify::{default_probes, ecf_distance, EmpiricalLaw};
#[allow(unused_imports)]
use num_traits::Float;

/// Sheet values on `s_times x t_times`, row-major (row = s index).
#[derive(Debug, Clone, PartialEq)]
pub struct SheetGrid {
    pub s_times: Vec<f64>,
    pub t_times: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: u64,
}

impl SheetGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.t_times.len() + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.t_times.len())
    }
}

/// Which parameter a slice holds fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Fix `s = s_times[index]`; the slice runs over `t_times`.
    S,
    /// Fix `t = t_times[index]`; the slice runs over `s_times`.
    T,
}

/// Prepared cell laws and streams for repeated sheet draws.
struct SheetEngine {
    ns: usize,
    nt: usize,
    laws: Vec<Marginal>,
    streams: CellStreams,
}

impl SheetEngine {
    fn new(model: &LevyModel, s_times: &[f64], t_times: &[f64], seed: u64) -> Result<Self> {
        check_path_grid(s_times)?;
        check_path_grid(t_times)?;
        let (ns, nt) = (s_times.len(), t_times.len());
        let mut laws = Vec::with_capacity((ns - 1) * (nt - 1));
        let mut indices = Vec::with_capacity(laws.capacity());
        for i in 0..ns - 1 {
            for j in 0..nt - 1 {
                let area = (s_times[i + 1] - s_times[i]) * (t_times[j + 1] - t_times[j]);
                laws.push(model.marginal(area)?);
                indices.push(rng::cell_index(i, j));
            }
        }
        Ok(Self {
            ns,
            nt,
            laws,
            streams: CellStreams::from_indices(seed, indices),
        })
    }

    /// Fills `out` (ns x nt) with the next replica: zero boundary, then cumulative sums
    /// of cell increments.
    fn draw(&mut self, out: &mut [f64]) {
        let (ns, nt) = (self.ns, self.nt);
        out[..nt].fill(0.0);
        let mut c = 0;
        for i in 1..ns {
            let (prev, cur) = out[(i - 1) * nt..(i + 1) * nt].split_at_mut(nt);
            cur[0] = 0.0;
            let mut acc = 0.0;
            for j in 1..nt {
                acc += self.laws[c].draw(self.streams.cell(c));
                cur[j] = prev[j] + acc;
                c += 1;
            }
        }
    }
}

/// Draws `count` independent sheets, handing each to `visit` without storing them all.
/// Cell `(i, j)` of replica `r` uses the `r`-th draw of stream `(i, j)`.
pub fn for_each_levy_sheet(
    model: &LevyModel,
    s_times: &[f64],
    t_times: &[f64],
    count: usize,
    seed: u64,
    mut visit: impl FnMut(usize, &[f64]),
) -> Result<()> {
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    let mut engine = SheetEngine::new(model, s_times, t_times, seed)?;
    let mut buf = alloc::vec![0.0; s_times.len() * t_times.len()];
    for r in 0..count {
        engine.draw(&mut buf);
        visit(r, &buf);
    }
    Ok(())
}

/// `Σᵢ wᵢ L̃([sᵢ, sᵢ₊₁) × [0, t])` for each replica: the bottom strip of the sheet on
/// `s_times × {0, t}`, drawn from the same cell streams as [`for_each_levy_sheet`].
pub fn weighted_strip(
    model: &LevyModel,
    s_times: &[f64],
    t: f64,
    weights: &[f64],
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::EmptyRequest);
    }
    check_path_grid(s_times)?;
    check_path_grid(&[0.0, t])?;
    if weights.len() != s_times.len() - 1 {
        return Err(Error::InvalidParameter {
            name: "weights",
            reason: format!(
                "need one weight per cell ({}), got {}",
                s_times.len() - 1,
                weights.len()
            ),
        });
    }
    let laws = s_times
        .windows(2)
        .map(|w| model.marginal((w[1] - w[0]) * t))
        .collect::<Result<Vec<Marginal>>>()?;
    Ok(weighted_cell_sums(
        &laws,
        (0..laws.len()).map(|i| rng::cell_index(i, 0)),
        weights,
        count,
        seed,
    ))
}

/// One Lévy sheet: the increment over a cell of area `A` has the law of `L_A`.
pub fn simulate_levy_sheet(
    model: &LevyModel,
    s_times: &[f64],
    t_times: &[f64],
    seed: u64,
) -> Result<SheetGrid> {
    let mut values = Vec::new();
    for_each_levy_sheet(model, s_times, t_times, 1, seed, |_, v| values = v.to_vec())?;
    Ok(SheetGrid {
        s_times: s_times.to_vec(),
        t_times: t_times.to_vec(),
        values,
        seed,
    })
}

/// Sato sheet of a strictly 1-stable law: for strictly stable laws it coincides in law
/// with the Lévy sheet of the symmetric Cauchy model.
pub fn simulate_sato_sheet_stable1(
    scale: f64,
    s_times: &[f64],
    t_times: &[f64],
    seed: u64,
) -> Result<SheetGrid> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "scale",
            reason: format!("must be positive, got {scale}"),
        });
    }
    simulate_levy_sheet(&LevyModel::Cauchy { scale }, s_times, t_times, seed)
}

/// A one-parameter slice of a sheet.
pub fn sheet_slice(sheet: &SheetGrid, axis: Axis, index: usize) -> Result<PathSample> {
    let (len, times) = match axis {
        Axis::S => (sheet.s_times.len(), &sheet.t_times),
        Axis::T => (sheet.t_times.len(), &sheet.s_times),
    };
    if index >= len {
        return Err(Error::IndexOutOfRange { index, len });
    }
    let values = match axis {
        Axis::S => sheet
            .rows()
            .nth(index)
            .map(<[f64]>::to_vec)
            .unwrap_or_default(),
        Axis::T => sheet.rows().map(|r| r[index]).collect(),
    };
    Ok(PathSample {
        times: times.clone(),
        values,
        seed: sheet.seed,
    })
}

/// Draws `(L̃_{p}, L̃_{q}, …)` at the given points `(s, t)`; with `corrupt = Some(f)` the
/// values at points with `s > t` are multiplied by `f`.
pub fn sheet_points(
    model: &LevyModel,
    points: &[(f64, f64)],
    count: usize,
    seed: u64,
    corrupt: Option<f64>,
) -> Result<Vec<f64>> {
    let grid = merge_sorted(points.iter().flat_map(|p| [p.0, p.1]).chain([0.0]));
    let idx: Vec<(usize, usize)> = points
        .iter()
        .map(|p| (position(&grid, p.0), position(&grid, p.1)))
        .collect();
    let nt = grid.len();
    let mut out = Vec::with_capacity(count * points.len());
    for_each_levy_sheet(model, &grid, &grid, count, seed, |_, v| {
        for (k, &(i, j)) in idx.iter().enumerate() {
            let f = match corrupt {
                Some(f) if points[k].0 > points[k].1 => f,
                _ => 1.0,
            };
            out.push(f * v[i * nt + j]);
        }
    })?;
    Ok(out)
}

/// Compares the joint law of the sheet at `points` with that at the transposed points.
pub fn transpose_law_check(
    model: &LevyModel,
    points: &[(f64, f64)],
    count: usize,
    seed: u64,
    corrupt: Option<f64>,
) -> Result<VerdictReport> {
    if points.is_empty() {
        return Err(Error::Precondition("no probe points".into()));
    }
    let transposed: Vec<(f64, f64)> = points.iter().map(|p| (p.1, p.0)).collect();
    let a = sheet_points(model, points, count, rng::derive_seed(seed, 1), corrupt)?;
    let b = sheet_points(
        model,
        &transposed,
        count,
        rng::derive_seed(seed, 2),
        corrupt,
    )?;
    let dim = points.len();
    let a = EmpiricalLaw {
        samples: a,
        dim,
        label: format!("sheet{points:?}"),
        seed,
    };
    let b = EmpiricalLaw {
        samples: b,
        dim,
        label: format!("sheet{transposed:?}"),
        seed,
    };
    let probes = default_probes(&a, &b);
    Ok(ecf_distance(&a, &b, &probes)?.with_meta("corruption", corrupt.unwrap_or(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_is_zero_and_rectangles_recover_increments() {
        let m = LevyModel::Poisson {
            rate: 1.0,
            jump: 1.0,
        };
        let g = simulate_levy_sheet(&m, &[0.0, 0.5, 1.0, 2.0], &[0.0, 1.0, 3.0], 4).unwrap();
        for i in 0..4 {
            assert_eq!(g.get(i, 0), 0.0);
        }
        for j in 0..3 {
            assert_eq!(g.get(0, j), 0.0);
        }
        for i in 0..3 {
            for j in 0..2 {
                let inc = g.get(i + 1, j + 1) - g.get(i, j + 1) - g.get(i + 1, j) + g.get(i, j);
                assert!(inc >= -1e-12 && (inc - inc.round()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn slices() {
        let m = LevyModel::standard_brownian();
        let g = simulate_levy_sheet(&m, &[0.0, 1.0, 3.0], &[0.0, 2.0], 1).unwrap();
        let zero = sheet_slice(&g, Axis::T, 0).unwrap();
        assert!(zero.values.iter().all(|v| *v == 0.0));
        let s = sheet_slice(&g, Axis::T, 1).unwrap();
        assert_eq!(s.times, alloc::vec![0.0, 1.0, 3.0]);
        assert_eq!(s.values[2], g.get(2, 1));
        assert!(sheet_slice(&g, Axis::S, 3).is_err());
        assert_eq!(
            sheet_slice(&g, Axis::S, 2).unwrap().values,
            alloc::vec![0.0, g.get(2, 1)]
        );
    }

    #[test]
    fn sato_sheet_rejects_bad_scale() {
        assert!(simulate_sato_sheet_stable1(0.0, &[0.0, 1.0], &[0.0, 1.0], 0).is_err());
    }

    #[test]
    fn batch_first_replica_equals_single_sheet() {
        let m = LevyModel::Gamma {
            shape: 2.0,
            rate: 1.0,
        };
        let s = [0.0, 1.0, 2.0];
        let single = simulate_levy_sheet(&m, &s, &s, 11).unwrap();
        let mut first = Vec::new();
        for_each_levy_sheet(&m, &s, &s, 3, 11, |r, v| {
            if r == 0 {
                first = v.to_vec();
            }
        })
        .unwrap();
        assert_eq!(single.values, first);
    }
}
