//! File formats, run configurations and verification suites for the `idt` command.

pub mod catalogue;
pub mod config;
pub mod error;
pub mod io;
pub mod suites;

use std::io::Write;

use idt_core::constructions::{IdtProcess, MarginalSampler, ProcessSampler};
use idt_core::fields::sample_field;
use idt_core::kernels::{sample_gaussian_joint, weak_bm_joint};
use idt_core::levy::simulate_paths;
use idt_core::rng::derive_seed;
use idt_core::sample::JointSample;
use idt_core::sheet::{for_each_levy_sheet, SheetGrid};

use crate::config::{config_hash, env_seed, SimulateConfig, Target, DEFAULT_SEED};
use crate::error::AppResult;
use crate::io::Provenance;

/// Seed precedence for `simulate`: flag, then environment, then config, then default.
pub fn simulate_seed(cfg: &SimulateConfig, flag: Option<u64>) -> AppResult<u64> {
    Ok(match flag {
        Some(s) => s,
        None => env_seed()?.or(cfg.seed).unwrap_or(DEFAULT_SEED),
    })
}

/// Runs a simulate config and writes the CSV artifact to `out`.
pub fn simulate<W: Write>(cfg: &SimulateConfig, seed: u64, out: W) -> AppResult<()> {
    let prov = Provenance {
        config_hash: config_hash(cfg)?,
        seed,
    };
    let count = cfg.count;
    match &cfg.target {
        Target::LevyPath { model, times } => {
            io::write_joint(out, &prov, &simulate_paths(model, times, count, seed)?)
        }
        Target::LevySheet {
            model,
            s_times,
            t_times,
        } => {
            let mut sheets = Vec::with_capacity(count);
            for_each_levy_sheet(model, s_times, t_times, count, seed, |_, v| {
                sheets.push(SheetGrid {
                    s_times: s_times.clone(),
                    t_times: t_times.clone(),
                    values: v.to_vec(),
                    seed,
                });
            })?;
            io::write_sheets(out, &prov, &sheets)
        }
        Target::Gaussian { kernel, times } => io::write_joint(
            out,
            &prov,
            &sample_gaussian_joint(&kernel.build()?, times, count, seed)?,
        ),
        Target::Idt {
            spec,
            times,
            associated: false,
        } => io::write_joint(
            out,
            &prov,
            &IdtProcess::new(spec.clone())?.sample_at(times, count, seed)?,
        ),
        Target::Idt {
            spec,
            times,
            associated: true,
        } => {
            let assoc = IdtProcess::new(spec.clone())?.associated()?;
            let mut s = JointSample::zeros(times, count, seed);
            for (k, &t) in times.iter().enumerate() {
                let col = if t == 0.0 {
                    vec![0.0; count]
                } else {
                    assoc.sample_marginal(t, count, derive_seed(seed, k as u64))?
                };
                for (r, v) in col.into_iter().enumerate() {
                    s.row_mut(r)[k] = v;
                }
            }
            io::write_joint(out, &prov, &s)
        }
        Target::WeakBrownian { times } => {
            io::write_joint(out, &prov, &weak_bm_joint(times, count, seed)?)
        }
        Target::Field { spec, points } => {
            io::write_field(out, &prov, &sample_field(spec, points, count, seed)?)
        }
    }
}
