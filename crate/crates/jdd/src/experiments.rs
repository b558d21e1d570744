//! Seeded experiment drivers.
//!
//! Work is spread over the rayon pool (size it with `RAYON_NUM_THREADS`).
//! Every unit of work draws from its own substream, addressed by
//! [`jdd_core::rng::stream_id`]`(trial, position, role)`, and results are
//! collected in logical order, so outputs do not depend on the thread count.

use jdd_core::mnist::{sample_class, ImageSet};
use jdd_core::rng::{derive_seed, stream_id};
use jdd_core::{
    critical_value, jdd_biased, null_trial, Calibration, KernelSpec, MonteCarloEstimate,
    NullGenerator, PairedSample, ProductGram, RademacherDraw, TestConfig,
};
use rayon::prelude::*;

use crate::error::Result;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub digit: u8,
    pub m: usize,
    pub alpha: f64,
    pub rhos: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub kx: KernelSpec,
    pub ky: KernelSpec,
    pub normalize: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub rho: f64,
    /// Discrepancy of each trial, in trial order.
    pub jdds: Vec<f64>,
    pub critical_value: f64,
}

impl SweepRow {
    pub fn rejections(&self) -> usize {
        self.jdds
            .iter()
            .filter(|&&j| j > self.critical_value)
            .count()
    }

    pub fn mean(&self) -> f64 {
        self.jdds.iter().sum::<f64>() / self.jdds.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.jdds.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.jdds.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// For each rotation `rho` and trial, compares a fresh unrotated sample of
/// the digit with a fresh sample rotated by `rho`.
///
/// The reference sample of (trial `t`, rotation index `i`) is drawn with
/// seed `derive_seed(seed, stream_id(t, i, false))`, the rotated one with
/// role bit `true`.
pub fn rotation_sweep(set: &ImageSet, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let threshold = critical_value(&TestConfig::new(
        cfg.alpha,
        cfg.kx.bound().max(cfg.ky.bound()),
        cfg.m,
    )?);
    let jobs: Vec<(usize, usize)> = (0..cfg.rhos.len())
        .flat_map(|i| (0..cfg.trials).map(move |t| (i, t)))
        .collect();
    let jdds = jobs
        .par_iter()
        .map(|&(i, t)| -> Result<f64> {
            let seed = |role| derive_seed(cfg.seed, stream_id(t as u32, i as u32, role));
            let reference = sample_class(set, cfg.digit, cfg.m, 0.0, seed(false), cfg.normalize)?;
            let rotated = sample_class(
                set,
                cfg.digit,
                cfg.m,
                cfg.rhos[i],
                seed(true),
                cfg.normalize,
            )?;
            Ok(jdd_biased(&cfg.kx, &cfg.ky, &reference, &rotated)?.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(cfg
        .rhos
        .iter()
        .zip(jdds.chunks(cfg.trials))
        .map(|(&rho, chunk)| SweepRow {
            rho,
            jdds: chunk.to_vec(),
            critical_value: threshold,
        })
        .collect())
}

/// Two independent unrotated samples of one digit per trial.
#[derive(Debug, Clone)]
pub struct MnistNull<'a> {
    pub set: &'a ImageSet,
    pub digit: u8,
    pub m: usize,
    pub seed: u64,
    pub normalize: bool,
}

impl NullGenerator for MnistNull<'_> {
    fn draw(&self, trial: u64) -> jdd_core::Result<(PairedSample, PairedSample)> {
        let trial = u32::try_from(trial).expect("trial index fits in 32 bits");
        let draw = |role| {
            sample_class(
                self.set,
                self.digit,
                self.m,
                0.0,
                derive_seed(self.seed, stream_id(trial, 0, role)),
                self.normalize,
            )
        };
        Ok((draw(false)?, draw(true)?))
    }
}

/// [`jdd_core::calibrate_null`] with trials spread over the rayon pool.
pub fn calibrate_parallel<G: NullGenerator + Sync>(
    generator: &G,
    kx: &KernelSpec,
    ky: &KernelSpec,
    alpha: f64,
    trials: usize,
) -> Result<Calibration> {
    if trials == 0 {
        return Err(jdd_core::Error::TooFewTrials { min: 1, got: 0 }.into());
    }
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|t| null_trial(generator, kx, ky, alpha, t))
        .collect::<jdd_core::Result<Vec<_>>>()?;
    Ok(Calibration { alpha, outcomes })
}

/// [`jdd_core::rademacher_mc_estimate`] with draws spread over the rayon
/// pool; returns the same numbers.
pub fn rademacher_parallel(
    kx: &KernelSpec,
    ky: &KernelSpec,
    s: &PairedSample,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    let h = ProductGram::new(kx, ky, s)?;
    let values = (0..trials as u64)
        .into_par_iter()
        .map(|t| h.draw_value(&RademacherDraw::generate(s.len(), seed, t)))
        .collect::<jdd_core::Result<Vec<f64>>>()?;
    Ok(MonteCarloEstimate::from_values(&values)?)
}
