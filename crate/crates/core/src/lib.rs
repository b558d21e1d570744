//! Kernel two-sample test for joint distributions.
//!
//! Two paired samples `{(x_i, y_i)}` and `{(x'_j, y'_j)}` are embedded in the
//! tensor product of two reproducing kernel Hilbert spaces, one per
//! coordinate. The distance between their empirical mean embeddings, the
//! biased empirical Joint Distribution Discrepancy (JDD), is compared
//! against a distribution-free critical value derived from McDiarmid's
//! inequality and a joint Rademacher bound:
//!
//! ```text
//! JDD_b <= sqrt( (8 K^2 / m) * (2 - ln(1 - alpha)) )
//! ```
//!
//! where `K` bounds every kernel value and `m` is the common sample size.
//! The null hypothesis `p = q` is rejected when the statistic lies strictly
//! above the threshold.
//!
//! This crate is `no_std` (it needs `alloc`). File formats, the MNIST IDX
//! reader and the command-line driver live in the companion `jdd` crate.
//!
//! ```
//! use jdd_core::{run_test, KernelSpec, PairedSample};
//!
//! let rows = |shift: f64| -> PairedSample {
//!     let xs = (0..8).map(|i| vec![0.1 * i as f64 + shift]).collect();
//!     let ys = (0..8).map(|i| vec![0.05 * i as f64]).collect();
//!     PairedSample::from_rows(xs, ys).unwrap()
//! };
//! let k = KernelSpec::rbf(0.25).unwrap();
//! let report = run_test(&k, &k, &rows(0.0), &rows(0.0), 0.05).unwrap();
//! assert_eq!(report.jdd.value, 0.0);
//! assert!(!report.reject);
//! ```

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod discrepancy;
mod error;
pub mod kernels;
pub mod mnist;
pub mod rng;
pub mod sample;
mod sum;

pub use discrepancy::rademacher::{
    rademacher_draw_value, rademacher_jensen_bound, rademacher_mc_estimate, MonteCarloEstimate,
    ProductGram, RademacherDraw,
};
pub use discrepancy::{
    jdd_biased, jdd_embedding_oracle, jdd_naive_oracle, mmd_biased, JddValue, RADICAND_TOLERANCE,
};
pub use error::{Error, Result};
pub use kernels::{
    check_function_bound, gram, kernel_eval, FunctionBoundReport, Gram, GramPair, KernelKind,
    KernelSpec, PAPER_BANDWIDTH,
};
pub use sample::{PairedSample, Vector};
pub use shift_test::{
    calibrate_null, critical_value, null_trial, run_test, threshold_grid, Calibration,
    GaussianNull, NullGenerator, RepeatedSample, TestConfig, TestReport, ThresholdGrid,
    TrialOutcome,
};
pub use sum::NeumaierSum;
