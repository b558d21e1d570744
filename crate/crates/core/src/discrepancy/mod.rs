//! The biased empirical Joint Distribution Discrepancy.
//!
//! For samples `p = {(x_i, y_i)}_{i<m}` and `q = {(x'_j, y'_j)}_{j<n}`,
//!
//! ```text
//! JDD_b^2 = 1/m^2  sum_ij k(x_i, x_j)   l(y_i, y_j)
//!         + 1/n^2  sum_ij k(x'_i, x'_j) l(y'_i, y'_j)
//!         - 2/(mn) sum_ij k(x_i, x'_j)  l(y_i, y'_j)
//! ```
//!
//! which is the squared RKHS distance between the empirical means of
//! `phi(x) ⊗ psi(y)` under the two samples. The reported value is the
//! unsquared norm.
//!
//! [`jdd_biased`] is the production path. [`jdd_naive_oracle`] and
//! [`jdd_embedding_oracle`] compute the same number along independent
//! routes and exist to check it.

mod oracle;
pub mod rademacher;

pub use oracle::{jdd_embedding_oracle, jdd_naive_oracle};

use alloc::vec::Vec;

use crate::error::Error;
use crate::error::Result;
use crate::kernels::{gram, KernelSpec};
use crate::sample::{check_dims, PairedSample, Vector};

/// Radicands below `-RADICAND_TOLERANCE` are flagged as suspicious.
pub const RADICAND_TOLERANCE: f64 = 1e-9;

/// A discrepancy value together with the aggregate it was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct JddValue {
    /// `sqrt(max(squared_sum, 0))`.
    pub value: f64,
    pub m: usize,
    pub n: usize,
    /// The radicand before clamping.
    pub squared_sum: f64,
}

impl JddValue {
    pub(crate) fn from_radicand(squared_sum: f64, m: usize, n: usize) -> Self {
        Self {
            value: libm::sqrt(squared_sum.max(0.0)),
            m,
            n,
            squared_sum,
        }
    }

    /// True when the radicand was clamped to zero.
    pub fn clamped(&self) -> bool {
        self.squared_sum < 0.0
    }

    /// True when the radicand was more negative than rounding explains.
    pub fn suspicious(&self) -> bool {
        self.squared_sum < -RADICAND_TOLERANCE
    }
}

/// Combines the three kernel-product sums into the squared discrepancy.
pub(crate) fn radicand(s_pp: f64, s_qq: f64, s_pq: f64, m: usize, n: usize) -> f64 {
    let (mf, nf) = (m as f64, n as f64);
    s_pp / (mf * mf) + s_qq / (nf * nf) - 2.0 * s_pq / (mf * nf)
}

/// Biased empirical JDD between `p` and `q` via materialized gram matrices.
///
/// `m != n` is allowed here.
pub fn jdd_biased(
    kx: &KernelSpec,
    ky: &KernelSpec,
    p: &PairedSample,
    q: &PairedSample,
) -> Result<JddValue> {
    p.check_compatible(q)?;
    let product_sum = |a: &PairedSample, b: &PairedSample| -> Result<f64> {
        let gx = gram(kx, a.xs(), b.xs())?;
        let gy = gram(ky, a.ys(), b.ys())?;
        Ok(gx.hadamard_sum(&gy))
    };
    let s_pp = product_sum(p, p)?;
    let s_qq = product_sum(q, q)?;
    let s_pq = product_sum(p, q)?;
    Ok(JddValue::from_radicand(
        radicand(s_pp, s_qq, s_pq, p.len(), q.len()),
        p.len(),
        q.len(),
    ))
}

/// Biased empirical MMD between the point sets `a` and `b` under `k`.
///
/// Marginal-only counterpart of [`jdd_biased`], used as a baseline.
pub fn mmd_biased(k: &KernelSpec, a: &[Vector], b: &[Vector]) -> Result<f64> {
    let dim = a.first().ok_or(Error::Empty)?.dim();
    check_dims(a, dim)?;
    check_dims(b, dim)?;
    let sum = |u: &[Vector], v: &[Vector]| -> Result<f64> {
        let g = gram(k, u, v)?;
        let ones: Vec<f64> = alloc::vec![1.0; g.cols()];
        Ok((0..g.rows())
            .map(|i| crate::kernels::dot(g.row(i), &ones))
            .collect::<crate::sum::NeumaierSum>()
            .value())
    };
    let r = radicand(sum(a, a)?, sum(b, b)?, sum(a, b)?, a.len(), b.len());
    Ok(libm::sqrt(r.max(0.0)))
}
