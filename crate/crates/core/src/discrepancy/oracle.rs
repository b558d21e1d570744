//! Reference evaluations of the discrepancy, independent of the gram path.

use alloc::vec::Vec;

use super::{radicand, JddValue};
use crate::error::Result;
use crate::kernels::KernelSpec;
use crate::sample::PairedSample;
use crate::sum::NeumaierSum;

/// Same quantity as [`super::jdd_biased`], computed by plain nested loops
/// over kernel evaluations with compensated summation and no gram matrices.
///
/// Quadratic in time with constant memory; meant for `m, n` up to a few
/// hundred.
pub fn jdd_naive_oracle(
    kx: &KernelSpec,
    ky: &KernelSpec,
    p: &PairedSample,
    q: &PairedSample,
) -> Result<JddValue> {
    p.check_compatible(q)?;
    for s in [p, q] {
        for (x, y) in s.pairs() {
            kx.admit(x)?;
            ky.admit(y)?;
        }
    }
    let sum = |a: &PairedSample, b: &PairedSample| {
        let mut acc = NeumaierSum::new();
        for (x, y) in a.pairs() {
            for (u, v) in b.pairs() {
                acc.add(kx.value(x, u) * ky.value(y, v));
            }
        }
        acc.value()
    };
    Ok(JddValue::from_radicand(
        radicand(sum(p, p), sum(q, q), sum(p, q), p.len(), q.len()),
        p.len(),
        q.len(),
    ))
}

/// The discrepancy under linear kernels, computed from explicit mean
/// embeddings.
///
/// With `phi` and `psi` the identity, `phi(x) ⊗ psi(y)` is the outer product
/// `x yᵀ`. This materializes `M_p = 1/m sum x_i y_iᵀ` and
/// `M_q = 1/n sum x'_j y'_jᵀ` and returns `|M_p - M_q|_F`.
pub fn jdd_embedding_oracle(
    feature_dim_x: usize,
    feature_dim_y: usize,
    p: &PairedSample,
    q: &PairedSample,
) -> Result<JddValue> {
    for s in [p, q] {
        for (got, want) in [(s.dim_x(), feature_dim_x), (s.dim_y(), feature_dim_y)] {
            if got != want {
                return Err(crate::Error::DimensionMismatch {
                    expected: want,
                    actual: got,
                });
            }
        }
    }
    let mean_outer = |s: &PairedSample| -> Vec<f64> {
        let mut acc = alloc::vec![NeumaierSum::new(); feature_dim_x * feature_dim_y];
        for (x, y) in s.pairs() {
            for (a, xa) in x.iter().enumerate() {
                for (b, yb) in y.iter().enumerate() {
                    acc[a * feature_dim_y + b].add(xa * yb);
                }
            }
        }
        let len = s.len() as f64;
        acc.iter().map(|c| c.value() / len).collect()
    };
    let (mp, mq) = (mean_outer(p), mean_outer(q));
    let frob_sq = mp
        .iter()
        .zip(&mq)
        .map(|(a, b)| (a - b) * (a - b))
        .collect::<NeumaierSum>()
        .value();
    Ok(JddValue::from_radicand(frob_sq, p.len(), q.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn swapped_basis_pairs_are_sqrt_two_apart() {
        let p = PairedSample::from_rows(vec![vec![1.0, 0.0]], vec![vec![0.0, 1.0]]).unwrap();
        let q = PairedSample::from_rows(vec![vec![0.0, 1.0]], vec![vec![1.0, 0.0]]).unwrap();
        let d = jdd_embedding_oracle(2, 2, &p, &q).unwrap();
        assert_eq!(d.value, core::f64::consts::SQRT_2);
        assert_eq!(jdd_embedding_oracle(2, 2, &p, &p).unwrap().value, 0.0);
        assert!(jdd_embedding_oracle(3, 2, &p, &q).is_err());
    }

    #[test]
    fn naive_oracle_single_pair_closed_form() {
        let k = KernelSpec::rbf(0.25).unwrap();
        let p = PairedSample::from_rows(vec![vec![0.0]], vec![vec![0.0]]).unwrap();
        let q = PairedSample::from_rows(vec![vec![0.25]], vec![vec![-0.25]]).unwrap();
        let d = jdd_naive_oracle(&k, &k, &p, &q).unwrap();
        let a = libm::exp(-1.0);
        approx::assert_relative_eq!(d.value, libm::sqrt(2.0 - 2.0 * a * a), max_relative = 1e-14);
        assert_eq!(jdd_naive_oracle(&k, &k, &p, &p).unwrap().value, 0.0);
    }
}
