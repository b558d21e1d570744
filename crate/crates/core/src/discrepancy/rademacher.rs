//! Joint Rademacher average of the product class `{(x, y) -> f(x) g(y)}`.
//!
//! For a fixed sign vector `s`, the supremum over the unit ball of
//! `|1/m sum_i s_i f(x_i) g(y_i)|` is the norm of `1/m sum_i s_i phi(x_i) ⊗
//! psi(y_i)`, i.e.
//!
//! ```text
//! 1/m * sqrt( sum_ij s_i s_j k(x_i, x_j) l(y_i, y_j) )
//! ```
//!
//! Averaging that over uniform signs gives the joint Rademacher average.
//! Jensen's inequality bounds the average by `1/m * sqrt(sum_i k(x_i, x_i)
//! l(y_i, y_i))`, which in turn is at most `K / sqrt(m)`.

use alloc::vec::Vec;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::kernels::{dot, gram, KernelSpec};
use crate::rng::substream;
use crate::sample::PairedSample;

/// One assignment of independent uniform signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RademacherDraw {
    signs: Vec<i8>,
    index: u64,
}

impl RademacherDraw {
    pub fn new(signs: Vec<i8>, index: u64) -> Result<Self> {
        if let Some(&bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidSign(bad));
        }
        Ok(Self { signs, index })
    }

    /// Draw number `index` of the run keyed by `seed`: sign `i` is bit
    /// `i % 64` of the `i / 64`-th word of ChaCha8 stream `index`.
    pub fn generate(m: usize, seed: u64, index: u64) -> Self {
        let mut rng = substream(seed, index);
        let mut signs = Vec::with_capacity(m);
        while signs.len() < m {
            let word = rng.next_u64();
            let take = (m - signs.len()).min(64);
            signs.extend((0..take).map(|b| if word >> b & 1 == 1 { 1 } else { -1 }));
        }
        Self { signs, index }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// Elementwise product `H = K_phi ∘ K_psi` of a sample's two self-gram
/// matrices, precomputed so that repeated draws cost one quadratic form each.
#[derive(Debug, Clone)]
pub struct ProductGram {
    m: usize,
    data: Vec<f64>,
    bound: f64,
}

impl ProductGram {
    pub fn new(kx: &KernelSpec, ky: &KernelSpec, s: &PairedSample) -> Result<Self> {
        let gx = gram(kx, s.xs(), s.xs())?;
        let gy = gram(ky, s.ys(), s.ys())?;
        let data = gx
            .as_slice()
            .iter()
            .zip(gy.as_slice())
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self {
            m: s.len(),
            data,
            bound: kx.bound().max(ky.bound()),
        })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// `1/m * sqrt(max(s' H s, 0))`.
    pub fn draw_value(&self, draw: &RademacherDraw) -> Result<f64> {
        if draw.len() != self.m {
            return Err(Error::SignLength {
                expected: self.m,
                actual: draw.len(),
            });
        }
        let signs: Vec<f64> = draw.signs().iter().map(|&s| f64::from(s)).collect();
        let mut form = 0.0;
        for (i, row) in self.data.chunks_exact(self.m).enumerate() {
            form += signs[i] * dot(row, &signs);
        }
        debug_assert!(form >= -crate::RADICAND_TOLERANCE, "quadratic form {form}");
        Ok(libm::sqrt(form.max(0.0)) / self.m as f64)
    }

    /// `1/m * sqrt(trace(H))`.
    pub fn jensen_bound(&self) -> f64 {
        let trace: f64 = (0..self.m).map(|i| self.data[i * self.m + i]).sum();
        libm::sqrt(trace) / self.m as f64
    }

    /// `K / sqrt(m)` with `K = max(K_phi, K_psi)`.
    pub fn uniform_bound(&self) -> f64 {
        self.bound / libm::sqrt(self.m as f64)
    }
}

/// Supremum over the unit ball for the single sign assignment `draw`.
pub fn rademacher_draw_value(
    kx: &KernelSpec,
    ky: &KernelSpec,
    s: &PairedSample,
    draw: &RademacherDraw,
) -> Result<f64> {
    if draw.len() != s.len() {
        return Err(Error::SignLength {
            expected: s.len(),
            actual: draw.len(),
        });
    }
    ProductGram::new(kx, ky, s)?.draw_value(draw)
}

/// Sample mean of per-draw values and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

impl MonteCarloEstimate {
    /// Mean and standard error (sample standard deviation over `sqrt(n)`).
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::TooFewTrials { min: 2, got: n });
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        let var = ss / (n - 1) as f64;
        Ok(Self {
            mean,
            std_error: libm::sqrt(var / n as f64),
            trials: n,
        })
    }
}

/// Monte Carlo estimate of the joint Rademacher average of `s` from
/// `trials` sign draws with indices `0..trials`.
pub fn rademacher_mc_estimate(
    kx: &KernelSpec,
    ky: &KernelSpec,
    s: &PairedSample,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if trials < 2 {
        return Err(Error::TooFewTrials {
            min: 2,
            got: trials,
        });
    }
    let h = ProductGram::new(kx, ky, s)?;
    let values = (0..trials as u64)
        .map(|t| h.draw_value(&RademacherDraw::generate(s.len(), seed, t)))
        .collect::<Result<Vec<_>>>()?;
    MonteCarloEstimate::from_values(&values)
}

/// `1/m * sqrt(sum_i k(x_i, x_i) l(y_i, y_i))`.
pub fn rademacher_jensen_bound(kx: &KernelSpec, ky: &KernelSpec, s: &PairedSample) -> Result<f64> {
    let mut trace = 0.0;
    for (x, y) in s.pairs() {
        kx.admit(x)?;
        ky.admit(y)?;
        trace += kx.value(x, x) * ky.value(y, y);
    }
    Ok(libm::sqrt(trace) / s.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rbf() -> KernelSpec {
        KernelSpec::rbf(0.25).unwrap()
    }

    #[test]
    fn single_pair_value_is_one_for_either_sign() {
        let s = PairedSample::from_rows(vec![vec![0.4]], vec![vec![-2.0]]).unwrap();
        for sign in [1, -1] {
            let d = RademacherDraw::new(vec![sign], 0).unwrap();
            assert_eq!(rademacher_draw_value(&rbf(), &rbf(), &s, &d).unwrap(), 1.0);
        }
        let est = rademacher_mc_estimate(&rbf(), &rbf(), &s, 50, 3).unwrap();
        assert_eq!((est.mean, est.std_error), (1.0, 0.0));
        assert_eq!(rademacher_jensen_bound(&rbf(), &rbf(), &s).unwrap(), 1.0);
    }

    #[test]
    fn repeated_pair_with_positive_signs_gives_one() {
        let m = 9;
        let s = PairedSample::from_rows(vec![vec![0.2, 0.3]; m], vec![vec![1.0]; m]).unwrap();
        let d = RademacherDraw::new(vec![1; m], 0).unwrap();
        assert_eq!(rademacher_draw_value(&rbf(), &rbf(), &s, &d).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_signs_and_lengths() {
        assert_eq!(
            RademacherDraw::new(vec![1, 0], 0),
            Err(Error::InvalidSign(0))
        );
        let s = PairedSample::from_rows(vec![vec![0.0]; 2], vec![vec![0.0]; 2]).unwrap();
        let d = RademacherDraw::new(vec![1], 0).unwrap();
        assert_eq!(
            rademacher_draw_value(&rbf(), &rbf(), &s, &d),
            Err(Error::SignLength {
                expected: 2,
                actual: 1
            })
        );
        assert!(rademacher_mc_estimate(&rbf(), &rbf(), &s, 1, 0).is_err());
    }

    #[test]
    fn generated_signs_are_reproducible_and_balanced() {
        let a = RademacherDraw::generate(1000, 42, 7);
        assert_eq!(a, RademacherDraw::generate(1000, 42, 7));
        assert_ne!(a, RademacherDraw::generate(1000, 42, 8));
        let plus = a.signs().iter().filter(|&&s| s == 1).count();
        assert!((400..600).contains(&plus), "{plus}");
        assert!(a.signs().iter().all(|&s| s == 1 || s == -1));
    }
}
