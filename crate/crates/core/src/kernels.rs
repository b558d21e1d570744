//! Bounded kernels and gram matrices.
//!
//! Every kernel here satisfies `0 <= k(a, b) <= K` for a declared bound `K`
//! on the data it accepts. The RBF kernel uses the `exp(-|a - b|^2 / sigma^2)`
//! parameterization (no factor of two in the denominator) and is bounded by
//! `K = 1`. The explicit linear kernel `k(a, b) = <a, b>` exists so that the
//! tensor-product mean embeddings can be materialized and checked
//! coordinate by coordinate; it is only bounded on data whose squared norms
//! stay under the declared `K`, and it rejects anything else.
//!
//! Values are never clamped into `[0, K]`.

use alloc::vec::Vec;

use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::substream;
use crate::sample::{check_dims, PairedSample, Vector};
use crate::sum::NeumaierSum;

/// Bandwidth used for both coordinates in the MNIST experiments.
pub const PAPER_BANDWIDTH: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum KernelKind {
    /// `exp(-|a - b|^2 / bandwidth^2)`.
    Rbf { bandwidth: f64 },
    /// `<a, b>` on vectors of length `feature_dim`; the vectors are their own
    /// features.
    ExplicitLinear { feature_dim: usize },
}

/// A kernel together with its bound `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KernelSpec {
    #[cfg_attr(feature = "serde", serde(flatten))]
    kind: KernelKind,
    bound: f64,
}

impl KernelSpec {
    pub fn rbf(bandwidth: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidBandwidth(bandwidth));
        }
        Ok(Self {
            kind: KernelKind::Rbf { bandwidth },
            bound: 1.0,
        })
    }

    /// Linear kernel on `feature_dim`-dimensional data whose squared norms
    /// never exceed `bound`.
    pub fn linear(feature_dim: usize, bound: f64) -> Result<Self> {
        if feature_dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if !(bound.is_finite() && bound > 0.0) {
            return Err(Error::InvalidBound(bound));
        }
        Ok(Self {
            kind: KernelKind::ExplicitLinear { feature_dim },
            bound,
        })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// The bound `K` on every kernel value.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Checks the dimension and, for the linear kernel, that `k(v, v) <= K`.
    pub fn admit(&self, v: &[f64]) -> Result<()> {
        if let KernelKind::ExplicitLinear { feature_dim } = self.kind {
            if v.len() != feature_dim {
                return Err(Error::DimensionMismatch {
                    expected: feature_dim,
                    actual: v.len(),
                });
            }
            let value = dot(v, v);
            if value > self.bound {
                return Err(Error::BoundViolated {
                    value,
                    bound: self.bound,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn admit_all(&self, vs: &[Vector]) -> Result<()> {
        vs.iter().try_for_each(|v| self.admit(v))
    }

    /// Kernel value without validation. Callers guarantee equal lengths.
    #[inline]
    pub(crate) fn value(&self, a: &[f64], b: &[f64]) -> f64 {
        match self.kind {
            KernelKind::Rbf { bandwidth } => {
                libm::exp(-squared_distance(a, b) / (bandwidth * bandwidth))
            }
            KernelKind::ExplicitLinear { .. } => dot(a, b),
        }
    }
}

/// Sum of squared coordinate differences.
///
/// Summed directly rather than through `|a|^2 + |b|^2 - 2<a, b>` so that
/// identical inputs give exactly zero.
#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Evaluates `k(a, b)`.
pub fn kernel_eval(spec: &KernelSpec, a: &Vector, b: &Vector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    spec.admit(a)?;
    spec.admit(b)?;
    Ok(spec.value(a, b))
}

/// Dense row-major matrix of kernel values.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Gram {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Smallest and largest entry.
    pub fn range(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// `sum_ij self[i][j] * other[i][j]`, accumulated row by row in index
    /// order with a compensated sum across rows.
    pub(crate) fn hadamard_sum(&self, other: &Gram) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        (0..self.rows)
            .map(|i| dot(self.row(i), other.row(i)))
            .collect::<NeumaierSum>()
            .value()
    }
}

/// Gram matrix `G[i][j] = k(rows[i], cols[j])`.
pub fn gram(spec: &KernelSpec, rows: &[Vector], cols: &[Vector]) -> Result<Gram> {
    let (Some(r0), Some(_)) = (rows.first(), cols.first()) else {
        return Err(Error::Empty);
    };
    let dim = r0.dim();
    check_dims(rows, dim)?;
    check_dims(cols, dim)?;
    spec.admit_all(rows)?;
    spec.admit_all(cols)?;
    Ok(gram_unchecked(spec, rows, cols))
}

pub(crate) fn gram_unchecked(spec: &KernelSpec, rows: &[Vector], cols: &[Vector]) -> Gram {
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for r in rows {
        data.extend(cols.iter().map(|c| spec.value(r, c)));
    }
    Gram {
        rows: rows.len(),
        cols: cols.len(),
        data,
    }
}

/// The two gram matrices `K_phi` (on the x coordinates) and `K_psi` (on the
/// y coordinates) between two paired samples.
#[derive(Debug, Clone, PartialEq)]
pub struct GramPair {
    pub gx: Gram,
    pub gy: Gram,
    /// `max(K_phi, K_psi)`.
    pub bound: f64,
}

impl GramPair {
    pub fn new(
        kx: &KernelSpec,
        ky: &KernelSpec,
        p: &PairedSample,
        q: &PairedSample,
    ) -> Result<Self> {
        p.check_compatible(q)?;
        Ok(Self {
            gx: gram(kx, p.xs(), q.xs())?,
            gy: gram(ky, p.ys(), q.ys())?,
            bound: kx.bound().max(ky.bound()),
        })
    }

    /// `sum_ij gx[i][j] * gy[i][j]`.
    pub fn product_sum(&self) -> f64 {
        self.gx.hadamard_sum(&self.gy)
    }
}

/// Outcome of [`check_function_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FunctionBoundReport {
    /// Largest `|f(x)|` seen over all draws and points.
    pub max_abs: f64,
    /// `sqrt(K)`, the bound `max_abs` must respect.
    pub sqrt_bound: f64,
    pub trials: usize,
    /// Draws skipped because `|f|^2` could not be computed reliably.
    pub degenerate: usize,
}

impl FunctionBoundReport {
    pub fn holds(&self, tolerance: f64) -> bool {
        self.max_abs <= self.sqrt_bound + tolerance
    }
}

/// Draws of `|f|^2` below this fraction of `sum_ij |c_i c_j| G_ij` are
/// counted as degenerate: the rounding error in the gram entries alone is
/// of order `1e-16` of that sum.
const DEGENERATE_RATIO: f64 = 1e-6;

/// Draws random unit-norm functions `f = sum_j c_j phi(p_j) / |.|` and
/// reports the largest `|f(x)| = |<f, phi(x)>|` over `points`.
///
/// Each draw picks a random non-empty support among `points` and standard
/// normal coefficients on it. `|f|^2 = c' G c` and `f(p_i) = (G c)_i / |f|`
/// are both accumulated with compensated sums.
pub fn check_function_bound(
    spec: &KernelSpec,
    points: &[Vector],
    trials: usize,
    seed: u64,
) -> Result<FunctionBoundReport> {
    if trials == 0 {
        return Err(Error::TooFewTrials { min: 1, got: 0 });
    }
    let g = gram(spec, points, points)?;
    let n = points.len();
    let mut max_abs: f64 = 0.0;
    let mut degenerate = 0;
    let mut coeffs = alloc::vec![0.0; n];
    let mut gc = alloc::vec![0.0; n];
    for t in 0..trials {
        let mut rng = substream(seed, t as u64);
        coeffs.iter_mut().for_each(|c| *c = 0.0);
        let support = rng.random_range(1..=n);
        for j in index::sample(&mut rng, n, support) {
            coeffs[j] = rng.sample(StandardNormal);
        }

        let mut norm_sq = NeumaierSum::new();
        let mut scale = NeumaierSum::new();
        for i in 0..n {
            let row = g.row(i);
            let mut acc = NeumaierSum::new();
            for j in 0..n {
                acc.add(row[j] * coeffs[j]);
                scale.add(libm::fabs(coeffs[i] * coeffs[j] * row[j]));
            }
            gc[i] = acc.value();
            norm_sq.add(coeffs[i] * gc[i]);
        }
        let norm_sq = norm_sq.value();
        if norm_sq.is_nan() || norm_sq <= DEGENERATE_RATIO * scale.value() {
            degenerate += 1;
            continue;
        }
        let norm = libm::sqrt(norm_sq);
        for v in &gc {
            max_abs = max_abs.max(libm::fabs(v / norm));
        }
    }
    Ok(FunctionBoundReport {
        max_abs,
        sqrt_bound: libm::sqrt(spec.bound()),
        trials,
        degenerate,
    })
}
