use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};

/// A finite, non-empty observation vector.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(entries: Vec<f64>) -> Result<Self> {
        Self::new(entries)
    }
}

/// Checks that every vector in `vs` has dimension `dim`.
pub(crate) fn check_dims(vs: &[Vector], dim: usize) -> Result<()> {
    match vs.iter().find(|v| v.dim() != dim) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: dim,
            actual: v.dim(),
        }),
        None => Ok(()),
    }
}

/// `m` observation pairs `(x_i, y_i)` with fixed dimensions `d_x`, `d_y`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PairedSample {
    xs: Vec<Vector>,
    ys: Vec<Vector>,
}

impl PairedSample {
    pub fn new(xs: Vec<Vector>, ys: Vec<Vector>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::RowCountMismatch {
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        let (Some(x0), Some(y0)) = (xs.first(), ys.first()) else {
            return Err(Error::Empty);
        };
        check_dims(&xs, x0.dim())?;
        check_dims(&ys, y0.dim())?;
        Ok(Self { xs, ys })
    }

    /// Builds a sample from raw rows, validating every entry.
    pub fn from_rows(xs: Vec<Vec<f64>>, ys: Vec<Vec<f64>>) -> Result<Self> {
        let xs = xs.into_iter().map(Vector::new).collect::<Result<_>>()?;
        let ys = ys.into_iter().map(Vector::new).collect::<Result<_>>()?;
        Self::new(xs, ys)
    }

    /// Number of pairs `m`.
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    /// Always false; a sample holds at least one pair.
    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn dim_x(&self) -> usize {
        self.xs[0].dim()
    }

    pub fn dim_y(&self) -> usize {
        self.ys[0].dim()
    }

    pub fn xs(&self) -> &[Vector] {
        &self.xs
    }

    pub fn ys(&self) -> &[Vector] {
        &self.ys
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Vector, &Vector)> {
        self.xs.iter().zip(&self.ys)
    }

    /// Errors unless `other` has the same `d_x` and `d_y`.
    pub fn check_compatible(&self, other: &PairedSample) -> Result<()> {
        for (a, b) in [(self.dim_x(), other.dim_x()), (self.dim_y(), other.dim_y())] {
            if a != b {
                return Err(Error::DimensionMismatch {
                    expected: a,
                    actual: b,
                });
            }
        }
        Ok(())
    }

    /// Reorders the pairs jointly: row `i` of the result is row `order[i]`.
    ///
    /// # Panics
    ///
    /// If `order` is not a permutation of `0..len()`.
    pub fn permuted(&self, order: &[usize]) -> PairedSample {
        assert_eq!(order.len(), self.len());
        let mut seen = alloc::vec![false; order.len()];
        for &i in order {
            assert!(
                !core::mem::replace(&mut seen[i], true),
                "repeated index {i}"
            );
        }
        Self {
            xs: order.iter().map(|&i| self.xs[i].clone()).collect(),
            ys: order.iter().map(|&i| self.ys[i].clone()).collect(),
        }
    }
}
