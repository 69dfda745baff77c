//! Row-major tensor layout of truncated multimode Fock bases.
//!
//! The basis index of levels `(n_1, ..., n_M)` is `sum_m n_m * stride_m`
//! with the last mode varying fastest.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockLayout {
    cutoffs: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

impl FockLayout {
    pub fn new(cutoffs: &[usize]) -> Result<Self> {
        if cutoffs.is_empty() {
            return Err(Error::InvalidParameter("at least one mode is required".into()));
        }
        if cutoffs.contains(&0) {
            return Err(Error::InvalidParameter("cutoff must be at least 1".into()));
        }
        let mut strides = vec![1; cutoffs.len()];
        for m in (0..cutoffs.len().saturating_sub(1)).rev() {
            strides[m] = strides[m + 1] * cutoffs[m + 1];
        }
        let dim = cutoffs.iter().product();
        Ok(FockLayout {
            cutoffs: cutoffs.to_vec(),
            strides,
            dim,
        })
    }

    pub fn uniform(mode_count: usize, cutoff: usize) -> Result<Self> {
        FockLayout::new(&vec![cutoff; mode_count])
    }

    pub fn mode_count(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self, levels: &[usize]) -> usize {
        levels.iter().zip(&self.strides).map(|(l, s)| l * s).sum()
    }

    pub fn levels(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.cutoffs.len()];
        for (m, s) in self.strides.iter().enumerate() {
            out[m] = index / s;
            index %= s;
        }
        out
    }

    /// Indices whose level on every mode is below `cutoff_m - margin`.
    pub fn protected_indices(&self, margin: usize) -> Vec<usize> {
        (0..self.dim)
            .filter(|&i| {
                self.levels(i)
                    .iter()
                    .zip(&self.cutoffs)
                    .all(|(l, c)| l + margin < *c)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_order() {
        let l = FockLayout::new(&[2, 3]).unwrap();
        assert_eq!(l.dim(), 6);
        assert_eq!(l.index(&[1, 2]), 5);
        assert_eq!(l.index(&[0, 1]), 1);
        assert_eq!(l.levels(4), vec![1, 1]);
        assert_eq!(l.protected_indices(1), vec![0, 1]);
        assert!(FockLayout::new(&[]).is_err());
        assert!(FockLayout::new(&[3, 0]).is_err());
    }
}
