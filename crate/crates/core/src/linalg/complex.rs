//! Bounded cochain complexes of finite-dimensional rational vector spaces.

use crate::error::{Error, Result};

use super::QMatrix;

/// `C^start -> C^{start+1} -> ...`; `diffs[i]` goes from degree `start+i` to
/// `start+i+1` and has shape `dims[i+1] x dims[i]`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    start: i64,
    dims: Vec<usize>,
    diffs: Vec<QMatrix>,
}

impl CochainComplex {
    pub fn new(start: i64, dims: Vec<usize>, diffs: Vec<QMatrix>) -> Result<Self> {
        if dims.is_empty() {
            if !diffs.is_empty() {
                return Err(Error::NotAComplex("differentials without spaces".into()));
            }
        } else if diffs.len() + 1 != dims.len() {
            return Err(Error::NotAComplex(format!(
                "{} spaces need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.shape() != (dims[i + 1], dims[i]) {
                return Err(Error::NotAComplex(format!(
                    "differential in degree {} has shape {:?}, expected {:?}",
                    start + i as i64,
                    d.shape(),
                    (dims[i + 1], dims[i])
                )));
            }
        }
        for i in 1..diffs.len() {
            if !diffs[i].mul(&diffs[i - 1]).is_zero() {
                return Err(Error::NotAComplex(format!(
                    "d∘d ≠ 0 at degree {}",
                    start + i as i64 - 1
                )));
            }
        }
        Ok(CochainComplex { start, dims, diffs })
    }

    pub fn zero() -> Self {
        CochainComplex { start: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn degrees(&self) -> std::ops::Range<i64> {
        self.start..self.start + self.dims.len() as i64
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differential(&self, degree: i64) -> Option<&QMatrix> {
        let i = usize::try_from(degree - self.start).ok()?;
        self.diffs.get(i)
    }

    /// `dim H^n = dim ker d^n - rank d^{n-1}`, one entry per degree.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.diffs.iter().map(QMatrix::rank).collect();
        (0..self.dims.len())
            .map(|i| {
                let out_rank = ranks.get(i).copied().unwrap_or(0);
                let in_rank = if i == 0 { 0 } else { ranks[i - 1] };
                self.dims[i] - out_rank - in_rank
            })
            .collect()
    }

    /// Cohomology dimension in one degree, zero outside the range.
    pub fn h(&self, degree: i64) -> usize {
        match usize::try_from(degree - self.start) {
            Ok(i) if i < self.dims.len() => self.cohomology_dims()[i],
            _ => 0,
        }
    }

    fn signed_sum(&self, v: &[usize]) -> i64 {
        v.iter()
            .enumerate()
            .map(|(i, &d)| {
                let sign = if (self.start + i as i64).rem_euclid(2) == 0 { 1 } else { -1 };
                sign * d as i64
            })
            .sum()
    }

    pub fn euler_char_cochains(&self) -> i64 {
        self.signed_sum(&self.dims)
    }

    pub fn euler_char_cohomology(&self) -> i64 {
        self.signed_sum(&self.cohomology_dims())
    }

    /// Euler characteristic; both computations are carried out and compared.
    pub fn euler_char(&self) -> i64 {
        let a = self.euler_char_cochains();
        let b = self.euler_char_cohomology();
        assert_eq!(a, b, "Euler characteristic of cochains and cohomology disagree");
        a
    }
}
