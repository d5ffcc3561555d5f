use alloc::vec::Vec;

use crate::complex::Complex;
use crate::context::PrecisionContext;
use crate::dft::trig_table;
use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::scalar::Scalar;
use crate::vector::{ComplexVector, PeriodicVector, RealVector};

/// `L a(k) = a(k+1) + a(k-1) + 2 cos(omega k) a(k)`, the tridiagonal-plus-corner operator
/// commuting with the centered DFT.
#[derive(Clone, Debug)]
pub struct LOperator<S: Scalar> {
    index: IndexSet,
    diagonal: Vec<S>,
}

impl<S: Scalar> LOperator<S> {
    pub fn new(n_dim: usize, ctx: &PrecisionContext) -> Result<Self> {
        let index = IndexSet::new(n_dim)?;
        let (cos, _) = trig_table::<S>(n_dim, ctx);
        let diagonal = index.iter().map(|k| cos[k.rem_euclid(n_dim as i64) as usize].mul_i64(2)).collect();
        Ok(Self { index, diagonal })
    }

    pub fn n_dim(&self) -> usize {
        self.index.n_dim()
    }

    /// `2 cos(omega k)`.
    pub fn diagonal(&self, k: i64) -> &S {
        &self.diagonal[self.index.offset(k)]
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == self.n_dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.n_dim(), right: n })
        }
    }

    pub fn apply(&self, a: &RealVector<S>) -> Result<RealVector<S>> {
        self.check(a.n_dim())?;
        Ok(PeriodicVector::from_fn(self.index, |k| {
            let centre = a.get(k);
            let sides = a.get(k + 1).add(a.get(k - 1));
            if centre.is_exact_zero() {
                sides
            } else {
                sides.add(&self.diagonal(k).mul(centre))
            }
        }))
    }

    pub fn apply_complex(&self, a: &ComplexVector<S>) -> Result<ComplexVector<S>> {
        self.check(a.n_dim())?;
        Ok(PeriodicVector::from_fn(self.index, |k| {
            let d = self.diagonal(k);
            a.get(k + 1).add(a.get(k - 1)).add(&Complex::new(d.mul(&a.get(k).re), d.mul(&a.get(k).im)))
        }))
    }
}
