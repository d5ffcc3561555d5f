use alloc::vec::Vec;

use crate::complex::Complex;
use crate::context::PrecisionContext;
use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::scalar::Scalar;
use crate::vector::{ComplexVector, PeriodicVector, RealVector};

/// `cos(omega j)` and `sin(omega j)` for `j = 0, ..., N-1`, with `omega = 2 pi / N`.
///
/// Only `j <= N/2` is evaluated; the rest is mirrored so that the table is exactly
/// symmetric (`cos` even, `sin` odd modulo `N`).
pub(crate) fn trig_table<S: Scalar>(n_dim: usize, ctx: &PrecisionContext) -> (Vec<S>, Vec<S>) {
    let omega = omega::<S>(n_dim, ctx);
    let mut cos = Vec::with_capacity(n_dim);
    let mut sin = Vec::with_capacity(n_dim);
    for j in 0..n_dim {
        if 2 * j <= n_dim {
            let x = omega.mul_i64(j as i64);
            cos.push(x.cos(ctx));
            sin.push(x.sin(ctx));
        } else {
            cos.push(cos[n_dim - j].clone());
            sin.push(sin[n_dim - j].neg());
        }
    }
    if n_dim.is_multiple_of(4) {
        cos[n_dim / 4] = S::zero(ctx);
        cos[3 * n_dim / 4] = S::zero(ctx);
    }
    if n_dim.is_multiple_of(2) {
        sin[n_dim / 2] = S::zero(ctx);
    }
    (cos, sin)
}

pub(crate) fn omega<S: Scalar>(n_dim: usize, ctx: &PrecisionContext) -> S {
    S::pi(ctx).mul_i64(2).div_i64(n_dim as i64)
}

/// Unitary centered DFT `b(l) = N^{-1/2} sum_k e^{-i omega k l} a(k)`, evaluated by direct
/// summation over a precomputed twiddle table.
#[derive(Clone, Debug)]
pub struct DftOperator<S: Scalar> {
    index: IndexSet,
    omega: S,
    cos: Vec<S>,
    sin: Vec<S>,
    inv_sqrt_n: S,
}

impl<S: Scalar> DftOperator<S> {
    pub fn new(n_dim: usize, ctx: &PrecisionContext) -> Result<Self> {
        let index = IndexSet::new(n_dim)?;
        let (cos, sin) = trig_table(n_dim, ctx);
        let inv_sqrt_n = S::one(ctx).div(&S::from_i64(n_dim as i64, ctx).sqrt());
        Ok(Self { index, omega: omega(n_dim, ctx), cos, sin, inv_sqrt_n })
    }

    pub fn n_dim(&self) -> usize {
        self.index.n_dim()
    }

    pub fn index_set(&self) -> IndexSet {
        self.index
    }

    pub fn omega(&self) -> &S {
        &self.omega
    }

    fn slot(&self, k: i64, l: i64) -> usize {
        (k * l).rem_euclid(self.n_dim() as i64) as usize
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == self.n_dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.n_dim(), right: n })
        }
    }

    /// `F a` for a real input. Exact zeros of `a` are skipped.
    pub fn forward_real(&self, a: &RealVector<S>, ctx: &PrecisionContext) -> Result<ComplexVector<S>> {
        self.check(a.n_dim())?;
        let support: Vec<(i64, &S)> = a.iter().filter(|(_, x)| !x.is_exact_zero()).collect();
        Ok(PeriodicVector::from_fn(self.index, |l| {
            let mut re = S::zero(ctx);
            let mut im = S::zero(ctx);
            for &(k, x) in &support {
                let j = self.slot(k, l);
                re = re.add(&self.cos[j].mul(x));
                im = im.sub(&self.sin[j].mul(x));
            }
            Complex::new(re.mul(&self.inv_sqrt_n), im.mul(&self.inv_sqrt_n))
        }))
    }

    /// `F a` for an exactly even (`odd == false`) or exactly odd real `a`, using only the
    /// entries with `k >= 0`. Returns `g` with `F a = g` (even) or `F a = -i g` (odd).
    pub fn forward_symmetric(&self, a: &RealVector<S>, odd: bool, ctx: &PrecisionContext) -> Result<RealVector<S>> {
        self.check(a.n_dim())?;
        let hi = self.index.hi();
        let paired = self.n_dim().div_ceil(2) as i64 - 1;
        let support: Vec<(i64, S)> = (0..=hi)
            .filter(|&k| !a.get(k).is_exact_zero())
            .map(|k| (k, if k == 0 || k > paired { a.get(k).clone() } else { a.get(k).mul_i64(2) }))
            .collect();
        let table = if odd { &self.sin } else { &self.cos };
        let half: Vec<S> = (0..=hi)
            .map(|l| {
                let mut acc = S::zero(ctx);
                for (k, x) in &support {
                    acc = acc.add(&table[self.slot(*k, l)].mul(x));
                }
                acc.mul(&self.inv_sqrt_n)
            })
            .collect();
        Ok(PeriodicVector::from_fn(self.index, |l| {
            let value = &half[l.unsigned_abs() as usize];
            if odd && l < 0 {
                value.neg()
            } else {
                value.clone()
            }
        }))
    }

    /// `F a` for a complex input.
    pub fn forward(&self, a: &ComplexVector<S>, ctx: &PrecisionContext) -> Result<ComplexVector<S>> {
        self.transform(a, false, ctx)
    }

    /// `F^{-1} a = conj(F conj(a))`.
    pub fn inverse(&self, a: &ComplexVector<S>, ctx: &PrecisionContext) -> Result<ComplexVector<S>> {
        self.transform(a, true, ctx)
    }

    fn transform(&self, a: &ComplexVector<S>, inverse: bool, ctx: &PrecisionContext) -> Result<ComplexVector<S>> {
        self.check(a.n_dim())?;
        Ok(PeriodicVector::from_fn(self.index, |l| {
            let mut acc = Complex::zero(ctx);
            for (k, z) in a.iter() {
                let j = self.slot(k, l);
                let s = if inverse { self.sin[j].clone() } else { self.sin[j].neg() };
                acc = acc.add(&Complex::new(self.cos[j].clone(), s).mul(z));
            }
            acc.scale(&self.inv_sqrt_n)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Real;
    use crate::vector::{hermitian_norm, norm};
    use proptest::prelude::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(60).unwrap()
    }

    fn random_vector(n: usize, seed: &[i32], c: &PrecisionContext) -> RealVector<Real> {
        let index = IndexSet::new(n).unwrap();
        PeriodicVector::from_fn(index, |k| {
            let i = index.offset(k) % seed.len();
            Real::from_i64(i64::from(seed[i]), c).div_i64(7)
        })
    }

    #[test]
    fn delta_maps_to_constant() {
        let c = ctx();
        for n in [2usize, 5, 8] {
            let f = DftOperator::<Real>::new(n, &c).unwrap();
            let e0 = RealVector::delta(IndexSet::new(n).unwrap(), 0, &c);
            let b = f.forward_real(&e0, &c).unwrap();
            let expected = 1.0 / (n as f64).sqrt();
            for (_, z) in b.iter() {
                assert!((z.re.to_f64() - expected).abs() < 1e-15);
                assert!(z.im.is_zero());
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let c = ctx();
        let f = DftOperator::<Real>::new(6, &c).unwrap();
        let a = RealVector::<Real>::zeros(IndexSet::new(5).unwrap(), &c);
        assert!(f.forward_real(&a, &c).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn unitary(n in 2usize..24, seed in proptest::collection::vec(-50i32..50, 1..24)) {
            let c = ctx();
            let f = DftOperator::<Real>::new(n, &c).unwrap();
            let a = random_vector(n, &seed, &c);
            let b = f.forward_real(&a, &c).unwrap();
            let diff = hermitian_norm(&b).sub(&norm(&a));
            prop_assert!(diff.log10_abs() <= -50.0);
        }

        #[test]
        fn fourth_power_is_identity(n in 2usize..16, seed in proptest::collection::vec(-50i32..50, 1..16)) {
            let c = ctx();
            let f = DftOperator::<Real>::new(n, &c).unwrap();
            let a = random_vector(n, &seed, &c).to_complex(&c);
            let mut b = a.clone();
            for _ in 0..4 {
                b = f.forward(&b, &c).unwrap();
            }
            prop_assert!(hermitian_norm(&b.sub(&a)).log10_abs() <= -50.0);
            let back = f.inverse(&f.forward(&a, &c).unwrap(), &c).unwrap();
            prop_assert!(hermitian_norm(&back.sub(&a)).log10_abs() <= -50.0);
        }

        #[test]
        fn parity_transport(n in 2usize..20, seed in proptest::collection::vec(-50i32..50, 1..20)) {
            let c = ctx();
            let f = DftOperator::<Real>::new(n, &c).unwrap();
            let a = random_vector(n, &seed, &c);
            let even = f.forward_real(&a.symmetrized(false, &c), &c).unwrap();
            prop_assert!(even.is_real(-50.0));
            prop_assert!(even.real_part().is_even(-50.0));
            let odd = f.forward_real(&a.symmetrized(true, &c), &c).unwrap();
            // i F a is real and odd
            prop_assert!(odd.real_part().norm_log10() <= odd.norm_log10() - 50.0 || odd.norm_log10() == f64::NEG_INFINITY);
            prop_assert!(odd.imag_part().is_odd(-50.0));
        }

        #[test]
        fn symmetric_transform_matches_full(n in 2usize..24, seed in proptest::collection::vec(-50i32..50, 1..24)) {
            let c = ctx();
            let f = DftOperator::<Real>::new(n, &c).unwrap();
            let a = random_vector(n, &seed, &c);
            let even = a.symmetrized(false, &c);
            let full = f.forward_real(&even, &c).unwrap();
            let half = f.forward_symmetric(&even, false, &c).unwrap();
            prop_assert!(norm(&full.real_part().sub(&half)).log10_abs() <= -50.0);
            let odd = a.symmetrized(true, &c);
            let full = f.forward_real(&odd, &c).unwrap();
            let half = f.forward_symmetric(&odd, true, &c).unwrap();
            prop_assert!(norm(&full.imag_part().add(&half)).log10_abs() <= -50.0);
        }
    }
}
