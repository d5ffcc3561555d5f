use alloc::vec;
use alloc::vec::Vec;

use crate::context::PrecisionContext;
use crate::dft::{omega, trig_table, DftOperator};
use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::scalar::Scalar;
use crate::vector::{norm, PeriodicVector, RealVector};

/// The scalar tables `S(k)`, `alpha_n`, `beta_n`, `t_k` for a fixed `N`, and the
/// Gaussian-type vectors `u_n` (even, width `n`) and modified Gaussian-type vectors
/// `v_n` (odd, width `n`) built from them.
///
/// All tables are filled eagerly; vectors are produced on demand in `O(N)` operations.
#[derive(Clone, Debug)]
pub struct SeedFamily<S: Scalar> {
    index: IndexSet,
    omega: S,
    n_sq: S,
    /// `S(0), ..., S(N-1)`.
    s_table: Vec<S>,
    /// `alpha_n * S(n)^2` for `0 <= n <= floor(N/2)`.
    alpha_scaled: Vec<S>,
    /// `beta_n * S(n)^2` for `0 < n < ceil(N/2)`; slot 0 is unused.
    beta_scaled: Vec<S>,
    /// `sin(omega j / 2)` and `cos(omega j / 2)` for `0 <= j <= floor(N/2)`.
    sin_half: Vec<S>,
    cos_half: Vec<S>,
    /// `sin(omega j)` for `0 <= j < N`.
    sin_full: Vec<S>,
    inv_two_sqrt_n: S,
}

impl<S: Scalar> SeedFamily<S> {
    pub fn new(n_dim: usize, ctx: &PrecisionContext) -> Result<Self> {
        let index = IndexSet::new(n_dim)?;
        let half = index.half_floor();
        let omega: S = omega(n_dim, ctx);
        let half_omega = omega.div_i64(2);
        let mut sin_half = Vec::with_capacity(half + 1);
        let mut cos_half = Vec::with_capacity(half + 1);
        for j in 0..=half {
            let x = half_omega.mul_i64(j as i64);
            sin_half.push(x.sin(ctx));
            cos_half.push(x.cos(ctx));
        }
        if n_dim.is_multiple_of(2) {
            // omega (N/2) / 2 = pi/2
            sin_half[half] = S::one(ctx);
            cos_half[half] = S::zero(ctx);
        }
        let n_big = S::from_i64(n_dim as i64, ctx);
        let mut s_table: Vec<S> = Vec::with_capacity(n_dim);
        s_table.push(S::one(ctx));
        for k in 1..n_dim {
            if 2 * k < n_dim {
                let next = s_table[k - 1].mul(&sin_half[k].mul_i64(2));
                s_table.push(next);
            } else {
                let next = n_big.div(&s_table[n_dim - 1 - k]);
                s_table.push(next);
            }
        }
        let odd = n_dim % 2 == 1;
        let alpha_scaled = (0..=half)
            .map(|n| match (n, odd) {
                (0, true) => S::one(ctx),
                (0, false) => S::one(ctx).div_i64(2),
                (_, true) => s_table[2 * n].sqrt(),
                (_, false) => s_table[2 * n - 1].mul(&sin_half[n]).sqrt(),
            })
            .collect();
        let beta_scaled = (0..index.half_ceil())
            .map(|n| match (n, odd) {
                (0, _) => S::zero(ctx),
                (_, true) => s_table[2 * n - 1].sqrt(),
                (_, false) => s_table[2 * n - 1].mul(&cos_half[n]).sqrt(),
            })
            .collect();
        let (_, sin_full) = trig_table(n_dim, ctx);
        let inv_two_sqrt_n = S::one(ctx).div(&n_big.mul_i64(4).sqrt());
        Ok(Self {
            index,
            omega,
            n_sq: n_big.square(),
            s_table,
            alpha_scaled,
            beta_scaled,
            sin_half,
            cos_half,
            sin_full,
            inv_two_sqrt_n,
        })
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

    fn range_error(what: &'static str, index: i64, lo: i64, hi: i64) -> Error {
        Error::IndexOutOfRange { what, index, lo, hi }
    }

    /// `S(k) = prod_{j=1}^{k} 2 sin(omega j / 2)` for `0 <= k <= N-1`.
    pub fn s_of(&self, k: usize) -> Result<&S> {
        self.s_table.get(k).ok_or_else(|| Self::range_error("S", k as i64, 0, self.n_dim() as i64 - 1))
    }

    pub fn s_table(&self) -> &[S] {
        &self.s_table
    }

    fn check_u(&self, n: usize) -> Result<()> {
        let hi = self.index.half_floor();
        if n <= hi {
            Ok(())
        } else {
            Err(Self::range_error("u", n as i64, 0, hi as i64))
        }
    }

    fn check_v(&self, n: usize) -> Result<()> {
        let hi = self.index.half_ceil() as i64 - 1;
        if n >= 1 && (n as i64) <= hi {
            Ok(())
        } else {
            Err(Self::range_error("v", n as i64, 1, hi))
        }
    }

    pub fn alpha_of(&self, n: usize) -> Result<S> {
        self.check_u(n)?;
        Ok(self.alpha_scaled[n].div(&self.s_table[n].square()))
    }

    pub fn beta_of(&self, n: usize) -> Result<S> {
        self.check_v(n)?;
        Ok(self.beta_scaled[n].div(&self.s_table[n].square()))
    }

    /// `t_k = (2 / sqrt(omega)) sin(omega k / 2)` for any `k` in `I_N`.
    pub fn t_of(&self, k: i64) -> S {
        let k = self.index.reduce(k);
        let s = self.sin_half[k.unsigned_abs() as usize].mul_i64(2).div(&self.omega.sqrt());
        if k < 0 {
            s.neg()
        } else {
            s
        }
    }

    pub fn t_vector(&self) -> RealVector<S> {
        PeriodicVector::from_fn(self.index, |k| self.t_of(k))
    }

    fn cos_half_of(&self, k: i64) -> &S {
        &self.cos_half[k.unsigned_abs() as usize]
    }

    fn sin_half_of(&self, k: i64) -> S {
        let s = &self.sin_half[k.unsigned_abs() as usize];
        if k < 0 {
            s.neg()
        } else {
            s.clone()
        }
    }

    fn sin_of(&self, k: i64) -> &S {
        &self.sin_full[k.rem_euclid(self.n_dim() as i64) as usize]
    }

    /// `S(N-n-1-k) S(N-n-1+k)`, multiplied in a fixed order so the result is exactly even in `k`.
    fn s_pair(&self, n: usize, k: i64) -> S {
        let base = (self.n_dim() - n - 1) as i64;
        let a = &self.s_table[(base - k.abs()) as usize];
        let b = &self.s_table[(base + k.abs()) as usize];
        a.mul(b)
    }

    fn zero_like(&self) -> S {
        self.s_table[0].sub(&self.s_table[0])
    }

    /// Closed form of `u_n`; entries with `|k| > n` are exact zeros.
    pub fn u_closed(&self, n: usize) -> Result<RealVector<S>> {
        self.check_u(n)?;
        let even = self.n_dim().is_multiple_of(2);
        if even && 2 * n == self.n_dim() {
            return Ok(PeriodicVector::from_fn(self.index, |_| self.inv_two_sqrt_n.clone()));
        }
        let c = self.alpha_scaled[n].div(&self.n_sq);
        Ok(PeriodicVector::from_fn(self.index, |k| {
            if k.unsigned_abs() as usize > n {
                return self.zero_like();
            }
            let value = c.mul(&self.s_pair(n, k));
            if even {
                value.mul(self.cos_half_of(k))
            } else {
                value
            }
        }))
    }

    /// Closed form of `v_n`; entries with `|k| > n` are exact zeros.
    pub fn v_closed(&self, n: usize) -> Result<RealVector<S>> {
        self.check_v(n)?;
        let even = self.n_dim().is_multiple_of(2);
        let c = self.beta_scaled[n].div(&self.n_sq);
        Ok(PeriodicVector::from_fn(self.index, |k| {
            if k.unsigned_abs() as usize > n || k == 0 {
                return self.zero_like();
            }
            let value = c.mul(&self.s_pair(n, k));
            if even {
                value.mul(&self.sin_half_of(k).mul_i64(2))
            } else {
                value.mul(self.sin_of(k))
            }
        }))
    }

    /// `sin^2(omega j / 2)` for `0 <= j <= floor(N/2)`; `(t_k/t_j)^2` is the ratio of two entries.
    fn half_sines_squared(&self) -> Vec<S> {
        self.sin_half.iter().map(Scalar::square).collect()
    }

    fn product_factor(&self, squares: &[S], k: i64, upto: usize, from: usize) -> S {
        let sk2 = &squares[self.index.reduce(k).unsigned_abs() as usize];
        let one = self.s_table[0].clone();
        let mut acc = one.clone();
        for sj2 in &squares[from..=upto] {
            acc = acc.mul(&one.sub(&sk2.div(sj2)));
        }
        acc
    }

    /// For every `k` (by offset), `tails[from] = prod_{j=from}^{upto} (1 - (t_k/t_j)^2)` for
    /// `1 <= from <= upto + 1`, accumulated downwards from `j = upto`.
    fn product_tails(&self, upto: usize) -> Vec<Vec<S>> {
        let squares = self.half_sines_squared();
        let one = self.s_table[0].clone();
        self.index
            .iter()
            .map(|k| {
                let sk2 = &squares[self.index.reduce(k).unsigned_abs() as usize];
                let mut tails = vec![one.clone(); upto + 2];
                for j in (1..=upto).rev() {
                    tails[j] = tails[j + 1].mul(&one.sub(&sk2.div(&squares[j])));
                }
                tails
            })
            .collect()
    }

    /// `u_n(k) = alpha_n prod_{j=n+1}^{floor(N/2)} (1 - (t_k/t_j)^2)`, evaluated directly.
    pub fn u_product(&self, n: usize) -> Result<RealVector<S>> {
        let alpha = self.alpha_of(n)?;
        let top = self.index.half_floor();
        let squares = self.half_sines_squared();
        Ok(PeriodicVector::from_fn(self.index, |k| alpha.mul(&self.product_factor(&squares, k, top, n + 1))))
    }

    /// `v_n(k) = beta_n sin(omega k) prod_{j=n+1}^{ceil(N/2)-1} (1 - (t_k/t_j)^2)`.
    pub fn v_product(&self, n: usize) -> Result<RealVector<S>> {
        let beta = self.beta_of(n)?;
        let top = self.index.half_ceil() - 1;
        let squares = self.half_sines_squared();
        Ok(PeriodicVector::from_fn(self.index, |k| {
            beta.mul(self.sin_of(k)).mul(&self.product_factor(&squares, k, top, n + 1))
        }))
    }

    pub fn u_range(&self) -> core::ops::RangeInclusive<usize> {
        0..=self.index.half_floor()
    }

    pub fn v_range(&self) -> core::ops::RangeInclusive<usize> {
        1..=self.index.half_ceil() - 1
    }

    /// log10 of the largest relative deviation in the `S` identities:
    /// `S(k) S(N-1-k) = N`, and `S(m-k) S(m+k) = N` (odd `N`) or `2N cos(omega k / 2)`
    /// (even `N`) with `m = floor(N/2)`.
    pub fn s_identity_residual_log10(&self, ctx: &PrecisionContext) -> f64 {
        let n = self.n_dim();
        let n_big = S::from_i64(n as i64, ctx);
        let mut worst = f64::NEG_INFINITY;
        let mut record = |value: S, target: &S| {
            let rel = value.sub(target).log10_abs() - target.log10_abs();
            worst = worst.max(rel);
        };
        for k in 0..n {
            record(self.s_table[k].mul(&self.s_table[n - 1 - k]), &n_big);
        }
        let m = n / 2;
        if n % 2 == 1 {
            for k in 0..=m {
                record(self.s_table[m - k].mul(&self.s_table[m + k]), &n_big);
            }
        } else {
            for k in 0..m {
                let target = n_big.mul_i64(2).mul(&self.cos_half[k]);
                record(self.s_table[m - k].mul(&self.s_table[m + k]), &target);
            }
        }
        worst
    }

    /// log10 of `max_n ||closed - product|| / ||closed||` over every admissible `u_n`, `v_n`.
    pub fn closed_form_deviation_log10(&self) -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        let u_tails = self.product_tails(self.index.half_floor());
        for n in self.u_range() {
            let alpha = self.alpha_of(n)?;
            let product = PeriodicVector::from_fn(self.index, |k| alpha.mul(&u_tails[self.index.offset(k)][n + 1]));
            worst = worst.max(relative_gap(&self.u_closed(n)?, &product));
        }
        let v_tails = self.product_tails(self.index.half_ceil() - 1);
        for n in self.v_range() {
            let beta = self.beta_of(n)?;
            let product = PeriodicVector::from_fn(self.index, |k| {
                beta.mul(self.sin_of(k)).mul(&v_tails[self.index.offset(k)][n + 1])
            });
            worst = worst.max(relative_gap(&self.v_closed(n)?, &product));
        }
        Ok(worst)
    }

    /// Residuals of `F u_n = u_{floor(N/2)-n}` and `F v_n = -i v_{ceil(N/2)-n}`.
    pub fn check_fourier_pairs(&self, ctx: &PrecisionContext) -> Result<FourierPairReport> {
        let f = DftOperator::<S>::new(self.n_dim(), ctx)?;
        let mut report = FourierPairReport::default();
        let half_floor = self.index.half_floor();
        let half_ceil = self.index.half_ceil();
        for n in self.u_range() {
            let u = self.u_closed(n)?;
            let image = f.forward_symmetric(&u, false, ctx)?;
            let r = norm(&image.sub(&self.u_closed(half_floor - n)?));
            report.record_u(n, r.log10_abs(), r.log10_abs() - norm(&u).log10_abs());
        }
        for n in self.v_range() {
            let v = self.v_closed(n)?;
            let image = f.forward_symmetric(&v, true, ctx)?;
            let r = norm(&image.sub(&self.v_closed(half_ceil - n)?));
            report.record_v(n, r.log10_abs(), r.log10_abs() - norm(&v).log10_abs());
        }
        Ok(report)
    }
}

fn relative_gap<S: Scalar>(a: &RealVector<S>, b: &RealVector<S>) -> f64 {
    norm(&a.sub(b)).log10_abs() - norm(a).log10_abs()
}

/// Worst residuals of the Fourier pairing identities, as log10 values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierPairReport {
    pub u_residual_log10: f64,
    pub u_relative_log10: f64,
    pub worst_u: Option<usize>,
    pub v_residual_log10: f64,
    pub v_relative_log10: f64,
    pub worst_v: Option<usize>,
}

impl Default for FourierPairReport {
    fn default() -> Self {
        Self {
            u_residual_log10: f64::NEG_INFINITY,
            u_relative_log10: f64::NEG_INFINITY,
            worst_u: None,
            v_residual_log10: f64::NEG_INFINITY,
            v_relative_log10: f64::NEG_INFINITY,
            worst_v: None,
        }
    }
}

impl FourierPairReport {
    fn record_u(&mut self, n: usize, abs: f64, rel: f64) {
        if self.worst_u.is_none() || abs > self.u_residual_log10 {
            self.worst_u = Some(n);
        }
        self.u_residual_log10 = self.u_residual_log10.max(abs);
        self.u_relative_log10 = self.u_relative_log10.max(rel);
    }

    fn record_v(&mut self, n: usize, abs: f64, rel: f64) {
        if self.worst_v.is_none() || abs > self.v_residual_log10 {
            self.worst_v = Some(n);
        }
        self.v_residual_log10 = self.v_residual_log10.max(abs);
        self.v_relative_log10 = self.v_relative_log10.max(rel);
    }

    /// Largest absolute residual over both families.
    pub fn max_residual_log10(&self) -> f64 {
        self.u_residual_log10.max(self.v_residual_log10)
    }

    /// Largest residual relative to the norm of the transformed vector.
    pub fn max_relative_log10(&self) -> f64 {
        self.u_relative_log10.max(self.v_relative_log10)
    }
}
