use alloc::vec::Vec;

use crate::complex::Complex;
use crate::context::PrecisionContext;
use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::scalar::Scalar;

/// `N`-periodic vector indexed by the centered set `I_N`.
///
/// Entries are stored in the order `k = lo, ..., hi`; any integer index is reduced
/// modulo `N` before lookup.
#[derive(Clone, Debug)]
pub struct PeriodicVector<E> {
    index: IndexSet,
    entries: Vec<E>,
}

pub type RealVector<S> = PeriodicVector<S>;
pub type ComplexVector<S> = PeriodicVector<Complex<S>>;

/// Result of a width computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Width {
    pub value: usize,
    /// Set when every entry is numerically zero.
    pub zero_vector: bool,
}

/// Anything whose magnitude can be compared against a threshold.
pub trait Magnitude10 {
    fn magnitude_log10(&self) -> f64;
}

impl<S: Scalar> Magnitude10 for S {
    fn magnitude_log10(&self) -> f64 {
        self.log10_abs()
    }
}

impl<S: Scalar> Magnitude10 for Complex<S> {
    fn magnitude_log10(&self) -> f64 {
        let a = self.re.log10_abs();
        let b = self.im.log10_abs();
        log10_hypot(a, b)
    }
}

fn log10_hypot(a: f64, b: f64) -> f64 {
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if big == f64::NEG_INFINITY {
        return big;
    }
    big + 0.5 * libm::log10(1.0 + libm::pow(10.0, 2.0 * (small - big)))
}

impl<E> PeriodicVector<E> {
    pub fn new(index: IndexSet, entries: Vec<E>) -> Result<Self> {
        if entries.len() != index.n_dim() {
            return Err(Error::DimensionMismatch { left: index.n_dim(), right: entries.len() });
        }
        Ok(Self { index, entries })
    }

    pub fn from_fn(index: IndexSet, f: impl FnMut(i64) -> E) -> Self {
        Self { index, entries: index.iter().map(f).collect() }
    }

    pub fn index_set(&self) -> IndexSet {
        self.index
    }

    pub fn n_dim(&self) -> usize {
        self.index.n_dim()
    }

    /// Entry at any integer `k` (periodic extension).
    pub fn get(&self, k: i64) -> &E {
        &self.entries[self.index.offset(k)]
    }

    pub fn set(&mut self, k: i64, value: E) {
        let offset = self.index.offset(k);
        self.entries[offset] = value;
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<E> {
        self.entries
    }

    /// `(k, entry)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &E)> {
        self.index.iter().zip(self.entries.iter())
    }

    pub fn map<F>(&self, f: impl FnMut(&E) -> F) -> PeriodicVector<F> {
        PeriodicVector { index: self.index, entries: self.entries.iter().map(f).collect() }
    }

    fn check_same(&self, other: &PeriodicVector<impl Sized>) -> Result<()> {
        if self.n_dim() == other.n_dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.n_dim(), right: other.n_dim() })
        }
    }
}

impl<E: Magnitude10> PeriodicVector<E> {
    /// log10 of the Euclidean norm, from the entry magnitudes.
    pub fn norm_log10(&self) -> f64 {
        let logs: Vec<f64> = self.entries.iter().map(Magnitude10::magnitude_log10).collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return top;
        }
        let sum: f64 = logs.iter().map(|&l| libm::pow(10.0, 2.0 * (l - top))).sum();
        top + 0.5 * libm::log10(sum)
    }

    /// Width: the smallest `n` with `a(k) = 0` for `n < |k| <= floor(N/2)`, where an
    /// entry counts as zero when `|a(k)| <= 10^threshold_log10 * ||a||`.
    pub fn width_with(&self, threshold_log10: f64) -> Width {
        let norm = self.norm_log10();
        if norm == f64::NEG_INFINITY {
            return Width { value: 0, zero_vector: true };
        }
        let cutoff = norm + threshold_log10;
        let nonzero = |k: i64| self.get(k).magnitude_log10() > cutoff;
        let half = self.index.half_floor();
        let value = (1..=half).rev().find(|&n| nonzero(n as i64) || nonzero(-(n as i64))).unwrap_or(0);
        Width { value, zero_vector: false }
    }

    /// Width under the context's relative zero threshold.
    pub fn width(&self, ctx: &PrecisionContext) -> Width {
        self.width_with(ctx.zero_threshold_log10())
    }
}

impl<S: Scalar> PeriodicVector<S> {
    pub fn zeros(index: IndexSet, ctx: &PrecisionContext) -> Self {
        Self::from_fn(index, |_| S::zero(ctx))
    }

    /// Unit vector at `k`.
    pub fn delta(index: IndexSet, k: i64, ctx: &PrecisionContext) -> Self {
        let target = index.reduce(k);
        Self::from_fn(index, |j| if j == target { S::one(ctx) } else { S::zero(ctx) })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(S::neg)
    }

    /// `self - c * other`, skipping exact zeros of `other`.
    pub fn sub_scaled(&self, c: &S, other: &Self) -> Self {
        self.zip_with(other, |a, b| if b.is_exact_zero() { a.clone() } else { a.sub(&c.mul(b)) })
    }

    /// `self / ||self||`; zero vectors are returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = norm(self);
        if n.is_zero() {
            return self.clone();
        }
        self.map(|a| a.div(&n))
    }

    pub fn to_complex(&self, ctx: &PrecisionContext) -> ComplexVector<S> {
        self.map(|a| Complex::from_real(a.clone(), ctx))
    }

    /// `v(-k) = v(k)` up to `10^tol_log10 * ||v||`.
    pub fn is_even(&self, tol_log10: f64) -> bool {
        self.parity_residual(false) <= self.norm_log10() + tol_log10
    }

    /// `v(-k) = -v(k)` up to `10^tol_log10 * ||v||`.
    pub fn is_odd(&self, tol_log10: f64) -> bool {
        self.parity_residual(true) <= self.norm_log10() + tol_log10
    }

    fn parity_residual(&self, odd: bool) -> f64 {
        self.iter()
            .map(|(k, a)| {
                let b = self.get(-k);
                if odd { a.add(b) } else { a.sub(b) }.log10_abs()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Same vector with entries exactly mirrored: `v(-k) := v(k)` for `k > 0`
    /// (even) or `v(-k) := -v(k)` and `v(0) := 0` (odd; also `v(N/2) := 0` for even `N`).
    pub fn symmetrized(&self, odd: bool, ctx: &PrecisionContext) -> Self {
        let mut out = self.clone();
        for k in 1..=self.index.half_floor() as i64 {
            let v = self.get(k);
            out.set(-k, if odd { v.neg() } else { v.clone() });
        }
        if odd {
            out.set(0, S::zero(ctx));
            if self.n_dim().is_multiple_of(2) {
                out.set(self.index.hi(), S::zero(ctx));
            }
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        debug_assert_eq!(self.n_dim(), other.n_dim());
        Self {
            index: self.index,
            entries: self.entries.iter().zip(other.entries.iter()).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl<S: Scalar> PeriodicVector<Complex<S>> {
    pub fn real_part(&self) -> RealVector<S> {
        self.map(|z| z.re.clone())
    }

    pub fn imag_part(&self) -> RealVector<S> {
        self.map(|z| z.im.clone())
    }

    /// Every imaginary part is at most `10^tol_log10 * ||a||`.
    pub fn is_real(&self, tol_log10: f64) -> bool {
        let cutoff = self.norm_log10() + tol_log10;
        self.entries.iter().all(|z| z.im.log10_abs() <= cutoff)
    }

    pub fn sub(&self, other: &Self) -> Self {
        PeriodicVector {
            index: self.index,
            entries: self.entries.iter().zip(other.entries.iter()).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    /// Multiply every entry by `(-i)^power`.
    pub fn mul_neg_i_pow(&self, power: usize) -> Self {
        self.map(|z| z.mul_neg_i_pow(power))
    }

    /// Bilinear pairing `sum a(k) b(k)` (no conjugation).
    pub fn dot_bilinear(&self, other: &Self, ctx: &PrecisionContext) -> Result<Complex<S>> {
        self.check_same(other)?;
        Ok(self.entries.iter().zip(other.entries.iter()).fold(Complex::zero(ctx), |acc, (a, b)| acc.add(&a.mul(b))))
    }
}

/// Bilinear pairing `<a, b> = sum_k a(k) b(k)` of real vectors.
pub fn dot<S: Scalar>(a: &RealVector<S>, b: &RealVector<S>) -> Result<S> {
    a.check_same(b)?;
    Ok(dot_unchecked(a, b))
}

pub(crate) fn dot_unchecked<S: Scalar>(a: &RealVector<S>, b: &RealVector<S>) -> S {
    let mut pairs = a.entries.iter().zip(b.entries.iter()).filter(|(x, y)| !x.is_exact_zero() && !y.is_exact_zero());
    match pairs.next() {
        None => a.entries[0].mul(&b.entries[0]),
        Some((x, y)) => pairs.fold(x.mul(y), |acc, (x, y)| acc.add(&x.mul(y))),
    }
}

/// `||a|| = sqrt(<a, a>)` for a real vector.
pub fn norm<S: Scalar>(a: &RealVector<S>) -> S {
    dot_unchecked(a, a).sqrt()
}

/// `sqrt(sum |a(k)|^2)`, the norm used for complex residuals.
pub fn hermitian_norm<S: Scalar>(a: &ComplexVector<S>) -> S {
    let mut terms = a.entries.iter().map(Complex::norm_sqr);
    let first = terms.next().expect("vectors have N >= 2 entries");
    terms.fold(first, |acc, t| acc.add(&t)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Real;
    use alloc::vec;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    fn vector(n: usize, values: &[i64], c: &PrecisionContext) -> RealVector<Real> {
        let index = IndexSet::new(n).unwrap();
        PeriodicVector::new(index, values.iter().map(|&v| Real::from_i64(v, c)).collect()).unwrap()
    }

    #[test]
    fn width_examples() {
        let c = ctx();
        assert_eq!(vector(7, &[0, 0, 1, 2, 3, 0, 0], &c).width(&c).value, 1);
        assert_eq!(vector(7, &[0, 0, 0, 1, 2, 3, 0], &c).width(&c).value, 2);
        assert_eq!(vector(6, &[0, 1, 2, 3, 0, 0], &c).width(&c).value, 1);
        assert_eq!(vector(6, &[1, 2, 3, 0, 0, 0], &c).width(&c).value, 2);
        assert_eq!(vector(6, &[0, 0, 0, 0, 0, 1], &c).width(&c).value, 3);
    }

    #[test]
    fn zero_vector_is_flagged() {
        let c = ctx();
        let w = vector(5, &[0, 0, 0, 0, 0], &c).width(&c);
        assert_eq!(w, Width { value: 0, zero_vector: true });
    }

    #[test]
    fn width_uses_relative_threshold() {
        let c = ctx();
        let index = IndexSet::new(7).unwrap();
        let tiny = Real::pow10(-30, &c);
        let v = PeriodicVector::from_fn(index, |k| {
            if k == 0 {
                Real::one(&c)
            } else if k == 3 {
                tiny.clone()
            } else {
                Real::zero(&c)
            }
        });
        // 1e-30 is below the default 1e-20 relative threshold
        assert_eq!(v.width(&c).value, 0);
        assert_eq!(v.width_with(-35.0).value, 3);
    }

    #[test]
    fn periodic_indexing() {
        let c = ctx();
        let v = vector(6, &[10, 20, 30, 40, 50, 60], &c);
        assert_eq!(v.get(-2).to_f64(), 10.0);
        assert_eq!(v.get(4).to_f64(), 10.0);
        assert_eq!(v.get(-3).to_f64(), 60.0);
        assert_eq!(v.get(9).to_f64(), 60.0);
    }

    #[test]
    fn dot_and_norm() {
        let c = ctx();
        let e0 = RealVector::<Real>::delta(IndexSet::new(5).unwrap(), 0, &c);
        assert_eq!(dot(&e0, &e0).unwrap().to_f64(), 1.0);
        let v = vector(4, &[3, 4, 0, 0], &c);
        assert_eq!(norm(&v).to_f64(), 5.0);
        let w = vector(5, &[1, 1, 1, 1, 1], &c);
        assert!(matches!(dot(&v, &w), Err(Error::DimensionMismatch { left: 4, right: 5 })));
        assert!((v.norm_log10() - libm::log10(5.0)).abs() < 1e-12);
    }

    #[test]
    fn parity_predicates() {
        let c = ctx();
        let even = vector(7, &[1, 2, 3, 4, 3, 2, 1], &c);
        let odd = vector(7, &[-1, -2, -3, 0, 3, 2, 1], &c);
        assert!(even.is_even(-30.0) && !even.is_odd(-30.0));
        assert!(odd.is_odd(-30.0) && !odd.is_even(-30.0));
        // N = 6: k = 3 is its own mirror image
        let six = vector(6, &[2, 1, 5, 1, 2, 7], &c);
        assert!(six.is_even(-30.0));
    }

    #[test]
    fn realness_of_complex_vectors() {
        let c = ctx();
        let index = IndexSet::new(3).unwrap();
        let z = PeriodicVector::new(
            index,
            vec![
                Complex::new(Real::one(&c), Real::zero(&c)),
                Complex::new(Real::one(&c), Real::pow10(-35, &c)),
                Complex::new(Real::one(&c), Real::zero(&c)),
            ],
        )
        .unwrap();
        assert!(z.is_real(-30.0));
        assert!(!z.is_real(-36.0));
        assert!((hermitian_norm(&z).to_f64() - libm::sqrt(3.0)).abs() < 1e-14);
    }
}
