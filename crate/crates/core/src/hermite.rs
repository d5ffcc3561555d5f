use alloc::vec::Vec;

use crate::basis::{build_basis, BasisSet};
use crate::context::PrecisionContext;
use crate::dft::omega;
use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::scalar::Scalar;
use crate::vector::{norm, PeriodicVector, RealVector};

/// Hermite functions `psi_n(x) = pi^{-1/4} e^{-x^2/2} h_n(x)` for `n <= max_order`, with
/// `h_0 = 1`, `h_1 = sqrt(2) x` and
/// `h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}`.
#[derive(Clone, Debug)]
pub struct HermiteEvaluator<S: Scalar> {
    max_order: usize,
    pi_quarter: S,
    /// `(sqrt(2/(n+1)), sqrt(n/(n+1)))` for `n = 0..max_order`.
    coefficients: Vec<(S, S)>,
}

impl<S: Scalar> HermiteEvaluator<S> {
    pub fn new(max_order: usize, ctx: &PrecisionContext) -> Self {
        let pi_quarter = S::one(ctx).div(&S::pi(ctx).sqrt().sqrt());
        let coefficients = (0..max_order)
            .map(|n| {
                let next = S::from_i64(n as i64 + 1, ctx);
                let two = S::from_i64(2, ctx).div(&next).sqrt();
                let back = S::from_i64(n as i64, ctx).div(&next).sqrt();
                (two, back)
            })
            .collect();
        Self { max_order, pi_quarter, coefficients }
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// `psi_0(x), ..., psi_max_order(x)`.
    pub fn evaluate_all(&self, x: &S, ctx: &PrecisionContext) -> Vec<S> {
        let envelope = self.pi_quarter.mul(&x.square().div_i64(2).neg().exp(ctx));
        let mut out = Vec::with_capacity(self.max_order + 1);
        out.push(envelope);
        for n in 0..self.max_order {
            let (two, back) = &self.coefficients[n];
            let mut next = two.mul(x).mul(&out[n]);
            if n > 0 {
                next = next.sub(&back.mul(&out[n - 1]));
            }
            out.push(next);
        }
        out
    }

    pub fn evaluate(&self, n: usize, x: &S, ctx: &PrecisionContext) -> Result<S> {
        if n > self.max_order {
            return Err(Error::IndexOutOfRange {
                what: "Hermite order",
                index: n as i64,
                lo: 0,
                hi: self.max_order as i64,
            });
        }
        Ok(self.evaluate_all(x, ctx).swap_remove(n))
    }

    /// `Psi_n(k) = omega^{1/4} psi_n(sqrt(omega) k)` for every `n <= max_order`.
    pub fn sample_all(&self, n_dim: usize, ctx: &PrecisionContext) -> Result<Vec<SampledHermite<S>>> {
        let index = IndexSet::new(n_dim)?;
        let omega: S = omega(n_dim, ctx);
        let root = omega.sqrt();
        let quarter = root.sqrt();
        let columns: Vec<Vec<S>> = index
            .iter()
            .map(|k| {
                let values = if k < 0 {
                    // exact parity: psi_n(-x) = (-1)^n psi_n(x)
                    let mirrored = self.evaluate_all(&root.mul_i64(-k), ctx);
                    mirrored.into_iter().enumerate().map(|(n, v)| if n % 2 == 1 { v.neg() } else { v }).collect()
                } else {
                    self.evaluate_all(&root.mul_i64(k), ctx)
                };
                values.into_iter().map(|v| v.mul(&quarter)).collect()
            })
            .collect();
        Ok((0..=self.max_order)
            .map(|n| SampledHermite {
                order: n,
                vector: PeriodicVector::new(index, columns.iter().map(|c| c[n].clone()).collect())
                    .expect("one entry per index"),
            })
            .collect())
    }
}

/// `psi_n(x)`.
pub fn psi<S: Scalar>(n: usize, x: &S, ctx: &PrecisionContext) -> S {
    HermiteEvaluator::new(n, ctx).evaluate_all(x, ctx).swap_remove(n)
}

/// A Hermite function sampled on the centered grid.
#[derive(Clone, Debug)]
pub struct SampledHermite<S: Scalar> {
    pub order: usize,
    pub vector: RealVector<S>,
}

pub fn sample_psi<S: Scalar>(n: usize, n_dim: usize, ctx: &PrecisionContext) -> Result<SampledHermite<S>> {
    Ok(HermiteEvaluator::new(n, ctx).sample_all(n_dim, ctx)?.swap_remove(n))
}

/// `s t` with `s = +1` or `-1` chosen to minimize `||s t - Psi_n||`; returns the signed
/// vector, `s`, and the distance.
pub fn align_sign<S: Scalar>(t: &RealVector<S>, psi: &SampledHermite<S>) -> Result<(RealVector<S>, i8, S)> {
    if t.n_dim() != psi.vector.n_dim() {
        return Err(Error::DimensionMismatch { left: t.n_dim(), right: psi.vector.n_dim() });
    }
    let plus = norm(&t.sub(&psi.vector));
    let minus = norm(&t.add(&psi.vector));
    if minus.sub(&plus).is_negative() {
        Ok((t.neg(), -1, minus))
    } else {
        Ok((t.clone(), 1, plus))
    }
}

/// Least-squares fit `log e = exponent * log N + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in natural-log units.
    pub residual: f64,
}

pub fn fit_decay_exponent(dims: &[f64], errors: &[f64]) -> Option<DecayFit> {
    if dims.len() != errors.len() || dims.len() < 2 || errors.iter().any(|&e| e <= 0.0 || !e.is_finite()) {
        return None;
    }
    let x: Vec<f64> = dims.iter().map(|&d| libm::log(d)).collect();
    let y: Vec<f64> = errors.iter().map(|&e| libm::log(e)).collect();
    let count = x.len() as f64;
    let mx = x.iter().sum::<f64>() / count;
    let my = y.iter().sum::<f64>() / count;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss: f64 = x.iter().zip(&y).map(|(a, b)| (b - exponent * a - intercept).powi(2)).sum();
    Some(DecayFit { exponent, intercept, residual: libm::sqrt(ss / count) })
}

/// `e_n(N) = min_s ||s T_n - Psi_n||` for the given orders and one basis.
pub fn convergence_errors<S: Scalar>(
    basis: &BasisSet<S>,
    orders: &[usize],
    ctx: &PrecisionContext,
) -> Result<Vec<f64>> {
    let n_dim = basis.n_dim();
    let top = orders.iter().copied().max().unwrap_or(0);
    if top >= n_dim {
        return Err(Error::IndexOutOfRange { what: "order", index: top as i64, lo: 0, hi: n_dim as i64 - 1 });
    }
    let sampled = HermiteEvaluator::<S>::new(top, ctx).sample_all(n_dim, ctx)?;
    orders.iter().map(|&n| Ok(align_sign(basis.vector(n), &sampled[n])?.2.to_f64())).collect()
}

/// One order's errors across the dimensions of a [`ConvergenceReport`].
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub order: usize,
    pub errors: Vec<f64>,
    /// `e_n(N_i) / e_n(N_{i+1})`.
    pub ratios: Vec<f64>,
    pub monotone: bool,
    pub fit: Option<DecayFit>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub dims: Vec<usize>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Assemble a report from `errors[i][j] = e_{orders[j]}(dims[i])`.
    pub fn from_errors(orders: &[usize], dims: &[usize], errors: &[Vec<f64>]) -> Self {
        let x: Vec<f64> = dims.iter().map(|&d| d as f64).collect();
        let rows = orders
            .iter()
            .enumerate()
            .map(|(j, &order)| {
                let e: Vec<f64> = errors.iter().map(|row| row[j]).collect();
                let ratios: Vec<f64> = e.windows(2).map(|w| w[0] / w[1]).collect();
                ConvergenceRow {
                    order,
                    monotone: e.windows(2).all(|w| w[1] < w[0]),
                    fit: fit_decay_exponent(&x, &e),
                    ratios,
                    errors: e,
                }
            })
            .collect();
        Self { dims: dims.to_vec(), rows }
    }
}

/// Build the basis for every `N` in `dims` and tabulate `e_n(N)` for `n` in `orders`.
pub fn convergence_report<S: Scalar>(
    orders: &[usize],
    dims: &[usize],
    ctx: &PrecisionContext,
) -> Result<ConvergenceReport> {
    let errors = dims
        .iter()
        .map(|&n_dim| convergence_errors(&build_basis::<S>(n_dim, ctx)?, orders, ctx))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::from_errors(orders, dims, &errors))
}
