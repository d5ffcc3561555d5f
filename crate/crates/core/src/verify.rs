use core::fmt;

use alloc::vec::Vec;

use crate::basis::BasisSet;
use crate::context::PrecisionContext;
use crate::dft::DftOperator;
use crate::dims::EigenspaceDims;
use crate::error::{Error, Result};
use crate::operator::LOperator;
use crate::scalar::Scalar;
use crate::vector::{dot_unchecked, hermitian_norm, norm};

/// A nonnegative quantity kept as its base-10 logarithm, so that residuals far below the
/// `f64` range stay representable.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Magnitude {
    log10: f64,
}

impl Magnitude {
    pub const ZERO: Magnitude = Magnitude { log10: f64::NEG_INFINITY };

    pub fn from_log10(log10: f64) -> Self {
        Self { log10 }
    }

    pub fn of<S: Scalar>(x: &S) -> Self {
        Self { log10: x.log10_abs() }
    }

    pub fn log10(self) -> f64 {
        self.log10
    }

    /// Nearest `f64` (zero when the value underflows).
    pub fn value(self) -> f64 {
        libm::pow(10.0, self.log10)
    }

    pub fn is_zero(self) -> bool {
        self.log10 == f64::NEG_INFINITY
    }

    /// `self <= 10^log10_bound`.
    pub fn at_most(self, log10_bound: f64) -> bool {
        self.log10 <= log10_bound
    }

    pub fn max(self, other: Magnitude) -> Magnitude {
        if other.log10 > self.log10 {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if !self.log10.is_finite() {
            return f.write_str("inf");
        }
        let mut exponent = libm::floor(self.log10);
        let mut mantissa = libm::pow(10.0, self.log10 - exponent);
        if mantissa >= 9.95 {
            mantissa /= 10.0;
            exponent += 1.0;
        }
        write!(f, "{mantissa:.1}e{}", exponent as i64)
    }
}

/// A basis vector whose measured width differs from `floor((N + n + 2) / 4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WidthViolation {
    pub index: usize,
    pub expected: usize,
    pub found: usize,
}

/// A width bound `n` at which column `m` does not hold `n - K_m + 1` vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnCountViolation {
    pub column: usize,
    pub width: usize,
    pub expected: usize,
    pub found: usize,
}

/// Everything [`verify_basis`] measured about a basis.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub n_dim: usize,
    pub digits: u32,
    /// `max |<T_i, T_j> - delta_ij|` and the pair attaining it.
    pub max_ortho_residual: Magnitude,
    pub worst_ortho_pair: (usize, usize),
    /// `max ||F T_n - lambda_n T_n||` (Hermitian norm) and the index attaining it.
    pub max_eigen_residual: Magnitude,
    pub worst_eigen_index: usize,
    pub width_violations: Vec<WidthViolation>,
    pub label_counts: [usize; 4],
    pub expected_dims: [usize; 4],
    pub dims_match: bool,
    pub column_count_violations: Vec<ColumnCountViolation>,
    /// `max | |<L T_n, T_{n+4}>| - b_n |` together with the reversed pairing.
    pub max_symmetry_residual: Magnitude,
    pub oracle_deviation: Option<Magnitude>,
    /// Digits lost: from the error radii when balls were used, otherwise the larger of
    /// the residual-based and recurrence-based estimates.
    pub precision_loss_digits: Option<f64>,
    /// `log10(max(ortho, eigen residual))` measured against the unit roundoff.
    pub observed_loss_digits: f64,
    /// Worst single-step cancellation seen in the `b_n^2` cross-check.
    pub recurrence_loss_proxy: Option<f64>,
    /// Largest error radius relative to the vector norm, when balls were used.
    pub max_error_radius: Option<Magnitude>,
}

impl VerificationReport {
    /// All structural checks hold and every residual is at most `10^log10_tolerance`.
    pub fn passed(&self, log10_tolerance: f64) -> bool {
        self.max_ortho_residual.at_most(log10_tolerance)
            && self.max_eigen_residual.at_most(log10_tolerance)
            && self.max_symmetry_residual.at_most(log10_tolerance)
            && self.oracle_deviation.is_none_or(|d| d.at_most(log10_tolerance))
            && self.structure_ok()
    }

    /// Widths, multiplicities and column counts are exactly as predicted.
    pub fn structure_ok(&self) -> bool {
        self.width_violations.is_empty() && self.dims_match && self.column_count_violations.is_empty()
    }

    pub fn with_oracle_deviation(mut self, deviation: Magnitude) -> Self {
        self.oracle_deviation = Some(deviation);
        self
    }
}

/// Check orthonormality, the eigen-equation, widths, multiplicities and column counts.
pub fn verify_basis<S: Scalar>(basis: &BasisSet<S>, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let n_dim = basis.n_dim();
    let dims = EigenspaceDims::new(n_dim)?;
    let vectors = basis.vectors();

    let mut max_ortho = Magnitude::ZERO;
    let mut worst_pair = (0, 0);
    let one = S::one(ctx);
    for i in 0..n_dim {
        for j in i..n_dim {
            let d = dot_unchecked(&vectors[i], &vectors[j]);
            let r = Magnitude::of(&if i == j { d.sub(&one) } else { d });
            if r > max_ortho || (i, j) == (0, 0) {
                worst_pair = (i, j);
                max_ortho = max_ortho.max(r);
            }
        }
    }

    let f = DftOperator::<S>::new(n_dim, ctx)?;
    let mut max_eigen = Magnitude::ZERO;
    let mut worst_eigen = 0;
    for (n, v) in vectors.iter().enumerate() {
        let image = f.forward_real(v, ctx)?;
        let target = v.to_complex(ctx).mul_neg_i_pow(basis.eigenvalue(n).power());
        let r = Magnitude::of(&hermitian_norm(&image.sub(&target)));
        if r > max_eigen || n == 0 {
            worst_eigen = n;
            max_eigen = max_eigen.max(r);
        }
    }

    let widths: Vec<usize> = vectors.iter().map(|v| v.width(ctx).value).collect();
    let width_violations = widths
        .iter()
        .enumerate()
        .filter_map(|(index, &found)| {
            let expected = dims.basis_width(index);
            (found != expected).then_some(WidthViolation { index, expected, found })
        })
        .collect();

    let label_counts = basis.label_counts();
    let mut column_count_violations = Vec::new();
    for m in 0..4 {
        for width in dims.k(m)..=dims.max_width(m) {
            let found = basis.column(m).iter().filter(|&&i| widths[i] <= width).count();
            let expected = dims.dim_below_width(m, width);
            if found != expected {
                column_count_violations.push(ColumnCountViolation { column: m, width, expected, found });
            }
        }
    }

    let operator = LOperator::<S>::new(n_dim, ctx)?;
    let mut max_symmetry = Magnitude::ZERO;
    for m in 0..4 {
        let column = basis.column(m);
        for (l, pair) in column.windows(2).enumerate() {
            let Some(b) = basis.b(m + 4 * l) else { continue };
            let (lo, hi) = (&vectors[pair[0]], &vectors[pair[1]]);
            let forward = dot_unchecked(&operator.apply(lo)?, hi).abs();
            let backward = dot_unchecked(&operator.apply(hi)?, lo).abs();
            max_symmetry = max_symmetry.max(Magnitude::of(&forward.sub(b))).max(Magnitude::of(&backward.sub(b)));
        }
    }

    let max_error_radius = Some(
        vectors
            .iter()
            .map(|v| {
                let top = v.entries().iter().map(Scalar::radius_log10).fold(f64::NEG_INFINITY, f64::max);
                Magnitude::from_log10(top - norm(v).log10_abs())
            })
            .fold(Magnitude::ZERO, Magnitude::max),
    )
    .filter(|r| !r.is_zero());
    let unit = ctx.unit_roundoff_log10();
    let observed_loss_digits = (max_ortho.max(max_eigen).log10() - unit).max(0.0);
    let recurrence_loss_proxy = basis.precision_loss_estimate();
    let precision_loss_digits = match max_error_radius {
        Some(r) => Some((r.log10() - unit).max(0.0)),
        None => Some(recurrence_loss_proxy.map_or(observed_loss_digits, |p| p.max(observed_loss_digits))),
    };

    Ok(VerificationReport {
        n_dim,
        digits: ctx.digits(),
        max_ortho_residual: max_ortho,
        worst_ortho_pair: worst_pair,
        max_eigen_residual: max_eigen,
        worst_eigen_index: worst_eigen,
        width_violations,
        label_counts,
        expected_dims: dims.dims,
        dims_match: label_counts == dims.dims,
        column_count_violations,
        max_symmetry_residual: max_symmetry,
        oracle_deviation: None,
        precision_loss_digits,
        observed_loss_digits,
        recurrence_loss_proxy,
        max_error_radius,
    })
}

/// `max_n min(||T_n - T'_n||, ||T_n + T'_n||)` between two bases of the same dimension.
pub fn oracle_deviation<S: Scalar>(a: &BasisSet<S>, b: &BasisSet<S>) -> Result<Magnitude> {
    if a.n_dim() != b.n_dim() {
        return Err(Error::DimensionMismatch { left: a.n_dim(), right: b.n_dim() });
    }
    Ok(a.vectors()
        .iter()
        .zip(b.vectors())
        .map(|(x, y)| {
            let minus = norm(&x.sub(y)).log10_abs();
            let plus = norm(&x.add(y)).log10_abs();
            Magnitude::from_log10(minus.min(plus))
        })
        .fold(Magnitude::ZERO, Magnitude::max))
}
