use alloc::vec::Vec;

use crate::context::PrecisionContext;
use crate::dims::EigenspaceDims;
use crate::error::{Error, Result};
use crate::gram_schmidt::gram_schmidt_reference;
use crate::operator::LOperator;
use crate::scalar::Scalar;
use crate::seeds::SeedFamily;
use crate::vector::{dot_unchecked, norm, RealVector};

/// Which algorithm produced a basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    Recurrence,
    GramSchmidt,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::Recurrence => "recurrence",
            Construction::GramSchmidt => "gram-schmidt",
        }
    }
}

/// DFT eigenvalue `(-i)^m`, stored by its exponent `m mod 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Eigenvalue(u8);

impl Eigenvalue {
    pub fn from_power(m: usize) -> Self {
        Eigenvalue((m % 4) as u8)
    }

    pub fn power(self) -> usize {
        usize::from(self.0)
    }

    pub fn label(self) -> &'static str {
        ["1", "-i", "-1", "i"][self.power()]
    }
}

/// Coefficients of one step `T_{n+4} = (L T_n - a_n T_n - b_{n-4} T_{n-4}) / b_n`.
#[derive(Clone, Debug)]
pub struct StepCoefficients<S> {
    /// Nominal index `n` of the source vector.
    pub n: usize,
    pub a: S,
    pub b: S,
    /// log10 of `|b_n^2 - (||L T_n||^2 - a_n^2 - b_{n-4}^2)| / b_n^2`.
    pub discrepancy_log10: f64,
}

/// Output of [`recurrence_step`].
#[derive(Clone, Debug)]
pub struct RecurrenceStep<S> {
    pub next: RealVector<S>,
    pub coefficients: StepCoefficients<S>,
}

/// Sign fixed on one basis vector: the entry at `pivot` was made positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignRecord {
    pub index: usize,
    pub pivot: i64,
    pub flipped: bool,
}

/// Knobs for [`build_basis_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub construction: Construction,
    /// Dimensions below this use the Gram-Schmidt construction even when the
    /// recurrence is requested. Must be at least 5.
    pub seed_threshold: usize,
    pub sign_convention: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { construction: Construction::Recurrence, seed_threshold: 5, sign_convention: true }
    }
}

/// The basis `T_0, ..., T_{N-1}` with eigenvalue labels and recurrence data.
#[derive(Clone, Debug)]
pub struct BasisSet<S: Scalar> {
    pub(crate) n_dim: usize,
    pub(crate) vectors: Vec<RealVector<S>>,
    pub(crate) labels: Vec<Eigenvalue>,
    pub(crate) columns: [Vec<usize>; 4],
    pub(crate) steps: Vec<StepCoefficients<S>>,
    pub(crate) signs: Vec<SignRecord>,
    pub(crate) ghost: bool,
    pub(crate) construction: Construction,
    pub(crate) precision_loss: Option<f64>,
}

impl<S: Scalar> BasisSet<S> {
    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn vectors(&self) -> &[RealVector<S>] {
        &self.vectors
    }

    pub fn vector(&self, n: usize) -> &RealVector<S> {
        &self.vectors[n]
    }

    pub fn eigenvalue(&self, n: usize) -> Eigenvalue {
        self.labels[n]
    }

    pub fn eigenvalues(&self) -> &[Eigenvalue] {
        &self.labels
    }

    /// Stored indices of the vectors in eigenspace `E_m`, in order of increasing width.
    pub fn column(&self, m: usize) -> &[usize] {
        &self.columns[m % 4]
    }

    pub fn steps(&self) -> &[StepCoefficients<S>] {
        &self.steps
    }

    /// `a_n` for nominal index `n`, where a step from `T_n` exists.
    pub fn a(&self, n: usize) -> Option<&S> {
        self.steps.iter().find(|s| s.n == n).map(|s| &s.a)
    }

    pub fn b(&self, n: usize) -> Option<&S> {
        self.steps.iter().find(|s| s.n == n).map(|s| &s.b)
    }

    pub fn signs(&self) -> &[SignRecord] {
        &self.signs
    }

    /// True when the even-`N` ghost vector `T_N` was stored as `T_{N-1}`.
    pub fn ghost_used(&self) -> bool {
        self.ghost
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    /// Digits lost in the worst recurrence step, from the `b_n^2` cross-check.
    pub fn precision_loss_estimate(&self) -> Option<f64> {
        self.precision_loss
    }

    /// Eigenvalue label counts `[#1, #-i, #-1, #i]`.
    pub fn label_counts(&self) -> [usize; 4] {
        let mut counts = [0; 4];
        for l in &self.labels {
            counts[l.power()] += 1;
        }
        counts
    }

    pub(crate) fn from_columns(n_dim: usize, columns: [Vec<RealVector<S>>; 4], construction: Construction) -> Self {
        let mut slots: Vec<Option<(RealVector<S>, Eigenvalue)>> = (0..n_dim).map(|_| None).collect();
        let mut indices: [Vec<usize>; 4] = Default::default();
        let mut ghost = false;
        for (m, column) in columns.into_iter().enumerate() {
            for (l, v) in column.into_iter().enumerate() {
                let nominal = m + 4 * l;
                let stored = stored_index(n_dim, nominal);
                ghost |= stored != nominal;
                indices[m].push(stored);
                slots[stored] = Some((v, Eigenvalue::from_power(m)));
            }
        }
        let (vectors, labels) = slots.into_iter().map(|s| s.expect("every index is filled")).unzip();
        Self {
            n_dim,
            vectors,
            labels,
            columns: indices,
            steps: Vec::new(),
            signs: Vec::new(),
            ghost,
            construction,
            precision_loss: None,
        }
    }

    /// Fix every sign so that the first entry, in the order `k = 0, 1, 2, ...`, whose
    /// magnitude exceeds the zero threshold is positive.
    pub(crate) fn apply_sign_convention(&mut self, ctx: &PrecisionContext) {
        self.signs.clear();
        for (index, v) in self.vectors.iter_mut().enumerate() {
            let cutoff = v.norm_log10() + ctx.zero_threshold_log10();
            let hi = v.index_set().hi();
            let pivot = (0..=hi).find(|&k| v.get(k).log10_abs() > cutoff).unwrap_or(0);
            let flipped = v.get(pivot).is_negative();
            if flipped {
                *v = v.neg();
            }
            self.signs.push(SignRecord { index, pivot, flipped });
        }
    }

    /// Fill in `a_n = <L T_n, T_n>` and `b_n = |<L T_n, T_{n+4}>|` from the vectors.
    pub(crate) fn derive_coefficients(&mut self, ctx: &PrecisionContext) -> Result<()> {
        let l = LOperator::<S>::new(self.n_dim, ctx)?;
        self.steps.clear();
        for m in 0..4 {
            let column = &self.columns[m];
            for (position, pair) in column.windows(2).enumerate() {
                let lt = l.apply(&self.vectors[pair[0]])?;
                let a = dot_unchecked(&lt, &self.vectors[pair[0]]);
                let b = dot_unchecked(&lt, &self.vectors[pair[1]]).abs();
                self.steps.push(StepCoefficients { n: m + 4 * position, a, b, discrepancy_log10: f64::NEG_INFINITY });
            }
        }
        self.steps.sort_by_key(|s| s.n);
        Ok(())
    }
}

/// Index under which nominal vector `T_n` is stored (`T_N` becomes `T_{N-1}`).
pub(crate) fn stored_index(n_dim: usize, nominal: usize) -> usize {
    if nominal == n_dim {
        n_dim - 1
    } else {
        nominal
    }
}

/// The four starting vectors `T_0, ..., T_3` (unit norm, signs not yet fixed).
pub fn seed_t0_to_t3<S: Scalar>(family: &SeedFamily<S>) -> Result<[RealVector<S>; 4]> {
    let n_dim = family.n_dim();
    if n_dim < 5 {
        return Err(Error::FallbackRequired(n_dim));
    }
    let dims = EigenspaceDims::new(n_dim)?;
    let half_floor = n_dim / 2;
    let half_ceil = n_dim - half_floor;
    let (k0, k1, k2, k3) = (dims.k(0), dims.k(1), dims.k(2), dims.k(3));
    let t0 = family.u_closed(k0)?.add(&family.u_closed(half_floor - k0)?);
    let t1 = family.v_closed(k1)?.add(&family.v_closed(half_ceil - k1)?);
    let t2 = family.u_closed(k2)?.sub(&family.u_closed(half_floor - k2)?);
    let t3 = family.v_closed(k3)?.sub(&family.v_closed(half_ceil - k3)?);
    Ok([t0.normalized(), t1.normalized(), t2.normalized(), t3.normalized()])
}

/// One step of the three-term recurrence from `T_n` (and `T_{n-4}`, `b_{n-4}` when `n >= 4`).
pub fn recurrence_step<S: Scalar>(
    operator: &LOperator<S>,
    t_n: &RealVector<S>,
    previous: Option<(&RealVector<S>, &S)>,
    n: usize,
    ctx: &PrecisionContext,
) -> Result<RecurrenceStep<S>> {
    let lt = operator.apply(t_n)?;
    let a = dot_unchecked(&lt, t_n);
    let mut r = lt.sub_scaled(&a, t_n);
    let mut expected = dot_unchecked(&lt, &lt).sub(&a.square());
    if let Some((t_prev, b_prev)) = previous {
        r = r.sub_scaled(b_prev, t_prev);
        expected = expected.sub(&b_prev.square());
    }
    let b = norm(&r);
    if !b.is_finite() {
        return Err(Error::NonFinite("recurrence step"));
    }
    let log10_b = b.log10_abs();
    if log10_b < 20.0 - f64::from(ctx.digits()) {
        return Err(Error::DegenerateStep { n, log10_b });
    }
    let b_sq = b.square();
    let discrepancy_log10 = b_sq.sub(&expected).log10_abs() - b_sq.log10_abs();
    let next = r.map(|x| x.div(&b));
    Ok(RecurrenceStep { next, coefficients: StepCoefficients { n, a, b, discrepancy_log10 } })
}

/// Build the basis with the recurrence (Gram-Schmidt below `N = 5`).
pub fn build_basis<S: Scalar>(n_dim: usize, ctx: &PrecisionContext) -> Result<BasisSet<S>> {
    build_basis_with(n_dim, ctx, BuildOptions::default())
}

pub fn build_basis_with<S: Scalar>(n_dim: usize, ctx: &PrecisionContext, options: BuildOptions) -> Result<BasisSet<S>> {
    let family = SeedFamily::<S>::new(n_dim, ctx)?;
    let use_recurrence = options.construction == Construction::Recurrence && n_dim >= options.seed_threshold.max(5);
    let mut basis = if use_recurrence {
        recurrence_basis(&family, ctx)?
    } else {
        let mut basis = gram_schmidt_reference(&family, ctx)?;
        basis.derive_coefficients(ctx)?;
        basis
    };
    if options.sign_convention {
        basis.apply_sign_convention(ctx);
    }
    Ok(basis)
}

fn recurrence_basis<S: Scalar>(family: &SeedFamily<S>, ctx: &PrecisionContext) -> Result<BasisSet<S>> {
    let n_dim = family.n_dim();
    let dims = EigenspaceDims::new(n_dim)?;
    let operator = LOperator::<S>::new(n_dim, ctx)?;
    let seeds = seed_t0_to_t3(family)?;
    let mut steps = Vec::new();
    let mut columns: [Vec<RealVector<S>>; 4] = Default::default();
    for (m, seed) in seeds.into_iter().enumerate() {
        let column = &mut columns[m];
        column.push(seed);
        let mut b_prev: Option<S> = None;
        for l in 0..dims.dim(m).saturating_sub(1) {
            let n = m + 4 * l;
            let previous = if l >= 1 { b_prev.as_ref().map(|b| (&column[l - 1], b)) } else { None };
            let step = recurrence_step(&operator, &column[l], previous, n, ctx)?;
            b_prev = Some(step.coefficients.b.clone());
            column.push(step.next);
            steps.push(step.coefficients);
        }
    }
    steps.sort_by_key(|s| s.n);
    let unit = ctx.unit_roundoff_log10();
    let loss = steps.iter().map(|s| s.discrepancy_log10 - unit).fold(0.0_f64, f64::max);
    let mut basis = BasisSet::from_columns(n_dim, columns, Construction::Recurrence);
    basis.steps = steps;
    basis.precision_loss = Some(loss);
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dft::DftOperator;
    use crate::scalar::Real;
    use crate::vector::{dot, hermitian_norm};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(100).unwrap()
    }

    #[test]
    fn seeds_are_unit_eigenvectors() {
        let c = ctx();
        let family = SeedFamily::<Real>::new(8, &c).unwrap();
        let seeds = seed_t0_to_t3(&family).unwrap();
        let f = DftOperator::<Real>::new(8, &c).unwrap();
        for (m, t) in seeds.iter().enumerate() {
            assert!(norm(t).sub(&Real::one(&c)).log10_abs() < -80.0);
            let residual = f.forward_real(t, &c).unwrap().sub(&t.to_complex(&c).mul_neg_i_pow(m));
            assert!(hermitian_norm(&residual).log10_abs() < -80.0, "m = {m}");
        }
        let family = SeedFamily::<Real>::new(7, &c).unwrap();
        assert_eq!(seed_t0_to_t3(&family).unwrap()[2].width(&c).value, 2);
        let small = SeedFamily::<Real>::new(4, &c).unwrap();
        assert!(matches!(seed_t0_to_t3(&small), Err(Error::FallbackRequired(4))));
    }

    #[test]
    fn first_step_identities() {
        let c = ctx();
        let operator = LOperator::<Real>::new(16, &c).unwrap();
        let family = SeedFamily::<Real>::new(16, &c).unwrap();
        let seeds = seed_t0_to_t3(&family).unwrap();
        let step = recurrence_step(&operator, &seeds[0], None, 0, &c).unwrap();
        let lt = operator.apply(&seeds[0]).unwrap();
        let lhs = step.coefficients.b.square().add(&step.coefficients.a.square());
        assert!(lhs.sub(&dot(&lt, &lt).unwrap()).log10_abs() < -80.0);
        assert!((step.coefficients.a.to_f64() - 4.0).abs() < 0.5);
        assert!(step.coefficients.b.to_f64() > 0.0);
    }

    #[test]
    fn a0_near_four_for_larger_n() {
        let c = ctx();
        let basis = build_basis::<Real>(64, &c).unwrap();
        assert!((basis.a(0).unwrap().to_f64() - 4.0).abs() < 0.5);
    }

    #[test]
    fn labels_and_ghost() {
        let c = ctx();
        let basis = build_basis::<Real>(8, &c).unwrap();
        assert_eq!(basis.label_counts(), [3, 2, 2, 1]);
        assert!(basis.ghost_used());
        assert_eq!(basis.eigenvalue(7), Eigenvalue::from_power(8));
        let basis = build_basis::<Real>(6, &c).unwrap();
        assert_eq!(basis.eigenvalue(5).label(), "-1");
        let basis = build_basis::<Real>(7, &c).unwrap();
        assert!(!basis.ghost_used());
        assert_eq!(basis.eigenvalue(6), Eigenvalue::from_power(6));
    }

    #[test]
    fn widths_follow_formula() {
        let c = ctx();
        for n_dim in [5usize, 8, 17, 22] {
            let basis = build_basis::<Real>(n_dim, &c).unwrap();
            for (n, v) in basis.vectors().iter().enumerate() {
                assert_eq!(v.width(&c).value, (n_dim + n + 2) / 4, "N = {n_dim}, n = {n}");
            }
        }
    }

    #[test]
    fn degenerate_step_is_reported() {
        let c = ctx();
        let operator = LOperator::<Real>::new(8, &c).unwrap();
        let zero = RealVector::<Real>::zeros(crate::IndexSet::new(8).unwrap(), &c);
        let step = recurrence_step(&operator, &zero, None, 3, &c);
        assert!(matches!(step, Err(Error::DegenerateStep { n: 3, .. })));
    }

    #[test]
    fn sign_convention_is_deterministic() {
        let c = ctx();
        let basis = build_basis::<Real>(9, &c).unwrap();
        for record in basis.signs() {
            let v = basis.vector(record.index);
            assert!(!v.get(record.pivot).is_negative());
            if record.index % 2 == 1 {
                assert!(record.pivot > 0);
            }
        }
    }
}
