use alloc::vec::Vec;

use crate::basis::{BasisSet, Construction};
use crate::context::PrecisionContext;
use crate::dims::EigenspaceDims;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::seeds::SeedFamily;
use crate::vector::{dot_unchecked, norm, RealVector};

/// Reference construction: orthonormalize the families
/// `w_n = u_n + u_{floor(N/2)-n}`, `x_n = v_n + v_{ceil(N/2)-n}`,
/// `y_n = u_n - u_{floor(N/2)-n}`, `z_n = v_n - v_{ceil(N/2)-n}` in increasing `n`
/// and interleave them as `T_{4l+m}`. Signs are left as produced.
pub fn gram_schmidt_reference<S: Scalar>(family: &SeedFamily<S>, ctx: &PrecisionContext) -> Result<BasisSet<S>> {
    let n_dim = family.n_dim();
    let dims = EigenspaceDims::new(n_dim)?;
    let half_floor = n_dim / 2;
    let half_ceil = n_dim - half_floor;
    let mut columns: [Vec<RealVector<S>>; 4] = Default::default();
    for (m, column) in columns.iter_mut().enumerate() {
        let start = dims.k(m);
        let raw: Vec<RealVector<S>> = (start..start + dims.dim(m))
            .map(|n| -> Result<RealVector<S>> {
                Ok(match m {
                    0 => family.u_closed(n)?.add(&family.u_closed(half_floor - n)?),
                    1 => family.v_closed(n)?.add(&family.v_closed(half_ceil - n)?),
                    2 => family.u_closed(n)?.sub(&family.u_closed(half_floor - n)?),
                    _ => family.v_closed(n)?.sub(&family.v_closed(half_ceil - n)?),
                })
            })
            .collect::<Result<_>>()?;
        *column = orthonormalize(raw, ctx);
    }
    Ok(BasisSet::from_columns(n_dim, columns, Construction::GramSchmidt))
}

/// Modified Gram-Schmidt, with a second pass for any vector whose first-pass
/// residual overlap exceeds `10^(-digits/2)`.
fn orthonormalize<S: Scalar>(raw: Vec<RealVector<S>>, ctx: &PrecisionContext) -> Vec<RealVector<S>> {
    let tolerance = -f64::from(ctx.digits()) / 2.0;
    let mut done: Vec<RealVector<S>> = Vec::with_capacity(raw.len());
    for v in raw {
        let mut q = project_out(v, &done).normalized();
        let overlap = done.iter().map(|d| dot_unchecked(&q, d).log10_abs()).fold(f64::NEG_INFINITY, f64::max);
        if overlap > tolerance {
            q = project_out(q, &done).normalized();
        }
        done.push(q);
    }
    done
}

fn project_out<S: Scalar>(mut q: RealVector<S>, basis: &[RealVector<S>]) -> RealVector<S> {
    for d in basis {
        let c = dot_unchecked(&q, d);
        q = q.sub_scaled(&c, d);
    }
    debug_assert!(!norm(&q).is_zero());
    q
}
