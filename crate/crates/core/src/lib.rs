//! Minimal Hermite-type eigenbasis of the centered discrete Fourier transform.
//!
//! The crate builds the unique (up to sign) orthonormal eigenbasis `T_0, ..., T_{N-1}`
//! of the unitary centered DFT whose vectors have the smallest possible support, at an
//! arbitrary working precision. Two independent constructions are provided: the fast
//! three-term recurrence driven by the operator `L`, and a Gram-Schmidt reference built
//! from Gaussian-type seed vectors. Both are generic over [`Scalar`], so the same code
//! runs on plain multiprecision numbers ([`Real`]) or on midpoint-radius balls
//! ([`Ball`]) that carry a rigorous bound on the accumulated rounding error.
//!
//! The crate is `no_std` and only needs an allocator.
//!
//! ```
//! use dft_hermite_core::{build_basis, verify_basis, PrecisionContext, Real};
//!
//! let ctx = PrecisionContext::new(60).unwrap();
//! let basis = build_basis::<Real>(8, &ctx).unwrap();
//! let report = verify_basis(&basis, &ctx).unwrap();
//! assert!(report.passed(-40.0));
//! ```
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod ball;
mod basis;
mod complex;
mod context;
mod dft;
mod dims;
mod error;
mod gram_schmidt;
mod hermite;
mod index;
mod operator;
mod scalar;
mod seeds;
mod vector;
mod verify;

pub use ball::Ball;
pub use basis::{
    build_basis, build_basis_with, recurrence_step, seed_t0_to_t3, BasisSet, BuildOptions, Construction, Eigenvalue,
    RecurrenceStep, SignRecord, StepCoefficients,
};
pub use complex::Complex;
pub use context::PrecisionContext;
pub use dft::DftOperator;
pub use dims::EigenspaceDims;
pub use error::{Error, Result};
pub use gram_schmidt::gram_schmidt_reference;
pub use hermite::{
    align_sign, convergence_errors, convergence_report, fit_decay_exponent, psi, sample_psi, ConvergenceReport,
    ConvergenceRow, DecayFit, HermiteEvaluator, SampledHermite,
};
pub use index::IndexSet;
pub use operator::LOperator;
pub use scalar::{Real, Scalar};
pub use seeds::{FourierPairReport, SeedFamily};
pub use vector::{dot, hermitian_norm, norm, ComplexVector, PeriodicVector, RealVector, Width};
pub use verify::{oracle_deviation, verify_basis, ColumnCountViolation, Magnitude, VerificationReport, WidthViolation};
