//! Exact-arithmetic model of Gossez's skew operator on `ℓ¹`, the monotone
//! operator `A = G + ⟨·, e⟩ e`, and certificates deciding the type (D)
//! property for `A⁻¹` and for the inverse of its bidual extension.

pub mod certificates;
pub mod error;
pub mod exact;
pub mod expr;
pub mod format;
pub mod kernel;
pub mod operators;
pub mod oracle;
pub mod sampling;
pub mod suite;

pub use certificates::{
    closure_membership, counterexample_pipeline, extremize, inverse_type_d_certificate, type_d_gap,
    CertReport, GapReport, Membership, QuadOutcome, Sense, Verdict,
};
pub use error::{Error, Result};
pub use exact::{decompose, linear_combine, pair_c_functional, pair_l1_c, EvConstSeq, FinSeq, LimFunctional, Linear, Rat};
pub use kernel::{Exact, Kernel, Mutant, Mutation};
pub use operators::{apply_a, apply_g, apply_nonlinear, monotonicity_gap, solve_a, trunc_matrix, NlPoint, TruncMatrix};
