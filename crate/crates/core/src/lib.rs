//! Exact computation in rings of differential operators with divided powers
//! over `F_p`, and in the group of order-preserving automorphisms of
//! `D(L_n)`, the ring of differential operators on the Laurent polynomial
//! algebra `L_n = F_p[x_1^{±1}, ..., x_n^{±1}]`.
//!
//! Every order-preserving automorphism factors uniquely as `σ_s ∘ τ`, with
//! `s ∈ Z_p^n` a vector of p-adic integers and `τ` a monomial automorphism
//! of `L_n`. The [`autgroup`] module builds `σ_s`, lifts `τ`, composes
//! factored automorphisms and recovers `(s, τ)` from generator images.

pub mod autgroup;
pub mod cli;
pub mod diffop;
pub mod error;
pub mod laurent;
pub mod oracles;
pub mod scalars;

pub use diffop::{
    divided_image_from_levels, normal_form_from_action, DiffOp, DividedIndex, RecoveryOptions,
};
pub use error::{Error, Result};
pub use laurent::{ExponentVector, LaurentPoly};
pub use scalars::{
    binom_int_mod_p, binom_nat_mod_p, binom_padic, Fp, PadicInt, Prime, DEFAULT_PRECISION,
};
