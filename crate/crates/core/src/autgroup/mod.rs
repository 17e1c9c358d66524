//! The group `Aut_ord(D(L_n))` of order-preserving automorphisms, realized
//! as `Z_p^n ⋊ Aut(L_n)`.
//!
//! Automorphisms are handled in two presentations: [`GeneratorImages`]
//! (images of `x_i^{±1}` and of `d_i^[p^k]` for `k < K`) and the factored
//! form [`FactoredAut`] `= σ_s ∘ τ`. [`factorize`] converts the first into
//! the second; [`FactoredAut::to_images`] goes back.

mod factor;
mod images;
mod monomial;
mod sigma;

pub use factor::{
    apply_sigma_after, extract_digits, factorize, restriction_to_laurent, FactoredAut,
};
pub use images::{GeneratorImages, RelationCheck, ValidationReport};
pub use monomial::{determinant, MonomialAut};
pub use sigma::{
    build_sigma, level_order, sigma_apply, sigma_image_divided, SigmaShift, MAX_LEVEL_ORDER,
};
