//! Functional models of completely non-unitary contractions on `ℂⁿ`.
//!
//! The crate is layered:
//!
//! - [`symplectic`]: strong symplectic spaces, complements, quotients,
//!   polarizations, Möbius actions and the Cayley transform.
//! - [`contraction`]: defect analysis of a contraction, boundary
//!   quadruples, the characteristic function `Θ_T` and Weyl functions `B`.
//! - [`kernel`]: the reproducing kernel of a Schur function on `𝔻₊ ⊔ 𝔻₋`
//!   and its Gram matrices over sample grids.
//! - [`model`]: hat sections, the model operator, synthesis from a marked
//!   disc and unitary-equivalence checks.
//!
//! [`linalg`], [`disc`], [`schur`] and [`random`] hold the shared numerics.
//!
//! ```
//! use contraction_models::contraction::{defect_analysis, theta, CONTRACTION_TOL};
//! use contraction_models::linalg::{c, CMat};
//!
//! let an = defect_analysis(&CMat::zeros(1, 1), CONTRACTION_TOL)?;
//! let l = c(0.2, -0.5);
//! assert!((theta(&an, l)?[(0, 0)] - l).norm() < 1e-15);
//! # Ok::<(), contraction_models::Error>(())
//! ```

pub mod contraction;
pub mod disc;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod model;
pub mod random;
pub mod schur;
pub mod symplectic;

pub use error::{Error, Result};

// Book chapters are compiled as doctests so their snippets stay runnable.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/symplectic.md")]
    pub mod symplectic {}
    #[doc = include_str!("../../../book/src/contractions.md")]
    pub mod contractions {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    pub mod kernels {}
    #[doc = include_str!("../../../book/src/model.md")]
    pub mod model {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
}
