//! Positive-definite kernels, their reproducing-kernel Hilbert spaces, and
//! boundary factorizations `K(x, y) = ∫ conj(k_x) k_y dμ` realized on finite
//! quadratures.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`kernel`] | kernels, Gram matrices, PSD tests, the order `K ≪ L`, product kernels |
//! | [`rkhs`] | finite spans `Σ cᵢ K(·, xᵢ)`, inner products, membership bounds |
//! | [`boundary`] | discrete measures, induced kernels, analysis/synthesis operators, frames |
//! | [`gaussian`] | Gaussian processes, Karhunen–Loève sampling, Wiener increments, set kernels |
//! | [`drury_arveson`] | the Drury–Arveson kernel and its sphere boundary |
//! | [`network`] | resistance networks, energy norms, Green's functions |
//! | [`cantor`] | the quarter-Cantor measure, `Λ₄`, and `K_Λ₄` |
//! | [`learn`] | regularized least squares in an RKHS, feature-map kernels |
//!
//! Inner products are conjugate-linear in the first slot and linear in the
//! second, everywhere.

pub mod boundary;
pub mod cantor;
pub mod drury_arveson;
pub mod error;
pub mod gaussian;
pub mod kernel;
pub mod learn;
pub mod linalg;
pub mod network;
pub mod random;
pub mod rkhs;

pub use error::{Error, Result};
pub use kernel::{Domain, GramMatrix, Kernel, Point};
pub use rkhs::RkhsElement;

/// Complex scalar used throughout, even for real-valued kernels.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
