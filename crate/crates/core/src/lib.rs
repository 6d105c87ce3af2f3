//! Quantum harmonic analysis on finite abelian phase spaces.
//!
//! A phase space here is `Ξ = G × Ĝ` for a finite abelian group `G`, carrying a
//! Heisenberg multiplier `m`. From that data the crate builds the projective
//! representation `U_z` on `ℂ^|G|`, the parity operator `R`, and the three
//! convolutions between functions on `Ξ` and operators. On top of these sit the
//! symplectic and Fourier–Weyl transforms, a twisted-positive-definiteness test
//! with operator reconstruction, Wiener regularity reports for operator
//! families, positive correspondence rules, and wavelet/coorbit norms.
//!
//! Every integral over `Ξ` is a finite sum with Haar weight `1/|G|` per point.
//! With that weight the Moyal constant is one and the symplectic Fourier
//! transform is its own inverse.

pub mod bochner_wiener;
pub mod convolution;
pub mod coorbit;
pub mod correspondence;
pub mod error;
pub mod fourier;
pub mod group;
pub mod io;
pub mod linalg;
pub mod phase_space;
pub mod random;
pub mod representation;
pub mod suite;

pub use num_complex::Complex64;

pub use convolution::{MixedElement, PhaseFunction};
pub use error::{QhaError, Result};
pub use group::{FiniteAbelianGroup, GroupElement};
pub use linalg::{Exponent, Operator};
pub use phase_space::{Multiplier, MultiplierKind, PhasePoint, PhaseSpace, SymplecticForm};
pub use representation::Representation;

/// Absolute tolerance for unit-modulus and identity checks.
pub const TOL: f64 = 1e-10;
