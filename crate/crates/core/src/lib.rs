//! s-parametrized Stratonovich-Weyl kernels and quasiprobability distributions.
//!
//! Two concrete phase spaces are supported:
//!
//! * the sphere S² = SU(2)/U(1) for a spin-j representation, where the kernel
//!   family is built from the coherent-state overlap expansion in spherical
//!   harmonics ([`su2`], [`kernel`]);
//! * the complex plane for the Heisenberg-Weyl group, realized on a truncated
//!   Fock space with the closed-form s-ordered kernels ([`hw`]).
//!
//! The ordering parameter `s ∈ [-1, 1]` selects the distribution: `s = 1` is the
//! Husimi Q function, `s = 0` the Wigner function and `s = -1` the
//! Glauber-Sudarshan P function. [`axioms`] checks the correspondence axioms
//! numerically.

pub mod axioms;
pub mod error;
pub mod hw;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod qpd;
pub mod state;
pub mod su2;

pub use error::{Error, Result};
pub use kernel::{KernelData, SValue};
pub use linalg::OperatorMatrix;
pub use qpd::{GridSpec, QpdGrid, System};
pub use su2::{EulerAngles, HarmonicIndex, PhasePoint, QuadratureGrid, SpinRep};

pub use num_complex::Complex64;
