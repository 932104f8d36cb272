//! Generalized Clifford–Fourier kernels `e^{iπ/2·G(Γ_y)} e^{-i(x,y)}`.
//!
//! The crate evaluates the kernel for integer polynomials `G` in the Laplace
//! domain (closed forms built from `f, f_α, f_β, f_γ` and their `g`
//! counterparts) and in the time domain (closed forms, Bessel convolutions,
//! generating-function extraction, Talbot inversion and an independent
//! Jacobi–Anger construction in two dimensions).

pub mod clifford;
pub mod error;
pub mod export;
pub mod hermite;
pub mod intpoly;
pub mod laplace_forms;
pub mod numlaplace;
pub mod oracle2d;
pub mod quadrature;
pub mod specfun;
pub mod time_kernel;
pub mod verify;

pub use clifford::{BladeIndex, Multivector, VectorM};
pub use error::{Error, Result};
pub use intpoly::{IntPoly, Phase, PhaseQuad};
