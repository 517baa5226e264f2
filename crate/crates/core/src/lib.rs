//! Schoenberg expansions for positive definite kernels on spheres.
//!
//! Kernels of the form `f(ξ·η, u⁻¹v)` on `𝕊^d × L` (real spheres) and
//! `Ω_{2q} × L` (complex spheres), with `L` a finite group, are expanded in
//! normalized Gegenbauer polynomials resp. disc polynomials. The crate
//! extracts and evaluates the coefficient functions, walks them across
//! dimensions, checks positivity of Gram matrices and studies the
//! infinite-dimensional limits in which both expansions turn into power
//! series.
//!
//! Module map:
//!
//! * [`specfun`]: Pochhammer, Beta, `σ_d`, harmonic dimensions and the
//!   orthogonal polynomial families.
//! * [`polynomial`]: exact rational monomial expansions of those families.
//! * [`symdiff`]: exact differentiation of `q(x)(1−x²)^s` and
//!   `p(z,z̄)(1−|z|²)^s`, including both Rodrigues checks.
//! * [`quadrature`]: Gauss–Jacobi rules and the probability measures
//!   `τ_λ` and `ν_α`.
//! * [`groups`]: finite groups and positive definiteness of `φ: L → ℂ`.
//! * [`pdcheck`]: sampled Gram-matrix positivity on `𝕊^d × L` and `Ω_{2q} × L`.
//! * [`sphere_real`] and [`sphere_complex`]: the expansion calculus proper.
//! * [`cli`]: configuration-driven jobs behind the `schoenberg` binary.

pub mod cli;
pub mod coefficients;
pub mod error;
pub mod groups;
pub mod pdcheck;
pub mod polynomial;
pub mod psd;
pub mod quadrature;
pub mod specfun;
pub mod sphere_complex;
pub mod sphere_real;
pub mod symdiff;

pub use coefficients::{CoefficientTable, GroupFunction};
pub use error::{Error, Result};
pub use groups::GroupSpec;
pub use num_complex::Complex64;
pub use specfun::{ComplexDim, RealDim};
pub use sphere_complex::ComplexKernelModel;
pub use sphere_real::RealKernelModel;
