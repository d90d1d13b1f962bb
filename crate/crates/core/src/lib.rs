//! Numerical laboratory for the semilinear wave equation with scale-invariant
//! damping and mass and a nonlinearity of derivative type,
//!
//! ```text
//! u_tt - Δu + μ/(1+t) u_t + ν²/(1+t)² u = |∂_t u|^p,   u(0) = ε u0,  u_t(0) = ε u1,
//! ```
//!
//! and for the weakly coupled system where the right-hand sides are swapped
//! (`|∂_t v|^p` for `u`, `|∂_t u|^q` for `v`).
//!
//! The crate is organised bottom-up:
//!
//! - [`params`]: discriminant δ, kernel parameter γ, shift σ, the Glassey,
//!   Fujita and Strauss exponents, the critical curve Λ and the cusp point.
//! - [`hypergeometric`]: Gauss `₂F₁(a,b;c;z)` on `0 <= z < 1`.
//! - [`kernels`]: the kernels `E`, `K0`, `K1` of the one-dimensional
//!   representation formula and their lower bounds.
//! - [`quadrature`]: adaptive Gauss–Kronrod integration.
//! - [`profile`], [`linear`]: Cauchy data, sources and the closed-form linear solver.
//! - [`fd`]: finite-difference solver with numerical lifespan detection.
//! - [`comparison`]: the reduced functional `U(z)` on the characteristic
//!   `t - z = R`, the fundamental integral inequality and its comparison ODE.
//! - [`iteration`]: lower-bound sequences for the coupled system.
//! - [`experiments`], [`verify`], [`cli`]: sweeps, scaling fits, property
//!   suites and the command-line front end.

pub mod cli;
pub mod comparison;
pub mod error;
pub mod experiments;
pub mod fd;
pub mod field;
pub mod hypergeometric;
pub mod iteration;
pub mod kernels;
pub mod linear;
pub mod params;
pub mod profile;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
pub use params::{ScaleInvariantParams, SystemParams};
