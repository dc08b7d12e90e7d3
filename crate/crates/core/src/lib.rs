//! Numerical toolkit for the fully fractional heat operator (∂_t − Δ)^α on
//! ℝⁿ × ℝ: closed-form kernel and potential evaluation, singular-endpoint
//! quadrature, phase-plane classification of the nonlinear inequality
//! problems, explicit super- and self-similar solutions, and grid-based
//! inequality certificates with machine-readable reports.
//!
//! Modules mirror the layering of the computation:
//!
//! * [`specfun`] — Γ, ln Γ, B(a, b), P(a, x) on the positive axis
//! * [`quadrature`] — Gauss–Legendre/Jacobi/Hermite rules and an adaptive
//!   tanh-sinh integrator
//! * [`kernel`] — the kernel Φ_α, its Fourier symbol, Gaussian convolution
//!   identities
//! * [`regions`] — the (λ, α) phase plane, critical exponents, existence
//!   verdicts
//! * [`potential`] — J_α evaluators for the structured source classes plus a
//!   brute-force oracle
//! * [`solutions`] — explicit solutions, envelopes, and their constants
//! * [`verify`] — inequality and identity certificates over grids
//! * [`report`] — JSON/CSV serialization of certificates
//!
//! Everything is pure computation over value types; functions may be called
//! concurrently without restriction, and shared quadrature tables are
//! immutable after construction.

pub mod error;
pub mod kernel;
pub mod potential;
pub mod quadrature;
pub mod regions;
pub mod report;
pub mod solutions;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
