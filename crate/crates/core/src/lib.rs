//! Solver and benchmark harness for the forward-Euler finite-difference
//! approximation of the stochastic heat equation
//!
//! ∂ₜu = Δu + b(u) + ξ
//!
//! on the 1-D torus 𝕋 = ℝ/ℤ, driven by space-time white noise ξ, with a
//! bounded measurable reaction term b.
//!
//! The crate provides:
//!
//! - periodic grid arithmetic with the CFL coupling h = c(2n)⁻² ([`grid`]),
//! - the discrete eigenstructure, heat kernels and semigroups ([`spectral`]),
//! - reproducible space-time white noise on nested dyadic grids ([`noise`]),
//! - discrete/continuum Ornstein-Uhlenbeck processes and their exact
//!   variance curves ([`ou`]),
//! - the explicit scheme itself ([`scheme`]),
//! - coupled Monte Carlo strong-rate experiments ([`lab`]),
//! - deterministic numerical checks of the kernel estimates ([`verifier`]).

pub mod error;
pub mod field;
pub mod grid;
pub mod lab;
pub mod noise;
pub mod ou;
pub mod quad;
pub mod rng;
pub mod scheme;
pub mod spectral;
pub mod stats;
pub mod verifier;

pub use error::{Error, Result};
pub use field::FieldState;
pub use grid::{GridConfig, LevelPair};
