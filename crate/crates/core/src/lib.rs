//! Simulation and verification toolkit for max-semi-stable distributions.
//!
//! The crate is organised around four objects:
//!
//! - [`PeriodicFn`]: the positive bounded periodic perturbation `h`.
//! - [`SemiStableLaw`]: a max-semi-stable(a, b) distribution function
//!   `F(x) = exp{-ψ(x)}` of extended Fréchet or extended Weibull type.
//! - [`ExtremalProcess`]: an extremal process with stationary max-increments
//!   whose marginal at time `t` is `G^t`.
//! - [`MaxArModel`]: the max-autoregressive recursion `X_n = ρ X_{n-1} ∨ ε_n`
//!   with stationary max-semi-stable marginals.
//!
//! Every distributional identity is checked in two ways: exactly, in
//! log-space on the tail function `ψ`, and empirically through
//! Kolmogorov–Smirnov tests in [`stats`].

pub mod error;
pub mod law;
pub mod maxar;
pub mod periodic;
pub mod process;
mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use law::{check_max_semi_sd, CofactorCheck, IdentityReport, LawSpec, SemiStableLaw};
pub use maxar::{check_max_semi_sd_equivalence, InnovationLaw, MaxArModel};
pub use periodic::{Branch, Harmonic, PeriodicFn, ValidationReport};
pub use process::{EmpiricalCheck, ExtremalProcess, SemiSsReport, SsReport};
pub use stats::{EmpiricalCdf, KsReport, Level};
