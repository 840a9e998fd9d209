//! Engineering of linearly and nonlinearly squeezed oscillator states with a
//! single Kerr gate plus Gaussian processing, simulated in a truncated Fock
//! space.
//!
//! The crate is organized around five pieces:
//!
//! - [`fock`]: the truncated space, quadratures, Gaussian and Kerr gates;
//! - [`metrics`]: linear squeezing, nonlinear variances, Gaussian baselines,
//!   and the squeezing ratio `xi_n`;
//! - [`prep`]: the three state-preparation pipelines;
//! - [`optimize`]: bounded quasi-Newton minimization of the squeezing
//!   objectives over gate parameters, with multi-start and warm-start sweeps;
//! - [`robustness`]: Monte Carlo analysis of Gaussian parameter fluctuations
//!   around the optimized gate parameters.
//!
//! Everything is deterministic for a fixed seed: random starts and Monte
//! Carlo draws derive from counter-based substreams, and all reductions run
//! in index order.

pub mod error;
pub mod fock;
pub mod metrics;
pub mod optimize;
pub mod prep;
pub mod robustness;
pub mod seeding;

pub use error::{Error, Result};
