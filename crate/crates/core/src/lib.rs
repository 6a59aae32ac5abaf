//! Noisy non-adaptive group testing under the p–q channel.
//!
//! A truly negative test is displayed positive with probability `p`, a truly
//! positive test is displayed negative with probability `q`. This crate
//! provides:
//!
//! - [`kl_math`]: binary entropy, Bernoulli KL divergence, the finite-k KL
//!   correction and the capacity of the p–q channel.
//! - [`bounds`]: the COMP/DD achievability constants for constant-column and
//!   Bernoulli designs, their numerical optimisation, and the capacity
//!   converse. All prefactors are coefficients of `k log(n/k)`.
//! - [`design_sim`]: constant-column and Bernoulli pooling designs, infection
//!   vectors, channel simulation and per-item/per-test statistics.
//! - [`decoders`]: noisy COMP and noisy DD, threshold calibration from the
//!   bounds, and recovery accounting.
//! - [`cli`]: the `noisygt` command surface (`bounds`, `capacity`,
//!   `simulate`, `sweep`, `compare`).
//!
//! Logarithms are natural throughout; rates in bits are derived as
//! `1 / (c log 2)`.

pub mod bounds;
pub mod cli;
pub mod decoders;
pub mod design_sim;
mod error;
pub mod kl_math;

pub use error::{Error, Result};
pub use kl_math::ChannelParams;
