//! Achievability and converse bounds on the number of tests.
//!
//! Every bound is reported as a prefactor `c` in `m = c · k log(n/k)` for
//! `k ~ n^θ`. The achievability constants of noisy COMP and noisy DD are
//! evaluated in [`constants`] and minimised over their free parameters by
//! [`Optimizer`]; the capacity converse is [`converse_constant`].

pub mod constants;
mod optimize;
pub(crate) mod search;

use std::f64::consts::LN_2;
use std::fmt;

use serde::Serialize;

pub use constants::{bernoulli_comp_constants, bernoulli_dd_constants, comp_constants, dd_constants, KScaling};
pub use optimize::{converse_constant, Optimizer, OptimizerConfig};

use crate::error::Result;
use crate::kl_math::ChannelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Design {
    #[serde(rename = "cc")]
    ConstantColumn,
    Bernoulli,
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Design::ConstantColumn => "cc",
            Design::Bernoulli => "bernoulli",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Comp,
    Dd,
    Converse,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Comp => "comp",
            Algorithm::Dd => "dd",
            Algorithm::Converse => "converse",
        })
    }
}

/// The constant that is largest at the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    B1,
    B2,
    C1,
    C2,
    C3,
    C4,
    Converse,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::B1 => "b1",
            Constraint::B2 => "b2",
            Constraint::C1 => "c1",
            Constraint::C2 => "c2",
            Constraint::C3 => "c3",
            Constraint::C4 => "c4",
            Constraint::Converse => "converse",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundQuery {
    pub theta: f64,
    pub channel: ChannelParams,
    pub design: Design,
    pub algorithm: Algorithm,
    /// Only consulted for Bernoulli designs.
    pub k_scaling: KScaling,
}

impl BoundQuery {
    pub fn new(theta: f64, channel: ChannelParams, design: Design, algorithm: Algorithm) -> Result<Self> {
        constants::check_theta(theta)?;
        Ok(Self {
            theta,
            channel,
            design,
            algorithm,
            k_scaling: KScaling::Asymptotic,
        })
    }

    pub fn with_k_scaling(mut self, k_scaling: KScaling) -> Self {
        self.k_scaling = k_scaling;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        constants::check_theta(theta)?;
        self.theta = theta;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    pub prefactor_c: f64,
    pub alpha_star: Option<f64>,
    pub beta_star: Option<f64>,
    pub d_star: f64,
    pub z_star: Option<f64>,
    pub zeta_star: Option<f64>,
    pub binding_constraint: Constraint,
    pub rate_bits: f64,
}

impl BoundResult {
    pub(crate) fn new(
        prefactor_c: f64,
        alpha_star: Option<f64>,
        beta_star: Option<f64>,
        d_star: f64,
        z_star: Option<f64>,
        zeta_star: Option<f64>,
        binding_constraint: Constraint,
    ) -> Self {
        Self {
            prefactor_c,
            alpha_star,
            beta_star,
            d_star,
            z_star,
            zeta_star,
            binding_constraint,
            rate_bits: 1.0 / (prefactor_c * LN_2),
        }
    }
}

/// Optimise one query with the default [`OptimizerConfig`].
pub fn optimize(query: &BoundQuery) -> Result<BoundResult> {
    optimize_with(query, &Optimizer::default())
}

pub fn optimize_with(query: &BoundQuery, opt: &Optimizer) -> Result<BoundResult> {
    let (theta, ch) = (query.theta, &query.channel);
    match (query.algorithm, query.design) {
        (Algorithm::Converse, _) => converse_constant(ch),
        (Algorithm::Comp, Design::ConstantColumn) => opt.comp(theta, ch),
        (Algorithm::Dd, Design::ConstantColumn) => opt.dd(theta, ch),
        (Algorithm::Comp, Design::Bernoulli) => opt.bernoulli_comp(theta, ch, query.k_scaling),
        (Algorithm::Dd, Design::Bernoulli) => opt.bernoulli_dd(theta, ch, query.k_scaling),
    }
}

/// One row per `θ`; a failing point is kept as an `Err` in place.
pub fn rate_sweep(template: &BoundQuery, thetas: &[f64], opt: &Optimizer) -> Vec<(f64, Result<BoundResult>)> {
    thetas
        .iter()
        .map(|&t| (t, template.with_theta(t).and_then(|q| optimize_with(&q, opt))))
        .collect()
}
