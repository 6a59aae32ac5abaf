//! Seeded Monte-Carlo recovery experiments.
//!
//! A trial draws a design, an infection vector and channel noise from
//! independent streams keyed by `(seed, trial, label)`. The infection stream
//! does not depend on the instance size, so every multiplier and algorithm
//! sees the same infected sets; design and noise streams are keyed by
//! `(m, Δ)`, so cells with equal sizes share designs and noise as well.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::Algorithm;
use crate::decoders::{evaluate, noisy_comp, noisy_dd, Calibration, DecoderConfig, Instance, RecoveryReport};
use crate::design_sim::{
    apply_channel, bernoulli_design, constant_column_design, derive_seed, sample_infection, true_outcomes, DesignKind,
    InfectionVector, OutcomeVector, PoolingDesign,
};
use crate::error::{Error, Result};
use crate::kl_math::ChannelParams;

/// Everything one trial consumed and produced.
#[derive(Debug, Clone)]
pub struct Trial {
    pub design: PoolingDesign,
    pub sigma: InfectionVector,
    pub truth: OutcomeVector,
    pub displayed: OutcomeVector,
    pub report: RecoveryReport,
}

/// Decoder and instance shared by all trials of one cell.
#[derive(Debug, Clone, Copy)]
pub struct CellSpec {
    pub instance: Instance,
    pub design: DesignKind,
    pub algorithm: Algorithm,
    pub channel: ChannelParams,
    pub decoder: DecoderConfig,
    pub seed: u64,
}

impl CellSpec {
    pub fn new(
        cal: &Calibration,
        instance: Instance,
        design: DesignKind,
        algorithm: Algorithm,
        channel: ChannelParams,
        seed: u64,
    ) -> Result<Self> {
        if algorithm == Algorithm::Converse {
            return Err(Error::Parameter("cannot simulate the converse".into()));
        }
        // thresholds are clamped into [0, 1]; the optimiser's 0⁺ endpoint
        // becomes a threshold of one test
        let decoder = DecoderConfig::for_channel(cal.alpha.clamp(0.0, 1.0), cal.beta.clamp(0.0, 1.0), &channel)?;
        Ok(Self {
            instance,
            design,
            algorithm,
            channel,
            decoder,
            seed,
        })
    }

    fn size_label(&self, stream: &str) -> String {
        format!("{stream}/m={}/delta={}", self.instance.m, self.instance.delta)
    }

    pub fn run_trial(&self, trial: u64) -> Result<Trial> {
        let inst = &self.instance;
        let design_seed = derive_seed(self.seed, trial, &self.size_label("design"));
        let design = match self.design {
            DesignKind::ConstantColumn => constant_column_design(inst.n, inst.m, inst.delta, design_seed)?,
            DesignKind::Bernoulli => bernoulli_design(inst.n, inst.m, inst.nu, design_seed)?,
        };
        let sigma = sample_infection(inst.n, inst.k, derive_seed(self.seed, trial, "infection"))?;
        let truth = true_outcomes(&design, &sigma)?;
        let displayed = apply_channel(
            &truth,
            &self.channel,
            derive_seed(self.seed, trial, &self.size_label("channel")),
        )?;
        let estimate = match self.algorithm {
            Algorithm::Dd => noisy_dd(&design, &displayed, &self.decoder)?,
            _ => noisy_comp(&design, &displayed, &self.decoder)?,
        };
        let report = evaluate(&estimate, &sigma)?;
        Ok(Trial {
            design,
            sigma,
            truth,
            displayed,
            report,
        })
    }

    /// Run `trials` trials on the current rayon pool; the summary does not
    /// depend on scheduling.
    pub fn run(&self, trials: u64) -> Result<CellSummary> {
        if trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        let reports = (0..trials)
            .into_par_iter()
            .map(|t| self.run_trial(t).map(|tr| tr.report))
            .collect::<Result<Vec<_>>>()?;
        Ok(CellSummary::from_reports(&reports))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellSummary {
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub mean_false_pos: f64,
    pub mean_false_neg: f64,
    pub mean_unresolved: f64,
}

impl CellSummary {
    pub fn from_reports(reports: &[RecoveryReport]) -> Self {
        let t = reports.len() as f64;
        let mean = |f: fn(&RecoveryReport) -> usize| reports.iter().map(|r| f(r) as f64).sum::<f64>() / t;
        let successes = reports.iter().filter(|r| r.exact).count() as u64;
        Self {
            trials: reports.len() as u64,
            successes,
            success_rate: successes as f64 / t,
            mean_false_pos: mean(|r| r.false_positives),
            mean_false_neg: mean(|r| r.false_negatives),
            mean_unresolved: mean(|r| r.dd_stage1_unresolved),
        }
    }
}
