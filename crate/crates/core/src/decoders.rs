//! Noisy COMP and noisy DD, threshold calibration and recovery accounting.

use serde::Serialize;

use crate::bounds::{self, Algorithm, BoundQuery, BoundResult, Design, Optimizer};
use crate::design_sim::{negative_counts, positive_solo_counts, InfectionVector, OutcomeVector, PoolingDesign};
use crate::error::{domain, Error, Result};
use crate::kl_math::ChannelParams;

/// Which degree a threshold fraction multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum DegreeMode {
    /// The design's nominal `Δ`.
    #[default]
    Nominal,
    /// Each item's own degree `|∂x|`; only differs under Bernoulli designs.
    PerItem,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecoderConfig {
    pub alpha: f64,
    /// Unused by COMP.
    pub beta: f64,
    /// Displayed outcomes come from a channel with `p + q > 1` and are
    /// inverted before decoding.
    pub flip_normalized: bool,
    pub degree_mode: DegreeMode,
}

impl DecoderConfig {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(domain(name, v, "[0, 1]"));
            }
        }
        Ok(Self {
            alpha,
            beta,
            flip_normalized: false,
            degree_mode: DegreeMode::Nominal,
        })
    }

    /// Thresholds matching the channel's normalisation.
    pub fn for_channel(alpha: f64, beta: f64, ch: &ChannelParams) -> Result<Self> {
        let mut c = Self::new(alpha, beta)?;
        c.flip_normalized = ch.is_flipped();
        Ok(c)
    }

    /// `α = β = 1/Δ`: the classic noiseless decoders.
    pub fn classic(delta: f64) -> Self {
        let t = (1.0 / delta).min(1.0);
        Self {
            alpha: t,
            beta: t,
            flip_normalized: false,
            degree_mode: DegreeMode::Nominal,
        }
    }
}

/// `max(1, ⌈frac · degree⌉)`; the small offset keeps products such as
/// `(1/7) · 7` from rounding up past an exact integer.
pub fn threshold(frac: f64, degree: f64) -> usize {
    ((frac * degree - 1e-9).ceil().max(1.0)) as usize
}

fn thresholds(design: &PoolingDesign, frac: f64, mode: DegreeMode) -> Vec<usize> {
    match mode {
        DegreeMode::Nominal => vec![threshold(frac, design.delta); design.n],
        DegreeMode::PerItem => (0..design.n)
            .map(|x| threshold(frac, design.degree(x) as f64))
            .collect(),
    }
}

fn normalized<'a>(displayed: &'a OutcomeVector, cfg: &DecoderConfig) -> std::borrow::Cow<'a, OutcomeVector> {
    if cfg.flip_normalized {
        std::borrow::Cow::Owned(displayed.inverted())
    } else {
        std::borrow::Cow::Borrowed(displayed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Estimate {
    pub infected: InfectionVector,
    /// Items not cleared by the negative-test stage.
    pub unresolved: Vec<usize>,
}

fn check_dims(design: &PoolingDesign, displayed: &OutcomeVector) -> Result<()> {
    if design.m != displayed.m() {
        return Err(Error::Parameter(format!(
            "design has m = {}, outcome vector m = {}",
            design.m,
            displayed.m()
        )));
    }
    Ok(())
}

/// Stage-one healthy set: `N[x] ≥ ⌈αΔ⌉`.
fn cleared(design: &PoolingDesign, displayed: &OutcomeVector, cfg: &DecoderConfig) -> Vec<bool> {
    let n_counts = negative_counts(design, displayed);
    let t = thresholds(design, cfg.alpha, cfg.degree_mode);
    n_counts.iter().zip(&t).map(|(n, t)| n >= t).collect()
}

/// Healthy iff in at least `⌈αΔ⌉` displayed-negative tests; infected otherwise.
pub fn noisy_comp(design: &PoolingDesign, displayed: &OutcomeVector, cfg: &DecoderConfig) -> Result<Estimate> {
    check_dims(design, displayed)?;
    let shown = normalized(displayed, cfg);
    let healthy = cleared(design, &shown, cfg);
    let mask: Vec<bool> = healthy.iter().map(|h| !h).collect();
    let infected = InfectionVector::from_mask(&mask);
    Ok(Estimate {
        unresolved: infected.infected.clone(),
        infected,
    })
}

/// Noisy DD. Stage one clears items as COMP does; stage two declares an
/// uncleared item infected if it is the only uncleared member of at least
/// `⌈βΔ⌉` displayed-positive tests; everything else is healthy.
///
/// The cleared set used for solo counting is the stage-one set: items
/// declared infected in stage two do not count as classified.
pub fn noisy_dd(design: &PoolingDesign, displayed: &OutcomeVector, cfg: &DecoderConfig) -> Result<Estimate> {
    check_dims(design, displayed)?;
    let shown = normalized(displayed, cfg);
    let healthy = cleared(design, &shown, cfg);
    let solo = positive_solo_counts(design, &shown, &healthy);
    let t = thresholds(design, cfg.beta, cfg.degree_mode);
    let mask: Vec<bool> = (0..design.n).map(|x| !healthy[x] && solo[x] >= t[x]).collect();
    Ok(Estimate {
        infected: InfectionVector::from_mask(&mask),
        unresolved: (0..design.n).filter(|&x| !healthy[x]).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    pub exact: bool,
    /// Healthy items declared infected.
    pub false_positives: usize,
    /// Infected items declared healthy.
    pub false_negatives: usize,
    /// Healthy items left unresolved by the first stage.
    pub dd_stage1_unresolved: usize,
}

pub fn evaluate(estimate: &Estimate, sigma: &InfectionVector) -> Result<RecoveryReport> {
    if estimate.infected.n != sigma.n {
        return Err(Error::Parameter(format!(
            "estimate has n = {}, truth n = {}",
            estimate.infected.n, sigma.n
        )));
    }
    let truth = sigma.mask();
    let false_positives = estimate.infected.infected.iter().filter(|&&x| !truth[x]).count();
    let hits = estimate.infected.k() - false_positives;
    let false_negatives = sigma.k() - hits;
    let dd_stage1_unresolved = estimate.unresolved.iter().filter(|&&x| !truth[x]).count();
    Ok(RecoveryReport {
        exact: false_positives == 0 && false_negatives == 0,
        false_positives,
        false_negatives,
        dd_stage1_unresolved,
    })
}

/// Optimal thresholds, density and prefactor from the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration {
    pub alpha: f64,
    pub beta: f64,
    pub d: f64,
    pub prefactor: f64,
    pub bound: BoundResult,
}

/// Integer sizes of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Instance {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    /// Column weight (constant column) or nominal degree.
    pub delta: usize,
    /// Inclusion probability of a Bernoulli design, `Δ/m`.
    pub nu: f64,
}

impl Calibration {
    /// Sizes for `n` items with `m = ⌈mult · c · k log(n/k)⌉` and
    /// `Δ = max(1, round(mult · c · d log(n/k)))`, where `k = round(n^θ)`.
    ///
    /// `k_assumed` overrides the `k` used for sizing while the instance
    /// still carries the true `k`.
    pub fn instantiate(&self, n: usize, theta: f64, multiplier: f64, k_assumed: Option<usize>) -> Result<Instance> {
        if !(multiplier > 0.0 && multiplier.is_finite()) {
            return Err(domain("multiplier", multiplier, "(0, inf)"));
        }
        let k = (n as f64).powf(theta).round() as usize;
        let k_design = k_assumed.unwrap_or(k);
        if k == 0 || k >= n || k_design == 0 || k_design >= n {
            return Err(Error::Parameter(format!(
                "n = {n}, theta = {theta} gives k = {k} (sizing k = {k_design}); need 1 <= k < n"
            )));
        }
        let log_ratio = (n as f64 / k_design as f64).ln();
        let c = multiplier * self.prefactor;
        let m = (c * k_design as f64 * log_ratio).ceil().max(1.0) as usize;
        let delta = ((c * self.d * log_ratio).round().max(1.0) as usize).min(m);
        Ok(Instance {
            n,
            k,
            m,
            delta,
            nu: delta as f64 / m as f64,
        })
    }
}

pub fn calibrate(theta: f64, ch: &ChannelParams, algorithm: Algorithm, design: Design) -> Result<Calibration> {
    calibrate_with(theta, ch, algorithm, design, &Optimizer::default())
}

pub fn calibrate_with(
    theta: f64,
    ch: &ChannelParams,
    algorithm: Algorithm,
    design: Design,
    opt: &Optimizer,
) -> Result<Calibration> {
    if algorithm == Algorithm::Converse {
        return Err(Error::Parameter("the converse has no decoder to calibrate".into()));
    }
    let bound = bounds::optimize_with(&BoundQuery::new(theta, *ch, design, algorithm)?, opt)?;
    Ok(Calibration {
        alpha: bound.alpha_star.unwrap_or(0.0),
        beta: bound.beta_star.unwrap_or(0.0),
        d: bound.d_star,
        prefactor: bound.prefactor_c,
        bound,
    })
}
