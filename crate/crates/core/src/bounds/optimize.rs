//! Numerical minimisation of the bound constants.
//!
//! Each inner problem is a minimax of monotone curves: for fixed `d`, every
//! constant is monotone in each threshold parameter, so the optimal
//! threshold sits at a crossing and is located by bisection. Only the outer
//! search over `d` is a genuine one-dimensional minimisation; it runs a
//! log-spaced scan followed by golden-section refinement of the best local
//! minima.

use rayon::prelude::*;

use super::constants::{
    alpha_interval, bernoulli_divergence, beta_interval, comp_unchecked, dd_unchecked, displayed_negative_rate,
    KScaling,
};
use super::search::{golden_section, minimax_crossing};
use super::{BoundResult, Constraint};
use crate::error::{Error, Result};
use crate::kl_math::{channel_capacity, ChannelParams};

/// Tuning of the outer `d` search and the inner bisections.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub d_min: f64,
    /// Beyond `d = 6` every bound denominator is numerically negligible.
    pub d_max: f64,
    /// Log-spaced scan points over `[d_min, d_max]`.
    pub d_points: usize,
    /// Relative bisection width during the scan.
    pub coarse_tol: f64,
    /// Relative bisection width during refinement.
    pub fine_tol: f64,
    /// Golden-section stopping width, relative to `d`.
    pub d_xtol: f64,
    /// Number of local minima of the scan refined.
    pub refine_starts: usize,
    pub zeta_min_frac: f64,
    pub zeta_max_frac: f64,
    pub parallel: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            d_min: 0.02,
            d_max: 6.0,
            d_points: 200,
            coarse_tol: 1e-5,
            fine_tol: 1e-11,
            d_xtol: 1e-8,
            refine_starts: 3,
            zeta_min_frac: 1e-2,
            zeta_max_frac: 1.0 - 1e-3,
            parallel: true,
        }
    }
}

/// Optimum of one inner problem at fixed `d`.
#[derive(Debug, Clone, Copy, Default)]
struct Inner {
    value: f64,
    alpha: Option<f64>,
    beta: Option<f64>,
    z: Option<f64>,
    zeta: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
enum Problem {
    Comp,
    Dd,
    BernoulliComp(KScaling),
    BernoulliDd(KScaling),
}

/// Stateless optimiser; cheap to construct.
#[derive(Debug, Clone, Default)]
pub struct Optimizer {
    pub config: OptimizerConfig,
}

impl Optimizer {
    pub fn new(config: OptimizerConfig) -> Self {
        Self { config }
    }

    pub fn comp(&self, theta: f64, ch: &ChannelParams) -> Result<BoundResult> {
        self.run(Problem::Comp, theta, ch)
    }

    pub fn dd(&self, theta: f64, ch: &ChannelParams) -> Result<BoundResult> {
        self.run(Problem::Dd, theta, ch)
    }

    pub fn bernoulli_comp(&self, theta: f64, ch: &ChannelParams, scaling: KScaling) -> Result<BoundResult> {
        self.run(Problem::BernoulliComp(scaling), theta, ch)
    }

    pub fn bernoulli_dd(&self, theta: f64, ch: &ChannelParams, scaling: KScaling) -> Result<BoundResult> {
        self.run(Problem::BernoulliDd(scaling), theta, ch)
    }

    fn run(&self, problem: Problem, theta: f64, ch: &ChannelParams) -> Result<BoundResult> {
        super::constants::check_theta(theta)?;
        let cfg = &self.config;
        if !(cfg.d_min > 0.0 && cfg.d_max > cfg.d_min && cfg.d_points >= 3) {
            return Err(Error::Parameter(format!(
                "bad d search range [{}, {}] with {} points",
                cfg.d_min, cfg.d_max, cfg.d_points
            )));
        }
        let ratio = (cfg.d_max / cfg.d_min).ln();
        let grid: Vec<f64> = (0..cfg.d_points)
            .map(|i| cfg.d_min * (ratio * i as f64 / (cfg.d_points - 1) as f64).exp())
            .collect();
        let coarse = |d: &f64| solve(problem, theta, ch, *d, cfg.coarse_tol, cfg).value;
        let values: Vec<f64> = if cfg.parallel {
            grid.par_iter().map(coarse).collect()
        } else {
            grid.iter().map(coarse).collect()
        };
        if values.iter().all(|v| !v.is_finite()) {
            return Err(Error::OptimizationFailed(format!(
                "objective infinite for every d in [{}, {}] (theta = {theta}, p = {}, q = {})",
                cfg.d_min,
                cfg.d_max,
                ch.p(),
                ch.q()
            )));
        }

        let mut starts = local_minima(&values);
        starts.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        starts.truncate(cfg.refine_starts.max(1));

        let refine = |&i: &usize| {
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(grid.len() - 1)];
            let xtol = cfg.d_xtol * grid[i];
            let (d, _) = golden_section(lo, hi, xtol, |d| solve(problem, theta, ch, d, cfg.fine_tol, cfg).value);
            // the scan point itself is a valid fallback if refinement overshoots
            let at_d = solve(problem, theta, ch, d, cfg.fine_tol, cfg);
            let at_grid = solve(problem, theta, ch, grid[i], cfg.fine_tol, cfg);
            if at_grid.value < at_d.value {
                (grid[i], at_grid)
            } else {
                (d, at_d)
            }
        };
        let refined: Vec<(f64, Inner)> = if cfg.parallel {
            starts.par_iter().map(refine).collect()
        } else {
            starts.iter().map(refine).collect()
        };
        let (d_star, best) = refined
            .into_iter()
            .reduce(|a, b| if b.1.value < a.1.value { b } else { a })
            .expect("at least one start");
        Ok(finish(problem, theta, ch, d_star, best))
    }
}

/// Indices of the scan that are no larger than their neighbours, with
/// plateaus represented by their first point.
fn local_minima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    (0..n)
        .filter(|&i| {
            let v = values[i];
            v.is_finite() && (i == 0 || v < values[i - 1]) && (i + 1 == n || v <= values[i + 1])
        })
        .collect()
}

/// Lower end of the `α` search: `q`, or the limit `0⁺` on a channel with `q = 0`.
fn alpha_floor(ch: &ChannelParams) -> f64 {
    if ch.q() == 0.0 {
        f64::MIN_POSITIVE
    } else {
        ch.q()
    }
}

fn solve(problem: Problem, theta: f64, ch: &ChannelParams, d: f64, tol: f64, cfg: &OptimizerConfig) -> Inner {
    match problem {
        Problem::Comp => solve_comp(theta, ch, d, tol),
        Problem::Dd => solve_dd(theta, ch, d, tol),
        Problem::BernoulliComp(s) => solve_bernoulli_comp(theta, ch, d, tol, s),
        Problem::BernoulliDd(s) => solve_bernoulli_dd(theta, ch, d, tol, s, cfg),
    }
}

fn solve_comp(theta: f64, ch: &ChannelParams, d: f64, tol: f64) -> Inner {
    let (_, hi) = alpha_interval(d, ch);
    let c = minimax_crossing(alpha_floor(ch), hi, tol, |a| {
        let b = comp_unchecked(a, d, theta, ch);
        (b.b1, b.b2)
    });
    Inner {
        value: c.value,
        alpha: Some(c.x),
        ..Inner::default()
    }
}

fn z_tol(tol: f64) -> f64 {
    (tol * 1e-2).max(1e-14)
}

/// `min_β max(c3, c4)` at fixed `α`: `c4` falls and `c3` rises with `β`.
fn dd_beta(alpha: f64, theta: f64, ch: &ChannelParams, d: f64, tol: f64) -> (f64, f64) {
    let (_, hi) = beta_interval(d, ch);
    let c = minimax_crossing(f64::MIN_POSITIVE, hi, tol, |b| {
        let c = dd_unchecked(alpha, b, d, theta, ch, z_tol(tol));
        (c.c4, c.c3)
    });
    (c.x, c.value)
}

/// `c1` falls with `α` while `c2` and the `β`-optimised `max(c3, c4)` rise.
fn solve_dd(theta: f64, ch: &ChannelParams, d: f64, tol: f64) -> Inner {
    let (_, hi) = alpha_interval(d, ch);
    let c = minimax_crossing(alpha_floor(ch), hi, tol, |a| {
        let cs = dd_unchecked(a, 0.0, d, theta, ch, z_tol(tol));
        let (_, g) = dd_beta(a, theta, ch, d, tol);
        (cs.c1, cs.c2.max(g))
    });
    let (beta, _) = dd_beta(c.x, theta, ch, d, tol);
    let cs = dd_unchecked(c.x, beta, d, theta, ch, z_tol(tol));
    Inner {
        value: cs.max(),
        alpha: Some(c.x),
        beta: Some(beta),
        z: Some(cs.z_star),
        zeta: None,
    }
}

fn recip_div(num: f64, x: f64, y: f64, d: f64, s: KScaling) -> f64 {
    // an invalid finite-k evaluation makes the point infeasible
    num / bernoulli_divergence(x, y, d, s).unwrap_or(0.0)
}

fn solve_bernoulli_comp(theta: f64, ch: &ChannelParams, d: f64, tol: f64, s: KScaling) -> Inner {
    let (_, hi) = alpha_interval(d, ch);
    let s2 = displayed_negative_rate(d, ch);
    let c = minimax_crossing(alpha_floor(ch), hi, tol, |a| {
        (
            recip_div(theta / (1.0 - theta), a, ch.q(), d, s),
            recip_div(1.0 / (1.0 - theta), a, s2, d, s),
        )
    });
    Inner {
        value: c.value,
        alpha: Some(c.x),
        ..Inner::default()
    }
}

/// The Bernoulli DD constants separate: `(c1, c2)` depend on `(α, ζ)` and
/// `(c3, c4)` on `(β, ζ)`. Increasing `ζ` lowers `c2` and raises `c4`, so the
/// optimal `ζ` is again a crossing.
fn solve_bernoulli_dd(theta: f64, ch: &ChannelParams, d: f64, tol: f64, s: KScaling, cfg: &OptimizerConfig) -> Inner {
    let e = (-d).exp();
    let s2 = displayed_negative_rate(d, ch);
    let odds = theta / (1.0 - theta);
    let (_, a_hi) = alpha_interval(d, ch);
    let b_lo = if ch.p() == 0.0 { f64::MIN_POSITIVE } else { e * ch.p() };
    let b_hi = e * (1.0 - ch.q());

    let alpha_part = |zeta: f64| {
        minimax_crossing(alpha_floor(ch), a_hi, tol, |a| {
            (
                recip_div(odds, a, ch.q(), d, s),
                recip_div((1.0 - zeta) / (1.0 - theta), a, s2, d, s),
            )
        })
    };
    let beta_part = |zeta: f64| {
        if b_lo >= b_hi {
            return super::search::Crossing {
                x: b_lo,
                value: f64::INFINITY,
            };
        }
        minimax_crossing(b_lo, b_hi, tol, |b| {
            (
                recip_div(zeta / (1.0 - theta), b, e * ch.p(), d, s),
                recip_div(odds, b, e * (1.0 - ch.q()), d, s),
            )
        })
    };
    let zc = minimax_crossing(theta * cfg.zeta_min_frac, theta * cfg.zeta_max_frac, tol, |z| {
        (alpha_part(z).value, beta_part(z).value)
    });
    let a = alpha_part(zc.x);
    let b = beta_part(zc.x);
    Inner {
        value: a.value.max(b.value),
        alpha: Some(a.x),
        beta: Some(b.x),
        z: None,
        zeta: Some(zc.x),
    }
}

/// Assemble the result and identify the binding constraint at the optimum.
fn finish(problem: Problem, theta: f64, ch: &ChannelParams, d: f64, inner: Inner) -> BoundResult {
    let alpha = inner.alpha.unwrap_or(0.0);
    let beta = inner.beta.unwrap_or(0.0);
    let labelled: Vec<(Constraint, f64)> = match problem {
        Problem::Comp => {
            let b = comp_unchecked(alpha, d, theta, ch);
            vec![(Constraint::B1, b.b1), (Constraint::B2, b.b2)]
        }
        Problem::Dd => {
            let c = dd_unchecked(alpha, beta, d, theta, ch, super::constants::Z_TOL);
            vec![
                (Constraint::C1, c.c1),
                (Constraint::C2, c.c2),
                (Constraint::C3, c.c3),
                (Constraint::C4, c.c4),
            ]
        }
        Problem::BernoulliComp(s) => {
            let s2 = displayed_negative_rate(d, ch);
            vec![
                (Constraint::B1, recip_div(theta / (1.0 - theta), alpha, ch.q(), d, s)),
                (Constraint::B2, recip_div(1.0 / (1.0 - theta), alpha, s2, d, s)),
            ]
        }
        Problem::BernoulliDd(s) => {
            let zeta = inner.zeta.unwrap_or(0.0);
            let e = (-d).exp();
            let odds = theta / (1.0 - theta);
            vec![
                (Constraint::C1, recip_div(odds, alpha, ch.q(), d, s)),
                (
                    Constraint::C2,
                    recip_div(
                        (1.0 - zeta) / (1.0 - theta),
                        alpha,
                        displayed_negative_rate(d, ch),
                        d,
                        s,
                    ),
                ),
                (Constraint::C3, recip_div(odds, beta, e * (1.0 - ch.q()), d, s)),
                (Constraint::C4, recip_div(zeta / (1.0 - theta), beta, e * ch.p(), d, s)),
            ]
        }
    };
    let top = labelled.iter().map(|l| l.1).fold(0.0f64, f64::max);
    let binding = labelled
        .iter()
        .find(|l| l.1 >= top * (1.0 - 1e-6))
        .map(|l| l.0)
        .unwrap_or(labelled[0].0);
    BoundResult::new(inner.value, inner.alpha, inner.beta, d, inner.z, inner.zeta, binding)
}

/// The capacity converse `1 / C` (nats); `d_star` is the density at which a
/// constant-column design makes a test positive with the capacity-achieving
/// probability.
pub fn converse_constant(ch: &ChannelParams) -> Result<BoundResult> {
    let cap = channel_capacity(ch)?;
    Ok(BoundResult::new(
        1.0 / cap.capacity_nats,
        None,
        None,
        cap.d_heuristic,
        None,
        None,
        Constraint::Converse,
    ))
}
