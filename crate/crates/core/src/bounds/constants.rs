//! Rate constants of the COMP and DD achievability bounds.
//!
//! Every constant has the shape `numerator / (d * divergence)`. A vanishing
//! divergence gives `+∞` (the parameter point is infeasible) and a divergent
//! one gives `0`, both through IEEE division.
//!
//! Threshold parameters live on the closures of their admissible intervals.
//! The optimisers place the lower endpoint of `α` (when `q = 0`) and of `β`
//! at [`f64::MIN_POSITIVE`], which realises the one-sided limits `α, β → 0⁺`
//! that a threshold of `1/Δ` attains as `Δ → ∞`.

use serde::Serialize;

use super::search::bisect_increasing;
use crate::error::{domain, Error, Result};
use crate::kl_math::{kl_bernoulli, kl_limit_rate, scaled_kl, ChannelParams};

/// Slack allowed when checking that a parameter lies in its closed interval.
const ENDPOINT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompConstants {
    pub b1: f64,
    pub b2: f64,
}

impl CompConstants {
    pub fn max(&self) -> f64 {
        self.b1.max(self.b2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DdConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// Maximiser of the inner `z` problem defining `c4`.
    pub z_star: f64,
}

impl DdConstants {
    pub fn max(&self) -> f64 {
        self.c1.max(self.c2).max(self.c3).max(self.c4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BernoulliDdConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl BernoulliDdConstants {
    pub fn max(&self) -> f64 {
        self.c1.max(self.c2).max(self.c3).max(self.c4)
    }
}

/// How `k KL(xd/k ‖ yd/k)` is evaluated in the Bernoulli-design constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum KScaling {
    /// The `k → ∞` limit `d (KL(x ‖ y) + v(x, y))`.
    #[default]
    Asymptotic,
    /// Exact evaluation at the given `k`.
    Finite(u64),
}

/// Probability that a test is displayed negative:
/// `e^{-d}(1 - p) + (1 - e^{-d}) q`.
pub fn displayed_negative_rate(d: f64, ch: &ChannelParams) -> f64 {
    let e = (-d).exp();
    e * (1.0 - ch.p()) + (1.0 - e) * ch.q()
}

/// Closed interval of admissible `α` at density `d`.
pub fn alpha_interval(d: f64, ch: &ChannelParams) -> (f64, f64) {
    (ch.q(), displayed_negative_rate(d, ch))
}

/// Closed interval of admissible `β` for the constant-column DD bound.
pub fn beta_interval(d: f64, ch: &ChannelParams) -> (f64, f64) {
    (0.0, (-d).exp() * (1.0 - ch.q()))
}

/// Closed interval of admissible `β` for the Bernoulli DD bound.
pub fn bernoulli_beta_interval(d: f64, ch: &ChannelParams) -> (f64, f64) {
    let e = (-d).exp();
    (e * ch.p(), e * (1.0 - ch.q()))
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(domain("theta", theta, "(0, 1)"))
    }
}

fn check_d(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(domain("d", d, "(0, inf)"))
    }
}

fn check_in(name: &'static str, v: f64, (lo, hi): (f64, f64)) -> Result<()> {
    if v >= lo - ENDPOINT_SLACK && v <= hi + ENDPOINT_SLACK {
        Ok(())
    } else {
        Err(domain(name, v, format!("[{lo}, {hi}]")))
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// `b1`, `b2` of the constant-column COMP bound.
pub fn comp_constants(alpha: f64, d: f64, theta: f64, ch: &ChannelParams) -> Result<CompConstants> {
    check_theta(theta)?;
    check_d(d)?;
    check_in("alpha", alpha, alpha_interval(d, ch))?;
    Ok(comp_unchecked(alpha, d, theta, ch))
}

pub(crate) fn comp_unchecked(alpha: f64, d: f64, theta: f64, ch: &ChannelParams) -> CompConstants {
    let alpha = clamp_unit(alpha);
    let s2 = displayed_negative_rate(d, ch);
    CompConstants {
        b1: theta / (1.0 - theta) / (d * kl_bernoulli(alpha, ch.q())),
        b2: 1.0 / (1.0 - theta) / (d * kl_bernoulli(alpha, s2)),
    }
}

/// `c1`–`c4` of the constant-column DD bound, with the maximising `z`.
pub fn dd_constants(alpha: f64, beta: f64, d: f64, theta: f64, ch: &ChannelParams) -> Result<DdConstants> {
    check_theta(theta)?;
    check_d(d)?;
    check_in("alpha", alpha, alpha_interval(d, ch))?;
    check_in("beta", beta, beta_interval(d, ch))?;
    Ok(dd_unchecked(alpha, beta, d, theta, ch, Z_TOL))
}

pub(crate) const Z_TOL: f64 = 1e-13;

pub(crate) fn dd_unchecked(alpha: f64, beta: f64, d: f64, theta: f64, ch: &ChannelParams, z_tol: f64) -> DdConstants {
    let (alpha, beta) = (clamp_unit(alpha), clamp_unit(beta));
    let odds = theta / (1.0 - theta);
    let e = (-d).exp();
    let (g_min, z_star) = c4_exponent(alpha, beta, d, ch, z_tol);
    DdConstants {
        c1: odds / (d * kl_bernoulli(alpha, ch.q())),
        c2: 1.0 / (d * kl_bernoulli(alpha, displayed_negative_rate(d, ch))),
        c3: odds / (d * kl_bernoulli(beta, (1.0 - ch.q()) * e)),
        c4: 1.0 / (1.0 - theta) / (d * g_min),
        z_star,
    }
}

/// Exponent of the healthy-item DD error term at fraction `z`:
/// `KL(z ‖ w) + 1{β > z r} z KL(β/z ‖ r)` with
/// `w = e^{-d} p + (1 - e^{-d})(1 - q)` and `r = e^{-d} p / w`.
///
/// For `β/z > 1` the solo-positive count would exceed the number of positive
/// tests, an impossible event, so the exponent is `+∞`.
pub fn c4_exponent_at(z: f64, beta: f64, d: f64, ch: &ChannelParams) -> f64 {
    let (w, r) = solo_rates(d, ch);
    exponent(z, beta, w, r)
}

fn solo_rates(d: f64, ch: &ChannelParams) -> (f64, f64) {
    let e = (-d).exp();
    let w = e * ch.p() + (1.0 - e) * (1.0 - ch.q());
    (w, e * ch.p() / w)
}

fn exponent(z: f64, beta: f64, w: f64, r: f64) -> f64 {
    let base = kl_bernoulli(z, w);
    if beta > z * r {
        let ratio = beta / z;
        if ratio > 1.0 {
            return f64::INFINITY;
        }
        base + z * kl_bernoulli(ratio, r)
    } else {
        base
    }
}

/// Minimum over `z ∈ [1 - α, 1]` of the `c4` exponent, with its minimiser.
///
/// The exponent is convex in `z` (a KL term plus the perspective of a convex
/// function), so its minimiser is the root of the derivative, found by
/// bisection.
fn c4_exponent(alpha: f64, beta: f64, d: f64, ch: &ChannelParams, z_tol: f64) -> (f64, f64) {
    let (w, r) = solo_rates(d, ch);
    let lo = (1.0 - alpha).max(beta);
    if r == 0.0 && beta > 0.0 {
        // KL(β/z ‖ 0) diverges for every z
        return (f64::INFINITY, lo);
    }
    if lo >= 1.0 {
        return (exponent(1.0, beta, w, r), 1.0);
    }
    let slope = |z: f64| {
        let mut s = (z * (1.0 - w) / ((1.0 - z) * w)).ln();
        if beta > z * r {
            s += ((1.0 - beta / z) / (1.0 - r)).ln();
        }
        s
    };
    let z_star = if slope(lo) >= 0.0 {
        lo
    } else {
        bisect_increasing(lo, 1.0, z_tol, slope).min(1.0)
    };
    let g = exponent(z_star, beta, w, r);
    let g_lo = exponent(lo, beta, w, r);
    if g_lo < g {
        (g_lo, lo)
    } else {
        (g, z_star)
    }
}

/// Denominator `k KL(xd/k ‖ yd/k)` (or its limit) of the Bernoulli constants.
pub fn bernoulli_divergence(x: f64, y: f64, d: f64, scaling: KScaling) -> Result<f64> {
    match scaling {
        KScaling::Asymptotic => Ok(d * kl_limit_rate(clamp_unit(x), clamp_unit(y))),
        KScaling::Finite(k) => {
            let kf = k as f64;
            let (a, b) = (x * d / kf, y * d / kf);
            if a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0 {
                scaled_kl(k, x, y, d)
            } else if (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) {
                Ok(kf * kl_bernoulli(a, b))
            } else {
                Err(Error::Parameter(format!(
                    "k = {k} too small for d = {d}: xd/k = {a}, yd/k = {b}"
                )))
            }
        }
    }
}

/// `b1`, `b2` of the COMP bound under a Bernoulli design.
pub fn bernoulli_comp_constants(
    alpha: f64,
    d: f64,
    theta: f64,
    ch: &ChannelParams,
    scaling: KScaling,
) -> Result<CompConstants> {
    check_theta(theta)?;
    check_d(d)?;
    check_in("alpha", alpha, alpha_interval(d, ch))?;
    let s2 = displayed_negative_rate(d, ch);
    Ok(CompConstants {
        b1: theta / (1.0 - theta) / bernoulli_divergence(alpha, ch.q(), d, scaling)?,
        b2: 1.0 / (1.0 - theta) / bernoulli_divergence(alpha, s2, d, scaling)?,
    })
}

/// `c1`–`c4` of the DD bound under a Bernoulli design; `zeta ∈ (0, θ)` is the
/// exponent of the number of healthy items left unclassified by stage one.
pub fn bernoulli_dd_constants(
    alpha: f64,
    beta: f64,
    d: f64,
    theta: f64,
    zeta: f64,
    ch: &ChannelParams,
    scaling: KScaling,
) -> Result<BernoulliDdConstants> {
    check_theta(theta)?;
    check_d(d)?;
    if !(zeta > 0.0 && zeta < theta) {
        return Err(domain("zeta", zeta, format!("(0, {theta})")));
    }
    check_in("alpha", alpha, alpha_interval(d, ch))?;
    check_in("beta", beta, bernoulli_beta_interval(d, ch))?;
    let e = (-d).exp();
    let s2 = displayed_negative_rate(d, ch);
    let odds = theta / (1.0 - theta);
    Ok(BernoulliDdConstants {
        c1: odds / bernoulli_divergence(alpha, ch.q(), d, scaling)?,
        c2: (1.0 - zeta) / (1.0 - theta) / bernoulli_divergence(alpha, s2, d, scaling)?,
        c3: odds / bernoulli_divergence(beta, e * (1.0 - ch.q()), d, scaling)?,
        c4: zeta / (1.0 - theta) / bernoulli_divergence(beta, e * ch.p(), d, scaling)?,
    })
}
