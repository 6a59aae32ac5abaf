//! Scalar information-theoretic primitives, all in nats.
//!
//! [`kl_bernoulli`] extends the Bernoulli relative entropy to the closed unit
//! square by continuity. Divergent values are returned as `f64::INFINITY`, so
//! that a bound constant `1 / (d * KL)` collapses to zero through ordinary
//! IEEE arithmetic.

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Flip probabilities of the p–q channel.
///
/// `p` is the probability that a truly negative test is displayed positive,
/// `q` the probability that a truly positive test is displayed negative.
/// Inputs with `p + q > 1` are normalised once, at construction, to
/// `(1 - p, 1 - q)`; [`ChannelParams::is_flipped`] records that displayed
/// outcomes must be inverted before decoding. `p + q = 1` carries no
/// information about the inputs and is rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    p: f64,
    q: f64,
    flipped: bool,
}

/// Distance from `p + q = 1` below which a channel is treated as useless.
const USELESS_TOL: f64 = 1e-12;

impl ChannelParams {
    pub const NOISELESS: ChannelParams = ChannelParams {
        p: 0.0,
        q: 0.0,
        flipped: false,
    };

    pub fn new(p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(domain(name, v, "[0, 1]"));
            }
        }
        let sum = p + q;
        if (sum - 1.0).abs() < USELESS_TOL {
            return Err(Error::InvalidChannel {
                p,
                q,
                reason: "p + q = 1: test outcomes are independent of the inputs",
            });
        }
        if sum > 1.0 {
            Ok(Self {
                p: 1.0 - p,
                q: 1.0 - q,
                flipped: true,
            })
        } else {
            Ok(Self { p, q, flipped: false })
        }
    }

    /// Normalised false-positive flip rate.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Normalised false-negative flip rate.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// True when the caller's `(p, q)` had `p + q > 1` and were normalised.
    pub fn is_flipped(&self) -> bool {
        self.flipped
    }

    /// The physical flip rates the channel was constructed from.
    pub fn raw(&self) -> (f64, f64) {
        if self.flipped {
            (1.0 - self.p, 1.0 - self.q)
        } else {
            (self.p, self.q)
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.p == 0.0 && self.q == 0.0
    }
}

/// Bernoulli relative entropy `KL(r ‖ s)` in nats.
///
/// Boundary cases follow by continuity with `0 log 0 = 0`; the result is
/// `+∞` when `s ∈ {0, 1}` and `r ≠ s`.
pub fn kl_bernoulli(r: f64, s: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&r) && (0.0..=1.0).contains(&s));
    if r == s {
        return 0.0;
    }
    if s == 0.0 || s == 1.0 {
        return f64::INFINITY;
    }
    let head = if r == 0.0 { 0.0 } else { r * (r / s).ln() };
    let tail = if r == 1.0 {
        0.0
    } else {
        (1.0 - r) * ((-r).ln_1p() - (-s).ln_1p())
    };
    (head + tail).max(0.0)
}

/// Binary entropy `h(r)` in nats.
pub fn binary_entropy(r: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&r));
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.ln() };
    term(r) + term(1.0 - r)
}

/// The finite-k correction `v(x, y) = y - x + (1 - x) log((1 - y) / (1 - x))`.
///
/// `k KL(xd/k ‖ yd/k)` tends to `d (KL(x ‖ y) + v(x, y))`; `v` is never
/// positive.
pub fn kl_correction_v(x: f64, y: f64) -> Result<f64> {
    open_unit("x", x)?;
    open_unit("y", y)?;
    Ok(y - x + (1.0 - x) * ((-y).ln_1p() - (-x).ln_1p()))
}

/// Exact `k KL(xd/k ‖ yd/k)`.
pub fn scaled_kl(k: u64, x: f64, y: f64, d: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    if d.is_nan() || d <= 0.0 {
        return Err(domain("d", d, "(0, inf)"));
    }
    let k = k as f64;
    let a = x * d / k;
    let b = y * d / k;
    open_unit("xd/k", a)?;
    open_unit("yd/k", b)?;
    Ok(k * kl_bernoulli(a, b))
}

/// The `k → ∞` limit `KL(x ‖ y) + v(x, y) = x log(x / y) - x + y`, extended
/// to `x, y ∈ [0, 1]` by continuity. Multiplied by `d` this replaces
/// `k KL(xd/k ‖ yd/k)` in the Bernoulli-design constants.
pub fn kl_limit_rate(x: f64, y: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y));
    if x == 0.0 {
        return y;
    }
    if y == 0.0 {
        return f64::INFINITY;
    }
    (x * (x / y).ln() - x + y).max(0.0)
}

fn open_unit(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(domain(name, v, "(0, 1)"))
    }
}

/// Shannon capacity of the p–q channel and its optimal signalling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityResult {
    pub capacity_nats: f64,
    /// `φ = (h(p) - h(q)) / (1 - p - q)`.
    pub phi: f64,
    /// Capacity-achieving `P(X = 0)`.
    pub gamma_star: f64,
    /// Density heuristic `d*_ch`, equating `e^{-d}` with `gamma_star`.
    pub d_heuristic: f64,
}

impl CapacityResult {
    pub fn capacity_bits(&self) -> f64 {
        self.capacity_nats / std::f64::consts::LN_2
    }
}

fn phi(ch: &ChannelParams) -> f64 {
    let (p, q) = (ch.p(), ch.q());
    (binary_entropy(p) - binary_entropy(q)) / (1.0 - p - q)
}

/// Both closed forms of the capacity: `KL(q ‖ 1/(1+e^φ))` and
/// `KL(p ‖ 1/(1+e^{-φ}))`. They agree analytically.
pub fn capacity_closed_forms(ch: &ChannelParams) -> (f64, f64) {
    let phi = phi(ch);
    let via_q = kl_bernoulli(ch.q(), logistic(-phi));
    let via_p = kl_bernoulli(ch.p(), logistic(phi));
    (via_q, via_p)
}

/// `I(X; Y) = h(T(γ)) - (γ h(p) + (1 - γ) h(q))` with `γ = P(X = 0)` and
/// `T(γ) = (1 - p) γ + q (1 - γ)`.
pub fn mutual_information(ch: &ChannelParams, gamma: f64) -> f64 {
    let (p, q) = (ch.p(), ch.q());
    let t = (1.0 - p) * gamma + q * (1.0 - gamma);
    binary_entropy(t) - (gamma * binary_entropy(p) + (1.0 - gamma) * binary_entropy(q))
}

pub fn channel_capacity(ch: &ChannelParams) -> Result<CapacityResult> {
    let (p, q) = (ch.p(), ch.q());
    if p + q >= 1.0 {
        return Err(Error::InvalidChannel {
            p,
            q,
            reason: "capacity requires p + q < 1",
        });
    }
    let phi = phi(ch);
    // optimal P(Y = 0)
    let t_star = logistic(-phi);
    let (capacity_nats, _) = capacity_closed_forms(ch);
    let gamma_star = (t_star - q) / (1.0 - p - q);
    let d_heuristic = (1.0 - p - q).ln() - (t_star - q).ln();
    Ok(CapacityResult {
        capacity_nats,
        phi,
        gamma_star,
        d_heuristic,
    })
}

/// `1 / (1 + e^{-x})`, written to avoid overflow for large `|x|`.
fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}
