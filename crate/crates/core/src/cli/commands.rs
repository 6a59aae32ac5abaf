use std::f64::consts::LN_2;
use std::fs::File;
use std::io::BufWriter;
use std::time::Instant;

use serde::Serialize;

use super::args::{Alg, BoundsArgs, ChannelArgs, CompareArgs, DesignArg, SimArgs};
use super::config::ConfigFile;
use super::experiment::CellSpec;
use super::output::{join, Meta};
use super::Context;
use crate::bounds::{self, Algorithm, BoundQuery, BoundResult, Design, KScaling};
use crate::decoders::{calibrate_with, Calibration};
use crate::design_sim::{write_dump, DesignKind};
use crate::error::{Error, Result};
use crate::kl_math::{channel_capacity, ChannelParams};

pub const SEED_ENV: &str = "NOISYGT_SEED";

const DEFAULT_THETAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

impl From<Alg> for Algorithm {
    fn from(a: Alg) -> Self {
        match a {
            Alg::Comp => Algorithm::Comp,
            Alg::Dd => Algorithm::Dd,
        }
    }
}

impl From<DesignArg> for Design {
    fn from(d: DesignArg) -> Self {
        match d {
            DesignArg::Cc => Design::ConstantColumn,
            DesignArg::Bernoulli => Design::Bernoulli,
        }
    }
}

fn design_kind(d: Design) -> DesignKind {
    match d {
        Design::ConstantColumn => DesignKind::ConstantColumn,
        Design::Bernoulli => DesignKind::Bernoulli,
    }
}

fn status<T>(r: &Result<T>) -> String {
    match r {
        Ok(_) => "ok".into(),
        Err(e) => format!("error: {e}"),
    }
}

/// The best known noiseless prefactor, `max{θ/((1-θ) log² 2), 1/log 2}`.
pub fn noiseless_optimal_prefactor(theta: f64) -> f64 {
    (theta / ((1.0 - theta) * LN_2 * LN_2)).max(1.0 / LN_2)
}

fn channel(cfg: &ConfigFile, args: &ChannelArgs) -> Result<ChannelParams> {
    let p = cfg.value(args.p, "p")?.unwrap_or(0.0);
    let q = cfg.value(args.q, "q")?.unwrap_or(0.0);
    ChannelParams::new(p, q)
}

fn thetas(cfg: &ConfigFile, flag: Vec<f64>) -> Result<Vec<f64>> {
    let t = cfg.list(flag, "theta")?;
    Ok(if t.is_empty() { DEFAULT_THETAS.to_vec() } else { t })
}

fn nonempty<T>(xs: Vec<T>, what: &str) -> Result<Vec<T>> {
    if xs.is_empty() {
        Err(Error::Parameter(format!("empty {what} list")))
    } else {
        Ok(xs)
    }
}

#[derive(Debug, Serialize)]
struct BoundRow {
    theta: f64,
    p: f64,
    q: f64,
    design: String,
    algorithm: String,
    status: String,
    prefactor: Option<f64>,
    rate_bits: Option<f64>,
    alpha_star: Option<f64>,
    beta_star: Option<f64>,
    d_star: Option<f64>,
    z_star: Option<f64>,
    zeta_star: Option<f64>,
    binding: Option<String>,
}

impl BoundRow {
    fn reference(theta: f64) -> Self {
        let valid = theta > 0.0 && theta < 1.0;
        let c = valid.then(|| noiseless_optimal_prefactor(theta));
        Self {
            theta,
            p: 0.0,
            q: 0.0,
            design: "any".into(),
            algorithm: "noiseless-optimal".into(),
            status: if valid {
                "ok".into()
            } else {
                format!("error: theta = {theta} outside (0, 1)")
            },
            prefactor: c,
            rate_bits: c.map(|c| 1.0 / (c * LN_2)),
            alpha_star: None,
            beta_star: None,
            d_star: None,
            z_star: None,
            zeta_star: None,
            binding: None,
        }
    }

    fn new(theta: f64, ch: &ChannelParams, design: &str, algorithm: &str, r: &Result<BoundResult>) -> Self {
        let (p, q) = ch.raw();
        let ok = r.as_ref().ok();
        Self {
            theta,
            p,
            q,
            design: design.into(),
            algorithm: algorithm.into(),
            status: status(r),
            prefactor: ok.map(|b| b.prefactor_c),
            rate_bits: ok.map(|b| b.rate_bits),
            alpha_star: ok.and_then(|b| b.alpha_star),
            beta_star: ok.and_then(|b| b.beta_star),
            d_star: ok.map(|b| b.d_star),
            z_star: ok.and_then(|b| b.z_star),
            zeta_star: ok.and_then(|b| b.zeta_star),
            binding: ok.map(|b| b.binding_constraint.to_string()),
        }
    }
}

pub(super) fn cmd_bounds(ctx: &Context, args: BoundsArgs) -> Result<bool> {
    let cfg = &ctx.config;
    let ch = channel(cfg, &args.channel)?;
    let thetas = thetas(cfg, args.theta)?;
    let algs = cfg.choices(args.alg, "alg")?;
    let algs = if algs.is_empty() && cfg.raw("alg").is_none() {
        vec![Alg::Comp, Alg::Dd]
    } else {
        nonempty(algs, "algorithm")?
    };
    let design: Design = cfg.choice(args.design, "design")?.unwrap_or(DesignArg::Cc).into();
    let k = cfg.value(args.k, "k")?;
    let scaling = k.map_or(KScaling::Asymptotic, KScaling::Finite);

    let mut meta = Meta::new("bounds");
    meta.set("theta", join(&thetas))
        .set("p", ch.raw().0)
        .set("q", ch.raw().1)
        .set(
            "alg",
            join(&algs.iter().map(|&a| Algorithm::from(a)).collect::<Vec<_>>()),
        )
        .set("design", design)
        .set("d-max", ctx.optimizer.config.d_max);
    if let Some(k) = k {
        meta.set("k", k);
    }
    let mut sink = ctx.sink(&meta)?;

    let mut all_ok = true;
    for &theta in &thetas {
        for &alg in &algs {
            let r = BoundQuery::new(theta, ch, design, alg.into())
                .map(|q| q.with_k_scaling(scaling))
                .and_then(|q| bounds::optimize_with(&q, &ctx.optimizer));
            all_ok &= r.is_ok();
            sink.row(&BoundRow::new(
                theta,
                &ch,
                &design.to_string(),
                &Algorithm::from(alg).to_string(),
                &r,
            ))?;
        }
        let conv = bounds::converse_constant(&ch);
        all_ok &= conv.is_ok();
        sink.row(&BoundRow::new(theta, &ch, "any", "converse", &conv))?;
        sink.row(&BoundRow::reference(theta))?;
    }
    Ok(all_ok)
}

#[derive(Debug, Serialize)]
struct CapacityRow {
    p: f64,
    q: f64,
    p_normalized: f64,
    q_normalized: f64,
    flipped: bool,
    capacity_nats: f64,
    capacity_bits: f64,
    gamma_star: f64,
    phi: f64,
    d_star_ch: f64,
    converse_prefactor: f64,
}

pub(super) fn cmd_capacity(ctx: &Context, args: ChannelArgs) -> Result<bool> {
    let ch = channel(&ctx.config, &args)?;
    let (p, q) = ch.raw();
    if ch.is_flipped() {
        eprintln!(
            "note: p + q > 1; normalised to p = {}, q = {} with displayed outcomes inverted",
            ch.p(),
            ch.q()
        );
    }
    let cap = channel_capacity(&ch)?;
    let mut meta = Meta::new("capacity");
    meta.set("p", p).set("q", q);
    let mut sink = ctx.sink(&meta)?;
    sink.row(&CapacityRow {
        p,
        q,
        p_normalized: ch.p(),
        q_normalized: ch.q(),
        flipped: ch.is_flipped(),
        capacity_nats: cap.capacity_nats,
        capacity_bits: cap.capacity_bits(),
        gamma_star: cap.gamma_star,
        phi: cap.phi,
        d_star_ch: cap.d_heuristic,
        converse_prefactor: 1.0 / cap.capacity_nats,
    })?;
    Ok(true)
}

#[derive(Debug, Serialize)]
struct CompareRow {
    theta: f64,
    p: f64,
    q: f64,
    status: String,
    comp_cc: Option<f64>,
    comp_bernoulli: Option<f64>,
    dd_cc: Option<f64>,
    dd_bernoulli: Option<f64>,
    converse: Option<f64>,
}

pub(super) fn cmd_compare(ctx: &Context, args: CompareArgs) -> Result<bool> {
    let cfg = &ctx.config;
    let ch = channel(cfg, &args.channel)?;
    let thetas = thetas(cfg, args.theta)?;
    let mut meta = Meta::new("compare");
    meta.set("theta", join(&thetas))
        .set("p", ch.raw().0)
        .set("q", ch.raw().1)
        .set("d-max", ctx.optimizer.config.d_max);
    let mut sink = ctx.sink(&meta)?;
    let conv = bounds::converse_constant(&ch)?.prefactor_c;
    let (p, q) = ch.raw();
    let mut all_ok = true;
    for &theta in &thetas {
        let opt = &ctx.optimizer;
        let cols = (|| -> Result<[f64; 4]> {
            Ok([
                opt.comp(theta, &ch)?.prefactor_c,
                opt.bernoulli_comp(theta, &ch, KScaling::Asymptotic)?.prefactor_c,
                opt.dd(theta, &ch)?.prefactor_c,
                opt.bernoulli_dd(theta, &ch, KScaling::Asymptotic)?.prefactor_c,
            ])
        })();
        all_ok &= cols.is_ok();
        let c = cols.as_ref().ok();
        sink.row(&CompareRow {
            theta,
            p,
            q,
            status: status(&cols),
            comp_cc: c.map(|c| c[0]),
            comp_bernoulli: c.map(|c| c[1]),
            dd_cc: c.map(|c| c[2]),
            dd_bernoulli: c.map(|c| c[3]),
            converse: Some(conv),
        })?;
    }
    Ok(all_ok)
}

#[derive(Debug, Serialize)]
struct SimRow {
    n: usize,
    theta: f64,
    p: f64,
    q: f64,
    design: String,
    algorithm: String,
    multiplier: f64,
    trials: u64,
    seed: u64,
    status: String,
    k: Option<usize>,
    m: Option<usize>,
    delta: Option<usize>,
    prefactor: Option<f64>,
    rate_bits: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    d: Option<f64>,
    success_rate: Option<f64>,
    mean_false_pos: Option<f64>,
    mean_false_neg: Option<f64>,
    mean_unresolved: Option<f64>,
}

/// Resolved settings of a `simulate` / `sweep` run.
#[derive(Debug, Clone)]
struct SimSettings {
    n: usize,
    thetas: Vec<f64>,
    ps: Vec<f64>,
    qs: Vec<f64>,
    design: Design,
    algs: Vec<Alg>,
    mults: Vec<f64>,
    trials: u64,
    seed: u64,
    k_assumed: Option<usize>,
    dump: Option<std::path::PathBuf>,
}

fn sim_settings(cfg: &ConfigFile, args: SimArgs, sweep: bool) -> Result<SimSettings> {
    let thetas = cfg.list(args.theta, "theta")?;
    let thetas = if thetas.is_empty() { vec![0.5] } else { thetas };
    let ps = cfg.list(args.p, "p")?;
    let qs = cfg.list(args.q, "q")?;
    let ps = if ps.is_empty() { vec![0.0] } else { ps };
    let qs = if qs.is_empty() { vec![0.0] } else { qs };
    if !sweep && (thetas.len() > 1 || ps.len() > 1 || qs.len() > 1) {
        return Err(Error::Parameter(
            "simulate takes a single theta, p and q; use sweep for lists".into(),
        ));
    }
    let algs = cfg.choices(args.alg, "alg")?;
    let algs = if algs.is_empty() && cfg.raw("alg").is_none() {
        vec![Alg::Comp, Alg::Dd]
    } else {
        nonempty(algs, "algorithm")?
    };
    let mults = cfg.list(args.mult, "mult")?;
    let mults = if mults.is_empty() {
        vec![0.5, 1.0, 1.5, 2.0]
    } else {
        mults
    };
    if let Some(&bad) = mults.iter().find(|&&m| !(m > 0.0 && m.is_finite())) {
        return Err(crate::error::domain("multiplier", bad, "(0, inf)"));
    }
    let trials = cfg.value(args.trials, "trials")?.unwrap_or(100);
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let seed = match cfg.value(args.seed, "seed")? {
        Some(s) => s,
        None => match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("{SEED_ENV} = {v:?} is not an unsigned integer")))?,
            Err(_) => 0,
        },
    };
    Ok(SimSettings {
        n: cfg.value(args.n, "n")?.unwrap_or(10_000),
        thetas,
        ps,
        qs,
        design: cfg.choice(args.design, "design")?.unwrap_or(DesignArg::Cc).into(),
        algs,
        mults,
        trials,
        seed,
        k_assumed: cfg.value(args.k_assumed, "k-assumed")?,
        dump: cfg.value(args.dump_design, "dump-design")?,
    })
}

pub(super) fn cmd_simulate(ctx: &Context, args: SimArgs, sweep: bool) -> Result<bool> {
    let s = sim_settings(&ctx.config, args, sweep)?;
    let mut meta = Meta::new(if sweep { "sweep" } else { "simulate" });
    meta.set("n", s.n)
        .set("theta", join(&s.thetas))
        .set("p", join(&s.ps))
        .set("q", join(&s.qs))
        .set("design", s.design)
        .set(
            "alg",
            join(&s.algs.iter().map(|&a| Algorithm::from(a)).collect::<Vec<_>>()),
        )
        .set("mult", join(&s.mults))
        .set("trials", s.trials)
        .set("seed", s.seed)
        .set("d-max", ctx.optimizer.config.d_max);
    if let Some(k) = s.k_assumed {
        meta.set("k-assumed", k);
    }
    let mut sink = ctx.sink(&meta)?;
    let mut dump = s.dump.clone();
    let mut all_ok = true;

    for &theta in &s.thetas {
        for &p in &s.ps {
            for &q in &s.qs {
                for &alg in &s.algs {
                    let algorithm = Algorithm::from(alg);
                    let ch = ChannelParams::new(p, q);
                    let cal = ch
                        .as_ref()
                        .map_err(|e| Error::Parameter(e.to_string()))
                        .and_then(|ch| calibrate_with(theta, ch, algorithm, s.design, &ctx.optimizer));
                    for &mult in &s.mults {
                        let started = Instant::now();
                        let outcome = (|| -> Result<_> {
                            let cal: &Calibration = cal.as_ref().map_err(|e| Error::Parameter(e.to_string()))?;
                            let ch = *ch.as_ref().map_err(|e| Error::Parameter(e.to_string()))?;
                            let inst = cal.instantiate(s.n, theta, mult, s.k_assumed)?;
                            let cell = CellSpec::new(cal, inst, design_kind(s.design), algorithm, ch, s.seed)?;
                            if let Some(path) = dump.take() {
                                let t = cell.run_trial(0)?;
                                let mut w = BufWriter::new(File::create(&path)?);
                                write_dump(&mut w, &t.design, Some(&t.truth), Some(&t.displayed))?;
                            }
                            Ok((cal, inst, cell.run(s.trials)?))
                        })();
                        all_ok &= outcome.is_ok();
                        let ok = outcome.as_ref().ok();
                        eprintln!(
                            "theta={theta} p={p} q={q} alg={algorithm} mult={mult}: {} in {:.2?}",
                            status(&outcome),
                            started.elapsed()
                        );
                        sink.row(&SimRow {
                            n: s.n,
                            theta,
                            p,
                            q,
                            design: s.design.to_string(),
                            algorithm: algorithm.to_string(),
                            multiplier: mult,
                            trials: s.trials,
                            seed: s.seed,
                            status: status(&outcome),
                            k: ok.map(|o| o.1.k),
                            m: ok.map(|o| o.1.m),
                            delta: ok.map(|o| o.1.delta),
                            prefactor: ok.map(|o| o.0.prefactor),
                            rate_bits: ok.map(|o| o.0.bound.rate_bits),
                            alpha: ok.map(|o| o.0.alpha),
                            beta: ok.map(|o| o.0.beta),
                            d: ok.map(|o| o.0.d),
                            success_rate: ok.map(|o| o.2.success_rate),
                            mean_false_pos: ok.map(|o| o.2.mean_false_pos),
                            mean_false_neg: ok.map(|o| o.2.mean_false_neg),
                            mean_unresolved: ok.map(|o| o.2.mean_unresolved),
                        })?;
                    }
                }
            }
        }
    }
    Ok(all_ok)
}
