//! Acceptance suite. Prints one `ACn PASS|FAIL` line per criterion and
//! exits nonzero if any fails. Run a subset with
//! `cargo test --release --test acceptance -- AC3 AC7`.

use std::f64::consts::LN_2;
use std::process::{Command, ExitCode};
use std::time::Instant;

use noisygt::bounds::{converse_constant, optimize, Algorithm, BoundQuery, Design, KScaling};
use noisygt::cli::experiment::CellSpec;
use noisygt::decoders::{calibrate, noisy_comp, noisy_dd, DecoderConfig};
use noisygt::design_sim::rng::rng_from_seed;
use noisygt::design_sim::{
    apply_channel, bernoulli_design, collect_statistics, constant_column_design, derive_seed, negative_counts,
    sample_infection, true_outcomes, DesignKind, PoolingDesign,
};
use noisygt::kl_math::{
    capacity_closed_forms, channel_capacity, kl_bernoulli, kl_correction_v, kl_limit_rate, scaled_kl,
};
use noisygt::ChannelParams;
use rand_distr::{Binomial, Distribution};
use statrs::distribution::{Binomial as BinomialPmf, ChiSquared, ContinuousCDF, Discrete};

/// Two-sided 1% critical value of the standard normal.
const Z_99: f64 = 2.5758293035489;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ch(p: f64, q: f64) -> ChannelParams {
    ChannelParams::new(p, q).unwrap()
}

fn prefactor(theta: f64, c: ChannelParams, design: Design, alg: Algorithm) -> f64 {
    let q = BoundQuery::new(theta, c, design, alg)
        .unwrap()
        .with_k_scaling(KScaling::Asymptotic);
    optimize(&q).unwrap().prefactor_c
}

fn thetas() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

fn ac1() -> Outcome {
    let mut worst: f64 = 0.0;
    for theta in thetas() {
        let comp = prefactor(theta, ChannelParams::NOISELESS, Design::ConstantColumn, Algorithm::Comp);
        let dd = prefactor(theta, ChannelParams::NOISELESS, Design::ConstantColumn, Algorithm::Dd);
        let want_comp = 1.0 / ((1.0 - theta) * LN_2 * LN_2);
        let want_dd = f64::max(1.0, theta / (1.0 - theta)) / (LN_2 * LN_2);
        worst = worst
            .max((comp / want_comp - 1.0).abs())
            .max((dd / want_dd - 1.0).abs());
    }
    let msg = format!("noiseless COMP/DD closed forms, max rel err {worst:.2e} (tol 1e-3)");
    if worst <= 1e-3 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac2() -> Outcome {
    let grid: Vec<f64> = (0..50).map(|i| i as f64 * 0.02).collect();
    let (mut forms, mut dstar, mut cells) = (0.0f64, 0.0f64, 0);
    for &p in &grid {
        for &q in &grid {
            if p + q >= 1.0 - 1e-12 {
                continue;
            }
            cells += 1;
            let c = ch(p, q);
            let (a, b) = capacity_closed_forms(&c);
            forms = forms.max((a - b).abs());
            if p == q {
                let cap = channel_capacity(&c).unwrap();
                dstar = dstar.max((cap.d_heuristic - LN_2).abs());
            }
        }
    }
    let msg = format!(
        "{cells} channels: closed forms differ by ≤ {forms:.2e}, |d*_ch - ln 2| ≤ {dstar:.2e} on p = q (tol 1e-12)"
    );
    if forms <= 1e-12 && dstar <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac3() -> Outcome {
    const REL: f64 = 1e-4;
    let ps = [0.0, 0.02, 0.05, 0.1, 0.2];
    let mut failures = Vec::new();
    let mut checks = 0;
    for theta in thetas() {
        for &p in &ps {
            for &q in &ps {
                let c = ch(p, q);
                let conv = converse_constant(&c).unwrap().prefactor_c;
                let comp = prefactor(theta, c, Design::ConstantColumn, Algorithm::Comp);
                let dd = prefactor(theta, c, Design::ConstantColumn, Algorithm::Dd);
                let bcomp = prefactor(theta, c, Design::Bernoulli, Algorithm::Comp);
                let mut check = |ok: bool, what: String| {
                    checks += 1;
                    if !ok {
                        failures.push(what);
                    }
                };
                check(
                    conv <= dd * (1.0 + REL),
                    format!("converse {conv} > DD {dd} at ({theta},{p},{q})"),
                );
                if q == 0.0 {
                    check(
                        dd <= comp * (1.0 + REL),
                        format!("DD {dd} > COMP {comp} at ({theta},{p},0)"),
                    );
                }
                check(
                    bcomp >= comp * (1.0 - REL),
                    format!("Bernoulli COMP {bcomp} < COMP {comp} at ({theta},{p},{q})"),
                );
                if p == 0.0 {
                    let bdd = prefactor(theta, c, Design::Bernoulli, Algorithm::Dd);
                    check(bdd > dd, format!("Bernoulli DD {bdd} ≤ DD {dd} at ({theta},0,{q})"));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!(
            "225 (θ,p,q) points, {checks} orderings hold (weak ones at rel 1e-4)"
        ))
    } else {
        Err(format!(
            "{} of {checks} orderings fail; first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

fn ac4() -> Outcome {
    let xs = [0.2, 0.5, 0.8];
    let mut worst_ratio: f64 = 0.0;
    let mut v_max = f64::NEG_INFINITY;
    for &x in &xs {
        for &y in &xs {
            if x == y {
                continue;
            }
            v_max = v_max.max(kl_correction_v(x, y).unwrap());
            for d in [0.5, 1.0, 2.0] {
                let limit = d * kl_limit_rate(x, y);
                for k in [100u64, 1_000, 10_000, 100_000] {
                    let gap = (scaled_kl(k, x, y, d).unwrap() - limit).abs();
                    worst_ratio = worst_ratio.max(gap * k as f64 / 10.0);
                }
            }
        }
    }
    let msg = format!("max |k·KL(xd/k‖yd/k) − limit| / (10/k) = {worst_ratio:.3}, max v = {v_max:.3}");
    if worst_ratio <= 1.0 && v_max < 0.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Sizes used by the distributional checks: n = 10⁴, k = 100, `m` from the
/// calibrated constant-column COMP prefactor, `Δ` from the requested `d`.
fn stat_instance(c: &ChannelParams, d: Option<f64>) -> (usize, usize, usize, usize, f64) {
    let (n, theta) = (10_000usize, 0.5);
    let cal = calibrate(theta, c, Algorithm::Comp, Design::ConstantColumn).unwrap();
    let d = d.unwrap_or(cal.d);
    let k = 100usize;
    let lr = (n as f64 / k as f64).ln();
    let m = (cal.prefactor * k as f64 * lr).ceil() as usize;
    let delta = (cal.prefactor * d * lr).round() as usize;
    (n, k, m, delta, d)
}

struct Sample {
    design: PoolingDesign,
    infected: Vec<usize>,
    neg_counts: Vec<usize>,
    displayed_negatives: usize,
    stats: noisygt::design_sim::TestStatistics,
}

fn sample_instance(n: usize, k: usize, m: usize, delta: usize, c: &ChannelParams, seed: u64, t: u64) -> Sample {
    let design = constant_column_design(n, m, delta, derive_seed(seed, t, "design")).unwrap();
    let sigma = sample_infection(n, k, derive_seed(seed, t, "infection")).unwrap();
    let truth = true_outcomes(&design, &sigma).unwrap();
    let shown = apply_channel(&truth, c, derive_seed(seed, t, "channel")).unwrap();
    Sample {
        neg_counts: negative_counts(&design, &shown),
        displayed_negatives: m - shown.positives(),
        stats: collect_statistics(&design, &truth, &shown),
        infected: sigma.infected,
        design,
    }
}

fn ac5() -> Outcome {
    let c = ch(0.05, 0.1);
    let (p, q) = (c.p(), c.q());
    let (n, k, m, delta, _) = stat_instance(&c, Some(LN_2));
    const SAMPLES: usize = 10_000;
    const SEED: u64 = 5;

    // Infected items: per instance keep infected items whose test sets are
    // pairwise disjoint, so their counts are independent Bin(Δ, q) draws.
    let mut infected_counts = Vec::with_capacity(SAMPLES);
    // Healthy items: 100 per instance from 100 instances.
    let mut healthy: Vec<Vec<(usize, usize)>> = Vec::new(); // (N_x, M) per instance
    let mut t = 0u64;
    while infected_counts.len() < SAMPLES || healthy.len() < 100 {
        let s = sample_instance(n, k, m, delta, &c, SEED, t);
        t += 1;
        let mut used = vec![false; m];
        for &x in &s.infected {
            if infected_counts.len() >= SAMPLES {
                break;
            }
            let tests = &s.design.item_tests[x];
            if tests.iter().any(|&a| used[a]) {
                continue;
            }
            for &a in tests {
                used[a] = true;
            }
            infected_counts.push(s.neg_counts[x]);
        }
        if healthy.len() < 100 {
            let mask = {
                let mut v = vec![false; n];
                for &x in &s.infected {
                    v[x] = true;
                }
                v
            };
            let rows: Vec<(usize, usize)> = (0..n)
                .filter(|&x| !mask[x])
                .take(100)
                .map(|x| (s.neg_counts[x], s.displayed_negatives))
                .collect();
            healthy.push(rows);
        }
    }

    // Chi-square against Bin(Δ, q), pooling bins with expected count < 5.
    let bin = BinomialPmf::new(q, delta as u64).unwrap();
    let mut hist = vec![0usize; delta + 1];
    for &v in &infected_counts {
        hist[v] += 1;
    }
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut open = (0.0, 0.0);
    for (j, &h) in hist.iter().enumerate() {
        open.0 += h as f64;
        open.1 += SAMPLES as f64 * bin.pmf(j as u64);
        if open.1 >= 5.0 {
            cells.push(open);
            open = (0.0, 0.0);
        }
    }
    // an underfull upper tail joins the last full bin
    if let Some(last) = cells.last_mut() {
        last.0 += open.0;
        last.1 += open.1;
    }
    let bins = cells.len();
    let chi2: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let p_binom = 1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(chi2);

    // Healthy items, conditionally on the instance: x's tests are a uniform
    // Δ-subset independent of the outcomes, so N_x ~ H(m, M, Δ) exactly.
    let (dm, df) = (delta as f64, m as f64);
    let (mut r_sum, mut v_sum, mut u) = (0.0, 0.0, Vec::new());
    let mut all = Vec::new();
    let mut cluster_means = Vec::new();
    for rows in &healthy {
        let mut cm = 0.0;
        for &(nx, big_m) in rows {
            let frac = big_m as f64 / df;
            let r = nx as f64 - dm * frac;
            let var = dm * frac * (1.0 - frac) * (df - dm) / (df - 1.0);
            r_sum += r;
            v_sum += var;
            u.push(r * r - var);
            all.push(nx as f64);
            cm += nx as f64;
        }
        cluster_means.push(cm / rows.len() as f64);
    }
    let hn = all.len() as f64;
    let z_cond_mean = r_sum / v_sum.sqrt();
    let u_mean = u.iter().sum::<f64>() / hn;
    let u_sd = (u.iter().map(|x| (x - u_mean).powi(2)).sum::<f64>() / (hn - 1.0)).sqrt();
    let z_cond_var = u_mean / (u_sd / hn.sqrt());

    // Unconditionally: H(m, m s, Δ) with s the displayed-negative probability
    // at this n, i.e. e^{-d} replaced by the exact (1 - Δ/m)^k.
    let p0 = (1.0 - dm / df).powi(k as i32);
    let s = p0 * (1.0 - p) + (1.0 - p0) * q;
    let mean = all.iter().sum::<f64>() / hn;
    let cn = cluster_means.len() as f64;
    let cl_sd = (cluster_means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (cn - 1.0)).sqrt();
    let z_mean = (mean - dm * s) / (cl_sd / cn.sqrt());
    let hyper_var = dm * s * (1.0 - s) * (df - dm) / (df - 1.0);
    let var = all.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (hn - 1.0);
    let m4 = all.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / hn;
    let z_var = (var - hyper_var) / ((m4 - var * var) / hn).sqrt();

    let msg = format!(
        "m={m} Δ={delta}: infected χ² p={p_binom:.3} ({bins} bins); healthy z: mean {z_mean:.2}, var {z_var:.2}, \
         conditional mean {z_cond_mean:.2}, conditional var {z_cond_var:.2} (|z| ≤ {Z_99:.3})"
    );
    let ok = p_binom >= 0.01 && [z_mean, z_var, z_cond_mean, z_cond_var].iter().all(|z| z.abs() <= Z_99);
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac6() -> Outcome {
    let c = ch(0.05, 0.1);
    let (p, q) = (c.p(), c.q());
    let (n, k, m, delta, d) = stat_instance(&c, None);
    let mut acc = [0.0f64; 5];
    for t in 0..100 {
        let s = sample_instance(n, k, m, delta, &c, 6, t).stats;
        for (a, v) in acc.iter_mut().zip([s.m0, s.m0f, s.m0u, s.m1f, s.m1u]) {
            *a += v as f64 / m as f64 / 100.0;
        }
    }
    let e = (-d).exp();
    let want = [e, e * p, e * (1.0 - p), (1.0 - e) * q, (1.0 - e) * (1.0 - q)];
    let names = ["m0", "m0f", "m0u", "m1f", "m1u"];
    let errs: Vec<f64> = acc.iter().zip(&want).map(|(a, w)| (a / w - 1.0).abs()).collect();
    let detail: Vec<String> = names
        .iter()
        .zip(&errs)
        .map(|(n, e)| format!("{n} {:.2}%", 100.0 * e))
        .collect();
    let msg = format!("d={d:.4} m={m} Δ={delta}: rel err {} (tol 5%)", detail.join(", "));
    if errs.iter().all(|&e| e <= 0.05) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac7() -> Outcome {
    let n = 1usize << 14;
    let mults = [0.6, 1.0, 1.5, 2.0];
    let channels = [(0.0, 0.0), (0.0, 0.05), (0.05, 0.0), (0.05, 0.05)];
    let mut bad = Vec::new();
    let mut cells = 0;
    let mut min_gain = f64::INFINITY;
    for theta in [0.3, 0.5] {
        for &(p, q) in &channels {
            let c = ch(p, q);
            for alg in [Algorithm::Comp, Algorithm::Dd] {
                let cal = calibrate(theta, &c, alg, Design::ConstantColumn).unwrap();
                let rates: Vec<f64> = mults
                    .iter()
                    .map(|&mult| {
                        let inst = cal.instantiate(n, theta, mult, None).unwrap();
                        let spec = CellSpec::new(&cal, inst, DesignKind::ConstantColumn, alg, c, 2024).unwrap();
                        spec.run(200).unwrap().success_rate
                    })
                    .collect();
                cells += 1;
                let gain = rates[3] - rates[0];
                min_gain = min_gain.min(gain);
                if rates.windows(2).any(|w| w[1] < w[0]) || gain < 0.2 - 1e-12 {
                    bad.push(format!("θ={theta} ({p},{q}) {alg}: {rates:?}"));
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!(
            "{cells} cells nondecreasing, min gain 0.6→2.0 = {:.1} pts",
            100.0 * min_gain
        ))
    } else {
        Err(format!("{} of {cells} cells fail: {}", bad.len(), bad.join("; ")))
    }
}

fn reference_classic(design: &PoolingDesign, y: &[bool]) -> (Vec<bool>, Vec<bool>) {
    let (n, m) = (design.n, design.m);
    let mut a = vec![vec![false; n]; m];
    for (x, tests) in design.item_tests.iter().enumerate() {
        for &t in tests {
            a[t][x] = true;
        }
    }
    let mut healthy = vec![false; n];
    for t in 0..m {
        if !y[t] {
            for x in 0..n {
                healthy[x] |= a[t][x];
            }
        }
    }
    let comp: Vec<bool> = healthy.iter().map(|h| !h).collect();
    let mut dd = vec![false; n];
    for t in 0..m {
        if y[t] {
            let pd: Vec<usize> = (0..n).filter(|&x| a[t][x] && !healthy[x]).collect();
            if pd.len() == 1 {
                dd[pd[0]] = true;
            }
        }
    }
    (comp, dd)
}

fn ac8() -> Outcome {
    let (n, k) = (500usize, 10usize);
    let mut mismatches = 0;
    let mut exact_dd = 0;
    for t in 0..100u64 {
        let m = [60usize, 90, 130][t as usize % 3];
        let delta = 6;
        let design = if t % 2 == 0 {
            constant_column_design(n, m, delta, derive_seed(8, t, "design")).unwrap()
        } else {
            bernoulli_design(n, m, delta as f64 / m as f64, derive_seed(8, t, "design")).unwrap()
        };
        let sigma = sample_infection(n, k, derive_seed(8, t, "infection")).unwrap();
        let y = true_outcomes(&design, &sigma).unwrap();
        let cfg = DecoderConfig::classic(design.delta);
        let comp = noisy_comp(&design, &y, &cfg).unwrap().infected.mask();
        let dd = noisy_dd(&design, &y, &cfg).unwrap().infected.mask();
        let (rc, rd) = reference_classic(&design, &y.bits);
        mismatches += (comp != rc) as usize + (dd != rd) as usize;
        exact_dd += (dd == sigma.mask()) as usize;
    }
    let msg = format!("100 noiseless instances, {mismatches} mismatches vs reference ({exact_dd} exact DD recoveries)");
    if mismatches == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac9() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (i, (delta, q, alpha)) in [(50u64, 0.05, 0.2), (100u64, 0.1, 0.3)].into_iter().enumerate() {
        let thr = (alpha * delta as f64).ceil() as u64;
        let dist = Binomial::new(delta, q).unwrap();
        let mut rng = rng_from_seed(derive_seed(9, i as u64, "chernoff"));
        let hits = (0..1_000_000).filter(|_| dist.sample(&mut rng) >= thr).count();
        let freq = hits as f64 / 1e6;
        let bound = (-(delta as f64) * kl_bernoulli(alpha, q)).exp();
        ok &= freq <= 1.5 * bound;
        lines.push(format!("Δ={delta} q={q} α={alpha}: {freq:.2e} vs bound {bound:.2e}"));
    }
    let msg = lines.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ac10() -> Outcome {
    let args = [
        "simulate", "--n", "2000", "--theta", "0.4", "--p", "0.02", "--q", "0.05", "--alg", "comp,dd", "--mult",
        "0.8,1.5", "--trials", "20", "--seed", "31",
    ];
    let run = || Command::new(env!("CARGO_BIN_EXE_noisygt")).args(args).output().unwrap();
    let (a, b) = (run(), run());
    let msg = format!("two runs, {} bytes each", a.stdout.len());
    if a.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout {
        Ok(msg)
    } else {
        Err(format!("{msg}: outputs differ or the run failed"))
    }
}

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [Criterion; 10] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
        ("AC10", ac10),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        if !filters.is_empty() && !filters.iter().any(|flt| flt == name) {
            continue;
        }
        let start = Instant::now();
        let (tag, msg) = match f() {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("{name} {tag} {msg} [{:.1?}]", start.elapsed());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
