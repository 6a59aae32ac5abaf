//! One noisy instance end to end: calibrate, draw, decode, score.
//!
//! cargo run --release --example decode_once -- 1.5

use noisygt::bounds::{Algorithm, Design};
use noisygt::decoders::{calibrate, evaluate, noisy_comp, noisy_dd, DecoderConfig};
use noisygt::design_sim::{apply_channel, constant_column_design, sample_infection, true_outcomes};
use noisygt::ChannelParams;

fn main() -> noisygt::Result<()> {
    let mult: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1.5);
    let (n, theta) = (10_000, 0.4);
    let ch = ChannelParams::new(0.02, 0.05)?;

    for alg in [Algorithm::Comp, Algorithm::Dd] {
        let cal = calibrate(theta, &ch, alg, Design::ConstantColumn)?;
        let inst = cal.instantiate(n, theta, mult, None)?;
        let design = constant_column_design(n, inst.m, inst.delta, 1)?;
        let sigma = sample_infection(n, inst.k, 2)?;
        let shown = apply_channel(&true_outcomes(&design, &sigma)?, &ch, 3)?;
        let cfg = DecoderConfig::for_channel(cal.alpha, cal.beta, &ch)?;
        let est = match alg {
            Algorithm::Dd => noisy_dd(&design, &shown, &cfg)?,
            _ => noisy_comp(&design, &shown, &cfg)?,
        };
        let r = evaluate(&est, &sigma)?;
        println!(
            "{alg}: k={} m={} Δ={} α={:.3} β={:.3} -> exact={} fp={} fn={}",
            inst.k, inst.m, inst.delta, cal.alpha, cal.beta, r.exact, r.false_positives, r.false_negatives
        );
    }
    Ok(())
}
