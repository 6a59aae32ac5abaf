//! COMP, DD and the converse across θ for one channel, both designs.
//!
//! cargo run --release --example channel_bounds -- 0.05 0.1

use std::env;
use std::time::Instant;

use noisygt::bounds::{converse_constant, KScaling, Optimizer};
use noisygt::ChannelParams;

fn main() -> noisygt::Result<()> {
    let args: Vec<f64> = env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (p, q) = (
        args.first().copied().unwrap_or(0.0),
        args.get(1).copied().unwrap_or(0.1),
    );
    let ch = ChannelParams::new(p, q)?;
    let opt = Optimizer::default();
    let conv = converse_constant(&ch)?;

    println!("p = {p}, q = {q}; converse prefactor {:.5}", conv.prefactor_c);
    println!("theta   comp     dd       ber-comp ber-dd   (dd binds)");
    let start = Instant::now();
    for i in 1..10 {
        let theta = i as f64 / 10.0;
        let comp = opt.comp(theta, &ch)?;
        let dd = opt.dd(theta, &ch)?;
        let bcomp = opt.bernoulli_comp(theta, &ch, KScaling::Asymptotic)?;
        let bdd = opt.bernoulli_dd(theta, &ch, KScaling::Asymptotic)?;
        println!(
            "{theta:.1}   {:8.4} {:8.4} {:8.4} {:8.4} ({})",
            comp.prefactor_c, dd.prefactor_c, bcomp.prefactor_c, bdd.prefactor_c, dd.binding_constraint
        );
    }
    eprintln!("{:.2?}", start.elapsed());
    Ok(())
}
