//! Negative-test fraction and flip counts of one calibrated instance
//! against their e^{-d} predictions.
//!
//! cargo run --release --example flip_counts

use noisygt::bounds::{Algorithm, Design};
use noisygt::decoders::calibrate;
use noisygt::design_sim::{apply_channel, collect_statistics, constant_column_design, sample_infection, true_outcomes};
use noisygt::ChannelParams;

fn main() -> noisygt::Result<()> {
    let (n, theta) = (10_000, 0.5);
    let ch = ChannelParams::new(0.05, 0.1)?;
    let cal = calibrate(theta, &ch, Algorithm::Comp, Design::ConstantColumn)?;
    let inst = cal.instantiate(n, theta, 1.0, None)?;
    let design = constant_column_design(n, inst.m, inst.delta, 11)?;
    let sigma = sample_infection(n, inst.k, 12)?;
    let truth = true_outcomes(&design, &sigma)?;
    let st = collect_statistics(&design, &truth, &apply_channel(&truth, &ch, 13)?);

    let (m, e) = (inst.m as f64, (-cal.d).exp());
    let (p, q) = (ch.p(), ch.q());
    println!(
        "m = {}, Δ = {}, d = {:.4}, Γ in [{}, {}]",
        inst.m, inst.delta, cal.d, st.gamma_min, st.gamma_max
    );
    for (name, got, want) in [
        ("m0", st.m0, e),
        ("m0f", st.m0f, e * p),
        ("m0u", st.m0u, e * (1.0 - p)),
        ("m1f", st.m1f, (1.0 - e) * q),
        ("m1u", st.m1u, (1.0 - e) * (1.0 - q)),
    ] {
        println!("{name:4} {got:6}  predicted {:8.1}", want * m);
    }
    Ok(())
}
