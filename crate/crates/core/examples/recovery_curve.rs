//! Exact-recovery rate against the test budget, as a multiple of the
//! calibrated prefactor.
//!
//! cargo run --release --example recovery_curve -- dd

use noisygt::bounds::{Algorithm, Design};
use noisygt::cli::experiment::CellSpec;
use noisygt::decoders::calibrate;
use noisygt::design_sim::DesignKind;
use noisygt::ChannelParams;

fn main() -> noisygt::Result<()> {
    let alg = match std::env::args().nth(1).as_deref() {
        Some("comp") => Algorithm::Comp,
        _ => Algorithm::Dd,
    };
    let (n, theta) = (4096, 0.3);
    let ch = ChannelParams::new(0.0, 0.05)?;
    let cal = calibrate(theta, &ch, alg, Design::ConstantColumn)?;
    println!("{alg}, n={n}, θ={theta}, prefactor {:.3}", cal.prefactor);
    for mult in [0.4, 0.6, 0.8, 1.0, 1.25, 1.5, 2.0] {
        let inst = cal.instantiate(n, theta, mult, None)?;
        let cell = CellSpec::new(&cal, inst, DesignKind::ConstantColumn, alg, ch, 7)?;
        let s = cell.run(100)?;
        let bar = "#".repeat((s.success_rate * 40.0).round() as usize);
        println!("{mult:>5} m={:<6} {:>5.2} {bar}", inst.m, s.success_rate);
    }
    Ok(())
}
