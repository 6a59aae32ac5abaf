//! Capacity, optimal signalling and the heuristic density for a few channels.
//!
//! cargo run --example capacity

use noisygt::bounds::converse_constant;
use noisygt::kl_math::channel_capacity;
use noisygt::ChannelParams;

fn main() -> noisygt::Result<()> {
    println!("p      q      C(bits)  gamma*   d*_ch    converse c");
    for (p, q) in [(0.0, 0.0), (0.0, 0.1), (0.1, 0.0), (0.05, 0.05), (0.1, 0.2), (0.9, 0.8)] {
        let ch = ChannelParams::new(p, q)?;
        let cap = channel_capacity(&ch)?;
        let conv = converse_constant(&ch)?;
        let note = if ch.is_flipped() { "  (flipped)" } else { "" };
        println!(
            "{p:<6} {q:<6} {:.5}  {:.5}  {:.5}  {:.4}{note}",
            cap.capacity_bits(),
            cap.gamma_star,
            cap.d_heuristic,
            conv.prefactor_c
        );
    }
    Ok(())
}
