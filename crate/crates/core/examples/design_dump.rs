//! Write a small design with its outcomes in the text dump format and read
//! it back.
//!
//! cargo run --example design_dump

use noisygt::design_sim::{apply_channel, bernoulli_design, read_dump, sample_infection, true_outcomes, write_dump};
use noisygt::ChannelParams;

fn main() -> noisygt::Result<()> {
    let design = bernoulli_design(12, 6, 0.3, 4)?;
    let sigma = sample_infection(12, 2, 5)?;
    let truth = true_outcomes(&design, &sigma)?;
    let shown = apply_channel(&truth, &ChannelParams::new(0.1, 0.1)?, 6)?;

    let mut buf = Vec::new();
    write_dump(&mut buf, &design, Some(&truth), Some(&shown))?;
    print!("{}", String::from_utf8_lossy(&buf));

    let back = read_dump(&buf[..])?;
    assert_eq!(back.design, design);
    eprintln!("round trip ok, infected {:?}", sigma.infected);
    Ok(())
}
