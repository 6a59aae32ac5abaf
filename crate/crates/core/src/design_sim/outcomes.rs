use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use super::design::PoolingDesign;
use super::rng::{rng_from_seed, SimRng};
use crate::error::{Error, Result};
use crate::kl_math::ChannelParams;

/// Infected set of weight exactly `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfectionVector {
    pub n: usize,
    /// Sorted, distinct item indices.
    pub infected: Vec<usize>,
}

impl InfectionVector {
    pub fn from_indices(n: usize, mut infected: Vec<usize>) -> Result<Self> {
        infected.sort_unstable();
        infected.dedup();
        if infected.last().is_some_and(|&x| x >= n) {
            return Err(Error::Parameter(format!("infected index out of range for n = {n}")));
        }
        Ok(Self { n, infected })
    }

    /// Items whose flag is set.
    pub fn from_mask(mask: &[bool]) -> Self {
        Self {
            n: mask.len(),
            infected: mask.iter().enumerate().filter(|(_, &b)| b).map(|(x, _)| x).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.infected.len()
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &x in &self.infected {
            m[x] = true;
        }
        m
    }
}

/// Uniform weight-`k` subset of `[0, n)`.
pub fn sample_infection(n: usize, k: usize, seed: u64) -> Result<InfectionVector> {
    if k > n {
        return Err(Error::Parameter(format!("k = {k} exceeds n = {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut infected = index::sample(&mut rng, n, k).into_vec();
    infected.sort_unstable();
    Ok(InfectionVector { n, infected })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    True,
    Displayed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeVector {
    pub bits: Vec<bool>,
    pub stage: Stage,
}

impl OutcomeVector {
    pub fn m(&self) -> usize {
        self.bits.len()
    }

    pub fn positives(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// The same bits, complemented.
    pub fn inverted(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
            stage: self.stage,
        }
    }
}

/// A test is truly positive iff its pool contains an infected item.
pub fn true_outcomes(design: &PoolingDesign, sigma: &InfectionVector) -> Result<OutcomeVector> {
    if design.n != sigma.n {
        return Err(Error::Parameter(format!(
            "design has n = {}, infection vector n = {}",
            design.n, sigma.n
        )));
    }
    let mut bits = vec![false; design.m];
    for &x in &sigma.infected {
        for &a in &design.item_tests[x] {
            bits[a] = true;
        }
    }
    Ok(OutcomeVector {
        bits,
        stage: Stage::True,
    })
}

/// Send each true outcome independently through the p–q channel.
pub fn apply_channel(truth: &OutcomeVector, ch: &ChannelParams, seed: u64) -> Result<OutcomeVector> {
    apply_channel_with(truth, ch, &mut rng_from_seed(seed))
}

pub fn apply_channel_with(truth: &OutcomeVector, ch: &ChannelParams, rng: &mut SimRng) -> Result<OutcomeVector> {
    if truth.stage != Stage::True {
        return Err(Error::Parameter("channel input must be true outcomes".into()));
    }
    // simulate the normalised channel, then undo the normalisation
    let (p, q) = (ch.p(), ch.q());
    let flip_all = ch.is_flipped();
    let bits = truth
        .bits
        .iter()
        .map(|&b| {
            let flip = if b { rng.random_bool(q) } else { rng.random_bool(p) };
            (b != flip) != flip_all
        })
        .collect();
    Ok(OutcomeVector {
        bits,
        stage: Stage::Displayed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design_sim::constant_column_design;

    #[test]
    fn infection_extremes() {
        assert!(sample_infection(5, 0, 1).unwrap().infected.is_empty());
        assert_eq!(sample_infection(5, 5, 1).unwrap().infected, vec![0, 1, 2, 3, 4]);
        assert!(sample_infection(5, 6, 1).is_err());
    }

    #[test]
    fn single_infected_item_lights_its_tests() {
        let d = constant_column_design(30, 40, 6, 2).unwrap();
        let s = InfectionVector::from_indices(30, vec![17]).unwrap();
        let t = true_outcomes(&d, &s).unwrap();
        let pos: Vec<usize> = (0..40).filter(|&a| t.bits[a]).collect();
        assert_eq!(pos, d.item_tests[17]);
    }

    #[test]
    fn noiseless_channel_is_identity() {
        let t = OutcomeVector {
            bits: vec![true, false, true, true, false],
            stage: Stage::True,
        };
        let out = apply_channel(&t, &ChannelParams::NOISELESS, 4).unwrap();
        assert_eq!(out.bits, t.bits);
        assert_eq!(out.stage, Stage::Displayed);
        assert!(apply_channel(&out, &ChannelParams::NOISELESS, 4).is_err());
    }

    #[test]
    fn flipped_channel_simulates_raw_parameters() {
        // raw (1, 1): every bit is inverted
        let ch = ChannelParams::new(1.0, 1.0).unwrap();
        let t = OutcomeVector {
            bits: vec![true, false, false],
            stage: Stage::True,
        };
        assert_eq!(apply_channel(&t, &ch, 0).unwrap().bits, vec![false, true, true]);
    }

    #[test]
    fn mask_roundtrip() {
        let s = InfectionVector::from_indices(6, vec![4, 1, 4]).unwrap();
        assert_eq!(s.infected, vec![1, 4]);
        assert_eq!(InfectionVector::from_mask(&s.mask()), s);
    }
}
