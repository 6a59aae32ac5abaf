use serde::Serialize;

use super::design::PoolingDesign;
use super::outcomes::{InfectionVector, OutcomeVector};

/// Counts of truly negative/positive tests split by whether the channel
/// flipped them, plus the test-degree extremes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TestStatistics {
    pub m: usize,
    pub m0: usize,
    pub m1: usize,
    pub m0f: usize,
    pub m0u: usize,
    pub m1f: usize,
    pub m1u: usize,
    pub gamma_min: usize,
    pub gamma_max: usize,
}

pub fn collect_statistics(design: &PoolingDesign, truth: &OutcomeVector, displayed: &OutcomeVector) -> TestStatistics {
    let (mut m0f, mut m0u, mut m1f, mut m1u) = (0, 0, 0, 0);
    for (&t, &s) in truth.bits.iter().zip(&displayed.bits) {
        match (t, t != s) {
            (false, true) => m0f += 1,
            (false, false) => m0u += 1,
            (true, true) => m1f += 1,
            (true, false) => m1u += 1,
        }
    }
    let (gamma_min, gamma_max) = design.test_degree_extremes();
    TestStatistics {
        m: truth.m(),
        m0: m0f + m0u,
        m1: m1f + m1u,
        m0f,
        m0u,
        m1f,
        m1u,
        gamma_min,
        gamma_max,
    }
}

/// `N[x]`: displayed-negative tests containing `x`.
pub fn negative_counts(design: &PoolingDesign, displayed: &OutcomeVector) -> Vec<usize> {
    design
        .item_tests
        .iter()
        .map(|tests| tests.iter().filter(|&&a| !displayed.bits[a]).count())
        .collect()
}

/// `P[x]`: displayed-positive tests containing `x` whose other members are
/// all in `healthy`.
pub fn positive_solo_counts(design: &PoolingDesign, displayed: &OutcomeVector, healthy: &[bool]) -> Vec<usize> {
    let mut counts = vec![0; design.n];
    for (a, items) in design.test_items.iter().enumerate() {
        if !displayed.bits[a] {
            continue;
        }
        let mut open = items.iter().filter(|&&x| !healthy[x]);
        match (open.next(), open.next()) {
            (None, _) => items.iter().for_each(|&x| counts[x] += 1),
            (Some(&x), None) => counts[x] += 1,
            _ => {}
        }
    }
    counts
}

/// Tests whose members are all healthy and all in `cleared`.
pub fn cleared_pure_tests(design: &PoolingDesign, sigma: &InfectionVector, cleared: &[bool]) -> usize {
    let infected = sigma.mask();
    design
        .test_items
        .iter()
        .filter(|items| items.iter().all(|&x| !infected[x] && cleared[x]))
        .count()
}
