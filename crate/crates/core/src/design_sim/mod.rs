//! Pooling designs, infection vectors and the p–q channel.

mod design;
mod dump;
mod outcomes;
pub mod rng;
mod stats;

pub use design::{bernoulli_design, constant_column_design, DesignKind, PoolingDesign};
pub use dump::{read_dump, write_dump, DesignDump, DUMP_HEADER};
pub use outcomes::{
    apply_channel, apply_channel_with, sample_infection, true_outcomes, InfectionVector, OutcomeVector, Stage,
};
pub use rng::derive_seed;
pub use stats::{cleared_pure_tests, collect_statistics, negative_counts, positive_solo_counts, TestStatistics};
