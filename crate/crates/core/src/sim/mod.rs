//! The common probability space of `K_n` and the limit series `Y`.

pub mod coupled;
pub mod series;
pub mod tree;

pub use coupled::{coupled_sample, verify_ynid, CoupledSample, Coupling, MuTable};
pub use series::{evaluate_parts, evaluate_y, level_sums, sample_limit, SeriesParts};
pub use tree::{run_quicksort, BstStats, IntervalNode, NodeId, SearchTree};
