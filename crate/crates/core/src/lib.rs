//! Exact and simulated L² distance between the normalized QuickSort
//! comparison count `Y_n = (K_n − μ_n)/(n+1)` and its limit `Y`.
//!
//! * [`exact`]: closed forms in ℚ and ℚ + ℚ·π².
//! * [`sim`]: the coupling of `Y_n` with a width-pruned copy of `Y` built
//!   on the same binary search tree.
//! * [`estimate`]: seeded Monte Carlo estimators with error gates.
//! * [`oracles`]: brute-force, quadrature and order-statistic checks.
//! * [`verify`]: the named check suites.
//!
//! With the default `parallel` feature replications run on rayon; without
//! it every [`estimate::Execution`] runs sequentially. Results do not depend
//! on the worker count.

pub mod error;
pub mod estimate;
pub mod exact;
pub mod oracles;
pub mod rng;
pub mod sim;
pub mod toll;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{PiQuadratic, Rational};
