//! coinlab: a laboratory for a two-message quantum weak coin-flipping
//! protocol family.
//!
//! A protocol instance is a bipartite pure state |ψ> on H_A ⊗ H_B together
//! with a two-element POVM {E0, E1 = I - E0} on H_B. The crate models the
//! honest run, evaluates closed-form optimal cheating probabilities for
//! both parties, verifies the product bound P_A·P_B >= 1/2 for fair
//! instances, constructs protocols sitting exactly on that frontier, and
//! cross-checks every closed form against brute-force optimization oracles
//! and Monte Carlo simulation.

pub mod cheating;
pub mod error;
pub mod montecarlo;
pub mod oracle;
pub mod protocol;
pub mod qla;
pub mod rng;

pub use error::{Error, Result};
