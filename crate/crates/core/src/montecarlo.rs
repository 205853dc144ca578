//! Sampled protocol execution with honest and cheating strategies.
//!
//! Round dynamics follow the three protocol steps; the winner is read off
//! the outcome table:
//!
//! | outcome | verification | winner    |
//! |---------|--------------|-----------|
//! | b = 0   | pass         | B         |
//! | b = 0   | fail         | caught-B  |
//! | b = 1   | pass         | A         |
//! | b = 1   | fail         | caught-A  |
//!
//! A cheating preparer deviates only in the state she sends and otherwise
//! follows the protocol (her own verification turns are reported honestly),
//! which is exactly the strategy space the closed forms maximize over. A
//! cheating receiver skips the measurement, claims a fixed outcome and
//! returns the state untouched; that is provably optimal only on aligned
//! protocols, so requesting it elsewhere is an error (supply the channel
//! found by the receiver oracle as a custom strategy instead).
//!
//! Verification is simulated as a Bernoulli draw with the squared-overlap
//! pass probability; post-verification states are never needed. Overlaps
//! within 1e-12 of certainty are snapped to 1, so honest-vs-honest runs
//! never produce a false catch.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::cheating::{optimal_preparer_state, ALIGNED_COMMUTATOR_TOL};
use crate::error::{Error, Result};
use crate::protocol::{Protocol, DEGENERATE_OUTCOME_TOL};
use crate::qla::{normalize, psd_sqrt, vec_norm, BipartiteState, ComplexMatrix};
use crate::rng::substream;

/// State-preparation side (Alice in the round description).
#[derive(Debug, Clone)]
pub enum PreparerStrategy {
    Honest,
    /// Sends the state maximizing the probability of winning outcome `target`.
    OptimalCheat { target: u8 },
    /// Sends an arbitrary (normalized) state.
    Custom { state: BipartiteState },
}

/// Measurement side (Bob in the round description).
#[derive(Debug, Clone)]
pub enum ReceiverStrategy {
    Honest,
    /// Claims `target` without measuring and leaves the state untouched.
    /// Only supported on aligned protocols, where that is optimal.
    OptimalCheat { target: u8 },
    /// Applies a trace-preserving Kraus channel on the B side, then claims
    /// the fixed bit.
    Custom { kraus: Vec<ComplexMatrix>, claim: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Winner {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "caught-A")]
    CaughtA,
    #[serde(rename = "caught-B")]
    CaughtB,
}

/// One simulated round.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Transcript {
    pub outcome_bit: u8,
    pub verification_passed: bool,
    pub winner: Winner,
    pub rng_draws: u32,
}

pub const BATCH_STATS_SCHEMA: &str = "coinlab.batch-stats/1";

/// Aggregated winner frequencies over a batch of rounds.
#[derive(Debug, Clone, Serialize)]
pub struct BatchStats {
    pub schema: String,
    pub rounds: u64,
    pub freq_outcome0: f64,
    #[serde(rename = "freq_win_A")]
    pub freq_win_a: f64,
    #[serde(rename = "freq_win_B")]
    pub freq_win_b: f64,
    pub freq_caught: f64,
    /// Worst-case binomial standard error at this batch size, 1/(2 sqrt(n)).
    pub standard_error: f64,
}

/// Pass probability with near-certain overlaps snapped to exactly 1.
fn snap(p: f64) -> f64 {
    if p > 1.0 - 1e-12 {
        1.0
    } else {
        p.max(0.0)
    }
}

enum ReceiverPlan {
    /// Honest POVM measurement: outcome 0 probability and per-branch pass
    /// probabilities against the honest verification targets.
    Measure { q0: f64, pass: [f64; 2] },
    /// Fixed claim, no measurement draw.
    Claim { claim: u8, pass: f64 },
    /// Kraus channel: per-branch (probability, pass probability), then a
    /// fixed claim.
    Channel { claim: u8, branches: Vec<(f64, f64)> },
}

/// Everything about a (protocol, strategy pair) that rounds share.
struct RoundEngine {
    plan: ReceiverPlan,
}

impl RoundEngine {
    fn new(p: &Protocol, alice: &PreparerStrategy, bob: &ReceiverStrategy) -> Result<Self> {
        let prepared: BipartiteState = match alice {
            PreparerStrategy::Honest => p.psi().clone(),
            PreparerStrategy::OptimalCheat { target } => optimal_preparer_state(p, *target)?,
            PreparerStrategy::Custom { state } => {
                if state.dim_a() != p.dim_a() || state.dim_b() != p.dim_b() {
                    return Err(Error::DimensionMismatch {
                        context: format!(
                            "custom state on {}x{}, protocol is {}x{}",
                            state.dim_a(),
                            state.dim_b(),
                            p.dim_a(),
                            p.dim_b()
                        ),
                    });
                }
                state.clone()
            }
        };

        // honest verification target for outcome b, if defined
        let target = |b: u8| -> Result<BipartiteState> { p.post_measurement_state(b) };

        let plan = match bob {
            ReceiverStrategy::Honest => {
                let mut pass = [0.0f64; 2];
                let mut q = [0.0f64; 2];
                for b in 0..2u8 {
                    let root = psd_sqrt(&p.povm_element(b))?;
                    let branch = prepared.apply_b(&root);
                    let weight = vec_norm(&branch);
                    q[b as usize] = weight * weight;
                    if q[b as usize] < DEGENERATE_OUTCOME_TOL {
                        continue; // branch unreachable; pass probability unused
                    }
                    let post = BipartiteState::new(p.dim_a(), p.dim_b(), normalize(branch))?;
                    pass[b as usize] = snap(target(b)?.inner(&post).norm_sqr());
                }
                ReceiverPlan::Measure { q0: (q[0] / (q[0] + q[1])).clamp(0.0, 1.0), pass }
            }
            ReceiverStrategy::OptimalCheat { target: w } => {
                if *w > 1 {
                    return Err(Error::UnsupportedStrategy { reason: format!("target bit {w}") });
                }
                let norm = p.reduced_state().commutator_norm(p.e0());
                if norm > ALIGNED_COMMUTATOR_TOL {
                    return Err(Error::UnsupportedStrategy {
                        reason: format!(
                            "optimal receiver cheat requires an aligned protocol \
                             (commutator norm {norm:.3e}); pass the oracle's channel as a custom strategy"
                        ),
                    });
                }
                let pass = snap(target(*w)?.inner(&prepared).norm_sqr());
                ReceiverPlan::Claim { claim: *w, pass }
            }
            ReceiverStrategy::Custom { kraus, claim } => {
                if *claim > 1 {
                    return Err(Error::UnsupportedStrategy { reason: format!("claim bit {claim}") });
                }
                if kraus.is_empty() {
                    return Err(Error::UnsupportedStrategy { reason: "empty Kraus list".into() });
                }
                let db = p.dim_b();
                let mut completeness = ComplexMatrix::zeros(db);
                for k in kraus {
                    if k.dim() != db {
                        return Err(Error::DimensionMismatch {
                            context: format!("Kraus operator is {}x{}, dim B is {db}", k.dim(), k.dim()),
                        });
                    }
                    completeness = completeness.add(&k.adjoint().matmul(k));
                }
                let defect = completeness.sub(&ComplexMatrix::identity(db)).frobenius_norm();
                if defect > 1e-8 {
                    return Err(Error::UnsupportedStrategy {
                        reason: format!("channel is not trace preserving (defect {defect:.3e})"),
                    });
                }
                let goal = target(*claim)?;
                let mut branches = Vec::with_capacity(kraus.len());
                for k in kraus {
                    let branch = prepared.apply_b(k);
                    let weight = vec_norm(&branch);
                    let prob = weight * weight;
                    if prob < 1e-15 {
                        branches.push((0.0, 0.0));
                        continue;
                    }
                    let post = BipartiteState::new(p.dim_a(), p.dim_b(), normalize(branch))?;
                    branches.push((prob, snap(goal.inner(&post).norm_sqr())));
                }
                ReceiverPlan::Channel { claim: *claim, branches }
            }
        };
        Ok(Self { plan })
    }

    fn run<R: Rng>(&self, rng: &mut R) -> Transcript {
        let mut draws = 0u32;
        let (outcome_bit, pass_prob) = match &self.plan {
            ReceiverPlan::Measure { q0, pass } => {
                let u: f64 = rng.gen();
                draws += 1;
                let b = if u < *q0 { 0u8 } else { 1u8 };
                (b, pass[b as usize])
            }
            ReceiverPlan::Claim { claim, pass } => (*claim, *pass),
            ReceiverPlan::Channel { claim, branches } => {
                let u: f64 = rng.gen();
                draws += 1;
                let total: f64 = branches.iter().map(|(p, _)| p).sum();
                let mut acc = 0.0;
                let mut pass = branches.last().map(|(_, q)| *q).unwrap_or(0.0);
                for (prob, q) in branches {
                    acc += prob / total;
                    if u < acc {
                        pass = *q;
                        break;
                    }
                }
                (*claim, pass)
            }
        };
        let u: f64 = rng.gen();
        draws += 1;
        let verification_passed = u < pass_prob;
        let winner = match (outcome_bit, verification_passed) {
            (0, true) => Winner::B,
            (0, false) => Winner::CaughtB,
            (1, true) => Winner::A,
            (1, false) => Winner::CaughtA,
            _ => unreachable!("outcome bit is 0 or 1"),
        };
        Transcript { outcome_bit, verification_passed, winner, rng_draws: draws }
    }
}

/// Simulate a single round on sub-stream 0 of the given generator state.
pub fn simulate_round<R: Rng>(
    p: &Protocol,
    alice: &PreparerStrategy,
    bob: &ReceiverStrategy,
    rng: &mut R,
) -> Result<Transcript> {
    Ok(RoundEngine::new(p, alice, bob)?.run(rng))
}

/// Run `rounds` independent rounds; round r draws from sub-stream r of
/// `seed`, so results do not depend on how the batch is sharded.
pub fn run_batch(
    p: &Protocol,
    alice: &PreparerStrategy,
    bob: &ReceiverStrategy,
    rounds: u64,
    seed: u64,
) -> Result<BatchStats> {
    if rounds == 0 {
        return Err(Error::OutOfRange { value: 0.0, lo: 1.0, hi: f64::INFINITY });
    }
    let engine = RoundEngine::new(p, alice, bob)?;
    let mut outcome0 = 0u64;
    let mut wins_a = 0u64;
    let mut wins_b = 0u64;
    let mut caught = 0u64;
    for r in 0..rounds {
        let mut rng = substream(seed, r);
        let t = engine.run(&mut rng);
        if t.outcome_bit == 0 {
            outcome0 += 1;
        }
        match t.winner {
            Winner::A => wins_a += 1,
            Winner::B => wins_b += 1,
            Winner::CaughtA | Winner::CaughtB => caught += 1,
        }
    }
    let n = rounds as f64;
    Ok(BatchStats {
        schema: BATCH_STATS_SCHEMA.to_string(),
        rounds,
        freq_outcome0: outcome0 as f64 / n,
        freq_win_a: wins_a as f64 / n,
        freq_win_b: wins_b as f64 / n,
        freq_caught: caught as f64 / n,
        standard_error: 0.5 / n.sqrt(),
    })
}
