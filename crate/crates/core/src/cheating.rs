//! Closed-form cheat analysis.
//!
//! For a protocol (|ψ>, E0) with Bob-side reduction ρ, the maximum winning
//! probabilities under optimal cheating admit closed forms:
//!
//! - `paper_pa` = 2 Tr(ρ E0²) — the preparer bound, keyed to E0;
//! - `paper_pb` = 2 Tr(sqrt(ρ E0 ρ))² — the receiver bound, keyed to E0.
//!
//! Every protocol can be brought to an aligned normal form whose Bob-side
//! Schmidt vectors are eigenvectors of E0; alignment preserves p0 and
//! `paper_pa` and never increases `paper_pb`. On the aligned diagonal
//! profile (a, b) the forms reduce to scalar sums, and Hölder's inequality
//! (‖x‖₃ ‖y‖₃⁄₂ ≥ <x, y> with x_i = a_i^{1/3} b_i^{2/3}, y_i = a_i^{2/3} b_i^{1/3})
//! gives the floor paper_pa · paper_pb ≥ 4 (Σ a_i b_i)³, which is 1/2 for
//! fair instances.
//!
//! The operational quantities `preparer_max` / `receiver_max` are keyed to
//! an explicit target outcome w instead; `oracle::audit_labels` documents
//! empirically which of them each closed form equals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::codec::aligned_protocol;
use crate::protocol::{Protocol, DEGENERATE_OUTCOME_TOL, FAIRNESS_TOL};
use crate::qla::{fidelity, herm_eig, normalize, psd_sqrt, trace_sqrt_psd, BipartiteState, ComplexMatrix, Side};

/// Commutator tolerance deciding whether rho and E0 share an eigenbasis.
pub const ALIGNED_COMMUTATOR_TOL: f64 = 1e-8;

/// Eigenvalue gap below which E0 eigenvalues count as degenerate.
const DEGENERACY_GAP: f64 = 1e-10;

/// Paired diagonals (a, b) of rho and E0 in their shared eigenbasis,
/// ordered by descending b (ties by descending a).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalProfile {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl DiagonalProfile {
    /// Validates Σa = 1 (within 1e-9) and b in [0,1]; entries within 1e-8 of
    /// the valid range are clamped onto it.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::DimensionMismatch {
                context: format!("profile with {} weights and {} POVM diagonals", a.len(), b.len()),
            });
        }
        let mut a = a;
        let mut b = b;
        for x in a.iter_mut() {
            if *x < 0.0 {
                if *x < -1e-8 {
                    return Err(Error::OutOfRange { value: *x, lo: 0.0, hi: 1.0 });
                }
                *x = 0.0;
            }
        }
        let total: f64 = a.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::OutOfRange { value: total, lo: 1.0, hi: 1.0 });
        }
        for x in b.iter_mut() {
            if !(-1e-8..=1.0 + 1e-8).contains(x) {
                return Err(Error::OutOfRange { value: *x, lo: 0.0, hi: 1.0 });
            }
            *x = x.clamp(0.0, 1.0);
        }
        Ok(Self { a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Honest probability of outcome 0: Σ a_i b_i.
    pub fn honest_p0(&self) -> f64 {
        self.a.iter().zip(&self.b).map(|(a, b)| a * b).sum()
    }

    /// 2 Σ a_i b_i², the Σ-form of `paper_pa`.
    pub fn paper_pa(&self) -> f64 {
        2.0 * self.a.iter().zip(&self.b).map(|(a, b)| a * b * b).sum::<f64>()
    }

    /// 2 (Σ a_i √b_i)², the Σ-form of `paper_pb`.
    pub fn paper_pb(&self) -> f64 {
        let s: f64 = self.a.iter().zip(&self.b).map(|(a, b)| a * b.sqrt()).sum();
        2.0 * s * s
    }

    /// Expand into the aligned protocol ψ = Σ √a_i |i>|i>, E0 = diag(b).
    pub fn to_protocol(&self) -> Result<Protocol> {
        aligned_protocol(&self.a, &self.b)
    }
}

/// 4 (Σ a_i b_i)³: the Hölder chain floor under paper_pa · paper_pb.
pub fn holder_floor(profile: &DiagonalProfile) -> f64 {
    let s = profile.honest_p0();
    4.0 * s * s * s
}

/// 2 Tr(ρ E0²).
pub fn paper_pa(p: &Protocol) -> f64 {
    let e0 = p.e0();
    2.0 * p.reduced_state().matmul(&e0.matmul(e0)).trace().re
}

/// 2 Tr(sqrt(ρ E0 ρ))²; the product is symmetrized before the eigenstep.
pub fn paper_pb(p: &Protocol) -> Result<f64> {
    let rho = p.reduced_state();
    let m = rho.matmul(p.e0()).matmul(rho).symmetrized();
    let t = trace_sqrt_psd(&m)?;
    Ok(2.0 * t * t)
}

/// E0 eigenbasis canonicalized against rho, ordered by descending
/// eigenvalue: inside each degenerate E0 eigenspace the basis is rotated to
/// diagonalize the compression of rho (ties ordered by descending weight).
fn refined_e0_basis(e0: &ComplexMatrix, rho: &ComplexMatrix) -> Result<Vec<(f64, f64, Vec<Complex64>)>> {
    let spec = herm_eig(e0)?;
    let n = e0.dim();
    let weight = |v: &[Complex64]| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += v[i].conj() * rho.get(i, j) * v[j];
            }
        }
        acc.re
    };

    let mut triples: Vec<(f64, f64, Vec<Complex64>)> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && spec.eigenvalues[end] - spec.eigenvalues[end - 1] < DEGENERACY_GAP {
            end += 1;
        }
        let g = end - start;
        if g == 1 {
            let v = spec.eigenvector(start);
            triples.push((spec.eigenvalues[start], weight(&v), v));
        } else {
            let basis: Vec<Vec<Complex64>> = (start..end).map(|k| spec.eigenvector(k)).collect();
            let mut compression = ComplexMatrix::zeros(g);
            for x in 0..g {
                for y in 0..g {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        for j in 0..n {
                            acc += basis[x][i].conj() * rho.get(i, j) * basis[y][j];
                        }
                    }
                    compression.set(x, y, acc);
                }
            }
            let cspec = herm_eig(&compression.symmetrized())?;
            let mut group: Vec<(f64, f64, Vec<Complex64>)> = Vec::with_capacity(g);
            for y in 0..g {
                let mut v = vec![Complex64::new(0.0, 0.0); n];
                for x in 0..g {
                    let w = cspec.eigenvectors.get(x, y);
                    for i in 0..n {
                        v[i] += w * basis[x][i];
                    }
                }
                crate::qla::canonicalize_phase(&mut v);
                group.push((spec.eigenvalues[start + y], cspec.eigenvalues[y], v));
            }
            // descending weight inside the eigenspace
            group.reverse();
            triples.extend(group);
        }
        start = end;
    }
    triples.reverse(); // descending eigenvalue
    Ok(triples)
}

/// Lemma-style alignment transform: keep E0, replace the state by
/// ψ̃ = Σ λ_i |i> |φ_i> where φ_i are E0 eigenvectors and λ_i the Schmidt
/// weights of |ψ> along them. Preserves p0 and `paper_pa`; never increases
/// `paper_pb`. The output A side has dimension dim_b.
pub fn align(p: &Protocol) -> Result<Protocol> {
    let triples = refined_e0_basis(p.e0(), p.reduced_state())?;
    let db = p.dim_b();
    let mut psi = vec![Complex64::new(0.0, 0.0); db * db];
    for (i, (_, _, phi)) in triples.iter().enumerate() {
        let lambda = p.b_weight(phi);
        for j in 0..db {
            psi[i * db + j] = phi[j] * lambda;
        }
    }
    Protocol::validate(db, db, psi, p.e0().clone())
}

/// Diagonals of rho and E0 in their shared eigenbasis.
///
/// Errors with `NotAligned` when ‖[ρ, E0]‖_F exceeds the tolerance.
pub fn diagonal_profile(p: &Protocol) -> Result<DiagonalProfile> {
    let rho = p.reduced_state();
    let norm = rho.commutator_norm(p.e0());
    if norm > ALIGNED_COMMUTATOR_TOL {
        return Err(Error::NotAligned { norm });
    }
    let triples = refined_e0_basis(p.e0(), rho)?;
    let b: Vec<f64> = triples.iter().map(|t| t.0).collect();
    let a: Vec<f64> = triples.iter().map(|t| t.1).collect();
    DiagonalProfile::new(a, b)
}

/// Optimal state-preparation cheat toward outcome w:
/// Tr(ρ E_w²) / p_w = ||(I ⊗ sqrt(E_w)) ψ_w||², or 0 when p_w is degenerate.
pub fn preparer_max(p: &Protocol, w: u8) -> f64 {
    let pw = p.outcome_prob(w);
    if pw < DEGENERATE_OUTCOME_TOL {
        return 0.0;
    }
    let ew = p.povm_element(w);
    p.reduced_state().matmul(&ew.matmul(&ew)).trace().re / pw
}

/// The state realizing `preparer_max`: ψ' ∝ (I ⊗ sqrt(E_w)) ψ_w.
pub fn optimal_preparer_state(p: &Protocol, w: u8) -> Result<BipartiteState> {
    let root = psd_sqrt(&p.povm_element(w))?;
    let psi_w = p.post_measurement_state(w)?;
    BipartiteState::new(p.dim_a(), p.dim_b(), normalize(psi_w.apply_b(&root)))
}

/// Optimal receiver-side channel cheat toward outcome w: the Uhlmann
/// fidelity of the A-side reductions of |ψ> and |ψ_w>, which is the best
/// step-3 pass probability over all channels on B. 0 when p_w is degenerate.
pub fn receiver_max(p: &Protocol, w: u8) -> Result<f64> {
    if p.outcome_prob(w) < DEGENERATE_OUTCOME_TOL {
        return Ok(0.0);
    }
    let sigma = p.psi().reduced(Side::B);
    let sigma_w = p.post_measurement_state(w)?.reduced(Side::B);
    fidelity(&sigma, &sigma_w)
}

/// Which frontier construction to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FrontierFamily {
    /// Equality locus of the Hölder chain: paper_pa · paper_pb = 1/2.
    #[serde(rename = "paper")]
    Paper,
    /// Equality locus of the operational product
    /// preparer_max(·,0) · receiver_max(·,1) = 1/2.
    #[serde(rename = "operational")]
    Operational,
}

impl std::str::FromStr for FrontierFamily {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "paper" => Ok(Self::Paper),
            "operational" => Ok(Self::Operational),
            other => Err(format!("unknown family {other:?} (expected paper|operational)")),
        }
    }
}

/// Profile of a fair protocol hitting the product floor exactly.
///
/// Paper family with c = target: b = (c, 0), a = (1/(2c), 1 - 1/(2c)), so
/// paper_pa = c, paper_pb = 1/(2c), product exactly 1/2. At c = 1/2 the
/// support collapses onto b_i = 1/2.
///
/// Operational family with t = 1 - target: b = (1, t),
/// a = ((1/2 - t)/(1 - t), (1/2)/(1 - t)), so preparer_max(·,0) = target,
/// receiver_max(·,1) = 1/(2·target), product exactly 1/2.
pub fn frontier_profile(target: f64, family: FrontierFamily) -> Result<DiagonalProfile> {
    if !(0.5..=1.0).contains(&target) {
        return Err(Error::OutOfRange { value: target, lo: 0.5, hi: 1.0 });
    }
    match family {
        FrontierFamily::Paper => {
            if target == 0.5 {
                return DiagonalProfile::new(vec![0.5, 0.5], vec![0.5, 0.5]);
            }
            let a1 = 1.0 / (2.0 * target);
            DiagonalProfile::new(vec![a1, 1.0 - a1], vec![target, 0.0])
        }
        FrontierFamily::Operational => {
            let t = 1.0 - target;
            let a1 = (0.5 - t) / (1.0 - t);
            let a2 = 0.5 / (1.0 - t);
            DiagonalProfile::new(vec![a1, a2], vec![1.0, t])
        }
    }
}

/// Frontier protocol for the given target (see `frontier_profile`).
pub fn frontier(target: f64, family: FrontierFamily) -> Result<Protocol> {
    frontier_profile(target, family)?.to_protocol()
}

/// Verdict on the fair-product bound paper_pa · paper_pb >= 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundVerdict {
    #[serde(rename = "holds")]
    Holds,
    #[serde(rename = "violated")]
    Violated,
    /// The bound assumes fairness; unfair instances are analyzable but the
    /// theorem check does not apply.
    #[serde(rename = "not-applicable")]
    NotApplicable,
}

pub const CHEAT_REPORT_SCHEMA: &str = "coinlab.cheat-report/1";

/// Full closed-form analysis of one protocol.
#[derive(Debug, Clone, Serialize)]
pub struct CheatReport {
    pub schema: String,
    pub p0: f64,
    pub paper_pa: f64,
    pub paper_pb: f64,
    pub op_preparer_0: f64,
    pub op_preparer_1: f64,
    pub op_receiver_0: f64,
    pub op_receiver_1: f64,
    pub holder_floor: f64,
    pub product: f64,
    pub fair_bound_holds: BoundVerdict,
}

/// Populate a `CheatReport`: closed forms, operational values for both
/// targets, the Hölder floor of the aligned profile, and the bound verdict.
pub fn analyze(p: &Protocol, fairness_tol: f64) -> Result<CheatReport> {
    let p0 = p.outcome_prob(0);
    let pa = paper_pa(p);
    let pb = paper_pb(p)?;
    let product = pa * pb;
    let floor = holder_floor(&diagonal_profile(&align(p)?)?);
    let fair = (p0 - 0.5).abs() <= fairness_tol;
    let fair_bound_holds = if !fair {
        BoundVerdict::NotApplicable
    } else if product >= 0.5 - 1e-9 {
        BoundVerdict::Holds
    } else {
        BoundVerdict::Violated
    };
    Ok(CheatReport {
        schema: CHEAT_REPORT_SCHEMA.to_string(),
        p0,
        paper_pa: pa,
        paper_pb: pb,
        op_preparer_0: preparer_max(p, 0),
        op_preparer_1: preparer_max(p, 1),
        op_receiver_0: receiver_max(p, 0)?,
        op_receiver_1: receiver_max(p, 1)?,
        holder_floor: floor,
        product,
        fair_bound_holds,
    })
}

/// `analyze` with the default fairness tolerance.
pub fn analyze_default(p: &Protocol) -> Result<CheatReport> {
    analyze(p, FAIRNESS_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::BipartiteState;

    fn profile(a: &[f64], b: &[f64]) -> DiagonalProfile {
        DiagonalProfile::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn aligned(a: &[f64], b: &[f64]) -> Protocol {
        aligned_protocol(a, b).unwrap()
    }

    #[test]
    fn paper_pa_examples() {
        assert!((paper_pa(&aligned(&[0.5, 0.5], &[0.5, 0.5])) - 0.5).abs() < 1e-12);
        assert!((paper_pa(&aligned(&[0.5, 0.5], &[1.0, 0.0])) - 1.0).abs() < 1e-12);
        assert!((paper_pa(&aligned(&[0.5, 0.5], &[0.9, 0.1])) - 0.82).abs() < 1e-12);
    }

    #[test]
    fn paper_pb_examples() {
        assert!((paper_pb(&aligned(&[0.5, 0.5], &[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-12);
        assert!((paper_pb(&aligned(&[0.5, 0.5], &[1.0, 0.0])).unwrap() - 0.5).abs() < 1e-12);
        assert!((paper_pb(&aligned(&[0.5, 0.5], &[0.9, 0.1])).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn matrix_and_sum_forms_agree_on_aligned_instances() {
        for (a, b) in [
            (vec![0.5, 0.5], vec![0.9, 0.1]),
            (vec![0.2, 0.3, 0.5], vec![1.0, 0.5, 0.0]),
            (vec![1.0], vec![0.3]),
        ] {
            let p = aligned(&a, &b);
            let prof = profile(&a, &b);
            assert!((paper_pa(&p) - prof.paper_pa()).abs() < 1e-12);
            assert!((paper_pb(&p).unwrap() - prof.paper_pb()).abs() < 1e-12);
        }
    }

    #[test]
    fn align_flattens_misaligned_plus_state() {
        // psi = |0>_A (|0>+|1>)/sqrt2, E0 = diag(1,0)
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = vec![
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let p = Protocol::validate(2, 2, psi, ComplexMatrix::from_diag(&[1.0, 0.0])).unwrap();
        assert!((paper_pa(&p) - 1.0).abs() < 1e-12);
        assert!((paper_pb(&p).unwrap() - 1.0).abs() < 1e-12);

        let q = align(&p).unwrap();
        assert!((q.outcome_prob(0) - p.outcome_prob(0)).abs() < 1e-12);
        assert!((paper_pa(&q) - 1.0).abs() < 1e-12);
        assert!((paper_pb(&q).unwrap() - 0.5).abs() < 1e-12);

        let prof = diagonal_profile(&q).unwrap();
        assert!((prof.a()[0] - 0.5).abs() < 1e-12 && (prof.a()[1] - 0.5).abs() < 1e-12);
        assert!((prof.b()[0] - 1.0).abs() < 1e-12 && prof.b()[1].abs() < 1e-12);
    }

    #[test]
    fn align_is_a_fixed_point_on_aligned_instances() {
        let p = aligned(&[0.3, 0.7], &[0.8, 0.2]);
        let q = align(&p).unwrap();
        for (x, y) in q.psi().amplitudes().iter().zip(p.psi().amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn align_keeps_degenerate_povm_values_unchanged() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = vec![
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(s, 0.0),
        ];
        let p = Protocol::validate(2, 2, bell, ComplexMatrix::from_diag(&[0.5, 0.5])).unwrap();
        let q = align(&p).unwrap();
        assert!((paper_pa(&q) - 0.5).abs() < 1e-12);
        assert!((paper_pb(&q).unwrap() - 1.0).abs() < 1e-12);
        let prof = diagonal_profile(&q).unwrap();
        assert!((prof.a()[0] - 0.5).abs() < 1e-12);
        assert!((prof.b()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn diagonal_profile_requires_commuting_pair() {
        // rho = |+><+| does not commute with diag(1,0)
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = vec![
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let p = Protocol::validate(2, 2, psi, ComplexMatrix::from_diag(&[1.0, 0.0])).unwrap();
        assert!(matches!(diagonal_profile(&p), Err(Error::NotAligned { .. })));
    }

    #[test]
    fn diagonal_profile_round_trips_shorthand() {
        let p = aligned(&[0.5, 0.5], &[1.0, 0.0]);
        let prof = diagonal_profile(&p).unwrap();
        assert!((prof.a()[0] - 0.5).abs() < 1e-12);
        assert!((prof.b()[0] - 1.0).abs() < 1e-12);
        assert!(prof.b()[1].abs() < 1e-12);
    }

    #[test]
    fn holder_floor_examples() {
        let p1 = profile(&[0.5, 0.5], &[1.0, 0.0]);
        assert!((holder_floor(&p1) - 0.5).abs() < 1e-12);
        assert!((p1.paper_pa() * p1.paper_pb() - 0.5).abs() < 1e-12);

        let p2 = profile(&[0.5, 0.5], &[0.5, 0.5]);
        assert!((holder_floor(&p2) - 0.5).abs() < 1e-12);
        assert!((p2.paper_pa() * p2.paper_pb() - 0.5).abs() < 1e-12);

        let p3 = profile(&[0.5, 0.5], &[0.9, 0.1]);
        assert!((holder_floor(&p3) - 0.5).abs() < 1e-12);
        assert!((p3.paper_pa() * p3.paper_pb() - 0.656).abs() < 1e-12);
    }

    #[test]
    fn preparer_max_examples() {
        // fair instance: cheating toward 0 equals 2 Tr(rho E0²)
        let p = aligned(&[0.5, 0.5], &[0.9, 0.1]);
        assert!((preparer_max(&p, 0) - paper_pa(&p)).abs() < 1e-12);

        let unbiased = aligned(&[0.5, 0.5], &[0.5, 0.5]);
        assert!((preparer_max(&unbiased, 0) - 0.5).abs() < 1e-12);

        // b = (1, 0): outcome 1 arises only from |11>, which the preparer can
        // send outright, so forcing it succeeds with certainty.
        let proj = aligned(&[0.5, 0.5], &[1.0, 0.0]);
        assert!((preparer_max(&proj, 1) - 1.0).abs() < 1e-12);
        assert!((preparer_max(&proj, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn receiver_max_examples() {
        let p = aligned(&[0.5, 0.5], &[1.0, 0.0]);
        assert!((receiver_max(&p, 0).unwrap() - 0.5).abs() < 1e-12);

        let unbiased = aligned(&[0.5, 0.5], &[0.5, 0.5]);
        assert!((receiver_max(&unbiased, 0).unwrap() - 1.0).abs() < 1e-9);

        let q = aligned(&[0.5, 0.5], &[0.9, 0.1]);
        assert!((receiver_max(&q, 0).unwrap() - 0.8).abs() < 1e-9);
    }

    #[test]
    fn frontier_paper_family_examples() {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let p = frontier(c, FrontierFamily::Paper).unwrap();
        assert!((paper_pa(&p) - c).abs() < 1e-12);
        assert!((paper_pb(&p).unwrap() - c).abs() < 1e-12);
        let prof = frontier_profile(c, FrontierFamily::Paper).unwrap();
        assert!((prof.a()[0] - 0.707_106_8).abs() < 1e-7);
        assert!((prof.a()[1] - 0.292_893_2).abs() < 1e-7);

        let top = frontier(1.0, FrontierFamily::Paper).unwrap();
        assert!((paper_pa(&top) - 1.0).abs() < 1e-12);
        assert!((paper_pb(&top).unwrap() - 0.5).abs() < 1e-12);

        let bottom = frontier(0.5, FrontierFamily::Paper).unwrap();
        let bprof = frontier_profile(0.5, FrontierFamily::Paper).unwrap();
        assert_eq!(bprof.b(), &[0.5, 0.5]);
        assert!((paper_pa(&bottom) - 0.5).abs() < 1e-12);
        assert!((paper_pb(&bottom).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frontier_operational_family_hits_half() {
        for target in [0.5, 0.6, std::f64::consts::FRAC_1_SQRT_2, 0.85, 1.0] {
            let p = frontier(target, FrontierFamily::Operational).unwrap();
            assert!(p.is_fair());
            let product = preparer_max(&p, 0) * receiver_max(&p, 1).unwrap();
            assert!((product - 0.5).abs() < 1e-9, "target {target}: product {product}");
            assert!((preparer_max(&p, 0) - target).abs() < 1e-9);
        }
    }

    #[test]
    fn frontier_rejects_out_of_range() {
        assert!(matches!(frontier(0.49, FrontierFamily::Paper), Err(Error::OutOfRange { .. })));
        assert!(matches!(frontier(1.01, FrontierFamily::Paper), Err(Error::OutOfRange { .. })));
        assert!(matches!(frontier(f64::NAN, FrontierFamily::Paper), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn analyze_reports_the_frontier_as_tight() {
        let p = frontier(std::f64::consts::FRAC_1_SQRT_2, FrontierFamily::Paper).unwrap();
        let report = analyze_default(&p).unwrap();
        assert!((report.product - 0.5).abs() < 1e-12);
        assert_eq!(report.fair_bound_holds, BoundVerdict::Holds);
        assert!((report.product - report.paper_pa * report.paper_pb).abs() < 1e-15);
    }

    #[test]
    fn analyze_slack_instance() {
        let p = aligned(&[0.5, 0.5], &[0.9, 0.1]);
        let report = analyze_default(&p).unwrap();
        assert!((report.product - 0.656).abs() < 1e-12);
        assert!((report.holder_floor - 0.5).abs() < 1e-12);
        assert_eq!(report.fair_bound_holds, BoundVerdict::Holds);
    }

    #[test]
    fn analyze_unfair_instance_is_not_applicable() {
        let p = aligned(&[1.0], &[0.3]);
        let report = analyze_default(&p).unwrap();
        assert!((report.p0 - 0.3).abs() < 1e-12);
        assert_eq!(report.fair_bound_holds, BoundVerdict::NotApplicable);
        assert!((report.holder_floor - 4.0 * 0.027).abs() < 1e-12);
        assert!(report.product >= report.holder_floor - 1e-9);
        assert!((report.paper_pa - 0.18).abs() < 1e-12);
        assert!((report.paper_pb - 0.6).abs() < 1e-12);
    }

    #[test]
    fn cheat_report_serializes_flat() {
        let p = aligned(&[0.5, 0.5], &[0.9, 0.1]);
        let report = analyze_default(&p).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["schema"], CHEAT_REPORT_SCHEMA);
        assert_eq!(json["fair_bound_holds"], "holds");
        assert!(json["op_receiver_0"].as_f64().is_some());
    }

    #[test]
    fn post_measurement_state_matches_receiver_geometry() {
        // receiver cheat value for the unbiased POVM comes from psi_0 = psi
        let p = aligned(&[0.4, 0.6], &[0.5, 0.5]);
        let psi0 = p.post_measurement_state(0).unwrap();
        let overlap = p.psi().inner(&psi0).norm_sqr();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alignment_never_raises_the_receiver_form() {
        let s = 0.8f64.sqrt();
        let t = 0.2f64.sqrt();
        // entangled state with off-axis B vectors
        let psi = crate::qla::normalize(vec![
            Complex64::new(s / 2.0, 0.1),
            Complex64::new(t, -0.2),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.5, 0.25),
        ]);
        let e0 = ComplexMatrix::new(
            2,
            vec![
                Complex64::new(0.7, 0.0),
                Complex64::new(0.2, 0.1),
                Complex64::new(0.2, -0.1),
                Complex64::new(0.4, 0.0),
            ],
        )
        .unwrap();
        let p = Protocol::validate(2, 2, psi, e0).unwrap();
        let q = align(&p).unwrap();
        assert!((paper_pa(&q) - paper_pa(&p)).abs() < 1e-9);
        assert!(paper_pb(&q).unwrap() <= paper_pb(&p).unwrap() + 1e-9);
        assert!((q.outcome_prob(0) - p.outcome_prob(0)).abs() < 1e-9);
    }

    #[test]
    fn bipartite_state_accessor_smoke() {
        let p = aligned(&[0.5, 0.5], &[1.0, 0.0]);
        let st: &BipartiteState = p.psi();
        assert_eq!(st.dim_a(), 2);
    }
}
