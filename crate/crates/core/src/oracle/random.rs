//! Random instance generators used by audits, searches and test suites.
//!
//! All draws go through an explicit generator state; a fixed seed yields the
//! same instances everywhere.

use num_complex::Complex64;
use rand::Rng;

use crate::cheating::DiagonalProfile;
use crate::error::Result;
use crate::protocol::Protocol;
use crate::qla::{normalize, ComplexMatrix};
use crate::rng::standard_normal;

/// Haar-like random unit vector from normalized complex Gaussian draws.
pub fn random_unit_vector<R: Rng>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let raw: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
        .collect();
    normalize(raw)
}

/// Haar-like random unitary: QR of a complex Gaussian matrix by modified
/// Gram-Schmidt with a re-orthogonalization pass.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
                .collect()
        })
        .collect();
    for j in 0..dim {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k]
                    .iter()
                    .zip(&cols[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for i in 0..dim {
                    let sub = proj * cols[k][i];
                    cols[j][i] -= sub;
                }
            }
        }
        cols[j] = normalize(std::mem::take(&mut cols[j]));
    }
    let mut m = ComplexMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            m.set(i, j, *z);
        }
    }
    m
}

/// Random POVM element W diag(u) W† with u uniform in [0,1]; returns the
/// matrix together with its eigenvalue range.
fn random_povm_element<R: Rng>(dim: usize, rng: &mut R) -> (ComplexMatrix, f64, f64) {
    let w = random_unitary(dim, rng);
    let u: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    let lo = u.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e0 = w.matmul(&ComplexMatrix::from_diag(&u)).matmul(&w.adjoint()).symmetrized();
    (e0, lo, hi)
}

/// Random protocol: Haar-like state, random POVM element. Not fair in
/// general and almost surely not aligned.
pub fn random_protocol<R: Rng>(dim_a: usize, dim_b: usize, rng: &mut R) -> Result<Protocol> {
    let psi = random_unit_vector(dim_a * dim_b, rng);
    let (e0, _, _) = random_povm_element(dim_b, rng);
    Protocol::validate(dim_a, dim_b, psi, e0)
}

/// Random fair protocol: the POVM element is shifted along E0 -> aE0 + bI,
/// with a chosen so the spectrum stays inside [0,1] and b pinning
/// Tr(rho E0) = 1/2 exactly.
pub fn random_fair_protocol<R: Rng>(dim_a: usize, dim_b: usize, rng: &mut R) -> Result<Protocol> {
    let psi = random_unit_vector(dim_a * dim_b, rng);
    let (e0, lo, hi) = random_povm_element(dim_b, rng);
    // p0 of the unshifted element
    let probe = Protocol::validate(dim_a, dim_b, psi.clone(), e0.clone())?;
    let p0 = probe.outcome_prob(0);

    let cap_low = if p0 - lo > 1e-12 { 0.5 / (p0 - lo) } else { f64::INFINITY };
    let cap_high = if hi - p0 > 1e-12 { 0.5 / (hi - p0) } else { f64::INFINITY };
    let alpha = 1.0f64.min(cap_low).min(cap_high);
    let shift = 0.5 - alpha * p0;
    let fair_e0 = e0
        .scale(Complex64::new(alpha, 0.0))
        .add(&ComplexMatrix::identity(dim_b).scale(Complex64::new(shift, 0.0)));
    Protocol::validate(dim_a, dim_b, psi, fair_e0)
}

/// Random fair aligned profile: weights from normalized exponentials, POVM
/// diagonals uniform in [0,1] rescaled to Σ a_i b_i = 1/2; infeasible draws
/// (a rescaled b_i above 1) are rejected and redrawn.
pub fn random_fair_profile<R: Rng>(dim: usize, rng: &mut R) -> DiagonalProfile {
    loop {
        let raw: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            continue;
        }
        let a: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let b: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
        let s: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        if s < 1e-12 {
            continue;
        }
        let scale = 0.5 / s;
        let b: Vec<f64> = b.iter().map(|x| x * scale).collect();
        if b.iter().any(|&x| x > 1.0) {
            continue;
        }
        return DiagonalProfile::new(a, b).expect("rescaled profile is valid by construction");
    }
}
