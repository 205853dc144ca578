//! Pure states on a bipartite space and their Schmidt decomposition.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qla::eigen::herm_eig;
use crate::qla::matrix::{partial_trace, ComplexMatrix, Side};

/// Unit vector on a `dim_a * dim_b` composite space.
///
/// Amplitude of `|i>_A |j>_B` lives at index `i * dim_b + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<Complex64>,
}

impl BipartiteState {
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || amplitudes.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "state vector of length {} on a {}x{} composite space",
                    amplitudes.len(),
                    dim_a,
                    dim_b
                ),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::BadNorm { norm });
        }
        Ok(Self { dim_a, dim_b, amplitudes })
    }

    /// Basis state |i>_A |j>_B.
    pub fn basis(dim_a: usize, dim_b: usize, i: usize, j: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim_a * dim_b];
        amplitudes[i * dim_b + j] = Complex64::new(1.0, 0.0);
        Self { dim_a, dim_b, amplitudes }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitude(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[i * self.dim_b + j]
    }

    /// <self|other>.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    /// Reduced density operator of the kept side (`traced_out` is removed).
    pub fn reduced(&self, traced_out: Side) -> ComplexMatrix {
        partial_trace(&self.projector(), self.dim_a, self.dim_b, traced_out)
            .expect("projector dimension matches by construction")
    }

    /// (I ⊗ M)|self>, unnormalized.
    pub fn apply_b(&self, m: &ComplexMatrix) -> Vec<Complex64> {
        debug_assert_eq!(m.dim(), self.dim_b);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for i in 0..self.dim_a {
            for j in 0..self.dim_b {
                let mut acc = Complex64::new(0.0, 0.0);
                for jp in 0..self.dim_b {
                    acc += m.get(j, jp) * self.amplitude(i, jp);
                }
                out[i * self.dim_b + j] = acc;
            }
        }
        out
    }

    /// A-side vector (<r|_B)|self>: component i is Σ_j ψ[i][j] conj(r[j]).
    pub fn contract_b(&self, r: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(r.len(), self.dim_b);
        (0..self.dim_a)
            .map(|i| {
                (0..self.dim_b)
                    .map(|j| self.amplitude(i, j) * r[j].conj())
                    .sum()
            })
            .collect()
    }
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let n = vec_norm(&v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    v
}

/// Schmidt form ψ = Σ λ_i |left_i> ⊗ |right_i>, coefficients descending.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    /// Nonnegative coefficients, descending; (near-)zero terms are dropped.
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<Vec<Complex64>>,
    pub right_vectors: Vec<Vec<Complex64>>,
}

/// Coefficients below this bound are treated as zero rank and dropped.
const SCHMIDT_CUTOFF: f64 = 1e-9;

/// Schmidt decomposition via the B-side reduced density operator.
///
/// The right vectors are eigenvectors of Tr_A |ψ><ψ| and carry the
/// eigensolver's phase convention; each left vector is then pinned by the
/// reconstruction identity, so only the right side is phase-canonical.
pub fn schmidt_decompose(v: &BipartiteState) -> Result<SchmidtForm> {
    let rho_b = v.reduced(Side::A);
    let spec = herm_eig(&rho_b)?;

    let mut terms: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = Vec::new();
    for k in 0..v.dim_b() {
        let right = spec.eigenvector(k);
        let unnormalized_left = v.contract_b(&right);
        let lambda = vec_norm(&unnormalized_left);
        if lambda < SCHMIDT_CUTOFF {
            continue;
        }
        let left = unnormalized_left
            .into_iter()
            .map(|z| z / lambda)
            .collect::<Vec<_>>();
        terms.push((lambda, left, right));
    }

    // descending coefficients; ties ordered by the right vector's rounded key
    terms.sort_by(|a, b| {
        if (a.0 - b.0).abs() < 1e-10 {
            key_of(&a.2).cmp(&key_of(&b.2))
        } else {
            b.0.total_cmp(&a.0)
        }
    });

    let mut form = SchmidtForm {
        coefficients: Vec::with_capacity(terms.len()),
        left_vectors: Vec::with_capacity(terms.len()),
        right_vectors: Vec::with_capacity(terms.len()),
    };
    for (lambda, left, right) in terms {
        form.coefficients.push(lambda);
        form.left_vectors.push(left);
        form.right_vectors.push(right);
    }
    Ok(form)
}

fn key_of(v: &[Complex64]) -> Vec<(i64, i64)> {
    v.iter()
        .map(|z| ((z.re / 1e-9).round() as i64, (z.im / 1e-9).round() as i64))
        .collect()
}
