//! Dense square complex matrices, row-major, f64 precision.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which subsystem of a bipartite operator to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Dense `dim x dim` complex matrix; entry `(i, j)` lives at `i * dim + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                context: format!("matrix with {} entries cannot be {dim}x{dim}", entries.len()),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * dim + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Projector |v><v| of a (not necessarily normalized) vector.
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in v {
            for b in v {
                entries.push(a * b.conj());
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self { dim: self.dim, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self { dim: self.dim, entries }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let entries = self.entries.iter().map(|a| a * factor).collect();
        Self { dim: self.dim, entries }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.entries[i * n + k];
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += aik * other.entries[k * n + j];
                }
            }
        }
        out
    }

    /// A v for a column vector v.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(self.dim, v.len());
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.entries[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max_ij |M[i][j] - conj(M[j][i])|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Errors unless max |M[i][j] - conj(M[j][i])| <= 1e-8 * max(1, maxabs(M)).
    pub fn check_hermitian(&self) -> Result<()> {
        let tolerance = 1e-8 * self.max_abs().max(1.0);
        let deviation = self.hermiticity_deviation();
        if deviation > tolerance {
            return Err(Error::NotHermitian { deviation, tolerance });
        }
        Ok(())
    }

    /// (M + M†)/2; removes rounding skew from products of Hermitian factors.
    pub fn symmetrized(&self) -> Self {
        self.add(&self.adjoint()).scale(Complex64::new(0.5, 0.0))
    }

    /// Frobenius norm of the commutator [self, other].
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        self.matmul(other).sub(&other.matmul(self)).frobenius_norm()
    }
}

/// Partial trace of an operator on a `dim_a * dim_b` composite space.
///
/// `side` names the subsystem that is traced out; the result acts on the
/// remaining one. Composite index convention: `i * dim_b + j`.
pub fn partial_trace(m: &ComplexMatrix, dim_a: usize, dim_b: usize, side: Side) -> Result<ComplexMatrix> {
    if m.dim() != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            context: format!(
                "operator of dimension {} on a {}x{} composite space",
                m.dim(),
                dim_a,
                dim_b
            ),
        });
    }
    match side {
        Side::A => {
            let mut out = ComplexMatrix::zeros(dim_b);
            for j in 0..dim_b {
                for jp in 0..dim_b {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..dim_a {
                        acc += m.get(i * dim_b + j, i * dim_b + jp);
                    }
                    out.set(j, jp, acc);
                }
            }
            Ok(out)
        }
        Side::B => {
            let mut out = ComplexMatrix::zeros(dim_a);
            for i in 0..dim_a {
                for ip in 0..dim_a {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..dim_b {
                        acc += m.get(i * dim_b + j, ip * dim_b + j);
                    }
                    out.set(i, ip, acc);
                }
            }
            Ok(out)
        }
    }
}
