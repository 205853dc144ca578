//! Hermitian eigendecomposition and spectral functions.
//!
//! The solver is a cyclic complex Jacobi iteration. Dimensions in this crate
//! stay small (desk scale, d <= 64), where Jacobi is simple, accurate to a
//! few ulps, and fully deterministic: identical input bits give identical
//! output bits, which the golden tests rely on.
//!
//! Output canonicalization:
//! - eigenvalues ascending;
//! - inside an eigenvalue tie (gap < 1e-10) vectors are ordered by
//!   lexicographic comparison of their component lists rounded to 1e-9;
//! - each eigenvector is scaled so its largest-magnitude component is real
//!   positive (first component wins magnitude ties).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qla::matrix::ComplexMatrix;

/// Result of a Hermitian eigendecomposition: `H = V diag(w) V†`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as matrix columns, same order.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// V f(w) V† for a real function of the eigenvalues.
    pub fn map_rebuild(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk == 0.0 {
                continue;
            }
            let v = self.eigenvectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    let add = v[i] * v[j].conj() * fk;
                    out.set(i, j, out.get(i, j) + add);
                }
            }
        }
        out.symmetrized()
    }
}

const MAX_SWEEPS: usize = 40;
/// Gap below which two eigenvalues count as tied for ordering purposes.
const TIE_GAP: f64 = 1e-10;
/// Grid used when rounding components for the tie-break comparison.
const TIE_ROUND: f64 = 1e-9;

fn offdiag_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Scale the vector so its largest-magnitude component is real positive.
pub fn canonicalize_phase(v: &mut [Complex64]) {
    let mut k = 0;
    let mut best = -1.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best {
            best = m;
            k = i;
        }
    }
    if best <= 0.0 {
        return;
    }
    let phase = v[k] / best;
    let rot = phase.conj();
    for z in v.iter_mut() {
        *z *= rot;
    }
    // kill the residual imaginary dust on the pivot component
    v[k] = Complex64::new(v[k].norm(), 0.0);
}

fn rounded_key(v: &[Complex64]) -> Vec<(i64, i64)> {
    v.iter()
        .map(|z| ((z.re / TIE_ROUND).round() as i64, (z.im / TIE_ROUND).round() as i64))
        .collect()
}

/// Eigendecomposition of a Hermitian matrix.
pub fn herm_eig(h: &ComplexMatrix) -> Result<Spectrum> {
    h.check_hermitian()?;
    let n = h.dim();
    let scale = h.frobenius_norm().max(1.0);
    let mut a = h.symmetrized();
    let mut v = ComplexMatrix::identity(n);

    for _sweep in 0..MAX_SWEEPS {
        if offdiag_norm(&a) <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let m = apq.norm();
                if m == 0.0 {
                    continue;
                }
                let f = apq / m; // e^{i phi}
                let alpha = a.get(p, p).re;
                let gamma = a.get(q, q).re;
                let tau = (gamma - alpha) / (2.0 * m);
                let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = -sign / (tau.abs() + f64::hypot(1.0, tau));
                let c = 1.0 / f64::hypot(1.0, t);
                let s = t * c;

                // A <- J† A J with J[p][p]=c, J[p][q]=-s, J[q][p]=conj(f) s, J[q][q]=conj(f) c.
                let fs = f.conj() * s;
                let fc = f.conj() * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c + akq * fs);
                    a.set(k, q, akp * (-s) + akq * fc);
                }
                let gs = f * s;
                let gc = f * c;
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c + aqk * gs);
                    a.set(q, k, apk * (-s) + aqk * gc);
                }
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
                a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c + vkq * fs);
                    v.set(k, q, vkp * (-s) + vkq * fc);
                }
            }
        }
    }

    let mut columns: Vec<Vec<Complex64>> = (0..n).map(|j| v.column(j)).collect();
    for col in columns.iter_mut() {
        canonicalize_phase(col);
    }
    let eigenvalues: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[i].total_cmp(&eigenvalues[j]));

    // re-sort runs of tied eigenvalues by the rounded-component key
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[order[end]] - eigenvalues[order[end - 1]] < TIE_GAP {
            end += 1;
        }
        if end - start > 1 {
            order[start..end].sort_by_key(|&i| rounded_key(&columns[i]));
        }
        start = end;
    }

    let sorted_values: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (slot, &i) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, slot, columns[i][row]);
        }
    }

    Ok(Spectrum { eigenvalues: sorted_values, eigenvectors: vectors })
}

/// Eigenvalue clip threshold for PSD inputs: rounding in Gram-type products
/// produces tiny negatives, which are flattened to zero.
pub fn psd_clip_threshold(h: &ComplexMatrix) -> f64 {
    1e-10 * h.frobenius_norm().max(1.0)
}

fn psd_spectrum(h: &ComplexMatrix) -> Result<Spectrum> {
    let spec = herm_eig(h)?;
    let threshold = psd_clip_threshold(h);
    if let Some(&lo) = spec.eigenvalues.first() {
        if lo < -threshold {
            return Err(Error::NotPsd { eigenvalue: lo, threshold: -threshold });
        }
    }
    Ok(spec)
}

/// Hermitian PSD square root: R with R² = H, negative dust clipped to zero.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = psd_spectrum(h)?;
    Ok(spec.map_rebuild(|w| w.max(0.0).sqrt()))
}

/// Tr sqrt(H) for PSD H, i.e. the sum of square roots of its eigenvalues.
pub fn trace_sqrt_psd(h: &ComplexMatrix) -> Result<f64> {
    let spec = psd_spectrum(h)?;
    Ok(spec.eigenvalues.iter().map(|&w| w.max(0.0).sqrt()).sum())
}

fn check_density(m: &ComplexMatrix) -> Result<Spectrum> {
    if m.check_hermitian().is_err() {
        return Err(Error::NotDensity {
            reason: format!("not Hermitian (deviation {:.3e})", m.hermiticity_deviation()),
        });
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(Error::NotDensity { reason: format!("trace is {:.12} + {:.3e}i, expected 1", tr.re, tr.im) });
    }
    let spec = herm_eig(m)?;
    let threshold = psd_clip_threshold(m);
    if let Some(&lo) = spec.eigenvalues.first() {
        if lo < -threshold {
            return Err(Error::NotDensity { reason: format!("negative eigenvalue {lo:.3e}") });
        }
    }
    Ok(spec)
}

/// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))².
pub fn fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            context: format!("fidelity of {}x{} vs {}x{} operators", rho.dim(), rho.dim(), sigma.dim(), sigma.dim()),
        });
    }
    let spec = check_density(rho)?;
    check_density(sigma)?;
    let root = spec.map_rebuild(|w| w.max(0.0).sqrt());
    let inner = root.matmul(sigma).matmul(&root).symmetrized();
    let t = trace_sqrt_psd(&inner)?;
    Ok((t * t).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::matrix::ComplexMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruction_error(h: &ComplexMatrix, spec: &Spectrum) -> f64 {
        spec.map_rebuild(|w| w).sub(h).frobenius_norm()
    }

    #[test]
    fn identity_spectrum() {
        let spec = herm_eig(&ComplexMatrix::identity(2)).unwrap();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-14);
        let vtv = spec.eigenvectors.adjoint().matmul(&spec.eigenvectors);
        assert!(vtv.sub(&ComplexMatrix::identity(2)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn diagonal_matrix_spectrum_is_sorted() {
        let h = ComplexMatrix::from_diag(&[0.9, 0.3]);
        let spec = herm_eig(&h).unwrap();
        assert_eq!(spec.eigenvalues, vec![0.3, 0.9]);
        // standard basis vectors, reordered to match
        assert!((spec.eigenvectors.get(1, 0).re - 1.0).abs() < 1e-14);
        assert!((spec.eigenvectors.get(0, 1).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_x_diagonalization() {
        let h = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let spec = herm_eig(&h).unwrap();
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let minus = spec.eigenvector(0);
        let plus = spec.eigenvector(1);
        // phase convention puts the first component real positive
        assert!((minus[0].re - s).abs() < 1e-14 && (minus[1].re + s).abs() < 1e-14);
        assert!((plus[0].re - s).abs() < 1e-14 && (plus[1].re - s).abs() < 1e-14);
        assert!(reconstruction_error(&h, &spec) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(herm_eig(&h), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn psd_sqrt_of_diagonal() {
        let r = psd_sqrt(&ComplexMatrix::from_diag(&[4.0, 9.0])).unwrap();
        assert!((r.get(0, 0).re - 2.0).abs() < 1e-12);
        assert!((r.get(1, 1).re - 3.0).abs() < 1e-12);
        assert!(r.get(0, 1).norm() < 1e-12);
    }

    #[test]
    fn psd_sqrt_of_identity_and_projector() {
        let id = ComplexMatrix::identity(3);
        assert!(psd_sqrt(&id).unwrap().sub(&id).frobenius_norm() < 1e-12);
        // a rank-one projector is its own square root
        let p = ComplexMatrix::new(2, vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)]).unwrap();
        let r = psd_sqrt(&p).unwrap();
        assert!(r.sub(&p).frobenius_norm() < 1e-12);
        assert!(r.matmul(&r).sub(&p).frobenius_norm() < 1e-12);
    }

    #[test]
    fn psd_sqrt_rejects_indefinite() {
        let h = ComplexMatrix::from_diag(&[1.0, -0.5]);
        assert!(matches!(psd_sqrt(&h), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn trace_sqrt_values() {
        assert!((trace_sqrt_psd(&ComplexMatrix::from_diag(&[0.25, 0.25])).unwrap() - 1.0).abs() < 1e-12);
        assert!((trace_sqrt_psd(&ComplexMatrix::from_diag(&[1.0, 0.0])).unwrap() - 1.0).abs() < 1e-12);
        assert!((trace_sqrt_psd(&ComplexMatrix::from_diag(&[0.81, 0.01])).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let rho = ComplexMatrix::from_diag(&[0.3, 0.7]);
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);

        let zero = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let one = ComplexMatrix::from_diag(&[0.0, 1.0]);
        assert!(fidelity(&zero, &one).unwrap() < 1e-15);

        let mixed = ComplexMatrix::from_diag(&[0.5, 0.5]);
        assert!((fidelity(&zero, &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fidelity_rejects_non_density() {
        let rho = ComplexMatrix::from_diag(&[0.3, 0.7]);
        let not_normalized = ComplexMatrix::from_diag(&[0.3, 0.8]);
        assert!(matches!(fidelity(&rho, &not_normalized), Err(Error::NotDensity { .. })));
        let indefinite = ComplexMatrix::from_diag(&[1.5, -0.5]);
        assert!(matches!(fidelity(&rho, &indefinite), Err(Error::NotDensity { .. })));
    }
}
