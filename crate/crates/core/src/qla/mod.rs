//! Self-contained dense complex linear algebra for small dimensions:
//! Hermitian eigendecomposition, PSD spectral functions, partial trace,
//! Schmidt decomposition and Uhlmann fidelity.
//!
//! Everything here is a pure function of its inputs; values are immutable
//! after construction and safe to share across threads.

mod eigen;
mod matrix;
mod state;

pub use eigen::{canonicalize_phase, fidelity, herm_eig, psd_clip_threshold, psd_sqrt, trace_sqrt_psd, Spectrum};
pub use matrix::{partial_trace, ComplexMatrix, Side};
pub use state::{normalize, schmidt_decompose, vec_norm, BipartiteState, SchmidtForm};
