//! The protocol instance and its honest run.
//!
//! One round:
//! 1. Alice prepares |ψ> on H_A ⊗ H_B and sends the B part to Bob.
//! 2. Bob measures {E0, E1 = I - E0} on his part and announces the
//!    outcome bit b.
//! 3. The party favored by the other outcome receives the remaining system
//!    and verifies that the joint state is ψ_b = (I ⊗ sqrt(E_b))|ψ> / √p_b.
//!
//! A `Protocol` value is validated once and immutable afterwards; E1 is
//! never stored, it is always derived as I - E0.

pub mod codec;

pub use codec::{aligned_protocol, parse_protocol, serialize_aligned, serialize_protocol};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qla::{herm_eig, normalize, psd_sqrt, vec_norm, BipartiteState, ComplexMatrix, Side};

/// Default width of the fairness window around p0 = 1/2.
pub const FAIRNESS_TOL: f64 = 1e-6;

/// Probability floor under which a conditional state is undefined.
pub const DEGENERATE_OUTCOME_TOL: f64 = 1e-12;

/// Validated instance: state, POVM element, and the derived honest cache.
#[derive(Debug, Clone)]
pub struct Protocol {
    dim_a: usize,
    dim_b: usize,
    psi: BipartiteState,
    e0: ComplexMatrix,
    rho: ComplexMatrix,
    p0: f64,
    p1: f64,
}

/// Outcome of the fairness test |p0 - 1/2| <= tol.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FairnessVerdict {
    pub p0: f64,
    pub fair: bool,
}

impl Protocol {
    /// Gatekeeper: checks norms, Hermiticity, the POVM constraint
    /// 0 <= E0 <= I, and populates the derived cache (rho, p0, p1).
    pub fn validate(
        dim_a: usize,
        dim_b: usize,
        psi_raw: Vec<Complex64>,
        e0_raw: ComplexMatrix,
    ) -> Result<Self> {
        let psi = BipartiteState::new(dim_a, dim_b, psi_raw)?;
        if e0_raw.dim() != dim_b {
            return Err(Error::DimensionMismatch {
                context: format!("E0 is {}x{} but dim B is {dim_b}", e0_raw.dim(), e0_raw.dim()),
            });
        }
        e0_raw.check_hermitian()?;
        let spec = herm_eig(&e0_raw)?;
        for &w in &spec.eigenvalues {
            if !(-1e-8..=1.0 + 1e-8).contains(&w) {
                return Err(Error::NotPovm { eigenvalue: w });
            }
        }
        let rho = psi.reduced(Side::A);
        let p0 = rho.matmul(&e0_raw).trace().re;
        let p1 = 1.0 - p0;
        Ok(Self { dim_a, dim_b, psi, e0: e0_raw, rho, p0, p1 })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn psi(&self) -> &BipartiteState {
        &self.psi
    }

    pub fn e0(&self) -> &ComplexMatrix {
        &self.e0
    }

    /// I - E0.
    pub fn e1(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.dim_b).sub(&self.e0)
    }

    /// POVM element for outcome `b`.
    pub fn povm_element(&self, b: u8) -> ComplexMatrix {
        assert!(b <= 1, "outcome bit must be 0 or 1");
        if b == 0 {
            self.e0.clone()
        } else {
            self.e1()
        }
    }

    /// Density operator of Bob's part, Tr_A |ψ><ψ|.
    pub fn reduced_state(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// <ψ| I ⊗ E_b |ψ>.
    pub fn outcome_prob(&self, b: u8) -> f64 {
        assert!(b <= 1, "outcome bit must be 0 or 1");
        if b == 0 {
            self.p0
        } else {
            self.p1
        }
    }

    pub fn fairness(&self, tol: f64) -> FairnessVerdict {
        FairnessVerdict { p0: self.p0, fair: (self.p0 - 0.5).abs() <= tol }
    }

    pub fn is_fair(&self) -> bool {
        self.fairness(FAIRNESS_TOL).fair
    }

    /// Honest conditional state ψ_b = (I ⊗ sqrt(E_b))|ψ> / √p_b.
    pub fn post_measurement_state(&self, b: u8) -> Result<BipartiteState> {
        let p = self.outcome_prob(b);
        if p < DEGENERATE_OUTCOME_TOL {
            return Err(Error::DegenerateOutcome { bit: b, prob: p });
        }
        let root = psd_sqrt(&self.povm_element(b))?;
        let amplitudes = normalize(self.psi.apply_b(&root));
        BipartiteState::new(self.dim_a, self.dim_b, amplitudes)
    }

    /// Schmidt weight of |ψ> along a B-side vector: ||(<r|_B)|ψ>||.
    pub fn b_weight(&self, r: &[Complex64]) -> f64 {
        vec_norm(&self.psi.contract_b(r))
    }
}
