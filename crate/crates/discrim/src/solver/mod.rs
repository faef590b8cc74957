//! Certified construction of optimal measurements.
//!
//! The solver hypothesizes which subset of states an optimal measurement
//! identifies (`k = 1..4` outcomes suffice for a qubit), constructs the
//! candidate certificate operator `Γ = ½(a𝟙 + b⃗·σ⃗)` for each hypothesis
//! from the tight-constraint algebra, and accepts a candidate only when the
//! full certificate holds: `Γ − p_j·ρ_j ≥ 0` for every state, with equality
//! of the relevant eigenvalue exactly on the identified subset, and a
//! physical measurement (nonnegative completeness weights) reconstructed
//! from the kernels. An accepted candidate is optimal by weak duality, so
//! verification — not formula trust — is what certifies the answer.

mod candidates;
mod povm;
mod search;

pub use candidates::{
    candidate_four, candidate_pair, candidate_three, check_no_measurement, plane_axis,
};
pub use povm::{build_povm, validate_povm, verify_external, PovmBuild, VerifyReport};
pub use search::solve;

use nalgebra::Vector3;

use crate::ensemble::Ensemble;
use crate::pauli::PauliOperator;
use crate::Tolerances;

/// A candidate certificate operator together with its verification data.
///
/// `slacks[j] = (a − p_j) − |b⃗ − w⃗_j|` is twice the smallest eigenvalue of
/// `Γ − p_j·ρ_j`: nonnegative slack for every state makes `Γ` dual feasible,
/// and zero slack marks the states whose outcomes the measurement can use.
#[derive(Clone, Debug)]
pub struct GammaCertificate {
    /// `Tr Γ`; equals the success probability when the certificate is valid.
    pub a: f64,
    /// Pauli vector of `Γ`.
    pub b: Vector3<f64>,
    /// Hypothesized identified states, in ascending index order.
    pub subset: Vec<usize>,
    /// Per-state slack, indexed like the ensemble.
    pub slacks: Vec<f64>,
    /// Whether every slack is admissible and the subset slacks are tight.
    pub valid: bool,
}

impl GammaCertificate {
    /// Evaluate the certificate for `Γ` parameters `(a, b⃗)` against every
    /// state of the ensemble.
    pub fn evaluate(
        a: f64,
        b: Vector3<f64>,
        subset: Vec<usize>,
        ensemble: &Ensemble,
        tol: &Tolerances,
    ) -> Self {
        let slacks: Vec<f64> = ensemble
            .states()
            .iter()
            .map(|s| (a - s.prior()) - (b - s.weighted_point()).norm())
            .collect();
        let feasible = slacks.iter().all(|&s| s >= -tol.psd);
        let tight = subset.iter().all(|&j| slacks[j].abs() <= tol.psd);
        let psd = a >= b.norm() - tol.psd;
        let in_range = a >= ensemble.max_prior() - tol.psd && a <= 1.0 + tol.psd;
        Self {
            a,
            b,
            subset,
            slacks,
            valid: feasible && tight && psd && in_range,
        }
    }

    /// `Γ` as an operator.
    pub fn operator(&self) -> PauliOperator {
        PauliOperator::new(self.a, self.b)
    }

    pub fn k(&self) -> usize {
        self.subset.len()
    }
}

/// One rank-one measurement outcome `π = c·½(𝟙 + m̂·σ⃗)`, tagged with the
/// state it identifies.
#[derive(Clone, Copy, Debug)]
pub struct PovmElement {
    /// Outcome weight `c ∈ [0, 1]`.
    pub weight: f64,
    /// Unit Bloch direction of the projector.
    pub direction: Vector3<f64>,
    /// Index of the identified state.
    pub identifies: usize,
}

impl PovmElement {
    pub fn new(weight: f64, direction: Vector3<f64>, identifies: usize) -> Self {
        Self {
            weight,
            direction,
            identifies,
        }
    }

    /// The element as `(s, t⃗) = (c, c·m̂)`.
    pub fn operator(&self) -> PauliOperator {
        PauliOperator::new(self.weight, self.weight * self.direction)
    }
}

/// Outcome of [`solve`]: the certified optimum and its measurement.
#[derive(Clone, Debug)]
pub struct SolveReport {
    /// Optimal success probability (`= gamma.a`).
    pub p_corr: f64,
    pub gamma: GammaCertificate,
    /// Measurement elements. For `k ≥ 2` there is one per identified state;
    /// the `k = 1` no-measurement strategy is returned as an antipodal
    /// projective pair both assigned to the guessed state, so that the
    /// elements always resolve the identity.
    pub povm: Vec<PovmElement>,
    /// Number of distinct states the measurement identifies.
    pub k: usize,
    /// Candidate certificates evaluated during the (full, deterministic)
    /// subset scan.
    pub candidates_examined: usize,
    /// Diagnostics: duplicate-state merges, equally optimal subsets, weight
    /// system degeneracies.
    pub notes: Vec<String>,
}
