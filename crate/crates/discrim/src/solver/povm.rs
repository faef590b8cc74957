//! Measurement reconstruction from a certificate, and verification of
//! externally supplied measurements.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::Tolerances;

use super::{GammaCertificate, PovmElement};

/// A reconstructed measurement plus any degeneracy notes.
#[derive(Clone, Debug)]
pub struct PovmBuild {
    pub elements: Vec<PovmElement>,
    pub notes: Vec<String>,
}

/// Verdict of [`verify_external`].
#[derive(Clone, Debug)]
pub struct VerifyReport {
    /// True when the measurement satisfies the optimality certificate.
    pub optimal: bool,
    /// Success probability achieved by the measurement (`= Tr Γ`).
    pub achieved: f64,
    /// The operator `Σ_j p_j·ρ_j·π_j` (Hermitian part).
    pub gamma: PauliOperator,
    /// Norm of the anti-Hermitian residual of that sum; zero for any
    /// measurement satisfying the optimality structure.
    pub hermiticity_residual: f64,
    /// Per-state slacks of `Γ − p_j·ρ_j`.
    pub slacks: Vec<f64>,
    /// State with the most negative slack.
    pub worst_index: usize,
    pub worst_slack: f64,
}

/// Born-rule success probability `Σ_j c_j·½(p_j + w⃗_j·m̂_j)` in Pauli
/// coordinates.
fn born_success(ensemble: &Ensemble, elements: &[PovmElement]) -> f64 {
    elements
        .iter()
        .map(|e| {
            let state = ensemble.state(e.identifies);
            e.weight * 0.5 * (state.prior() + state.weighted_point().dot(&e.direction))
        })
        .sum()
}

/// Check that `elements` form a measurement: positive weights of at most 1,
/// unit directions, indices in range, and resolution of the identity
/// (`Σ c_j = 2` and `Σ c_j·m̂_j = 0` in Pauli coordinates).
pub fn validate_povm(ensemble: &Ensemble, elements: &[PovmElement], tol: &Tolerances) -> Result<()> {
    if elements.is_empty() {
        return Err(Error::NotAPovm {
            reason: "no elements".into(),
        });
    }
    for (index, e) in elements.iter().enumerate() {
        if e.weight < -tol.povm || e.weight > 1.0 + tol.povm {
            return Err(Error::NotAPovm {
                reason: format!("element {index} has weight {} outside [0, 1]", e.weight),
            });
        }
        if (e.direction.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::NotAPovm {
                reason: format!("element {index} direction is not a unit vector"),
            });
        }
        if e.identifies >= ensemble.len() {
            return Err(Error::NotAPovm {
                reason: format!(
                    "element {index} identifies state {} of a {}-state ensemble",
                    e.identifies,
                    ensemble.len()
                ),
            });
        }
    }
    let weight_sum: f64 = elements.iter().map(|e| e.weight).sum();
    let vector_sum: Vector3<f64> = elements.iter().map(|e| e.weight * e.direction).sum();
    if (weight_sum - 2.0).abs() > tol.povm {
        return Err(Error::NotAPovm {
            reason: format!("weights sum to {weight_sum}, expected 2"),
        });
    }
    if vector_sum.norm() > tol.povm {
        return Err(Error::NotAPovm {
            reason: format!(
                "weighted directions sum to {:.3e}, expected 0",
                vector_sum.norm()
            ),
        });
    }
    Ok(())
}

/// Reconstruct the measurement certified by `cert`.
///
/// Each identified state's outcome direction is the kernel state of
/// `Γ − p_j·ρ_j`, which in Pauli coordinates is `(w⃗_j − b⃗)/|w⃗_j − b⃗|`. The
/// weights then solve the completeness system `Σ c_j = 2`,
/// `Σ c_j·m̂_j = 0⃗`: fixed at `(1, 1)` for the projective pair, an
/// overdetermined-but-consistent least-squares solve for three outcomes, and
/// a generically unique 4×4 solve for four (minimum-norm when degenerate,
/// with a note). Candidates whose weights come out negative admit no
/// physical measurement and are rejected.
///
/// The caller must pass a valid certificate.
pub fn build_povm(
    ensemble: &Ensemble,
    cert: &GammaCertificate,
    tol: &Tolerances,
) -> Result<PovmBuild> {
    assert!(cert.valid, "build_povm requires a valid certificate");
    let k = cert.subset.len();
    assert!((2..=4).contains(&k), "build_povm handles 2 to 4 outcomes");

    let gamma = cert.operator();
    let mut directions = Vec::with_capacity(k);
    for &j in &cert.subset {
        let slack_op = gamma - ensemble.state(j).weighted_operator();
        directions.push(slack_op.kernel_direction()?);
    }

    let mut notes = Vec::new();
    let weights: Vec<f64> = if k == 2 {
        let residual = (directions[0] + directions[1]).norm();
        if residual > tol.povm {
            return Err(Error::InconsistentSystem { residual });
        }
        vec![1.0, 1.0]
    } else {
        let mut system = DMatrix::<f64>::zeros(4, k);
        for (col, d) in directions.iter().enumerate() {
            system[(0, col)] = 1.0;
            system[(1, col)] = d.x;
            system[(2, col)] = d.y;
            system[(3, col)] = d.z;
        }
        let rhs = DVector::from_column_slice(&[2.0, 0.0, 0.0, 0.0]);
        let svd = system.clone().svd(true, true);
        if k == 4 && svd.rank(1e-12) < 4 {
            notes.push(format!(
                "completeness system for subset {:?} is rank-deficient; minimum-norm weights",
                cert.subset
            ));
        }
        let solution = svd
            .solve(&rhs, 1e-12)
            .map_err(|_| Error::SingularLinearSystem {
                context: "completeness system",
            })?;
        let residual = (&system * &solution - &rhs).norm();
        if residual > tol.povm {
            return Err(Error::InconsistentSystem { residual });
        }
        solution.iter().copied().collect()
    };

    for (idx, &weight) in weights.iter().enumerate() {
        if weight < -tol.povm {
            return Err(Error::NegativeWeight {
                index: cert.subset[idx],
                weight,
            });
        }
    }

    let elements: Vec<PovmElement> = cert
        .subset
        .iter()
        .zip(directions.iter().zip(&weights))
        .map(|(&j, (d, &c))| PovmElement::new(c.clamp(0.0, 1.0), *d, j))
        .collect();

    // The reconstructed measurement must reproduce Tr Γ through the Born
    // rule; this is exact when the subset slacks are exactly tight.
    let born = born_success(ensemble, &elements);
    let residual = (born - cert.a).abs();
    if residual > tol.povm {
        return Err(Error::InconsistentSystem { residual });
    }

    Ok(PovmBuild { elements, notes })
}

/// Verify an externally supplied measurement against the optimality
/// certificate.
///
/// Assembles `Γ = Σ_j p_j·ρ_j·π_j` in Pauli coordinates, reports the
/// anti-Hermitian residual of the sum, and checks `Γ − p_j·ρ_j ≥ 0` for
/// every state. The measurement is optimal exactly when the residual
/// vanishes and every slack is nonnegative (within tolerance); otherwise the
/// most violated state is reported.
pub fn verify_external(
    ensemble: &Ensemble,
    elements: &[PovmElement],
    tol: &Tolerances,
) -> Result<VerifyReport> {
    validate_povm(ensemble, elements, tol)?;

    let mut gamma = PauliOperator::zero();
    let mut skew = Vector3::zeros();
    for e in elements {
        let weighted = ensemble.state(e.identifies).weighted_operator();
        let (hermitian, residual) = weighted.compose(&e.operator());
        gamma = gamma + hermitian;
        skew += residual;
    }
    let hermiticity_residual = skew.norm();

    let a = gamma.trace();
    let b = gamma.vector();
    let slacks: Vec<f64> = ensemble
        .states()
        .iter()
        .map(|s| (a - s.prior()) - (b - s.weighted_point()).norm())
        .collect();
    let (worst_index, worst_slack) = slacks
        .iter()
        .copied()
        .enumerate()
        .min_by(|x, y| x.1.partial_cmp(&y.1).expect("finite slacks"))
        .expect("nonempty ensemble");

    Ok(VerifyReport {
        optimal: hermiticity_residual <= tol.povm && worst_slack >= -tol.psd,
        achieved: a,
        gamma,
        hermiticity_residual,
        slacks,
        worst_index,
        worst_slack,
    })
}
