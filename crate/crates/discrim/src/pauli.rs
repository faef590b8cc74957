//! Hermitian 2×2 operators in Pauli coordinates.
//!
//! Every operator on a qubit is stored as the pair `(s, t⃗)` of the
//! parametrization `A = ½(s·𝟙 + t⃗·σ⃗)`, where `σ⃗ = (σx, σy, σz)` is the
//! vector of Pauli operators. In these coordinates the whole spectral theory
//! is closed-form: `Tr A = s` and the eigenvalues are `½(s ± |t⃗|)`, so `A`
//! is positive semidefinite exactly when `s ≥ |t⃗|`. Nothing in this crate
//! materializes a complex matrix outside of test oracles.

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Relative threshold below which the traceless part is treated as zero and
/// the operator as a multiple of the identity.
const KERNEL_DEGENERACY: f64 = 1e-12;

/// A Hermitian 2×2 operator `½(s·𝟙 + t⃗·σ⃗)`.
///
/// The representation is unique: two operators are equal iff their `(s, t⃗)`
/// pairs are equal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliOperator {
    scalar: f64,
    vector: Vector3<f64>,
}

impl PauliOperator {
    pub fn new(scalar: f64, vector: Vector3<f64>) -> Self {
        Self { scalar, vector }
    }

    /// The identity operator, `(s, t⃗) = (2, 0)`.
    pub fn identity() -> Self {
        Self::new(2.0, Vector3::zeros())
    }

    pub fn zero() -> Self {
        Self::new(0.0, Vector3::zeros())
    }

    /// Rank-one projector onto the pure state with Bloch direction `m̂`.
    pub fn projector(direction: Vector3<f64>) -> Self {
        Self::new(1.0, direction)
    }

    pub fn scalar(&self) -> f64 {
        self.scalar
    }

    pub fn vector(&self) -> Vector3<f64> {
        self.vector
    }

    /// `Tr A`, which is `s` exactly.
    pub fn trace(&self) -> f64 {
        self.scalar
    }

    /// `½(s − |t⃗|)`.
    pub fn min_eigenvalue(&self) -> f64 {
        0.5 * (self.scalar - self.vector.norm())
    }

    /// `½(s + |t⃗|)`.
    pub fn max_eigenvalue(&self) -> f64 {
        0.5 * (self.scalar + self.vector.norm())
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// `sqrt(Tr A²) = sqrt(½(s² + |t⃗|²))`.
    pub fn frobenius_norm(&self) -> f64 {
        (0.5 * (self.scalar * self.scalar + self.vector.norm_squared())).sqrt()
    }

    /// Bloch direction of the eigenstate with the smaller eigenvalue.
    ///
    /// When the smaller eigenvalue is zero this is the kernel state: the
    /// projector `½(𝟙 + m̂·σ⃗)` onto the returned `m̂ = −t⃗/|t⃗|` annihilates
    /// the operator. The caller is responsible for having checked
    /// `min_eigenvalue ≈ 0`; this method only requires a nondegenerate
    /// traceless part.
    pub fn kernel_direction(&self) -> Result<Vector3<f64>> {
        let norm = self.vector.norm();
        if norm < KERNEL_DEGENERACY * self.scalar.abs().max(1.0) {
            return Err(Error::DegenerateKernel { vector_norm: norm });
        }
        Ok(-self.vector / norm)
    }

    /// Inverse of a strictly positive operator.
    ///
    /// With `A = ½(s𝟙 + t⃗·σ⃗)`, the inverse is `½(s'𝟙 + t⃗'·σ⃗)` with
    /// `s' = 4s/(s²−|t⃗|²)` and `t⃗' = −4t⃗/(s²−|t⃗|²)`, so that
    /// `A · A⁻¹ = 𝟙`.
    pub fn invert(&self) -> Result<PauliOperator> {
        let norm = self.vector.norm();
        let gap = self.scalar - norm;
        if gap <= 1e-14 * (self.scalar.abs() + norm).max(1.0) {
            return Err(Error::SingularOperator {
                scalar: self.scalar,
                vector_norm: norm,
            });
        }
        // s² − |t|² factored as gap·(s + |t|) to avoid cancellation.
        let det4 = gap * (self.scalar + norm);
        Ok(PauliOperator::new(
            4.0 * self.scalar / det4,
            self.vector * (-4.0 / det4),
        ))
    }

    /// Product `A·B` split into its Hermitian part and the anti-Hermitian
    /// residual.
    ///
    /// The product of two Pauli-parametrized operators is
    /// `¼[(s₁s₂ + t⃗₁·t⃗₂)𝟙 + (s₁t⃗₂ + s₂t⃗₁)·σ⃗ + i(t⃗₁×t⃗₂)·σ⃗]`.
    /// The first two terms are returned as a `PauliOperator`; the residual
    /// vector `u⃗ = ¼ t⃗₁×t⃗₂` (the product is Hermitian iff `u⃗ = 0`) is
    /// returned alongside for exactness checks.
    pub fn compose(&self, rhs: &PauliOperator) -> (PauliOperator, Vector3<f64>) {
        let hermitian = PauliOperator::new(
            0.5 * (self.scalar * rhs.scalar + self.vector.dot(&rhs.vector)),
            0.5 * (self.scalar * rhs.vector + rhs.scalar * self.vector),
        );
        let residual = 0.25 * self.vector.cross(&rhs.vector);
        (hermitian, residual)
    }
}

impl std::ops::Add for PauliOperator {
    type Output = PauliOperator;
    fn add(self, rhs: PauliOperator) -> PauliOperator {
        PauliOperator::new(self.scalar + rhs.scalar, self.vector + rhs.vector)
    }
}

impl std::ops::Sub for PauliOperator {
    type Output = PauliOperator;
    fn sub(self, rhs: PauliOperator) -> PauliOperator {
        PauliOperator::new(self.scalar - rhs.scalar, self.vector - rhs.vector)
    }
}

impl std::ops::Mul<f64> for PauliOperator {
    type Output = PauliOperator;
    fn mul(self, rhs: f64) -> PauliOperator {
        PauliOperator::new(self.scalar * rhs, self.vector * rhs)
    }
}
