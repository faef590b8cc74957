//! Reference ensembles with known closed forms, used by the sweep command
//! and throughout the test suites.

use nalgebra::Vector3;

use crate::ensemble::{Ensemble, SignalState};
use crate::error::{Error, Result};

/// The mirror-symmetric family: a pure state on the +x axis with prior
/// `1 − 2p`, and two pure states at equatorial angles `±θ` with prior `p`
/// each, `p ∈ [0, ½]`.
pub fn mirror_symmetric(theta: f64, p: f64) -> Result<Ensemble> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::Validation {
            path: "p".into(),
            value: p,
            reason: "shared prior must lie in [0, 1/2]".into(),
        });
    }
    Ensemble::new(vec![
        SignalState::pure(1.0 - 2.0 * p, Vector3::x())?,
        SignalState::pure(p, Vector3::new(theta.cos(), theta.sin(), 0.0))?,
        SignalState::pure(p, Vector3::new(theta.cos(), -theta.sin(), 0.0))?,
    ])
}

/// The trine: three equiprobable pure states at 120° separations on the
/// equator (`θ = 2π/3`, `p = ⅓`).
pub fn trine() -> Ensemble {
    mirror_symmetric(2.0 * std::f64::consts::PI / 3.0, 1.0 / 3.0)
        .expect("trine parameters are valid")
}

/// Four equiprobable pure states at the vertices of a regular tetrahedron.
pub fn tetrahedron() -> Ensemble {
    let s = 1.0 / 3.0f64.sqrt();
    let directions = [
        Vector3::new(s, s, s),
        Vector3::new(s, -s, -s),
        Vector3::new(-s, s, -s),
        Vector3::new(-s, -s, s),
    ];
    Ensemble::new(
        directions
            .into_iter()
            .map(|d| SignalState::pure(0.25, d).expect("valid state"))
            .collect(),
    )
    .expect("tetrahedron parameters are valid")
}

/// Success probability of the optimal two-outcome measurement (the
/// projective measurement distinguishing the two mirror states):
/// `p·(1 + sin θ)`.
pub fn two_element_p_corr(theta: f64, p: f64) -> f64 {
    p * (1.0 + theta.sin())
}

/// Trace of the candidate three-outcome `Γ` for the mirror family,
///
/// ```text
/// (1 − 2p)(p·sin²(θ/2) + 1 − 2p − p·cos²(θ/2)) / (1 − 2p − p·cos²(θ/2)).
/// ```
///
/// This is the optimal success probability only below the two-outcome
/// threshold; above it the formula keeps producing numbers (including
/// values above 1 and, past its pole, negative ones) that no physical
/// measurement attains.
pub fn three_element_p_corr(theta: f64, p: f64) -> f64 {
    let half = 0.5 * theta;
    let sin2 = half.sin().powi(2);
    let cos2 = half.cos().powi(2);
    let denominator = 1.0 - 2.0 * p - p * cos2;
    (1.0 - 2.0 * p) * (p * sin2 + 1.0 - 2.0 * p - p * cos2) / denominator
}

/// The shared prior above which the two-outcome measurement is optimal:
/// `p* = 1 / (2 + cos(θ/2)·(cos(θ/2) + sin(θ/2)))`.
pub fn threshold_prior(theta: f64) -> f64 {
    let c = (0.5 * theta).cos();
    let s = (0.5 * theta).sin();
    1.0 / (2.0 + c * (c + s))
}
