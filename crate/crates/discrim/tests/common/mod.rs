//! Helpers shared by the integration test suites.

use discrim::ensemble::{Ensemble, SignalState};
use nalgebra::Vector3;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

pub fn random_direction(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    let v: [f64; 3] = UnitSphere.sample(rng);
    Vector3::from(v)
}

/// A random ensemble with priors uniform on the simplex (normalized
/// exponentials), purities uniform on [0, 1], and directions uniform on the
/// sphere.
pub fn random_ensemble(rng: &mut ChaCha8Rng, n: usize) -> Ensemble {
    let raw: Vec<f64> = (0..n)
        .map(|_| -(rng.gen::<f64>().max(1e-12)).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let states: Vec<SignalState> = raw
        .iter()
        .map(|&e| {
            SignalState::new(e / total, rng.gen::<f64>(), random_direction(rng))
                .expect("generated state is valid")
        })
        .collect();
    Ensemble::new(states).expect("generated ensemble is valid")
}
