//! Born-rule evaluation and Monte Carlo simulation of measurements.
//!
//! Randomness is reproducible: a fixed seed fully determines every run. The
//! generator is ChaCha8 with explicit stream splitting — stream 0 drives the
//! sender's state draws, stream 1 the receiver's outcome draws, and stream 2
//! the random-measurement search — so adding samples or trials never
//! reshuffles earlier draws.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

use crate::ensemble::Ensemble;
use crate::error::Result;
use crate::solver::{validate_povm, PovmElement};
use crate::Tolerances;

/// Exact Born-rule success probability of a measurement,
/// `Σ_j c_j·½(p_j + w⃗_j·m̂_j)` over the elements' identified states.
pub fn primal_value(
    ensemble: &Ensemble,
    elements: &[PovmElement],
    tol: &Tolerances,
) -> Result<f64> {
    validate_povm(ensemble, elements, tol)?;
    Ok(elements
        .iter()
        .map(|e| {
            let state = ensemble.state(e.identifies);
            e.weight * 0.5 * (state.prior() + state.weighted_point().dot(&e.direction))
        })
        .sum())
}

/// Best Born-rule value over seeded random 2–4 outcome measurements, a weak
/// lower bound on the optimum (and therefore on any dual value).
///
/// Outcome directions are drawn uniformly; completeness weights are solved
/// exactly and draws with negative weights discarded. Each outcome is
/// labeled with the state it identifies best. The guess-the-likeliest
/// strategy is always included, so the bound is at least `max_j p_j`.
pub fn random_povm_lower_bound(ensemble: &Ensemble, trials: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);

    let likeliest = (0..ensemble.len())
        .max_by(|&x, &y| {
            ensemble
                .state(x)
                .prior()
                .partial_cmp(&ensemble.state(y).prior())
                .expect("finite priors")
        })
        .expect("nonempty ensemble");
    let mut best = ensemble.state(likeliest).prior();

    for _ in 0..trials {
        let outcomes = rng.gen_range(2..=4usize);
        let directions = match outcomes {
            2 => {
                let d = random_unit(&mut rng);
                Some(vec![(d, 1.0), (-d, 1.0)])
            }
            3 => random_planar_triple(&mut rng),
            _ => random_quadruple(&mut rng),
        };
        let Some(elements) = directions else {
            continue;
        };
        let value: f64 = elements
            .iter()
            .map(|(direction, weight)| {
                // Best label for this outcome: the state most likely to
                // have produced it.
                ensemble
                    .states()
                    .iter()
                    .map(|s| {
                        weight
                            * 0.5
                            * (s.prior() + s.weighted_point().dot(direction))
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum();
        best = best.max(value);
    }
    best
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    let v: [f64; 3] = UnitSphere.sample(rng);
    Vector3::from(v)
}

fn random_planar_triple(rng: &mut ChaCha8Rng) -> Option<Vec<(Vector3<f64>, f64)>> {
    let normal = random_unit(rng);
    let seed = random_unit(rng);
    let in_plane = seed - normal * seed.dot(&normal);
    if in_plane.norm() < 1e-6 {
        return None;
    }
    let u = in_plane.normalize();
    let v = normal.cross(&u);
    let angles: Vec<f64> = (0..3)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    let directions: Vec<Vector3<f64>> = angles
        .iter()
        .map(|a| u * a.cos() + v * a.sin())
        .collect();
    let system = Matrix3::new(
        1.0,
        1.0,
        1.0,
        directions[0].dot(&u),
        directions[1].dot(&u),
        directions[2].dot(&u),
        directions[0].dot(&v),
        directions[1].dot(&v),
        directions[2].dot(&v),
    );
    let weights = system.lu().solve(&Vector3::new(2.0, 0.0, 0.0))?;
    if weights.iter().any(|&c| c < 0.0) {
        return None;
    }
    Some(directions.into_iter().zip(weights.iter().copied()).collect())
}

fn random_quadruple(rng: &mut ChaCha8Rng) -> Option<Vec<(Vector3<f64>, f64)>> {
    let directions: Vec<Vector3<f64>> = (0..4)
        .map(|_| random_unit(rng))
        .collect();
    let mut system = Matrix4::<f64>::zeros();
    for (col, d) in directions.iter().enumerate() {
        system[(0, col)] = 1.0;
        system[(1, col)] = d.x;
        system[(2, col)] = d.y;
        system[(3, col)] = d.z;
    }
    let weights = system
        .lu()
        .solve(&Vector4::new(2.0, 0.0, 0.0, 0.0))?;
    if weights.iter().any(|&c| c < 0.0) {
        return None;
    }
    Some(directions.into_iter().zip(weights.iter().copied()).collect())
}

/// Simulate the communication scenario: draw a state from the priors, draw
/// an outcome from the exact Born distribution, count a success when the
/// outcome identifies the drawn state. Returns the empirical success rate
/// and its binomial standard error. Deterministic for a fixed seed.
pub fn monte_carlo_simulate(
    ensemble: &Ensemble,
    elements: &[PovmElement],
    samples: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    assert!(samples >= 1, "at least one sample required");
    validate_povm(ensemble, elements, tol)?;

    let prior_cdf: Vec<f64> = ensemble
        .priors()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();

    // Exact outcome distribution per state: P(ℓ|i) = c_ℓ·½(1 + t⃗_i·m̂_ℓ),
    // normalized by its sum (1 up to the completeness residual).
    let outcome_cdfs: Vec<Vec<f64>> = ensemble
        .states()
        .iter()
        .map(|state| {
            let t = state.purity() * state.direction();
            let probs: Vec<f64> = elements
                .iter()
                .map(|e| (e.weight * 0.5 * (1.0 + t.dot(&e.direction))).max(0.0))
                .collect();
            let total: f64 = probs.iter().sum();
            probs
                .iter()
                .scan(0.0, |acc, p| {
                    *acc += p / total;
                    Some(*acc)
                })
                .collect()
        })
        .collect();

    let mut state_rng = ChaCha8Rng::seed_from_u64(seed);
    state_rng.set_stream(0);
    let mut outcome_rng = ChaCha8Rng::seed_from_u64(seed);
    outcome_rng.set_stream(1);

    let draw = |cdf: &[f64], u: f64| -> usize {
        cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
    };

    let mut successes = 0u64;
    for _ in 0..samples {
        let sent = draw(&prior_cdf, state_rng.gen::<f64>());
        let outcome = draw(&outcome_cdfs[sent], outcome_rng.gen::<f64>());
        if elements[outcome].identifies == sent {
            successes += 1;
        }
    }

    let rate = successes as f64 / samples as f64;
    let stderr = (rate * (1.0 - rate) / samples as f64).sqrt();
    Ok((rate, stderr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{minimize_dual, DEFAULT_MAX_ITERS, DEFAULT_TOL};
    use crate::ensemble::SignalState;
    use crate::family;
    use crate::solver::solve;
    use approx::assert_relative_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn guess_first() -> Vec<PovmElement> {
        vec![
            PovmElement::new(1.0, Vector3::z(), 0),
            PovmElement::new(1.0, -Vector3::z(), 0),
        ]
    }

    #[test]
    fn guessing_scores_the_guessed_prior() {
        let e = Ensemble::new(vec![
            SignalState::maximally_mixed(0.9).unwrap(),
            SignalState::maximally_mixed(0.1).unwrap(),
        ])
        .unwrap();
        assert_relative_eq!(primal_value(&e, &guess_first(), &tol()).unwrap(), 0.9);
    }

    #[test]
    fn trine_measurement_scores_two_thirds() {
        let e = family::trine();
        let report = solve(&e, &tol()).unwrap();
        assert_relative_eq!(
            primal_value(&e, &report.povm, &tol()).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn mirror_pair_scores_the_closed_form() {
        let theta = 2.0 * std::f64::consts::PI / 3.0;
        let e = family::mirror_symmetric(theta, 0.35).unwrap();
        let elements = vec![
            PovmElement::new(1.0, Vector3::y(), 1),
            PovmElement::new(1.0, -Vector3::y(), 2),
        ];
        assert_relative_eq!(
            primal_value(&e, &elements, &tol()).unwrap(),
            family::two_element_p_corr(theta, 0.35),
            epsilon = 1e-12
        );
    }

    #[test]
    fn random_measurements_respect_weak_duality() {
        let e = Ensemble::new(vec![
            SignalState::new(0.4, 0.9, Vector3::x()).unwrap(),
            SignalState::new(0.35, 0.6, Vector3::z()).unwrap(),
            SignalState::new(0.25, 0.8, Vector3::new(0.0, 0.6, -0.8)).unwrap(),
        ])
        .unwrap();
        let bound = random_povm_lower_bound(&e, 2000, 9);
        let dual = minimize_dual(&e, DEFAULT_MAX_ITERS, DEFAULT_TOL, 9);
        assert!(bound <= dual.value + 1e-9);
        assert!(bound >= e.max_prior());
    }

    #[test]
    fn orthogonal_pair_simulates_perfectly() {
        let e = Ensemble::new(vec![
            SignalState::pure(0.5, Vector3::z()).unwrap(),
            SignalState::pure(0.5, -Vector3::z()).unwrap(),
        ])
        .unwrap();
        let report = solve(&e, &tol()).unwrap();
        let (rate, stderr) =
            monte_carlo_simulate(&e, &report.povm, 100_000, 7, &tol()).unwrap();
        assert_eq!(rate, 1.0);
        assert_eq!(stderr, 0.0);
    }

    #[test]
    fn guessing_simulates_the_prior() {
        let e = Ensemble::new(vec![
            SignalState::maximally_mixed(0.9).unwrap(),
            SignalState::maximally_mixed(0.1).unwrap(),
        ])
        .unwrap();
        let (rate, stderr) =
            monte_carlo_simulate(&e, &guess_first(), 200_000, 11, &tol()).unwrap();
        assert!((rate - 0.9).abs() <= 4.0 * stderr.max(1e-9));
    }

    #[test]
    fn trine_simulation_matches_the_born_value() {
        let e = family::trine();
        let report = solve(&e, &tol()).unwrap();
        let (rate, stderr) =
            monte_carlo_simulate(&e, &report.povm, 200_000, 13, &tol()).unwrap();
        assert!((rate - 2.0 / 3.0).abs() <= 4.0 * stderr);
    }

    #[test]
    fn simulation_is_deterministic_per_seed() {
        let e = family::trine();
        let report = solve(&e, &tol()).unwrap();
        let a = monte_carlo_simulate(&e, &report.povm, 10_000, 21, &tol()).unwrap();
        let b = monte_carlo_simulate(&e, &report.povm, 10_000, 21, &tol()).unwrap();
        assert_eq!(a, b);
    }
}
