//! Signal ensembles: prior probabilities plus Bloch data for each state.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

/// Tolerance on the prior sum at ingestion.
const PRIOR_SUM_TOL: f64 = 1e-9;
/// Tolerance on direction normalization.
const DIRECTION_TOL: f64 = 1e-12;
/// Two states are duplicates when both their priors and weighted Bloch
/// points agree within this threshold.
const DUPLICATE_TOL: f64 = 1e-12;

/// One alphabet state: a prior probability and a qubit density operator in
/// its purity/direction form `ρ = ½(𝟙 + α·r̂·σ⃗)`.
///
/// `α = 1` is a pure state, `α = 0` the maximally mixed state (the stored
/// direction is then physically irrelevant).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignalState {
    prior: f64,
    purity: f64,
    direction: Vector3<f64>,
}

impl SignalState {
    pub fn new(prior: f64, purity: f64, direction: Vector3<f64>) -> Result<Self> {
        if !prior.is_finite() || !(0.0..=1.0).contains(&prior) {
            return Err(Error::Validation {
                path: "prior".into(),
                value: prior,
                reason: "prior must lie in [0, 1]".into(),
            });
        }
        if !purity.is_finite() || !(0.0..=1.0 + 1e-12).contains(&purity) {
            return Err(Error::Validation {
                path: "purity".into(),
                value: purity,
                reason: "purity must lie in [0, 1]".into(),
            });
        }
        let norm = direction.norm();
        if (norm - 1.0).abs() > DIRECTION_TOL {
            return Err(Error::Validation {
                path: "direction".into(),
                value: norm,
                reason: "direction must be a unit vector".into(),
            });
        }
        Ok(Self {
            prior,
            purity: purity.min(1.0),
            direction: direction / norm,
        })
    }

    /// A pure state (`α = 1`) along `direction`.
    pub fn pure(prior: f64, direction: Vector3<f64>) -> Result<Self> {
        Self::new(prior, 1.0, direction)
    }

    /// The maximally mixed state (`α = 0`).
    pub fn maximally_mixed(prior: f64) -> Result<Self> {
        Self::new(prior, 0.0, Vector3::z())
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    pub fn purity(&self) -> f64 {
        self.purity
    }

    pub fn direction(&self) -> Vector3<f64> {
        self.direction
    }

    /// The weighted Bloch point `w⃗ = p·α·r̂`, the Pauli-vector part of
    /// `p·ρ`. All solver algebra runs on these points.
    pub fn weighted_point(&self) -> Vector3<f64> {
        self.prior * self.purity * self.direction
    }

    /// The density operator `ρ = ½(𝟙 + α·r̂·σ⃗)` as `(s, t⃗) = (1, α·r̂)`.
    pub fn density_operator(&self) -> PauliOperator {
        PauliOperator::new(1.0, self.purity * self.direction)
    }

    /// The prior-weighted operator `p·ρ` as `(s, t⃗) = (p, w⃗)`.
    pub fn weighted_operator(&self) -> PauliOperator {
        PauliOperator::new(self.prior, self.weighted_point())
    }

    fn with_prior(&self, prior: f64) -> Self {
        Self { prior, ..*self }
    }
}

/// An ordered alphabet of signal states with unit total prior.
///
/// Construction renormalizes the priors exactly and merges duplicate states
/// (equal priors and weighted Bloch points), since duplicates make pair
/// candidates degenerate and the subset search redundant. `origins` maps
/// each stored state back to the input indices it absorbed.
#[derive(Clone, Debug)]
pub struct Ensemble {
    states: Vec<SignalState>,
    origins: Vec<Vec<usize>>,
}

impl Ensemble {
    pub fn new(input: Vec<SignalState>) -> Result<Self> {
        if input.is_empty() {
            return Err(Error::Validation {
                path: "states".into(),
                value: 0.0,
                reason: "ensemble must contain at least one state".into(),
            });
        }
        let sum: f64 = input.iter().map(|s| s.prior).sum();
        if (sum - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::Validation {
                path: "states".into(),
                value: sum,
                reason: "priors must sum to 1".into(),
            });
        }

        let mut states: Vec<SignalState> = Vec::with_capacity(input.len());
        let mut origins: Vec<Vec<usize>> = Vec::with_capacity(input.len());
        for (index, state) in input.into_iter().enumerate() {
            let state = state.with_prior(state.prior / sum);
            let duplicate = states.iter().position(|kept| {
                (kept.prior - state.prior).abs() <= DUPLICATE_TOL
                    && (kept.weighted_point() - state.weighted_point()).norm() <= DUPLICATE_TOL
            });
            match duplicate {
                Some(at) => {
                    let merged_prior = states[at].prior + state.prior;
                    states[at] = states[at].with_prior(merged_prior);
                    origins[at].push(index);
                }
                None => {
                    states.push(state);
                    origins.push(vec![index]);
                }
            }
        }
        Ok(Self { states, origins })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[SignalState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &SignalState {
        &self.states[index]
    }

    /// Input indices merged into stored state `index`.
    pub fn origins(&self, index: usize) -> &[usize] {
        &self.origins[index]
    }

    /// True when ingestion collapsed duplicate states.
    pub fn merged_duplicates(&self) -> bool {
        self.origins.iter().any(|group| group.len() > 1)
    }

    /// Human-readable notes about merged duplicates, empty when none.
    pub fn merge_notes(&self) -> Vec<String> {
        self.origins
            .iter()
            .enumerate()
            .filter(|(_, group)| group.len() > 1)
            .map(|(index, group)| {
                format!(
                    "input states {:?} are duplicates; merged into state {} with prior {}",
                    group,
                    index,
                    self.states[index].prior()
                )
            })
            .collect()
    }

    pub fn priors(&self) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(|s| s.prior)
    }

    pub fn weighted_points(&self) -> Vec<Vector3<f64>> {
        self.states.iter().map(|s| s.weighted_point()).collect()
    }

    pub fn max_prior(&self) -> f64 {
        self.states.iter().map(|s| s.prior).fold(0.0, f64::max)
    }
}
