//! Minimum-error discrimination of qubit ensembles.
//!
//! Given an alphabet of qubit states `ρ_j` (pure or mixed) with prior
//! probabilities `p_j`, this crate computes the measurement that maximizes
//! the probability of correctly identifying which state was sent, along
//! with the maximal probability itself and a verifiable optimality
//! certificate.
//!
//! Everything runs in Pauli coordinates: operators are pairs `(s, t⃗)` with
//! `A = ½(s𝟙 + t⃗·σ⃗)`, states are weighted Bloch points `w⃗_j = p_j·α_j·r̂_j`,
//! and the certificate operator `Γ` is characterized by per-state slacks
//! `(a − p_j) − |b⃗ − w⃗_j|` that must all be nonnegative, vanishing exactly
//! for the states the measurement identifies. The solver constructs
//! candidate certificates algebraically subset by subset ([`solver`]), and
//! an independent convex minimax oracle ([`dual`]) plus a Born-rule Monte
//! Carlo simulator ([`sim`]) cross-check every answer.
//!
//! # Quick start
//!
//! ```
//! use discrim::{family, solver, Tolerances};
//!
//! // Three equiprobable states at 120° on the equator of the Bloch sphere.
//! let ensemble = family::trine();
//! let report = solver::solve(&ensemble, &Tolerances::default()).unwrap();
//!
//! assert_eq!(report.k, 3);
//! assert!((report.p_corr - 2.0 / 3.0).abs() < 1e-10);
//! ```
//!
//! The `discrim` binary exposes the same functionality as `solve`, `sweep`,
//! `verify`, and `simulate` subcommands over JSON documents; see the guide
//! in `book/` for the file formats.

pub mod cli;
pub mod dual;
pub mod ensemble;
mod error;
pub mod family;
pub mod io;
pub mod pauli;
pub mod sim;
pub mod solver;

pub use error::{Error, Result};

/// Numerical tolerances used by certificate verification and measurement
/// reconstruction.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Absolute tolerance on slacks and eigenvalues (certificate checks).
    pub psd: f64,
    /// Tolerance on completeness and weight residuals.
    pub povm: f64,
    /// Collinearity/degeneracy threshold for geometric constructions.
    pub geom: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd: 1e-9,
            povm: 1e-8,
            geom: 1e-10,
        }
    }
}

impl Tolerances {
    /// Derive a consistent set of tolerances from a single certificate
    /// tolerance (the CLI `--tol` override).
    pub fn from_psd(psd: f64) -> Self {
        Self {
            psd,
            povm: 10.0 * psd,
            geom: 0.1 * psd,
        }
    }
}

// The guide's code blocks compile and run as doctests, one module per
// chapter, so the book cannot drift from the crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/pauli-coordinates.md")]
    mod pauli_coordinates {}
    #[doc = include_str!("../../../book/src/ensembles.md")]
    mod ensembles {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/construction.md")]
    mod construction {}
    #[doc = include_str!("../../../book/src/duality.md")]
    mod duality {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
