//! Exhaustive subset search over candidate measurements.

use nalgebra::Vector3;

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::Tolerances;

use super::candidates::{candidate_four, candidate_pair, candidate_three, check_no_measurement};
use super::povm::{build_povm, PovmBuild};
use super::{GammaCertificate, PovmElement, SolveReport};

/// All size-`k` index subsets, ordered by descending combined prior with
/// lexicographic tie-breaking.
fn ordered_subsets(ensemble: &Ensemble, k: usize) -> Vec<Vec<usize>> {
    fn collect(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            collect(i + 1, n, k, current, out);
            current.pop();
        }
    }
    let mut subsets = Vec::new();
    collect(0, ensemble.len(), k, &mut Vec::with_capacity(k), &mut subsets);
    subsets.sort_by(|x, y| {
        let sx: f64 = x.iter().map(|&i| ensemble.state(i).prior()).sum();
        let sy: f64 = y.iter().map(|&i| ensemble.state(i).prior()).sum();
        sy.partial_cmp(&sx).expect("finite priors").then_with(|| x.cmp(y))
    });
    subsets
}

/// The identity, resolved as an antipodal projective pair assigned to the
/// guessed state.
fn guessing_povm(identifies: usize) -> Vec<PovmElement> {
    vec![
        PovmElement::new(1.0, Vector3::z(), identifies),
        PovmElement::new(1.0, -Vector3::z(), identifies),
    ]
}

/// Tracks the least-infeasible rejected candidate for diagnostics.
struct NearMiss {
    score: f64,
    description: String,
}

impl NearMiss {
    fn update(miss: &mut Option<NearMiss>, score: f64, description: String) {
        if miss.as_ref().map_or(true, |m| score > m.score) {
            *miss = Some(NearMiss { score, description });
        }
    }
}

/// Find the optimal measurement by exhaustive certified search.
///
/// The scan order is the no-measurement strategy first, then every pair,
/// triple, and quadruple of states, each size class ordered by descending
/// combined prior (ties broken lexicographically). Every candidate is
/// verified in full — certificate slacks on all states, then measurement
/// reconstruction — and the first fully valid candidate is returned. The
/// scan still visits the remaining subsets so that other subsets attaining
/// the same optimum (possible at boundary ensembles, where the certificate
/// operator is unique but the measurement is not) are recorded in the notes.
///
/// A valid optimum with at most four outcomes always exists, so an empty
/// scan signals a tolerance failure and returns `NoSolutionFound` with the
/// closest rejected candidate as diagnostics.
pub fn solve(ensemble: &Ensemble, tol: &Tolerances) -> Result<SolveReport> {
    let mut notes = ensemble.merge_notes();
    let mut examined = 0usize;
    let mut winner: Option<(GammaCertificate, PovmBuild)> = None;
    let mut near_miss: Option<NearMiss> = None;
    let mut equal_optima: Vec<String> = Vec::new();

    if let Some(j) = check_no_measurement(ensemble, tol) {
        examined += 1;
        let state = ensemble.state(j);
        let cert = GammaCertificate::evaluate(
            state.prior(),
            state.weighted_point(),
            vec![j],
            ensemble,
            tol,
        );
        debug_assert!(cert.valid);
        let build = PovmBuild {
            elements: guessing_povm(j),
            notes: Vec::new(),
        };
        winner = Some((cert, build));
    }

    for k in 2..=ensemble.len().min(4) {
        for subset in ordered_subsets(ensemble, k) {
            let candidates = match k {
                2 => candidate_pair(ensemble, subset[0], subset[1], tol).map(|c| vec![c]),
                3 => candidate_three(ensemble, [subset[0], subset[1], subset[2]], tol),
                _ => candidate_four(
                    ensemble,
                    [subset[0], subset[1], subset[2], subset[3]],
                    tol,
                ),
            };
            let candidates = match candidates {
                Ok(certs) => certs,
                Err(_degenerate) => {
                    // Coincident points, collinear geometry, no real root:
                    // the hypothesis has no candidate.
                    examined += 1;
                    continue;
                }
            };
            for cert in candidates {
                examined += 1;
                if !cert.valid {
                    let worst = cert
                        .slacks
                        .iter()
                        .copied()
                        .fold(f64::INFINITY, f64::min);
                    NearMiss::update(
                        &mut near_miss,
                        worst,
                        format!("subset {:?}: worst slack {worst:.3e}", cert.subset),
                    );
                    continue;
                }
                match build_povm(ensemble, &cert, tol) {
                    Ok(build) => match &winner {
                        None => winner = Some((cert, build)),
                        Some((incumbent, _)) => {
                            if (cert.a - incumbent.a).abs() <= 10.0 * tol.psd {
                                equal_optima.push(format!(
                                    "subset {:?} also attains the optimum (a = {})",
                                    cert.subset, cert.a
                                ));
                            }
                        }
                    },
                    Err(rejection) => {
                        NearMiss::update(
                            &mut near_miss,
                            f64::NEG_INFINITY,
                            format!("subset {:?}: {rejection}", cert.subset),
                        );
                    }
                }
            }
        }
    }

    match winner {
        Some((gamma, build)) => {
            notes.extend(build.notes);
            notes.extend(equal_optima);
            Ok(SolveReport {
                p_corr: gamma.a,
                k: gamma.subset.len(),
                povm: build.elements,
                gamma,
                candidates_examined: examined,
                notes,
            })
        }
        None => Err(Error::NoSolutionFound {
            diagnostics: near_miss
                .map(|m| m.description)
                .unwrap_or_else(|| "every candidate construction was degenerate".into()),
        }),
    }
}
