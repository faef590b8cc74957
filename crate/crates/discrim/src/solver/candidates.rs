//! Candidate `Γ` construction for each hypothesized identified subset.
//!
//! A state identified by an optimal measurement pins one tight constraint on
//! the four parameters `(a, b⃗)` of `Γ`:
//!
//! ```text
//! 2·p_j·(a − α_j·r̂_j·b⃗ − c_j) = a² − |b⃗|²,   c_j = p_j·β_j·(α_j + β_j/2)
//! ```
//!
//! with `β_j = 1 − α_j` (for a pure state `c_j = 0`). The quadratic right
//! side is the same for every state, so differences of constraints are
//! linear in `(a, b⃗)`. Four identified states determine `Γ` outright; three
//! need the additional plane condition `b⃗·ẑ' = w⃗_j·ẑ'` that holds because
//! a three-outcome measurement lies in an equatorial plane; two reduce to
//! the classic pair measurement along the difference of weighted points.

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector2, Vector3, Vector4};

use crate::ensemble::{Ensemble, SignalState};
use crate::error::{Error, Result};
use crate::Tolerances;

use super::GammaCertificate;

/// The constant `g_j = 2·p_j·c_j` absorbed from the mixed-state part of the
/// tight constraint; zero for pure states.
fn mixed_offset(state: &SignalState) -> f64 {
    let beta = 1.0 - state.purity();
    2.0 * state.prior() * state.prior() * beta * (state.purity() + 0.5 * beta)
}

/// Tight-constraint residual `2p_j·a − 2w⃗_j·b⃗ − g_j − (a² − |b⃗|²)`.
fn constraint_residual(state: &SignalState, a: f64, b: &Vector3<f64>) -> f64 {
    2.0 * state.prior() * a - 2.0 * state.weighted_point().dot(b) - mixed_offset(state)
        - (a * a - b.norm_squared())
}

/// Test whether guessing one state without measuring is optimal: state `j`
/// qualifies when `p_j·ρ_j − p_k·ρ_k ≥ 0` for every `k`, i.e.
/// `p_j − p_k ≥ |w⃗_j − w⃗_k|`. Returns the dominating index, preferring
/// larger priors and then smaller indices.
pub fn check_no_measurement(ensemble: &Ensemble, tol: &Tolerances) -> Option<usize> {
    let mut order: Vec<usize> = (0..ensemble.len()).collect();
    order.sort_by(|&x, &y| {
        ensemble
            .state(y)
            .prior()
            .partial_cmp(&ensemble.state(x).prior())
            .expect("finite priors")
            .then(x.cmp(&y))
    });
    order.into_iter().find(|&j| {
        let sj = ensemble.state(j);
        ensemble.states().iter().all(|sk| {
            sj.prior() - sk.prior()
                >= (sj.weighted_point() - sk.weighted_point()).norm() - tol.psd
        })
    })
}

/// Candidate certificate for a two-outcome measurement identifying states
/// `i` and `j`.
///
/// The optimal pair measurement projects onto the eigenvectors of
/// `D = p_i·ρ_i − p_j·ρ_j`, whose Pauli vector is `w⃗_i − w⃗_j`; adding the
/// positive part of `D` to `p_j·ρ_j` gives
/// `a = ½(p_i + p_j + |w⃗_i − w⃗_j|)` and
/// `b⃗ = ½(w⃗_i + w⃗_j) + ½(p_i − p_j)·m̂` with `m̂ = (w⃗_i − w⃗_j)/|w⃗_i − w⃗_j|`.
/// Slacks are evaluated on all states; when `D` is semidefinite (one state
/// of the pair dominates the other) the evaluated certificate is invalid,
/// which rejects the hypothesis without a special case.
pub fn candidate_pair(
    ensemble: &Ensemble,
    i: usize,
    j: usize,
    tol: &Tolerances,
) -> Result<GammaCertificate> {
    assert_ne!(i, j, "pair indices must be distinct");
    let (si, sj) = (ensemble.state(i), ensemble.state(j));
    let delta = si.weighted_point() - sj.weighted_point();
    let separation = delta.norm();
    if separation <= tol.psd {
        return Err(Error::DegeneratePair { i, j });
    }
    let direction = delta / separation;
    let a = 0.5 * (si.prior() + sj.prior() + separation);
    let b = 0.5 * (si.weighted_point() + sj.weighted_point())
        + direction * (0.5 * (si.prior() - sj.prior()));
    let mut subset = vec![i, j];
    subset.sort_unstable();
    Ok(GammaCertificate::evaluate(a, b, subset, ensemble, tol))
}

/// Normal of the affine plane through three weighted Bloch points, plus the
/// common projection `β⊥ = w⃗_j·ẑ'` shared by the three points.
///
/// A valid three-outcome candidate must satisfy `b⃗·ẑ' = β⊥`.
pub fn plane_axis(
    ensemble: &Ensemble,
    subset: [usize; 3],
    tol: &Tolerances,
) -> Result<(Vector3<f64>, f64)> {
    let w: Vec<Vector3<f64>> = subset
        .iter()
        .map(|&j| ensemble.state(j).weighted_point())
        .collect();
    let cross = (w[0] - w[1]).cross(&(w[0] - w[2]));
    let norm = cross.norm();
    if norm <= tol.geom {
        return Err(Error::CollinearPoints { subset });
    }
    let axis = cross / norm;
    Ok((axis, w[0].dot(&axis)))
}

/// Deterministic unit vector orthogonal to `line`: Gram–Schmidt against the
/// coordinate axis least aligned with it.
fn transverse_axis(line: &Vector3<f64>) -> Vector3<f64> {
    let candidates = [Vector3::x(), Vector3::y(), Vector3::z()];
    let seed = candidates
        .iter()
        .min_by(|u, v| {
            u.dot(line)
                .abs()
                .partial_cmp(&v.dot(line).abs())
                .expect("finite components")
        })
        .expect("nonempty candidates");
    (seed - line * seed.dot(line)).normalize()
}

/// Stable real roots of `qa·x² + qb·x + qc = 0`, larger root first. A
/// vanishing leading coefficient degrades to the linear case.
fn real_roots(qa: f64, qb: f64, qc: f64) -> Result<Vec<f64>> {
    let scale = qa.abs().max(qb.abs()).max(qc.abs());
    if scale == 0.0 {
        return Ok(Vec::new());
    }
    if qa.abs() <= 1e-14 * scale {
        if qb.abs() <= 1e-14 * scale {
            return Ok(Vec::new());
        }
        return Ok(vec![-qc / qb]);
    }
    let discriminant = qb * qb - 4.0 * qa * qc;
    if discriminant < 0.0 {
        return Err(Error::NoRealRoot { discriminant });
    }
    let q = -0.5 * (qb + qb.signum() * discriminant.sqrt());
    let mut roots = if q == 0.0 {
        vec![0.0]
    } else {
        vec![q / qa, qc / q]
    };
    roots.sort_by(|x, y| y.partial_cmp(x).expect("finite roots"));
    if roots.len() == 2 && (roots[0] - roots[1]).abs() <= 1e-12 * roots[0].abs().max(1.0) {
        roots.pop();
    }
    Ok(roots)
}

/// One Newton refinement pass on the square tight-constraint system, to
/// remove the cancellation incurred by the elimination path when the
/// difference geometry is poorly conditioned. `plane` carries the
/// three-outcome plane condition; `k = 4` systems are already square.
fn newton_polish(
    ensemble: &Ensemble,
    subset: &[usize],
    plane: Option<(Vector3<f64>, f64)>,
    a: &mut f64,
    b: &mut Vector3<f64>,
) {
    debug_assert_eq!(subset.len() + plane.iter().len(), 4);
    for _ in 0..3 {
        let mut jacobian = Matrix4::<f64>::zeros();
        let mut residual = Vector4::<f64>::zeros();
        for (row, &j) in subset.iter().enumerate() {
            let state = ensemble.state(j);
            residual[row] = -constraint_residual(state, *a, b);
            jacobian[(row, 0)] = 2.0 * state.prior() - 2.0 * *a;
            let db = -2.0 * state.weighted_point() + 2.0 * *b;
            jacobian[(row, 1)] = db.x;
            jacobian[(row, 2)] = db.y;
            jacobian[(row, 3)] = db.z;
        }
        if let Some((axis, offset)) = plane {
            residual[3] = -(axis.dot(b) - offset);
            jacobian[(3, 1)] = axis.x;
            jacobian[(3, 2)] = axis.y;
            jacobian[(3, 3)] = axis.z;
        }
        if residual.norm() <= 1e-14 {
            break;
        }
        match jacobian.lu().solve(&residual) {
            Some(step) => {
                *a += step[0];
                *b += Vector3::new(step[1], step[2], step[3]);
            }
            None => break,
        }
    }
}

/// Shared tail of the three- and four-state constructions: roots of the
/// quadratic in `a` after eliminating `b⃗ = b₀ + a·b₁`, Newton-polished and
/// filtered by admissibility (`Γ` strictly positive, trace within
/// `[max_j p_j, 1]`), each returned with its certificate evaluated on all
/// states.
fn certificates_from_affine_family(
    ensemble: &Ensemble,
    subset: &[usize],
    plane: Option<(Vector3<f64>, f64)>,
    b0: Vector3<f64>,
    b1: Vector3<f64>,
    tol: &Tolerances,
) -> Result<Vec<GammaCertificate>> {
    let lead = ensemble.state(subset[0]);
    let w = lead.weighted_point();
    let qa = 1.0 - b1.norm_squared();
    let qb = 2.0 * (w.dot(&b1) - b0.dot(&b1) - lead.prior());
    let qc = mixed_offset(lead) + 2.0 * w.dot(&b0) - b0.norm_squared();

    let mut certificates = Vec::new();
    for root in real_roots(qa, qb, qc)? {
        let mut a = root;
        let mut b = b0 + b1 * root;
        newton_polish(ensemble, subset, plane, &mut a, &mut b);
        let admissible = a > b.norm() + tol.psd
            && a >= ensemble.max_prior() - tol.psd
            && a <= 1.0 + tol.psd;
        if admissible {
            certificates.push(GammaCertificate::evaluate(
                a,
                b,
                subset.to_vec(),
                ensemble,
                tol,
            ));
        }
    }
    Ok(certificates)
}

/// Candidate certificates for a three-outcome measurement identifying
/// `subset`.
///
/// Differences of the tight constraints give two linear equations in
/// `(a, b⃗)`; with the plane condition they express `b⃗` as an affine
/// function of `a`, and substituting back into one original constraint
/// leaves a quadratic in `a`. Both roots are evaluated — admissibility and
/// the certificate decide, since the construction itself cannot know which
/// root (if either) corresponds to a physical measurement.
///
/// Collinear weighted points leave the plane normal undetermined; there the
/// plane condition holds for every direction transverse to the line, which
/// pins both transverse components of `b⃗` and turns the difference system
/// into a 2×2 solve for `(a, b⃗·û)`; the leftover original constraint then
/// acts as a consistency check instead of a quadratic.
pub fn candidate_three(
    ensemble: &Ensemble,
    subset: [usize; 3],
    tol: &Tolerances,
) -> Result<Vec<GammaCertificate>> {
    let mut subset = subset;
    subset.sort_unstable();
    let states: Vec<&SignalState> = subset.iter().map(|&j| ensemble.state(j)).collect();
    let w: Vec<Vector3<f64>> = states.iter().map(|s| s.weighted_point()).collect();
    let g: Vec<f64> = states.iter().map(|s| mixed_offset(s)).collect();
    let p: Vec<f64> = states.iter().map(|s| s.prior()).collect();

    match plane_axis(ensemble, subset, tol) {
        Ok((axis, offset)) => {
            let rows = [2.0 * (w[0] - w[1]), 2.0 * (w[0] - w[2]), axis];
            let matrix = Matrix3::from_rows(&[
                rows[0].transpose(),
                rows[1].transpose(),
                rows[2].transpose(),
            ]);
            let scale = rows[0].norm() * rows[1].norm();
            if matrix.determinant().abs() <= tol.geom * scale.max(1e-30) {
                return Err(Error::SingularLinearSystem {
                    context: "three-state difference system",
                });
            }
            let lu = matrix.lu();
            let v1 = Vector3::new(2.0 * (p[0] - p[1]), 2.0 * (p[0] - p[2]), 0.0);
            let v0 = Vector3::new(-(g[0] - g[1]), -(g[0] - g[2]), offset);
            let b1 = lu.solve(&v1).ok_or(Error::SingularLinearSystem {
                context: "three-state difference system",
            })?;
            let b0 = lu.solve(&v0).ok_or(Error::SingularLinearSystem {
                context: "three-state difference system",
            })?;
            certificates_from_affine_family(
                ensemble,
                &subset,
                Some((axis, offset)),
                b0,
                b1,
                tol,
            )
        }
        Err(Error::CollinearPoints { .. }) => {
            let separations = [w[0] - w[1], w[0] - w[2], w[1] - w[2]];
            let longest = separations
                .iter()
                .max_by(|x, y| x.norm().partial_cmp(&y.norm()).expect("finite norms"))
                .expect("nonempty");
            if longest.norm() <= tol.psd {
                return Err(Error::SingularLinearSystem {
                    context: "coincident weighted points",
                });
            }
            let line = longest / longest.norm();
            let axis_a = transverse_axis(&line);
            let axis_b = line.cross(&axis_a);

            let matrix = Matrix2::new(
                2.0 * p[0] - 2.0 * p[1],
                -2.0 * (w[0] - w[1]).dot(&line),
                2.0 * p[0] - 2.0 * p[2],
                -2.0 * (w[0] - w[2]).dot(&line),
            );
            if matrix.determinant().abs() <= tol.geom {
                return Err(Error::SingularLinearSystem {
                    context: "collinear three-state difference system",
                });
            }
            let rhs = Vector2::new(g[0] - g[1], g[0] - g[2]);
            let solution = matrix.lu().solve(&rhs).ok_or(Error::SingularLinearSystem {
                context: "collinear three-state difference system",
            })?;
            let a = solution[0];
            let b = line * solution[1] + axis_a * w[0].dot(&axis_a) + axis_b * w[0].dot(&axis_b);
            // The difference equations used two of the three constraints;
            // the remaining one must hold on its own.
            if constraint_residual(states[0], a, &b).abs() > 1e-9 * a.abs().max(1.0) {
                return Ok(Vec::new());
            }
            let admissible = a > b.norm() + tol.psd
                && a >= ensemble.max_prior() - tol.psd
                && a <= 1.0 + tol.psd;
            if !admissible {
                return Ok(Vec::new());
            }
            Ok(vec![GammaCertificate::evaluate(
                a,
                b,
                subset.to_vec(),
                ensemble,
                tol,
            )])
        }
        Err(other) => Err(other),
    }
}

/// Candidate certificates for a four-outcome measurement identifying
/// `subset`: three constraint differences form a 3×3 linear system giving
/// `b⃗` affine in `a`, and one original constraint closes the quadratic.
/// Subsets whose difference vectors do not span 3-space are degenerate and
/// reported as such (the caller skips them).
pub fn candidate_four(
    ensemble: &Ensemble,
    subset: [usize; 4],
    tol: &Tolerances,
) -> Result<Vec<GammaCertificate>> {
    let mut subset = subset;
    subset.sort_unstable();
    let states: Vec<&SignalState> = subset.iter().map(|&j| ensemble.state(j)).collect();
    let w: Vec<Vector3<f64>> = states.iter().map(|s| s.weighted_point()).collect();
    let g: Vec<f64> = states.iter().map(|s| mixed_offset(s)).collect();
    let p: Vec<f64> = states.iter().map(|s| s.prior()).collect();

    let rows = [
        2.0 * (w[0] - w[1]),
        2.0 * (w[0] - w[2]),
        2.0 * (w[0] - w[3]),
    ];
    let matrix = Matrix3::from_rows(&[
        rows[0].transpose(),
        rows[1].transpose(),
        rows[2].transpose(),
    ]);
    let scale = rows[0].norm() * rows[1].norm() * rows[2].norm();
    if matrix.determinant().abs() <= tol.geom * scale.max(1e-30) {
        return Err(Error::SingularLinearSystem {
            context: "four-state difference vectors are coplanar",
        });
    }
    let lu = matrix.lu();
    let v1 = Vector3::new(
        2.0 * (p[0] - p[1]),
        2.0 * (p[0] - p[2]),
        2.0 * (p[0] - p[3]),
    );
    let v0 = Vector3::new(-(g[0] - g[1]), -(g[0] - g[2]), -(g[0] - g[3]));
    let b1 = lu.solve(&v1).ok_or(Error::SingularLinearSystem {
        context: "four-state difference vectors are coplanar",
    })?;
    let b0 = lu.solve(&v0).ok_or(Error::SingularLinearSystem {
        context: "four-state difference vectors are coplanar",
    })?;
    certificates_from_affine_family(ensemble, &subset, None, b0, b1, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn single_state_is_always_dominant() {
        let e = Ensemble::new(vec![SignalState::pure(1.0, Vector3::z()).unwrap()]).unwrap();
        assert_eq!(check_no_measurement(&e, &tol()), Some(0));
    }

    #[test]
    fn pure_states_with_nonzero_priors_never_dominate() {
        let e = Ensemble::new(vec![
            SignalState::pure(0.5, Vector3::z()).unwrap(),
            SignalState::pure(0.5, -Vector3::z()).unwrap(),
        ])
        .unwrap();
        assert_eq!(check_no_measurement(&e, &tol()), None);
    }

    #[test]
    fn lopsided_mixed_pair_is_dominated_by_the_likelier_state() {
        // Independent check: the dual objective max(0.9+|b|, 0.1+|b|) is
        // minimized at b = 0 with value 0.9.
        let e = Ensemble::new(vec![
            SignalState::maximally_mixed(0.9).unwrap(),
            SignalState::maximally_mixed(0.1).unwrap(),
        ])
        .unwrap();
        assert_eq!(check_no_measurement(&e, &tol()), Some(0));
        let cert = GammaCertificate::evaluate(
            0.9,
            e.state(0).weighted_point(),
            vec![0],
            &e,
            &tol(),
        );
        assert!(cert.valid);
    }

    #[test]
    fn orthogonal_pure_pair_is_perfectly_distinguishable() {
        let e = Ensemble::new(vec![
            SignalState::pure(0.5, Vector3::z()).unwrap(),
            SignalState::pure(0.5, -Vector3::z()).unwrap(),
        ])
        .unwrap();
        let cert = candidate_pair(&e, 0, 1, &tol()).unwrap();
        assert!(cert.valid);
        assert_relative_eq!(cert.a, 1.0);
        assert!(cert.b.norm() <= 1e-15);
    }

    #[test]
    fn pair_value_is_half_one_plus_separation() {
        // Two pure states at 60°, equal priors: P = ½(1 + sin 30°) = 0.75.
        let e = Ensemble::new(vec![
            SignalState::pure(0.5, Vector3::x()).unwrap(),
            SignalState::pure(
                0.5,
                Vector3::new((PI / 3.0).cos(), (PI / 3.0).sin(), 0.0),
            )
            .unwrap(),
        ])
        .unwrap();
        let cert = candidate_pair(&e, 0, 1, &tol()).unwrap();
        assert!(cert.valid);
        assert_relative_eq!(cert.a, 0.75, epsilon = 1e-12);
        let separation =
            (e.state(0).weighted_point() - e.state(1).weighted_point()).norm();
        assert_relative_eq!(cert.a, 0.5 * (1.0 + separation), epsilon = 1e-12);
    }

    #[test]
    fn mirror_pair_above_threshold_matches_the_closed_form() {
        let theta = 2.0 * PI / 3.0;
        let e = family::mirror_symmetric(theta, 0.45).unwrap();
        let cert = candidate_pair(&e, 1, 2, &tol()).unwrap();
        assert!(cert.valid);
        assert_relative_eq!(cert.a, 0.45 * (1.0 + theta.sin()), epsilon = 1e-12);
    }

    #[test]
    fn coincident_weighted_points_are_a_degenerate_pair() {
        let e = Ensemble::new(vec![
            SignalState::maximally_mixed(0.5).unwrap(),
            SignalState::maximally_mixed(0.3).unwrap(),
            SignalState::pure(0.2, Vector3::x()).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            candidate_pair(&e, 0, 1, &tol()),
            Err(Error::DegeneratePair { i: 0, j: 1 })
        ));
    }

    #[test]
    fn plane_axis_of_equatorial_states_is_the_z_axis() {
        let e = family::mirror_symmetric(2.0 * PI / 3.0, 1.0 / 3.0).unwrap();
        let (axis, offset) = plane_axis(&e, [0, 1, 2], &tol()).unwrap();
        assert_relative_eq!(axis.z.abs(), 1.0, epsilon = 1e-12);
        assert!(offset.abs() <= 1e-15);
    }

    #[test]
    fn plane_axis_offset_at_common_latitude() {
        // Three equiprobable pure states at latitude z₀ = 0.6.
        let z0 = 0.6;
        let radius = (1.0f64 - z0 * z0).sqrt();
        let states: Vec<SignalState> = (0..3)
            .map(|k| {
                let angle = 2.0 * PI * k as f64 / 3.0;
                SignalState::pure(
                    1.0 / 3.0,
                    Vector3::new(radius * angle.cos(), radius * angle.sin(), z0),
                )
                .unwrap()
            })
            .collect();
        let e = Ensemble::new(states).unwrap();
        let (axis, offset) = plane_axis(&e, [0, 1, 2], &tol()).unwrap();
        assert_relative_eq!(offset, axis.z.signum() * z0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn collinear_weighted_points_are_reported() {
        let e = Ensemble::new(vec![
            SignalState::maximally_mixed(0.2).unwrap(),
            SignalState::new(0.3, 2.0 / 3.0, Vector3::x()).unwrap(),
            SignalState::new(0.5, 0.8, Vector3::x()).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            plane_axis(&e, [0, 1, 2], &tol()),
            Err(Error::CollinearPoints { .. })
        ));
    }

    #[test]
    fn trine_certificate_is_two_thirds_with_centered_gamma() {
        let e = family::trine();
        let certs = candidate_three(&e, [0, 1, 2], &tol()).unwrap();
        let valid: Vec<_> = certs.iter().filter(|c| c.valid).collect();
        assert_eq!(valid.len(), 1);
        assert_relative_eq!(valid[0].a, 2.0 / 3.0, epsilon = 1e-12);
        assert!(valid[0].b.norm() <= 1e-12);
    }

    #[test]
    fn mirror_three_outcome_region_matches_the_closed_form() {
        let theta = 2.0 * PI / 3.0;
        for p in [0.2, 0.3, 1.0 / 3.0] {
            let e = family::mirror_symmetric(theta, p).unwrap();
            let certs = candidate_three(&e, [0, 1, 2], &tol()).unwrap();
            let valid: Vec<_> = certs.iter().filter(|c| c.valid).collect();
            assert_eq!(valid.len(), 1, "p = {p}");
            assert_relative_eq!(
                valid[0].a,
                family::three_element_p_corr(theta, p),
                epsilon = 1e-12
            );
            // Γ lies on the symmetry axis in the equatorial plane.
            assert!(valid[0].b.y.abs() <= 1e-12);
            assert!(valid[0].b.z.abs() <= 1e-12);
        }
    }

    #[test]
    fn symmetric_mixed_trine_certificate() {
        // Purity 0.8 trine: by symmetry b = 0 and the tight constraint
        // becomes a² − 2pa + g = 0 with p = ⅓, g = p²β(1+α) = 0.04, whose
        // admissible root is 0.6.
        let states: Vec<SignalState> = (0..3)
            .map(|k| {
                let angle = 2.0 * PI * k as f64 / 3.0;
                SignalState::new(
                    1.0 / 3.0,
                    0.8,
                    Vector3::new(angle.cos(), angle.sin(), 0.0),
                )
                .unwrap()
            })
            .collect();
        let e = Ensemble::new(states).unwrap();
        let certs = candidate_three(&e, [0, 1, 2], &tol()).unwrap();
        let valid: Vec<_> = certs.iter().filter(|c| c.valid).collect();
        assert_eq!(valid.len(), 1);
        assert_relative_eq!(valid[0].a, 0.6, epsilon = 1e-12);
        assert!(valid[0].b.norm() <= 1e-12);
    }

    #[test]
    fn tetrahedron_certificate_is_one_half() {
        let e = family::tetrahedron();
        let certs = candidate_four(&e, [0, 1, 2, 3], &tol()).unwrap();
        let valid: Vec<_> = certs.iter().filter(|c| c.valid).collect();
        assert_eq!(valid.len(), 1);
        assert_relative_eq!(valid[0].a, 0.5, epsilon = 1e-12);
        assert!(valid[0].b.norm() <= 1e-12);
    }

    #[test]
    fn coplanar_difference_vectors_are_singular() {
        let states: Vec<SignalState> = (0..4)
            .map(|k| {
                let angle = PI * k as f64 / 2.0;
                SignalState::pure(0.25, Vector3::new(angle.cos(), angle.sin(), 0.0)).unwrap()
            })
            .collect();
        let e = Ensemble::new(states).unwrap();
        assert!(matches!(
            candidate_four(&e, [0, 1, 2, 3], &tol()),
            Err(Error::SingularLinearSystem { .. })
        ));
    }
}
