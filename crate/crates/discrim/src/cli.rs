//! Subcommand implementations behind the `discrim` binary.
//!
//! Exit-code contract:
//!
//! * `solve`: 0 on success, 2 when no certified measurement is found.
//! * `sweep`: 0 on success, 2 on an invalid specification.
//! * `verify`: 0 optimal, 1 valid but suboptimal, 2 not a measurement.
//! * `simulate`: 0 when the empirical rate is within 4 standard errors of
//!   the certified value, 1 otherwise.
//!
//! Ingestion and I/O failures exit 2 for every subcommand. All output files
//! are written deterministically: fixed significant-digit formatting, fixed
//! row order, LF line endings.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::dual;
use crate::ensemble::{Ensemble, SignalState};
use crate::error::{Error, Result};
use crate::family;
use crate::io::{EnsembleDocument, MachineReport, PovmDocument};
use crate::sim;
use crate::solver::{self, SolveReport};
use crate::Tolerances;

/// Seed used for the oracle column of `sweep`; fixed so sweeps are
/// reproducible byte for byte.
const SWEEP_ORACLE_SEED: u64 = 0xD15C;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Report,
    Machine,
}

/// Which ensemble family a sweep walks through.
#[derive(Clone, Debug)]
pub enum SweepFamily {
    /// The mirror-symmetric three-state family at angle `theta`; the swept
    /// prior is shared by the two mirror states.
    MirrorSymmetric,
    /// States taken from an ensemble document; the swept prior is shared by
    /// every state but the first, which absorbs the remainder.
    CustomGrid { input: PathBuf },
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub family: SweepFamily,
    pub theta: f64,
    pub p_start: f64,
    pub p_stop: f64,
    pub p_step: f64,
    pub with_oracle: bool,
}

impl SweepSpec {
    fn grid(&self) -> Result<Vec<f64>> {
        if !(self.p_step > 0.0) {
            return Err(Error::InvalidSpec {
                reason: format!("grid step must be positive, got {}", self.p_step),
            });
        }
        if self.p_stop < self.p_start {
            return Err(Error::InvalidSpec {
                reason: "grid stop must not precede start".into(),
            });
        }
        let count = ((self.p_stop - self.p_start) / self.p_step).round() as usize;
        Ok((0..=count)
            .map(|i| self.p_start + i as f64 * self.p_step)
            .filter(|p| *p <= self.p_stop + 0.5 * self.p_step)
            .collect())
    }
}

/// Read and validate an ensemble document.
pub fn ingest(path: &Path) -> Result<Ensemble> {
    EnsembleDocument::load(path)?.to_ensemble()
}

fn tolerances(tol: Option<f64>) -> Tolerances {
    tol.map(Tolerances::from_psd).unwrap_or_default()
}

/// Twelve significant digits, deterministic, no negative zero.
fn sig12(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn run_solve(
    input: &Path,
    tol: Option<f64>,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let ensemble = ingest(input)?;
    let tolerances = tolerances(tol);
    match solver::solve(&ensemble, &tolerances) {
        Ok(report) => {
            match format {
                OutputFormat::Machine => {
                    writeln!(out, "{}", MachineReport::new(&ensemble, &report).to_json())?;
                }
                OutputFormat::Report => {
                    write_human_report(&ensemble, &report, out)?;
                }
            }
            Ok(0)
        }
        Err(Error::NoSolutionFound { diagnostics }) => {
            writeln!(out, "no certified measurement found: {diagnostics}")?;
            Ok(2)
        }
        Err(other) => Err(other),
    }
}

fn write_human_report(
    ensemble: &Ensemble,
    report: &SolveReport,
    out: &mut dyn Write,
) -> Result<()> {
    writeln!(out, "optimal success probability: {}", sig12(report.p_corr))?;
    writeln!(
        out,
        "certificate: a = {}, b = [{}, {}, {}]",
        sig12(report.gamma.a),
        sig12(report.gamma.b.x),
        sig12(report.gamma.b.y),
        sig12(report.gamma.b.z)
    )?;
    writeln!(
        out,
        "identified subset: {:?} ({} outcome{})",
        report.gamma.subset,
        report.k,
        if report.k == 1 { "" } else { "s" }
    )?;
    writeln!(out, "measurement:")?;
    for element in &report.povm {
        writeln!(
            out,
            "  state {}: weight {}, direction [{}, {}, {}]",
            element.identifies,
            sig12(element.weight),
            sig12(element.direction.x),
            sig12(element.direction.y),
            sig12(element.direction.z)
        )?;
    }
    writeln!(out, "per-state slacks:")?;
    for (index, slack) in report.gamma.slacks.iter().enumerate() {
        let marker = if report.gamma.subset.contains(&index) {
            " (identified)"
        } else {
            ""
        };
        writeln!(out, "  state {index}: {}{marker}", sig12(*slack))?;
    }
    writeln!(out, "candidates examined: {}", report.candidates_examined)?;
    for note in &report.notes {
        writeln!(out, "note: {note}")?;
    }
    let _ = ensemble;
    Ok(())
}

/// Run a sweep and write the CSV file. Closed-form columns are emitted for
/// the mirror-symmetric family whether or not the formula is physical at
/// that prior — the certified `p_corr` column is the trustworthy one — and
/// are left empty for custom grids.
pub fn run_sweep(spec: &SweepSpec, out_path: &Path) -> Result<i32> {
    let grid = match spec.grid() {
        Ok(grid) => grid,
        Err(Error::InvalidSpec { reason }) => {
            eprintln!("invalid sweep specification: {reason}");
            return Ok(2);
        }
        Err(other) => return Err(other),
    };

    let base = match &spec.family {
        SweepFamily::MirrorSymmetric => None,
        SweepFamily::CustomGrid { input } => Some(ingest(input)?),
    };
    let tol = Tolerances::default();

    let mut csv = String::new();
    csv.push_str("p,theta,k_opt,p_corr,p_corr_two_element,p_corr_three_element");
    if spec.with_oracle {
        csv.push_str(",p_corr_oracle");
    }
    csv.push('\n');

    for &p in &grid {
        let ensemble = match &base {
            None => match family::mirror_symmetric(spec.theta, p) {
                Ok(e) => e,
                Err(Error::Validation { reason, value, .. }) => {
                    eprintln!("invalid sweep specification: {reason} (got {value})");
                    return Ok(2);
                }
                Err(other) => return Err(other),
            },
            Some(base) => reprior(base, p)?,
        };
        let report = solver::solve(&ensemble, &tol)?;
        let _ = write!(csv, "{},{},{},", sig12(p), sig12(spec.theta), report.k);
        csv.push_str(&sig12(report.p_corr));
        match base {
            None => {
                let _ = write!(
                    csv,
                    ",{},{}",
                    sig12(family::two_element_p_corr(spec.theta, p)),
                    sig12(family::three_element_p_corr(spec.theta, p))
                );
            }
            Some(_) => csv.push_str(",,"),
        }
        if spec.with_oracle {
            let oracle = dual::minimize_dual(
                &ensemble,
                dual::DEFAULT_MAX_ITERS,
                dual::DEFAULT_TOL,
                SWEEP_ORACLE_SEED,
            );
            let _ = write!(csv, ",{}", sig12(oracle.value));
        }
        csv.push('\n');
    }

    std::fs::write(out_path, csv)?;
    Ok(0)
}

/// Rebuild `base` with priors `(1 − (N−1)p, p, …, p)`.
fn reprior(base: &Ensemble, p: f64) -> Result<Ensemble> {
    let n = base.len();
    let lead = 1.0 - (n - 1) as f64 * p;
    if !(0.0..=1.0).contains(&lead) {
        return Err(Error::InvalidSpec {
            reason: format!("shared prior {p} leaves the first state with prior {lead}"),
        });
    }
    let states: Vec<SignalState> = base
        .states()
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let prior = if index == 0 { lead } else { p };
            SignalState::new(prior, s.purity(), s.direction())
        })
        .collect::<Result<_>>()?;
    Ensemble::new(states)
}

pub fn run_verify(
    input: &Path,
    povm_path: &Path,
    tol: Option<f64>,
    out: &mut dyn Write,
) -> Result<i32> {
    let ensemble = ingest(input)?;
    let elements = PovmDocument::load(povm_path)?.to_elements()?;
    let tolerances = tolerances(tol);
    match solver::verify_external(&ensemble, &elements, &tolerances) {
        Ok(report) => {
            writeln!(out, "achieved success probability: {}", sig12(report.achieved))?;
            writeln!(
                out,
                "hermiticity residual: {}",
                sig12(report.hermiticity_residual)
            )?;
            for (index, slack) in report.slacks.iter().enumerate() {
                writeln!(out, "  state {index}: slack {}", sig12(*slack))?;
            }
            if report.optimal {
                writeln!(out, "verdict: optimal")?;
                Ok(0)
            } else {
                writeln!(
                    out,
                    "verdict: suboptimal (worst slack {} on state {})",
                    sig12(report.worst_slack),
                    report.worst_index
                )?;
                Ok(1)
            }
        }
        Err(Error::NotAPovm { reason }) => {
            writeln!(out, "not a measurement: {reason}")?;
            Ok(2)
        }
        Err(other) => Err(other),
    }
}

pub fn run_simulate(
    input: &Path,
    samples: u64,
    seed: u64,
    tol: Option<f64>,
    out: &mut dyn Write,
) -> Result<i32> {
    let ensemble = ingest(input)?;
    let tolerances = tolerances(tol);
    let report = solver::solve(&ensemble, &tolerances)?;
    let (rate, stderr) =
        sim::monte_carlo_simulate(&ensemble, &report.povm, samples, seed, &tolerances)?;
    let z = if stderr > 0.0 {
        (rate - report.p_corr) / stderr
    } else if rate == report.p_corr {
        0.0
    } else {
        f64::INFINITY
    };
    writeln!(out, "theoretical p_corr: {}", sig12(report.p_corr))?;
    writeln!(out, "empirical rate:     {}", sig12(rate))?;
    writeln!(out, "standard error:     {}", sig12(stderr))?;
    writeln!(out, "z-score:            {}", sig12(z))?;
    Ok(if z.abs() <= 4.0 { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_is_stable() {
        assert_eq!(sig12(2.0 / 3.0), "6.66666666667e-1");
        assert_eq!(sig12(0.0), "0.00000000000e0");
        assert_eq!(sig12(-0.0), "0.00000000000e0");
        assert_eq!(sig12(-2.6), "-2.60000000000e0");
    }

    #[test]
    fn grid_is_inclusive_and_index_based() {
        let spec = SweepSpec {
            family: SweepFamily::MirrorSymmetric,
            theta: 1.0,
            p_start: 0.30,
            p_stop: 0.45,
            p_step: 0.05,
            with_oracle: false,
        };
        let grid = spec.grid().unwrap();
        assert_eq!(grid.len(), 4);
        assert!((grid[3] - 0.45).abs() < 1e-15);
    }

    #[test]
    fn invalid_grids_are_rejected() {
        let spec = SweepSpec {
            family: SweepFamily::MirrorSymmetric,
            theta: 1.0,
            p_start: 0.4,
            p_stop: 0.3,
            p_step: 0.1,
            with_oracle: false,
        };
        assert!(matches!(spec.grid(), Err(Error::InvalidSpec { .. })));
    }
}
