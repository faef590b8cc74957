//! JSON document formats for ensembles, measurements, and solver results.
//!
//! An ensemble document lists states as `{prior, bloch}` records where
//! `bloch = α·r̂` is the (possibly sub-unit) Bloch vector of the density
//! operator. A measurement document lists `{weight, direction, identifies}`
//! records. The machine-readable solver output mirrors the input ensemble
//! and adds a `result` object; its embedded measurement is accepted anywhere
//! a measurement document is.

use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::ensemble::{Ensemble, SignalState};
use crate::error::{Error, Result};
use crate::solver::{PovmElement, SolveReport};

/// Directions in measurement documents may be off unit length by at most
/// this much; they are renormalized on ingestion.
const DIRECTION_SLACK: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateRecord {
    pub prior: f64,
    pub bloch: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleDocument {
    pub states: Vec<StateRecord>,
}

impl EnsembleDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_ensemble(ensemble: &Ensemble) -> Self {
        Self {
            states: ensemble
                .states()
                .iter()
                .map(|s| {
                    let bloch = s.purity() * s.direction();
                    StateRecord {
                        prior: s.prior(),
                        bloch: [bloch.x, bloch.y, bloch.z],
                        label: None,
                    }
                })
                .collect(),
        }
    }

    /// Validate and convert into an [`Ensemble`] (priors renormalized,
    /// duplicates merged).
    pub fn to_ensemble(&self) -> Result<Ensemble> {
        let mut states = Vec::with_capacity(self.states.len());
        for (index, record) in self.states.iter().enumerate() {
            let bloch = Vector3::from(record.bloch);
            let purity = bloch.norm();
            if purity > 1.0 + 1e-12 {
                return Err(Error::Validation {
                    path: format!("states[{index}].bloch"),
                    value: purity,
                    reason: "Bloch vector length must not exceed 1".into(),
                });
            }
            let direction = if purity > 1e-15 {
                bloch / purity
            } else {
                Vector3::z()
            };
            let state = SignalState::new(record.prior, purity.min(1.0), direction).map_err(
                |err| match err {
                    Error::Validation {
                        path,
                        value,
                        reason,
                    } => Error::Validation {
                        path: format!("states[{index}].{path}"),
                        value,
                        reason,
                    },
                    other => other,
                },
            )?;
            states.push(state);
        }
        Ensemble::new(states)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PovmRecord {
    pub weight: f64,
    pub direction: [f64; 3],
    pub identifies: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PovmDocument {
    pub elements: Vec<PovmRecord>,
}

impl PovmDocument {
    /// Parse a measurement document, accepting either a bare
    /// `{"elements": …}` document or a machine solver report (whose
    /// `result.povm` is used).
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("elements").is_some() {
            return Ok(serde_json::from_value(value)?);
        }
        if let Some(embedded) = value.pointer("/result/povm") {
            return Ok(serde_json::from_value(embedded.clone())?);
        }
        Err(Error::NotAPovm {
            reason: "document has neither an `elements` list nor a `result.povm` object".into(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_elements(elements: &[PovmElement]) -> Self {
        Self {
            elements: elements
                .iter()
                .map(|e| PovmRecord {
                    weight: e.weight,
                    direction: [e.direction.x, e.direction.y, e.direction.z],
                    identifies: e.identifies,
                })
                .collect(),
        }
    }

    pub fn to_elements(&self) -> Result<Vec<PovmElement>> {
        self.elements
            .iter()
            .enumerate()
            .map(|(index, record)| {
                let direction = Vector3::from(record.direction);
                let norm = direction.norm();
                if (norm - 1.0).abs() > DIRECTION_SLACK {
                    return Err(Error::Validation {
                        path: format!("elements[{index}].direction"),
                        value: norm,
                        reason: "direction must be a unit vector".into(),
                    });
                }
                Ok(PovmElement::new(
                    record.weight,
                    direction / norm,
                    record.identifies,
                ))
            })
            .collect()
    }
}

/// Machine-readable solver output: the validated input states plus a
/// `result` object.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MachineReport {
    pub states: Vec<StateRecord>,
    pub result: MachineResult,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MachineResult {
    pub p_corr: f64,
    pub a: f64,
    pub b: [f64; 3],
    pub subset: Vec<usize>,
    pub k: usize,
    pub slacks: Vec<f64>,
    pub povm: PovmDocument,
    pub candidates_examined: usize,
    pub notes: Vec<String>,
}

impl MachineReport {
    pub fn new(ensemble: &Ensemble, report: &SolveReport) -> Self {
        Self {
            states: EnsembleDocument::from_ensemble(ensemble).states,
            result: MachineResult {
                p_corr: report.p_corr,
                a: report.gamma.a,
                b: [report.gamma.b.x, report.gamma.b.y, report.gamma.b.z],
                subset: report.gamma.subset.clone(),
                k: report.k,
                slacks: report.gamma.slacks.clone(),
                povm: PovmDocument::from_elements(&report.povm),
                candidates_examined: report.candidates_examined,
                notes: report.notes.clone(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
