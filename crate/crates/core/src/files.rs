//! JSON file formats for states and gate sequences, and atomic writes.

use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::nbl::{BitString, ExplicitSet, ProductState, SuperpositionState};
use crate::precision::Precision;

/// Named product states, to avoid spelling out `N` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// `(1, 0)` on every bit.
    Zero,
    /// `(1, 1)` on every bit: the unnormalized full superposition.
    Full,
    /// `(1, 1) / sqrt 2` on every bit.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateBody {
    Explicit {
        strings: Vec<BitString>,
    },
    Product {
        /// Per bit `[[a_re, a_im], [b_re, b_im]]`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pairs: Option<Vec<[[f64; 2]; 2]>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        preset: Option<Preset>,
        #[serde(default)]
        precision: Precision,
    },
}

/// State description file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub master_seed: u64,
    #[serde(flatten)]
    pub body: StateBody,
}

impl StateFile {
    pub fn to_state(&self) -> Result<SuperpositionState> {
        let state = match &self.body {
            StateBody::Explicit { strings } => {
                SuperpositionState::Explicit(ExplicitSet::new(strings.clone())?)
            }
            StateBody::Product { pairs, preset, precision } => {
                let p = match (pairs, preset) {
                    (Some(pairs), None) => ProductState::from_pairs(
                        pairs
                            .iter()
                            .map(|[a, b]| [Complex64::new(a[0], a[1]), Complex64::new(b[0], b[1])])
                            .collect(),
                    )?,
                    (None, Some(Preset::Zero)) => ProductState::basis_zero(self.n),
                    (None, Some(Preset::Full)) => ProductState::full_superposition(self.n),
                    (None, Some(Preset::Uniform)) => {
                        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                        ProductState::from_pairs(vec![[s, s]; self.n])?
                    }
                    _ => {
                        return Err(Error::InvalidArgument(
                            "product state needs exactly one of `pairs` or `preset`".into(),
                        ))
                    }
                };
                SuperpositionState::ProductForm(p.with_precision(*precision))
            }
        };
        if state.n() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: state.n() });
        }
        Ok(state)
    }
}

pub fn parse_state(json: &str) -> Result<StateFile> {
    serde_json::from_str(json).map_err(|e| Error::InvalidArgument(format!("state file: {e}")))
}

pub fn parse_gates(json: &str) -> Result<Vec<GateSpec>> {
    serde_json::from_str(json).map_err(|e| Error::InvalidArgument(format!("gate file: {e}")))
}

/// `<path>.json`, the sidecar location for a data file.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
