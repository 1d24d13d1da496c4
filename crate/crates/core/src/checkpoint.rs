//! Learned-parameter and checkpoint files.
//!
//! One JSON document holds the decoder parameters, the identity of the code
//! they were trained for and, for training checkpoints, the optimiser state.
//! The layout is described in the README.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::code::LinearCode;
use crate::decoder::{DecoderParams, Variant};
use crate::error::{Error, Result};
use crate::train::{AdamState, TrainConfig};

pub const FORMAT: &str = "noms-decoder-params";
pub const VERSION: u32 = 1;

/// Enough about a code to refuse parameters trained for a different one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeIdentity {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub edges: usize,
    /// FNV-1a of the parity-check matrix, 16 hex digits.
    pub h_checksum: String,
    /// How the code was specified on the command line, so tools can
    /// rebuild it from the file alone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl CodeIdentity {
    pub fn of(code: &LinearCode) -> Self {
        CodeIdentity {
            name: code.name().to_string(),
            n: code.n(),
            k: code.k(),
            edges: code.graph().num_edges(),
            h_checksum: format!("{:016x}", code.parity_check().checksum()),
            source: None,
        }
    }

    /// Errors unless `code` has the same matrix.
    pub fn check(&self, code: &LinearCode) -> Result<()> {
        let other = CodeIdentity::of(code);
        if self.h_checksum != other.h_checksum || self.n != other.n || self.edges != other.edges {
            return Err(Error::Format(format!(
                "parameters were trained for {} (n={}, E={}, H {}), not {} (n={}, E={}, H {})",
                self.name, self.n, self.edges, self.h_checksum, other.name, other.n, other.edges, other.h_checksum
            )));
        }
        Ok(())
    }
}

/// Optimiser state needed to resume training exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingState {
    pub variant: Variant,
    pub config: TrainConfig,
    pub adam: AdamState,
    /// 0-based index of the next minibatch. Together with the seed this
    /// fixes every random draw still to come.
    pub next_minibatch: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamFile {
    pub format: String,
    pub version: u32,
    pub code: CodeIdentity,
    pub params: DecoderParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training: Option<TrainingState>,
    /// Path of the run manifest that produced this file, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<String>,
}

impl ParamFile {
    pub fn new(code: &LinearCode, params: DecoderParams) -> Self {
        ParamFile {
            format: FORMAT.to_string(),
            version: VERSION,
            code: CodeIdentity::of(code),
            params,
            training: None,
            manifest: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ParamFile = serde_json::from_str(text)?;
        if file.format != FORMAT {
            return Err(Error::Format(format!("unexpected format tag {:?}", file.format)));
        }
        if file.version != VERSION {
            return Err(Error::Format(format!("unsupported version {} (expected {VERSION})", file.version)));
        }
        Ok(file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Parameters after checking they belong to `code`.
    pub fn params_for(&self, code: &LinearCode) -> Result<&DecoderParams> {
        self.code.check(code)?;
        self.params.validate(code)?;
        Ok(&self.params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bch::{construct_bch, HForm};
    use crate::decoder::Tying;

    #[test]
    fn round_trip() {
        let code = construct_bch(4, 15, 2, HForm::Systematic).unwrap();
        let params = DecoderParams::noms(2, Tying::PerEdge, (0..2 * code.graph().num_edges()).map(|i| i as f64 * 0.1 - 1.3).collect());
        let mut f = ParamFile::new(&code, params.clone());
        f.training = Some(TrainingState {
            variant: Variant::Noms,
            config: TrainConfig::default(),
            adam: AdamState::new(params.num_trainable()),
            next_minibatch: 7,
        });
        let back = ParamFile::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.params_for(&code).unwrap(), &params);
    }

    #[test]
    fn rejects_other_code_and_versions() {
        let a = construct_bch(4, 15, 2, HForm::Systematic).unwrap();
        let b = construct_bch(4, 15, 2, HForm::Cyclic).unwrap();
        let f = ParamFile::new(&a, DecoderParams::spa(5));
        assert!(matches!(f.params_for(&b), Err(Error::Format(_))));
        let mut g = f.clone();
        g.version = 99;
        assert!(matches!(ParamFile::from_json(&g.to_json().unwrap()), Err(Error::Format(_))));
    }
}
