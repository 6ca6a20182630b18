use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::tensor::Mat8;
use crate::tensor::{Gate3, C64};
use crate::{Error, Result};

pub const GATE_FORMAT_VERSION: &str = "triu-gate/1";

/// Leg convention recorded in every file; see [`crate::tensor`].
const LEG_CONVENTION: &str = "M[out,in], in=4a1+2a2+a3, out=4a4+2a5+a6, a4 above a1";

/// On-disk JSON form of a three-qubit gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateFile {
    pub version: String,
    pub legs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// 64 row-major `[re, im]` pairs.
    pub entries: Vec<[f64; 2]>,
}

impl GateFile {
    pub fn from_gate(g: &Gate3, label: Option<String>) -> Self {
        GateFile {
            version: GATE_FORMAT_VERSION.into(),
            legs: LEG_CONVENTION.into(),
            label,
            entries: g.tensor().entries_row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_gate(&self) -> Result<Gate3> {
        if self.version != GATE_FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported gate format {:?}", self.version)));
        }
        if self.entries.len() != 64 {
            return Err(Error::Parse(format!("expected 64 entries, found {}", self.entries.len())));
        }
        Gate3::from_matrix(Mat8::from_fn(|r, c| {
            let [re, im] = self.entries[8 * r + c];
            C64::new(re, im)
        }))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: &Path) -> Result<Gate3> {
        Self::from_json(&std::fs::read_to_string(path)?)?.to_gate()
    }

    pub fn write(g: &Gate3, path: &Path) -> Result<()> {
        std::fs::write(path, Self::from_gate(g, None).to_json()?)?;
        Ok(())
    }
}

/// SHA-256 over the little-endian bytes of the row-major entries.
pub fn gate_hash(g: &Gate3) -> String {
    let mut h = Sha256::new();
    for z in g.tensor().entries_row_major() {
        h.update(z.re.to_le_bytes());
        h.update(z.im.to_le_bytes());
    }
    hex::encode(h.finalize())
}
