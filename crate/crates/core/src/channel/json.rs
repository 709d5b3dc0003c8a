use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Row-major matrix of `[re, im]` pairs.
pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

/// On-disk channel format:
/// `{"d_in", "d_out", "kraus": [matrix, ...], "name"?, "seed"?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<JsonMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| Error::Json(e.to_string()))
}

impl From<&QuantumChannel> for ChannelJson {
    fn from(ch: &QuantumChannel) -> Self {
        ChannelJson {
            d_in: ch.d_in(),
            d_out: ch.d_out(),
            kraus: ch.kraus().iter().map(matrix_to_json).collect(),
            name: ch.name().map(str::to_string),
            seed: ch.seed(),
        }
    }
}

impl TryFrom<&ChannelJson> for QuantumChannel {
    type Error = Error;

    fn try_from(j: &ChannelJson) -> Result<Self> {
        let kraus = j.kraus.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
        let mut ch = QuantumChannel::new(j.d_in, j.d_out, kraus)?;
        if let Some(n) = &j.name {
            ch = ch.with_name(n.clone());
        }
        if let Some(s) = j.seed {
            ch = ch.with_seed(s);
        }
        Ok(ch)
    }
}

impl QuantumChannel {
    /// Pretty-printed channel JSON. Floats use the shortest representation
    /// that parses back to the identical `f64`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ChannelJson::from(self)).expect("channel JSON serializes")
    }

    /// Parses channel JSON and re-validates trace preservation.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: ChannelJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        QuantumChannel::try_from(&j)
    }
}
