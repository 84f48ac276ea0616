//! Single-shot linear coding schemes over GF(2).
//!
//! A scheme assigns each message a `q × k` generator matrix; a transmitter's
//! codeword is the XOR of its messages' `generator · bits`. Schemes are
//! certified by [`verify`] (rank test) and cross-checked by
//! [`verify_exhaustive`] (enumeration through the channel law).

mod construct;
mod dual;
mod search;
mod verify;

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{CellParams, Model, ParamsRecord};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

pub use construct::{construct_imac, imac_layout, ImacLayout};
pub use dual::dualize;
pub use search::{search_best, SearchConfig, SearchOutcome};
pub use verify::{receiver_blocks, verify, verify_exhaustive, Certificate, ReceiverCertificate, EXHAUSTIVE_BIT_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageEntry {
    pub name: String,
    /// 1-based transmitter id.
    pub owner: usize,
    /// 1-based receiver ids that must decode this message.
    pub decoders: BTreeSet<usize>,
    /// `q × kbits`; column `j` is the codeword contribution of bit `j`.
    pub generator: BitMatrix,
}

impl MessageEntry {
    pub fn new(name: &str, owner: usize, decoders: &[usize], generator: BitMatrix) -> Self {
        MessageEntry {
            name: name.to_string(),
            owner,
            decoders: decoders.iter().copied().collect(),
            generator,
        }
    }

    /// A message whose bits occupy the given level sets, one set per bit.
    pub fn from_level_columns(name: &str, owner: usize, decoders: &[usize], q: usize, columns: &[Vec<usize>]) -> Result<Self> {
        let cols = columns
            .iter()
            .map(|levels| BitVector::from_levels(q, levels))
            .collect::<Result<Vec<_>>>()?;
        Ok(MessageEntry::new(name, owner, decoders, BitMatrix::from_columns(q, &cols)?))
    }

    pub fn kbits(&self) -> usize {
        self.generator.cols()
    }

    /// Per bit, the 1-based levels set in its generator column.
    pub fn level_columns(&self) -> Vec<Vec<usize>> {
        self.generator.columns().iter().map(BitVector::ones).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearScheme {
    pub model: Model,
    pub params: CellParams,
    pub messages: Vec<MessageEntry>,
}

/// Standard message layout of a model: `(name, owner, decoders)`.
pub fn message_layout(model: Model) -> &'static [(&'static str, usize, &'static [usize])] {
    match model {
        Model::Imac => &[("m1", 1, &[1]), ("m2", 2, &[1]), ("m3", 3, &[2]), ("m4", 4, &[2])],
        Model::Ibc => &[
            ("m12", 1, &[1, 2]),
            ("m1", 1, &[1]),
            ("m2", 1, &[2]),
            ("m34", 2, &[3, 4]),
            ("m3", 2, &[3]),
            ("m4", 2, &[4]),
        ],
    }
}

impl LinearScheme {
    /// A scheme with the model's standard messages, all carrying zero bits.
    pub fn empty(model: Model, params: CellParams) -> Self {
        let messages = message_layout(model)
            .iter()
            .map(|&(name, owner, dec)| MessageEntry::new(name, owner, dec, BitMatrix::zeros(params.q, 0)))
            .collect();
        LinearScheme { model, params, messages }
    }

    /// Builds a scheme in the standard layout from per-message level columns,
    /// given in layout order.
    pub fn from_columns(model: Model, params: CellParams, columns: &[Vec<Vec<usize>>]) -> Result<Self> {
        let layout = message_layout(model);
        if columns.len() != layout.len() {
            return Err(Error::Shape(format!(
                "{model} scheme needs {} messages, got {}",
                layout.len(),
                columns.len()
            )));
        }
        let messages = layout
            .iter()
            .zip(columns)
            .map(|(&(name, owner, dec), cols)| MessageEntry::from_level_columns(name, owner, dec, params.q, cols))
            .collect::<Result<Vec<_>>>()?;
        let s = LinearScheme { model, params, messages };
        s.validate()?;
        Ok(s)
    }

    pub fn total_bits(&self) -> usize {
        self.messages.iter().map(MessageEntry::kbits).sum()
    }

    pub fn message(&self, name: &str) -> Option<&MessageEntry> {
        self.messages.iter().find(|m| m.name == name)
    }

    /// Checks ids, generator shapes and the model's message structure.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let (ntx, nrx) = (self.model.transmitters(), self.model.receivers());
        let mut names = BTreeSet::new();
        for m in &self.messages {
            if !names.insert(m.name.as_str()) {
                return Err(Error::Format(format!("duplicate message name {:?}", m.name)));
            }
            if m.owner == 0 || m.owner > ntx {
                return Err(Error::Param(format!("message {} owned by unknown transmitter {}", m.name, m.owner)));
            }
            if let Some(&r) = m.decoders.iter().find(|&&r| r == 0 || r > nrx) {
                return Err(Error::Param(format!("message {} decoded by unknown receiver {r}", m.name)));
            }
            if m.generator.rows() != self.params.q {
                return Err(Error::Shape(format!(
                    "message {} generator has {} rows, expected q = {}",
                    m.name,
                    m.generator.rows(),
                    self.params.q
                )));
            }
        }
        let layout = message_layout(self.model);
        if self.messages.len() != layout.len() {
            return Err(Error::Format(format!(
                "{} scheme must list exactly {} messages",
                self.model,
                layout.len()
            )));
        }
        for &(name, owner, dec) in layout {
            let m = self
                .message(name)
                .ok_or_else(|| Error::Format(format!("{} scheme is missing message {name}", self.model)))?;
            if m.owner != owner || !m.decoders.iter().copied().eq(dec.iter().copied()) {
                return Err(Error::Format(format!(
                    "message {name} must be owned by Tx{owner} and decoded by {dec:?}"
                )));
            }
        }
        Ok(())
    }

    /// Codeword of transmitter `tx` for the given per-message bit assignments
    /// (indexed like `self.messages`).
    pub fn codeword(&self, tx: usize, bits: &[BitVector]) -> Result<BitVector> {
        let mut x = BitVector::zeros(self.params.q);
        for (m, b) in self.messages.iter().zip(bits) {
            if m.owner == tx {
                x.xor_assign_unchecked(&m.generator.mul_vec(b)?);
            }
        }
        Ok(x)
    }

    pub fn to_record(&self) -> SchemeRecord {
        SchemeRecord {
            model: self.model,
            params: self.params.to_record(self.model),
            messages: self
                .messages
                .iter()
                .map(|m| MessageRecord {
                    name: m.name.clone(),
                    owner: m.owner,
                    decoders: m.decoders.iter().copied().collect(),
                    columns: m.level_columns(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("scheme record serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("scheme record serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: SchemeRecord = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        rec.into_scheme()
    }

    pub fn read(path: &Path) -> Result<Self> {
        LinearScheme::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut s = self.to_json_pretty();
        s.push('\n');
        std::fs::write(path, s)?;
        Ok(())
    }
}

/// JSON form of a scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeRecord {
    pub model: Model,
    pub params: ParamsRecord,
    pub messages: Vec<MessageRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageRecord {
    pub name: String,
    pub owner: usize,
    pub decoders: Vec<usize>,
    pub columns: Vec<Vec<usize>>,
}

impl SchemeRecord {
    pub fn into_scheme(self) -> Result<LinearScheme> {
        if self.params.model != self.model {
            return Err(Error::Format(format!(
                "scheme model {} disagrees with params model {}",
                self.model, self.params.model
            )));
        }
        let params = self.params.params()?;
        let messages = self
            .messages
            .iter()
            .map(|m| MessageEntry::from_level_columns(&m.name, m.owner, &m.decoders, params.q, &m.columns))
            .collect::<Result<Vec<_>>>()?;
        let s = LinearScheme {
            model: self.model,
            params,
            messages,
        };
        s.validate()?;
        Ok(s)
    }
}
