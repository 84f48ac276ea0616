//! MAC → BC duality transform.
//!
//! The dual network keeps every link gain and reverses its direction. Each
//! IMAC cell's two transmitters become one BC transmitter: the two codewords
//! are merged as they appear at the IMAC receiver (each shifted by its own
//! direct gain) and the merged vector is turned upside down. A message bit
//! sent on level `L` by an IMAC transmitter with direct gain `g` therefore
//! moves to level `g - L + 1` of the BC transmitter.
//! Gains stay on their links, so the dual keeps the parameter record.

use crate::channel::Model;
use crate::error::{Error, Result};
use crate::gf2::{mat_mul, reverse_levels, BitMatrix};

use super::{message_layout, LinearScheme, MessageEntry};

/// Transforms an IMAC scheme into an IBC scheme of the same total rate.
///
/// Private messages carry the transformed generators; the common messages
/// `m12`, `m34` are present with zero bits. The result is not certified
/// here; run [`super::verify`] on it.
pub fn dualize(s: &LinearScheme) -> Result<LinearScheme> {
    if s.model != Model::Imac {
        return Err(Error::Param(format!("dualize expects an imac scheme, got {}", s.model)));
    }
    let q = s.params.q;
    let merged = |name: &str| -> Result<BitMatrix> {
        let Some(m) = s.message(name) else {
            return Ok(BitMatrix::zeros(q, 0));
        };
        // the owner's own receiver is Rx1 for cell 1 and Rx2 for cell 2
        let rx = if m.owner <= 2 { 1 } else { 2 };
        let gain = s.params.gain(Model::Imac, m.owner, rx)?;
        let received = mat_mul(&BitMatrix::shift_pow(q, q - gain), &m.generator)?;
        Ok(reverse_levels(&received))
    };
    let messages = message_layout(Model::Ibc)
        .iter()
        .map(|&(name, owner, dec)| {
            let g = match name {
                "m12" | "m34" => BitMatrix::zeros(q, 0),
                other => merged(other)?,
            };
            Ok(MessageEntry::new(name, owner, dec, g))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearScheme {
        model: Model::Ibc,
        params: s.params,
        messages,
    })
}
