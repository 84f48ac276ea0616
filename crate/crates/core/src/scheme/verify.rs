use std::collections::HashMap;

use rayon::prelude::*;

use crate::channel::{ibc_output, imac_output, Model};
use crate::error::{Error, Result};
use crate::gf2::{rank, shift_apply, BitMatrix, BitVector};
use crate::rates::Rate;

use super::LinearScheme;

/// Largest total bit count [`verify_exhaustive`] will enumerate.
pub const EXHAUSTIVE_BIT_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceiverCertificate {
    pub receiver: usize,
    pub desired_bits: usize,
    pub desired_rank: usize,
    pub nuisance_rank: usize,
    pub joint_rank: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub receivers: Vec<ReceiverCertificate>,
    pub pass: bool,
    pub total_bits: usize,
    /// Total bits when every receiver passes, zero otherwise.
    pub rate: Rate,
}

impl Certificate {
    fn from_receivers(receivers: Vec<ReceiverCertificate>, total_bits: usize) -> Certificate {
        let pass = receivers.iter().all(|r| r.pass);
        Certificate {
            receivers,
            pass,
            total_bits,
            rate: Rate::integer(if pass { total_bits as i64 } else { 0 }),
        }
    }
}

/// Applies the `tx → rx` channel to every column of `g`.
fn through_link(s: &LinearScheme, tx: usize, rx: usize, g: &BitMatrix) -> Result<BitMatrix> {
    let q = s.params.q;
    let n = s.params.gain(s.model, tx, rx)?;
    let cols = g
        .columns()
        .iter()
        .map(|c| shift_apply(q, n, c))
        .collect::<Result<Vec<_>>>()?;
    BitMatrix::from_columns(q, &cols)
}

/// Desired block `D` and nuisance block `N` as seen at receiver `rx`.
pub fn receiver_blocks(s: &LinearScheme, rx: usize) -> Result<(BitMatrix, BitMatrix)> {
    if rx == 0 || rx > s.model.receivers() {
        return Err(Error::Param(format!("unknown receiver {rx} for the {} model", s.model)));
    }
    let q = s.params.q;
    let mut desired = Vec::new();
    let mut nuisance = Vec::new();
    for m in &s.messages {
        let image = through_link(s, m.owner, rx, &m.generator)?;
        if m.decoders.contains(&rx) {
            desired.extend(image.columns());
        } else {
            nuisance.extend(image.columns());
        }
    }
    Ok((BitMatrix::from_columns(q, &desired)?, BitMatrix::from_columns(q, &nuisance)?))
}

/// Rank certificate: a receiver passes when its desired images are
/// independent and meet the nuisance span only at zero.
pub fn verify(s: &LinearScheme) -> Certificate {
    let receivers = (1..=s.model.receivers())
        .map(|rx| {
            let (d, n) = receiver_blocks(s, rx).expect("receiver ids are in range");
            let desired_rank = rank(&d);
            let nuisance_rank = rank(&n);
            let joint_rank = rank(&d.hconcat(&n).expect("blocks share q rows"));
            ReceiverCertificate {
                receiver: rx,
                desired_bits: d.cols(),
                desired_rank,
                nuisance_rank,
                joint_rank,
                pass: desired_rank == d.cols() && joint_rank == desired_rank + nuisance_rank,
            }
        })
        .collect();
    Certificate::from_receivers(receivers, s.total_bits())
}

fn unpack(bits: u32, offset: usize, len: usize) -> BitVector {
    let mut v = BitVector::zeros(len);
    for i in 0..len {
        if (bits >> (offset + i)) & 1 == 1 {
            v.set_index(i, true);
        }
    }
    v
}

/// Brute-force oracle for [`verify`].
///
/// Runs every message-bit assignment through the channel law and checks,
/// per receiver, that equal outputs always carry equal desired bits. The
/// rank fields of the returned certificate hold the number of distinct
/// desired tuples (`desired_rank`, as log2) and distinct outputs seen.
pub fn verify_exhaustive(s: &LinearScheme) -> Result<Certificate> {
    let total = s.total_bits();
    if total > EXHAUSTIVE_BIT_LIMIT {
        return Err(Error::Capacity(format!(
            "{total} message bits exceed the exhaustive limit of {EXHAUSTIVE_BIT_LIMIT}"
        )));
    }
    s.validate()?;
    let offsets: Vec<usize> = s
        .messages
        .iter()
        .scan(0, |acc, m| {
            let o = *acc;
            *acc += m.kbits();
            Some(o)
        })
        .collect();
    let nrx = s.model.receivers();
    // desired-bit mask per receiver over the packed assignment
    let desired_masks: Vec<u32> = (1..=nrx)
        .map(|rx| {
            s.messages
                .iter()
                .zip(&offsets)
                .filter(|(m, _)| m.decoders.contains(&rx))
                .map(|(m, &o)| ((1u32 << m.kbits()) - 1) << o)
                .fold(0, |a, b| a | b)
        })
        .collect();

    let outputs = |assignment: u32| -> Result<Vec<BitVector>> {
        let bits: Vec<BitVector> = s
            .messages
            .iter()
            .zip(&offsets)
            .map(|(m, &o)| unpack(assignment, o, m.kbits()))
            .collect();
        let x: Vec<BitVector> = (1..=s.model.transmitters())
            .map(|tx| s.codeword(tx, &bits))
            .collect::<Result<_>>()?;
        Ok(match s.model {
            Model::Imac => {
                let (y1, y2) = imac_output(&s.params, [&x[0], &x[1], &x[2], &x[3]])?;
                vec![y1, y2]
            }
            Model::Ibc => ibc_output(&s.params, &x[0], &x[1])?.to_vec(),
        })
    };

    let all: Vec<Vec<BitVector>> = (0..(1u32 << total))
        .into_par_iter()
        .map(outputs)
        .collect::<Result<_>>()?;

    let receivers = (0..nrx)
        .map(|r| {
            let mask = desired_masks[r];
            let mut seen: HashMap<&BitVector, u32> = HashMap::new();
            let mut pass = true;
            for (assignment, ys) in all.iter().enumerate() {
                let d = assignment as u32 & mask;
                match seen.get(&ys[r]) {
                    Some(&prev) if prev != d => {
                        pass = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(&ys[r], d);
                    }
                }
            }
            ReceiverCertificate {
                receiver: r + 1,
                desired_bits: mask.count_ones() as usize,
                desired_rank: mask.count_ones() as usize,
                nuisance_rank: 0,
                joint_rank: seen.len(),
                pass,
            }
        })
        .collect();
    Ok(Certificate::from_receivers(receivers, total))
}
