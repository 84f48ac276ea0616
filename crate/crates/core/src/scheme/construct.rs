//! Interference-alignment construction for the interfering MAC.
//!
//! Each cell is laid out independently, with transmit levels counted from
//! the top (level 1 = MSB). For a cell with strong gain `ns`, shift `Δ`,
//! outgoing interference window `w` (levels `1..=w` reach the other cell)
//! and incoming window `v` (the other cell's top `v` levels reach the
//! bottom `v` levels of this receiver):
//!
//! * Window rows `1..=w` are cut into `Δ`-sized blocks. Rows of even blocks
//!   (0-based) go to the strong transmitter when the row `Δ` further down is
//!   still inside the window; rows of odd blocks go to the weak transmitter,
//!   whose level `t - Δ` then lands on row `t` here and aligns with the
//!   strong transmitter's level `t - Δ` at the other receiver.
//! * Rows `w+1 ..= ns-v` carry strong-transmitter bits with no outgoing
//!   interference.
//! * The bottom `v` rows carry strong-transmitter bits wherever the other
//!   cell left its window level unused.
//!
//! The outgoing footprint is exactly the strong transmitter's window levels,
//! so each cell nets `Δ + ζ + phi(w, Δ)` plus the unused part of `v`.

use crate::channel::{classify_regime, CellParams, Model, RegimeTag};
use crate::error::{Error, Result};
use crate::rates::{achievable_sum, upper_bound_sum};

use super::search::{search_best, SearchConfig};
use super::verify::verify;
use super::LinearScheme;

/// Transmit levels chosen for one cell.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CellLayout {
    pub strong: Vec<usize>,
    pub weak: Vec<usize>,
}

impl CellLayout {
    /// Window levels (`<= w`) used by either transmitter.
    pub fn footprint(&self, w: usize) -> Vec<usize> {
        let mut f: Vec<usize> = self
            .strong
            .iter()
            .chain(&self.weak)
            .copied()
            .filter(|&l| l <= w)
            .collect();
        f.sort_unstable();
        f.dedup();
        f
    }
}

/// Levels of all four IMAC transmitters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImacLayout {
    pub cell1: CellLayout,
    pub cell2: CellLayout,
}

fn window_rows(w: usize, delta: usize) -> CellLayout {
    let mut c = CellLayout::default();
    if delta == 0 {
        return c;
    }
    for t in 1..=w {
        if ((t - 1) / delta).is_multiple_of(2) {
            if t + delta <= w {
                c.strong.push(t);
            }
        } else {
            c.weak.push(t - delta);
        }
    }
    c
}

fn fill_cell(strong_gain: usize, w: usize, v: usize, mut cell: CellLayout, other_footprint: &[usize]) -> CellLayout {
    cell.strong.extend(w + 1..=strong_gain - v);
    cell.strong
        .extend((1..=v).filter(|j| !other_footprint.contains(j)).map(|j| strong_gain - v + j));
    cell.strong.sort_unstable();
    cell.weak.sort_unstable();
    cell
}

/// Level layout of the alignment scheme. Requires SubA.
pub fn imac_layout(p: &CellParams) -> Result<ImacLayout> {
    let tag = classify_regime(p).tag;
    if tag != RegimeTag::VeryWeakSubA {
        return Err(Error::Regime(format!("alignment construction needs SubA, parameters are {tag}")));
    }
    let w1 = window_rows(p.nm, p.delta1());
    let w2 = window_rows(p.nd, p.delta2());
    let f1 = w1.footprint(p.nm);
    let f2 = w2.footprint(p.nd);
    Ok(ImacLayout {
        cell1: fill_cell(p.n1, p.nm, p.nd, w1, &f2),
        cell2: fill_cell(p.n3, p.nd, p.nm, w2, &f1),
    })
}

fn unit_columns(levels: &[usize]) -> Vec<Vec<usize>> {
    levels.iter().map(|&l| vec![l]).collect()
}

/// Builds and certifies the alignment scheme for SubA parameters.
///
/// The result carries one unit column per message bit and reaches
/// [`achievable_sum`]. If the layout ever fails to certify, a bounded search
/// is tried before giving up with [`Error::Construction`].
pub fn construct_imac(p: &CellParams) -> Result<LinearScheme> {
    let target = achievable_sum(p)?;
    let layout = imac_layout(p)?;
    let scheme = LinearScheme::from_columns(
        Model::Imac,
        *p,
        &[
            unit_columns(&layout.cell1.strong),
            unit_columns(&layout.cell1.weak),
            unit_columns(&layout.cell2.strong),
            unit_columns(&layout.cell2.weak),
        ],
    )?;
    let cert = verify(&scheme);
    if cert.pass && cert.rate == target {
        return Ok(scheme);
    }
    let best_layout = cert.pass.then(|| Box::new(scheme));
    if p.q <= SearchConfig::MAX_Q {
        let outcome = search_best(p, &SearchConfig::default())?;
        if outcome.rate >= target {
            return Ok(outcome.scheme);
        }
        return Err(Error::Construction {
            message: format!("best verified rate {} below target {target} for {p}", outcome.rate),
            best: Some(Box::new(outcome.scheme)),
        });
    }
    Err(Error::Construction {
        message: format!(
            "alignment layout {} for {p} (target {target}, bound {})",
            if cert.pass { "fell short" } else { "failed to certify" },
            upper_bound_sum(p)?
        ),
        best: best_layout,
    })
}
