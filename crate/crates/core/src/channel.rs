//! Channel parameters, regime classification and the one-shot channel laws.
//!
//! One [`CellParams`] record describes both the interfering MAC and the
//! interfering BC: the BC is the same network with every link reversed and
//! every gain kept, so BC Tx`i` → Rx`j` has the gain of IMAC Tx`j` → Rx`i`.
//!
//! IMAC gains (transmitter → receiver):
//!
//! ```text
//!            Rx1   Rx2
//!   Tx1      n1    nM
//!   Tx2      n2    nM
//!   Tx3      nD    n3
//!   Tx4      nD    n4
//! ```
//!
//! IBC gains (transmitter → receiver):
//!
//! ```text
//!            Rx1   Rx2   Rx3   Rx4
//!   Tx1      n1    n2    nD    nD
//!   Tx2      nM    nM    n3    n4
//! ```

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{shift_apply, BitVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Imac,
    Ibc,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Imac => "imac",
            Model::Ibc => "ibc",
        }
    }

    pub fn transmitters(self) -> usize {
        match self {
            Model::Imac => 4,
            Model::Ibc => 2,
        }
    }

    pub fn receivers(self) -> usize {
        match self {
            Model::Imac => 2,
            Model::Ibc => 4,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "imac" => Ok(Model::Imac),
            "ibc" => Ok(Model::Ibc),
            other => Err(Error::Format(format!("unknown model {other:?}"))),
        }
    }
}

/// Gains of the two-cell network, in bit levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellParams {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub n4: usize,
    /// Interference caused by cell 1 at cell 2.
    pub nm: usize,
    /// Interference caused by cell 2 at cell 1.
    pub nd: usize,
    /// Ambient bit-vector length.
    pub q: usize,
}

impl CellParams {
    /// Validated parameters with `q` set to the largest gain.
    pub fn new(n1: usize, n2: usize, n3: usize, n4: usize, nm: usize, nd: usize) -> Result<Self> {
        let q = [n1, n2, n3, n4, nm, nd].into_iter().max().unwrap_or(0);
        CellParams::with_q(n1, n2, n3, n4, nm, nd, q)
    }

    pub fn with_q(n1: usize, n2: usize, n3: usize, n4: usize, nm: usize, nd: usize, q: usize) -> Result<Self> {
        let p = CellParams { n1, n2, n3, n4, nm, nd, q };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n1 < self.n2 {
            return Err(Error::Param(format!("n1 = {} < n2 = {}", self.n1, self.n2)));
        }
        if self.n3 < self.n4 {
            return Err(Error::Param(format!("n3 = {} < n4 = {}", self.n3, self.n4)));
        }
        let max = self.max_gain();
        if self.q < max {
            return Err(Error::Param(format!("q = {} below largest gain {max}", self.q)));
        }
        Ok(())
    }

    pub fn max_gain(&self) -> usize {
        [self.n1, self.n2, self.n3, self.n4, self.nm, self.nd]
            .into_iter()
            .max()
            .unwrap_or(0)
    }

    pub fn delta1(&self) -> usize {
        self.n1 - self.n2
    }

    pub fn delta2(&self) -> usize {
        self.n3 - self.n4
    }

    /// `nM / n1`, or zero when `n1 = 0`.
    pub fn alpha(&self) -> Ratio<i64> {
        if self.n1 == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(self.nm as i64, self.n1 as i64)
        }
    }

    /// The same network with the cell labels exchanged.
    pub fn swap_cells(&self) -> CellParams {
        CellParams {
            n1: self.n3,
            n2: self.n4,
            n3: self.n1,
            n4: self.n2,
            nm: self.nd,
            nd: self.nm,
            q: self.q,
        }
    }

    /// Gain from transmitter `tx` to receiver `rx` (both 1-based) in `model`.
    pub fn gain(&self, model: Model, tx: usize, rx: usize) -> Result<usize> {
        let g = match (model, tx, rx) {
            (Model::Imac, 1, 1) => self.n1,
            (Model::Imac, 2, 1) => self.n2,
            (Model::Imac, 3 | 4, 1) => self.nd,
            (Model::Imac, 1 | 2, 2) => self.nm,
            (Model::Imac, 3, 2) => self.n3,
            (Model::Imac, 4, 2) => self.n4,
            (Model::Ibc, 1, 1) => self.n1,
            (Model::Ibc, 1, 2) => self.n2,
            (Model::Ibc, 1, 3 | 4) => self.nd,
            (Model::Ibc, 2, 1 | 2) => self.nm,
            (Model::Ibc, 2, 3) => self.n3,
            (Model::Ibc, 2, 4) => self.n4,
            _ => {
                return Err(Error::Param(format!(
                    "no link Tx{tx} -> Rx{rx} in the {model} model"
                )))
            }
        };
        Ok(g)
    }

    pub fn to_record(&self, model: Model) -> ParamsRecord {
        ParamsRecord {
            model,
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            n4: self.n4,
            nm: self.nm,
            nd: self.nd,
            q: self.q,
        }
    }
}

impl fmt::Display for CellParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n1={} n2={} n3={} n4={} nM={} nD={} q={}",
            self.n1, self.n2, self.n3, self.n4, self.nm, self.nd, self.q
        )
    }
}

/// Wire form of [`CellParams`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsRecord {
    pub model: Model,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub n4: usize,
    #[serde(rename = "nM")]
    pub nm: usize,
    #[serde(rename = "nD")]
    pub nd: usize,
    pub q: usize,
}

impl ParamsRecord {
    pub fn params(&self) -> Result<CellParams> {
        CellParams::with_q(self.n1, self.n2, self.n3, self.n4, self.nm, self.nd, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeTag {
    VeryWeakSubA,
    VeryWeakSubB,
    VeryWeakMixed,
    OutOfVeryWeak,
}

impl RegimeTag {
    pub fn is_very_weak(self) -> bool {
        self != RegimeTag::OutOfVeryWeak
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::VeryWeakSubA => "SubA",
            RegimeTag::VeryWeakSubB => "SubB",
            RegimeTag::VeryWeakMixed => "Mixed",
            RegimeTag::OutOfVeryWeak => "OutOfVeryWeak",
        }
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where `nM + nD` sits relative to one cell's two direct gains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubCase {
    /// `nM + nD <= weaker direct gain`
    A,
    /// `weaker < nM + nD <= stronger`
    B,
    /// `nM + nD > stronger direct gain`
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Regime {
    pub tag: RegimeTag,
    pub cell1: SubCase,
    pub cell2: SubCase,
}

fn sub_case(total: usize, weak: usize, strong: usize) -> SubCase {
    if total <= weak {
        SubCase::A
    } else if total <= strong {
        SubCase::B
    } else {
        SubCase::Above
    }
}

pub fn classify_regime(p: &CellParams) -> Regime {
    let total = p.nm + p.nd;
    let cell1 = sub_case(total, p.n2, p.n1);
    let cell2 = sub_case(total, p.n4, p.n3);
    // a cell sitting exactly on total == weak gain counts towards SubB when
    // the other cell is strictly inside B
    let in_b = |weak: usize, strong: usize| weak <= total && total <= strong;
    let tag = if total > p.n1.min(p.n3) {
        RegimeTag::OutOfVeryWeak
    } else if total <= p.n2 && total <= p.n4 {
        RegimeTag::VeryWeakSubA
    } else if in_b(p.n2, p.n1) && in_b(p.n4, p.n3) {
        RegimeTag::VeryWeakSubB
    } else {
        RegimeTag::VeryWeakMixed
    };
    Regime { tag, cell1, cell2 }
}

fn check_len(p: &CellParams, xs: &[&BitVector]) -> Result<()> {
    for (i, x) in xs.iter().enumerate() {
        if x.len() != p.q {
            return Err(Error::Shape(format!(
                "input {} has length {}, expected q = {}",
                i + 1,
                x.len(),
                p.q
            )));
        }
    }
    Ok(())
}

fn superpose(q: usize, terms: &[(usize, &BitVector)]) -> Result<BitVector> {
    let mut y = BitVector::zeros(q);
    for &(n, x) in terms {
        y.xor_assign_unchecked(&shift_apply(q, n, x)?);
    }
    Ok(y)
}

/// Outputs `(y1, y2)` of the interfering MAC for inputs `x1..x4`.
pub fn imac_output(p: &CellParams, x: [&BitVector; 4]) -> Result<(BitVector, BitVector)> {
    check_len(p, &x)?;
    let y1 = superpose(p.q, &[(p.n1, x[0]), (p.n2, x[1]), (p.nd, x[2]), (p.nd, x[3])])?;
    let y2 = superpose(p.q, &[(p.nm, x[0]), (p.nm, x[1]), (p.n3, x[2]), (p.n4, x[3])])?;
    Ok((y1, y2))
}

/// Outputs `[y1, y2, y3, y4]` of the interfering BC for inputs `x1, x2`.
pub fn ibc_output(p: &CellParams, x1: &BitVector, x2: &BitVector) -> Result<[BitVector; 4]> {
    check_len(p, &[x1, x2])?;
    Ok([
        superpose(p.q, &[(p.n1, x1), (p.nm, x2)])?,
        superpose(p.q, &[(p.n2, x1), (p.nm, x2)])?,
        superpose(p.q, &[(p.n3, x2), (p.nd, x1)])?,
        superpose(p.q, &[(p.n4, x2), (p.nd, x1)])?,
    ])
}
