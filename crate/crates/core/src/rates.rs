//! Closed-form sum rates and bounds, all as exact rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{classify_regime, CellParams, RegimeTag};
use crate::error::{Error, Result};

/// An exact rational rate in bit levels, always in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rate(Ratio<i64>);

impl Rate {
    pub fn new(numer: i64, denom: i64) -> Result<Rate> {
        if denom <= 0 {
            return Err(Error::Param(format!("rate denominator {denom} must be positive")));
        }
        Ok(Rate(Ratio::new(numer, denom)))
    }

    pub fn integer(v: i64) -> Rate {
        Rate(Ratio::from_integer(v))
    }

    pub fn zero() -> Rate {
        Rate::integer(0)
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn floor(&self) -> i64 {
        Integer::div_floor(&self.numer(), &self.denom())
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rate {
        Rate(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `num/den` followed by the decimal value.
    pub fn describe(&self) -> String {
        format!("{}/{} ({})", self.numer(), self.denom(), self.to_f64())
    }
}

impl From<Ratio<i64>> for Rate {
    fn from(r: Ratio<i64>) -> Self {
        Rate(r)
    }
}

impl Add for Rate {
    type Output = Rate;
    fn add(self, rhs: Rate) -> Rate {
        Rate(self.0 + rhs.0)
    }
}

impl Sub for Rate {
    type Output = Rate;
    fn sub(self, rhs: Rate) -> Rate {
        Rate(self.0 - rhs.0)
    }
}

impl PartialEq<i64> for Rate {
    fn eq(&self, other: &i64) -> bool {
        self.0 == Ratio::from_integer(*other)
    }
}

impl PartialOrd<i64> for Rate {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&Ratio::from_integer(*other))
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rate({}/{})", self.numer(), self.denom())
    }
}

/// `floor(p / q)`, with `floor_ratio(p, 0) = 0`.
pub fn floor_ratio(p: usize, q: usize) -> usize {
    p.checked_div(q).unwrap_or(0)
}

/// Extra levels a `p`-level common window yields under alignment with shift `q`.
pub fn phi(p: usize, q: usize) -> usize {
    let l = floor_ratio(p, q);
    if l.is_multiple_of(2) {
        q + l * q / 2
    } else {
        p - (l - 1) * q / 2
    }
}

/// Parameters of one of the two subsystems the achievable scheme splits into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemParams {
    /// Direct gains of the interfering cell after removing the other cell's footprint.
    pub strong: i64,
    pub weak: i64,
    /// Interference window this cell causes at the other receiver.
    pub interference: usize,
    pub zeta: i64,
    pub delta: usize,
}

impl SubsystemParams {
    pub fn rate(&self) -> i64 {
        self.interference as i64 + self.zeta + phi(self.interference, self.delta) as i64
    }
}

pub fn subsystem_params(p: &CellParams) -> [SubsystemParams; 2] {
    let s = (p.nm + p.nd) as i64;
    [
        SubsystemParams {
            strong: p.n1 as i64 - p.nd as i64,
            weak: p.n2 as i64 - p.nd as i64,
            interference: p.nm,
            zeta: p.n2 as i64 - s,
            delta: p.delta1(),
        },
        SubsystemParams {
            strong: p.n3 as i64 - p.nm as i64,
            weak: p.n4 as i64 - p.nm as i64,
            interference: p.nd,
            zeta: p.n4 as i64 - s,
            delta: p.delta2(),
        },
    ]
}

fn require_sub_a(p: &CellParams) -> Result<()> {
    let tag = classify_regime(p).tag;
    if tag != RegimeTag::VeryWeakSubA {
        return Err(Error::Regime(format!(
            "achievable rate formula applies in SubA only, parameters are {tag} ({p})"
        )));
    }
    Ok(())
}

/// The achievable subsystem sum rates; they add up to [`achievable_sum`].
pub fn subsystem_rates(p: &CellParams) -> Result<(Rate, Rate)> {
    require_sub_a(p)?;
    let [a, b] = subsystem_params(p);
    Ok((Rate::integer(a.rate()), Rate::integer(b.rate())))
}

/// Alignment-scheme sum rate `n2 + n4 - nM - nD + phi(nM, Δ1) + phi(nD, Δ2)`.
///
/// Valid for both models; errors outside SubA.
pub fn achievable_sum(p: &CellParams) -> Result<Rate> {
    require_sub_a(p)?;
    Ok(achievable_formula(p))
}

/// The achievable-rate formula evaluated regardless of regime. Outside SubA
/// the value is not an achievability claim.
pub fn achievable_formula(p: &CellParams) -> Rate {
    let base = (p.n2 + p.n4) as i64 - (p.nm + p.nd) as i64;
    Rate::integer(base + phi(p.nm, p.delta1()) as i64 + phi(p.nd, p.delta2()) as i64)
}

fn require_very_weak(p: &CellParams) -> Result<()> {
    let tag = classify_regime(p).tag;
    if !tag.is_very_weak() {
        return Err(Error::Regime(format!(
            "nM + nD = {} exceeds min(n1, n3) = {}",
            p.nm + p.nd,
            p.n1.min(p.n3)
        )));
    }
    Ok(())
}

/// Sum-rate upper bound `n1 + n3 - nM/2 - nD/2`, the same for both models.
pub fn upper_bound_sum(p: &CellParams) -> Result<Rate> {
    require_very_weak(p)?;
    let twice = 2 * (p.n1 + p.n3) as i64 - (p.nm + p.nd) as i64;
    Rate::new(twice, 2)
}

/// Sum-rate upper bound with `k` transmitters per cell.
pub fn upper_bound_ktx(p: &CellParams, k: usize) -> Result<Rate> {
    if k == 0 {
        return Err(Error::Param("transmitter count k must be at least 1".into()));
    }
    require_very_weak(p)?;
    // n1 - nD + n3 - nM + (k-1)nD/k + (k-1)nM/k over a common denominator
    let k = k as i64;
    let direct = (p.n1 + p.n3) as i64;
    let cross = (p.nm + p.nd) as i64;
    Ok(Rate(Ratio::new(k * direct - cross, k)))
}

/// One point of a symmetric sweep over the interference ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WCurvePoint {
    pub alpha: Ratio<i64>,
    pub n1: usize,
    pub delta: usize,
    pub ni: usize,
    pub regime: RegimeTag,
    /// Present in SubA only.
    pub achievable: Option<Rate>,
    /// Present in the very weak regime.
    pub bound: Option<Rate>,
    /// `bound - achievable` when both exist.
    pub gap: Option<Rate>,
}

impl WCurvePoint {
    /// `Δ = 0`: the alignment shift vanishes.
    pub fn no_shift(&self) -> bool {
        self.delta == 0
    }

    pub fn regime_label(&self) -> String {
        if self.no_shift() && self.regime == RegimeTag::VeryWeakSubA {
            format!("{}:no-shift", self.regime)
        } else {
            self.regime.to_string()
        }
    }

    /// Achievable rate per cell (sum / 2).
    pub fn achievable_per_cell(&self) -> Option<Rate> {
        self.achievable.map(|r| Rate(r.0 / 2))
    }

    /// Achievable rate per link normalized by n1 (sum / 2 n1).
    pub fn achievable_per_link(&self) -> Option<Rate> {
        match (self.achievable, self.n1) {
            (Some(r), n) if n > 0 => Some(Rate(r.0 / (2 * n as i64))),
            _ => None,
        }
    }

    pub fn bound_per_cell(&self) -> Option<Rate> {
        self.bound.map(|r| Rate(r.0 / 2))
    }

    pub fn bound_per_link(&self) -> Option<Rate> {
        match (self.bound, self.n1) {
            (Some(r), n) if n > 0 => Some(Rate(r.0 / (2 * n as i64))),
            _ => None,
        }
    }
}

/// Symmetric sweep: `n3 = n1`, `n2 = n4 = n1 - delta`, `nM = nD = alpha * n1`.
///
/// Alphas that do not give an integer `ni` (or a negative one) are skipped
/// and reported in the returned diagnostics.
pub fn wcurve_sweep(n1: usize, delta: usize, alphas: &[Ratio<i64>]) -> Result<(Vec<WCurvePoint>, Vec<String>)> {
    if delta > n1 {
        return Err(Error::Param(format!("delta {delta} exceeds n1 {n1}")));
    }
    let results: Vec<std::result::Result<WCurvePoint, String>> = alphas
        .par_iter()
        .map(|&alpha| {
            let ni = alpha * Ratio::from_integer(n1 as i64);
            if !ni.is_integer() || ni.is_negative() {
                return Err(format!("alpha = {alpha} gives non-integer ni = {ni}, skipped"));
            }
            let ni = ni.to_integer() as usize;
            let p = CellParams::new(n1, n1 - delta, n1, n1 - delta, ni, ni)
                .map_err(|e| format!("alpha = {alpha}: {e}"))?;
            let regime = classify_regime(&p).tag;
            let achievable = achievable_sum(&p).ok();
            let bound = upper_bound_sum(&p).ok();
            let gap = match (achievable, bound) {
                (Some(a), Some(b)) => Some(b - a),
                _ => None,
            };
            Ok(WCurvePoint {
                alpha,
                n1,
                delta,
                ni,
                regime,
                achievable,
                bound,
                gap,
            })
        })
        .collect();
    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    for r in results {
        match r {
            Ok(p) => points.push(p),
            Err(d) => diagnostics.push(d),
        }
    }
    Ok((points, diagnostics))
}

/// Every integer `ni` in `0..=n1` as an alpha value `ni / n1`.
pub fn integer_alphas(n1: usize) -> Vec<Ratio<i64>> {
    if n1 == 0 {
        return vec![Ratio::zero()];
    }
    (0..=n1).map(|ni| Ratio::new(ni as i64, n1 as i64)).collect()
}

pub const WCURVE_CSV_HEADER: &str = "alpha_num,alpha_den,ni,achievable,bound_num,bound_den,gap_num,gap_den,regime";

/// Serializes sweep points as CSV; columns that do not apply are left empty.
pub fn wcurve_csv(points: &[WCurvePoint]) -> String {
    let mut out = String::from(WCURVE_CSV_HEADER);
    out.push('\n');
    for p in points {
        let opt_int = |r: Option<Rate>| r.map(|r| r.numer().to_string()).unwrap_or_default();
        let (bn, bd) = p
            .bound
            .map(|b| (b.numer().to_string(), b.denom().to_string()))
            .unwrap_or_default();
        let (gn, gd) = p
            .gap
            .map(|g| (g.numer().to_string(), g.denom().to_string()))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            p.alpha.numer(),
            p.alpha.denom(),
            p.ni,
            opt_int(p.achievable),
            bn,
            bd,
            gn,
            gd,
            p.regime_label()
        ));
    }
    out
}
