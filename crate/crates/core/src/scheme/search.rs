//! Bounded exhaustive search over level-assignment schemes for the IMAC.
//!
//! Generator columns are restricted to weight `<= max_col_weight`. Whether a
//! scheme certifies depends only on the column span of each message, so the
//! search enumerates distinct spans per transmitter, each represented by its
//! lexicographically smallest spanning column list. Cells are paired into
//! candidate `(desired image, outgoing interference)` signatures and the two
//! cells are then combined in rate order with pruning.
//!
//! Ties on rate are broken by the lexicographically smallest encoding, the
//! per-message list of level columns, so results do not depend on thread
//! scheduling.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::channel::{CellParams, Model};
use crate::error::{Error, Result};
use crate::gf2::rank_masks;
use crate::rates::Rate;

use super::verify::verify;
use super::LinearScheme;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of set levels in a generator column (1 or 2).
    pub max_col_weight: usize,
    /// Largest ambient length the search accepts.
    pub max_q: usize,
    /// Maximum number of cell-pair combinations to examine.
    pub budget: u64,
}

impl SearchConfig {
    pub const MAX_Q: usize = 6;

    pub fn with_weight(max_col_weight: usize) -> Self {
        SearchConfig {
            max_col_weight,
            ..SearchConfig::default()
        }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_col_weight: 1,
            max_q: SearchConfig::MAX_Q,
            budget: 2_000_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub scheme: LinearScheme,
    pub rate: Rate,
    /// Cell-pair combinations examined.
    pub evaluated: u64,
    /// False when the budget ran out before the space was covered.
    pub complete: bool,
}

type Encoding = Vec<Vec<Vec<usize>>>;

fn levels_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| (mask >> i) & 1 == 1).map(|i| i + 1).collect()
}

/// Column order used for representatives: by level list, lexicographically.
fn column_key(mask: u64) -> Vec<usize> {
    levels_of(mask)
}

/// Canonical reduced basis of a span, usable as a map key.
fn span_key(cols: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &c in cols {
        let mut v = c;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    // fully reduce
    basis.sort_unstable_by(|a, b| b.cmp(a));
    for i in 0..basis.len() {
        let top = 63 - basis[i].leading_zeros();
        for j in 0..basis.len() {
            if i != j && (basis[j] >> top) & 1 == 1 {
                basis[j] ^= basis[i];
            }
        }
    }
    basis.sort_unstable();
    basis
}

fn through(q: usize, gain: usize, col: u64) -> u64 {
    let full = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
    if gain == 0 {
        return 0;
    }
    (col << (q - gain)) & full
}

/// A candidate span for one transmitter, with its representative columns.
#[derive(Debug, Clone)]
struct SpanChoice {
    columns: Vec<u64>,
}

impl SpanChoice {
    fn dim(&self) -> usize {
        self.columns.len()
    }

    fn encoding(&self) -> Vec<Vec<usize>> {
        self.columns.iter().map(|&c| levels_of(c)).collect()
    }
}

/// All spans reachable with independent weight-bounded columns whose images
/// through `gain` stay independent, keyed to their smallest representative.
fn span_choices(q: usize, weight: usize, gain: usize) -> Vec<SpanChoice> {
    let mut candidates: Vec<u64> = (1u64..(1u64 << q))
        .filter(|c| c.count_ones() as usize <= weight)
        .collect();
    candidates.sort_by_key(|&c| column_key(c));

    let mut best: HashMap<Vec<u64>, Vec<u64>> = HashMap::new();
    let mut stack: Vec<u64> = Vec::new();
    fn recurse(
        start: usize,
        candidates: &[u64],
        q: usize,
        gain: usize,
        stack: &mut Vec<u64>,
        best: &mut HashMap<Vec<u64>, Vec<u64>>,
    ) {
        let key = span_key(stack);
        let enc: Vec<Vec<usize>> = stack.iter().map(|&c| column_key(c)).collect();
        match best.get(&key) {
            Some(existing) => {
                let old: Vec<Vec<usize>> = existing.iter().map(|&c| column_key(c)).collect();
                if enc < old {
                    best.insert(key, stack.clone());
                }
            }
            None => {
                best.insert(key, stack.clone());
            }
        }
        for i in start..candidates.len() {
            let c = candidates[i];
            stack.push(c);
            let images: Vec<u64> = stack.iter().map(|&s| through(q, gain, s)).collect();
            if rank_masks(&images) == stack.len() {
                recurse(i + 1, candidates, q, gain, stack, best);
            }
            stack.pop();
        }
    }
    recurse(0, &candidates, q, gain, &mut stack, &mut best);
    let mut out: Vec<SpanChoice> = best.into_values().map(|columns| SpanChoice { columns }).collect();
    out.sort_by_key(|a| a.encoding());
    out
}

/// One cell's joint choice, reduced to what the other cell can observe.
#[derive(Debug, Clone)]
struct CellCandidate {
    bits: usize,
    /// Span of desired images at the own receiver.
    desired: Vec<u64>,
    /// Span of this cell's signals at the other receiver.
    outgoing: Vec<u64>,
    encoding: (Vec<Vec<usize>>, Vec<Vec<usize>>),
}

fn cell_candidates(
    q: usize,
    weight: usize,
    strong_gain: usize,
    weak_gain: usize,
    cross_gain: usize,
) -> Vec<CellCandidate> {
    let strong = span_choices(q, weight, strong_gain);
    let weak = span_choices(q, weight, weak_gain);
    let pairs: Vec<CellCandidate> = strong
        .par_iter()
        .flat_map_iter(|a| {
            weak.iter().filter_map(move |b| {
                let mut desired: Vec<u64> = a.columns.iter().map(|&c| through(q, strong_gain, c)).collect();
                desired.extend(b.columns.iter().map(|&c| through(q, weak_gain, c)));
                let bits = a.dim() + b.dim();
                if rank_masks(&desired) != bits {
                    return None;
                }
                let outgoing: Vec<u64> = a
                    .columns
                    .iter()
                    .chain(&b.columns)
                    .map(|&c| through(q, cross_gain, c))
                    .collect();
                Some(CellCandidate {
                    bits,
                    desired: span_key(&desired),
                    outgoing: span_key(&outgoing),
                    encoding: (a.encoding(), b.encoding()),
                })
            })
        })
        .collect();
    // keep the smallest encoding per observable signature
    let mut by_sig: BTreeMap<(usize, Vec<u64>, Vec<u64>), CellCandidate> = BTreeMap::new();
    for c in pairs {
        let key = (c.bits, c.desired.clone(), c.outgoing.clone());
        match by_sig.get(&key) {
            Some(old) if old.encoding <= c.encoding => {}
            _ => {
                by_sig.insert(key, c);
            }
        }
    }
    let mut out: Vec<CellCandidate> = by_sig.into_values().collect();
    out.sort_by(|a, b| b.bits.cmp(&a.bits).then_with(|| a.encoding.cmp(&b.encoding)));
    out
}

fn compatible(own_desired: &[u64], incoming: &[u64]) -> bool {
    let mut joint = own_desired.to_vec();
    joint.extend_from_slice(incoming);
    rank_masks(&joint) == own_desired.len() + incoming.len()
}

#[derive(Debug, Clone)]
struct Best {
    bits: usize,
    encoding: Encoding,
}

fn better(a: &Best, b: &Best) -> bool {
    match a.bits.cmp(&b.bits) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.encoding < b.encoding,
    }
}

/// Finds a maximum-rate certified IMAC scheme by exhaustive enumeration.
pub fn search_best(p: &CellParams, config: &SearchConfig) -> Result<SearchOutcome> {
    p.validate()?;
    if !(1..=2).contains(&config.max_col_weight) {
        return Err(Error::Param(format!(
            "column weight {} outside 1..=2",
            config.max_col_weight
        )));
    }
    let max_q = config.max_q.min(SearchConfig::MAX_Q);
    if p.q > max_q {
        return Err(Error::Capacity(format!("q = {} exceeds the search limit {max_q}", p.q)));
    }
    let q = p.q;
    let w = config.max_col_weight;
    let cell1 = cell_candidates(q, w, p.n1, p.n2, p.nm);
    let cell2 = cell_candidates(q, w, p.n3, p.n4, p.nd);

    // cell1 always contains the empty choice, so a zero-rate scheme exists
    let mut best = Best {
        bits: 0,
        encoding: vec![vec![]; 4],
    };
    let mut evaluated: u64 = 0;
    let mut complete = true;
    const CHUNK: usize = 256;
    for chunk in cell1.chunks(CHUNK) {
        if chunk[0].bits + cell2.first().map_or(0, |c| c.bits) < best.bits {
            break;
        }
        let floor = best.bits;
        let results: Vec<(u64, Option<Best>)> = chunk
            .par_iter()
            .map(|a| {
                let mut local: Option<Best> = None;
                let mut count = 0u64;
                for b in &cell2 {
                    let total = a.bits + b.bits;
                    let bar = local.as_ref().map_or(floor, |l| l.bits.max(floor));
                    if total < bar {
                        break;
                    }
                    count += 1;
                    if compatible(&a.desired, &b.outgoing) && compatible(&b.desired, &a.outgoing) {
                        let cand = Best {
                            bits: total,
                            encoding: vec![
                                a.encoding.0.clone(),
                                a.encoding.1.clone(),
                                b.encoding.0.clone(),
                                b.encoding.1.clone(),
                            ],
                        };
                        if local.as_ref().is_none_or(|l| better(&cand, l)) {
                            local = Some(cand);
                        }
                    }
                }
                (count, local)
            })
            .collect();
        for (count, local) in results {
            evaluated += count;
            if let Some(l) = local {
                if better(&l, &best) {
                    best = l;
                }
            }
        }
        if evaluated > config.budget {
            complete = false;
            break;
        }
    }

    let scheme = LinearScheme::from_columns(Model::Imac, *p, &best.encoding)?;
    let cert = verify(&scheme);
    debug_assert!(cert.pass, "search produced an uncertified scheme");
    let outcome = SearchOutcome {
        rate: cert.rate,
        scheme,
        evaluated,
        complete,
    };
    if !complete {
        return Err(Error::Budget {
            message: format!(
                "examined {} combinations, over the budget of {}",
                outcome.evaluated, config.budget
            ),
            partial: Box::new(outcome.scheme),
            rate: outcome.rate,
        });
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::upper_bound_sum;

    #[test]
    fn span_key_is_canonical() {
        assert_eq!(span_key(&[0b011, 0b110]), span_key(&[0b101, 0b011]));
        assert_ne!(span_key(&[0b011]), span_key(&[0b001]));
        assert_eq!(span_key(&[0b1, 0b1]), vec![0b1]);
    }

    #[test]
    fn span_choices_weight_one_are_subsets() {
        // with full gain every subset of levels is its own span
        let c = span_choices(3, 1, 3);
        assert_eq!(c.len(), 8);
        // gain 2 hides the bottom level
        let c = span_choices(3, 1, 2);
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|s| s.columns.iter().all(|&m| m & 0b100 == 0)));
    }

    #[test]
    fn small_example_respects_bound() {
        let p = CellParams::with_q(2, 2, 2, 2, 1, 1, 2).unwrap();
        let out = search_best(&p, &SearchConfig::with_weight(1)).unwrap();
        assert!(out.complete);
        assert!(out.rate <= upper_bound_sum(&p).unwrap().floor());
        assert!(verify(&out.scheme).pass);
    }

    #[test]
    fn interference_free() {
        let p = CellParams::with_q(2, 2, 2, 2, 0, 0, 2).unwrap();
        let out = search_best(&p, &SearchConfig::with_weight(1)).unwrap();
        assert_eq!(out.rate, 4);
    }

    #[test]
    fn deterministic_tie_break() {
        let p = CellParams::new(3, 2, 3, 2, 1, 1).unwrap();
        let a = search_best(&p, &SearchConfig::with_weight(2)).unwrap();
        let b = search_best(&p, &SearchConfig::with_weight(2)).unwrap();
        assert_eq!(a.scheme.to_json(), b.scheme.to_json());
    }

    #[test]
    fn limits() {
        let p = CellParams::new(7, 7, 7, 7, 1, 1).unwrap();
        assert!(matches!(search_best(&p, &SearchConfig::default()), Err(Error::Capacity(_))));
        let p = CellParams::new(3, 3, 3, 3, 1, 1).unwrap();
        assert!(matches!(search_best(&p, &SearchConfig::with_weight(3)), Err(Error::Param(_))));
        let tiny = SearchConfig {
            budget: 0,
            ..SearchConfig::with_weight(1)
        };
        match search_best(&p, &tiny) {
            Err(Error::Budget { partial, .. }) => assert!(verify(&partial).pass),
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
