//! Exact linear algebra over GF(2).
//!
//! Vectors and matrix rows are bit-packed into `u64` words. Levels are
//! 1-based in the public API with level 1 the most significant bit, which
//! is stored at internal index 0.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set_index(i, b & 1 == 1);
        }
        v
    }

    /// Builds a vector of length `len` with the given 1-based levels set.
    pub fn from_levels(len: usize, levels: &[usize]) -> Result<Self> {
        let mut v = BitVector::zeros(len);
        for &l in levels {
            if l == 0 || l > len {
                return Err(Error::Param(format!("level {l} outside 1..={len}")));
            }
            v.set_index(l - 1, true);
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub(crate) fn get_index(&self, i: usize) -> bool {
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set_index(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    /// Value at a 1-based level.
    pub fn level(&self, level: usize) -> bool {
        assert!(level >= 1 && level <= self.len, "level out of range");
        self.get_index(level - 1)
    }

    pub fn set_level(&mut self, level: usize, value: bool) {
        assert!(level >= 1 && level <= self.len, "level out of range");
        self.set_index(level - 1, value);
    }

    /// 1-based levels that are set, ascending.
    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get_index(i)).map(|i| i + 1).collect()
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get_index(i) as u8).collect()
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.len != other.len {
            return Err(Error::Shape(format!(
                "vector lengths {} and {} differ",
                self.len, other.len
            )));
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitVector { len: self.len, words })
    }

    pub(crate) fn xor_assign_unchecked(&mut self, other: &BitVector) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn and_parity(&self, other: &BitVector) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.len {
            write!(f, "{}", self.get_index(i) as u8)?;
        }
        write!(f, ")")
    }
}

/// A dense matrix over GF(2), stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i].set_index(i, true);
        }
        m
    }

    /// The down-shift matrix: ones on the first sub-diagonal.
    pub fn shift(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 1..n {
            m.data[i].set_index(i - 1, true);
        }
        m
    }

    /// `shift(q)` raised to the power `k`, built directly.
    pub fn shift_pow(q: usize, k: usize) -> Self {
        let mut m = BitMatrix::zeros(q, q);
        for i in k..q {
            m.data[i].set_index(i - k, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| BitVector::from_bits(r)).collect(),
        })
    }

    /// Builds a `len × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = BitMatrix::zeros(len, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != len {
                return Err(Error::Shape(format!(
                    "column {j} has length {}, expected {len}",
                    c.len()
                )));
            }
            for i in 0..len {
                if c.get_index(i) {
                    m.data[i].set_index(j, true);
                }
            }
        }
        Ok(m)
    }

    pub fn column_vector(v: &BitVector) -> Self {
        BitMatrix::from_columns(v.len(), std::slice::from_ref(v)).expect("length matches")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.data[row].get_index(col)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.data[row].set_index(col, value);
    }

    pub fn row(&self, row: usize) -> &BitVector {
        &self.data[row]
    }

    pub fn column(&self, col: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if self.data[i].get_index(col) {
                v.set_index(i, true);
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<BitVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            rows: self.cols,
            cols: self.rows,
            data: self.columns(),
        }
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        mat_mul(self, other)
    }

    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if self.cols != v.len() {
            return Err(Error::Shape(format!(
                "{}x{} matrix times length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if self.data[i].and_parity(v) {
                out.set_index(i, true);
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::Shape(format!(
                "cannot concatenate {} rows with {} rows",
                self.rows, other.rows
            )));
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        BitMatrix::from_columns(self.rows, &cols)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", r.get_index(j) as u8)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Matrix product over GF(2).
pub fn mat_mul(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = BitMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        let acc = &mut out.data[i];
        for t in 0..a.cols {
            if a.data[i].get_index(t) {
                acc.xor_assign_unchecked(&b.data[t]);
            }
        }
    }
    Ok(out)
}

/// Rank over GF(2) by Gaussian elimination.
pub fn rank(m: &BitMatrix) -> usize {
    let mut rows: Vec<BitVector> = m.data.clone();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].get_index(col)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let p = &head[rank];
        for r in tail.iter_mut() {
            if r.get_index(col) {
                r.xor_assign_unchecked(p);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rank of a set of column vectors given as bitmasks (bit `i` = level `i+1`).
pub fn rank_masks(columns: &[u64]) -> usize {
    // xor basis keyed by highest set bit
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &c in columns {
        let mut v = c;
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}

/// Receives the `n` most significant levels of `x` at the bottom of a
/// length-`q` output: `S^(q-n) x`.
pub fn shift_apply(q: usize, n: usize, x: &BitVector) -> Result<BitVector> {
    if n > q {
        return Err(Error::Param(format!("gain {n} exceeds ambient length {q}")));
    }
    if x.len() != q {
        return Err(Error::Shape(format!(
            "vector has length {}, expected {q}",
            x.len()
        )));
    }
    let s = q - n;
    let mut out = BitVector::zeros(q);
    for i in s..q {
        if x.get_index(i - s) {
            out.set_index(i, true);
        }
    }
    Ok(out)
}

/// Reverses the row order (level order) of a matrix.
pub fn reverse_levels(m: &BitMatrix) -> BitMatrix {
    let mut data = m.data.clone();
    data.reverse();
    BitMatrix {
        rows: m.rows,
        cols: m.cols,
        data,
    }
}
