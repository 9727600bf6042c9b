//! Fixed-width binary row vectors and deterministic vector enumeration.
//!
//! Rows are stored as packed 64-bit words so any m is supported; m <= 64 uses
//! a single word.  Two total orders matter elsewhere and are both provided:
//! the numeric (colexicographic) order, where column j has significance 2^j,
//! and the bit-string order, which compares the printed form (column 0 is the
//! first character).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64).max(1)],
        }
    }

    pub fn from_columns(len: usize, cols: &[usize]) -> Self {
        let mut row = BitRow::zeros(len);
        for &c in cols {
            row.set(c, true);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "column {i} out of range (m = {})", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "column {i} out of range (m = {})", self.len);
        if bit {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Number of ones (the l1 norm of the row).
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Support inclusion: every one-bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitRow) -> bool {
        assert_eq!(self.len, other.len, "row width mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0)
    }

    /// Neither support contains the other.  The defining relation for strongly
    /// separating rows.
    pub fn is_incomparable(&self, other: &BitRow) -> bool {
        !self.is_subset_of(other) && !other.is_subset_of(self)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// Numeric order with column j worth 2^j; equals colexicographic order on
    /// supports.
    pub fn cmp_numeric(&self, other: &BitRow) -> Ordering {
        assert_eq!(self.len, other.len, "row width mismatch");
        for (a, b) in self.words.iter().zip(&other.words).rev() {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// Order of the printed form, column 0 first.
    pub fn cmp_bit_string(&self, other: &BitRow) -> Ordering {
        assert_eq!(self.len, other.len, "row width mismatch");
        for i in 0..self.len {
            match self.get(i).cmp(&other.get(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }

    pub fn from_bit_string(s: &str) -> Result<Self> {
        let mut row = BitRow::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => row.set(i, true),
                _ => {
                    return Err(Error::InvalidParameter {
                        name: "bit string",
                        message: format!("unexpected character {ch:?} at position {i}"),
                    })
                }
            }
        }
        Ok(row)
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitRow({})", self.to_bit_string())
    }
}

impl fmt::Display for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// First k-subset of {0..m-1} in colexicographic order, or None if infeasible.
pub fn first_combination(k: usize, m: usize) -> Option<Vec<usize>> {
    if k > m {
        return None;
    }
    Some((0..k).collect())
}

/// Advance a k-subset (ascending indices) to its colexicographic successor
/// within {0..m-1}.  Returns false once exhausted.
pub fn next_combination(comb: &mut [usize], m: usize) -> bool {
    let k = comb.len();
    if k == 0 {
        return false;
    }
    for i in 0..k {
        let limit = if i + 1 < k { comb[i + 1] } else { m };
        if comb[i] + 1 < limit {
            comb[i] += 1;
            for (j, slot) in comb.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            return true;
        }
    }
    false
}

/// Advance a k-subset to its lexicographic successor (tuples compared left to
/// right) within {0..m-1}.  Returns false once exhausted.
pub fn next_combination_lex(comb: &mut [usize], m: usize) -> bool {
    let k = comb.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] + 1 <= m - (k - i) {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All fixed-weight rows over `cols` (a pool of column indices) in
/// colexicographic order relative to the pool.
pub struct FixedWeightRows {
    m: usize,
    cols: Vec<usize>,
    comb: Option<Vec<usize>>,
}

impl FixedWeightRows {
    pub fn new(m: usize, cols: Vec<usize>, weight: usize) -> Self {
        let comb = first_combination(weight, cols.len());
        FixedWeightRows { m, cols, comb }
    }
}

impl Iterator for FixedWeightRows {
    type Item = BitRow;

    fn next(&mut self) -> Option<BitRow> {
        let comb = self.comb.as_mut()?;
        let picked: Vec<usize> = comb.iter().map(|&i| self.cols[i]).collect();
        let row = BitRow::from_columns(self.m, &picked);
        if !next_combination(comb, self.cols.len()) {
            self.comb = None;
        }
        Some(row)
    }
}

/// Every m-bit row in ascending (weight, colex) order: the zero vector first,
/// then all weight-1 rows, and so on.
pub struct WeightColexRows {
    m: usize,
    weight: usize,
    inner: Option<FixedWeightRows>,
}

impl WeightColexRows {
    pub fn new(m: usize) -> Self {
        WeightColexRows {
            m,
            weight: 0,
            inner: Some(FixedWeightRows::new(m, (0..m).collect(), 0)),
        }
    }
}

impl Iterator for WeightColexRows {
    type Item = BitRow;

    fn next(&mut self) -> Option<BitRow> {
        loop {
            if let Some(row) = self.inner.as_mut().and_then(|it| it.next()) {
                return Some(row);
            }
            if self.weight >= self.m {
                return None;
            }
            self.weight += 1;
            self.inner = Some(FixedWeightRows::new(
                self.m,
                (0..self.m).collect(),
                self.weight,
            ));
        }
    }
}

/// Ceiling that forgives float noise just below an integer, so thresholds like
/// ceil(0.3 * n^2) land on the intended integer.
pub fn ceil_tol(x: f64) -> u64 {
    let c = (x - 1e-9).ceil();
    if c < 0.0 {
        0
    } else {
        c as u64
    }
}

/// Smallest L with 2^L >= n, i.e. ceil(log2 n); 0 for n <= 1.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// ceil(log2(1/eps)) for eps in (0, 1], computed without float log.
pub fn ceil_log2_recip(eps: f64) -> usize {
    let mut l = 0usize;
    let mut scaled = eps;
    while scaled < 1.0 - 1e-12 {
        scaled *= 2.0;
        l += 1;
        assert!(l <= 64, "eps too small: {eps}");
    }
    l
}

/// Binomial coefficient, saturating at u128::MAX.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}
