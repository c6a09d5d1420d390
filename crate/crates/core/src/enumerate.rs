//! Gray-code walks over spans of packed symplectic rows.
//!
//! A span is given as an isotropic part followed by a logical part. Elements
//! whose logical coefficients are all zero lie in the isotropic subgroup and
//! are excluded from the weight statistics, unless the logical part is empty,
//! in which case every nonzero element counts.

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Largest span dimension the walkers accept.
pub const MAX_SPAN_DIM: usize = 40;

/// Rows of `2n` bits packed as `[x words.., z words..]`.
#[derive(Clone, Debug, Default)]
pub struct PackedRows {
    words_per_half: usize,
    data: Vec<u64>,
}

impl PackedRows {
    pub fn new(n: usize) -> Self {
        Self {
            words_per_half: n.div_ceil(64).max(1),
            data: Vec::new(),
        }
    }

    pub fn from_rows<'a>(n: usize, rows: impl IntoIterator<Item = &'a BitVector>) -> Self {
        let mut out = Self::new(n);
        for r in rows {
            out.push(r);
        }
        out
    }

    pub fn push(&mut self, row: &BitVector) {
        let n = row.len() / 2;
        let w = self.words_per_half;
        let start = self.data.len();
        self.data.resize(start + 2 * w, 0);
        for i in row.iter_ones() {
            let (half, q) = if i < n { (0, i) } else { (1, i - n) };
            self.data[start + half * w + q / 64] |= 1u64 << (q % 64);
        }
    }

    /// Appends a row already in packed layout.
    pub fn push_words(&mut self, words: &[u64]) {
        debug_assert_eq!(words.len(), 2 * self.words_per_half);
        self.data.extend_from_slice(words);
    }

    pub fn clear(&mut self) {
        self.data.clear();
    }

    pub fn words_per_half(&self) -> usize {
        self.words_per_half
    }

    pub fn len(&self) -> usize {
        self.data.len() / (2 * self.words_per_half)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        let s = 2 * self.words_per_half;
        &self.data[i * s..(i + 1) * s]
    }
}

/// Weight statistics over a span minus its isotropic part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanStats {
    pub min_weight: Option<usize>,
    pub counts: Vec<u64>,
}

/// Walks every element of `span(iso ∪ logical)` not in `span(iso)`.
///
/// With `stop_below = Some(b)`, returns `Ok(None)` as soon as an element of
/// weight `< b` is seen.
pub fn walk(n: usize, iso: &PackedRows, logical: &PackedRows, stop_below: Option<usize>) -> Result<Option<SpanStats>> {
    let s = iso.len();
    let l = logical.len();
    let dim = s + l;
    if dim > MAX_SPAN_DIM {
        return Err(Error::TooLarge(dim));
    }
    let w = iso.words_per_half.max(logical.words_per_half);
    let basis: Vec<&[u64]> = (0..s)
        .map(|i| iso.row(i))
        .chain((0..l).map(|i| logical.row(i)))
        .collect();
    let mut counts = vec![0u64; n + 1];
    let mut min_weight: Option<usize> = None;
    let stop = stop_below.unwrap_or(0);
    let total: u64 = 1u64 << dim;

    if w == 1 {
        let (mut ax, mut az) = (0u64, 0u64);
        for i in 1..total {
            let b = basis[i.trailing_zeros() as usize];
            ax ^= b[0];
            az ^= b[1];
            if l > 0 && ((i ^ (i >> 1)) >> s) == 0 {
                continue;
            }
            let wt = (ax | az).count_ones() as usize;
            if wt < stop {
                return Ok(None);
            }
            counts[wt] += 1;
            if min_weight.is_none_or(|m| wt < m) {
                min_weight = Some(wt);
            }
        }
    } else {
        let mut acc = vec![0u64; 2 * w];
        for i in 1..total {
            let b = basis[i.trailing_zeros() as usize];
            for (a, x) in acc.iter_mut().zip(b) {
                *a ^= *x;
            }
            if l > 0 && ((i ^ (i >> 1)) >> s) == 0 {
                continue;
            }
            let wt: usize = (0..w).map(|j| (acc[j] | acc[w + j]).count_ones() as usize).sum();
            if wt < stop {
                return Ok(None);
            }
            counts[wt] += 1;
            if min_weight.is_none_or(|m| wt < m) {
                min_weight = Some(wt);
            }
        }
    }
    Ok(Some(SpanStats { min_weight, counts }))
}

/// Minimum nonzero weight in `span(rows)`, or `None` for the zero space.
pub fn min_nonzero_weight(n: usize, rows: &PackedRows) -> Result<Option<usize>> {
    Ok(walk(n, rows, &PackedRows::new(n), None)?.and_then(|s| s.min_weight))
}
