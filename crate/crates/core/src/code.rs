//! Entanglement-assisted code semantics on simplified check matrices.
//!
//! A simplified check matrix `H` has `m` independent rows of length `2n`. Its
//! Gram matrix under the symplectic form has rank `2c`, where `c` is the
//! number of ebits, and the code encodes `k = n + c - m` qubits. The distance
//! is the minimum weight over the centralizer of the row space with the
//! isotropic subgroup (the radical of the form) removed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::enumerate::{self, PackedRows};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, RowReducer};
use crate::pauli::{lambda_gram, lambda_product, row_weight, standard_symplectic_form, swap_halves};

/// Rows of the Alice-side stabilizer generators of an entanglement-assisted code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifiedCheckMatrix {
    n: usize,
    mat: BitMatrix,
    pairs: Option<Vec<(usize, usize)>>,
    c: usize,
}

impl SimplifiedCheckMatrix {
    /// Builds a check matrix, rejecting dependent rows.
    pub fn new(n: usize, mat: BitMatrix) -> Result<Self> {
        let h = Self::unchecked(n, mat)?;
        let rank = h.mat.rank();
        if rank != h.mat.nrows() {
            return Err(Error::DependentRows {
                rank,
                rows: h.mat.nrows(),
            });
        }
        Ok(h)
    }

    /// Builds a check matrix without the independence check, so that
    /// [`validate`] can report the problem instead.
    pub fn unchecked(n: usize, mat: BitMatrix) -> Result<Self> {
        if mat.ncols() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: mat.ncols(),
            });
        }
        let c = lambda_gram(&mat)?.rank() / 2;
        Ok(Self { n, mat, pairs: None, c })
    }

    /// Parses rows written as `xbits|zbits`.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let cleaned: Vec<String> = rows.iter().map(|r| r.replace(['|', ' '], "")).collect();
        let refs: Vec<&str> = cleaned.iter().map(String::as_str).collect();
        let mat = BitMatrix::from_strs(&refs)?;
        Self::new(mat.ncols() / 2, mat)
    }

    /// Attaches symplectic-pair metadata as `(g_row, h_row)` index pairs.
    pub fn with_pairs(mut self, pairs: Vec<(usize, usize)>) -> Result<Self> {
        for &(a, b) in &pairs {
            for idx in [a, b] {
                if idx >= self.mat.nrows() {
                    return Err(Error::IndexOutOfRange {
                        index: idx,
                        bound: self.mat.nrows(),
                    });
                }
            }
        }
        self.pairs = Some(pairs);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.mat
    }

    pub fn pairs(&self) -> Option<&[(usize, usize)]> {
        self.pairs.as_deref()
    }

    /// Number of generators `m`.
    pub fn rows(&self) -> usize {
        self.mat.nrows()
    }

    /// Number of ebits, half the rank of the symplectic Gram matrix.
    pub fn ebits(&self) -> usize {
        self.c
    }

    /// Number of logical qubits `n + c - m`.
    pub fn k(&self) -> Result<usize> {
        (self.n + self.c).checked_sub(self.rows()).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "inconsistent matrix: n + c = {} < m = {}",
                self.n + self.c,
                self.rows()
            ))
        })
    }
}

/// Logical operators accompanying a check matrix: `k` logical-Z rows then `k` logical-X rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalMatrix {
    n: usize,
    mat: BitMatrix,
}

impl LogicalMatrix {
    pub fn new(n: usize, mat: BitMatrix) -> Result<Self> {
        if mat.ncols() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: mat.ncols(),
            });
        }
        if !mat.nrows().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "logical matrix needs an even row count, found {}",
                mat.nrows()
            )));
        }
        Ok(Self { n, mat })
    }

    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let cleaned: Vec<String> = rows.iter().map(|r| r.replace(['|', ' '], "")).collect();
        let refs: Vec<&str> = cleaned.iter().map(String::as_str).collect();
        let mat = BitMatrix::from_strs(&refs)?;
        Self::new(mat.ncols() / 2, mat)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.mat.nrows() / 2
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.mat
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub c: usize,
    pub d: usize,
    pub degenerate: bool,
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},{};{}]]", self.n, self.k, self.d, self.c)
    }
}

/// Counts `a_0..a_n` of elements of each weight in the centralizer minus the isotropic subgroup.
///
/// For `k = 0` the set is empty; the counts then cover every nonzero
/// centralizer element, matching the distance convention used for such codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEnumerator(pub Vec<u64>);

impl WeightEnumerator {
    pub fn coefficients(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Smallest weight with a nonzero coefficient.
    pub fn min_weight(&self) -> Option<usize> {
        self.0.iter().position(|&a| a > 0)
    }

    /// `Σ_{i=1..b} a_i`.
    pub fn low_weight_sum(&self, b: usize) -> u64 {
        self.0.iter().skip(1).take(b).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeReport {
    pub params: CodeParams,
    pub enumerator: WeightEnumerator,
    pub singleton_saturated: bool,
    pub isotropic_min_weight: Option<usize>,
}

/// `c = rank(H Λ Hᵀ) / 2`.
pub fn ebit_count(h: &SimplifiedCheckMatrix) -> usize {
    h.ebits()
}

/// Basis of the isotropic subgroup: row-space elements commuting with every row.
pub fn isotropic_basis(h: &SimplifiedCheckMatrix) -> BitMatrix {
    let gram = lambda_gram(h.matrix()).expect("even column count").into_matrix();
    let combos = gram.kernel_basis();
    let rows = combos.rows().iter().map(|x| h.matrix().combine(x)).collect();
    BitMatrix::from_rows(2 * h.n(), rows).expect("row length")
}

/// Basis of `{u : u ⊙ row = 0 for every row of H}`.
pub fn centralizer_basis(h: &SimplifiedCheckMatrix) -> BitMatrix {
    let swapped: Vec<BitVector> = h.matrix().rows().iter().map(swap_halves).collect();
    BitMatrix::from_rows(2 * h.n(), swapped)
        .expect("row length")
        .kernel_basis()
}

/// Extends `iso` to a basis of `span(centralizer)` and returns the added vectors.
fn complement_in(iso: &BitMatrix, centralizer: &BitMatrix) -> Vec<BitVector> {
    let mut reducer = RowReducer::new(iso);
    centralizer
        .rows()
        .iter()
        .filter(|v| reducer.insert(v))
        .cloned()
        .collect()
}

/// Minimum distance and weight enumerator.
///
/// Walks the centralizer with a basis split into isotropic vectors and a
/// complement, so membership in the isotropic subgroup is read off the
/// Gray-code coefficients.
pub fn min_distance(h: &SimplifiedCheckMatrix) -> Result<(usize, WeightEnumerator)> {
    Ok(min_distance_bounded(h, None)?.expect("no early exit requested"))
}

/// As [`min_distance`], but gives up with `None` as soon as an element of
/// weight below `stop_below` is found.
pub fn min_distance_bounded(
    h: &SimplifiedCheckMatrix,
    stop_below: Option<usize>,
) -> Result<Option<(usize, WeightEnumerator)>> {
    h.k()?;
    let iso = isotropic_basis(h);
    let cent = centralizer_basis(h);
    let logical = complement_in(&iso, &cent);
    let n = h.n();
    let stats = enumerate::walk(
        n,
        &PackedRows::from_rows(n, iso.rows()),
        &PackedRows::from_rows(n, logical.iter()),
        stop_below,
    )?;
    stats.map(finish).transpose()
}

/// Distance from an explicit generating set: isotropic basis plus logical rows.
pub fn min_distance_with_logicals(h: &SimplifiedCheckMatrix, l: &LogicalMatrix) -> Result<(usize, WeightEnumerator)> {
    if l.n() != h.n() {
        return Err(Error::DimensionMismatch {
            expected: h.n(),
            found: l.n(),
        });
    }
    let k = h.k()?;
    if l.k() != k {
        return Err(Error::DimensionMismatch {
            expected: 2 * k,
            found: l.matrix().nrows(),
        });
    }
    let iso = isotropic_basis(h);
    let n = h.n();
    let stats = enumerate::walk(
        n,
        &PackedRows::from_rows(n, iso.rows()),
        &PackedRows::from_rows(n, l.matrix().rows()),
        None,
    )?
    .expect("no early exit requested");
    finish(stats)
}

/// Distance by brute force over the centralizer kernel, testing each element
/// for isotropic membership by row reduction. Slow; kept as an independent
/// cross-check of [`min_distance`].
pub fn min_distance_by_membership(h: &SimplifiedCheckMatrix) -> Result<(usize, WeightEnumerator)> {
    let k = h.k()?;
    let cent = centralizer_basis(h);
    let iso = RowReducer::new(&isotropic_basis(h));
    let dim = cent.nrows();
    if dim > 24 {
        return Err(Error::TooLarge(dim));
    }
    let mut counts = vec![0u64; h.n() + 1];
    for mask in 1u64..(1u64 << dim) {
        let coeffs = BitVector::from_u64(dim, mask);
        let v = cent.combine(&coeffs);
        if k > 0 && iso.contains(&v) {
            continue;
        }
        counts[row_weight(&v)] += 1;
    }
    let d = counts.iter().position(|&a| a > 0).unwrap_or(0);
    Ok((d, WeightEnumerator(counts)))
}

fn finish(stats: enumerate::SpanStats) -> Result<(usize, WeightEnumerator)> {
    let d = stats.min_weight.unwrap_or(0);
    Ok((d, WeightEnumerator(stats.counts)))
}

/// Smallest nonzero weight in the isotropic subgroup.
pub fn isotropic_min_weight(h: &SimplifiedCheckMatrix) -> Result<Option<usize>> {
    let n = h.n();
    enumerate::min_nonzero_weight(n, &PackedRows::from_rows(n, isotropic_basis(h).rows()))
}

/// Largest `t` with `2t ≤ d - 1`, doubled: the weight below which an
/// isotropic element makes two correctable errors share a syndrome.
pub fn degeneracy_threshold(d: usize) -> usize {
    2 * (d.saturating_sub(1) / 2)
}

/// Whether some nonzero isotropic element has weight at most `2⌊(d-1)/2⌋`.
pub fn degeneracy_check(h: &SimplifiedCheckMatrix, d: usize) -> Result<bool> {
    Ok(is_degenerate(isotropic_min_weight(h)?, d))
}

pub(crate) fn is_degenerate(iso_min: Option<usize>, d: usize) -> bool {
    iso_min.is_some_and(|w| w <= degeneracy_threshold(d))
}

/// Largest distance allowed by `n + c - k ≥ 2(d - 1)`.
pub fn singleton_bound(n: usize, k: usize, c: usize) -> Result<usize> {
    if k > n || c > n - k {
        return Err(Error::InvalidArgument(format!(
            "need 0 ≤ k ≤ n and 0 ≤ c ≤ n - k, got n={n} k={k} c={c}"
        )));
    }
    Ok((n + c - k) / 2 + 1)
}

/// Full report: parameters, enumerator, degeneracy and bound saturation.
pub fn analyze(h: &SimplifiedCheckMatrix) -> Result<CodeReport> {
    let (d, enumerator) = min_distance(h)?;
    report_from(h, d, enumerator)
}

pub(crate) fn report_from(h: &SimplifiedCheckMatrix, d: usize, enumerator: WeightEnumerator) -> Result<CodeReport> {
    let k = h.k()?;
    let c = h.ebits();
    let iso_min = isotropic_min_weight(h)?;
    let bound = singleton_bound(h.n(), k, c)?;
    Ok(CodeReport {
        params: CodeParams {
            n: h.n(),
            k,
            c,
            d,
            degenerate: is_degenerate(iso_min, d),
        },
        enumerator,
        singleton_saturated: d == bound,
        isotropic_min_weight: iso_min,
    })
}

/// A relation a check or logical matrix fails to satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DependentRows { rank: usize, rows: usize },
    Pairing { row_a: usize, row_b: usize, expected: bool },
    GramForm { row_a: usize, row_b: usize },
    LogicalCommutation { check_row: usize, logical_row: usize },
    LogicalPairing { row_a: usize, row_b: usize, expected: bool },
    LogicalCount { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DependentRows { rank, rows } => {
                write!(f, "rows are dependent (rank {rank} of {rows})")
            }
            Violation::Pairing { row_a, row_b, expected } => write!(
                f,
                "rows {row_a} and {row_b} should {} but do not",
                if *expected { "anticommute" } else { "commute" }
            ),
            Violation::GramForm { row_a, row_b } => {
                write!(f, "Gram entry ({row_a}, {row_b}) breaks the [[O,I],[I,O]] form")
            }
            Violation::LogicalCommutation { check_row, logical_row } => write!(
                f,
                "logical row {logical_row} does not commute with check row {check_row}"
            ),
            Violation::LogicalPairing { row_a, row_b, expected } => write!(
                f,
                "logical rows {row_a} and {row_b} should {} but do not",
                if *expected { "anticommute" } else { "commute" }
            ),
            Violation::LogicalCount { expected, found } => {
                write!(f, "expected {expected} logical rows, found {found}")
            }
        }
    }
}

/// Checks independence, pairing structure and the logical relations.
///
/// Pairing is taken from the matrix metadata when present; otherwise a matrix
/// with `m = 2c` rows must have Gram matrix `[[O,G],[Gᵀ,O]]`.
pub fn validate(h: &SimplifiedCheckMatrix, l: Option<&LogicalMatrix>) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = h.rows();
    let rank = h.matrix().rank();
    if rank != m {
        out.push(Violation::DependentRows { rank, rows: m });
    }
    let gram = lambda_gram(h.matrix()).expect("even columns").into_matrix();

    if let Some(pairs) = h.pairs() {
        for a in 0..m {
            for b in a + 1..m {
                let expected = pairs.contains(&(a, b)) || pairs.contains(&(b, a));
                if gram.get(a, b) != expected {
                    out.push(Violation::Pairing {
                        row_a: a,
                        row_b: b,
                        expected,
                    });
                }
            }
        }
    } else if m == 2 * h.ebits() && m > 0 {
        // Both halves must be isotropic; full rank then makes the
        // off-diagonal block invertible.
        let half = m / 2;
        for a in 0..m {
            for b in a + 1..m {
                if (a < half) == (b < half) && gram.get(a, b) {
                    out.push(Violation::GramForm { row_a: a, row_b: b });
                }
            }
        }
    }

    if let Some(l) = l {
        if let Ok(k) = h.k() {
            if l.k() != k {
                out.push(Violation::LogicalCount {
                    expected: 2 * k,
                    found: l.matrix().nrows(),
                });
            }
        }
        if let Ok(cross) = lambda_product(h.matrix(), l.matrix()) {
            for i in 0..cross.nrows() {
                for j in cross.row(i).iter_ones() {
                    out.push(Violation::LogicalCommutation {
                        check_row: i,
                        logical_row: j,
                    });
                }
            }
        }
        let lg = lambda_gram(l.matrix()).expect("even columns").into_matrix();
        let target = standard_symplectic_form(l.k());
        for a in 0..lg.nrows() {
            for b in a + 1..lg.nrows() {
                if lg.get(a, b) != target.get(a, b) {
                    out.push(Violation::LogicalPairing {
                        row_a: a,
                        row_b: b,
                        expected: target.get(a, b),
                    });
                }
            }
        }
    }
    out
}
