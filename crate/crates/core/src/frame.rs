//! Symplectic frames and the row operations that turn a standard stabilizer
//! code into entanglement-assisted codes.
//!
//! A frame on `n` qubits holds stabilizers `g_0..g_{r-1}`, their partners
//! `h_0..h_{r-1}`, and logical pairs `(Z̄_j, X̄_j)` for `j < k`, with
//! `r + k = n`. Choosing ebit slots `T = {t_0 < .. < t_{c-1}}` gives the
//! check matrix with rows `g_0..g_{r-1}, h_{t_0}..h_{t_{c-1}}`.

use crate::code::{LogicalMatrix, SimplifiedCheckMatrix};
use crate::enumerate::{self, PackedRows, SpanStats};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::row_product;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticFrame {
    n: usize,
    g: Vec<BitVector>,
    h: Vec<BitVector>,
    lz: Vec<BitVector>,
    lx: Vec<BitVector>,
}

/// A relation a frame fails to satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameViolation {
    Size {
        stabilizers: usize,
        logicals: usize,
        n: usize,
    },
    Product {
        a: String,
        b: String,
        expected: bool,
    },
}

/// The four elementary unitary row operations, with 0-based slot indices.
///
/// `l` indexes a stabilizer slot; `m` indexes a stabilizer slot for the
/// first two kinds and a logical pair for the last two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameOp {
    /// `h_l += h_m`, `g_m += g_l`; requires `l != m`.
    PartnerSum { l: usize, m: usize },
    /// `h_l += g_m`, `h_m += g_l`.
    StabilizerCross { l: usize, m: usize },
    /// `h_l += Z̄_m`, `X̄_m += g_l`.
    LogicalZ { l: usize, m: usize },
    /// `h_l += X̄_m`, `Z̄_m += g_l`.
    LogicalX { l: usize, m: usize },
}

impl FrameOp {
    /// Builds an operation from its type number `1..=4`.
    pub fn from_type(kind: u8, l: usize, m: usize) -> Result<Self> {
        Ok(match kind {
            1 => FrameOp::PartnerSum { l, m },
            2 => FrameOp::StabilizerCross { l, m },
            3 => FrameOp::LogicalZ { l, m },
            4 => FrameOp::LogicalX { l, m },
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "row operation type must be 1..=4, got {kind}"
                )))
            }
        })
    }

    pub fn kind(&self) -> u8 {
        match self {
            FrameOp::PartnerSum { .. } => 1,
            FrameOp::StabilizerCross { .. } => 2,
            FrameOp::LogicalZ { .. } => 3,
            FrameOp::LogicalX { .. } => 4,
        }
    }
}

impl SymplecticFrame {
    /// `g_i = Z_i`, `h_i = X_i` for `i < r`; logicals `Z_{r+j}`, `X_{r+j}`.
    pub fn canonical(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
        }
        let r = n - k;
        let z = |q: usize| BitVector::unit(2 * n, n + q);
        let x = |q: usize| BitVector::unit(2 * n, q);
        Ok(Self {
            n,
            g: (0..r).map(z).collect(),
            h: (0..r).map(x).collect(),
            lz: (r..n).map(z).collect(),
            lx: (r..n).map(x).collect(),
        })
    }

    /// Assembles a frame and checks every symplectic relation.
    pub fn from_parts(
        n: usize,
        g: Vec<BitVector>,
        h: Vec<BitVector>,
        lz: Vec<BitVector>,
        lx: Vec<BitVector>,
    ) -> Result<Self> {
        for row in g.iter().chain(&h).chain(&lz).chain(&lx) {
            if row.len() != 2 * n {
                return Err(Error::DimensionMismatch {
                    expected: 2 * n,
                    found: row.len(),
                });
            }
        }
        let frame = Self { n, g, h, lz, lx };
        if let Some(v) = frame.violations().into_iter().next() {
            return Err(Error::InvalidArgument(format!("not a symplectic frame: {v:?}")));
        }
        Ok(frame)
    }

    /// Frame whose stabilizers are exactly the rows of a commuting check matrix.
    ///
    /// Synthesizes a circuit reducing `H` to `Z_0..Z_{r-1}`, pulls the
    /// canonical frame back through it, then changes the stabilizer basis so
    /// that `g_i` equals row `i` of `H`.
    pub fn from_code(h: &SimplifiedCheckMatrix) -> Result<Self> {
        if h.ebits() != 0 {
            return Err(Error::InvalidArgument(format!(
                "expected a standard stabilizer code, found {} ebits",
                h.ebits()
            )));
        }
        let n = h.n();
        let synth = crate::circuit::synthesize_encoding(h)?;
        let k = n - h.rows();
        let frame = crate::circuit::conjugate_frame(&synth.circuit.inverse(), &SymplecticFrame::canonical(n, k)?)?;
        let q = synth.row_ops.inverse().expect("row operations are invertible");
        let frame = frame.rebase(&q)?;
        debug_assert!(frame.g.iter().zip(h.matrix().rows()).all(|(a, b)| a == b));
        Ok(frame)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stabilizer slots.
    pub fn r(&self) -> usize {
        self.g.len()
    }

    pub fn k(&self) -> usize {
        self.lz.len()
    }

    pub fn g(&self) -> &[BitVector] {
        &self.g
    }

    pub fn h(&self) -> &[BitVector] {
        &self.h
    }

    pub fn logical_z(&self) -> &[BitVector] {
        &self.lz
    }

    pub fn logical_x(&self) -> &[BitVector] {
        &self.lx
    }

    pub(crate) fn map_rows(&self, mut f: impl FnMut(&mut BitVector)) -> Self {
        let mut out = self.clone();
        for row in out
            .g
            .iter_mut()
            .chain(out.h.iter_mut())
            .chain(out.lz.iter_mut())
            .chain(out.lx.iter_mut())
        {
            f(row);
        }
        out
    }

    /// Checks `g⊙g = h⊙h = 0`, `g_i⊙h_j = δ_ij`, the logical pairing, and
    /// that logicals commute with every `g` and `h`.
    pub fn violations(&self) -> Vec<FrameViolation> {
        let mut out = Vec::new();
        if self.g.len() != self.h.len() || self.lz.len() != self.lx.len() || self.g.len() + self.lz.len() != self.n {
            out.push(FrameViolation::Size {
                stabilizers: self.g.len(),
                logicals: self.lz.len(),
                n: self.n,
            });
            return out;
        }
        let labelled: Vec<(String, &BitVector)> = [("g", &self.g), ("h", &self.h), ("Z", &self.lz), ("X", &self.lx)]
            .into_iter()
            .flat_map(|(name, rows)| rows.iter().enumerate().map(move |(i, v)| (format!("{name}{i}"), v)))
            .collect();
        let r = self.r();
        let k = self.k();
        // Partner of position p in the labelled list.
        let partner = |p: usize| -> usize {
            if p < r {
                p + r
            } else if p < 2 * r {
                p - r
            } else if p < 2 * r + k {
                p + k
            } else {
                p - k
            }
        };
        for a in 0..labelled.len() {
            for b in a + 1..labelled.len() {
                let expected = partner(a) == b;
                if row_product(labelled[a].1, labelled[b].1) != expected {
                    out.push(FrameViolation::Product {
                        a: labelled[a].0.clone(),
                        b: labelled[b].0.clone(),
                        expected,
                    });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    fn check_slot(&self, i: usize) -> Result<()> {
        if i >= self.r() {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.r(),
            });
        }
        Ok(())
    }

    fn check_logical(&self, j: usize) -> Result<()> {
        if j >= self.k() {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: self.k(),
            });
        }
        Ok(())
    }

    /// Applies one elementary row operation in place.
    pub fn apply(&mut self, op: FrameOp) -> Result<()> {
        match op {
            FrameOp::PartnerSum { l, m } => {
                self.check_slot(l)?;
                self.check_slot(m)?;
                if l == m {
                    return Err(Error::InvalidArgument("partner-sum operation needs l != m".into()));
                }
                let hm = self.h[m].clone();
                self.h[l].xor_assign(&hm);
                let gl = self.g[l].clone();
                self.g[m].xor_assign(&gl);
            }
            FrameOp::StabilizerCross { l, m } => {
                self.check_slot(l)?;
                self.check_slot(m)?;
                let gm = self.g[m].clone();
                self.h[l].xor_assign(&gm);
                if l != m {
                    let gl = self.g[l].clone();
                    self.h[m].xor_assign(&gl);
                }
            }
            FrameOp::LogicalZ { l, m } => {
                self.check_slot(l)?;
                self.check_logical(m)?;
                let z = self.lz[m].clone();
                self.h[l].xor_assign(&z);
                let gl = self.g[l].clone();
                self.lx[m].xor_assign(&gl);
            }
            FrameOp::LogicalX { l, m } => {
                self.check_slot(l)?;
                self.check_logical(m)?;
                let x = self.lx[m].clone();
                self.h[l].xor_assign(&x);
                let gl = self.g[l].clone();
                self.lz[m].xor_assign(&gl);
            }
        }
        Ok(())
    }

    /// Returns a copy with `op` applied.
    pub fn with(&self, op: FrameOp) -> Result<Self> {
        let mut out = self.clone();
        out.apply(op)?;
        Ok(out)
    }

    /// Applies the logical-X operations selected by `A` and then the
    /// logical-Z operations selected by `B` on the ebit slots.
    pub fn apply_selection(&mut self, t: &EbitPattern, sel: &SelectionParams) -> Result<()> {
        self.check_pattern(t)?;
        if sel.c() != t.c() || sel.k() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: t.c() * self.k(),
                found: sel.c() * sel.k(),
            });
        }
        for (i, &slot) in t.slots().iter().enumerate() {
            for m in 0..self.k() {
                if sel.a.get(i, m) {
                    self.apply(FrameOp::LogicalX { l: slot, m })?;
                }
            }
        }
        for (i, &slot) in t.slots().iter().enumerate() {
            for m in 0..self.k() {
                if sel.b.get(i, m) {
                    self.apply(FrameOp::LogicalZ { l: slot, m })?;
                }
            }
        }
        Ok(())
    }

    /// Changes the stabilizer basis: `g ← Q g`, `h ← Q^{-T} h`.
    pub fn rebase(&self, q: &BitMatrix) -> Result<Self> {
        let r = self.r();
        if q.nrows() != r || q.ncols() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: q.nrows(),
            });
        }
        let q_inv_t = q
            .inverse()
            .ok_or_else(|| Error::InvalidArgument("basis change is singular".into()))?
            .transpose();
        let g = stack(self.n, &self.g);
        let h = stack(self.n, &self.h);
        Ok(Self {
            n: self.n,
            g: q.mul(&g)?.into_rows(),
            h: q_inv_t.mul(&h)?.into_rows(),
            lz: self.lz.clone(),
            lx: self.lx.clone(),
        })
    }

    /// Applies the partner choice `M_V` on slots `T` in place.
    ///
    /// Builds an invertible `P` whose rows at `T` are the rows of `M_V` and
    /// whose other rows are unit vectors on the non-pivot columns, then sets
    /// `h ← P h` and `g ← P^{-T} g`. Logicals are untouched.
    pub fn apply_partner_choice(&mut self, t: &EbitPattern, mv: &PartnerSubspace) -> Result<()> {
        self.check_pattern(t)?;
        if mv.r() != self.r() || mv.c() != t.c() {
            return Err(Error::DimensionMismatch {
                expected: t.c(),
                found: mv.c(),
            });
        }
        let p = mv.completion(t);
        let q_inv_t = p.transpose();
        // rebase(Q) sets h ← Q^{-T} h; here h must become P h, so Q = P^{-T}.
        let q = q_inv_t.inverse().expect("completion is invertible");
        *self = self.rebase(&q)?;
        Ok(())
    }

    fn check_pattern(&self, t: &EbitPattern) -> Result<()> {
        if t.r() != self.r() {
            return Err(Error::DimensionMismatch {
                expected: self.r(),
                found: t.r(),
            });
        }
        Ok(())
    }

    /// The check matrix `g_0..g_{r-1}, h_{t_0}..h_{t_{c-1}}` and its logicals.
    pub fn induced_code(&self, t: &EbitPattern) -> Result<(SimplifiedCheckMatrix, LogicalMatrix)> {
        self.check_pattern(t)?;
        let r = self.r();
        let mut rows = self.g.clone();
        rows.extend(t.slots().iter().map(|&s| self.h[s].clone()));
        let pairs = t.slots().iter().enumerate().map(|(i, &s)| (s, r + i)).collect();
        let h = SimplifiedCheckMatrix::new(self.n, BitMatrix::from_rows(2 * self.n, rows)?)?.with_pairs(pairs)?;
        let mut lrows = self.lz.clone();
        lrows.extend(self.lx.iter().cloned());
        let l = LogicalMatrix::new(self.n, BitMatrix::from_rows(2 * self.n, lrows)?)?;
        Ok((h, l))
    }

    /// Weight statistics of the induced code without building it: the
    /// isotropic subgroup is spanned by `g_j` for `j ∉ T` and the logical
    /// part by the frame's logicals.
    pub fn induced_stats(&self, t: &EbitPattern, stop_below: Option<usize>) -> Result<Option<SpanStats>> {
        self.check_pattern(t)?;
        let (iso, logical) = self.induced_span(t);
        enumerate::walk(self.n, &iso, &logical, stop_below)
    }

    pub(crate) fn induced_span(&self, t: &EbitPattern) -> (PackedRows, PackedRows) {
        let iso = PackedRows::from_rows(self.n, (0..self.r()).filter(|j| !t.contains(*j)).map(|j| &self.g[j]));
        let logical = PackedRows::from_rows(self.n, self.lz.iter().chain(&self.lx));
        (iso, logical)
    }
}

fn stack(n: usize, rows: &[BitVector]) -> BitMatrix {
    BitMatrix::from_rows(2 * n, rows.to_vec()).expect("row length")
}

/// Ebit slots `T`, 0-based and strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EbitPattern {
    r: usize,
    slots: Vec<usize>,
}

impl EbitPattern {
    pub fn new(r: usize, slots: Vec<usize>) -> Result<Self> {
        if slots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "ebit slots must be strictly increasing: {slots:?}"
            )));
        }
        if let Some(&last) = slots.last() {
            if last >= r {
                return Err(Error::IndexOutOfRange { index: last, bound: r });
            }
        }
        Ok(Self { r, slots })
    }

    /// `T = {0, .., c-1}`.
    pub fn first(r: usize, c: usize) -> Result<Self> {
        Self::new(r, (0..c).collect())
    }

    /// Every pattern of size `c` in lexicographic order.
    pub fn all(r: usize, c: usize) -> impl Iterator<Item = EbitPattern> {
        Combinations::new(r, c).map(move |slots| EbitPattern { r, slots })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn c(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn contains(&self, j: usize) -> bool {
        self.slots.binary_search(&j).is_ok()
    }
}

/// The binary matrices `A` and `B` (both `c × k`) choosing which logical-X
/// and logical-Z operators are folded into each ebit partner.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SelectionParams {
    pub a: BitMatrix,
    pub b: BitMatrix,
}

impl SelectionParams {
    pub fn new(a: BitMatrix, b: BitMatrix) -> Result<Self> {
        if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows() * a.ncols(),
                found: b.nrows() * b.ncols(),
            });
        }
        Ok(Self { a, b })
    }

    pub fn zero(c: usize, k: usize) -> Self {
        Self {
            a: BitMatrix::zeros(c, k),
            b: BitMatrix::zeros(c, k),
        }
    }

    /// Decodes `index < 2^{2ck}`: bits `0..ck` fill `A` row-major, the next
    /// `ck` bits fill `B`.
    pub fn from_index(c: usize, k: usize, index: u128) -> Result<Self> {
        let bits = 2 * c * k;
        if bits > 127 || index >> bits != 0 {
            return Err(Error::InvalidArgument(format!(
                "selection index {index} needs more than {bits} bits"
            )));
        }
        let mut out = Self::zero(c, k);
        for bit in 0..bits {
            if (index >> bit) & 1 == 1 {
                let (which, pos) = (bit / (c * k), bit % (c * k));
                let m = if which == 0 { &mut out.a } else { &mut out.b };
                m.set(pos / k, pos % k, true);
            }
        }
        Ok(out)
    }

    pub fn c(&self) -> usize {
        self.a.nrows()
    }

    pub fn k(&self) -> usize {
        self.a.ncols()
    }
}

/// A `c × r` matrix in reduced row echelon form with rank `c`, selecting the
/// ebit partners up to the row-space equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartnerSubspace {
    mv: BitMatrix,
    pivots: Vec<usize>,
}

impl PartnerSubspace {
    pub fn new(mv: BitMatrix) -> Result<Self> {
        let (reduced, pivots) = mv.rref();
        if pivots.len() != mv.nrows() {
            return Err(Error::DependentRows {
                rank: pivots.len(),
                rows: mv.nrows(),
            });
        }
        if reduced != mv {
            return Err(Error::InvalidArgument(
                "partner matrix must be in reduced row echelon form".into(),
            ));
        }
        Ok(Self { mv, pivots })
    }

    /// The rows `e_{t_i}`, which leave the frame unchanged.
    pub fn trivial(r: usize, c: usize) -> Result<Self> {
        if c > r {
            return Err(Error::InvalidArgument(format!("c = {c} exceeds r = {r}")));
        }
        let rows = (0..c).map(|i| BitVector::unit(r, i)).collect();
        Self::new(BitMatrix::from_rows(r, rows)?)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.mv
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn r(&self) -> usize {
        self.mv.ncols()
    }

    pub fn c(&self) -> usize {
        self.mv.nrows()
    }

    /// The invertible `r × r` matrix placing `M_V` at rows `T` and unit
    /// vectors on the non-pivot columns, in order, at the other rows.
    pub fn completion(&self, t: &EbitPattern) -> BitMatrix {
        let r = self.r();
        let mut p = BitMatrix::zeros(r, r);
        for (i, &slot) in t.slots().iter().enumerate() {
            *p.row_mut(slot) = self.mv.row(i).clone();
        }
        let free = (0..r).filter(|j| !self.pivots.contains(j));
        let others = (0..r).filter(|j| !t.contains(*j));
        for (row, col) in others.zip(free) {
            p.set(row, col, true);
        }
        p
    }

    /// Every partner subspace for `(r, c)`: pivot sets in lexicographic
    /// order, then free bits counted up from zero.
    pub fn all(r: usize, c: usize) -> impl Iterator<Item = PartnerSubspace> {
        Combinations::new(r, c).flat_map(move |pivots| {
            let free = free_positions(r, &pivots);
            let count = 1u128 << free.len();
            (0..count).map(move |mask| build_rref(r, &pivots, &free, mask))
        })
    }

    /// The RREF with the given pivot columns whose free entries, listed
    /// row by row and left to right, are the low bits of `free_bits`.
    pub fn from_pivots(r: usize, pivots: &[usize], free_bits: u128) -> Result<Self> {
        if pivots.windows(2).any(|w| w[0] >= w[1]) || pivots.last().is_some_and(|&p| p >= r) {
            return Err(Error::InvalidArgument(format!(
                "pivots {pivots:?} must be increasing and below {r}"
            )));
        }
        let free = free_positions(r, pivots);
        if free.len() < 128 && free_bits >> free.len() != 0 {
            return Err(Error::InvalidArgument(format!(
                "{} free entries cannot hold {free_bits:#x}",
                free.len()
            )));
        }
        Ok(build_rref(r, pivots, &free, free_bits))
    }

    /// Number of free entries for these pivots.
    pub fn free_count(r: usize, pivots: &[usize]) -> usize {
        free_positions(r, pivots).len()
    }

    /// The element at `index` in the order of [`PartnerSubspace::all`].
    pub fn unrank(r: usize, c: usize, index: u128) -> Result<Self> {
        let mut rest = index;
        for pivots in Combinations::new(r, c) {
            let free = free_positions(r, &pivots);
            let size = 1u128 << free.len();
            if rest < size {
                return Ok(build_rref(r, &pivots, &free, rest));
            }
            rest -= size;
        }
        Err(Error::IndexOutOfRange {
            index: usize::try_from(index).unwrap_or(usize::MAX),
            bound: usize::try_from(count_partner_subspaces(r, c)?).unwrap_or(usize::MAX),
        })
    }
}

/// `(row, column)` positions that are free in an RREF with these pivots.
fn free_positions(r: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for j in p + 1..r {
            if !pivots.contains(&j) {
                out.push((i, j));
            }
        }
    }
    out
}

fn build_rref(r: usize, pivots: &[usize], free: &[(usize, usize)], mask: u128) -> PartnerSubspace {
    let mut m = BitMatrix::zeros(pivots.len(), r);
    for (i, &p) in pivots.iter().enumerate() {
        m.set(i, p, true);
    }
    for (bit, &(i, j)) in free.iter().enumerate() {
        if bit < 128 && (mask >> bit) & 1 == 1 {
            m.set(i, j, true);
        }
    }
    PartnerSubspace {
        mv: m,
        pivots: pivots.to_vec(),
    }
}

/// Number of `c`-dimensional subspaces of `GF(2)^r`, the Gaussian binomial
/// coefficient, via `[r, c] = [r-1, c-1] + 2^c [r-1, c]`.
pub fn count_partner_subspaces(r: usize, c: usize) -> Result<u128> {
    if c > r {
        return Err(Error::InvalidArgument(format!("c = {c} exceeds r = {r}")));
    }
    let overflow = || Error::TooLarge(r);
    // row[j] holds [i, j] for the current i.
    let mut row = vec![0u128; c + 1];
    row[0] = 1;
    for i in 1..=r {
        for j in (1..=c.min(i)).rev() {
            let scaled = if j < 128 {
                row[j].checked_mul(1u128 << j).ok_or_else(overflow)?
            } else if row[j] == 0 {
                0
            } else {
                return Err(overflow());
            };
            row[j] = row[j - 1].checked_add(scaled).ok_or_else(overflow)?;
        }
    }
    Ok(row[c])
}

/// Size of the exhaustive search space `2^{2ck} N(r, c)`.
pub fn search_space_size(r: usize, k: usize, c: usize) -> Result<u128> {
    let n = count_partner_subspaces(r, c)?;
    let shift = 2 * c * k;
    if shift >= 128 {
        return Err(Error::TooLarge(shift));
    }
    n.checked_mul(1u128 << shift).ok_or(Error::TooLarge(shift))
}

/// Lexicographic `c`-subsets of `0..r`.
pub(crate) struct Combinations {
    r: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(r: usize, c: usize) -> Self {
        Self {
            r,
            current: (c <= r).then(|| (0..c).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let c = cur.len();
        let mut nxt = cur.clone();
        let mut i = c;
        while i > 0 {
            i -= 1;
            if nxt[i] < self.r - c + i {
                nxt[i] += 1;
                for j in i + 1..c {
                    nxt[j] = nxt[j - 1] + 1;
                }
                self.current = Some(nxt);
                break;
            }
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Nested sum over the shifts `l_1 ≤ l_2 ≤ .. ≤ l_c ≤ r - c` of the
    /// leading ones, each contributing `2^{c(r-c) - Σ l_i}`.
    fn nested_sum(r: usize, c: usize) -> u128 {
        fn go(level: usize, upper: usize, c: usize, r: usize, spent: usize) -> u128 {
            if level == 0 {
                return 1u128 << (c * (r - c) - spent);
            }
            (0..=upper).map(|l| go(level - 1, l, c, r, spent + l)).sum()
        }
        go(c, r - c, c, r, 0)
    }

    fn closed_form(r: i64, c: i64) -> Option<i128> {
        use std::ops::{Add, Sub};
        // Exact arithmetic on numerator / denominator pairs.
        #[derive(Clone, Copy)]
        struct Q(i128, i128);
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        fn reduced(num: i128, den: i128) -> Q {
            let g = gcd(num, den).max(1);
            Q(num / g, den / g)
        }
        impl Add for Q {
            type Output = Q;
            fn add(self, o: Q) -> Q {
                let l = self.1 / gcd(self.1, o.1) * o.1;
                reduced(self.0 * (l / self.1) + o.0 * (l / o.1), l)
            }
        }
        impl Sub for Q {
            type Output = Q;
            fn sub(self, o: Q) -> Q {
                self + Q(-o.0, o.1)
            }
        }
        let t = |num: i128, den: i128, base: i128, exp: i64| reduced(num * base.pow(exp as u32), den);
        let c = c.min(r - c);
        let v = match c {
            0 => Q(1, 1),
            1 => t(1, 1, 2, r) - Q(1, 1),
            2 => t(2, 3, 4, r - 1) - t(1, 1, 2, r - 1) + Q(1, 3),
            3 => t(1, 21, 8, r - 1) - t(2, 3, 4, r - 2) + t(1, 3, 2, r - 2) - Q(1, 21),
            4 => t(4, 315, 16, r - 2) - t(1, 21, 8, r - 2) + t(2, 9, 4, r - 3) - t(1, 21, 2, r - 3) + Q(1, 315),
            5 => {
                t(1, 9765, 32, r - 2) - t(4, 315, 16, r - 3) + t(1, 63, 8, r - 3) - t(2, 63, 4, r - 4)
                    + t(1, 315, 2, r - 4)
                    - Q(1, 9765)
            }
            6 => {
                t(8, 615195, 64, r - 3) - t(1, 9765, 32, r - 3) + t(4, 945, 16, r - 4) - t(1, 441, 8, r - 4)
                    + t(2, 945, 4, r - 5)
                    - t(1, 9765, 2, r - 5)
                    + Q(1, 615195)
            }
            _ => return None,
        };
        assert_eq!(v.0 % v.1, 0);
        Some(v.0 / v.1)
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(count_partner_subspaces(4, 2).unwrap(), 35);
        assert_eq!(count_partner_subspaces(6, 2).unwrap(), 651);
        assert_eq!(count_partner_subspaces(5, 0).unwrap(), 1);
        assert_eq!(count_partner_subspaces(5, 5).unwrap(), 1);
        for r in 1..20 {
            assert_eq!(count_partner_subspaces(r, 1).unwrap(), (1u128 << r) - 1);
        }
        assert!(count_partner_subspaces(3, 4).is_err());
    }

    #[test]
    fn counts_match_nested_sum_and_closed_forms() {
        for r in 1..=14 {
            for c in 0..=r {
                let n = count_partner_subspaces(r, c).unwrap();
                assert_eq!(n, nested_sum(r, c), "r={r} c={c}");
                assert_eq!(n, count_partner_subspaces(r, r - c).unwrap());
                if let Some(v) = closed_form(r as i64, c as i64) {
                    assert_eq!(n as i128, v, "r={r} c={c}");
                }
            }
        }
    }

    #[test]
    fn enumeration_order_and_unrank() {
        let all: Vec<String> = PartnerSubspace::all(2, 1)
            .map(|p| p.matrix().row(0).to_string())
            .collect();
        assert_eq!(all, ["10", "11", "01"]);
        for (r, c) in [(4, 2), (5, 3), (6, 1), (3, 3)] {
            let list: Vec<PartnerSubspace> = PartnerSubspace::all(r, c).collect();
            assert_eq!(list.len() as u128, count_partner_subspaces(r, c).unwrap());
            let distinct: std::collections::HashSet<_> = list.iter().map(|p| p.matrix().clone()).collect();
            assert_eq!(distinct.len(), list.len());
            for (i, p) in list.iter().enumerate() {
                assert_eq!(&PartnerSubspace::unrank(r, c, i as u128).unwrap(), p);
                assert!(PartnerSubspace::new(p.matrix().clone()).is_ok());
            }
            assert!(PartnerSubspace::unrank(r, c, list.len() as u128).is_err());
        }
    }

    #[test]
    fn partner_matrix_validation() {
        let bad = BitMatrix::from_strs(&["11", "10"]).unwrap();
        assert!(PartnerSubspace::new(bad).is_err());
        let dep = BitMatrix::from_strs(&["10", "10"]).unwrap();
        assert!(PartnerSubspace::new(dep).is_err());
    }

    #[test]
    fn patterns() {
        assert!(EbitPattern::new(4, vec![1, 1]).is_err());
        assert!(EbitPattern::new(4, vec![2, 4]).is_err());
        let all: Vec<_> = EbitPattern::all(4, 2).map(|p| p.slots().to_vec()).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(EbitPattern::all(3, 0).count(), 1);
    }

    #[test]
    fn canonical_frame_is_valid() {
        let f = SymplecticFrame::canonical(5, 1).unwrap();
        assert!(f.is_valid());
        assert_eq!(f.r(), 4);
        let mut broken = f.clone();
        broken.h[0] = broken.h[1].clone();
        assert!(!broken.is_valid());
    }

    fn example2_frame() -> SymplecticFrame {
        let rows = |s: &[&str]| -> Vec<BitVector> { s.iter().map(|r| r.replace('|', "").parse().unwrap()).collect() };
        let g = rows(&["00000|11000", "00000|01100", "00000|00110", "00000|00011"]);
        let h = rows(&["01111|00000", "11000|00000", "00011|00000", "11110|00000"]);
        let lz = rows(&["00000|11111"]);
        let lx = rows(&["11111|00000"]);
        SymplecticFrame::from_parts(5, g, h, lz, lx).unwrap()
    }

    #[test]
    fn repetition_frame_with_all_partners() {
        let frame = example2_frame();
        let t = EbitPattern::first(4, 4).unwrap();
        let (code, logical) = frame.induced_code(&t).unwrap();
        assert_eq!(code.ebits(), 4);
        assert_eq!(code.k().unwrap(), 1);
        assert!(crate::code::validate(&code, Some(&logical)).is_empty());
        let (d, en) = crate::code::min_distance(&code).unwrap();
        assert_eq!(d, 5);
        let stats = frame.induced_stats(&t, None).unwrap().unwrap();
        assert_eq!(stats.min_weight, Some(5));
        assert_eq!(stats.counts, en.0);
    }

    #[test]
    fn dropping_partners_matches_brute_force() {
        let frame = example2_frame();
        let subsets: Vec<Vec<usize>> = vec![
            vec![1, 2, 3],
            vec![0, 2, 3],
            vec![0, 1, 3],
            vec![0, 1, 2],
            vec![2, 3],
            vec![1, 2],
            vec![0, 3],
        ];
        let expected = [3, 3, 3, 3, 3, 1, 3];
        for (slots, want) in subsets.into_iter().zip(expected) {
            let t = EbitPattern::new(4, slots.clone()).unwrap();
            let (code, _) = frame.induced_code(&t).unwrap();
            let (d, en) = crate::code::min_distance_by_membership(&code).unwrap();
            let stats = frame.induced_stats(&t, None).unwrap().unwrap();
            assert_eq!(stats.min_weight, Some(d), "{slots:?}");
            assert_eq!(stats.counts, en.0);
            assert_eq!(d, want, "{slots:?}");
        }
    }

    #[test]
    fn operations_keep_frames_valid() {
        let base = SymplecticFrame::canonical(6, 2).unwrap();
        for kind in 1..=4u8 {
            for l in 0..4 {
                for m in 0..4 {
                    let Ok(op) = FrameOp::from_type(kind, l, m) else {
                        continue;
                    };
                    match base.with(op) {
                        Ok(f) => assert!(f.is_valid(), "{op:?}"),
                        Err(_) => assert!((kind == 1 && l == m) || (kind >= 3 && m >= 2), "{op:?}"),
                    }
                }
            }
        }
        assert!(FrameOp::from_type(5, 0, 0).is_err());
    }

    fn random_frame(n: usize, k: usize, ops: &[(u8, usize, usize)]) -> SymplecticFrame {
        let mut f = SymplecticFrame::canonical(n, k).unwrap();
        let r = n - k;
        for &(kind, l, m) in ops {
            let l = l % r;
            let m = if kind >= 3 { m % k.max(1) } else { m % r };
            if let Ok(op) = FrameOp::from_type(kind, l, m) {
                let _ = f.apply(op);
            }
        }
        f
    }

    proptest! {
        #[test]
        fn random_operation_sequences_stay_symplectic(
            ops in prop::collection::vec((1u8..=4, 0usize..8, 0usize..8), 0..40)
        ) {
            let f = random_frame(7, 2, &ops);
            prop_assert!(f.is_valid());
        }

        #[test]
        fn selection_and_partner_choice_stay_symplectic(
            ops in prop::collection::vec((1u8..=4, 0usize..8, 0usize..8), 0..20),
            sel_idx in 0u128..(1 << 8),
            mv_idx in 0u128..35,
            tsel in 0usize..6,
        ) {
            let mut f = random_frame(6, 2, &ops);
            let t = EbitPattern::all(4, 2).nth(tsel).unwrap();
            let sel = SelectionParams::from_index(2, 2, sel_idx).unwrap();
            let mv = PartnerSubspace::unrank(4, 2, mv_idx).unwrap();
            let before = f.clone();
            f.apply_partner_choice(&t, &mv).unwrap();
            prop_assert_eq!(&f.lz, &before.lz);
            prop_assert_eq!(&f.lx, &before.lx);
            f.apply_selection(&t, &sel).unwrap();
            prop_assert!(f.is_valid());
            let (code, logical) = f.induced_code(&t).unwrap();
            prop_assert_eq!(code.ebits(), 2);
            prop_assert!(crate::code::validate(&code, Some(&logical)).is_empty());
            let (d, en) = crate::code::min_distance(&code).unwrap();
            let stats = f.induced_stats(&t, None).unwrap().unwrap();
            prop_assert_eq!(stats.min_weight.unwrap_or(0), d);
            prop_assert_eq!(stats.counts, en.0);
        }

        #[test]
        fn isotropic_part_is_the_kernel_of_the_partner_matrix(mv_idx in 0u128..651) {
            let f = SymplecticFrame::canonical(8, 2).unwrap();
            let t = EbitPattern::first(6, 2).unwrap();
            let mv = PartnerSubspace::unrank(6, 2, mv_idx).unwrap();
            let mut g2 = f.clone();
            g2.apply_partner_choice(&t, &mv).unwrap();
            let iso: Vec<BitVector> = (2..6).map(|j| g2.g[j].clone()).collect();
            let iso = BitMatrix::from_rows(16, iso).unwrap();
            let expected: Vec<BitVector> = mv
                .matrix()
                .kernel_basis()
                .rows()
                .iter()
                .map(|x| stack(8, &f.g).combine(x))
                .collect();
            let expected = BitMatrix::from_rows(16, expected).unwrap();
            prop_assert_eq!(iso.rank(), 4);
            prop_assert_eq!(iso.vstack(&expected).unwrap().rank(), 4);
        }
    }
}
