//! Check matrices whose rows are cyclic shifts of one `2n`-bit seed, and
//! scans over all seeds.
//!
//! Row `i` is the seed rotated right by `i` positions over all `2n` bits, so
//! column `j` of row `i` holds `a_{(j - i) mod 2n}`. Rotating the seed itself
//! by one position relabels qubits cyclically and applies a Hadamard to one
//! of them; reversing it reverses the qubits and swaps every X with Z. Both
//! preserve `(k, c, d)`, so scans only visit one seed per class.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::code::{is_degenerate, isotropic_min_weight, min_distance_bounded, singleton_bound, SimplifiedCheckMatrix};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest `n` accepted by the scanner; seeds are held in a `u64`.
pub const MAX_SCAN_N: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirculantSeed {
    a: BitVector,
    r: usize,
}

impl CirculantSeed {
    pub fn new(a: BitVector, r: usize) -> Result<Self> {
        if a.is_empty() || !a.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "seed length {} must be even and positive",
                a.len()
            )));
        }
        if r == 0 || r > a.len() {
            return Err(Error::InvalidArgument(format!(
                "row count {r} must lie in 1..={}",
                a.len()
            )));
        }
        Ok(Self { a, r })
    }

    pub fn seed(&self) -> &BitVector {
        &self.a
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.a.len() / 2
    }
}

/// The `r × 2n` matrix of right rotations of the seed.
pub fn circulant_matrix(seed: &CirculantSeed) -> BitMatrix {
    let len = seed.a.len();
    let mut m = BitMatrix::zeros(seed.r, len);
    for i in 0..seed.r {
        for j in seed.a.iter_ones() {
            m.set(i, (j + i) % len, true);
        }
    }
    m
}

/// Seed bits packed with `a_0` as the most significant of `2n` bits.
pub fn seed_from_bits(n: usize, bits: u64) -> BitVector {
    let len = 2 * n;
    let mut v = BitVector::zeros(len);
    for i in 0..len {
        if (bits >> (len - 1 - i)) & 1 == 1 {
            v.set(i, true);
        }
    }
    v
}

pub fn seed_to_bits(a: &BitVector) -> u64 {
    let len = a.len();
    a.iter_ones().fold(0u64, |acc, i| acc | 1u64 << (len - 1 - i))
}

fn rotate(bits: u64, len: usize) -> u64 {
    let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    ((bits >> 1) | (bits << (len - 1))) & mask
}

fn reverse(bits: u64, len: usize) -> u64 {
    bits.reverse_bits() >> (64 - len)
}

/// Smallest seed in the rotation class, optionally joined with reversals.
pub fn canonical_seed(bits: u64, len: usize, with_reverse: bool) -> u64 {
    let mut best = bits;
    let starts: &[u64] = if with_reverse {
        &[bits, reverse(bits, len)]
    } else {
        &[bits]
    };
    for &s in starts {
        let mut cur = s;
        for _ in 0..len {
            best = best.min(cur);
            cur = rotate(cur, len);
        }
    }
    best
}

/// Parameters of the code generated by a seed, or `None` when the rows are dependent.
pub fn seed_code(seed: &CirculantSeed) -> Result<Option<SimplifiedCheckMatrix>> {
    let m = circulant_matrix(seed);
    if m.rank() != seed.r {
        return Ok(None);
    }
    SimplifiedCheckMatrix::new(seed.n(), m).map(Some)
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub r_min: usize,
    pub r_max: usize,
    pub dedup_cyclic: bool,
    pub dedup_reverse: bool,
    pub min_k: Option<usize>,
    /// Report every achieved `(k, c, d)` rather than the best `d` per `(k, c)`.
    pub all_tuples: bool,
    pub threads: Option<usize>,
}

impl ScanOptions {
    /// `r` from 1 to `2(n - 1)`, deduplicated, best distance only.
    pub fn new(n: usize) -> Self {
        Self {
            r_min: 1,
            r_max: 2 * n.saturating_sub(1),
            dedup_cyclic: true,
            dedup_reverse: true,
            min_k: None,
            all_tuples: false,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub c: usize,
    pub d: usize,
    /// Smallest packed seed reaching these parameters.
    pub seed: u64,
    pub degenerate: bool,
    pub saturates_singleton: bool,
    /// Listed among published codes with no standard `[[n+c, k]]` equivalent.
    pub beats_standard: bool,
}

impl ScanEntry {
    pub fn seed_hex(&self) -> String {
        format!("{:0width$x}", self.seed, width = (2 * self.n).div_ceil(4))
    }
}

/// Published `[[n, k, d; c]]` circulant codes with no equivalent standard
/// `[[n+c, k]]` code, as `(n, k, d, c)`.
pub const BEATS_STANDARD: &[(usize, usize, usize, usize)] = &[
    (4, 0, 4, 2),
    (4, 1, 3, 1),
    (5, 1, 5, 4),
    (5, 1, 4, 3),
    (5, 1, 4, 2),
    (5, 0, 4, 2),
    (5, 2, 3, 2),
    (6, 0, 6, 4),
    (6, 1, 5, 4),
    (6, 1, 4, 3),
    (6, 2, 4, 3),
    (6, 0, 4, 1),
    (6, 2, 3, 1),
    (7, 1, 7, 6),
    (7, 2, 5, 5),
    (7, 0, 6, 4),
    (7, 3, 4, 4),
    (7, 1, 4, 2),
    (7, 3, 4, 3),
    (7, 4, 3, 2),
    (8, 0, 8, 6),
    (8, 1, 6, 6),
    (8, 0, 6, 5),
    (8, 2, 6, 6),
    (8, 1, 6, 5),
    (8, 0, 6, 4),
    (8, 3, 5, 5),
    (8, 2, 5, 4),
    (8, 1, 4, 1),
    (8, 3, 4, 3),
    (8, 5, 3, 2),
    (9, 1, 9, 8),
    (9, 0, 7, 6),
    (9, 1, 7, 6),
    (9, 1, 7, 7),
    (9, 2, 6, 6),
    (9, 1, 6, 5),
    (9, 0, 6, 4),
    (9, 1, 6, 6),
    (9, 2, 5, 4),
    (9, 5, 3, 1),
    (10, 0, 10, 8),
    (10, 1, 8, 8),
    (10, 0, 8, 7),
    (10, 0, 8, 6),
    (10, 0, 7, 5),
    (10, 1, 7, 6),
    (10, 2, 7, 7),
    (10, 1, 6, 5),
    (10, 3, 6, 7),
    (10, 0, 6, 3),
    (10, 3, 6, 6),
    (10, 2, 6, 5),
    (10, 1, 6, 4),
    (10, 4, 5, 5),
    (10, 2, 5, 2),
    (10, 4, 5, 4),
    (10, 2, 5, 3),
];

/// Key of a record: `(k, c)` in best mode, `(k, c, d)` in all-tuples mode.
type Key = (usize, usize, usize);

#[derive(Clone, Copy, Debug)]
struct Record {
    d: usize,
    seed: u64,
}

fn merge_into(into: &mut BTreeMap<Key, Record>, key: Key, rec: Record) {
    into.entry(key)
        .and_modify(|old| {
            if rec.d > old.d || (rec.d == old.d && rec.seed < old.seed) {
                *old = rec;
            }
        })
        .or_insert(rec);
}

/// Scans every seed of length `2n` (one per equivalence class when
/// deduplicating) and every `r` in range.
pub fn scan(n: usize, opts: &ScanOptions) -> Result<Vec<ScanEntry>> {
    if !(2..=MAX_SCAN_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "scan length n must lie in 2..={MAX_SCAN_N}, got {n}"
        )));
    }
    if opts.r_min == 0 || opts.r_min > opts.r_max || opts.r_max > 2 * n {
        return Err(Error::InvalidArgument(format!(
            "row range {}..={} invalid for n = {n}",
            opts.r_min, opts.r_max
        )));
    }
    let len = 2 * n;
    let seeds: Vec<u64> = (1u64..1u64 << len)
        .filter(|&s| !opts.dedup_cyclic || canonical_seed(s, len, opts.dedup_reverse) == s)
        .collect();

    let work = || -> Result<BTreeMap<Key, Record>> {
        seeds
            .par_iter()
            .try_fold(BTreeMap::new, |mut acc: BTreeMap<Key, Record>, &s| -> Result<_> {
                let a = seed_from_bits(n, s);
                for r in opts.r_min..=opts.r_max {
                    let Some(h) = seed_code(&CirculantSeed::new(a.clone(), r)?)? else {
                        continue;
                    };
                    let c = h.ebits();
                    let k = h.k()?;
                    if opts.min_k.is_some_and(|m| k < m) {
                        continue;
                    }
                    let stop = if opts.all_tuples {
                        None
                    } else {
                        acc.get(&(k, c, 0)).map(|rec| rec.d)
                    };
                    let Some((d, _)) = min_distance_bounded(&h, stop)? else {
                        continue;
                    };
                    let key = if opts.all_tuples { (k, c, d) } else { (k, c, 0) };
                    merge_into(&mut acc, key, Record { d, seed: s });
                }
                Ok(acc)
            })
            .try_reduce(BTreeMap::new, |mut a, b| {
                for (key, rec) in b {
                    merge_into(&mut a, key, rec);
                }
                Ok(a)
            })
    };
    let records = match opts.threads {
        None => work()?,
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(work)?,
    };

    let mut out = Vec::with_capacity(records.len());
    for ((k, c, _), rec) in records {
        let r = n + c - k;
        let h =
            seed_code(&CirculantSeed::new(seed_from_bits(n, rec.seed), r)?)?.expect("recorded seeds have full rank");
        let degenerate = is_degenerate(isotropic_min_weight(&h)?, rec.d);
        out.push(ScanEntry {
            n,
            r,
            k,
            c,
            d: rec.d,
            seed: rec.seed,
            degenerate,
            saturates_singleton: rec.d == singleton_bound(n, k, c)?,
            beats_standard: BEATS_STANDARD.contains(&(n, k, rec.d, c)),
        });
    }
    out.sort_by_key(|e| (e.k, e.c, e.d));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::analyze;

    fn bits(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn printed_six_qubit_example() {
        let seed = CirculantSeed::new(bits("001110101110"), 6).unwrap();
        let m = circulant_matrix(&seed);
        let expected = BitMatrix::from_strs(&[
            "001110101110",
            "000111010111",
            "100011101011",
            "110001110101",
            "111000111010",
            "011100011101",
        ])
        .unwrap();
        assert_eq!(m, expected);
        // Every pair of rows commutes, so this seed gives a standard code.
        let h = seed_code(&seed).unwrap().unwrap();
        let p = analyze(&h).unwrap().params;
        assert_eq!((p.n, p.k, p.d, p.c), (6, 0, 4, 0));
    }

    #[test]
    fn trivial_seeds() {
        let zero = CirculantSeed::new(BitVector::zeros(8), 3).unwrap();
        assert_eq!(circulant_matrix(&zero).rank(), 0);
        assert!(seed_code(&zero).unwrap().is_none());
        let unit = CirculantSeed::new(BitVector::unit(8, 0), 8).unwrap();
        assert_eq!(circulant_matrix(&unit).rank(), 8);
        assert!(CirculantSeed::new(BitVector::zeros(7), 2).is_err());
        assert!(CirculantSeed::new(BitVector::zeros(8), 9).is_err());
    }

    #[test]
    fn seed_packing() {
        let a = bits("001110101110");
        let s = seed_to_bits(&a);
        assert_eq!(s, 0b001110101110);
        assert_eq!(seed_from_bits(6, s), a);
        assert_eq!(canonical_seed(0b1000, 4, false), 0b0001);
        assert_eq!(canonical_seed(0b0110, 4, true), 0b0011);
    }

    fn params(a: &BitVector, r: usize) -> Option<(usize, usize, usize)> {
        let h = seed_code(&CirculantSeed::new(a.clone(), r).unwrap()).unwrap()?;
        let p = analyze(&h).unwrap().params;
        Some((p.k, p.c, p.d))
    }

    #[test]
    fn rotations_and_reversals_preserve_parameters() {
        let n = 4;
        for s in [0b00111010u64, 0b10110001, 0b01101110, 0b11100100] {
            let a = seed_from_bits(n, s);
            for r in 1..=6 {
                let base = params(&a, r);
                let mut cur = s;
                for _ in 0..2 * n {
                    cur = rotate(cur, 2 * n);
                    assert_eq!(params(&seed_from_bits(n, cur), r), base);
                }
                assert_eq!(params(&seed_from_bits(n, reverse(s, 2 * n)), r), base);
            }
        }
    }

    #[test]
    fn dedup_does_not_change_results() {
        for n in [3, 4] {
            let mut opts = ScanOptions::new(n);
            let params = |v: &[ScanEntry]| v.iter().map(|e| (e.k, e.c, e.d)).collect::<Vec<_>>();
            for all in [false, true] {
                opts.all_tuples = all;
                opts.dedup_cyclic = true;
                let a = scan(n, &opts).unwrap();
                opts.dedup_cyclic = false;
                let b = scan(n, &opts).unwrap();
                assert_eq!(params(&a), params(&b));
                for e in &a {
                    assert!(e.d <= singleton_bound(n, e.k, e.c).unwrap());
                }
            }
        }
    }

    #[test]
    fn scan_is_thread_independent() {
        let mut opts = ScanOptions::new(4);
        opts.threads = Some(1);
        let a = scan(4, &opts).unwrap();
        opts.threads = Some(3);
        assert_eq!(a, scan(4, &opts).unwrap());
    }

    /// Shifting each half separately, in lockstep, is not an equivalence
    /// for right-rotation circulants; full rotation is.
    #[test]
    fn halfwise_shift_changes_parameters() {
        let n = 4;
        let s = 0b00000011u64;
        let a = seed_from_bits(n, s);
        let mut shifted = BitVector::zeros(2 * n);
        for i in 0..n {
            shifted.set((i + 1) % n, a.get(i));
            shifted.set(n + (i + 1) % n, a.get(n + i));
        }
        assert_eq!(params(&a, 2), Some((2, 0, 1)));
        assert_eq!(params(&shifted, 2), Some((3, 1, 1)));
        assert_eq!(params(&seed_from_bits(n, rotate(s, 2 * n)), 2), Some((2, 0, 1)));
    }
}
