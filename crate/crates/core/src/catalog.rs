//! Built-in codes and the simple algebraic constructions.

use crate::code::{LogicalMatrix, SimplifiedCheckMatrix};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::SymplecticVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Matrix reproduced digit for digit from a published display.
    Printed,
    /// A standard construction of a well-known code; generators are ours.
    Literature,
    /// Produced by a construction in this crate.
    Constructed,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub provenance: Provenance,
    pub check: SimplifiedCheckMatrix,
    pub logical: Option<LogicalMatrix>,
    /// Documented `(n, k, d, c)`.
    pub expected: (usize, usize, usize, usize),
    /// Best distance of a standard `[[n+c, k]]` code, per ebit count.
    pub d_std: Vec<(usize, &'static str)>,
}

fn check(rows: &[&str]) -> SimplifiedCheckMatrix {
    SimplifiedCheckMatrix::from_strs(rows).expect("catalog matrix")
}

fn logical(rows: &[&str]) -> LogicalMatrix {
    LogicalMatrix::from_strs(rows).expect("catalog logicals")
}

fn from_labels(labels: &[&str]) -> SimplifiedCheckMatrix {
    let n = labels[0].len();
    let rows = labels
        .iter()
        .map(|l| SymplecticVector::from_label(l).expect("label").to_row())
        .collect();
    SimplifiedCheckMatrix::new(n, BitMatrix::from_rows(2 * n, rows).expect("rows")).expect("labels")
}

/// Parity-check matrix of the length-`n` repetition code: rows `e_i + e_{i+1}`.
pub fn repetition_parity_check(n: usize) -> Result<BitMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("repetition length {n} < 2")));
    }
    let rows = (0..n - 1)
        .map(|i| {
            let mut v = BitVector::zeros(n);
            v.set(i, true);
            v.set(i + 1, true);
            v
        })
        .collect();
    BitMatrix::from_rows(n, rows)
}

/// Parity-check matrix of the binary Hamming code of length `2^m - 1`;
/// column `j` is the binary expansion of `j + 1`.
pub fn hamming_parity_check(m: usize) -> Result<BitMatrix> {
    if !(2..=16).contains(&m) {
        return Err(Error::InvalidArgument(format!("Hamming order {m} out of range")));
    }
    let len = (1usize << m) - 1;
    let mut out = BitMatrix::zeros(m, len);
    for j in 0..len {
        for i in 0..m {
            if ((j + 1) >> (m - 1 - i)) & 1 == 1 {
                out.set(i, j, true);
            }
        }
    }
    Ok(out)
}

/// `[[O, Ĥ], [Ĥ, O]]`: Z-type rows from `Ĥ`, then X-type rows from `Ĥ`.
pub fn css_double(hhat: &BitMatrix) -> Result<SimplifiedCheckMatrix> {
    let rank = hhat.rank();
    if rank != hhat.nrows() {
        return Err(Error::DependentRows {
            rank,
            rows: hhat.nrows(),
        });
    }
    let n = hhat.ncols();
    let zero = BitMatrix::zeros(hhat.nrows(), n);
    let top = zero.hstack(hhat)?;
    let bottom = hhat.hstack(&zero)?;
    SimplifiedCheckMatrix::new(n, top.vstack(&bottom)?)
}

/// `[[n, 1, n; n-1]]` from the repetition code, for odd `n ≥ 3`.
pub fn repetition_eaqec(n: usize) -> Result<SimplifiedCheckMatrix> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "the repetition construction needs odd n >= 3, got {n}"
        )));
    }
    css_double(&repetition_parity_check(n)?)
}

/// The `[[n, 1, 1]]` bit-flip code: Z-type rows of the repetition check.
pub fn bit_flip(n: usize) -> Result<SimplifiedCheckMatrix> {
    let hhat = repetition_parity_check(n)?;
    SimplifiedCheckMatrix::new(n, BitMatrix::zeros(n - 1, n).hstack(&hhat)?)
}

/// Every built-in code.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = vec![
        CatalogEntry {
            name: "bit_flip_5".into(),
            description: "[[5,1,1]] five-qubit bit-flip code".into(),
            provenance: Provenance::Printed,
            check: check(&["00000|11000", "00000|01100", "00000|00110", "00000|00011"]),
            logical: None,
            expected: (5, 1, 1, 0),
            d_std: vec![],
        },
        CatalogEntry {
            name: "example1_5_1_5_4".into(),
            description: "[[5,1,5;4]] code built from the bit-flip code".into(),
            provenance: Provenance::Printed,
            check: check(&[
                "00000|11000",
                "00000|01100",
                "00000|00110",
                "00000|00011",
                "01111|00000",
                "11000|00000",
                "00011|00000",
                "11110|00000",
            ]),
            logical: Some(logical(&["11111|00000", "00000|11111"])),
            expected: (5, 1, 5, 4),
            d_std: vec![],
        },
        CatalogEntry {
            name: "bch_7_1_3".into(),
            description: "[[7,1,3]] quantum BCH (Steane) code".into(),
            provenance: Provenance::Printed,
            check: check(&[
                "0000000|1001011",
                "0000000|0101110",
                "0000000|0010111",
                "1001011|0000000",
                "1100101|0000000",
                "1011100|0000000",
            ]),
            logical: None,
            expected: (7, 1, 3, 0),
            d_std: vec![(1, "3"), (2, "3"), (3, "4"), (4, "5"), (5, "5"), (6, "5")],
        },
        CatalogEntry {
            name: "shor_9_1_3".into(),
            description: "Shor's [[9,1,3]] code".into(),
            provenance: Provenance::Printed,
            check: check(&[
                "000000000|110000000",
                "000000000|011000000",
                "000000000|000110000",
                "000000000|000011000",
                "000000000|000000110",
                "000000000|000000011",
                "111111000|000000000",
                "000111111|000000000",
            ]),
            logical: None,
            expected: (9, 1, 3, 0),
            d_std: vec![(2, "5"), (3, "5"), (4, "5"), (5, "6"), (6, "6"), (7, "6"), (8, "7")],
        },
        CatalogEntry {
            name: "eaqec_7_1_5_2".into(),
            description: "degenerate [[7,1,5;2]] code found from the BCH code".into(),
            provenance: Provenance::Printed,
            check: check(&[
                "0000000|1001011",
                "0000000|1100101",
                "0000000|0010111",
                "1001011|0000000",
                "1100101|0000000",
                "0010111|0000000",
                "1000011|0100011",
                "1101000|0010010",
            ]),
            logical: Some(logical(&["1001011|0100011", "1101000|1001011"])),
            expected: (7, 1, 5, 2),
            d_std: vec![],
        },
        CatalogEntry {
            name: "gottesman_8_3_3".into(),
            description: "Gottesman's [[8,3,3]] code".into(),
            provenance: Provenance::Literature,
            check: from_labels(&["XXXXXXXX", "ZZZZZZZZ", "IXIXYZYZ", "IXZYIXZY", "IYXZXZIY"]),
            logical: None,
            expected: (8, 3, 3, 0),
            d_std: vec![(2, "3"), (3, "3"), (4, "4"), (5, "4")],
        },
        CatalogEntry {
            name: "qr_13_1_5".into(),
            description: "cyclic [[13,1,5]] quadratic-residue code, shifts of IXZXXZZZZXXZX".into(),
            provenance: Provenance::Literature,
            check: qr13(),
            logical: None,
            expected: (13, 1, 5, 0),
            d_std: vec![],
        },
        CatalogEntry {
            name: "bch_15_7_3".into(),
            description: "[[15,7,3]] CSS code from the [15,11] Hamming code".into(),
            provenance: Provenance::Literature,
            check: css_double(&hamming_parity_check(4).expect("hamming")).expect("css"),
            logical: None,
            expected: (15, 7, 3, 0),
            d_std: vec![],
        },
    ];
    for n in [3, 5, 7] {
        out.push(CatalogEntry {
            name: format!("repetition_{n}_1_{n}_{}", n - 1),
            description: format!("[[{n},1,{n};{}]] from the length-{n} repetition code", n - 1),
            provenance: Provenance::Constructed,
            check: repetition_eaqec(n).expect("odd n"),
            logical: None,
            expected: (n, 1, n, n - 1),
            d_std: vec![],
        });
    }
    out
}

fn qr13() -> SimplifiedCheckMatrix {
    let seed = "IXZXXZZZZXXZX";
    let labels: Vec<String> = (0..12)
        .map(|s| {
            let chars: Vec<char> = seed.chars().collect();
            (0..13).map(|i| chars[(i + 13 - s) % 13]).collect()
        })
        .collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    from_labels(&refs)
}

/// Looks up an entry by name.
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownCode(name.to_string()))
}
