//! Phase-free binary representation of n-qubit Pauli operators.
//!
//! A Pauli `X_a Z_b` maps to the pair `(a, b)`; as a matrix row it occupies
//! `2n` columns with the X part first. Phases are discarded throughout.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticVector {
    x: BitVector,
    z: BitVector,
}

impl SymplecticVector {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
        }
    }

    pub fn new(x: BitVector, z: BitVector) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    /// Parses a label over `{I, X, Y, Z}`.
    pub fn from_label(label: &str) -> Result<Self> {
        if label.is_empty() {
            return Err(Error::InvalidArgument("empty Pauli label".into()));
        }
        let n = label.chars().count();
        let mut out = Self::identity(n);
        for (i, ch) in label.chars().enumerate() {
            let (x, z) = match ch {
                'I' => (false, false),
                'X' => (true, false),
                'Z' => (false, true),
                'Y' => (true, true),
                _ => return Err(Error::InvalidPauli { ch, pos: i }),
            };
            out.x.set(i, x);
            out.z.set(i, z);
        }
        Ok(out)
    }

    pub fn to_label(&self) -> String {
        (0..self.n())
            .map(|i| match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            })
            .collect()
    }

    /// Splits a `2n`-bit row `(x | z)`.
    pub fn from_row(row: &BitVector) -> Result<Self> {
        if !row.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("row length {} is odd", row.len())));
        }
        let n = row.len() / 2;
        Ok(Self {
            x: row.slice(0, n),
            z: row.slice(n, n),
        })
    }

    pub fn to_row(&self) -> BitVector {
        self.x.concat(&self.z)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x_part(&self) -> &BitVector {
        &self.x
    }

    pub fn z_part(&self) -> &BitVector {
        &self.z
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// `x1·z2 + z1·x2 mod 2`; zero iff the operators commute.
    pub fn symplectic_product(&self, other: &Self) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(self.x.dot(&other.z) ^ self.z.dot(&other.x))
    }

    /// Product of operators, ignoring phase.
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        }
    }
}

impl fmt::Display for SymplecticVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.x, self.z)
    }
}

impl fmt::Debug for SymplecticVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_label())
    }
}

impl FromStr for SymplecticVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_label(s)
    }
}

/// `v Λ`: exchanges the X and Z halves of a `2n`-bit row.
pub fn swap_halves(row: &BitVector) -> BitVector {
    let n = row.len() / 2;
    row.slice(n, n).concat(&row.slice(0, n))
}

/// Symplectic product of two `2n`-bit rows.
pub fn row_product(a: &BitVector, b: &BitVector) -> bool {
    a.dot(&swap_halves(b))
}

/// Weight of a `2n`-bit row.
pub fn row_weight(row: &BitVector) -> usize {
    let n = row.len() / 2;
    (0..n).filter(|&i| row.get(i) || row.get(n + i)).count()
}

/// The Gram matrix `M Λ Mᵀ` of the symplectic form on the rows of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticGram(BitMatrix);

impl SymplecticGram {
    pub fn matrix(&self) -> &BitMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> BitMatrix {
        self.0
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Pairwise symplectic products of the rows of `m`, which must have `2n` columns.
pub fn lambda_gram(m: &BitMatrix) -> Result<SymplecticGram> {
    if !m.ncols().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("column count {} is odd", m.ncols())));
    }
    let swapped: Vec<BitVector> = m.rows().iter().map(swap_halves).collect();
    let size = m.nrows();
    let mut g = BitMatrix::zeros(size, size);
    for i in 0..size {
        for (j, sj) in swapped.iter().enumerate().skip(i + 1) {
            if m.row(i).dot(sj) {
                g.set(i, j, true);
                g.set(j, i, true);
            }
        }
    }
    Ok(SymplecticGram(g))
}

/// `A Λ Bᵀ` for two matrices with the same even column count.
pub fn lambda_product(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    if a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.ncols(),
            found: b.ncols(),
        });
    }
    if !a.ncols().is_multiple_of(2) {
        return Err(Error::InvalidArgument("odd column count".into()));
    }
    let swapped: Vec<BitVector> = b.rows().iter().map(swap_halves).collect();
    let mut out = BitMatrix::zeros(a.nrows(), b.nrows());
    for (i, row) in a.rows().iter().enumerate() {
        for (j, s) in swapped.iter().enumerate() {
            if row.dot(s) {
                out.set(i, j, true);
            }
        }
    }
    Ok(out)
}

/// The block matrix `[[O, I], [I, O]]` of side `2 * half`.
pub fn standard_symplectic_form(half: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(2 * half, 2 * half);
    for i in 0..half {
        m.set(i, half + i, true);
        m.set(half + i, i, true);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sv(label: &str) -> SymplecticVector {
        SymplecticVector::from_label(label).unwrap()
    }

    fn row(s: &str) -> BitVector {
        s.replace('|', "").parse().unwrap()
    }

    #[test]
    fn labels_map_to_bits() {
        let g = sv("ZZIII");
        assert_eq!(g.x_part().to_string(), "00000");
        assert_eq!(g.z_part().to_string(), "11000");
        let id = sv("IIIII");
        assert_eq!(id.to_row(), BitVector::zeros(10));
        let h = sv("IXXXX");
        assert_eq!(h.x_part().to_string(), "01111");
        assert!(h.z_part().is_zero());
        assert_eq!(sv("XYZI").to_label(), "XYZI");
    }

    #[test]
    fn invalid_labels_are_rejected() {
        assert!(matches!(
            SymplecticVector::from_label("XQZ"),
            Err(Error::InvalidPauli { ch: 'Q', pos: 1 })
        ));
        assert!(SymplecticVector::from_label("").is_err());
    }

    #[test]
    fn products_and_weights() {
        assert!(sv("X").symplectic_product(&sv("Z")).unwrap());
        assert!(!sv("XZY").symplectic_product(&sv("XZY")).unwrap());
        let g1 = SymplecticVector::from_row(&row("00000|11000")).unwrap();
        let h1 = SymplecticVector::from_row(&row("01111|00000")).unwrap();
        assert!(g1.symplectic_product(&h1).unwrap());
        assert!(sv("XX").symplectic_product(&sv("XXX")).is_err());

        assert_eq!(sv("IIIII").weight(), 0);
        assert_eq!(sv("XXXXI").weight(), 4);
        let v = SymplecticVector::new("1100101".parse().unwrap(), "0100011".parse().unwrap()).unwrap();
        assert_eq!(v.weight(), 5);
    }

    #[test]
    fn gram_of_first_worked_example_is_standard_form() {
        let m = BitMatrix::from_strs(&[
            "0000011000",
            "0000001100",
            "0000000110",
            "0000000011",
            "0111100000",
            "1100000000",
            "0001100000",
            "1111000000",
        ])
        .unwrap();
        let g = lambda_gram(&m).unwrap();
        assert_eq!(g.matrix(), &standard_symplectic_form(4));
        assert!(lambda_gram(&BitMatrix::zeros(2, 5)).is_err());
    }

    #[test]
    fn gram_of_commuting_rows_vanishes() {
        let m = BitMatrix::from_strs(&["0000011000", "0000001100", "1111100000"]).unwrap();
        let g = lambda_gram(&m).unwrap();
        assert!(!g.matrix().get(0, 2));
        let commuting = BitMatrix::from_strs(&["0000011000", "0000001100"]).unwrap();
        assert!(lambda_gram(&commuting).unwrap().is_zero());
    }

    fn label_commutes(a: &str, b: &str) -> bool {
        let clashes = a
            .chars()
            .zip(b.chars())
            .filter(|&(p, q)| p != 'I' && q != 'I' && p != q)
            .count();
        clashes % 2 == 0
    }

    fn arb_label(n: usize) -> impl Strategy<Value = String> {
        prop::collection::vec(prop::sample::select(vec!['I', 'X', 'Y', 'Z']), n).prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn product_matches_label_commutation((a, b) in (1usize..12).prop_flat_map(|n| (arb_label(n), arb_label(n)))) {
            let p = sv(&a).symplectic_product(&sv(&b)).unwrap();
            prop_assert_eq!(!p, label_commutes(&a, &b));
            prop_assert_eq!(sv(&a).to_label(), a.clone());
            prop_assert!(!sv(&a).symplectic_product(&sv(&a)).unwrap());
            prop_assert_eq!(p, sv(&b).symplectic_product(&sv(&a)).unwrap());
            prop_assert_eq!(p, row_product(&sv(&a).to_row(), &sv(&b).to_row()));
        }

        #[test]
        fn gram_rank_is_even(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 12), 1..10)) {
            let m = BitMatrix::from_rows(12, rows.iter().map(|r| BitVector::from_bools(r)).collect()).unwrap();
            let g = lambda_gram(&m).unwrap();
            prop_assert_eq!(g.rank() % 2, 0);
            prop_assert_eq!(g.matrix(), &g.matrix().transpose());
        }
    }
}
