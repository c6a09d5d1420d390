//! Clifford gates acting on check-matrix columns, and encoding-circuit
//! synthesis by symplectic Gaussian elimination.

use std::fmt;
use std::str::FromStr;

use crate::code::SimplifiedCheckMatrix;
use crate::error::{Error, Result};
use crate::frame::SymplecticFrame;
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::row_product;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    /// Control, target.
    Cnot(usize, usize),
    H(usize),
    Phase(usize),
    Swap(usize, usize),
}

impl Gate {
    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Cnot(a, b) | Gate::Swap(a, b) => (a, Some(b)),
            Gate::H(a) | Gate::Phase(a) => (a, None),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, bound: n });
            }
        }
        if b == Some(a) {
            return Err(Error::InvalidArgument(format!(
                "two-qubit gate {self} acts twice on qubit {a}"
            )));
        }
        Ok(())
    }

    /// Applies the gate's column operation to one `2n`-bit row.
    pub fn apply_to_row(&self, row: &mut BitVector, n: usize) {
        let get = |r: &BitVector, i: usize| r.get(i);
        match *self {
            Gate::Cnot(i, j) => {
                if get(row, i) {
                    row.flip(j);
                }
                if get(row, n + j) {
                    row.flip(n + i);
                }
            }
            Gate::H(i) => {
                let (x, z) = (get(row, i), get(row, n + i));
                row.set(i, z);
                row.set(n + i, x);
            }
            Gate::Phase(i) => {
                if get(row, i) {
                    row.flip(n + i);
                }
            }
            Gate::Swap(i, j) => {
                for off in [0, n] {
                    let (a, b) = (get(row, off + i), get(row, off + j));
                    row.set(off + i, b);
                    row.set(off + j, a);
                }
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Cnot(a, b) => write!(f, "CNOT {a} {b}"),
            Gate::H(a) => write!(f, "H {a}"),
            Gate::Phase(a) => write!(f, "P {a}"),
            Gate::Swap(a, b) => write!(f, "SWAP {a} {b}"),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::Parse {
            line: 1,
            column: 1,
            message: format!("cannot parse gate {s:?}"),
        };
        let idx = |i: usize| -> Result<usize> { parts.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let gate = match (parts.first().copied(), parts.len()) {
            (Some("CNOT"), 3) => Gate::Cnot(idx(1)?, idx(2)?),
            (Some("SWAP"), 3) => Gate::Swap(idx(1)?, idx(2)?),
            (Some("H"), 2) => Gate::H(idx(1)?),
            (Some("P"), 2) => Gate::Phase(idx(1)?),
            _ => return Err(bad()),
        };
        Ok(gate)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self { n, gates: Vec::new() }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.check(n)?;
        }
        Ok(Self { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.check(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Every gate here is its own inverse at the binary level, so the
    /// inverse circuit is the reversed gate list.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    pub fn apply_to_row(&self, row: &mut BitVector) {
        for g in &self.gates {
            g.apply_to_row(row, self.n);
        }
    }

    pub fn apply(&self, m: &BitMatrix) -> Result<BitMatrix> {
        if m.ncols() != 2 * self.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                found: m.ncols(),
            });
        }
        let mut out = m.clone();
        for i in 0..out.nrows() {
            self.apply_to_row(out.row_mut(i));
        }
        Ok(out)
    }

    /// Parses one gate per line; blank lines and `#` comments are skipped.
    pub fn parse(n: usize, text: &str) -> Result<Circuit> {
        let mut c = Circuit::new(n);
        for (lineno, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let gate: Gate = t.parse().map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse {
                    line: lineno + 1,
                    column: 1,
                    message,
                },
                other => other,
            })?;
            c.push(gate).map_err(|e| Error::Parse {
                line: lineno + 1,
                column: 1,
                message: e.to_string(),
            })?;
        }
        Ok(c)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# n={}\n", self.n);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}

/// Applies one gate's column operations to every row.
pub fn apply_gate(m: &BitMatrix, gate: Gate) -> Result<BitMatrix> {
    if !m.ncols().is_multiple_of(2) {
        return Err(Error::InvalidArgument("odd column count".into()));
    }
    let n = m.ncols() / 2;
    gate.check(n)?;
    let mut out = m.clone();
    for i in 0..out.nrows() {
        gate.apply_to_row(out.row_mut(i), n);
    }
    Ok(out)
}

/// Result of reducing a check matrix to canonical form.
///
/// `row_ops * circuit(H)` equals `canonical`, whose rows are `Z_0..Z_{r-1}`
/// followed by `X_0..X_{c-1}`: the pairs occupy qubits `0..c` and the
/// isotropic generators qubits `c..r`.
#[derive(Clone, Debug)]
pub struct Synthesis {
    pub circuit: Circuit,
    pub row_ops: BitMatrix,
    pub canonical: BitMatrix,
    pub ebits: usize,
}

struct Reducer {
    n: usize,
    rows: Vec<BitVector>,
    ops: Vec<BitVector>,
    circuit: Circuit,
}

impl Reducer {
    fn gate(&mut self, g: Gate) {
        for row in self.rows.iter_mut() {
            g.apply_to_row(row, self.n);
        }
        self.circuit.gates.push(g);
    }

    fn add_row(&mut self, source: usize, target: usize) {
        let r = self.rows[source].clone();
        self.rows[target].xor_assign(&r);
        let o = self.ops[source].clone();
        self.ops[target].xor_assign(&o);
    }

    fn x(&self, row: usize, q: usize) -> bool {
        self.rows[row].get(q)
    }

    fn z(&self, row: usize, q: usize) -> bool {
        self.rows[row].get(self.n + q)
    }

    /// Turns `row` (supported on qubits `>= q`) into `Z_q`.
    fn reduce_to_z(&mut self, row: usize, q: usize) {
        let n = self.n;
        if self.rows[row] == BitVector::unit(2 * n, n + q) {
            return;
        }
        let pivot = match (q..n).find(|&j| self.x(row, j)) {
            Some(j) => j,
            None => {
                let j = (q..n).find(|&j| self.z(row, j)).expect("independent rows are nonzero");
                self.gate(Gate::H(j));
                j
            }
        };
        for j in q..n {
            if j != pivot && self.x(row, j) {
                self.gate(Gate::Cnot(pivot, j));
            }
        }
        if self.z(row, pivot) {
            self.gate(Gate::Phase(pivot));
        }
        for j in q..n {
            if j != pivot && self.z(row, j) {
                self.gate(Gate::H(j));
                self.gate(Gate::Cnot(pivot, j));
            }
        }
        self.gate(Gate::H(pivot));
        if pivot != q {
            self.gate(Gate::Swap(pivot, q));
        }
    }

    /// With `Z_q` already in place, turns its partner `row` into `X_q`.
    fn reduce_partner_to_x(&mut self, row: usize, q: usize) {
        for j in q + 1..self.n {
            match (self.x(row, j), self.z(row, j)) {
                (false, true) => self.gate(Gate::H(j)),
                (true, true) => self.gate(Gate::Phase(j)),
                _ => {}
            }
            if self.x(row, j) {
                self.gate(Gate::Cnot(q, j));
            }
        }
        if self.z(row, q) {
            self.gate(Gate::Phase(q));
        }
    }
}

/// Reduces `H` to canonical form with gates and recorded row operations.
pub fn synthesize_encoding(h: &SimplifiedCheckMatrix) -> Result<Synthesis> {
    let n = h.n();
    let m = h.rows();
    let rank = h.matrix().rank();
    if rank != m {
        return Err(Error::DependentRows { rank, rows: m });
    }
    let mut red = Reducer {
        n,
        rows: h.matrix().rows().to_vec(),
        ops: (0..m).map(|i| BitVector::unit(m, i)).collect(),
        circuit: Circuit::new(n),
    };
    let mut remaining: Vec<usize> = (0..m).collect();
    let mut pairs = Vec::new();
    let mut q = 0;

    loop {
        let found = remaining.iter().enumerate().find_map(|(ia, &a)| {
            remaining[ia + 1..]
                .iter()
                .find(|&&b| row_product(&red.rows[a], &red.rows[b]))
                .map(|&b| (a, b))
        });
        let Some((a, b)) = found else { break };
        red.reduce_to_z(a, q);
        red.reduce_partner_to_x(b, q);
        remaining.retain(|&t| t != a && t != b);
        for &t in &remaining {
            let with_z = red.x(t, q);
            let with_x = red.z(t, q);
            if with_x {
                red.add_row(a, t);
            }
            if with_z {
                red.add_row(b, t);
            }
        }
        pairs.push((a, b));
        q += 1;
    }

    let mut isotropic = Vec::new();
    for idx in 0..remaining.len() {
        let a = remaining[idx];
        red.reduce_to_z(a, q);
        for &t in &remaining[idx + 1..] {
            if red.z(t, q) {
                red.add_row(a, t);
            }
        }
        isotropic.push(a);
        q += 1;
    }

    let order: Vec<usize> = pairs
        .iter()
        .map(|p| p.0)
        .chain(isotropic.iter().copied())
        .chain(pairs.iter().map(|p| p.1))
        .collect();
    let canonical = BitMatrix::from_rows(2 * n, order.iter().map(|&i| red.rows[i].clone()).collect())?;
    let row_ops = BitMatrix::from_rows(m, order.iter().map(|&i| red.ops[i].clone()).collect())?;
    let ebits = pairs.len();
    debug_assert_eq!(canonical, canonical_check_matrix(n, m - ebits, ebits));
    Ok(Synthesis {
        circuit: red.circuit,
        row_ops,
        canonical,
        ebits,
    })
}

/// Rows `Z_0..Z_{r-1}` followed by `X_0..X_{c-1}`.
pub fn canonical_check_matrix(n: usize, r: usize, c: usize) -> BitMatrix {
    let mut rows: Vec<BitVector> = (0..r).map(|i| BitVector::unit(2 * n, n + i)).collect();
    rows.extend((0..c).map(|i| BitVector::unit(2 * n, i)));
    BitMatrix::from_rows(2 * n, rows).expect("row length")
}

/// Applies a circuit's column operations to every row of a frame.
pub fn conjugate_frame(circuit: &Circuit, frame: &SymplecticFrame) -> Result<SymplecticFrame> {
    if circuit.n() != frame.n() {
        return Err(Error::DimensionMismatch {
            expected: frame.n(),
            found: circuit.n(),
        });
    }
    Ok(frame.map_rows(|row| circuit.apply_to_row(row)))
}
