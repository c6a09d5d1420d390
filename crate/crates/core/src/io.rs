//! Check-matrix text format and JSON reports.
//!
//! ```text
//! # comment
//! n=5
//! pairs=4:5,6:7
//! 00000|11000
//! 01111|00000
//! ```
//!
//! Qubit 0 is the leftmost bit of each half. `pairs` lists `(g_row, h_row)`
//! symplectic pairs by row index and may be omitted.

use serde::Serialize;

use crate::code::{CodeReport, LogicalMatrix, SimplifiedCheckMatrix};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses the text format, rejecting dependent rows.
pub fn parse_check_matrix(text: &str) -> Result<SimplifiedCheckMatrix> {
    let (n, mat, pairs) = parse_parts(text)?;
    attach(SimplifiedCheckMatrix::new(n, mat)?, pairs)
}

/// Parses the text format without the independence check, for validation.
pub fn parse_check_matrix_unchecked(text: &str) -> Result<SimplifiedCheckMatrix> {
    let (n, mat, pairs) = parse_parts(text)?;
    attach(SimplifiedCheckMatrix::unchecked(n, mat)?, pairs)
}

/// Parses logical rows (`k` Z rows then `k` X rows) in the same format.
pub fn parse_logical_matrix(text: &str) -> Result<LogicalMatrix> {
    let (n, mat, pairs) = parse_parts(text)?;
    if pairs.is_some() {
        return Err(Error::InvalidArgument("logical matrices take no pairs= line".into()));
    }
    LogicalMatrix::new(n, mat)
}

fn attach(h: SimplifiedCheckMatrix, pairs: Option<Vec<(usize, usize)>>) -> Result<SimplifiedCheckMatrix> {
    match pairs {
        Some(p) => h.with_pairs(p),
        None => Ok(h),
    }
}

type Parts = (usize, BitMatrix, Option<Vec<(usize, usize)>>);

fn parse_parts(text: &str) -> Result<Parts> {
    let mut n: Option<usize> = None;
    let mut pairs = None;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let offset = content.len() - content.trim_start().len();
        let line = content.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(v) = line.strip_prefix("n=") {
            if n.is_some() {
                return Err(parse_err(line_no, offset + 1, "duplicate n= header"));
            }
            let value = v
                .trim()
                .parse::<usize>()
                .map_err(|e| parse_err(line_no, offset + 3, format!("bad qubit count: {e}")))?;
            if value == 0 {
                return Err(parse_err(line_no, offset + 3, "qubit count must be positive"));
            }
            n = Some(value);
        } else if let Some(v) = line.strip_prefix("pairs=") {
            pairs = Some(parse_pairs(v, line_no, offset + 7)?);
        } else {
            let Some(n) = n else {
                return Err(parse_err(line_no, offset + 1, "matrix row before n= header"));
            };
            rows.push(parse_row(line, n, line_no, offset)?);
        }
    }
    let n = n.ok_or_else(|| parse_err(1, 1, "missing n= header"))?;
    Ok((n, BitMatrix::from_rows(2 * n, rows)?, pairs))
}

fn parse_pairs(v: &str, line: usize, column: usize) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut col = column;
    for item in v.split(',') {
        let trimmed = item.trim();
        if !trimmed.is_empty() {
            let (a, b) = trimmed
                .split_once(':')
                .ok_or_else(|| parse_err(line, col, format!("pair {trimmed:?} is not of the form a:b")))?;
            let num = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|e| parse_err(line, col, format!("bad row index {s:?}: {e}")))
            };
            out.push((num(a)?, num(b)?));
        }
        col += item.len() + 1;
    }
    Ok(out)
}

fn parse_row(line: &str, n: usize, line_no: usize, offset: usize) -> Result<BitVector> {
    let mut bits = Vec::with_capacity(2 * n);
    let mut bar = None;
    for (i, ch) in line.char_indices() {
        let col = offset + i + 1;
        match ch {
            '0' => bits.push(false),
            '1' => bits.push(true),
            '|' if bar.is_none() => {
                if bits.len() != n {
                    return Err(parse_err(
                        line_no,
                        col,
                        format!("x part has {} bits, expected {n}", bits.len()),
                    ));
                }
                bar = Some(col);
            }
            ' ' | '\t' => {}
            _ => return Err(parse_err(line_no, col, format!("unexpected character {ch:?}"))),
        }
    }
    if bar.is_none() {
        return Err(parse_err(line_no, offset + 1, "row has no '|' separator"));
    }
    if bits.len() != 2 * n {
        return Err(parse_err(
            line_no,
            offset + line.len(),
            format!("z part has {} bits, expected {n}", bits.len() - n),
        ));
    }
    Ok(BitVector::from_bools(&bits))
}

fn row_text(row: &BitVector, n: usize) -> String {
    let bit = |i| if row.get(i) { '1' } else { '0' };
    let mut s: String = (0..n).map(bit).collect();
    s.push('|');
    s.extend((n..2 * n).map(bit));
    s
}

/// Writes the text format; `parse_check_matrix` inverts it.
pub fn write_check_matrix(h: &SimplifiedCheckMatrix) -> String {
    let n = h.n();
    let mut out = format!("n={n}\n");
    if let Some(p) = h.pairs() {
        let list: Vec<String> = p.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        out.push_str(&format!("pairs={}\n", list.join(",")));
    }
    for row in h.matrix().rows() {
        out.push_str(&row_text(row, n));
        out.push('\n');
    }
    out
}

pub fn write_logical_matrix(l: &LogicalMatrix) -> String {
    let n = l.n();
    let mut out = format!("n={n}\n");
    for row in l.matrix().rows() {
        out.push_str(&row_text(row, n));
        out.push('\n');
    }
    out
}

/// JSON shape of a code report; field order is the serialized key order.
#[derive(Clone, Debug, Serialize)]
pub struct ReportJson {
    pub n: usize,
    pub k: usize,
    pub c: usize,
    pub d: usize,
    pub degenerate: bool,
    pub singleton_saturated: bool,
    pub weight_enumerator: Vec<u64>,
    pub elapsed_ms: u64,
}

impl ReportJson {
    pub fn new(report: &CodeReport, elapsed_ms: u64) -> Self {
        let p = report.params;
        Self {
            n: p.n,
            k: p.k,
            c: p.c,
            d: p.d,
            degenerate: p.degenerate,
            singleton_saturated: report.singleton_saturated,
            weight_enumerator: report.enumerator.0.clone(),
            elapsed_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::code::analyze;

    #[test]
    fn catalog_round_trips() {
        for e in catalog() {
            let text = write_check_matrix(&e.check);
            let back = parse_check_matrix(&text).unwrap();
            assert_eq!(back, e.check, "{}", e.name);
            assert_eq!(write_check_matrix(&back), text);
        }
    }

    #[test]
    fn pairs_and_comments() {
        let text = "# bell pair\n  n=2 # two qubits\npairs=0:1\n10|00\n00|10\n";
        let h = parse_check_matrix(text).unwrap();
        assert_eq!(h.pairs(), Some(&[(0, 1)][..]));
        assert_eq!(h.ebits(), 1);
        let again = parse_check_matrix(&write_check_matrix(&h)).unwrap();
        assert_eq!(again, h);
    }

    fn err_at(text: &str) -> (usize, usize) {
        match parse_check_matrix(text) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_name_line_and_column() {
        assert_eq!(err_at("n=2\n10|0x\n"), (2, 5));
        assert_eq!(err_at("n=2\n1|00\n"), (2, 2));
        assert_eq!(err_at("n=2\n10|001\n"), (2, 6));
        assert_eq!(err_at("n=2\n1000\n"), (2, 1));
        assert_eq!(err_at("10|00\n"), (1, 1));
        assert_eq!(err_at("n=two\n"), (1, 3));
        assert_eq!(err_at("n=2\npairs=0-1\n"), (2, 7));
        assert_eq!(err_at(""), (1, 1));
    }

    #[test]
    fn dependent_rows_rejected_unless_unchecked() {
        let text = "n=2\n10|00\n10|00\n";
        assert!(matches!(parse_check_matrix(text), Err(Error::DependentRows { .. })));
        assert_eq!(parse_check_matrix_unchecked(text).unwrap().rows(), 2);
    }

    #[test]
    fn json_key_order() {
        let e = crate::catalog::lookup("example1_5_1_5_4").unwrap();
        let json = ReportJson::new(&analyze(&e.check).unwrap(), 3).to_json();
        let keys = [
            "\"n\"",
            "\"k\"",
            "\"c\"",
            "\"d\"",
            "\"degenerate\"",
            "\"singleton_saturated\"",
            "\"weight_enumerator\"",
            "\"elapsed_ms\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["d"], 5);
        assert_eq!(v["c"], 4);
        assert_eq!(v["singleton_saturated"], true);
        assert_eq!(v["degenerate"], false);
        assert_eq!(v["weight_enumerator"].as_array().unwrap().len(), 6);
    }
}
