//! Reader and writer for the alist sparse-matrix format (MacKay convention,
//! 1-based indices, zero padding allowed in the index lists).
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! <n column degrees>
//! <m row degrees>
//! <n lines: row indices of each column>
//! <m lines: column indices of each row>
//! ```

use std::fmt::Write as _;
use std::io::Read;

use crate::code::{LinearCode, ParityCheckMatrix};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate().peekable(),
            last: 0,
        }
    }

    /// Next non-blank line as parsed integers, with its 1-based line number.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::Parse {
                        line: i + 1,
                        msg: format!("expected a non-negative integer in {what}, found {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((i + 1, nums));
        }
        Err(Error::Parse {
            line: self.last + 1,
            msg: format!("unexpected end of input while reading {what}"),
        })
    }

    fn expect_len(&mut self, what: &str, len: usize) -> Result<(usize, Vec<usize>)> {
        let (line, nums) = self.next_numbers(what)?;
        if nums.len() != len {
            return Err(Error::Parse {
                line,
                msg: format!("{what}: expected {len} values, found {}", nums.len()),
            });
        }
        Ok((line, nums))
    }
}

/// Parses alist text into a parity-check matrix.
pub fn parse_alist(text: &str) -> Result<ParityCheckMatrix> {
    let mut lines = Lines::new(text);
    let (hl, dims) = lines.expect_len("header (n m)", 2)?;
    let (n, m) = (dims[0], dims[1]);
    if n == 0 {
        return Err(Error::Parse { line: hl, msg: "n must be positive".into() });
    }
    let (_, maxd) = lines.expect_len("maximum degrees", 2)?;
    let (max_col, max_row) = (maxd[0], maxd[1]);
    let (cl, col_deg) = lines.expect_len("column degrees", n)?;
    let (rl, row_deg) = lines.expect_len("row degrees", m)?;
    if let Some(d) = col_deg.iter().find(|&&d| d > max_col) {
        return Err(Error::Parse { line: cl, msg: format!("column degree {d} exceeds maximum {max_col}") });
    }
    if let Some(d) = row_deg.iter().find(|&&d| d > max_row) {
        return Err(Error::Parse { line: rl, msg: format!("row degree {d} exceeds maximum {max_row}") });
    }

    let mut by_col = BitMatrix::zeros(m, n);
    for (v, &deg) in col_deg.iter().enumerate() {
        let (line, idx) = lines.next_numbers("column index list")?;
        let entries = read_index_list(line, &idx, deg, max_col, m, "row")?;
        for r in entries {
            by_col.set(r, v, true);
        }
    }
    let mut by_row = BitMatrix::zeros(m, n);
    for (c, &deg) in row_deg.iter().enumerate() {
        let (line, idx) = lines.next_numbers("row index list")?;
        let entries = read_index_list(line, &idx, deg, max_row, n, "column")?;
        for v in entries {
            if !by_col.get(c, v) {
                return Err(Error::Parse {
                    line,
                    msg: format!(
                        "row {} lists column {} but that column's list omits the row",
                        c + 1,
                        v + 1
                    ),
                });
            }
            by_row.set(c, v, true);
        }
    }
    if by_row != by_col {
        return Err(Error::Parse {
            line: lines.last,
            msg: "row lists and column lists describe different matrices".into(),
        });
    }
    ParityCheckMatrix::new(by_row).map_err(|e| Error::Parse { line: lines.last, msg: e.to_string() })
}

fn read_index_list(
    line: usize,
    idx: &[usize],
    deg: usize,
    max: usize,
    bound: usize,
    kind: &str,
) -> Result<Vec<usize>> {
    let nonzero: Vec<usize> = idx.iter().copied().filter(|&i| i != 0).collect();
    if idx.len() != deg && idx.len() != max {
        return Err(Error::Parse {
            line,
            msg: format!("expected {deg} indices (or {max} with zero padding), found {}", idx.len()),
        });
    }
    if nonzero.len() != deg {
        return Err(Error::Parse {
            line,
            msg: format!("declared degree {deg} but {} nonzero indices", nonzero.len()),
        });
    }
    let mut out = Vec::with_capacity(deg);
    for i in nonzero {
        if i > bound {
            return Err(Error::Parse {
                line,
                msg: format!("{kind} index {i} out of range 1..={bound}"),
            });
        }
        if out.contains(&(i - 1)) {
            return Err(Error::Parse { line, msg: format!("duplicate {kind} index {i}") });
        }
        out.push(i - 1);
    }
    Ok(out)
}

/// Reads alist text from `source` and builds the code, deriving `G`.
pub fn load_alist<R: Read>(mut source: R, name: &str) -> Result<LinearCode> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    LinearCode::from_parity_check(name, parse_alist(&text)?)
}

/// Serialises `h` as alist text (no zero padding).
pub fn to_alist(h: &ParityCheckMatrix) -> String {
    let (m, n) = (h.rows(), h.cols());
    let bits = h.bits();
    let cols: Vec<Vec<usize>> = (0..n).map(|v| (0..m).filter(|&r| bits.get(r, v)).collect()).collect();
    let rows: Vec<Vec<usize>> = (0..m).map(|r| bits.row_support(r)).collect();
    let join = |xs: &[usize]| {
        xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    let _ = writeln!(out, "{n} {m}");
    let _ = writeln!(
        out,
        "{} {}",
        cols.iter().map(Vec::len).max().unwrap_or(0),
        rows.iter().map(Vec::len).max().unwrap_or(0)
    );
    let _ = writeln!(out, "{}", join(&cols.iter().map(Vec::len).collect::<Vec<_>>()));
    let _ = writeln!(out, "{}", join(&rows.iter().map(Vec::len).collect::<Vec<_>>()));
    for c in &cols {
        let one_based: Vec<usize> = c.iter().map(|x| x + 1).collect();
        let _ = writeln!(out, "{}", join(&one_based));
    }
    for r in &rows {
        let one_based: Vec<usize> = r.iter().map(|x| x + 1).collect();
        let _ = writeln!(out, "{}", join(&one_based));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HAMMING: &str = "7 3\n3 4\n1 1 1 2 2 2 3\n4 4 4\n1 0 0\n2 0 0\n3 0 0\n1 2 0\n1 3 0\n2 3 0\n1 2 3\n1 4 5 7\n2 4 6 7\n3 5 6 7\n";

    #[test]
    fn hamming_from_alist() {
        let code = load_alist(HAMMING.as_bytes(), "hamming").unwrap();
        assert_eq!((code.n(), code.k(), code.graph().num_edges()), (7, 4, 12));
        assert_eq!(parse_alist(&to_alist(code.parity_check())).unwrap(), *code.parity_check());
    }

    #[test]
    fn spc_from_alist() {
        let code = load_alist("3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 3\n".as_bytes(), "spc").unwrap();
        assert_eq!((code.n(), code.k(), code.graph().num_edges()), (3, 2, 3));
        assert_eq!(code.graph().check_degree(0), 3);
    }

    #[test]
    fn inconsistent_views_are_rejected() {
        // row 1 repeats column 2
        let bad = "3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 2\n";
        let err = parse_alist(bad).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 8, .. }), "{err}");
        let bad = "3 2\n1 2\n1 1 1\n2 1\n1\n1\n2\n1 2\n2\n";
        assert!(matches!(parse_alist(bad), Err(Error::Parse { .. })));
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_alist("3 1\n1 3\n1 1 x\n3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_alist("3 1\n1 3\n1 1 1\n3\n1\n1\n4\n1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 7, .. }), "{err}");
        let err = parse_alist("3 1\n1 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }
}
