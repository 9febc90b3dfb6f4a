//! Plain-text exponent matrix format.
//!
//! ```text
//! # comment lines start with '#'
//! 3 4 37
//! 0 0 0 0
//! 0 1 3 24
//! 0 27 7 19
//! ```
//!
//! The header gives the row count (always 3), the column count `n` and the
//! lifting degree `N`. Table-style input has header `2 m N` followed by the
//! two non-trivial rows without the leading zero column; it is expanded by
//! [`read_table_style`] into a normalized 3×(m+1) matrix.

use std::io::Read;

use thiserror::Error;

use crate::conditions::lower_bound_lifting;
use crate::matrix::{ExponentMatrix, MatrixError, TargetGirth, ROWS};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("read error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed header: {message}")]
    Header { line: usize, message: String },
    #[error("line {line}: {message}")]
    Entry { line: usize, message: String },
    #[error("line {line}: entry {value} in column {col} is outside [0, {lifting})")]
    EntryOutOfRange {
        line: usize,
        col: usize,
        value: u64,
        lifting: u32,
    },
    #[error("line {line}: expected {expected} entries, found {found}")]
    WrongColumnCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: expected {expected} rows, found {found}")]
    WrongRowCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: MatrixError },
}

/// A structurally parsed matrix whose entries have not been range-checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub lifting: u64,
    pub rows: Vec<Vec<u64>>,
    /// Comment lines without the leading '#', trimmed.
    pub comments: Vec<String>,
    /// 1-based source line of each row.
    pub row_lines: Vec<usize>,
    pub header_line: usize,
}

impl RawMatrix {
    /// Largest entry, if any.
    pub fn max_entry(&self) -> Option<u64> {
        self.rows.iter().flatten().copied().max()
    }

    /// Reasons the matrix cannot be what a construction table claims for the
    /// given girth: entries not below `N`, or `N` below the lower bound for
    /// `n` columns. Empty when consistent.
    pub fn source_inconsistencies(&self, girth: TargetGirth) -> Vec<String> {
        let mut problems = Vec::new();
        if let Some(max) = self.max_entry().filter(|&m| m >= self.lifting) {
            problems.push(format!("entry {max} is not below N={}", self.lifting));
        }
        let bound = lower_bound_lifting(girth, self.n_cols);
        if self.lifting < bound {
            problems.push(format!("N={} is below the lower bound {bound} for n={}", self.lifting, self.n_cols));
        }
        problems
    }

    /// Converts to a validated matrix; `n_rows` must be 3 (or 2 when
    /// `expand_table` is set, in which case the zero row/column is prepended).
    pub fn into_matrix(self, expand_table: bool) -> Result<ExponentMatrix, ParseError> {
        let expected_rows = if expand_table { ROWS - 1 } else { ROWS };
        if self.n_rows != expected_rows {
            return Err(ParseError::Header {
                line: self.header_line,
                message: format!("row count must be {expected_rows}, got {}", self.n_rows),
            });
        }
        if self.lifting < 2 || self.lifting > u32::MAX as u64 {
            return Err(ParseError::Invalid {
                line: self.header_line,
                source: MatrixError::LiftingDegreeTooSmall(self.lifting.min(u32::MAX as u64) as u32),
            });
        }
        let lifting = self.lifting as u32;
        for (row, line) in self.rows.iter().zip(&self.row_lines) {
            if let Some(col) = row.iter().position(|&v| v >= self.lifting) {
                return Err(ParseError::EntryOutOfRange {
                    line: *line,
                    col,
                    value: row[col],
                    lifting,
                });
            }
        }
        let mut rows: Vec<Vec<u32>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&v| v as u32).collect())
            .collect();
        if expand_table {
            for r in rows.iter_mut() {
                r.insert(0, 0);
            }
            rows.insert(0, vec![0; self.n_cols + 1]);
        }
        let rows: [Vec<u32>; ROWS] = rows.try_into().expect("row count checked above");
        ExponentMatrix::new(lifting, rows).map_err(|source| ParseError::Invalid {
            line: self.header_line,
            source,
        })
    }
}

fn parse_u64(tok: &str, line: usize, what: &str) -> Result<u64, ParseError> {
    tok.parse::<u64>().map_err(|_| ParseError::Entry {
        line,
        message: format!("{what} '{tok}' is not a non-negative decimal integer"),
    })
}

/// Parses header and rows without checking entries against `N`.
pub fn parse_raw(text: &str) -> Result<RawMatrix, ParseError> {
    let mut comments = Vec::new();
    let mut header: Option<(usize, usize, u64, usize)> = None;
    let mut rows = Vec::new();
    let mut row_lines = Vec::new();
    let mut last_line = 0;

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw_line.trim();
        if let Some(c) = trimmed.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        match header {
            None => {
                if toks.len() != 3 {
                    return Err(ParseError::Header {
                        line,
                        message: format!("expected 'rows n N', found {} fields", toks.len()),
                    });
                }
                let parse = |t: &str| {
                    t.parse::<u64>().map_err(|_| ParseError::Header {
                        line,
                        message: format!("'{t}' is not a non-negative integer"),
                    })
                };
                let (m, n, lifting) = (parse(toks[0])?, parse(toks[1])?, parse(toks[2])?);
                header = Some((m as usize, n as usize, lifting, line));
            }
            Some((m, n, _, _)) => {
                if rows.len() == m {
                    return Err(ParseError::WrongRowCount {
                        line,
                        expected: m,
                        found: m + 1,
                    });
                }
                if toks.len() != n {
                    return Err(ParseError::WrongColumnCount {
                        line,
                        expected: n,
                        found: toks.len(),
                    });
                }
                let row = toks
                    .iter()
                    .map(|t| parse_u64(t, line, "entry"))
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push(row);
                row_lines.push(line);
            }
        }
    }

    let Some((n_rows, n_cols, lifting, header_line)) = header else {
        return Err(ParseError::Header {
            line: last_line.max(1),
            message: "missing header".into(),
        });
    };
    if rows.len() != n_rows {
        return Err(ParseError::WrongRowCount {
            line: last_line,
            expected: n_rows,
            found: rows.len(),
        });
    }
    Ok(RawMatrix {
        n_rows,
        n_cols,
        lifting,
        rows,
        comments,
        row_lines,
        header_line,
    })
}

pub fn parse_exponent_matrix(text: &str) -> Result<ExponentMatrix, ParseError> {
    parse_raw(text)?.into_matrix(false)
}

pub fn read_exponent_matrix<R: Read>(mut reader: R) -> Result<ExponentMatrix, ParseError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_exponent_matrix(&text)
}

/// Reads table-style input (`2 m N` header, zero row/column omitted).
pub fn read_table_style<R: Read>(mut reader: R) -> Result<ExponentMatrix, ParseError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_raw(&text)?.into_matrix(true)
}

/// Canonical text form: header line then three rows, LF endings.
pub fn write_exponent_matrix(b: &ExponentMatrix) -> String {
    let mut out = format!("{} {} {}\n", ROWS, b.n_cols(), b.lifting_degree());
    for row in b.rows() {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
