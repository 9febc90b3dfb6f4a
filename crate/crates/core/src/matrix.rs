//! Exponent matrices of fully connected column-weight-3 QC-LDPC codes and the
//! two difference matrices derived from them.
//!
//! An [`ExponentMatrix`] has exactly three rows; every entry is a shift value
//! in `[0, N)` selecting a circulant permutation matrix of size `N`. The
//! [`DifferenceMatrix`] holds the three pairwise row differences per column
//! (signed, unreduced) and the [`PairDifferenceMatrix`] holds, for every row
//! of `D` and every column pair `j < j'`, the residue pair
//! `(D[j] - D[j'], D[j'] - D[j]) mod N`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of block rows (column weight).
pub const ROWS: usize = 3;

/// Row pairs of `B` encoded by rows 0, 1 and 2 of `D` and `DD`.
pub const ROW_PAIRS: [(usize, usize); ROWS] = [(0, 1), (0, 2), (1, 2)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("lifting degree must be at least 2, got {0}")]
    LiftingDegreeTooSmall(u32),
    #[error("exponent matrix needs at least 2 columns, got {0}")]
    TooFewColumns(usize),
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row},{col}) = {value} is outside [0, {lifting})")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: u64,
        lifting: u32,
    },
}

/// A 3×n exponent matrix over `Z_N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentMatrix {
    lifting: u32,
    rows: [Vec<u32>; ROWS],
}

impl ExponentMatrix {
    pub fn new(lifting: u32, rows: [Vec<u32>; ROWS]) -> Result<Self, MatrixError> {
        if lifting < 2 {
            return Err(MatrixError::LiftingDegreeTooSmall(lifting));
        }
        let n = rows[0].len();
        if n < 2 {
            return Err(MatrixError::TooFewColumns(n));
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MatrixError::RaggedRows {
                    row,
                    expected: n,
                    found: r.len(),
                });
            }
            if let Some(col) = r.iter().position(|&v| v >= lifting) {
                return Err(MatrixError::EntryOutOfRange {
                    row,
                    col,
                    value: r[col] as u64,
                    lifting,
                });
            }
        }
        Ok(Self { lifting, rows })
    }

    /// Builds a normalized matrix from the two non-trivial rows as printed in
    /// construction tables, prepending the all-zero first row and column.
    pub fn from_table_rows(lifting: u32, row1: &[u32], row2: &[u32]) -> Result<Self, MatrixError> {
        let expand = |r: &[u32]| std::iter::once(0).chain(r.iter().copied()).collect::<Vec<_>>();
        let zero = vec![0; row1.len() + 1];
        Self::new(lifting, [zero, expand(row1), expand(row2)])
    }

    /// The all-zero matrix (every block the identity).
    pub fn zeros(n_cols: usize, lifting: u32) -> Result<Self, MatrixError> {
        Self::new(lifting, [vec![0; n_cols], vec![0; n_cols], vec![0; n_cols]])
    }

    pub fn n_cols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn lifting_degree(&self) -> u32 {
        self.lifting
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> u32 {
        self.rows[row][col]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.rows[row]
    }

    pub fn rows(&self) -> &[Vec<u32>; ROWS] {
        &self.rows
    }

    /// First row and first column all zero.
    pub fn is_normalized(&self) -> bool {
        self.rows[0].iter().all(|&v| v == 0) && self.rows.iter().all(|r| r[0] == 0)
    }

    /// Equivalent matrix with zero first row and column.
    ///
    /// Subtracting a constant from a column relabels that block column's
    /// variable nodes and subtracting a constant from a row relabels that
    /// block row's check nodes, so every cycle condition is preserved.
    pub fn normalized(&self) -> Self {
        let n = self.n_cols();
        let modulus = self.lifting as i64;
        let mut rows: [Vec<u32>; ROWS] = Default::default();
        for (i, out) in rows.iter_mut().enumerate() {
            *out = (0..n)
                .map(|j| {
                    let v = self.entry(i, j) as i64 - self.entry(0, j) as i64 - self.entry(i, 0) as i64
                        + self.entry(0, 0) as i64;
                    v.rem_euclid(modulus) as u32
                })
                .collect();
        }
        Self { lifting: self.lifting, rows }
    }

    /// Relabels block rows: row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: [usize; ROWS]) -> Self {
        Self {
            lifting: self.lifting,
            rows: perm.map(|p| self.rows[p].clone()),
        }
    }

    /// Reorders block columns: column `j` of the result is column `order[j]`.
    pub fn permute_columns(&self, order: &[usize]) -> Self {
        Self {
            lifting: self.lifting,
            rows: self.rows.clone().map(|r| order.iter().map(|&j| r[j]).collect()),
        }
    }

    pub fn difference_matrix(&self) -> DifferenceMatrix {
        build_difference_matrix(self)
    }

    pub fn pair_difference_matrix(&self) -> PairDifferenceMatrix {
        build_pair_difference_matrix(&build_difference_matrix(self), self.lifting)
    }
}

/// Pairwise row differences `b_pj - b_qj` for the row pairs in [`ROW_PAIRS`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceMatrix {
    rows: [Vec<i64>; ROWS],
}

impl DifferenceMatrix {
    pub fn n_cols(&self) -> usize {
        self.rows[0].len()
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.rows[row][col]
    }

    pub fn rows(&self) -> &[Vec<i64>; ROWS] {
        &self.rows
    }
}

pub fn build_difference_matrix(b: &ExponentMatrix) -> DifferenceMatrix {
    let rows = ROW_PAIRS.map(|(p, q)| {
        (0..b.n_cols())
            .map(|j| b.entry(p, j) as i64 - b.entry(q, j) as i64)
            .collect()
    });
    DifferenceMatrix { rows }
}

/// Residue pairs obtained by subtracting every two columns of `D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDifferenceMatrix {
    lifting: u32,
    n_cols: usize,
    pairs: Vec<(usize, usize)>,
    rows: [Vec<(u32, u32)>; ROWS],
}

impl PairDifferenceMatrix {
    pub fn lifting_degree(&self) -> u32 {
        self.lifting
    }

    /// Number of columns of the underlying exponent matrix.
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Column pairs `(j, j')`, `j < j'`, in lexicographic order.
    pub fn column_pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn row(&self, row: usize) -> &[(u32, u32)] {
        &self.rows[row]
    }

    #[inline]
    pub fn element(&self, row: usize, pair: usize) -> (u32, u32) {
        self.rows[row][pair]
    }

    /// Position of the column pair `{a, b}` in lexicographic order.
    pub fn pair_index(&self, a: usize, b: usize) -> usize {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        // pairs starting with 0..lo come first
        lo * (2 * self.n_cols - lo - 1) / 2 + (hi - lo - 1)
    }

    /// `D[row][a] - D[row][b] mod N` read from the stored pairs.
    #[inline]
    pub fn oriented(&self, row: usize, a: usize, b: usize) -> u32 {
        let (first, second) = self.rows[row][self.pair_index(a, b)];
        if a < b {
            first
        } else {
            second
        }
    }

    /// All `2·C(n,2)` components of one row, first components then second
    /// components interleaved per pair.
    pub fn components(&self, row: usize) -> impl Iterator<Item = u32> + '_ {
        self.rows[row].iter().flat_map(|&(x, y)| [x, y])
    }
}

pub fn build_pair_difference_matrix(d: &DifferenceMatrix, lifting: u32) -> PairDifferenceMatrix {
    let n = d.n_cols();
    let modulus = lifting as i64;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .collect();
    let rows = [0, 1, 2].map(|i| {
        pairs
            .iter()
            .map(|&(j, k)| {
                let diff = d.entry(i, j) - d.entry(i, k);
                (
                    diff.rem_euclid(modulus) as u32,
                    (-diff).rem_euclid(modulus) as u32,
                )
            })
            .collect()
    });
    PairDifferenceMatrix {
        lifting,
        n_cols: n,
        pairs,
        rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TargetGirth {
    Six,
    Eight,
}

impl TargetGirth {
    pub fn value(self) -> u32 {
        match self {
            TargetGirth::Six => 6,
            TargetGirth::Eight => 8,
        }
    }

    pub fn from_value(g: u32) -> Option<Self> {
        match g {
            6 => Some(TargetGirth::Six),
            8 => Some(TargetGirth::Eight),
            _ => None,
        }
    }
}

/// An `(a, b)` trapping-set class is harmful when `b/a < 1`.
pub fn is_harmful(a: usize, b: usize) -> bool {
    b < a
}

/// Target girth together with the trapping-set classes a construction must avoid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeProfile {
    pub target_girth: TargetGirth,
    /// Excluded `(a, b)` classes; every one is harmful.
    pub ets_exclusions: Vec<(usize, usize)>,
    /// Size bound of the exhaustive trapping-set search covering the exclusions.
    pub a_max: usize,
    /// Unsatisfied-check bound of the same search.
    pub b_max: usize,
}

impl CodeProfile {
    pub fn girth6() -> Self {
        Self {
            target_girth: TargetGirth::Six,
            ets_exclusions: vec![(4, 0), (4, 2), (5, 1)],
            a_max: 5,
            b_max: 2,
        }
    }

    pub fn girth8() -> Self {
        let ets_exclusions = (1..=8)
            .flat_map(|a| (0..=3).map(move |b| (a, b)))
            .filter(|&(a, b)| is_harmful(a, b))
            .collect();
        Self {
            target_girth: TargetGirth::Eight,
            ets_exclusions,
            a_max: 8,
            b_max: 3,
        }
    }

    pub fn for_girth(g: TargetGirth) -> Self {
        match g {
            TargetGirth::Six => Self::girth6(),
            TargetGirth::Eight => Self::girth8(),
        }
    }

    pub fn excludes(&self, a: usize, b: usize) -> bool {
        self.ets_exclusions.contains(&(a, b))
    }
}
