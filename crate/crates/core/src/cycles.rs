//! Short-cycle detection on the exponent matrix.
//!
//! A closed walk `v(n_0) c(m_0) v(n_1) c(m_1) ... c(m_{k-1}) v(n_0)` in the
//! base graph with `m_i != m_{i+1}` and `n_i != n_{i+1}` (cyclically) lifts to
//! a closed walk of length `2k` in the Tanner graph exactly when
//!
//! ```text
//! sum_{i=0}^{k-1} (b[m_i][n_i] - b[m_i][n_{i+1}]) = 0 (mod N).
//! ```
//!
//! Such a walk is non-backtracking, so it contains a cycle of length at most
//! `2k`; conversely every `2k`-cycle gives a vanishing instance. The direct
//! enumeration in [`find_cycle`] is the reference; the checks that read the
//! pair-difference matrix are faster routes validated against it.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::matrix::{ExponentMatrix, PairDifferenceMatrix, ROWS, ROW_PAIRS};

/// One vanishing instance of the cycle sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    /// Length `2k` of the closed walk in the Tanner graph.
    pub length: usize,
    pub rows: Vec<usize>,
    pub columns: Vec<usize>,
    /// Unreduced alternating sum; a multiple of `N`.
    pub residue_sum: i64,
}

impl CycleWitness {
    fn from_walk(b: &ExponentMatrix, rows: &[usize], columns: &[usize]) -> Self {
        Self {
            length: 2 * rows.len(),
            rows: rows.to_vec(),
            columns: columns.to_vec(),
            residue_sum: cycle_sum(b, rows, columns),
        }
    }

    /// Walk shape is admissible and the sum vanishes modulo `N`.
    pub fn verify(&self, b: &ExponentMatrix) -> bool {
        let k = self.rows.len();
        k >= 2
            && self.columns.len() == k
            && self.length == 2 * k
            && is_cyclically_distinct(&self.rows)
            && is_cyclically_distinct(&self.columns)
            && cycle_sum(b, &self.rows, &self.columns).rem_euclid(b.lifting_degree() as i64) == 0
    }
}

fn is_cyclically_distinct(seq: &[usize]) -> bool {
    let k = seq.len();
    (0..k).all(|i| seq[i] != seq[(i + 1) % k])
}

/// Alternating sum `sum (b[m_i][n_i] - b[m_i][n_{i+1}])`, unreduced.
pub fn cycle_sum(b: &ExponentMatrix, rows: &[usize], columns: &[usize]) -> i64 {
    let k = rows.len();
    (0..k)
        .map(|i| b.entry(rows[i], columns[i]) as i64 - b.entry(rows[i], columns[(i + 1) % k]) as i64)
        .sum()
}

/// All length-`k` sequences over `0..alphabet` with cyclically distinct
/// neighbours, in lexicographic order.
pub fn closed_sequences(k: usize, alphabet: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, k: usize, alphabet: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            if prefix[0] != prefix[k - 1] {
                out.push(prefix.clone());
            }
            return;
        }
        for s in 0..alphabet {
            if prefix.last() == Some(&s) {
                continue;
            }
            prefix.push(s);
            extend(prefix, k, alphabet, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(k), k, alphabet, &mut out);
    out
}

/// First vanishing instance of length `2k` whose row sequence satisfies
/// `row_filter`, by direct enumeration.
pub fn find_cycle_with_rows<F>(b: &ExponentMatrix, k: usize, row_filter: F) -> Option<CycleWitness>
where
    F: Fn(&[usize]) -> bool,
{
    let modulus = b.lifting_degree() as i64;
    let column_walks = closed_sequences(k, b.n_cols());
    for rows in closed_sequences(k, ROWS).into_iter().filter(|r| row_filter(r)) {
        for cols in &column_walks {
            if cycle_sum(b, &rows, cols).rem_euclid(modulus) == 0 {
                return Some(CycleWitness::from_walk(b, &rows, cols));
            }
        }
    }
    None
}

/// First vanishing instance of length `2k`, any rows.
pub fn find_cycle(b: &ExponentMatrix, k: usize) -> Option<CycleWitness> {
    find_cycle_with_rows(b, k, |_| true)
}

/// 4-cycles exist iff some component of `DD` is zero.
pub fn four_cycle_exists(dd: &PairDifferenceMatrix) -> Option<CycleWitness> {
    for (i, &(p, q)) in ROW_PAIRS.iter().enumerate() {
        for (t, &(j, k)) in dd.column_pairs().iter().enumerate() {
            let (x, _) = dd.element(i, t);
            if x == 0 {
                return Some(CycleWitness {
                    length: 4,
                    rows: vec![p, q],
                    columns: vec![j, k],
                    residue_sum: 0,
                });
            }
        }
    }
    None
}

/// 6-cycles, by direct enumeration of all column triples and row orders.
pub fn six_cycle_exists(b: &ExponentMatrix) -> Option<CycleWitness> {
    if b.n_cols() < 3 {
        return None;
    }
    find_cycle(b, 3)
}

/// `D[p] - D[q]` oriented component at columns `(a, b)`, taken from the
/// `DD` row holding the unordered pair `{p, q}`.
fn oriented_for_rows(dd: &PairDifferenceMatrix, p: usize, q: usize, a: usize, b: usize) -> u32 {
    let row = ROW_PAIRS
        .iter()
        .position(|&(x, y)| (x, y) == (p, q) || (x, y) == (q, p))
        .expect("distinct rows");
    if ROW_PAIRS[row] == (p, q) {
        dd.oriented(row, a, b)
    } else {
        dd.oriented(row, b, a)
    }
}

/// Looks for columns `n_0..n_3` with `F(n_0,n_1) = G(n_3,n_2)`, adjacent
/// columns distinct, where `F`, `G` are oriented component lookups.
fn matching_oriented_components<F, G>(n: usize, f: F, g: G) -> Option<[usize; 4]>
where
    F: Fn(usize, usize) -> u32,
    G: Fn(usize, usize) -> u32,
{
    let mut by_value: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for c in 0..n {
        for d in 0..n {
            if c != d {
                by_value.entry(g(c, d)).or_default().push((c, d));
            }
        }
    }
    for n0 in 0..n {
        for n1 in 0..n {
            if n0 == n1 {
                continue;
            }
            if let Some(cands) = by_value.get(&f(n0, n1)) {
                // (n3, n2) = (c, d)
                if let Some(&(n3, n2)) = cands.iter().find(|&&(c, d)| d != n1 && c != n0) {
                    return Some([n0, n1, n2, n3]);
                }
            }
        }
    }
    None
}

/// 8-cycles on the two block rows encoded by `DD` row `i` (row pattern
/// `{p,q,p,q}`).
///
/// With `E = b_p - b_q` the walk sum is `E[n0]-E[n1]+E[n2]-E[n3]`, so a
/// cycle exists iff the row has a zero component, a component whose double
/// vanishes, or a repeated component.
pub fn eight_cycle_two_rows_exists(dd: &PairDifferenceMatrix, i: usize) -> Option<CycleWitness> {
    let (p, q) = ROW_PAIRS[i];
    let e = |a: usize, b: usize| dd.oriented(i, a, b);
    let [n0, n1, n2, n3] = matching_oriented_components(dd.n_cols(), e, e)?;
    Some(CycleWitness {
        length: 8,
        rows: vec![p, q, p, q],
        columns: vec![n0, n1, n2, n3],
        residue_sum: 0,
    })
}

/// 8-cycles through all three block rows with row `u` visited twice
/// (row pattern `{v,u,w,u}`).
///
/// With `F = b_u - b_v` and `G = b_u - b_w` the walk sum is
/// `-(F[n0]-F[n1]) - (G[n2]-G[n3])`; the check compares oriented components
/// of the two `DD` rows involving `u`, honouring the adjacency constraints
/// `n1 != n2` and `n3 != n0`.
pub fn eight_cycle_three_rows_exists(dd: &PairDifferenceMatrix, u: usize) -> Option<CycleWitness> {
    let others: Vec<usize> = (0..ROWS).filter(|&r| r != u).collect();
    let (v, w) = (others[0], others[1]);
    let f = |a: usize, b: usize| oriented_for_rows(dd, u, v, a, b);
    let g = |a: usize, b: usize| oriented_for_rows(dd, u, w, a, b);
    let [n0, n1, n2, n3] = matching_oriented_components(dd.n_cols(), f, g)?;
    Some(CycleWitness {
        length: 8,
        rows: vec![v, u, w, u],
        columns: vec![n0, n1, n2, n3],
        residue_sum: 0,
    })
}

/// Girth of the lifted Tanner graph read off the exponent matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExponentGirth {
    Four,
    Six,
    Eight,
    AtLeastTen,
}

impl ExponentGirth {
    /// Girth value, with 10 standing for "at least 10".
    pub fn capped_value(self) -> u32 {
        match self {
            ExponentGirth::Four => 4,
            ExponentGirth::Six => 6,
            ExponentGirth::Eight => 8,
            ExponentGirth::AtLeastTen => 10,
        }
    }
}

impl std::fmt::Display for ExponentGirth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExponentGirth::AtLeastTen => write!(f, ">=10"),
            g => write!(f, "{}", g.capped_value()),
        }
    }
}

/// Smallest `2k` in {4, 6, 8} with a vanishing cycle sum.
pub fn girth_from_exponent(b: &ExponentMatrix) -> ExponentGirth {
    if find_cycle(b, 2).is_some() {
        ExponentGirth::Four
    } else if six_cycle_exists(b).is_some() {
        ExponentGirth::Six
    } else if find_cycle(b, 4).is_some() {
        ExponentGirth::Eight
    } else {
        ExponentGirth::AtLeastTen
    }
}

/// Same answer as [`girth_from_exponent`], computed from `DD` plus the
/// six-cycle enumeration.
pub fn girth_from_pair_differences(b: &ExponentMatrix, dd: &PairDifferenceMatrix) -> ExponentGirth {
    if four_cycle_exists(dd).is_some() {
        ExponentGirth::Four
    } else if six_cycle_exists(b).is_some() {
        ExponentGirth::Six
    } else if (0..ROWS).any(|i| eight_cycle_two_rows_exists(dd, i).is_some())
        || (0..ROWS).any(|u| eight_cycle_three_rows_exists(dd, u).is_some())
    {
        ExponentGirth::Eight
    } else {
        ExponentGirth::AtLeastTen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1_n4() -> ExponentMatrix {
        ExponentMatrix::from_table_rows(13, &[1, 3, 9], &[2, 6, 5]).unwrap()
    }

    fn table2_n4() -> ExponentMatrix {
        ExponentMatrix::from_table_rows(26, &[1, 3, 9], &[4, 11, 16]).unwrap()
    }

    #[test]
    fn closed_sequence_counts() {
        // closed walks of length k on K_m: (m-1)^k + (-1)^k (m-1)
        assert_eq!(closed_sequences(2, 3).len(), 6);
        assert_eq!(closed_sequences(3, 3).len(), 6);
        assert_eq!(closed_sequences(4, 3).len(), 18);
        assert_eq!(closed_sequences(4, 5).len(), 4usize.pow(4) + 4);
    }

    #[test]
    fn example1_has_no_four_cycles() {
        let b = ExponentMatrix::new(37, [vec![0, 0, 0, 0], vec![0, 1, 3, 24], vec![0, 27, 7, 19]]).unwrap();
        assert!(four_cycle_exists(&b.pair_difference_matrix()).is_none());
        assert!(find_cycle(&b, 2).is_none());
    }

    #[test]
    fn zero_matrix_has_every_short_cycle() {
        let b = ExponentMatrix::zeros(4, 7).unwrap();
        let dd = b.pair_difference_matrix();
        let w = four_cycle_exists(&dd).unwrap();
        assert!(w.verify(&b));
        assert!(eight_cycle_three_rows_exists(&dd, 0).unwrap().verify(&b));
        assert_eq!(girth_from_exponent(&b), ExponentGirth::Four);
    }

    #[test]
    fn table_matrices_have_no_four_cycles() {
        for b in [table1_n4(), table2_n4()] {
            assert!(four_cycle_exists(&b.pair_difference_matrix()).is_none());
        }
    }

    #[test]
    fn table1_n4_has_no_six_cycles() {
        // {0,1,3,9} is a perfect difference set mod 13 and row 2 doubles row 1;
        // 2x_a - x_b - x_c never vanishes, so the girth is 8 rather than 6.
        assert!(six_cycle_exists(&table1_n4()).is_none());
        assert_eq!(girth_from_exponent(&table1_n4()), ExponentGirth::Eight);
    }

    #[test]
    fn table2_n4_is_six_cycle_free() {
        assert!(six_cycle_exists(&table2_n4()).is_none());
    }

    #[test]
    fn two_columns_cannot_carry_six_cycles() {
        let b = ExponentMatrix::zeros(2, 5).unwrap();
        assert!(six_cycle_exists(&b).is_none());
    }

    #[test]
    fn two_row_eight_cycles_on_table1() {
        let dd = table1_n4().pair_difference_matrix();
        for i in 0..3 {
            assert!(eight_cycle_two_rows_exists(&dd, i).is_none(), "row {i}");
        }
    }

    #[test]
    fn half_lifting_component_doubles_to_zero() {
        // N = 8; columns 0 and 1 of row pair (0,1) differ by 4
        let b = ExponentMatrix::new(8, [vec![0, 0, 0], vec![0, 4, 1], vec![0, 3, 6]]).unwrap();
        let dd = b.pair_difference_matrix();
        assert!(dd.components(0).any(|x| x == 4));
        let w = eight_cycle_two_rows_exists(&dd, 0).unwrap();
        assert!(w.verify(&b));
        assert_eq!(w.rows, vec![0, 1, 0, 1]);
    }

    #[test]
    fn equal_columns_give_short_cycles() {
        let b = ExponentMatrix::new(19, [vec![0, 0, 0, 0], vec![0, 5, 5, 11], vec![0, 7, 7, 2]]).unwrap();
        let dd = b.pair_difference_matrix();
        assert!(four_cycle_exists(&dd).is_some());
        let w = eight_cycle_two_rows_exists(&dd, 0).unwrap();
        assert!(w.verify(&b));
    }

    #[test]
    fn three_row_eight_cycles() {
        let dd = table2_n4().pair_difference_matrix();
        assert!(eight_cycle_three_rows_exists(&dd, 0).is_none());
        let b = table1_n4();
        let w = eight_cycle_three_rows_exists(&b.pair_difference_matrix(), 0).unwrap();
        assert!(w.verify(&b));
        assert_eq!(w.rows[1], 0);
        assert_eq!(w.rows[3], 0);
    }

    #[test]
    fn dd_routes_match_direct_enumeration_on_tables() {
        for b in [table1_n4(), table2_n4()] {
            let dd = b.pair_difference_matrix();
            for (i, &(p, q)) in ROW_PAIRS.iter().enumerate() {
                let direct = find_cycle_with_rows(&b, 4, |r| r.iter().all(|&x| x == p || x == q));
                assert_eq!(direct.is_some(), eight_cycle_two_rows_exists(&dd, i).is_some());
            }
            for u in 0..3 {
                let direct = find_cycle_with_rows(&b, 4, |r| {
                    (r[1] == u && r[3] == u && r[0] != r[2]) || (r[0] == u && r[2] == u && r[1] != r[3])
                });
                assert_eq!(direct.is_some(), eight_cycle_three_rows_exists(&dd, u).is_some());
            }
            assert_eq!(girth_from_exponent(&b), girth_from_pair_differences(&b, &dd));
        }
    }

    #[test]
    fn witness_rejects_tampering() {
        let b = ExponentMatrix::zeros(3, 5).unwrap();
        let mut w = find_cycle(&b, 2).unwrap();
        assert!(w.verify(&b));
        w.columns = vec![1, 1];
        assert!(!w.verify(&b));
    }
}
