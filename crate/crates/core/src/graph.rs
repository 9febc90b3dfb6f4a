//! Explicit Tanner graph of the lifted code.
//!
//! Variable node `(j, t)` has index `j·N + t` and check node `(i, s)` has
//! index `i·N + s`. Variable `(j, t)` is joined to check `(i, (t + b_ij) mod N)`
//! in every block row `i`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::matrix::{ExponentMatrix, ROWS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n_cols: usize,
    lifting: u32,
    var_checks: Vec<[u32; ROWS]>,
    check_vars: Vec<Vec<u32>>,
}

pub fn lift(b: &ExponentMatrix) -> TannerGraph {
    let n = b.n_cols();
    let lifting = b.lifting_degree();
    let big_n = lifting as usize;
    let mut var_checks = Vec::with_capacity(n * big_n);
    let mut check_vars = vec![Vec::with_capacity(n); ROWS * big_n];
    for j in 0..n {
        for t in 0..big_n {
            let v = (j * big_n + t) as u32;
            let checks = [0, 1, 2].map(|i| (i * big_n + (t + b.entry(i, j) as usize) % big_n) as u32);
            for &c in &checks {
                check_vars[c as usize].push(v);
            }
            var_checks.push(checks);
        }
    }
    TannerGraph {
        n_cols: n,
        lifting,
        var_checks,
        check_vars,
    }
}

impl TannerGraph {
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn lifting_degree(&self) -> u32 {
        self.lifting
    }

    pub fn n_variables(&self) -> usize {
        self.var_checks.len()
    }

    pub fn n_checks(&self) -> usize {
        self.check_vars.len()
    }

    #[inline]
    pub fn checks_of(&self, var: u32) -> &[u32; ROWS] {
        &self.var_checks[var as usize]
    }

    #[inline]
    pub fn variables_of(&self, check: u32) -> &[u32] {
        &self.check_vars[check as usize]
    }

    /// `(block, shift)` of a variable node.
    pub fn variable_coords(&self, var: u32) -> (usize, u32) {
        (var as usize / self.lifting as usize, var % self.lifting)
    }

    /// `(block, shift)` of a check node.
    pub fn check_coords(&self, check: u32) -> (usize, u32) {
        (check as usize / self.lifting as usize, check % self.lifting)
    }

    /// Image of a variable node under the shift automorphism `t -> t + by`.
    #[inline]
    pub fn shift_variable(&self, var: u32, by: u32) -> u32 {
        let (j, t) = self.variable_coords(var);
        j as u32 * self.lifting + (t + by) % self.lifting
    }

    #[inline]
    pub fn shift_check(&self, check: u32, by: u32) -> u32 {
        let (i, s) = self.check_coords(check);
        i as u32 * self.lifting + (s + by) % self.lifting
    }

    /// Every edge as `(variable, check)`, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut e: Vec<(u32, u32)> = self
            .var_checks
            .iter()
            .enumerate()
            .flat_map(|(v, cs)| cs.iter().map(move |&c| (v as u32, c)))
            .collect();
        e.sort_unstable();
        e
    }

    /// Standard alist layout of the parity-check matrix, 1-indexed.
    pub fn to_alist(&self) -> String {
        let max_var = self.var_checks.iter().map(|c| c.len()).max().unwrap_or(0);
        let max_check = self.check_vars.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::new();
        let join = |xs: &mut dyn Iterator<Item = usize>| xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(out, "{} {}", self.n_variables(), self.n_checks()).unwrap();
        writeln!(out, "{} {}", max_var, max_check).unwrap();
        writeln!(out, "{}", join(&mut self.var_checks.iter().map(|c| c.len()))).unwrap();
        writeln!(out, "{}", join(&mut self.check_vars.iter().map(Vec::len))).unwrap();
        for cs in &self.var_checks {
            let mut sorted: Vec<usize> = cs.iter().map(|&c| c as usize + 1).collect();
            sorted.sort_unstable();
            sorted.resize(max_var, 0);
            writeln!(out, "{}", join(&mut sorted.into_iter())).unwrap();
        }
        for vs in &self.check_vars {
            let mut sorted: Vec<usize> = vs.iter().map(|&v| v as usize + 1).collect();
            sorted.sort_unstable();
            sorted.resize(max_check, 0);
            writeln!(out, "{}", join(&mut sorted.into_iter())).unwrap();
        }
        out
    }
}

/// Result of a capped girth computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GraphGirth {
    Exact(u32),
    AtLeast(u32),
}

impl GraphGirth {
    /// Girth value, or the cap when no shorter cycle exists.
    pub fn capped_value(self) -> u32 {
        match self {
            GraphGirth::Exact(g) | GraphGirth::AtLeast(g) => g,
        }
    }
}

impl std::fmt::Display for GraphGirth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphGirth::Exact(g) => write!(f, "{g}"),
            GraphGirth::AtLeast(g) => write!(f, ">={g}"),
        }
    }
}

/// Girth by breadth-first search, reporting `AtLeast(cap)` when no cycle
/// shorter than `cap` exists.
///
/// Every cycle passes a variable node and the shift automorphism moves any
/// variable node to shift 0, so only the `n` variable nodes with `t = 0`
/// are used as roots.
pub fn bfs_girth(g: &TannerGraph, cap: u32) -> GraphGirth {
    // node ids: variables 0..V, checks V..V+C
    let n_var = g.n_variables();
    let total = n_var + g.n_checks();
    let mut best = cap;
    let mut dist = vec![u32::MAX; total];
    let mut parent = vec![u32::MAX; total];
    let mut touched: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();

    let neighbours = |u: usize| -> Vec<usize> {
        if u < n_var {
            g.checks_of(u as u32).iter().map(|&c| n_var + c as usize).collect()
        } else {
            g.variables_of((u - n_var) as u32).iter().map(|&v| v as usize).collect()
        }
    };

    for j in 0..g.n_cols() {
        let root = j * g.lifting_degree() as usize;
        for &u in &touched {
            dist[u] = u32::MAX;
            parent[u] = u32::MAX;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            // any cycle closed from here has length >= 2·dist[u]
            if 2 * dist[u] >= best {
                break;
            }
            for w in neighbours(u) {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u as u32;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u] != w as u32 {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best < cap {
        GraphGirth::Exact(best)
    } else {
        GraphGirth::AtLeast(cap)
    }
}

/// Whether the graph has a cycle of exactly `len` edges, by depth-first
/// search over simple paths. Only small `len` is practical. As in
/// [`bfs_girth`], roots are the variable nodes with shift 0.
pub fn has_cycle_of_length(g: &TannerGraph, len: usize) -> bool {
    fn walk(g: &TannerGraph, path: &mut Vec<(bool, u32)>, len: usize) -> bool {
        let &(is_var, node) = path.last().expect("path starts at the root");
        let next: Vec<u32> = if is_var {
            g.checks_of(node).to_vec()
        } else {
            g.variables_of(node).to_vec()
        };
        for w in next {
            let step = (!is_var, w);
            if path.len() == len {
                if step == path[0] {
                    return true;
                }
                continue;
            }
            // a simple path never revisits a node, including the root
            if path.contains(&step) {
                continue;
            }
            path.push(step);
            if walk(g, path, len) {
                return true;
            }
            path.pop();
        }
        false
    }
    if len < 4 || len % 2 == 1 {
        return false;
    }
    (0..g.n_cols()).any(|j| {
        let root = (true, j as u32 * g.lifting_degree());
        walk(g, &mut vec![root], len)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_block_connects_equal_shifts() {
        let g = lift(&ExponentMatrix::zeros(2, 5).unwrap());
        for v in 0..g.n_variables() as u32 {
            let (_, t) = g.variable_coords(v);
            for &c in g.checks_of(v) {
                assert_eq!(g.check_coords(c).1, t);
            }
        }
    }

    #[test]
    fn shift_one_block_with_lifting_three() {
        let b = ExponentMatrix::new(3, [vec![0, 1], vec![0, 1], vec![0, 1]]).unwrap();
        let g = lift(&b);
        // variable (1, 0) -> check (i, 1); variable (1, 2) -> check (i, 0)
        for i in 0..3 {
            assert_eq!(g.check_coords(g.checks_of(3)[i]), (i, 1));
            assert_eq!(g.check_coords(g.checks_of(5)[i]), (i, 0));
        }
    }

    #[test]
    fn example1_degree_audit() {
        let b = ExponentMatrix::new(37, [vec![0, 0, 0, 0], vec![0, 1, 3, 24], vec![0, 27, 7, 19]]).unwrap();
        let g = lift(&b);
        assert_eq!(g.n_variables(), 148);
        assert_eq!(g.n_checks(), 111);
        assert!((0..148).all(|v| g.checks_of(v).len() == 3));
        assert!((0..111).all(|c| g.variables_of(c).len() == 4));
    }

    #[test]
    fn shift_is_an_automorphism() {
        let b = ExponentMatrix::new(11, [vec![0, 4, 2], vec![3, 0, 9], vec![7, 1, 0]]).unwrap();
        let g = lift(&b);
        let mut shifted: Vec<(u32, u32)> = g
            .edges()
            .into_iter()
            .map(|(v, c)| (g.shift_variable(v, 1), g.shift_check(c, 1)))
            .collect();
        shifted.sort_unstable();
        assert_eq!(shifted, g.edges());
    }

    #[test]
    fn bfs_girth_small_cases() {
        assert_eq!(bfs_girth(&lift(&ExponentMatrix::zeros(2, 2).unwrap()), 10), GraphGirth::Exact(4));
        let t1 = ExponentMatrix::from_table_rows(13, &[1, 3, 9], &[2, 6, 5]).unwrap();
        assert_eq!(bfs_girth(&lift(&t1), 10), GraphGirth::Exact(8));
        let t2 = ExponentMatrix::from_table_rows(26, &[1, 3, 9], &[4, 11, 16]).unwrap();
        assert_eq!(bfs_girth(&lift(&t2), 10), GraphGirth::Exact(8));
        assert_eq!(bfs_girth(&lift(&t2), 8), GraphGirth::AtLeast(8));
    }

    #[test]
    fn exact_cycle_lengths() {
        let zeros = lift(&ExponentMatrix::zeros(3, 5).unwrap());
        assert!(has_cycle_of_length(&zeros, 4));
        assert!(has_cycle_of_length(&zeros, 6));
        let t2 = lift(&ExponentMatrix::from_table_rows(26, &[1, 3, 9], &[4, 11, 16]).unwrap());
        assert!(!has_cycle_of_length(&t2, 4));
        assert!(!has_cycle_of_length(&t2, 6));
        assert!(has_cycle_of_length(&t2, 8));
    }

    #[test]
    fn alist_header_and_lists() {
        let t1 = ExponentMatrix::from_table_rows(13, &[1, 3, 9], &[2, 6, 5]).unwrap();
        let alist = lift(&t1).to_alist();
        let lines: Vec<&str> = alist.lines().collect();
        assert_eq!(lines[0], "52 39");
        assert_eq!(lines[1], "3 4");
        assert_eq!(lines[2].split(' ').count(), 52);
        assert!(lines[3].split(' ').all(|d| d == "4"));
        assert_eq!(lines.len(), 4 + 52 + 39);
        // variable (0,0) sits on checks (0,0), (1,0), (2,0)
        assert_eq!(lines[4], "1 14 27");
        assert!(alist.ends_with('\n') && !alist.contains(" \n"));
    }
}
