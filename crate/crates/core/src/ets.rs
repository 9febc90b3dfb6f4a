//! Exact enumeration of small elementary trapping sets (ETSs) in a lifted
//! Tanner graph.
//!
//! An `(a, b)` ETS is a set of `a` variable nodes whose induced checks all
//! have degree 1 or 2, `b` of them degree 1. Only sets with a connected
//! variable-node graph are enumerated; a disconnected ETS is a union of
//! smaller ones.
//!
//! The search grows a set from an anchor that must be its smallest member.
//! At every step it picks the smallest degree-1 check that has not been
//! committed as unsatisfied and branches: either commit it (it stays degree 1
//! in the final set) or close it with one of its other variable nodes. A
//! target ETS `S*` containing the anchor selects exactly one branch at each
//! step, and the search stops exactly when no open check is left, so every
//! connected ETS is produced once per anchor.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::TannerGraph;
use crate::matrix::is_harmful;

/// Largest sizes the enumerator is specified for.
pub const MAX_SUPPORTED_A: usize = 8;
pub const MAX_SUPPORTED_B: usize = 3;

/// Default ceiling on search steps.
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000_000;

/// Largest graph the brute-force oracle accepts, in variable nodes.
pub const ORACLE_MAX_VARIABLES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtsError {
    #[error("enumeration aborted after {limit} extension steps")]
    StepLimit { limit: u64 },
    #[error("unsupported bounds a_max={a_max}, b_max={b_max} (at most {MAX_SUPPORTED_A} and {MAX_SUPPORTED_B})")]
    Unsupported { a_max: usize, b_max: usize },
    #[error("graph has {variables} variable nodes; brute force is limited to {ORACLE_MAX_VARIABLES}")]
    TooLarge { variables: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EtsRecord {
    /// Sorted variable node indices.
    pub variables: Vec<u32>,
    /// Degree-2 checks, sorted.
    pub satisfied: Vec<u32>,
    /// Degree-1 checks, sorted.
    pub unsatisfied: Vec<u32>,
    /// One edge per satisfied check, endpoints ascending.
    pub vn_edges: Vec<(u32, u32)>,
}

impl EtsRecord {
    /// Builds the record for a variable set, or `None` if some induced check
    /// has degree 3 or more.
    pub fn from_variables(g: &TannerGraph, vars: &[u32]) -> Option<Self> {
        let mut variables = vars.to_vec();
        variables.sort_unstable();
        variables.dedup();
        let mut touched: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &v in &variables {
            for &c in g.checks_of(v) {
                touched.entry(c).or_default().push(v);
            }
        }
        let mut satisfied = Vec::new();
        let mut unsatisfied = Vec::new();
        let mut vn_edges = Vec::new();
        for (c, vs) in touched {
            match vs.len() {
                1 => unsatisfied.push(c),
                2 => {
                    satisfied.push(c);
                    vn_edges.push((vs[0].min(vs[1]), vs[0].max(vs[1])));
                }
                _ => return None,
            }
        }
        vn_edges.sort_unstable();
        Some(Self {
            variables,
            satisfied,
            unsatisfied,
            vn_edges,
        })
    }

    pub fn a(&self) -> usize {
        self.variables.len()
    }

    pub fn b(&self) -> usize {
        self.unsatisfied.len()
    }

    pub fn class(&self) -> (usize, usize) {
        (self.a(), self.b())
    }

    pub fn is_vn_connected(&self) -> bool {
        let a = self.variables.len();
        if a == 0 {
            return false;
        }
        let idx = |v: u32| self.variables.binary_search(&v).unwrap();
        let mut adj = vec![Vec::new(); a];
        for &(x, y) in &self.vn_edges {
            adj[idx(x)].push(idx(y));
            adj[idx(y)].push(idx(x));
        }
        let mut seen = vec![false; a];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn has_multi_edge(&self) -> bool {
        self.vn_edges.windows(2).any(|w| w[0] == w[1])
    }

    pub fn has_triangle(&self) -> bool {
        let edges: BTreeSet<(u32, u32)> = self.vn_edges.iter().copied().collect();
        let vs = &self.variables;
        for (i, &x) in vs.iter().enumerate() {
            for (j, &y) in vs.iter().enumerate().skip(i + 1) {
                if !edges.contains(&(x, y)) {
                    continue;
                }
                if vs[j + 1..].iter().any(|&z| edges.contains(&(x, z)) && edges.contains(&(y, z))) {
                    return true;
                }
            }
        }
        false
    }

    /// Record invariants: elementary degrees, `3a = 2·|satisfied| + b`,
    /// connected variable-node graph, and agreement with the graph.
    pub fn is_consistent_with(&self, g: &TannerGraph) -> bool {
        Self::from_variables(g, &self.variables).as_ref() == Some(self)
            && 3 * self.a() == 2 * self.satisfied.len() + self.b()
            && self.is_vn_connected()
    }
}

/// Which variable nodes seed the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Anchoring {
    /// Only nodes with shift 0; results are expanded over all shifts.
    ShiftOrbits,
    /// Every variable node.
    AllVariables,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtsSearch {
    pub a_max: usize,
    pub b_max: usize,
    pub max_steps: u64,
    pub anchoring: Anchoring,
}

impl EtsSearch {
    pub fn new(a_max: usize, b_max: usize) -> Self {
        Self {
            a_max,
            b_max,
            max_steps: DEFAULT_MAX_STEPS,
            anchoring: Anchoring::ShiftOrbits,
        }
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn with_anchoring(mut self, anchoring: Anchoring) -> Self {
        self.anchoring = anchoring;
        self
    }
}

struct Explorer<'a> {
    g: &'a TannerGraph,
    a_max: usize,
    b_max: usize,
    anchor: u32,
    members: Vec<u32>,
    check_degree: Vec<u8>,
    /// Checks met by the current set, with multiplicity per addition.
    touched: Vec<u32>,
    committed: Vec<u32>,
    steps: &'a AtomicU64,
    max_steps: u64,
    found: Vec<Vec<u32>>,
}

impl<'a> Explorer<'a> {
    fn new(g: &'a TannerGraph, search: &EtsSearch, anchor: u32, steps: &'a AtomicU64) -> Self {
        Self {
            g,
            a_max: search.a_max,
            b_max: search.b_max,
            anchor,
            members: Vec::with_capacity(search.a_max),
            check_degree: vec![0; g.n_checks()],
            touched: Vec::with_capacity(3 * search.a_max),
            committed: Vec::with_capacity(search.b_max),
            steps,
            max_steps: search.max_steps,
            found: Vec::new(),
        }
    }

    fn can_add(&self, v: u32) -> bool {
        v > self.anchor
            && !self.members.contains(&v)
            && self
                .g
                .checks_of(v)
                .iter()
                .all(|c| self.check_degree[*c as usize] < 2 && !self.committed.contains(c))
    }

    fn push(&mut self, v: u32) {
        self.members.push(v);
        for &c in self.g.checks_of(v) {
            self.check_degree[c as usize] += 1;
            self.touched.push(c);
        }
    }

    fn pop(&mut self) {
        let v = self.members.pop().expect("non-empty");
        for &c in self.g.checks_of(v) {
            self.check_degree[c as usize] -= 1;
        }
        let len = self.touched.len();
        self.touched.truncate(len - 3);
    }

    fn explore(&mut self) -> Result<(), EtsError> {
        let steps = self.steps.fetch_add(1, Ordering::Relaxed) + 1;
        if steps > self.max_steps {
            return Err(EtsError::StepLimit { limit: self.max_steps });
        }
        let mut unsatisfied = 0usize;
        let mut open: Option<u32> = None;
        for &c in &self.touched {
            if self.check_degree[c as usize] == 1 {
                unsatisfied += 1;
                if !self.committed.contains(&c) && open.is_none_or(|o| c < o) {
                    open = Some(c);
                }
            }
        }
        let Some(c) = open else {
            let mut set = self.members.clone();
            set.sort_unstable();
            self.found.push(set);
            return Ok(());
        };
        let remaining = self.a_max - self.members.len();
        // each further node lowers the unsatisfied count by at most 3
        if unsatisfied > self.b_max + 3 * remaining {
            return Ok(());
        }
        if self.committed.len() < self.b_max {
            self.committed.push(c);
            self.explore()?;
            self.committed.pop();
        }
        if remaining > 0 {
            for &v in self.g.variables_of(c) {
                if self.can_add(v) {
                    self.push(v);
                    self.explore()?;
                    self.pop();
                }
            }
        }
        Ok(())
    }

    fn run(mut self) -> Result<Vec<Vec<u32>>, EtsError> {
        self.push(self.anchor);
        self.explore()?;
        Ok(self.found)
    }
}

fn check_bounds(a_max: usize, b_max: usize) -> Result<(), EtsError> {
    if a_max > MAX_SUPPORTED_A || b_max > MAX_SUPPORTED_B {
        return Err(EtsError::Unsupported { a_max, b_max });
    }
    Ok(())
}

/// All connected ETSs with `1 <= a <= a_max` and `b <= b_max`, each once,
/// sorted by variable set.
pub fn enumerate_ets(g: &TannerGraph, search: &EtsSearch) -> Result<Vec<EtsRecord>, EtsError> {
    check_bounds(search.a_max, search.b_max)?;
    if search.a_max == 0 {
        return Ok(Vec::new());
    }
    let lifting = g.lifting_degree();
    let anchors: Vec<u32> = match search.anchoring {
        Anchoring::ShiftOrbits => (0..g.n_cols() as u32).map(|j| j * lifting).collect(),
        Anchoring::AllVariables => (0..g.n_variables() as u32).collect(),
    };
    let steps = AtomicU64::new(0);
    let per_anchor: Vec<Vec<Vec<u32>>> = anchors
        .par_iter()
        .map(|&anchor| Explorer::new(g, search, anchor, &steps).run())
        .collect::<Result<_, _>>()?;

    let mut sets: BTreeSet<Vec<u32>> = BTreeSet::new();
    for set in per_anchor.into_iter().flatten() {
        match search.anchoring {
            Anchoring::AllVariables => {
                sets.insert(set);
            }
            Anchoring::ShiftOrbits => {
                for by in 0..lifting {
                    let mut shifted: Vec<u32> = set.iter().map(|&v| g.shift_variable(v, by)).collect();
                    shifted.sort_unstable();
                    sets.insert(shifted);
                }
            }
        }
    }
    Ok(sets
        .into_iter()
        .map(|s| EtsRecord::from_variables(g, &s).expect("enumerated sets are elementary"))
        .collect())
}

/// Number of records per `(a, b)` class.
pub fn class_counts(records: &[EtsRecord]) -> BTreeMap<(usize, usize), usize> {
    let mut counts = BTreeMap::new();
    for r in records {
        *counts.entry(r.class()).or_insert(0) += 1;
    }
    counts
}

/// Keeps the records with `b/a < 1`.
pub fn classify_harmful(records: &[EtsRecord]) -> Vec<EtsRecord> {
    records.iter().filter(|r| is_harmful(r.a(), r.b())).cloned().collect()
}

/// Brute force over every variable subset of size `1..=a_max`; counts the
/// connected elementary ones with `b <= b_max` per class. Validation only.
pub fn exhaustive_subset_oracle(
    g: &TannerGraph,
    a_max: usize,
    b_max: usize,
) -> Result<BTreeMap<(usize, usize), usize>, EtsError> {
    let n_var = g.n_variables();
    if n_var > ORACLE_MAX_VARIABLES {
        return Err(EtsError::TooLarge { variables: n_var });
    }
    let mut counts = BTreeMap::new();
    let mut degree = vec![0u8; g.n_checks()];
    let limit = 1u32 << n_var;
    for a in 1..=a_max.min(n_var) {
        // subsets of size a in increasing order (Gosper's hack)
        let mut mask: u32 = (1 << a) - 1;
        while mask < limit {
            if let Some(b) = elementary_connected(g, mask, &mut degree).filter(|&b| b <= b_max) {
                *counts.entry((a, b)).or_insert(0) += 1;
            }
            let low = mask & mask.wrapping_neg();
            let ripple = mask + low;
            mask = (((ripple ^ mask) >> 2) / low) | ripple;
        }
    }
    Ok(counts)
}

/// Unsatisfied-check count of the subset `mask` if it is elementary and
/// connected. `degree` must be all zero and is left all zero.
fn elementary_connected(g: &TannerGraph, mask: u32, degree: &mut [u8]) -> Option<usize> {
    let vars: Vec<u32> = (0..32).filter(|v| mask >> v & 1 == 1).collect();
    for &v in &vars {
        for &c in g.checks_of(v) {
            degree[c as usize] += 1;
        }
    }
    let mut elementary = true;
    let mut b = 0;
    for &v in &vars {
        for &c in g.checks_of(v) {
            match degree[c as usize] {
                1 => b += 1,
                2 => {}
                _ => elementary = false,
            }
        }
    }
    for &v in &vars {
        for &c in g.checks_of(v) {
            degree[c as usize] = 0;
        }
    }
    if !elementary {
        return None;
    }
    // flood fill through shared checks
    let mut reached = 1u32 << vars[0];
    let mut frontier = vec![vars[0]];
    while let Some(v) = frontier.pop() {
        for &c in g.checks_of(v) {
            for &w in g.variables_of(c) {
                if mask >> w & 1 == 1 && reached >> w & 1 == 0 {
                    reached |= 1 << w;
                    frontier.push(w);
                }
            }
        }
    }
    (reached == mask).then_some(b)
}
