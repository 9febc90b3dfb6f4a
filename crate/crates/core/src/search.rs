//! Backtracking search for normalized exponent matrices passing the girth-6
//! or girth-8 conditions.
//!
//! Per block row of `B` the values in play are `b_1j` (for `DD` row 0),
//! `b_2j` (row 1) and `b_1j - b_2j` (row 2); the components of a `DD` row
//! are all differences of two of its values. Rows 1 and 2 of `B` only meet
//! through the row difference, so the search fills row 1 column by column,
//! then picks the set of row-2 values, then pairs them with the columns.
//! Every `DD` component is tested against a membership table the moment it
//! appears. Trying row-2 sets instead of row-2 sequences avoids walking the
//! same dead end once per ordering.
//!
//! Results are reported in lexicographic order of `(b_11, b_21, b_12, ...)`.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::{check_for_girth, lower_bound_lifting};
use crate::ets::EtsError;
use crate::matrix::{CodeProfile, ExponentMatrix, TargetGirth};
use crate::oracle::{run_oracle, OracleOptions, OracleReport};

/// Default ceiling on candidate tests per lifting degree.
pub const DEFAULT_SEARCH_MAX_STEPS: u64 = 50_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    FirstFound,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryOptions {
    /// Require `b_1j` strictly increasing over columns 1..n.
    pub sort_columns: bool,
    /// Fix row 2 to twice row 1 (girth 6 only).
    pub third_row_doubling: bool,
    /// Restrict `b_11` to divisors of `N`. Only meant for existence
    /// questions: combined with column sorting it can lose solutions.
    pub unit_scaling: bool,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        Self {
            sort_columns: true,
            third_row_doubling: false,
            unit_scaling: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub n: usize,
    pub lifting_min: u32,
    pub lifting_max: u32,
    pub profile: CodeProfile,
    pub mode: SearchMode,
    pub symmetry: SymmetryOptions,
    pub verify_with_oracle: bool,
    /// Ceiling on candidate tests per lifting degree.
    pub max_steps: u64,
    /// Trapping-set bounds used when `verify_with_oracle` is set.
    pub oracle: OracleOptions,
}

impl SearchSpec {
    pub fn new(n: usize, girth: TargetGirth, lifting_min: u32, lifting_max: u32, mode: SearchMode) -> Self {
        let profile = CodeProfile::for_girth(girth);
        let oracle = OracleOptions::for_profile(&profile);
        Self {
            n,
            lifting_min,
            lifting_max,
            profile,
            mode,
            symmetry: SymmetryOptions::default(),
            verify_with_oracle: false,
            max_steps: DEFAULT_SEARCH_MAX_STEPS,
            oracle,
        }
    }

    pub fn with_symmetry(mut self, symmetry: SymmetryOptions) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn with_oracle(mut self, on: bool) -> Self {
        self.verify_with_oracle = on;
        self
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn girth(&self) -> TargetGirth {
        self.profile.target_girth
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |msg: String| Err(SearchError::InvalidSpec(msg));
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if self.lifting_min < 2 {
            return bad(format!("lifting degree must be at least 2, got {}", self.lifting_min));
        }
        if self.lifting_min > self.lifting_max {
            return bad(format!("empty lifting range [{}, {}]", self.lifting_min, self.lifting_max));
        }
        let bound = lower_bound_lifting(self.girth(), self.n);
        if self.mode == SearchMode::FirstFound && (self.lifting_min as u64) < bound {
            return bad(format!(
                "first-found search must start at or above the lower bound {bound} (got {})",
                self.lifting_min
            ));
        }
        if self.symmetry.third_row_doubling && self.girth() != TargetGirth::Six {
            return bad("third-row doubling is a girth-6 option".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error("search aborted after {limit} candidate tests at N={lifting}")]
    StepLimit { limit: u64, lifting: u32 },
    #[error("oracle failed: {0}")]
    Oracle(#[from] EtsError),
}

/// What one lifting degree produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingOutcome {
    pub lifting: u32,
    pub found: usize,
    pub steps: u64,
    /// Condition-passing matrices the oracle turned down.
    pub oracle_rejections: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub matrices: Vec<ExponentMatrix>,
    /// Oracle report per matrix, when the search asks for verification.
    pub oracle_reports: Vec<OracleReport>,
    pub per_lifting: Vec<LiftingOutcome>,
}

/// Membership table with an undo log.
struct Table {
    used: Vec<bool>,
    log: Vec<u32>,
}

impl Table {
    fn new(size: u32, forbid_zero: bool) -> Self {
        let mut used = vec![false; size as usize];
        used[0] = forbid_zero;
        Self { used, log: Vec::new() }
    }

    #[inline]
    fn insert(&mut self, x: u32) -> bool {
        if self.used[x as usize] {
            return false;
        }
        self.used[x as usize] = true;
        self.log.push(x);
        true
    }

    fn mark(&self) -> usize {
        self.log.len()
    }

    fn undo(&mut self, mark: usize) {
        for x in self.log.drain(mark..) {
            self.used[x as usize] = false;
        }
    }
}

struct Counter<'a> {
    shared: &'a AtomicU64,
    local: u64,
    limit: u64,
}

impl Counter<'_> {
    const BATCH: u64 = 4096;

    #[inline]
    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local == Self::BATCH {
            self.flush()
        } else {
            true
        }
    }

    fn flush(&mut self) -> bool {
        let total = self.shared.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        total <= self.limit
    }
}

enum Flow {
    Continue,
    Stop,
}

/// Output order: `(b_11, b_21, b_12, b_22, ...)`.
fn order_key(b: &ExponentMatrix) -> Vec<u32> {
    (1..b.n_cols()).flat_map(|j| [b.entry(1, j), b.entry(2, j)]).collect()
}

/// Number of ordered differences a set of size `to` has beyond one of size `from`.
fn pending_differences(from: usize, to: usize) -> usize {
    to * (to - 1) - from * (from - 1)
}

struct Builder<'a> {
    n: usize,
    lifting: u32,
    girth: TargetGirth,
    symmetry: SymmetryOptions,
    /// Only this value is tried for `b_11` when set.
    first_x: Option<u32>,
    /// Row 1 in column order, starting with the zero column.
    xs: Vec<u32>,
    /// Row-2 values as an increasing set, zero first.
    ys: Vec<u32>,
    taken: Vec<bool>,
    /// Row 2 in column order once paired with row 1.
    paired: Vec<u32>,
    /// `b_1j - b_2j` of the paired columns.
    zs: Vec<u32>,
    /// Girth 6: difference tables of rows 1, 2 and of the row difference.
    /// Girth 8: one difference table for rows 1 and 2, value table for the
    /// row difference.
    tables: Vec<Table>,
    counter: Counter<'a>,
}

impl<'a> Builder<'a> {
    fn new(spec: &SearchSpec, lifting: u32, shared: &'a AtomicU64) -> Self {
        let tables = match spec.girth() {
            TargetGirth::Six => (0..3).map(|_| Table::new(lifting, true)).collect(),
            TargetGirth::Eight => {
                let mut values = Table::new(lifting, false);
                values.insert(0);
                vec![Table::new(lifting, true), values]
            }
        };
        Self {
            n: spec.n,
            lifting,
            girth: spec.girth(),
            symmetry: spec.symmetry,
            first_x: None,
            xs: vec![0],
            ys: vec![0],
            taken: vec![true; spec.n],
            paired: vec![0],
            zs: vec![0],
            tables,
            counter: Counter {
                shared,
                local: 0,
                limit: spec.max_steps,
            },
        }
    }

    fn x_table(&self) -> usize {
        0
    }

    fn y_table(&self) -> usize {
        match self.girth {
            TargetGirth::Six => 1,
            TargetGirth::Eight => 0,
        }
    }

    fn z_table(&self) -> usize {
        match self.girth {
            TargetGirth::Six => 2,
            TargetGirth::Eight => 1,
        }
    }

    #[inline]
    fn sub(&self, x: u32, y: u32) -> u32 {
        (x + self.lifting - y) % self.lifting
    }

    /// Inserts every difference `v - u`, `u - v` of a new value against the
    /// previous ones.
    fn insert_differences(&mut self, table: usize, values: &[u32], v: u32) -> bool {
        for &u in values {
            let d = self.sub(v, u);
            let e = self.sub(u, v);
            if !self.tables[table].insert(d) || !self.tables[table].insert(e) {
                return false;
            }
        }
        true
    }

    fn marks(&self) -> [usize; 3] {
        let mut m = [0; 3];
        for (slot, t) in m.iter_mut().zip(&self.tables) {
            *slot = t.mark();
        }
        m
    }

    fn undo(&mut self, marks: [usize; 3]) {
        for (t, m) in self.tables.iter_mut().zip(marks) {
            t.undo(m);
        }
    }

    fn doubling(&self) -> bool {
        self.symmetry.third_row_doubling
    }

    /// Whether every difference table can still hold the components the
    /// unplaced values will create. Residue 0 and, for even `N`, `N/2` are
    /// never usable.
    fn has_room(&self) -> bool {
        let n = self.n;
        let px = pending_differences(self.xs.len(), n);
        let py = if self.doubling() {
            pending_differences(self.paired.len(), n)
        } else {
            pending_differences(self.ys.len(), n)
        };
        let unusable = if self.lifting.is_multiple_of(2) { 2 } else { 1 };
        let free = |t: usize| self.lifting as usize - unusable - self.tables[t].mark();
        match self.girth {
            TargetGirth::Six => {
                free(self.x_table()) >= px
                    && free(self.y_table()) >= py
                    && free(self.z_table()) >= pending_differences(self.zs.len(), n)
            }
            TargetGirth::Eight => free(0) >= px + py,
        }
    }

    fn x_candidates(&self) -> Vec<u32> {
        let col = self.xs.len();
        if col == 1 {
            if let Some(x) = self.first_x {
                return vec![x];
            }
        }
        let start = if self.symmetry.sort_columns && col > 1 {
            self.xs[col - 1] + 1
        } else {
            1
        };
        let n = self.lifting;
        let scaling = self.symmetry.unit_scaling && col == 1;
        (start..n).filter(|x| !scaling || n.is_multiple_of(*x)).collect()
    }

    fn matrix(&self) -> ExponentMatrix {
        ExponentMatrix::new(self.lifting, [vec![0; self.n], self.xs.clone(), self.paired.clone()])
            .expect("entries are reduced")
    }

    fn tick(&mut self) -> Result<(), SearchError> {
        if self.counter.tick() {
            Ok(())
        } else {
            Err(SearchError::StepLimit {
                limit: self.counter.limit,
                lifting: self.lifting,
            })
        }
    }

    /// Runs the three phases: row 1 column by column, the row-2 value set,
    /// then the pairing of row-2 values with columns.
    fn run<F>(&mut self, leaf: &mut F) -> Result<Flow, SearchError>
    where
        F: FnMut(ExponentMatrix) -> Result<Flow, SearchError>,
    {
        self.place_x(leaf)
    }

    fn place_x<F>(&mut self, leaf: &mut F) -> Result<Flow, SearchError>
    where
        F: FnMut(ExponentMatrix) -> Result<Flow, SearchError>,
    {
        if self.xs.len() == self.n {
            return if self.doubling() { self.pair(leaf) } else { self.place_y(leaf) };
        }
        if !self.has_room() {
            return Ok(Flow::Continue);
        }
        for x in self.x_candidates() {
            self.tick()?;
            let marks = self.marks();
            let xs = std::mem::take(&mut self.xs);
            let ok = self.insert_differences(self.x_table(), &xs, x);
            self.xs = xs;
            let mut flow = Flow::Continue;
            if ok {
                self.xs.push(x);
                flow = self.place_x(leaf)?;
                self.xs.pop();
            }
            self.undo(marks);
            if let Flow::Stop = flow {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }

    fn place_y<F>(&mut self, leaf: &mut F) -> Result<Flow, SearchError>
    where
        F: FnMut(ExponentMatrix) -> Result<Flow, SearchError>,
    {
        if self.ys.len() == self.n {
            self.taken = vec![false; self.n];
            self.taken[0] = true;
            return self.pair(leaf);
        }
        if !self.has_room() {
            return Ok(Flow::Continue);
        }
        let start = self.ys[self.ys.len() - 1] + 1;
        for y in start..self.lifting {
            self.tick()?;
            let marks = self.marks();
            let ys = std::mem::take(&mut self.ys);
            let ok = self.insert_differences(self.y_table(), &ys, y);
            self.ys = ys;
            let mut flow = Flow::Continue;
            if ok {
                self.ys.push(y);
                flow = self.place_y(leaf)?;
                self.ys.pop();
            }
            self.undo(marks);
            if let Flow::Stop = flow {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }

    /// Assigns row-2 values to columns in increasing order of value; under
    /// third-row doubling the value is forced and its differences are only
    /// checked here.
    fn pair<F>(&mut self, leaf: &mut F) -> Result<Flow, SearchError>
    where
        F: FnMut(ExponentMatrix) -> Result<Flow, SearchError>,
    {
        let col = self.paired.len();
        if col == self.n {
            return leaf(self.matrix());
        }
        let x = self.xs[col];
        let options: Vec<(usize, u32)> = if self.doubling() {
            vec![(0, 2 * x % self.lifting)]
        } else {
            (1..self.n).filter(|&k| !self.taken[k]).map(|k| (k, self.ys[k])).collect()
        };
        for (k, y) in options {
            self.tick()?;
            let marks = self.marks();
            let z = self.sub(x, y);
            let zt = self.z_table();
            let paired = std::mem::take(&mut self.paired);
            let zs = std::mem::take(&mut self.zs);
            let ok = (!self.doubling() || self.insert_differences(self.y_table(), &paired, y))
                && match self.girth {
                    TargetGirth::Six => self.insert_differences(zt, &zs, z),
                    TargetGirth::Eight => self.tables[zt].insert(z),
                };
            self.paired = paired;
            self.zs = zs;
            let mut flow = Flow::Continue;
            if ok {
                self.taken[k] = k != 0;
                self.paired.push(y);
                self.zs.push(z);
                flow = self.pair(leaf)?;
                self.paired.pop();
                self.zs.pop();
                if k != 0 {
                    self.taken[k] = false;
                }
            }
            self.undo(marks);
            if let Flow::Stop = flow {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }
}

/// Filters a condition-passing matrix through the oracle when requested.
fn accept(spec: &SearchSpec, b: &ExponentMatrix, rejections: &AtomicUsize) -> Result<Option<Option<OracleReport>>, SearchError> {
    debug_assert!(check_for_girth(b, spec.girth()).map(|r| r.passed()).unwrap_or(false));
    if !spec.verify_with_oracle {
        return Ok(Some(None));
    }
    let report = run_oracle(b, &spec.profile, &spec.oracle)?;
    if report.passed {
        Ok(Some(Some(report)))
    } else {
        rejections.fetch_add(1, Ordering::Relaxed);
        Ok(None)
    }
}

struct LiftingResult {
    outcome: LiftingOutcome,
    matrices: Vec<ExponentMatrix>,
    reports: Vec<OracleReport>,
}

/// Searches one lifting degree. Work is split over the candidates for
/// `b_11`; every branch sorts its own matrices and the branches are merged
/// in candidate order, which is the global order because `b_11` leads the
/// sort key.
fn search_lifting(spec: &SearchSpec, lifting: u32) -> Result<LiftingResult, SearchError> {
    let shared = AtomicU64::new(0);
    let rejections = AtomicUsize::new(0);
    let first: Vec<u32> = Builder::new(spec, lifting, &shared).x_candidates();

    // all condition-passing matrices with the given b_11, sorted
    let subtree = |x1: u32| -> Result<Vec<ExponentMatrix>, SearchError> {
        let mut builder = Builder::new(spec, lifting, &shared);
        builder.first_x = Some(x1);
        let mut found = Vec::new();
        builder.run(&mut |b| {
            found.push(b);
            Ok(Flow::Continue)
        })?;
        if !builder.counter.flush() {
            return Err(SearchError::StepLimit {
                limit: spec.max_steps,
                lifting,
            });
        }
        found.sort_by_cached_key(order_key);
        Ok(found)
    };

    type Accepted = Vec<(ExponentMatrix, Option<OracleReport>)>;
    let verify = |found: Vec<ExponentMatrix>, stop_at_first: bool| -> Result<Accepted, SearchError> {
        let mut kept = Vec::new();
        for b in found {
            if let Some(report) = accept(spec, &b, &rejections)? {
                kept.push((b, report));
                if stop_at_first {
                    break;
                }
            }
        }
        Ok(kept)
    };

    let kept: Accepted = match spec.mode {
        SearchMode::FirstFound => first
            .par_iter()
            .map(|&x1| subtree(x1).and_then(|found| verify(found, true)))
            .find_map_first(|r| match r {
                Ok(k) if k.is_empty() => None,
                other => Some(other),
            })
            .transpose()?
            .unwrap_or_default(),
        SearchMode::Exhaustive => first
            .par_iter()
            .map(|&x1| subtree(x1).and_then(|found| verify(found, false)))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .collect(),
    };

    let (matrices, reports): (Vec<_>, Vec<_>) = kept.into_iter().unzip();
    Ok(LiftingResult {
        outcome: LiftingOutcome {
            lifting,
            found: matrices.len(),
            steps: shared.load(Ordering::Relaxed),
            oracle_rejections: rejections.load(Ordering::Relaxed),
        },
        matrices,
        reports: reports.into_iter().flatten().collect(),
    })
}

/// Runs the search over the requested lifting range, smallest `N` first.
/// First-found mode stops at the first `N` with a witness.
pub fn search_with_stats(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    spec.validate()?;
    let mut outcome = SearchOutcome {
        matrices: Vec::new(),
        oracle_reports: Vec::new(),
        per_lifting: Vec::new(),
    };
    for lifting in spec.lifting_min..=spec.lifting_max {
        let r = search_lifting(spec, lifting)?;
        outcome.per_lifting.push(r.outcome);
        outcome.matrices.extend(r.matrices);
        outcome.oracle_reports.extend(r.reports);
        if spec.mode == SearchMode::FirstFound && !outcome.matrices.is_empty() {
            break;
        }
    }
    Ok(outcome)
}

/// Matrices passing the profile's condition checker (and the oracle when
/// requested), in lexicographic order of `(b_11, b_21, b_12, b_22, ...)`.
pub fn search(spec: &SearchSpec) -> Result<Vec<ExponentMatrix>, SearchError> {
    Ok(search_with_stats(spec)?.matrices)
}

/// Smallest `N` in the requested range admitting a passing matrix, with the
/// lexicographically least witness.
pub fn find_min_lifting(spec: &SearchSpec) -> Result<Option<(u32, ExponentMatrix)>, SearchError> {
    let spec = SearchSpec {
        mode: SearchMode::FirstFound,
        ..spec.clone()
    };
    let outcome = search_with_stats(&spec)?;
    Ok(outcome
        .matrices
        .into_iter()
        .next()
        .map(|b| (b.lifting_degree(), b)))
}
