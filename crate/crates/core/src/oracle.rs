//! Graph-side verification of a matrix against a code profile: BFS girth of
//! the lifted graph plus exact trapping-set enumeration.

use serde::{Deserialize, Serialize};

use crate::ets::{class_counts, enumerate_ets, EtsError, EtsSearch, DEFAULT_MAX_STEPS};
use crate::graph::{bfs_girth, lift, GraphGirth};
use crate::matrix::{CodeProfile, ExponentMatrix};

/// BFS cap: large enough to tell girth 6, 8 and 10 apart.
pub const GIRTH_CAP: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOptions {
    pub a_max: usize,
    pub b_max: usize,
    pub max_steps: u64,
}

impl OracleOptions {
    /// Bounds of the profile's trapping-set search.
    pub fn for_profile(profile: &CodeProfile) -> Self {
        Self {
            a_max: profile.a_max,
            b_max: profile.b_max,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn with_a_max(mut self, a_max: usize) -> Self {
        self.a_max = a_max;
        self
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub a: usize,
    pub b: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub girth: GraphGirth,
    pub target_girth: u32,
    pub a_max: usize,
    pub b_max: usize,
    /// Every enumerated class, harmful or not.
    pub class_counts: Vec<ClassCount>,
    /// Enumerated classes the profile excludes.
    pub excluded_found: Vec<ClassCount>,
    pub passed: bool,
}

impl OracleReport {
    pub fn count(&self, a: usize, b: usize) -> usize {
        self.class_counts
            .iter()
            .find(|c| c.a == a && c.b == b)
            .map_or(0, |c| c.count)
    }

    pub fn girth_ok(&self) -> bool {
        self.girth.capped_value() >= self.target_girth
    }
}

/// Lifts `b`, measures its girth and enumerates trapping sets within the
/// option bounds. Passes when the girth reaches the target and none of the
/// profile's excluded classes shows up.
pub fn run_oracle(b: &ExponentMatrix, profile: &CodeProfile, opts: &OracleOptions) -> Result<OracleReport, EtsError> {
    let g = lift(b);
    let girth = bfs_girth(&g, GIRTH_CAP);
    let search = EtsSearch::new(opts.a_max, opts.b_max).with_max_steps(opts.max_steps);
    let records = enumerate_ets(&g, &search)?;
    let class_counts: Vec<ClassCount> = class_counts(&records)
        .into_iter()
        .map(|((a, b), count)| ClassCount { a, b, count })
        .collect();
    let excluded_found: Vec<ClassCount> = class_counts
        .iter()
        .filter(|c| profile.excludes(c.a, c.b))
        .copied()
        .collect();
    let target_girth = profile.target_girth.value();
    let passed = girth.capped_value() >= target_girth && excluded_found.is_empty();
    Ok(OracleReport {
        girth,
        target_girth,
        a_max: opts.a_max,
        b_max: opts.b_max,
        class_counts,
        excluded_found,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_fails() {
        let b = ExponentMatrix::zeros(4, 7).unwrap();
        let r = run_oracle(&b, &CodeProfile::girth6(), &OracleOptions::for_profile(&CodeProfile::girth6())).unwrap();
        assert_eq!(r.girth, GraphGirth::Exact(4));
        assert!(!r.passed);
    }

    #[test]
    fn table1_n4_passes_girth6_profile() {
        let b = ExponentMatrix::from_table_rows(13, &[1, 3, 9], &[2, 6, 5]).unwrap();
        let p = CodeProfile::girth6();
        let r = run_oracle(&b, &p, &OracleOptions::for_profile(&p)).unwrap();
        assert!(r.passed);
        assert_eq!(r.count(4, 0) + r.count(4, 2) + r.count(5, 1), 0);
    }
}
