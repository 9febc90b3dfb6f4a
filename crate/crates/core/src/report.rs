//! Run reports printed by the command-line tool, as JSON or as text. Both
//! renderings are produced from the same [`RunReport`] value.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::conditions::ConditionReport;
use crate::oracle::OracleReport;
use crate::search::{LiftingOutcome, SearchSpec};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ItemStatus {
    Pass,
    Fail,
    Skipped,
}

impl ItemStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ItemStatus::Pass => "pass",
            ItemStatus::Fail => "fail",
            ItemStatus::Skipped => "skipped",
        }
    }
}

/// One checked matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemReport {
    pub label: String,
    /// Canonical text form, when the input parsed.
    pub matrix: Option<String>,
    pub condition: Option<ConditionReport>,
    pub oracle: Option<OracleReport>,
    pub status: ItemStatus,
    pub notes: Vec<String>,
}

impl ItemReport {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            matrix: None,
            condition: None,
            oracle: None,
            status: ItemStatus::Fail,
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub search: Option<SearchSpec>,
    pub lifting_outcomes: Vec<LiftingOutcome>,
    pub items: Vec<ItemReport>,
    pub elapsed_ms: u128,
    pub verdict: Verdict,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            search: None,
            lifting_outcomes: Vec::new(),
            items: Vec::new(),
            elapsed_ms: 0,
            verdict: Verdict::Fail,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "schema_version: {}", self.schema_version).unwrap();
        writeln!(w, "command: {}", self.command.join(" ")).unwrap();
        if let Some(s) = &self.search {
            writeln!(
                w,
                "search: n={} girth={} N=[{}, {}] mode={:?} sort_columns={} third_row_doubling={} unit_scaling={} oracle={} max_steps={}",
                s.n,
                s.profile.target_girth.value(),
                s.lifting_min,
                s.lifting_max,
                s.mode,
                s.symmetry.sort_columns,
                s.symmetry.third_row_doubling,
                s.symmetry.unit_scaling,
                s.verify_with_oracle,
                s.max_steps
            )
            .unwrap();
            writeln!(w, "  oracle bounds: a<={} b<={}", s.oracle.a_max, s.oracle.b_max).unwrap();
            writeln!(w, "  excluded classes: {}", classes(&s.profile.ets_exclusions)).unwrap();
        }
        for l in &self.lifting_outcomes {
            writeln!(
                w,
                "N={}: found={} steps={} oracle_rejections={}",
                l.lifting, l.found, l.steps, l.oracle_rejections
            )
            .unwrap();
        }
        for item in &self.items {
            writeln!(w, "[{}] {}", item.status.as_str(), item.label).unwrap();
            if let Some(m) = &item.matrix {
                for line in m.lines() {
                    writeln!(w, "    {line}").unwrap();
                }
            }
            if let Some(c) = &item.condition {
                match &c.violation {
                    None => writeln!(w, "  conditions: pass").unwrap(),
                    Some(v) => {
                        write!(
                            w,
                            "  conditions: fail ({}) at DD row {} pair {:?} half {} value {}",
                            v.condition, v.at.row, v.at.pair, v.at.half, v.at.value
                        )
                        .unwrap();
                        if let Some(o) = &v.other {
                            write!(w, "; clashes with row {} pair {:?} half {} value {}", o.row, o.pair, o.half, o.value)
                                .unwrap();
                        }
                        writeln!(w).unwrap();
                    }
                }
                for note in &c.notes {
                    writeln!(w, "  conditions note: {note}").unwrap();
                }
            }
            if let Some(o) = &item.oracle {
                writeln!(
                    w,
                    "  oracle: {} girth={} target={} ets bounds a<={} b<={}",
                    if o.passed { "pass" } else { "fail" },
                    o.girth,
                    o.target_girth,
                    o.a_max,
                    o.b_max
                )
                .unwrap();
                let counts: Vec<String> = o.class_counts.iter().map(|c| format!("({},{})x{}", c.a, c.b, c.count)).collect();
                writeln!(w, "  ets classes: {}", if counts.is_empty() { "none".into() } else { counts.join(" ") }).unwrap();
                let bad: Vec<String> = o.excluded_found.iter().map(|c| format!("({},{})x{}", c.a, c.b, c.count)).collect();
                writeln!(w, "  excluded classes found: {}", if bad.is_empty() { "none".into() } else { bad.join(" ") })
                    .unwrap();
            }
            for note in &item.notes {
                writeln!(w, "  note: {note}").unwrap();
            }
        }
        writeln!(w, "elapsed_ms: {}", self.elapsed_ms).unwrap();
        writeln!(w, "verdict: {}", self.verdict.as_str()).unwrap();
        out
    }
}

fn classes(cs: &[(usize, usize)]) -> String {
    cs.iter().map(|(a, b)| format!("({a},{b})")).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::check_girth6_etsfree;
    use crate::io::write_exponent_matrix;
    use crate::matrix::{CodeProfile, ExponentMatrix};
    use crate::oracle::{run_oracle, OracleOptions};

    #[test]
    fn renderings_carry_the_same_facts() {
        let b = ExponentMatrix::zeros(3, 5).unwrap();
        let p = CodeProfile::girth6();
        let mut item = ItemReport::new("zeros");
        item.matrix = Some(write_exponent_matrix(&b));
        item.condition = Some(check_girth6_etsfree(&b));
        item.oracle = Some(run_oracle(&b, &p, &OracleOptions::for_profile(&p)).unwrap());
        let mut r = RunReport::new(vec!["qcets".into(), "verify".into()]);
        r.items.push(item);
        r.elapsed_ms = 17;
        let text = r.to_text();
        let back = RunReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let o = r.items[0].oracle.as_ref().unwrap();
        assert!(text.contains(&format!("girth={}", o.girth)));
        for c in &o.class_counts {
            assert!(text.contains(&format!("({},{})x{}", c.a, c.b, c.count)));
        }
        assert!(text.contains("zero-in-DD"));
        assert!(text.contains("elapsed_ms: 17"));
        assert!(text.contains("verdict: fail"));
        assert!(r.to_json().contains("\"schema_version\": 1"));
    }
}
