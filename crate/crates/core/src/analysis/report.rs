use std::fmt::{self, Write};

use indexmap::IndexMap;
use serde::Serialize;

use super::{Analysis, StrengthenCheck, Verdict};

/// Serializable summary of an analysis run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub contexts: IndexMap<String, Vec<String>>,
    pub dependencies: IndexMap<String, Vec<String>>,
    pub verdict: Option<String>,
    pub blocked_on: Option<String>,
}

impl AnalysisReport {
    pub fn from_analysis(a: &Analysis) -> Self {
        let contexts = a
            .predicates
            .iter()
            .map(|p| (p.to_string(), a.contexts.get(p).map(|s| s.iter().map(|d| d.to_string()).collect()).unwrap_or_default()))
            .collect();
        let dependencies = a
            .predicates
            .iter()
            .map(|p| (p.to_string(), a.dependencies.get(p).map(|s| s.iter().map(|q| q.to_string()).collect()).unwrap_or_default()))
            .collect();
        AnalysisReport { contexts, dependencies, verdict: None, blocked_on: None }
    }

    pub fn from_check(c: &StrengthenCheck) -> Self {
        let mut r = Self::from_analysis(&c.analysis);
        match &c.verdict {
            Verdict::Validated { .. } => r.verdict = Some("validated".into()),
            Verdict::Blocked(p) => {
                r.verdict = Some("blocked".into());
                r.blocked_on = Some(p.to_string());
            }
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        s.push_str("contexts:\n");
        for (p, ds) in &self.contexts {
            if ds.is_empty() {
                writeln!(s, "  C({p}) = {{}}")?;
            } else {
                writeln!(s, "  C({p}) = {{ {} }}", ds.join(" ; "))?;
            }
        }
        s.push_str("dependencies:\n");
        for (p, qs) in &self.dependencies {
            writeln!(s, "  S({p}) = {{{}}}", qs.join(", "))?;
        }
        if let Some(v) = &self.verdict {
            match &self.blocked_on {
                Some(b) => writeln!(s, "verdict: {v} on {b}")?,
                None => writeln!(s, "verdict: {v}")?,
            }
        }
        f.write_str(&s)
    }
}
