//! Verdict records shared by every report.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The check does not apply (a hypothesis is unmet or the input is out of scope).
    Skip,
}

/// Sampling budget behind a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_level: usize,
    pub per_level: usize,
}

impl Budget {
    pub fn new(max_level: usize, per_level: usize) -> Self {
        Budget { max_level, per_level }
    }

    /// Budget of an exhaustive check over `n` items.
    pub fn exhaustive(n: usize) -> Self {
        Budget {
            max_level: 0,
            per_level: n,
        }
    }
}

/// One named verdict: `{name, verdict, witness?, budget, resolution}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub budget: Budget,
    pub resolution: usize,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        pass: bool,
        witness: Option<String>,
        budget: Budget,
        resolution: usize,
    ) -> Self {
        Check {
            name: name.into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            witness,
            budget,
            resolution,
        }
    }

    pub fn skip(name: impl Into<String>, reason: impl Into<String>, budget: Budget, resolution: usize) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::Skip,
            witness: Some(reason.into()),
            budget,
            resolution,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// Finds a check by name in a list.
pub fn find<'a>(checks: &'a [Check], name: &str) -> Option<&'a Check> {
    checks.iter().find(|c| c.name == name)
}
