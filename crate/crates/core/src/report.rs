//! Named residual reports shared by the checkers.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// No exact sub-window, or a precondition of the check did not hold.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// How `value` is compared with `threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// Residual style: pass iff `value <= threshold`.
    AtMost,
    /// Margin style: pass iff `value > threshold` (positivity, root distance).
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub bound: Bound,
    pub verdict: Verdict,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>, value: f64, threshold: f64, bound: Bound) -> Self {
        let ok = match bound {
            Bound::AtMost => value <= threshold,
            Bound::Above => value > threshold,
        };
        Self {
            name: name.into(),
            value,
            threshold,
            bound,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        }
    }

    pub fn inconclusive(name: impl Into<String>, value: f64, threshold: f64, bound: Bound) -> Self {
        Self {
            verdict: Verdict::Inconclusive,
            ..Self::new(name, value, threshold, bound)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a residual entry; passes iff `value <= threshold`. NaN fails.
    pub fn residual(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.entries.push(CheckEntry::new(name, value, threshold, Bound::AtMost));
    }

    /// Adds a residual entry that is inconclusive when `exact` is false.
    pub fn residual_on_margin(&mut self, name: impl Into<String>, value: f64, threshold: f64, exact: bool) {
        if exact {
            self.residual(name, value, threshold);
        } else {
            self.entries
                .push(CheckEntry::inconclusive(name, value, threshold, Bound::AtMost));
        }
    }

    /// Adds an entry that passes iff `value > threshold`.
    pub fn above(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.entries.push(CheckEntry::new(name, value, threshold, Bound::Above));
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, prefix: &str, other: CheckReport) {
        for mut e in other.entries {
            e.name = format!("{prefix}{}", e.name);
            self.entries.push(e);
        }
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).map(|e| e.value)
    }

    pub fn any_fail(&self) -> bool {
        self.entries.iter().any(|e| e.verdict == Verdict::Fail)
    }

    pub fn any_inconclusive(&self) -> bool {
        self.entries.iter().any(|e| e.verdict == Verdict::Inconclusive)
    }

    /// Fail if anything failed, else inconclusive if anything was, else pass.
    pub fn verdict(&self) -> Verdict {
        if self.any_fail() {
            Verdict::Fail
        } else if self.any_inconclusive() {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    /// Largest value among residual-style entries.
    pub fn max_residual(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.bound == Bound::AtMost)
            .fold(0.0, |a, e| a.max(e.value))
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.verdict == Verdict::Fail)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let op = match e.bound {
                Bound::AtMost => "<=",
                Bound::Above => ">",
            };
            writeln!(f, "{:<12} {:<40} {:.3e} {op} {:.1e}", e.verdict, e.name, e.value, e.threshold)?;
        }
        Ok(())
    }
}
