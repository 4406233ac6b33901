//! Law reports: one record per checked law, with a witness on failure and the
//! size of the exhaustive scan that backs a pass.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The law was not evaluated, e.g. because a carrier exceeded the size cap.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Number of cases scanned.
    pub scanned: u64,
    /// What was scanned ("triples", "morphisms", ...).
    pub scope: String,
}

impl Check {
    pub fn bound(&self) -> String {
        match self.status {
            Status::Skipped => format!("skipped ({})", self.scope),
            _ => format!("checked for all {} {}", self.scanned, self.scope),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl LawReport {
    pub fn new(subject: impl Into<String>) -> Self {
        LawReport { subject: subject.into(), checks: Vec::new() }
    }

    pub fn pass(&mut self, name: impl Into<String>, scanned: u64, scope: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Pass,
            witness: None,
            scanned,
            scope: scope.into(),
        });
    }

    pub fn fail(
        &mut self,
        name: impl Into<String>,
        witness: impl Into<String>,
        scanned: u64,
        scope: impl Into<String>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
            scanned,
            scope: scope.into(),
        });
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Skipped,
            witness: None,
            scanned: 0,
            scope: reason.into(),
        });
    }

    /// Records the outcome of a scan: pass when `witness` is `None`.
    pub fn record(
        &mut self,
        name: impl Into<String>,
        witness: Option<String>,
        scanned: u64,
        scope: impl Into<String>,
    ) {
        match witness {
            None => self.pass(name, scanned, scope),
            Some(w) => self.fail(name, w, scanned, scope),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Appends the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: LawReport) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}: {}", c.name);
            }
            self.checks.push(c);
        }
    }

    /// Folds many reports into one row per check name, in order of first
    /// appearance: scans add up, the first failure supplies the witness, and
    /// a check is skipped only if it was skipped everywhere.
    pub fn merge(subject: impl Into<String>, reports: impl IntoIterator<Item = LawReport>) -> LawReport {
        let mut out = LawReport::new(subject);
        let mut skipped: Vec<u64> = Vec::new();
        let mut evaluated: Vec<u64> = Vec::new();
        for r in reports {
            for c in r.checks {
                let i = match out.checks.iter().position(|o| o.name == c.name) {
                    Some(i) => i,
                    None => {
                        out.checks.push(Check { witness: None, scanned: 0, ..c.clone() });
                        skipped.push(0);
                        evaluated.push(0);
                        out.checks.len() - 1
                    }
                };
                let o = &mut out.checks[i];
                match c.status {
                    Status::Skipped => {
                        skipped[i] += 1;
                        if evaluated[i] == 0 {
                            o.scope = c.scope;
                        }
                    }
                    st => {
                        if evaluated[i] == 0 {
                            o.scope = c.scope;
                            o.status = Status::Pass;
                        }
                        evaluated[i] += 1;
                        o.scanned += c.scanned;
                        if st == Status::Fail && o.status != Status::Fail {
                            o.status = Status::Fail;
                            o.witness = Some(format!("{}: {}", r.subject, c.witness.unwrap_or_default()));
                        }
                    }
                }
            }
        }
        for (i, o) in out.checks.iter_mut().enumerate() {
            if evaluated[i] > 0 && skipped[i] > 0 {
                o.scope = format!("{}, {} instances skipped at the size cap", o.scope, skipped[i]);
            }
        }
        out
    }

    pub fn skipped(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Skipped).count()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.failures().next()
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            write!(f, "  [{tag}] {} ({})", c.name, c.bound())?;
            if let Some(w) = &c.witness {
                write!(f, " witness: {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
