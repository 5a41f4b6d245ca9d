//! Suite reports and exit codes.

use std::fmt;

use serde::{Deserialize, Serialize};

use elegant_core::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BOUNDS: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Bounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: usize,
    pub kind: String,
    pub status: Status,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
}

/// Resource caps shared by the suites. `None` means the suite default.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub kappa: Option<usize>,
    pub trunc_dim: Option<usize>,
    pub reliable_margin: Option<usize>,
    pub max_nodes: Option<u64>,
    pub max_stages: Option<usize>,
    pub instances: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub caps: Caps,
    pub outcomes: Vec<Outcome>,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64, caps: &Caps) -> Self {
        SuiteReport { suite: suite.to_string(), seed, caps: caps.clone(), outcomes: Vec::new() }
    }

    pub fn count(&self, status: Status) -> usize {
        self.outcomes.iter().filter(|o| o.status == status).count()
    }

    pub fn count_kind(&self, kind: &str) -> usize {
        self.outcomes.iter().filter(|o| o.kind == kind).count()
    }

    pub fn passed(&self) -> bool {
        !self.outcomes.is_empty() && self.outcomes.iter().all(|o| o.status == Status::Pass)
    }

    /// Failures dominate bounds.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) > 0 || self.outcomes.is_empty() {
            EXIT_FAIL
        } else if self.count(Status::Bounds) > 0 {
            EXIT_BOUNDS
        } else {
            EXIT_PASS
        }
    }

    /// Records one instance. `check` returns `Ok(None)` on success and
    /// `Ok(Some(reason))` on a refutation; errors count as failures
    /// except budget exhaustion, which is recorded separately.
    pub fn record(&mut self, kind: &str, check: impl FnOnce() -> Result<Option<String>, Error>) {
        let id = self.outcomes.len();
        let (status, detail) = match check() {
            Ok(None) => (Status::Pass, String::new()),
            Ok(Some(why)) => (Status::Fail, why),
            Err(e) if e.is_bounds() => (Status::Bounds, e.to_string()),
            Err(e) => (Status::Fail, e.to_string()),
        };
        self.outcomes.push(Outcome { id, kind: kind.to_string(), status, detail });
    }

    pub fn sort(&mut self) {
        self.outcomes.sort_by_key(|o| o.id);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} (seed {}): {} pass, {} fail, {} bounds",
            self.suite,
            self.seed,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Bounds)
        )?;
        for o in self.outcomes.iter().filter(|o| o.status != Status::Pass) {
            writeln!(f, "  #{} {} {:?}: {}", o.id, o.kind, o.status, o.detail)?;
        }
        Ok(())
    }
}

/// `Some(reason)` unless `ok`.
pub fn ensure(ok: bool, reason: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(reason)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let mut r = SuiteReport::new("t", 0, &Caps::default());
        assert_eq!(r.exit_code(), EXIT_FAIL);
        r.record("a", || Ok(None));
        assert_eq!(r.exit_code(), EXIT_PASS);
        r.record("b", || Err(Error::Bounds { budget: 1, context: "x".into() }));
        assert_eq!(r.exit_code(), EXIT_BOUNDS);
        r.record("c", || Ok(Some("no".into())));
        assert_eq!(r.exit_code(), EXIT_FAIL);
        assert_eq!(r.count(Status::Bounds), 1);
    }
}
