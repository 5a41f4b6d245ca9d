//! One line per acceptance criterion: the suite behind it, its outcome
//! counts, the coverage it must reach and the wall-clock budget.

use std::time::{Duration, Instant};

use elegant_cli::report::{Caps, Status, SuiteReport};
use elegant_cli::suites::run_suite;

struct Criterion {
    id: usize,
    title: &'static str,
    suite: &'static str,
    budget_secs: u64,
    /// outcome-kind prefix and the least number of instances of it
    coverage: &'static [(&'static str, usize)],
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        title: "topos laws",
        suite: "topos-laws",
        budget_secs: 120,
        coverage: &[("limit", 200), ("colimit", 200), ("sigma-pullback", 200), ("pullback-pi", 200), ("yoneda", 200)],
    },
    Criterion { id: 2, title: "exactness", suite: "exactness", budget_secs: 120, coverage: &[("extensive", 100), ("adhesive", 100)] },
    Criterion {
        id: 3,
        title: "acyclic fibrations and equivalences via sections",
        suite: "acyclic-sections",
        budget_secs: 600,
        coverage: &[("contractible", 50), ("equivalence", 50)],
    },
    Criterion { id: 4, title: "stability under pullback", suite: "stability", budget_secs: 300, coverage: &[("iscontr", 50), ("eq", 50)] },
    Criterion { id: 5, title: "equivalence extension", suite: "equivalence-extension", budget_secs: 600, coverage: &[("", 30)] },
    Criterion { id: 6, title: "lifts into Eq", suite: "eqlift", budget_secs: 300, coverage: &[("empty", 1), ("horn", 1), ("", 30)] },
    Criterion {
        id: 7,
        title: "strict classification",
        suite: "universe-classify",
        budget_secs: 300,
        coverage: &[("classify", 1), ("extend", 1)],
    },
    Criterion {
        id: 8,
        title: "small-object argument",
        suite: "soa-invariants",
        budget_secs: 600,
        coverage: &[
            ("init", 1),
            ("step", 2),
            ("colimit", 1),
            ("saturation/pushout", 1),
            ("saturation/composite", 1),
            ("saturation/retract", 1),
        ],
    },
    Criterion {
        id: 9,
        title: "Reedy structures",
        suite: "reedy",
        budget_secs: 300,
        coverage: &[
            ("matching-1", 20),
            ("oracle/delta2", 1),
            ("latching-mono", 100),
            ("elegance/delta2", 1),
            ("elegance/non-split-epi", 1),
            ("cofibration-mono", 50),
        ],
    },
    Criterion {
        id: 10,
        title: "extending Reedy fibrations",
        suite: "reedy-extend",
        budget_secs: 900,
        coverage: &[("extend", 10), ("mutation/shift", 10), ("mutation/pad", 10)],
    },
];

fn covered(report: &SuiteReport, prefix: &str) -> usize {
    report.outcomes.iter().filter(|o| o.kind.starts_with(prefix)).count()
}

fn judge(c: &Criterion, report: &SuiteReport, elapsed: Duration) -> Result<String, String> {
    let counts = format!(
        "{} pass, {} fail, {} bounds in {:.1}s",
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Bounds),
        elapsed.as_secs_f64()
    );
    if let Some(o) = report.outcomes.iter().find(|o| o.status != Status::Pass) {
        return Err(format!("{counts}; #{} {} {:?}: {}", o.id, o.kind, o.status, o.detail));
    }
    for &(prefix, least) in c.coverage {
        let n = covered(report, prefix);
        if n < least {
            return Err(format!("{counts}; {n} instances of {prefix:?}, need {least}"));
        }
    }
    if elapsed > Duration::from_secs(c.budget_secs) {
        return Err(format!("{counts}; over the {}s budget", c.budget_secs));
    }
    Ok(counts)
}

fn main() {
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let report = run_suite(c.suite, 0, &Caps::default()).expect("known suite");
        let verdict = judge(c, &report, start.elapsed());
        let (tag, text) = match &verdict {
            Ok(t) => ("PASS", t),
            Err(t) => ("FAIL", t),
        };
        println!("criterion {:>2} [{tag}] {} ({}): {text}", c.id, c.title, c.suite);
        if verdict.is_err() {
            failed.push(c.id);
        }
    }
    if !failed.is_empty() {
        eprintln!("criteria failing: {failed:?}");
        std::process::exit(1);
    }
}
