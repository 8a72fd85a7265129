//! Run reports: plain text for people, tab-separated records for tools.

use std::fmt;
use std::fmt::Write;
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Failed, but the run continues.
    Warn,
    Done,
    Equivalent,
    Inequivalent,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Warn => "WARN",
            Status::Done => "DONE",
            Status::Equivalent => "EQUIVALENT",
            Status::Inequivalent => "INEQUIVALENT",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: &'static str,
    pub status: Status,
    pub count: u64,
    /// What `count` counts, for the text form.
    pub unit: &'static str,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub stages: Vec<StageRecord>,
    /// Free-form lines printed after the stages in the text form.
    pub notes: Vec<String>,
}

impl Report {
    pub fn stage(&mut self, stage: &'static str, status: Status, count: u64, unit: &'static str, elapsed: Duration) {
        self.stages.push(StageRecord {
            stage,
            status,
            count,
            unit,
            elapsed,
        });
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn status_of(&self, stage: &str) -> Option<Status> {
        self.stages.iter().find(|s| s.stage == stage).map(|s| s.status)
    }

    /// Text form. Timings only appear when asked for, so reports without
    /// them are reproducible byte for byte.
    pub fn to_text(&self, timings: bool) -> String {
        let mut out = String::new();
        for s in &self.stages {
            let _ = write!(out, "{:<13} {:<12} {} {}", s.stage, s.status, s.count, s.unit);
            if timings {
                let _ = write!(out, " ({} ms)", s.elapsed.as_millis());
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "{}", n);
        }
        out
    }

    /// One `stage<TAB>status<TAB>count<TAB>millis` record per stage; millis
    /// is `-` without timings.
    pub fn to_tsv(&self, timings: bool) -> String {
        let mut out = String::new();
        for s in &self.stages {
            let millis = if timings {
                s.elapsed.as_millis().to_string()
            } else {
                "-".to_string()
            };
            let _ = writeln!(out, "{}\t{}\t{}\t{}", s.stage, s.status, s.count, millis);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let mut r = Report::default();
        r.stage("fanout", Status::Pass, 0, "violations", Duration::from_millis(3));
        r.stage("solve", Status::Equivalent, 12, "conflicts", Duration::from_millis(40));
        r.note("verdict: EQUIVALENT");
        assert_eq!(
            r.to_text(false),
            "fanout        PASS         0 violations\nsolve         EQUIVALENT   12 conflicts\nverdict: EQUIVALENT\n"
        );
        assert!(r.to_text(true).contains("(40 ms)"));
        assert_eq!(r.to_tsv(false), "fanout\tPASS\t0\t-\nsolve\tEQUIVALENT\t12\t-\n");
        assert_eq!(r.to_tsv(true), "fanout\tPASS\t0\t3\nsolve\tEQUIVALENT\t12\t40\n");
        assert_eq!(r.status_of("solve"), Some(Status::Equivalent));
    }
}
