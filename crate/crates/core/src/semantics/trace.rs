use std::fmt;

use super::FailReason;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Eval,
    Backchain,
}

impl Phase {
    /// Rules 1-4 resolve a call against clauses; 5-8 reduce expressions.
    pub fn of_rule(rule: u8) -> Phase {
        if rule <= 4 {
            Phase::Backchain
        } else {
            Phase::Eval
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Eval => "eval",
            Phase::Backchain => "backchain",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    Enter,
    Succeed,
    Fail,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Enter => "Enter",
            Tag::Succeed => "Succeed",
            Tag::Fail => "Fail",
        })
    }
}

/// One step of an evaluation, labelled with the evaluation rule it applies.
///
/// Every rule application is bracketed by an `Enter` event and a closing
/// `Succeed` or `Fail` event, except rule 7 (a constant) which emits a single
/// `Succeed`. A sequential choice additionally emits a `Fail` event for each
/// branch that failed, with the branch as subject.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceEvent {
    pub rule: u8,
    pub phase: Phase,
    pub depth: usize,
    pub tag: Tag,
    pub subject: String,
    /// Set on `Fail` events caused by a soft failure.
    pub reason: Option<FailReason>,
}

impl TraceEvent {
    pub fn new(rule: u8, depth: usize, tag: Tag, subject: String) -> Self {
        debug_assert!((1..=8).contains(&rule));
        TraceEvent { rule, phase: Phase::of_rule(rule), depth, tag, subject, reason: None }
    }

    pub fn with_reason(mut self, reason: Option<FailReason>) -> Self {
        self.reason = reason;
        self
    }
}

/// `R<rule> <phase> d=<depth> <tag> | <subject>`
impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{} {} d={} {} | {}", self.rule, self.phase, self.depth, self.tag, self.subject)
    }
}

pub trait TraceSink {
    /// When false the evaluator skips building event subjects.
    fn enabled(&self) -> bool {
        true
    }

    fn record(&mut self, event: TraceEvent);
}

/// Discards everything.
pub struct NoTrace;

impl TraceSink for NoTrace {
    fn enabled(&self) -> bool {
        false
    }

    fn record(&mut self, _event: TraceEvent) {}
}

impl TraceSink for Vec<TraceEvent> {
    fn record(&mut self, event: TraceEvent) {
        self.push(event);
    }
}

/// A bounded trace buffer; events past the limit are dropped and the trace
/// is marked truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
    pub limit: usize,
    pub truncated: bool,
}

impl Trace {
    pub fn new(limit: usize) -> Self {
        Trace { events: Vec::new(), limit, truncated: false }
    }

    /// Rules of `Succeed` events, i.e. the successful rule applications.
    pub fn succeeded_rules(&self) -> Vec<u8> {
        self.events.iter().filter(|e| e.tag == Tag::Succeed).map(|e| e.rule).collect()
    }
}

impl TraceSink for Trace {
    fn enabled(&self) -> bool {
        !self.truncated
    }

    fn record(&mut self, event: TraceEvent) {
        if self.events.len() < self.limit {
            self.events.push(event);
        } else {
            self.truncated = true;
        }
    }
}

pub fn truncation_marker(limit: usize) -> String {
    format!("... trace truncated after {limit} events")
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for event in &self.events {
            writeln!(f, "{event}")?;
        }
        if self.truncated {
            writeln!(f, "{}", truncation_marker(self.limit))?;
        }
        Ok(())
    }
}
