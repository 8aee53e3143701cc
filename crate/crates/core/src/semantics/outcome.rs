use std::fmt;
use std::num::NonZeroUsize;

use super::Value;

/// Why an evaluation failed recoverably. Every soft failure can be caught by `++`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FailReason {
    NoMatchingClause,
    DivideByZero,
    IntegerOverflow,
    EmptyListAccess,
    TypeMismatch,
    ExplicitFail,
}

impl FailReason {
    pub fn tag(self) -> &'static str {
        match self {
            FailReason::NoMatchingClause => "no-matching-clause",
            FailReason::DivideByZero => "divide-by-zero",
            FailReason::IntegerOverflow => "integer-overflow",
            FailReason::EmptyListAccess => "empty-list-access",
            FailReason::TypeMismatch => "type-mismatch",
            FailReason::ExplicitFail => "explicit-fail",
        }
    }
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A soft failure together with the redex that raised it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Failure {
    pub reason: FailReason,
    pub at: String,
}

impl Failure {
    pub fn new(reason: FailReason, at: impl Into<String>) -> Self {
        Failure { reason, at: at.into() }
    }
}

/// Errors that `++` does not catch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HardErrorKind {
    DepthExceeded,
    ChoiceWidthExceeded,
    /// A variable survived substitution; indicates a resolver bug.
    UnboundVariable,
}

impl HardErrorKind {
    pub fn tag(self) -> &'static str {
        match self {
            HardErrorKind::DepthExceeded => "depth-exceeded",
            HardErrorKind::ChoiceWidthExceeded => "choice-width-exceeded",
            HardErrorKind::UnboundVariable => "unbound-variable",
        }
    }
}

impl fmt::Display for HardErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HardError {
    pub kind: HardErrorKind,
    pub message: String,
    pub at: String,
}

impl HardError {
    pub fn depth_exceeded(limit: usize, at: impl Into<String>) -> Self {
        let at = at.into();
        HardError {
            kind: HardErrorKind::DepthExceeded,
            message: format!("call depth limit {limit} exceeded at {at}"),
            at,
        }
    }

    pub fn choice_width_exceeded(width: usize, limit: usize, at: impl Into<String>) -> Self {
        HardError {
            kind: HardErrorKind::ChoiceWidthExceeded,
            message: format!("choice with {width} branches exceeds the limit of {limit}"),
            at: at.into(),
        }
    }

    pub fn unbound_variable(name: &str, at: impl Into<String>) -> Self {
        HardError {
            kind: HardErrorKind::UnboundVariable,
            message: format!("variable `{name}` has no binding"),
            at: at.into(),
        }
    }
}

/// Result of evaluating an expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Success(Value),
    SoftFail(Failure),
    HardError(HardError),
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success(_))
    }

    pub fn value(&self) -> Option<&Value> {
        match self {
            Outcome::Success(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_depth_exceeded(&self) -> bool {
        matches!(self, Outcome::HardError(e) if e.kind == HardErrorKind::DepthExceeded)
    }
}

/// Printed form: the value itself, `failure: <reason> at <redex>`, or
/// `error: <kind>: <message>`.
impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Success(v) => write!(f, "{v}"),
            Outcome::SoftFail(fail) => write!(f, "failure: {} at {}", fail.reason, fail.at),
            Outcome::HardError(err) => write!(f, "error: {}: {}", err.kind, err.message),
        }
    }
}

/// Error channel used while evaluating, so `?` can propagate both kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fault {
    Soft(Failure),
    Hard(HardError),
}

impl From<Failure> for Fault {
    fn from(f: Failure) -> Self {
        Fault::Soft(f)
    }
}

impl From<HardError> for Fault {
    fn from(e: HardError) -> Self {
        Fault::Hard(e)
    }
}

impl From<Result<Value, Fault>> for Outcome {
    fn from(r: Result<Value, Fault>) -> Self {
        match r {
            Ok(v) => Outcome::Success(v),
            Err(Fault::Soft(f)) => Outcome::SoftFail(f),
            Err(Fault::Hard(e)) => Outcome::HardError(e),
        }
    }
}

impl From<Outcome> for Result<Value, Fault> {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Success(v) => Ok(v),
            Outcome::SoftFail(f) => Err(Fault::Soft(f)),
            Outcome::HardError(e) => Err(Fault::Hard(e)),
        }
    }
}

/// Resource bounds for one evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of nested user-function calls.
    pub max_call_depth: NonZeroUsize,
    pub max_choice_width: NonZeroUsize,
    /// Events kept by [`run_main`](super::run_main) before the trace is cut off.
    pub max_trace_events: NonZeroUsize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_call_depth: NonZeroUsize::new(10_000).unwrap(),
            max_choice_width: NonZeroUsize::new(256).unwrap(),
            max_trace_events: NonZeroUsize::new(1_000_000).unwrap(),
        }
    }
}

impl Limits {
    pub fn with_call_depth(mut self, depth: NonZeroUsize) -> Self {
        self.max_call_depth = depth;
        self
    }

    pub fn with_trace_events(mut self, events: NonZeroUsize) -> Self {
        self.max_trace_events = events;
        self
    }
}
