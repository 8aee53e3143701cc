//! Values, outcomes, tracing, and the evaluator.

mod eval;
mod outcome;
mod subst;
mod trace;
mod value;

pub use eval::{backchain, eval, run_main};
pub use outcome::{FailReason, Failure, Fault, HardError, HardErrorKind, Limits, Outcome};
pub use subst::{match_head, substitute, Substitution};
pub use trace::{truncation_marker, NoTrace, Phase, Tag, Trace, TraceEvent, TraceSink};
pub use value::Value;
