//! Interpreter for a small first-order eager functional language whose
//! expressions may be combined with a sequential choice operator `++`.
//!
//! `a ++ b` evaluates `a`; if `a` fails (no matching clause, division by
//! zero, `fail`, ...) it evaluates `b` instead. Hard errors such as running
//! out of call depth are not caught.
//!
//! ```
//! use funcadd_core::{parse_expr_str, parse_program_str, run_main, Limits, Value};
//!
//! let program = parse_program_str("div(x, y) = (x / y) ++ infinity").unwrap();
//! let entry = parse_expr_str("div(4, 0)").unwrap();
//! let (outcome, _trace) = run_main(&program, &entry, &Limits::default());
//! assert_eq!(outcome.value(), Some(&Value::atom("infinity")));
//! ```

pub mod builtins;
pub mod oracle;
pub mod semantics;
pub mod syntax;
#[cfg(feature = "testing")]
pub mod testing;

pub use builtins::apply_builtin;
pub use semantics::{
    eval, run_main, FailReason, Failure, HardError, HardErrorKind, Limits, Outcome, Trace, TraceEvent, Value,
};
pub use syntax::{parse_expr_str, parse_program_str, Clause, Expr, Program, SyntaxError};
