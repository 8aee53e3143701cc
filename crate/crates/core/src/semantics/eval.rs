//! The deterministic evaluator.
//!
//! Expressions are reduced eagerly. A call first evaluates its arguments left
//! to right (rule 6), then either applies a builtin or resolves the call
//! against the program's clauses (rule 5). Clause resolution walks the
//! candidate clauses in source order, treating the list as a right-nested
//! conjunction: rule 2 tries the first clause, rule 3 moves on to the rest.
//! A matching clause binds its head variables by substitution (rule 4) and
//! evaluates the instantiated body (rule 1). A constant is its own value
//! (rule 7). A choice evaluates branches in order and commits to the first
//! one that succeeds (rule 8).
//!
//! A clause whose body fails softly does not fail the call: later clauses
//! are still tried. Hard errors abort everything.

use super::subst::{match_head, substitute};
use super::{
    FailReason, Failure, Fault, HardError, Limits, Outcome, Tag, Trace, TraceEvent, TraceSink, Value,
};
use crate::builtins;
use crate::syntax::{Clause, Expr, Head, Program};

const STACK_RED_ZONE: usize = 64 * 1024;
const STACK_GROWTH: usize = 2 * 1024 * 1024;

/// Evaluates a closed expression against `program`.
pub fn eval(program: &Program, expr: &Expr, limits: &Limits, sink: &mut dyn TraceSink) -> Outcome {
    let mut evaluator = Evaluator { program, limits, sink };
    evaluator.eval(expr, 0).into()
}

/// Evaluates `entry` and returns the outcome with its (bounded) trace.
pub fn run_main(program: &Program, entry: &Expr, limits: &Limits) -> (Outcome, Trace) {
    let mut trace = Trace::new(limits.max_trace_events.get());
    let outcome = eval(program, entry, limits, &mut trace);
    (outcome, trace)
}

/// Resolves a call with evaluated arguments against `candidates`, as seen
/// from call depth `depth`.
pub fn backchain(
    candidates: &[&Clause],
    program: &Program,
    name: &str,
    args: &[Value],
    depth: usize,
    limits: &Limits,
    sink: &mut dyn TraceSink,
) -> Outcome {
    let mut evaluator = Evaluator { program, limits, sink };
    let call = builtins::redex_text(name, args);
    evaluator.resolve(candidates, &call, args, depth).into()
}

/// How a scan over candidate clauses ended without success.
enum Miss {
    /// No clause head matched.
    NoMatch,
    /// Some clause matched but its body failed softly; holds the last such failure.
    Body(Failure),
    Hard(HardError),
}

struct Evaluator<'a> {
    program: &'a Program,
    limits: &'a Limits,
    sink: &'a mut dyn TraceSink,
}

impl Evaluator<'_> {
    fn emit(&mut self, rule: u8, depth: usize, tag: Tag, subject: impl FnOnce() -> String) {
        self.emit_with(rule, depth, tag, None, subject);
    }

    fn emit_with(
        &mut self,
        rule: u8,
        depth: usize,
        tag: Tag,
        reason: Option<FailReason>,
        subject: impl FnOnce() -> String,
    ) {
        if self.sink.enabled() {
            self.sink.record(TraceEvent::new(rule, depth, tag, subject()).with_reason(reason));
        }
    }

    /// Emits the closing event for a rule application.
    fn close<T>(
        &mut self,
        rule: u8,
        depth: usize,
        result: &Result<T, Fault>,
        subject: impl FnOnce() -> String,
    ) {
        match result {
            Ok(_) => self.emit(rule, depth, Tag::Succeed, subject),
            Err(Fault::Soft(f)) => self.emit_with(rule, depth, Tag::Fail, Some(f.reason), subject),
            Err(Fault::Hard(_)) => self.emit(rule, depth, Tag::Fail, subject),
        }
    }

    fn eval(&mut self, expr: &Expr, depth: usize) -> Result<Value, Fault> {
        stacker::maybe_grow(STACK_RED_ZONE, STACK_GROWTH, || self.eval_inner(expr, depth))
    }

    fn eval_inner(&mut self, expr: &Expr, depth: usize) -> Result<Value, Fault> {
        match expr {
            Expr::Lit(lit) => {
                self.emit(7, depth, Tag::Succeed, || lit.to_string());
                Ok(Value::from(lit))
            }
            Expr::Var(name) => Err(HardError::unbound_variable(name, expr.to_string()).into()),
            Expr::Call(name, args) => self.eval_call(expr, name, args, depth),
            Expr::Choice(branches) => self.eval_choice(expr, branches, depth),
            Expr::If(cond, then, otherwise) => {
                let test = self.eval(cond, depth)?;
                if test.is_atom("true") {
                    self.eval(then, depth)
                } else if test.is_atom("false") {
                    self.eval(otherwise, depth)
                } else {
                    let at = Expr::If(Box::new(test.to_expr()), then.clone(), otherwise.clone());
                    Err(Failure::new(FailReason::TypeMismatch, at.to_string()).into())
                }
            }
        }
    }

    fn eval_call(&mut self, expr: &Expr, name: &str, args: &[Expr], depth: usize) -> Result<Value, Fault> {
        if args.is_empty() {
            return self.apply(name, &[], depth);
        }
        self.emit(6, depth, Tag::Enter, || expr.to_string());
        let result = self.eval_args(args, depth).and_then(|values| self.apply(name, &values, depth));
        self.close(6, depth, &result, || expr.to_string());
        result
    }

    fn eval_args(&mut self, args: &[Expr], depth: usize) -> Result<Vec<Value>, Fault> {
        args.iter().map(|arg| self.eval(arg, depth)).collect()
    }

    fn apply(&mut self, name: &str, args: &[Value], depth: usize) -> Result<Value, Fault> {
        if let Some(entry) = builtins::lookup(name, args.len()) {
            return entry.apply(args).into();
        }
        let call = builtins::redex_text(name, args);
        self.emit(5, depth, Tag::Enter, || call.clone());
        let result = if depth >= self.limits.max_call_depth.get() {
            Err(HardError::depth_exceeded(self.limits.max_call_depth.get(), call.clone()).into())
        } else {
            let candidates = self.program.candidates(name, args.len());
            self.resolve(&candidates, &call, args, depth)
        };
        self.close(5, depth, &result, || call.clone());
        result
    }

    fn resolve(
        &mut self,
        candidates: &[&Clause],
        call: &str,
        args: &[Value],
        depth: usize,
    ) -> Result<Value, Fault> {
        match self.scan(candidates, call, args, depth) {
            Ok(v) => Ok(v),
            Err(Miss::NoMatch) => Err(Failure::new(FailReason::NoMatchingClause, call).into()),
            Err(Miss::Body(f)) => Err(f.into()),
            Err(Miss::Hard(e)) => Err(e.into()),
        }
    }

    fn scan(
        &mut self,
        candidates: &[&Clause],
        call: &str,
        args: &[Value],
        depth: usize,
    ) -> Result<Value, Miss> {
        let Some((first, rest)) = candidates.split_first() else {
            return Err(Miss::NoMatch);
        };
        if rest.is_empty() {
            return self.try_clause(first, args, depth);
        }

        self.emit(2, depth, Tag::Enter, || Head(first).to_string());
        let attempt = self.try_clause(first, args, depth);
        let (tag, reason) = match &attempt {
            Ok(_) => (Tag::Succeed, None),
            Err(Miss::Body(f)) => (Tag::Fail, Some(f.reason)),
            Err(_) => (Tag::Fail, None),
        };
        self.emit_with(2, depth, tag, reason, || Head(first).to_string());
        let earlier = match attempt {
            Ok(v) => return Ok(v),
            Err(Miss::Hard(e)) => return Err(Miss::Hard(e)),
            Err(miss) => miss,
        };

        self.emit(3, depth, Tag::Enter, || call.to_string());
        let later = self.scan(rest, call, args, depth);
        let (tag, reason) = match &later {
            Ok(_) => (Tag::Succeed, None),
            Err(Miss::Body(f)) => (Tag::Fail, Some(f.reason)),
            Err(Miss::NoMatch) => (Tag::Fail, Some(FailReason::NoMatchingClause)),
            Err(Miss::Hard(_)) => (Tag::Fail, None),
        };
        self.emit_with(3, depth, tag, reason, || call.to_string());
        match later {
            Err(Miss::NoMatch) => Err(earlier),
            other => other,
        }
    }

    /// `Err(NoMatch)` when the head does not match; otherwise the body's result.
    fn try_clause(&mut self, clause: &Clause, args: &[Value], depth: usize) -> Result<Value, Miss> {
        let subst = match_head(clause, args).ok_or(Miss::NoMatch)?;
        let instance = || builtins::redex_text(&clause.name, args);
        let binds = clause.has_var_params();
        if binds {
            self.emit(4, depth, Tag::Enter, || Head(clause).to_string());
        }
        self.emit(1, depth, Tag::Enter, instance);
        let result = substitute(&clause.body, &subst)
            .map_err(Fault::from)
            .and_then(|body| self.eval(&body, depth + 1));
        self.close(1, depth, &result, instance);
        if binds {
            self.close(4, depth, &result, || Head(clause).to_string());
        }
        result.map_err(|fault| match fault {
            Fault::Soft(f) => Miss::Body(f),
            Fault::Hard(e) => Miss::Hard(e),
        })
    }

    fn eval_choice(&mut self, expr: &Expr, branches: &[Expr], depth: usize) -> Result<Value, Fault> {
        let limit = self.limits.max_choice_width.get();
        if branches.len() > limit {
            return Err(HardError::choice_width_exceeded(branches.len(), limit, expr.to_string()).into());
        }
        self.emit(8, depth, Tag::Enter, || expr.to_string());
        let mut last = None;
        for branch in branches {
            match self.eval(branch, depth) {
                Ok(v) => {
                    self.emit(8, depth, Tag::Succeed, || branch.to_string());
                    return Ok(v);
                }
                Err(Fault::Soft(f)) => {
                    self.emit_with(8, depth, Tag::Fail, Some(f.reason), || branch.to_string());
                    last = Some(f);
                }
                Err(Fault::Hard(e)) => {
                    self.emit(8, depth, Tag::Fail, || expr.to_string());
                    return Err(e.into());
                }
            }
        }
        // Only reachable by hand-built empty choices, which behave like `fail`.
        let last = last.unwrap_or_else(|| Failure::new(FailReason::ExplicitFail, "fail"));
        self.emit_with(8, depth, Tag::Fail, Some(last.reason), || expr.to_string());
        Err(last.into())
    }
}
