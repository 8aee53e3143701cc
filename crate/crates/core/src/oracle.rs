//! Reference semantics by exhaustive search, for differential testing only.
//!
//! The evaluation rules are transcribed as a search that returns the set of
//! possible outcomes of an expression. Clause selection is genuinely
//! nondeterministic: any matching clause may be tried first, and after a
//! soft failure any of the remaining ones next. Sequential choice stays
//! ordered: a later branch is considered only along search paths where every
//! earlier branch failed.
//!
//! [`enumerate_outcomes`] explores every clause order. With the order fixed
//! to source order the same search yields exactly one outcome, which is what
//! [`first_success_leftmost`] returns. Neither shares code with the evaluator
//! beyond the syntax tree and the builtin table.
//!
//! The depth bound counts nested user-function calls, the same quantity the
//! evaluator limits. Reaching it is reported, never silently dropped.

use std::collections::{BTreeMap, HashMap};

use crate::builtins;
use crate::semantics::{FailReason, Failure, HardError, HardErrorKind, Outcome, Value};
use crate::syntax::{Clause, Expr, Literal, Param, Program, Symbol};

/// One successful derivation: its value, the rules applied (pre-order), and
/// the deepest call nesting it reached.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Derivation {
    pub result: Value,
    pub rule_path: Vec<u8>,
    pub depth_used: usize,
}

impl Derivation {
    /// Checks the phase discipline of the rule path. Every derivation ends in
    /// a constant; rule 5 hands over to clause selection or instantiation; 2
    /// and 3 keep selecting; 4 is followed by 1; 1 and the evaluation rules
    /// continue with evaluation.
    pub fn is_well_formed(&self) -> bool {
        let path = &self.rule_path;
        if path.last() != Some(&7) || path.iter().any(|r| !(1..=8).contains(r)) {
            return false;
        }
        path.windows(2).all(|w| match w[0] {
            5 | 2 | 3 => matches!(w[1], 1..=4),
            4 => w[1] == 1,
            _ => w[1] >= 5,
        })
    }
}

/// The result of [`enumerate_outcomes`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Enumeration {
    /// One derivation per distinct result value, sorted by value.
    pub derivations: Vec<Derivation>,
    /// Some search path failed softly.
    pub can_fail: bool,
    /// Some search path reached the depth bound; the set may be incomplete.
    pub bound_exceeded: bool,
}

impl Enumeration {
    pub fn results(&self) -> impl Iterator<Item = &Value> {
        self.derivations.iter().map(|d| &d.result)
    }

    pub fn contains(&self, value: &Value) -> bool {
        self.results().any(|v| v == value)
    }
}

/// All outcomes reachable under any clause selection order.
pub fn enumerate_outcomes(program: &Program, expr: &Expr, depth_bound: usize) -> Enumeration {
    let mut search = Search::new(program, depth_bound, Order::Any);
    let found = search.expr(expr, 0);
    let mut result = Enumeration::default();
    for outcome in found.0 {
        match outcome {
            Found::Success(d) => result.derivations.push(d),
            Found::Fail(_) => result.can_fail = true,
            Found::Hard(e) if e.kind == HardErrorKind::DepthExceeded => result.bound_exceeded = true,
            Found::Hard(_) => {}
        }
    }
    result.derivations.sort();
    result
}

/// The outcome obtained by trying clauses in source order and choice
/// branches left to right.
pub fn first_success_leftmost(program: &Program, expr: &Expr, depth_bound: usize) -> Outcome {
    match leftmost(program, expr, depth_bound) {
        Found::Success(d) => Outcome::Success(d.result),
        Found::Fail(f) => Outcome::SoftFail(f),
        Found::Hard(e) => Outcome::HardError(e),
    }
}

/// The derivation behind [`first_success_leftmost`], when it succeeds.
pub fn leftmost_derivation(program: &Program, expr: &Expr, depth_bound: usize) -> Option<Derivation> {
    match leftmost(program, expr, depth_bound) {
        Found::Success(d) => Some(d),
        _ => None,
    }
}

fn leftmost(program: &Program, expr: &Expr, depth_bound: usize) -> Found {
    let mut search = Search::new(program, depth_bound, Order::Source);
    let mut found = search.expr(expr, 0).0;
    debug_assert_eq!(found.len(), 1);
    found.swap_remove(0)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Order {
    Source,
    Any,
}

#[derive(Clone, Debug)]
enum Found {
    Success(Derivation),
    Fail(Failure),
    Hard(HardError),
}

/// A set of outcomes: successes deduplicated by value, at most one soft
/// failure and one hard error of each kind.
#[derive(Clone, Debug, Default)]
struct Outcomes(Vec<Found>);

impl Outcomes {
    fn one(found: Found) -> Self {
        Outcomes(vec![found])
    }

    fn add(&mut self, found: Found) {
        let dup = self.0.iter().any(|f| match (f, &found) {
            (Found::Success(a), Found::Success(b)) => a.result == b.result,
            (Found::Fail(_), Found::Fail(_)) => true,
            (Found::Hard(a), Found::Hard(b)) => a.kind == b.kind,
            _ => false,
        });
        if !dup {
            self.0.push(found);
        }
    }

    fn merge(&mut self, other: Outcomes) {
        for found in other.0 {
            self.add(found);
        }
    }
}

fn prefixed(prefix: &[u8], d: Derivation) -> Derivation {
    let mut rule_path = prefix.to_vec();
    rule_path.extend(d.rule_path);
    Derivation { rule_path, ..d }
}

/// Clause-selection result for one call: like [`Found`], but keeps "no
/// clause matched" apart from "a matching clause's body failed".
#[derive(Clone, Debug)]
enum Selected {
    Success(Derivation),
    NoMatch,
    BodyFail(Failure),
    Hard(HardError),
}

struct Search<'p> {
    program: &'p Program,
    bound: usize,
    order: Order,
    calls: HashMap<(Symbol, Vec<Value>, usize), Outcomes>,
}

impl<'p> Search<'p> {
    fn new(program: &'p Program, bound: usize, order: Order) -> Self {
        Search { program, bound, order, calls: HashMap::new() }
    }

    fn expr(&mut self, expr: &Expr, depth: usize) -> Outcomes {
        stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || self.expr_inner(expr, depth))
    }

    fn expr_inner(&mut self, expr: &Expr, depth: usize) -> Outcomes {
        match expr {
            Expr::Lit(lit) => Outcomes::one(Found::Success(Derivation {
                result: literal_value(lit),
                rule_path: vec![7],
                depth_used: depth,
            })),
            Expr::Var(name) => Outcomes::one(Found::Hard(HardError::unbound_variable(name, name.as_str()))),
            Expr::Call(name, args) => self.call(name, args, depth),
            Expr::Choice(branches) => self.choice(branches, depth),
            Expr::If(cond, then, otherwise) => {
                let mut out = Outcomes::default();
                for found in self.expr(cond, depth).0 {
                    let d = match found {
                        Found::Success(d) => d,
                        other => {
                            out.add(other);
                            continue;
                        }
                    };
                    let branch = match &d.result {
                        Value::Atom(a) if a.as_str() == "true" => then,
                        Value::Atom(a) if a.as_str() == "false" => otherwise,
                        v => {
                            let at = Expr::If(Box::new(v.to_expr()), then.clone(), otherwise.clone());
                            out.add(Found::Fail(Failure::new(FailReason::TypeMismatch, at.to_string())));
                            continue;
                        }
                    };
                    for next in self.expr(branch, depth).0 {
                        out.add(match next {
                            Found::Success(e) => Found::Success(Derivation {
                                depth_used: d.depth_used.max(e.depth_used),
                                ..prefixed(&d.rule_path, e)
                            }),
                            other => other,
                        });
                    }
                }
                out
            }
        }
    }

    /// Branch `i` is reached only along paths where branches before it failed.
    fn choice(&mut self, branches: &[Expr], depth: usize) -> Outcomes {
        let mut out = Outcomes::default();
        let mut rest: Option<Outcomes> = None;
        let Some((first, later)) = branches.split_first() else {
            out.add(Found::Fail(Failure::new(FailReason::ExplicitFail, "fail")));
            return out;
        };
        for found in self.expr(first, depth).0 {
            match found {
                Found::Success(d) => out.add(Found::Success(prefixed(&[8], d))),
                Found::Fail(f) if later.is_empty() => out.add(Found::Fail(f)),
                Found::Fail(_) => {
                    let rest = rest.get_or_insert_with(|| self.choice(later, depth));
                    out.merge(rest.clone());
                }
                hard => out.add(hard),
            }
        }
        out
    }

    fn call(&mut self, name: &Symbol, args: &[Expr], depth: usize) -> Outcomes {
        // Every way of evaluating the arguments left to right: the values so
        // far, the rules used, and the deepest nesting seen.
        let mut partial: Vec<(Vec<Value>, Vec<u8>, usize)> = vec![(Vec::new(), Vec::new(), depth)];
        let mut out = Outcomes::default();
        for arg in args {
            if partial.is_empty() {
                break;
            }
            let arg_outcomes = self.expr(arg, depth);
            let mut next = Vec::new();
            for (values, path, used) in &partial {
                for found in &arg_outcomes.0 {
                    match found {
                        Found::Success(d) => {
                            let mut values = values.clone();
                            values.push(d.result.clone());
                            let mut path = path.clone();
                            path.extend(&d.rule_path);
                            next.push((values, path, (*used).max(d.depth_used)));
                        }
                        stop => out.add(stop.clone()),
                    }
                }
            }
            partial = next;
        }

        for (values, path, used) in partial {
            let mut prefix = if args.is_empty() { Vec::new() } else { vec![6] };
            prefix.extend(path);
            if let Some(entry) = builtins::lookup(name, values.len()) {
                match entry.apply(&values) {
                    Outcome::Success(v) => {
                        out.add(Found::Success(Derivation { result: v, rule_path: prefix, depth_used: used }))
                    }
                    Outcome::SoftFail(f) => out.add(Found::Fail(f)),
                    Outcome::HardError(e) => out.add(Found::Hard(e)),
                }
                continue;
            }
            for found in self.user_call(name, values, depth).0 {
                out.add(match found {
                    Found::Success(d) => Found::Success(Derivation {
                        depth_used: d.depth_used.max(used),
                        ..prefixed(&prefix, d)
                    }),
                    other => other,
                });
            }
        }
        out
    }

    /// Rule 5 followed by clause selection. Memoized: the outcomes of a call
    /// depend only on the callee, its arguments, and the depth.
    fn user_call(&mut self, name: &Symbol, values: Vec<Value>, depth: usize) -> Outcomes {
        let call_text = builtins::redex_text(name, &values);
        if depth >= self.bound {
            return Outcomes::one(Found::Hard(HardError::depth_exceeded(self.bound, call_text)));
        }
        let key = (name.clone(), values, depth);
        if let Some(done) = self.calls.get(&key) {
            return done.clone();
        }
        let values = &key.1;

        // Naive scan of the whole program for this name and arity.
        let program = self.program;
        let candidates: Vec<&Clause> =
            program.clauses().iter().filter(|c| c.name == *name && c.params.len() == values.len()).collect();
        let bodies: Vec<Option<Outcomes>> =
            candidates.iter().map(|clause| self.instantiate(clause, values, depth)).collect();

        let mut memo = BTreeMap::new();
        let all: Vec<usize> = (0..candidates.len()).collect();
        let selected = self.select(&all, &bodies, &mut memo);

        let mut out = Outcomes::default();
        for s in selected {
            out.add(match s {
                Selected::Success(d) => Found::Success(prefixed(&[5], d)),
                Selected::NoMatch => {
                    Found::Fail(Failure::new(FailReason::NoMatchingClause, call_text.clone()))
                }
                Selected::BodyFail(f) => Found::Fail(f),
                Selected::Hard(e) => Found::Hard(e),
            });
        }
        self.calls.insert(key, out.clone());
        out
    }

    /// Matches a head and evaluates the instantiated body one level deeper;
    /// `None` when the head does not match. Paths start with 4 (if the head
    /// binds variables) and 1.
    fn instantiate(&mut self, clause: &Clause, values: &[Value], depth: usize) -> Option<Outcomes> {
        let mut bindings: Vec<(&Symbol, &Value)> = Vec::new();
        for (param, value) in clause.params.iter().zip(values) {
            match param {
                Param::Var(x) => bindings.push((x, value)),
                Param::Const(c) => {
                    if literal_value(c) != *value {
                        return None;
                    }
                }
            }
        }
        let prefix: &[u8] = if bindings.is_empty() { &[1] } else { &[4, 1] };
        let body = match instantiate_expr(&clause.body, &bindings) {
            Ok(body) => body,
            Err(e) => return Some(Outcomes::one(Found::Hard(e))),
        };
        let mut out = Outcomes::default();
        for found in self.expr(&body, depth + 1).0 {
            out.add(match found {
                Found::Success(d) => Found::Success(prefixed(prefix, d)),
                other => other,
            });
        }
        Some(out)
    }

    /// Outcomes of selecting among `remaining` candidates (indices in source
    /// order). The chosen clause is reached through rule 2 when others remain
    /// after it, and each soft failure passes to the rest through rule 3.
    fn select(
        &self,
        remaining: &[usize],
        bodies: &[Option<Outcomes>],
        memo: &mut BTreeMap<Vec<usize>, Vec<Selected>>,
    ) -> Vec<Selected> {
        if remaining.is_empty() {
            return vec![Selected::NoMatch];
        }
        if let Some(done) = memo.get(remaining) {
            return done.clone();
        }
        let mut out: Vec<Selected> = Vec::new();
        let choices: Vec<usize> = match self.order {
            Order::Source => remaining.iter().copied().take(1).collect(),
            Order::Any => remaining.to_vec(),
        };
        for chosen in choices {
            let others: Vec<usize> = remaining.iter().copied().filter(|&i| i != chosen).collect();
            let via: &[u8] = if others.is_empty() { &[] } else { &[2] };
            let mut after_failure = |earlier: Selected, out: &mut Vec<Selected>| {
                if others.is_empty() {
                    push_selected(out, earlier);
                    return;
                }
                for later in self.select(&others, bodies, memo) {
                    push_selected(
                        out,
                        match later {
                            Selected::Success(d) => Selected::Success(prefixed(&[3], d)),
                            Selected::NoMatch => earlier.clone(),
                            other => other,
                        },
                    );
                }
            };
            match &bodies[chosen] {
                None => after_failure(Selected::NoMatch, &mut out),
                Some(found) => {
                    for f in &found.0 {
                        match f {
                            Found::Success(d) => {
                                push_selected(&mut out, Selected::Success(prefixed(via, d.clone())))
                            }
                            Found::Fail(fail) => after_failure(Selected::BodyFail(fail.clone()), &mut out),
                            Found::Hard(e) => push_selected(&mut out, Selected::Hard(e.clone())),
                        }
                    }
                }
            }
        }
        memo.insert(remaining.to_vec(), out.clone());
        out
    }
}

fn push_selected(out: &mut Vec<Selected>, s: Selected) {
    let dup = out.iter().any(|o| match (o, &s) {
        (Selected::Success(a), Selected::Success(b)) => a.result == b.result,
        (Selected::NoMatch, Selected::NoMatch) => true,
        (Selected::BodyFail(_), Selected::BodyFail(_)) => true,
        (Selected::Hard(a), Selected::Hard(b)) => a.kind == b.kind,
        _ => false,
    });
    if !dup {
        out.push(s);
    }
}

fn literal_value(lit: &Literal) -> Value {
    match lit {
        Literal::Int(n) => Value::Int(*n),
        Literal::Atom(a) => Value::Atom(a.clone()),
    }
}

/// Rule 4's instantiation, written out separately from the evaluator's.
fn instantiate_expr(expr: &Expr, bindings: &[(&Symbol, &Value)]) -> Result<Expr, HardError> {
    Ok(match expr {
        Expr::Var(x) => match bindings.iter().find(|(name, _)| *name == x) {
            Some((_, value)) => value.to_expr(),
            None => return Err(HardError::unbound_variable(x, x.as_str())),
        },
        Expr::Lit(_) => expr.clone(),
        Expr::Call(f, args) => Expr::Call(
            f.clone(),
            args.iter().map(|a| instantiate_expr(a, bindings)).collect::<Result<_, _>>()?,
        ),
        Expr::Choice(bs) => {
            Expr::Choice(bs.iter().map(|b| instantiate_expr(b, bindings)).collect::<Result<_, _>>()?)
        }
        Expr::If(c, t, e) => Expr::if_then_else(
            instantiate_expr(c, bindings)?,
            instantiate_expr(t, bindings)?,
            instantiate_expr(e, bindings)?,
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expr_str, parse_program_str};

    fn program(src: &str) -> Program {
        parse_program_str(src).unwrap()
    }

    fn expr(src: &str) -> Expr {
        parse_expr_str(src).unwrap()
    }

    const DIV: &str = "div(x,y) = (x/y) ++ infinity";
    const FACT: &str = "fact(0) = 1; fact(n) = n * fact(n - 1)";

    #[test]
    fn div_has_a_unique_outcome() {
        let e = enumerate_outcomes(&program(DIV), &expr("div(4,0)"), 10);
        assert_eq!(e.results().cloned().collect::<Vec<_>>(), vec![Value::atom("infinity")]);
        assert!(!e.bound_exceeded);
        assert!(!e.can_fail);
        assert!(e.derivations.iter().all(Derivation::is_well_formed));
    }

    #[test]
    fn constant_is_a_leaf() {
        let e = enumerate_outcomes(&program(FACT), &expr("9"), 1);
        assert_eq!(
            e.derivations,
            vec![Derivation { result: Value::Int(9), rule_path: vec![7], depth_used: 0 }]
        );
    }

    #[test]
    fn factorial_enumeration() {
        let e = enumerate_outcomes(&program(FACT), &expr("fact(3)"), 20);
        // Any clause order can pick fact(n) for fact(0) and recurse below
        // zero until the bound, so the marker is expected here.
        assert!(e.contains(&Value::Int(3 * 2)));
        assert!(e.derivations.iter().all(Derivation::is_well_formed));
        let leftmost = first_success_leftmost(&program(FACT), &expr("fact(3)"), 20);
        assert_eq!(leftmost, Outcome::Success(Value::Int(6)));
    }

    #[test]
    fn leftmost_factorial_path() {
        let d = leftmost_derivation(&program(FACT), &expr("fact(1)"), 5).unwrap();
        // fact(1): args [6 7], call 5, second clause via 3, bind 4, body 1,
        // then 1 * fact(1 - 1): 6, 7, 6 (7 7) 5 2 1 7.
        assert_eq!(d.rule_path, vec![6, 7, 5, 3, 4, 1, 6, 7, 6, 6, 7, 7, 5, 2, 1, 7]);
        assert_eq!(d.depth_used, 2);
        assert!(d.is_well_formed());
    }

    #[test]
    fn unordered_clauses_expose_alternatives() {
        let p = program("g() = 1; g() = 2; f(2) = 5; main() = f(g()) ++ 9");
        let e = enumerate_outcomes(&p, &expr("main()"), 5);
        let got: Vec<_> = e.results().cloned().collect();
        assert_eq!(got, vec![Value::Int(5), Value::Int(9)]);
        assert_eq!(first_success_leftmost(&p, &expr("main()"), 5), Outcome::Success(Value::Int(9)));
    }

    #[test]
    fn undefined_call_fails_softly() {
        assert_eq!(
            first_success_leftmost(&program(""), &expr("g()"), 3),
            Outcome::SoftFail(Failure::new(FailReason::NoMatchingClause, "g()"))
        );
    }

    #[test]
    fn truncated_division() {
        assert_eq!(
            first_success_leftmost(&program(DIV), &expr("div(4,2)"), 3),
            Outcome::Success(Value::Int(2))
        );
    }

    #[test]
    fn bound_is_reported() {
        let p = program("loop() = loop()");
        let e = enumerate_outcomes(&p, &expr("loop() ++ 1"), 12);
        assert!(e.bound_exceeded);
        assert!(e.derivations.is_empty());
        assert!(first_success_leftmost(&p, &expr("loop()"), 12).is_depth_exceeded());
    }

    #[test]
    fn non_recursive_programs_finish_within_bound() {
        let p = program("a(x) = x + 1 ++ 0; b(x) = a(x) * a(x); c() = b(b(2))");
        let e = enumerate_outcomes(&p, &expr("c()"), 8);
        assert!(!e.bound_exceeded);
        assert_eq!(e.results().cloned().collect::<Vec<_>>(), vec![Value::Int(100)]);
    }

    #[test]
    fn malformed_paths_are_rejected() {
        let bad = |path: Vec<u8>| Derivation { result: Value::Int(0), rule_path: path, depth_used: 0 };
        assert!(!bad(vec![5, 7]).is_well_formed());
        assert!(!bad(vec![4, 7]).is_well_formed());
        assert!(!bad(vec![6, 7, 1]).is_well_formed());
        assert!(bad(vec![5, 1, 7]).is_well_formed());
    }
}
