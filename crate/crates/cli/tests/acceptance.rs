//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so the summary is always printed.

use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use funcadd_core::oracle::{enumerate_outcomes, first_success_leftmost};
use funcadd_core::semantics::{NoTrace, Tag};
use funcadd_core::syntax::{parse_expr_str, parse_program_str};
use funcadd_core::testing::{Gen, ProgramShape};
use funcadd_core::{eval, Expr, FailReason, Limits, Outcome, Program, TraceEvent, Value};

const DIV_LIMIT: Duration = Duration::from_secs(1);
const SORT_LIMIT: Duration = Duration::from_secs(1);
const DIFFERENTIAL_LIMIT: Duration = Duration::from_secs(60);
const DIVERGENCE_LIMIT: Duration = Duration::from_secs(5);

const CONSTANTS: usize = 1000;
const CONSTANT_PROGRAMS: usize = 50;
const ALGEBRA_CASES: usize = 500;
const DIFFERENTIAL_PROGRAMS: usize = 500;
const DIFFERENTIAL_BOUND: usize = 12;
const ROUNDTRIP_EXPRS: usize = 1000;
const ROUNDTRIP_PROGRAMS: usize = 200;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn funcadd(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_funcadd")).args(args).output().expect("spawn funcadd");
    (output, start.elapsed())
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn traced(path: &Path, entry: &str) -> (Outcome, Vec<TraceEvent>) {
    let program = parse_program_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let entry = parse_expr_str(entry).unwrap();
    let mut events = Vec::new();
    let outcome = eval(&program, &entry, &Limits::default(), &mut events);
    (outcome, events)
}

fn sorted_input() -> Value {
    // Independent oracle for the expected result.
    let mut xs = vec![3, 100, 40, 2];
    xs.sort_unstable();
    Value::list(xs.into_iter().map(Value::Int))
}

fn is_call_of(event: &TraceEvent, name: &str) -> bool {
    is_call_of_str(&event.subject, name)
}

fn div_reproduction() -> Check {
    let path = corpus("div.fnp");
    let (output, elapsed) = funcadd(&["run", path.to_str().unwrap(), "--entry", "div(4,0)", "--trace"]);
    ensure(stdout(&output) == "infinity\n", || format!("stdout {:?}", stdout(&output)))?;
    ensure(output.status.code() == Some(0), || format!("exit {:?}", output.status.code()))?;
    let trace = String::from_utf8_lossy(&output.stderr);
    let lines: Vec<&str> = trace.lines().collect();
    let fail = lines
        .iter()
        .position(|l| l.starts_with("R8 ") && l.ends_with(" Fail | 4 / 0"))
        .ok_or("no rule-8 Fail event for the 4 / 0 branch")?;
    let continues =
        lines[fail + 1..].iter().any(|l| l.starts_with("R8 ") && l.ends_with("Succeed | infinity"));
    ensure(continues, || "no rule-8 continuation to infinity".into())?;
    ensure(elapsed < DIV_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("infinity, exit 0, `{}` then continuation, {elapsed:.2?}", lines[fail]))
}

fn sort_plan_a() -> Check {
    let path = corpus("sort.fnp");
    let entry = "sort([3,100,40,2])";
    let (output, elapsed) = funcadd(&["run", path.to_str().unwrap(), "--entry", entry]);
    let expected = sorted_input();
    ensure(stdout(&output) == format!("{expected}\n"), || format!("stdout {:?}", stdout(&output)))?;
    ensure(elapsed < SORT_LIMIT, || format!("took {elapsed:?}"))?;

    let (outcome, events) = traced(&path, entry);
    ensure(outcome == Outcome::Success(expected.clone()), || format!("library gave {outcome}"))?;
    let committed = events.iter().any(|e| e.rule == 8 && e.tag == Tag::Succeed && is_call_of(e, "heapsort"));
    ensure(committed, || "no commitment to the heapsort branch".into())?;
    let others = events
        .iter()
        .filter(|e| ["quicksort", "bubblesort"].iter().any(|n| e.subject.starts_with(n)))
        .count();
    ensure(others == 0, || format!("{others} events for the other modules"))?;
    Ok(format!("{expected}, committed to heapsort, 0 quicksort/bubblesort events, {elapsed:.2?}"))
}

fn sort_plan_b() -> Check {
    let path = corpus("sort_bubble_only.fnp");
    let entry = "sort([3,100,40,2])";
    let (output, elapsed) = funcadd(&["run", path.to_str().unwrap(), "--entry", entry]);
    let expected = sorted_input();
    ensure(stdout(&output) == format!("{expected}\n"), || format!("stdout {:?}", stdout(&output)))?;
    ensure(output.status.code() == Some(0), || format!("exit {:?}", output.status.code()))?;
    ensure(elapsed < SORT_LIMIT, || format!("took {elapsed:?}"))?;

    let (outcome, events) = traced(&path, entry);
    ensure(outcome == Outcome::Success(expected.clone()), || format!("library gave {outcome}"))?;
    let bubble = events
        .iter()
        .position(|e| e.rule == 5 && e.tag == Tag::Enter && is_call_of(e, "bubblesort"))
        .ok_or("bubblesort never called")?;
    let misses: Vec<&str> = events[..bubble]
        .iter()
        .filter(|e| e.rule == 5 && e.tag == Tag::Fail && e.reason == Some(FailReason::NoMatchingClause))
        .map(|e| e.subject.as_str())
        .collect();
    ensure(misses.len() == 2, || format!("{} no-matching-clause failures: {misses:?}", misses.len()))?;
    ensure(is_call_of_str(misses[0], "heapsort") && is_call_of_str(misses[1], "quicksort"), || {
        format!("failures were {misses:?}")
    })?;
    Ok(format!("{expected} after failing heapsort and quicksort, {elapsed:.2?}"))
}

fn is_call_of_str(subject: &str, name: &str) -> bool {
    subject.starts_with(name) && subject[name.len()..].starts_with('(')
}

fn constant_identity() -> Check {
    let mut gen = Gen::new(0xC0_57A7);
    let mut checked = 0;
    for _ in 0..CONSTANT_PROGRAMS {
        let program = gen.program(&ProgramShape::default());
        for _ in 0..CONSTANTS {
            let c = gen.value(0);
            let outcome = eval(&program, &c.to_expr(), &Limits::default(), &mut NoTrace);
            ensure(outcome == Outcome::Success(c.clone()), || format!("{c} evaluated to {outcome}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} constant/program pairs"))
}

fn terminating_case(gen: &mut Gen) -> (Program, Expr, Expr, Expr) {
    let shape = ProgramShape { recursive: false, ..ProgramShape::default() };
    let program = gen.program(&shape);
    let a = gen.entry_for(&program, 3);
    let b = gen.entry_for(&program, 3);
    let c = gen.entry_for(&program, 3);
    (program, a, b, c)
}

fn quiet(program: &Program, expr: &Expr) -> Outcome {
    eval(program, expr, &Limits::default(), &mut NoTrace)
}

fn choice(left: Expr, right: Expr) -> Expr {
    Expr::Choice(vec![left, right])
}

fn choice_algebra() -> Check {
    let mut gen = Gen::new(0x0A16_EB7A);
    let mut caught = 0;
    for _ in 0..ALGEBRA_CASES {
        let (program, a, b, _) = terminating_case(&mut gen);
        let left = quiet(&program, &a);
        let expected = match &left {
            Outcome::SoftFail(_) => {
                caught += 1;
                quiet(&program, &b)
            }
            other => other.clone(),
        };
        let got = quiet(&program, &choice(a.clone(), b.clone()));
        ensure(got == expected, || format!("left-catch: {a} ++ {b} gave {got}, expected {expected}"))?;
    }
    for _ in 0..ALGEBRA_CASES {
        let (program, a, _, _) = terminating_case(&mut gen);
        let got = quiet(&program, &choice(Expr::call("fail", vec![]), a.clone()));
        let expected = quiet(&program, &a);
        ensure(got == expected, || format!("left-identity: fail ++ {a} gave {got}, expected {expected}"))?;
    }
    for _ in 0..ALGEBRA_CASES {
        let (program, a, b, c) = terminating_case(&mut gen);
        let lhs = quiet(&program, &choice(choice(a.clone(), b.clone()), c.clone()));
        let rhs = quiet(&program, &choice(a.clone(), choice(b.clone(), c.clone())));
        ensure(lhs == rhs, || format!("associativity: {a} | {b} | {c}: {lhs} vs {rhs}"))?;
    }
    Ok(format!("{ALGEBRA_CASES} cases per law, {caught} left branches failed"))
}

fn differential() -> Check {
    let start = Instant::now();
    let shape = ProgramShape { max_clauses: 5, max_arity: 2, ..ProgramShape::default() };
    let limits = Limits::default().with_call_depth(NonZeroUsize::new(DIFFERENTIAL_BOUND).unwrap());
    let mut gen = Gen::new(0xD1FF);
    let (mut compared, mut bounded, mut successes) = (0, 0, 0);
    for _ in 0..DIFFERENTIAL_PROGRAMS {
        let program = gen.program(&shape);
        let entry = gen.entry_for(&program, 3);
        let engine = eval(&program, &entry, &limits, &mut NoTrace);
        let leftmost = first_success_leftmost(&program, &entry, DIFFERENTIAL_BOUND);
        if engine.is_depth_exceeded() || leftmost.is_depth_exceeded() {
            bounded += 1;
        } else {
            compared += 1;
            ensure(engine == leftmost, || {
                format!("{entry} against\n{program}engine {engine}, oracle {leftmost}")
            })?;
        }
        if let Outcome::Success(v) = &engine {
            successes += 1;
            let all = enumerate_outcomes(&program, &entry, DIFFERENTIAL_BOUND);
            ensure(all.contains(v), || format!("{entry}: {v} missing from enumeration\n{program}"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < DIFFERENTIAL_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{compared} agreed, {bounded} hit the bound, {successes} successes enumerated, {elapsed:.2?}"))
}

fn divergence() -> Check {
    let dir = std::env::temp_dir().join(format!("funcadd-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("loop.fnp");
    std::fs::write(&path, "loop() = loop();\n").map_err(|e| e.to_string())?;
    let mut report = Vec::new();
    for entry in ["loop()", "loop() ++ 1"] {
        let (output, elapsed) =
            funcadd(&["run", path.to_str().unwrap(), "--entry", entry, "--depth-limit", "10000"]);
        let out = stdout(&output);
        ensure(out.starts_with("error: depth-exceeded"), || format!("{entry}: stdout {out:?}"))?;
        ensure(output.status.code() == Some(2), || format!("{entry}: exit {:?}", output.status.code()))?;
        ensure(elapsed < DIVERGENCE_LIMIT, || format!("{entry}: took {elapsed:?}"))?;
        report.push(format!("`{entry}` {elapsed:.2?}"));
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("depth-exceeded, exit 2: {}", report.join(", ")))
}

fn roundtrip() -> Check {
    let mut gen = Gen::new(0x5EED);
    for _ in 0..ROUNDTRIP_EXPRS {
        let expr = gen.closed_expr(5);
        let printed = expr.to_string();
        let parsed = parse_expr_str(&printed).map_err(|e| format!("{printed}: {e}"))?;
        ensure(parsed == expr, || format!("{printed} reparsed differently"))?;
    }
    for _ in 0..ROUNDTRIP_PROGRAMS {
        let program = gen.program(&ProgramShape::default());
        let printed = program.to_string();
        let parsed = parse_program_str(&printed).map_err(|e| format!("{printed}: {e}"))?;
        ensure(parsed == program, || format!("program reparsed differently:\n{printed}"))?;
    }
    Ok(format!("{ROUNDTRIP_EXPRS} expressions, {ROUNDTRIP_PROGRAMS} programs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("div fallback to infinity", div_reproduction),
        ("sort commits to first module", sort_plan_a),
        ("sort falls through to bubblesort", sort_plan_b),
        ("constants evaluate to themselves", constant_identity),
        ("choice algebra", choice_algebra),
        ("differential oracle", differential),
        ("divergence is a hard error", divergence),
        ("syntax round-trip", roundtrip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
