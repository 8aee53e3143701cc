//! Batch runner and interactive session for `.fnp` programs.

use std::fs;
use std::io::{self, BufRead, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use funcadd_core::oracle::first_success_leftmost;
use funcadd_core::semantics::{truncation_marker, TraceSink};
use funcadd_core::syntax::{looks_like_clause, parse_expr, parse_program, tokenize};
use funcadd_core::{eval, parse_expr_str, parse_program_str, Limits, Outcome, Program, TraceEvent};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_SOFT_FAIL: i32 = 1;
pub const EXIT_HARD_ERROR: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

/// Options for one batch run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub program_path: Option<PathBuf>,
    pub entry: String,
    pub trace: bool,
    pub depth_limit: Option<NonZeroUsize>,
    pub oracle_check: bool,
    pub oracle_bound: NonZeroUsize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            program_path: None,
            entry: "main()".to_string(),
            trace: false,
            depth_limit: None,
            oracle_check: false,
            oracle_bound: NonZeroUsize::new(16).unwrap(),
        }
    }
}

/// The printed form of an outcome, without a trailing newline.
pub fn format_outcome(outcome: &Outcome) -> String {
    outcome.to_string()
}

pub fn exit_code(outcome: &Outcome) -> i32 {
    match outcome {
        Outcome::Success(_) => EXIT_SUCCESS,
        Outcome::SoftFail(_) => EXIT_SOFT_FAIL,
        Outcome::HardError(_) => EXIT_HARD_ERROR,
    }
}

/// Writes trace lines as they are produced, up to `limit` events.
pub struct StreamSink<'w> {
    out: &'w mut dyn Write,
    written: usize,
    limit: usize,
    truncated: bool,
}

impl<'w> StreamSink<'w> {
    pub fn new(out: &'w mut dyn Write, limit: usize) -> Self {
        StreamSink { out, written: 0, limit, truncated: false }
    }
}

impl TraceSink for StreamSink<'_> {
    fn enabled(&self) -> bool {
        !self.truncated
    }

    fn record(&mut self, event: TraceEvent) {
        // Write errors on the trace stream are not worth aborting evaluation for.
        if self.written < self.limit {
            let _ = writeln!(self.out, "{event}");
            self.written += 1;
        } else if !self.truncated {
            self.truncated = true;
            let _ = writeln!(self.out, "{}", truncation_marker(self.limit));
        }
    }
}

fn evaluate(
    program: &Program,
    entry: &funcadd_core::Expr,
    limits: &Limits,
    trace: bool,
    err: &mut dyn Write,
) -> Outcome {
    if trace {
        let mut sink = StreamSink::new(err, limits.max_trace_events.get());
        eval(program, entry, limits, &mut sink)
    } else {
        eval(program, entry, limits, &mut funcadd_core::semantics::NoTrace)
    }
}

fn load_program(path: &Path) -> Result<Program, String> {
    let source = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_program_str(&source).map_err(|e| format!("parse error: {}:{e}", path.display()))
}

/// Runs one entry expression and returns the exit status.
pub fn cmd_run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let program = match &config.program_path {
        Some(path) => match load_program(path) {
            Ok(p) => p,
            Err(msg) => {
                let _ = writeln!(err, "{msg}");
                return EXIT_USAGE;
            }
        },
        None => Program::default(),
    };
    let entry = match parse_expr_str(&config.entry) {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(err, "parse error: entry:{e}");
            return EXIT_USAGE;
        }
    };
    let mut limits = Limits::default();
    if let Some(depth) = config.depth_limit {
        limits = limits.with_call_depth(depth);
    }

    let outcome = evaluate(&program, &entry, &limits, config.trace, err);
    let _ = writeln!(out, "{}", format_outcome(&outcome));
    let mut code = exit_code(&outcome);

    if config.oracle_check {
        let bound = config.oracle_bound.get();
        let expected = first_success_leftmost(&program, &entry, bound);
        let line = if expected.is_depth_exceeded() || outcome.is_depth_exceeded() {
            format!("oracle: inconclusive (depth bound {bound} reached)")
        } else if expected == outcome {
            "oracle: agree".to_string()
        } else {
            code = EXIT_ORACLE;
            format!("oracle: DISAGREE: expected {}", format_outcome(&expected))
        };
        let _ = writeln!(out, "{line}");
    }
    let _ = out.flush();
    code
}

/// What the session loop should do after a line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Quit,
}

/// An interactive session: accumulated clauses plus settings.
pub struct Repl {
    program: Program,
    trace: bool,
    limits: Limits,
}

impl Default for Repl {
    fn default() -> Self {
        Repl::new(Program::default())
    }
}

impl Repl {
    pub fn new(program: Program) -> Self {
        Repl { program, trace: false, limits: Limits::default() }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn handle_line(&mut self, line: &str, out: &mut dyn Write, err: &mut dyn Write) -> Control {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Control::Continue;
        }
        if let Some(command) = line.strip_prefix(':') {
            return self.meta(command, out, err);
        }

        let tokens = match tokenize(line) {
            Ok(t) => t,
            Err(e) => {
                let _ = writeln!(err, "parse error: {e}");
                return Control::Continue;
            }
        };
        if looks_like_clause(&tokens) {
            match parse_program(&tokens) {
                Ok(defs) => {
                    for clause in defs.clauses() {
                        let _ = writeln!(out, "defined {}/{}", clause.name, clause.arity());
                    }
                    self.program.extend(defs.clauses().iter().cloned());
                }
                Err(e) => {
                    let _ = writeln!(err, "parse error: {e}");
                }
            }
            return Control::Continue;
        }
        match parse_expr(&tokens) {
            Ok(expr) => {
                let outcome = evaluate(&self.program, &expr, &self.limits, self.trace, err);
                let _ = writeln!(out, "{}", format_outcome(&outcome));
            }
            Err(e) => {
                let _ = writeln!(err, "parse error: {e}");
            }
        }
        Control::Continue
    }

    fn meta(&mut self, command: &str, out: &mut dyn Write, err: &mut dyn Write) -> Control {
        let mut words = command.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some("quit" | "q"), None, _) => return Control::Quit,
            (Some("list"), None, _) => {
                let _ = write!(out, "{}", self.program);
            }
            (Some("trace"), Some("on"), None) => self.trace = true,
            (Some("trace"), Some("off"), None) => self.trace = false,
            (Some("load"), Some(_), _) => {
                let path = command["load".len()..].trim();
                match load_program(Path::new(path)) {
                    Ok(loaded) => {
                        let _ = writeln!(out, "loaded {} clauses from {path}", loaded.len());
                        self.program.extend(loaded.clauses().iter().cloned());
                    }
                    Err(msg) => {
                        let _ = writeln!(err, "{msg}");
                    }
                }
            }
            _ => {
                let _ = writeln!(
                    err,
                    "unknown command `:{command}`; try :load <path>, :list, :trace on|off, :quit"
                );
            }
        }
        Control::Continue
    }

    /// Reads lines until end of input or `:quit`.
    pub fn run(
        &mut self,
        input: &mut dyn BufRead,
        out: &mut dyn Write,
        err: &mut dyn Write,
        prompt: bool,
    ) -> io::Result<()> {
        let mut line = String::new();
        loop {
            if prompt {
                write!(out, "> ")?;
                out.flush()?;
            }
            line.clear();
            if input.read_line(&mut line)? == 0 {
                break;
            }
            let control = self.handle_line(&line, out, err);
            out.flush()?;
            if control == Control::Quit {
                break;
            }
        }
        Ok(())
    }
}

/// Starts a session, optionally preloaded from a file.
pub fn cmd_repl(
    path: Option<&Path>,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
    prompt: bool,
) -> i32 {
    let program = match path {
        Some(path) => match load_program(path) {
            Ok(p) => p,
            Err(msg) => {
                let _ = writeln!(err, "{msg}");
                return EXIT_USAGE;
            }
        },
        None => Program::default(),
    };
    match Repl::new(program).run(input, out, err, prompt) {
        Ok(()) => EXIT_SUCCESS,
        Err(e) => {
            let _ = writeln!(err, "i/o error: {e}");
            EXIT_USAGE
        }
    }
}
