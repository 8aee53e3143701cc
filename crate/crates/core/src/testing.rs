//! Seeded generators for values, expressions, and small programs.
//!
//! Everything produced here round-trips through the printer and parser:
//! atoms never collide with variable names or keywords, head constants are
//! integers or `nil`/`true`/`false`, and choices are built flattened.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::semantics::Value;
use crate::syntax::{Clause, Expr, Literal, Param, Program, Symbol};

const ATOMS: &[&str] = &["a", "b", "nil", "true", "false", "infinity"];
const VARS: &[&str] = &["x", "y", "z"];
const BINARY: &[&str] = &["+", "-", "*", "/", "mod", "==", "!=", "<", "<=", ">", ">="];
const HEAD_ATOMS: &[&str] = &["nil", "true", "false"];

/// Size parameters for generated programs.
#[derive(Clone, Copy, Debug)]
pub struct ProgramShape {
    pub max_clauses: usize,
    pub max_functions: usize,
    pub max_arity: usize,
    pub body_depth: usize,
    /// When false a function only calls functions defined before it, so
    /// every evaluation terminates.
    pub recursive: bool,
}

impl Default for ProgramShape {
    fn default() -> Self {
        ProgramShape { max_clauses: 5, max_functions: 3, max_arity: 2, body_depth: 3, recursive: true }
    }
}

/// The signature of a generated function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnSig {
    pub name: Symbol,
    pub arity: usize,
}

pub struct Gen {
    rng: StdRng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: StdRng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut StdRng {
        &mut self.rng
    }

    fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("non-empty")
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn small_int(&mut self) -> i64 {
        self.rng.gen_range(-3..=6)
    }

    fn any_int(&mut self) -> i64 {
        match self.rng.gen_range(0..10) {
            0 => *self.pick(&[i64::MIN, i64::MAX, i64::MIN + 1, -1, 0]),
            1..=3 => self.rng.gen(),
            _ => self.rng.gen_range(-1000..=1000),
        }
    }

    pub fn atom(&mut self) -> Symbol {
        Symbol::new(self.pick(ATOMS))
    }

    /// A ground value of nesting depth at most `depth`.
    pub fn value(&mut self, depth: usize) -> Value {
        let roll = self.rng.gen_range(0..10);
        if depth == 0 || roll < 5 {
            return if self.chance(0.6) { Value::Int(self.any_int()) } else { Value::Atom(self.atom()) };
        }
        if roll < 8 {
            let len = self.rng.gen_range(0..=4);
            Value::list((0..len).map(|_| self.value(depth - 1)).collect::<Vec<_>>())
        } else {
            Value::cons(self.value(depth - 1), self.value(depth - 1))
        }
    }

    /// A closed expression using every syntactic form; calls name the
    /// functions in `fns` or a few undefined ones.
    pub fn closed_expr(&mut self, depth: usize) -> Expr {
        let fns = [
            FnSig { name: Symbol::new("f"), arity: 1 },
            FnSig { name: Symbol::new("g"), arity: 0 },
            FnSig { name: Symbol::new("h2"), arity: 2 },
        ];
        self.expr(depth, &[], &fns, true)
    }

    /// A closed expression over the functions of `program`.
    pub fn entry_for(&mut self, program: &Program, depth: usize) -> Expr {
        let fns = signatures(program);
        if !fns.is_empty() && self.chance(0.7) {
            let sig = self.pick(&fns).clone();
            let args = (0..sig.arity).map(|_| self.expr(depth.saturating_sub(1), &[], &fns, false)).collect();
            return Expr::Call(sig.name, args);
        }
        self.expr(depth, &[], &fns, false)
    }

    /// An expression with variables drawn from `scope`. `wide` enables
    /// extreme integers and improper cons cells.
    pub fn expr(&mut self, depth: usize, scope: &[Symbol], fns: &[FnSig], wide: bool) -> Expr {
        if depth == 0 || self.chance(0.25) {
            return self.leaf(scope, wide);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..100) {
            0..=24 => {
                let op = *self.pick(BINARY);
                Expr::call(op, vec![self.expr(d, scope, fns, wide), self.expr(d, scope, fns, wide)])
            }
            25..=39 if !fns.is_empty() => {
                let sig = self.pick(fns).clone();
                // Occasionally the wrong arity, which matches no clause.
                let arity = if self.chance(0.05) { sig.arity + 1 } else { sig.arity };
                Expr::Call(sig.name, (0..arity).map(|_| self.expr(d, scope, fns, wide)).collect())
            }
            40..=51 => {
                let n = self.rng.gen_range(2..=3);
                Expr::choice((0..n).map(|_| self.expr(d, scope, fns, wide)).collect())
            }
            52..=61 => Expr::if_then_else(
                self.condition(d, scope, fns, wide),
                self.expr(d, scope, fns, wide),
                self.expr(d, scope, fns, wide),
            ),
            62..=69 => {
                let len = self.rng.gen_range(0..=3);
                Expr::list((0..len).map(|_| self.expr(d, scope, fns, wide)).collect())
            }
            70..=75 if wide => {
                Expr::call("cons", vec![self.expr(d, scope, fns, wide), self.expr(d, scope, fns, wide)])
            }
            76..=83 => {
                let f = *self.pick(&["head", "tail"]);
                Expr::call(f, vec![self.expr(d, scope, fns, wide)])
            }
            84..=87 => Expr::call("fail", Vec::new()),
            88..=90 => Expr::call("undefined", Vec::new()),
            _ => self.leaf(scope, wide),
        }
    }

    fn condition(&mut self, depth: usize, scope: &[Symbol], fns: &[FnSig], wide: bool) -> Expr {
        if self.chance(0.8) {
            let op = *self.pick(&["==", "!=", "<", "<=", ">", ">="]);
            Expr::call(op, vec![self.expr(depth, scope, fns, wide), self.expr(depth, scope, fns, wide)])
        } else {
            self.expr(depth, scope, fns, wide)
        }
    }

    fn leaf(&mut self, scope: &[Symbol], wide: bool) -> Expr {
        match self.rng.gen_range(0..10) {
            0..=3 if !scope.is_empty() => Expr::Var(self.pick(scope).clone()),
            0..=5 => Expr::int(if wide { self.any_int() } else { self.small_int() }),
            _ => Expr::Lit(Literal::Atom(self.atom())),
        }
    }

    fn param(&mut self) -> Param {
        if self.chance(0.5) {
            Param::Const(Literal::Int(self.rng.gen_range(-1..=2)))
        } else {
            Param::Const(Literal::atom(self.pick(HEAD_ATOMS)))
        }
    }

    /// A program of at most `shape.max_clauses` clauses.
    pub fn program(&mut self, shape: &ProgramShape) -> Program {
        let n_fns = self.rng.gen_range(1..=shape.max_functions);
        let sigs: Vec<FnSig> = (0..n_fns)
            .map(|i| FnSig {
                name: Symbol::new(&format!("f{i}")),
                arity: self.rng.gen_range(0..=shape.max_arity),
            })
            .collect();
        let n_clauses = self.rng.gen_range(1..=shape.max_clauses);
        let mut clauses = Vec::with_capacity(n_clauses);
        for _ in 0..n_clauses {
            let idx = self.rng.gen_range(0..n_fns);
            let sig = &sigs[idx];
            let mut params = Vec::with_capacity(sig.arity);
            let mut scope: Vec<Symbol> = Vec::new();
            for slot in 0..sig.arity {
                match VARS.get(slot) {
                    Some(var) if self.chance(0.65) => {
                        let name = Symbol::new(var);
                        scope.push(name.clone());
                        params.push(Param::Var(name));
                    }
                    _ => params.push(self.param()),
                }
            }
            let callable: &[FnSig] = if shape.recursive { &sigs } else { &sigs[..idx] };
            let body = self.expr(shape.body_depth, &scope, callable, false);
            clauses.push(Clause { name: sig.name.clone(), params, body });
        }
        Program::new(clauses)
    }
}

/// Distinct name/arity pairs defined by `program`, in first-definition order.
pub fn signatures(program: &Program) -> Vec<FnSig> {
    let mut sigs: Vec<FnSig> = Vec::new();
    for clause in program.clauses() {
        let sig = FnSig { name: clause.name.clone(), arity: clause.arity() };
        if !sigs.contains(&sig) {
            sigs.push(sig);
        }
    }
    sigs
}
