use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

/// An identifier: function name, variable name, or atom.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Deref for Symbol {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(name: &str) -> Self {
        Symbol::new(name)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", &*self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Words the lexer turns into keyword tokens; never valid as atoms or names.
pub const KEYWORDS: &[&str] = &["if", "then", "else", "fail", "mod"];

/// Checks the atom shape `[a-z][a-zA-Z0-9_]*` and that the name is not a keyword.
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&name)
}

/// Atoms that are always constants, even in clause heads.
pub const CONSTANT_ATOMS: &[&str] = &["nil", "true", "false"];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Int(i64),
    Atom(Symbol),
}

impl Literal {
    pub fn atom(name: &str) -> Self {
        Literal::Atom(Symbol::new(name))
    }
}

/// Expressions. List literals are desugared by the parser into `cons`/`nil`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Lit(Literal),
    Var(Symbol),
    Call(Symbol, Vec<Expr>),
    /// Sequential choice; at least two branches, none of them a `Choice`
    /// when built through [`Expr::choice`].
    Choice(Vec<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Self {
        Expr::Lit(Literal::Int(n))
    }

    pub fn atom(name: &str) -> Self {
        Expr::Lit(Literal::atom(name))
    }

    pub fn var(name: &str) -> Self {
        Expr::Var(Symbol::new(name))
    }

    pub fn call(name: &str, args: Vec<Expr>) -> Self {
        Expr::Call(Symbol::new(name), args)
    }

    pub fn if_then_else(cond: Expr, then: Expr, otherwise: Expr) -> Self {
        Expr::If(Box::new(cond), Box::new(then), Box::new(otherwise))
    }

    /// Builds an n-ary choice, splicing nested choices into one branch list.
    /// A single branch is returned unwrapped.
    pub fn choice(branches: Vec<Expr>) -> Self {
        let mut flat = Vec::with_capacity(branches.len());
        for branch in branches {
            match branch {
                Expr::Choice(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Expr::Choice(flat)
        }
    }

    /// Builds the `cons`/`nil` chain for a list literal.
    pub fn list(elems: Vec<Expr>) -> Self {
        elems.into_iter().rev().fold(Expr::atom("nil"), |tail, head| Expr::call("cons", vec![head, tail]))
    }

    /// True when no `Choice` node has a `Choice` as a direct child.
    pub fn is_choice_flat(&self) -> bool {
        match self {
            Expr::Lit(_) | Expr::Var(_) => true,
            Expr::Call(_, args) => args.iter().all(Expr::is_choice_flat),
            Expr::Choice(branches) => {
                branches.iter().all(|b| !matches!(b, Expr::Choice(_)) && b.is_choice_flat())
            }
            Expr::If(c, t, e) => c.is_choice_flat() && t.is_choice_flat() && e.is_choice_flat(),
        }
    }

    /// Calls `f` on every variable occurrence.
    pub fn for_each_var(&self, f: &mut impl FnMut(&Symbol)) {
        match self {
            Expr::Lit(_) => {}
            Expr::Var(name) => f(name),
            Expr::Call(_, args) | Expr::Choice(args) => {
                for arg in args {
                    arg.for_each_var(f);
                }
            }
            Expr::If(c, t, e) => {
                c.for_each_var(f);
                t.for_each_var(f);
                e.for_each_var(f);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        let mut closed = true;
        self.for_each_var(&mut |_| closed = false);
        closed
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    Var(Symbol),
    Const(Literal),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub name: Symbol,
    pub params: Vec<Param>,
    pub body: Expr,
}

impl Clause {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn has_var_params(&self) -> bool {
        self.params.iter().any(|p| matches!(p, Param::Var(_)))
    }

    pub fn param_names(&self) -> impl Iterator<Item = &Symbol> {
        self.params.iter().filter_map(|p| match p {
            Param::Var(name) => Some(name),
            Param::Const(_) => None,
        })
    }
}

/// An ordered list of clauses with a lookup index by name and arity.
#[derive(Clone, Debug, Default)]
pub struct Program {
    clauses: Vec<Clause>,
    index: HashMap<(Symbol, usize), Vec<usize>>,
}

impl Program {
    pub fn new(clauses: Vec<Clause>) -> Self {
        let mut program = Program::default();
        program.extend(clauses);
        program
    }

    pub fn push(&mut self, clause: Clause) {
        let key = (clause.name.clone(), clause.arity());
        self.index.entry(key).or_default().push(self.clauses.len());
        self.clauses.push(clause);
    }

    pub fn extend(&mut self, clauses: impl IntoIterator<Item = Clause>) {
        for clause in clauses {
            self.push(clause);
        }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Clauses for `name/arity` in source order.
    pub fn candidates(&self, name: &str, arity: usize) -> Vec<&Clause> {
        // Keyed lookup needs an owned Symbol; the map is small.
        match self.index.get(&(Symbol::new(name), arity)) {
            Some(ids) => ids.iter().map(|&i| &self.clauses[i]).collect(),
            None => Vec::new(),
        }
    }
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.clauses == other.clauses
    }
}

impl Eq for Program {}
