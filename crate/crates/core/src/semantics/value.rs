use std::fmt;
use std::sync::Arc;

use crate::syntax::{Expr, Literal, Symbol};

/// A ground result: integer, atom, or cons cell.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Atom(Symbol),
    Cons(Arc<(Value, Value)>),
}

impl Value {
    pub fn atom(name: &str) -> Self {
        Value::Atom(Symbol::new(name))
    }

    pub fn nil() -> Self {
        Value::atom("nil")
    }

    pub fn boolean(b: bool) -> Self {
        Value::atom(if b { "true" } else { "false" })
    }

    pub fn cons(head: Value, tail: Value) -> Self {
        Value::Cons(Arc::new((head, tail)))
    }

    pub fn list(items: impl IntoIterator<Item = Value>) -> Self {
        let items: Vec<Value> = items.into_iter().collect();
        items.into_iter().rev().fold(Value::nil(), |tail, head| Value::cons(head, tail))
    }

    pub fn is_atom(&self, name: &str) -> bool {
        matches!(self, Value::Atom(a) if a.as_str() == name)
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    /// Elements of a proper list, or `None` for anything else.
    pub fn to_vec(&self) -> Option<Vec<Value>> {
        let mut items = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Value::Cons(cell) => {
                    items.push(cell.0.clone());
                    cur = &cell.1;
                }
                v if v.is_atom("nil") => return Some(items),
                _ => return None,
            }
        }
    }

    /// The ground expression denoting this value; cons cells become `cons` calls.
    pub fn to_expr(&self) -> Expr {
        let mut spine = Vec::new();
        let mut cur = self;
        while let Value::Cons(cell) = cur {
            spine.push(cell.0.to_expr());
            cur = &cell.1;
        }
        let last = match cur {
            Value::Int(n) => Expr::int(*n),
            Value::Atom(a) => Expr::Lit(Literal::Atom(a.clone())),
            Value::Cons(_) => unreachable!(),
        };
        spine.into_iter().rev().fold(last, |tail, head| Expr::call("cons", vec![head, tail]))
    }
}

impl From<&Literal> for Value {
    fn from(lit: &Literal) -> Self {
        match lit {
            Literal::Int(n) => Value::Int(*n),
            Literal::Atom(a) => Value::Atom(a.clone()),
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Atom(a) => write!(f, "{a}"),
            Value::Cons(cell) => match self.to_vec() {
                Some(items) => {
                    f.write_str("[")?;
                    for (i, item) in items.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{item}")?;
                    }
                    f.write_str("]")
                }
                None => write!(f, "cons({}, {})", cell.0, cell.1),
            },
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
