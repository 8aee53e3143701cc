use super::{HardError, Value};
use crate::syntax::{Clause, Expr, Param, Symbol};

/// Bindings from head variables to argument values, in head order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution(Vec<(Symbol, Value)>);

impl Substitution {
    pub fn new() -> Self {
        Substitution(Vec::new())
    }

    pub fn bind(&mut self, name: Symbol, value: Value) {
        self.0.push((name, value));
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.0.iter().find(|(n, _)| n.as_str() == name).map(|(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Value)> {
        self.0.iter().map(|(n, v)| (n, v))
    }
}

impl FromIterator<(Symbol, Value)> for Substitution {
    fn from_iter<T: IntoIterator<Item = (Symbol, Value)>>(iter: T) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

/// Matches call arguments against a clause head. Variables bind; constants
/// must equal the argument.
pub fn match_head(clause: &Clause, args: &[Value]) -> Option<Substitution> {
    if clause.params.len() != args.len() {
        return None;
    }
    let mut subst = Substitution::new();
    for (param, arg) in clause.params.iter().zip(args) {
        match param {
            Param::Var(name) => subst.bind(name.clone(), arg.clone()),
            Param::Const(lit) => {
                if Value::from(lit) != *arg {
                    return None;
                }
            }
        }
    }
    Some(subst)
}

/// Replaces every variable with the expression form of its bound value.
pub fn substitute(expr: &Expr, subst: &Substitution) -> Result<Expr, HardError> {
    Ok(match expr {
        Expr::Lit(_) => expr.clone(),
        Expr::Var(name) => match subst.get(name) {
            Some(v) => v.to_expr(),
            None => return Err(HardError::unbound_variable(name, name.as_str())),
        },
        Expr::Call(name, args) => {
            Expr::Call(name.clone(), args.iter().map(|a| substitute(a, subst)).collect::<Result<_, _>>()?)
        }
        Expr::Choice(branches) => {
            Expr::Choice(branches.iter().map(|b| substitute(b, subst)).collect::<Result<_, _>>()?)
        }
        Expr::If(c, t, e) => {
            Expr::if_then_else(substitute(c, subst)?, substitute(t, subst)?, substitute(e, subst)?)
        }
    })
}
