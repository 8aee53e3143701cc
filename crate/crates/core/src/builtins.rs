//! Primitive functions. These are the sources of most soft failures.
//!
//! Integer division truncates toward zero and `mod` takes the sign of the
//! dividend. Comparisons other than `==`/`!=` accept integers only. Booleans
//! are the atoms `true` and `false`.

use crate::semantics::{FailReason, Failure, Outcome, Value};
use crate::syntax::Expr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinKind {
    Pure,
    Constructor,
}

#[derive(Clone, Copy)]
pub struct BuiltinEntry {
    pub name: &'static str,
    pub arity: usize,
    pub kind: BuiltinKind,
    apply: fn(&[Value]) -> Result<Value, FailReason>,
}

impl std::fmt::Debug for BuiltinEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

macro_rules! entry {
    ($name:expr, $arity:expr, $kind:ident, $f:expr) => {
        BuiltinEntry { name: $name, arity: $arity, kind: BuiltinKind::$kind, apply: $f }
    };
}

pub static TABLE: &[BuiltinEntry] = &[
    entry!("+", 2, Pure, |a| arith(a, i64::checked_add)),
    entry!("-", 2, Pure, |a| arith(a, i64::checked_sub)),
    entry!("*", 2, Pure, |a| arith(a, i64::checked_mul)),
    entry!("/", 2, Pure, |a| division(a, i64::checked_div)),
    entry!("mod", 2, Pure, |a| division(a, |x, y| Some(x.wrapping_rem(y)))),
    entry!("==", 2, Pure, |a| Ok(Value::boolean(a[0] == a[1]))),
    entry!("!=", 2, Pure, |a| Ok(Value::boolean(a[0] != a[1]))),
    entry!("<", 2, Pure, |a| compare(a, |x, y| x < y)),
    entry!("<=", 2, Pure, |a| compare(a, |x, y| x <= y)),
    entry!(">", 2, Pure, |a| compare(a, |x, y| x > y)),
    entry!(">=", 2, Pure, |a| compare(a, |x, y| x >= y)),
    entry!("cons", 2, Constructor, |a| Ok(Value::cons(a[0].clone(), a[1].clone()))),
    entry!("head", 1, Pure, |a| project(&a[0]).map(|(h, _)| h)),
    entry!("tail", 1, Pure, |a| project(&a[0]).map(|(_, t)| t)),
    entry!("fail", 0, Pure, |_| Err(FailReason::ExplicitFail)),
];

fn ints(args: &[Value]) -> Result<(i64, i64), FailReason> {
    match (&args[0], &args[1]) {
        (Value::Int(x), Value::Int(y)) => Ok((*x, *y)),
        _ => Err(FailReason::TypeMismatch),
    }
}

fn arith(args: &[Value], op: fn(i64, i64) -> Option<i64>) -> Result<Value, FailReason> {
    let (x, y) = ints(args)?;
    op(x, y).map(Value::Int).ok_or(FailReason::IntegerOverflow)
}

fn division(args: &[Value], op: fn(i64, i64) -> Option<i64>) -> Result<Value, FailReason> {
    let (x, y) = ints(args)?;
    if y == 0 {
        return Err(FailReason::DivideByZero);
    }
    // Only i64::MIN / -1 can overflow here.
    op(x, y).map(Value::Int).ok_or(FailReason::IntegerOverflow)
}

fn compare(args: &[Value], op: fn(i64, i64) -> bool) -> Result<Value, FailReason> {
    let (x, y) = ints(args)?;
    Ok(Value::boolean(op(x, y)))
}

fn project(v: &Value) -> Result<(Value, Value), FailReason> {
    match v {
        Value::Cons(cell) => Ok((cell.0.clone(), cell.1.clone())),
        _ => Err(FailReason::EmptyListAccess),
    }
}

/// Names user clauses may not define.
pub const RESERVED: &[&str] =
    &["+", "-", "*", "/", "mod", "==", "!=", "<", "<=", ">", ">=", "cons", "head", "tail", "fail"];

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

pub fn lookup(name: &str, arity: usize) -> Option<&'static BuiltinEntry> {
    TABLE.iter().find(|e| e.name == name && e.arity == arity)
}

/// Text of a call with evaluated arguments, e.g. `4 / 0` or `head(nil)`.
pub fn redex_text(name: &str, args: &[Value]) -> String {
    Expr::call(name, args.iter().map(Value::to_expr).collect()).to_string()
}

impl BuiltinEntry {
    pub fn apply(&self, args: &[Value]) -> Outcome {
        debug_assert_eq!(args.len(), self.arity);
        match (self.apply)(args) {
            Ok(v) => Outcome::Success(v),
            Err(reason) => Outcome::SoftFail(Failure::new(reason, redex_text(self.name, args))),
        }
    }
}

/// Applies a builtin. Unknown names or wrong arities fail with
/// `no-matching-clause`, as an undefined user function would.
pub fn apply_builtin(name: &str, args: &[Value]) -> Outcome {
    match lookup(name, args.len()) {
        Some(entry) => entry.apply(args),
        None => Outcome::SoftFail(Failure::new(FailReason::NoMatchingClause, redex_text(name, args))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(n: i64) -> Value {
        Value::Int(n)
    }

    fn reason(o: Outcome) -> Option<FailReason> {
        match o {
            Outcome::SoftFail(f) => Some(f.reason),
            _ => None,
        }
    }

    #[test]
    fn division_by_zero_is_soft() {
        assert_eq!(
            apply_builtin("/", &[int(4), int(0)]),
            Outcome::SoftFail(Failure::new(FailReason::DivideByZero, "4 / 0"))
        );
        assert_eq!(reason(apply_builtin("mod", &[int(4), int(0)])), Some(FailReason::DivideByZero));
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(apply_builtin("+", &[int(2), int(3)]), Outcome::Success(int(5)));
        assert_eq!(apply_builtin("/", &[int(7), int(2)]), Outcome::Success(int(3)));
        assert_eq!(apply_builtin("/", &[int(-7), int(2)]), Outcome::Success(int(-3)));
        assert_eq!(apply_builtin("mod", &[int(-7), int(2)]), Outcome::Success(int(-1)));
        assert_eq!(apply_builtin("mod", &[int(7), int(-2)]), Outcome::Success(int(1)));
    }

    #[test]
    fn truncated_division_grid() {
        // Oracle: floor division of magnitudes, sign applied afterwards.
        for x in -12i64..=12 {
            for y in (-5i64..=5).filter(|&y| y != 0) {
                let mag = x.abs() / y.abs();
                let q = if (x < 0) != (y < 0) { -mag } else { mag };
                let r = x - q * y;
                assert_eq!(apply_builtin("/", &[int(x), int(y)]), Outcome::Success(int(q)));
                assert_eq!(apply_builtin("mod", &[int(x), int(y)]), Outcome::Success(int(r)));
                assert!(r == 0 || (r < 0) == (x < 0));
            }
        }
    }

    #[test]
    fn overflow() {
        assert_eq!(reason(apply_builtin("+", &[int(i64::MAX), int(1)])), Some(FailReason::IntegerOverflow));
        assert_eq!(reason(apply_builtin("/", &[int(i64::MIN), int(-1)])), Some(FailReason::IntegerOverflow));
        assert_eq!(apply_builtin("mod", &[int(i64::MIN), int(-1)]), Outcome::Success(int(0)));
    }

    #[test]
    fn list_access() {
        assert_eq!(
            apply_builtin("head", &[Value::nil()]),
            Outcome::SoftFail(Failure::new(FailReason::EmptyListAccess, "head(nil)"))
        );
        assert_eq!(reason(apply_builtin("tail", &[int(3)])), Some(FailReason::EmptyListAccess));
        let l = Value::list([int(1), int(2)]);
        assert_eq!(apply_builtin("head", std::slice::from_ref(&l)), Outcome::Success(int(1)));
        assert_eq!(apply_builtin("tail", &[l]), Outcome::Success(Value::list([int(2)])));
    }

    #[test]
    fn type_mismatches() {
        assert_eq!(reason(apply_builtin("+", &[Value::atom("a"), int(1)])), Some(FailReason::TypeMismatch));
        assert_eq!(reason(apply_builtin("<", &[Value::nil(), Value::nil()])), Some(FailReason::TypeMismatch));
        assert_eq!(
            apply_builtin("==", &[Value::nil(), Value::nil()]),
            Outcome::Success(Value::boolean(true))
        );
    }

    #[test]
    fn fail_and_unknown() {
        assert_eq!(
            apply_builtin("fail", &[]),
            Outcome::SoftFail(Failure::new(FailReason::ExplicitFail, "fail"))
        );
        assert_eq!(reason(apply_builtin("head", &[int(1), int(2)])), Some(FailReason::NoMatchingClause));
    }

    fn value() -> impl Strategy<Value = Value> {
        let leaf = prop_oneof![
            any::<i64>().prop_map(Value::Int),
            prop::sample::select(vec!["nil", "true", "a", "infinity"]).prop_map(Value::atom),
        ];
        leaf.prop_recursive(3, 16, 2, |inner| (inner.clone(), inner).prop_map(|(h, t)| Value::cons(h, t)))
    }

    proptest! {
        #[test]
        fn arithmetic_matches_wide_oracle(x in any::<i64>(), y in any::<i64>()) {
            let cases: [(&str, i128); 3] = [
                ("+", x as i128 + y as i128),
                ("-", x as i128 - y as i128),
                ("*", x as i128 * y as i128),
            ];
            for (op, wide) in cases {
                let got = apply_builtin(op, &[int(x), int(y)]);
                match i64::try_from(wide) {
                    Ok(n) => prop_assert_eq!(got, Outcome::Success(int(n))),
                    Err(_) => prop_assert_eq!(reason(got), Some(FailReason::IntegerOverflow)),
                }
            }
            if y != 0 {
                let q = (x as i128) / (y as i128);
                let got = apply_builtin("/", &[int(x), int(y)]);
                match i64::try_from(q) {
                    Ok(n) => prop_assert_eq!(got, Outcome::Success(int(n))),
                    Err(_) => prop_assert_eq!(reason(got), Some(FailReason::IntegerOverflow)),
                }
            }
        }

        #[test]
        fn constructor_inverses(h in value(), t in value()) {
            let cell = Value::cons(h.clone(), t.clone());
            prop_assert_eq!(apply_builtin("head", std::slice::from_ref(&cell)), Outcome::Success(h));
            prop_assert_eq!(apply_builtin("tail", &[cell]), Outcome::Success(t));
        }

        #[test]
        fn equality_is_structural(a in value(), b in value(), c in value()) {
            let eq = |x: &Value, y: &Value| apply_builtin("==", &[x.clone(), y.clone()]) == Outcome::Success(Value::boolean(true));
            prop_assert!(eq(&a, &a));
            prop_assert_eq!(eq(&a, &b), eq(&b, &a));
            prop_assert_eq!(eq(&a, &b), a == b);
            if eq(&a, &b) && eq(&b, &c) {
                prop_assert!(eq(&a, &c));
            }
            prop_assert_eq!(
                apply_builtin("!=", &[a.clone(), b.clone()]),
                Outcome::Success(Value::boolean(a != b))
            );
        }

        #[test]
        fn builtins_never_hard_error(name in prop::sample::select(RESERVED.to_vec()), a in value(), b in value()) {
            let entry = TABLE.iter().find(|e| e.name == name).unwrap();
            let args: Vec<Value> = [a, b].into_iter().take(entry.arity).collect();
            prop_assert!(!matches!(entry.apply(&args), Outcome::HardError(_)));
        }
    }
}
