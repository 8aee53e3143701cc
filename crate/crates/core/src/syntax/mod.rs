//! Concrete syntax: tokens, the expression and clause trees, the parser with
//! name resolution, and the canonical printer.

mod ast;
mod error;
mod lexer;
mod parser;
mod pretty;

pub use ast::{is_atom_name, Clause, Expr, Literal, Param, Program, Symbol, CONSTANT_ATOMS, KEYWORDS};
pub use error::SyntaxError;
pub use lexer::{tokenize, Pos, Token, TokenKind};
pub use parser::{
    looks_like_clause, parse_expr, parse_expr_str, parse_program, parse_program_str, resolve_names,
};
pub use pretty::{pretty, Head};
