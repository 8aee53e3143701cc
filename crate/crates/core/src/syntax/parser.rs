use super::ast::{Clause, Expr, Literal, Param, Program, Symbol, CONSTANT_ATOMS};
use super::error::SyntaxError;
use super::lexer::{end_pos, tokenize, Pos, Token, TokenKind};
use crate::builtins;

const MAX_NESTING: usize = 10_000;

pub fn parse_program(tokens: &[Token]) -> Result<Program, SyntaxError> {
    Parser::new(tokens, None).program()
}

/// Parses a single closed expression; every bare identifier becomes an atom.
pub fn parse_expr(tokens: &[Token]) -> Result<Expr, SyntaxError> {
    let mut parser = Parser::new(tokens, None);
    let expr = parser.expr()?;
    parser.expect_end()?;
    Ok(resolve_expr(expr, &[]))
}

pub fn parse_program_str(source: &str) -> Result<Program, SyntaxError> {
    let tokens = tokenize(source)?;
    Parser::new(&tokens, Some(end_pos(source))).program()
}

pub fn parse_expr_str(source: &str) -> Result<Expr, SyntaxError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser::new(&tokens, Some(end_pos(source)));
    let expr = parser.expr()?;
    parser.expect_end()?;
    Ok(resolve_expr(expr, &[]))
}

/// Rewrites body identifiers: head-bound names stay variables, everything
/// else becomes an atom.
pub fn resolve_names(clause: Clause) -> Clause {
    let bound: Vec<Symbol> = clause.param_names().cloned().collect();
    let body = resolve_expr(clause.body, &bound);
    Clause { body, ..clause }
}

fn resolve_expr(expr: Expr, bound: &[Symbol]) -> Expr {
    match expr {
        Expr::Var(name) if bound.contains(&name) => Expr::Var(name),
        Expr::Var(name) => Expr::Lit(Literal::Atom(name)),
        Expr::Lit(_) => expr,
        Expr::Call(name, args) => {
            Expr::Call(name, args.into_iter().map(|a| resolve_expr(a, bound)).collect())
        }
        Expr::Choice(branches) => {
            Expr::Choice(branches.into_iter().map(|b| resolve_expr(b, bound)).collect())
        }
        Expr::If(c, t, e) => {
            Expr::if_then_else(resolve_expr(*c, bound), resolve_expr(*t, bound), resolve_expr(*e, bound))
        }
    }
}

/// True when the tokens look like `name(...) = ...` with the `=` outside
/// any brackets, i.e. a clause definition rather than an expression.
pub fn looks_like_clause(tokens: &[Token]) -> bool {
    if !matches!(
        (tokens.first(), tokens.get(1)),
        (Some(Token { kind: TokenKind::Ident(_), .. }), Some(Token { kind: TokenKind::LParen, .. }))
    ) {
        return false;
    }
    let mut depth = 0i32;
    for tok in tokens {
        match tok.kind {
            TokenKind::LParen | TokenKind::LBracket => depth += 1,
            TokenKind::RParen | TokenKind::RBracket => depth -= 1,
            TokenKind::Assign if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

struct Parser<'t> {
    tokens: &'t [Token],
    idx: usize,
    eof: Pos,
    nesting: usize,
}

impl<'t> Parser<'t> {
    fn new(tokens: &'t [Token], eof: Option<Pos>) -> Self {
        let eof = eof.unwrap_or_else(|| match tokens.last() {
            Some(t) => Pos { line: t.pos.line, col: t.pos.col + 1 },
            None => Pos { line: 1, col: 1 },
        });
        Parser { tokens, idx: 0, eof, nesting: 0 }
    }

    fn peek(&self) -> Option<&'t TokenKind> {
        self.tokens.get(self.idx).map(|t| &t.kind)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t TokenKind> {
        self.tokens.get(self.idx + offset).map(|t| &t.kind)
    }

    fn pos(&self) -> Pos {
        self.tokens.get(self.idx).map_or(self.eof, |t| t.pos)
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let tok = self.tokens.get(self.idx);
        if tok.is_some() {
            self.idx += 1;
        }
        tok
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().map_or_else(|| "end of input".to_string(), TokenKind::describe),
        })
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<(), SyntaxError> {
        if self.eat(&kind) {
            Ok(())
        } else {
            self.error(&[what])
        }
    }

    fn expect_end(&self) -> Result<(), SyntaxError> {
        if self.peek().is_none() {
            Ok(())
        } else {
            self.error(&["end of input"])
        }
    }

    fn ident(&mut self, what: &str) -> Result<(Symbol, Pos), SyntaxError> {
        let pos = self.pos();
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                self.idx += 1;
                Ok((name.clone(), pos))
            }
            _ => self.error(&[what]),
        }
    }

    fn program(mut self) -> Result<Program, SyntaxError> {
        let mut program = Program::default();
        while self.peek().is_some() {
            program.push(self.clause()?);
            if !self.eat(&TokenKind::Semi) {
                self.expect_end().or_else(|_| self.error(&["`;`", "end of input"]))?;
            }
        }
        Ok(program)
    }

    fn clause(&mut self) -> Result<Clause, SyntaxError> {
        let (name, name_pos) = self.ident("clause name")?;
        if builtins::is_reserved(&name) {
            return Err(SyntaxError::ReservedName { pos: name_pos, name: name.to_string() });
        }
        self.expect(TokenKind::LParen, "`(`")?;
        let mut params = Vec::new();
        if !self.eat(&TokenKind::RParen) {
            loop {
                let pos = self.pos();
                let param = self.param()?;
                if let Param::Var(var) = &param {
                    if params.contains(&param) {
                        return Err(SyntaxError::DuplicateParam {
                            pos,
                            clause: name.to_string(),
                            name: var.to_string(),
                        });
                    }
                }
                params.push(param);
                if self.eat(&TokenKind::RParen) {
                    break;
                }
                self.expect(TokenKind::Comma, "`,` or `)`")?;
            }
        }
        self.expect(TokenKind::Assign, "`=`")?;
        let body = self.expr()?;
        Ok(resolve_names(Clause { name, params, body }))
    }

    fn param(&mut self) -> Result<Param, SyntaxError> {
        let pos = self.pos();
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                self.idx += 1;
                if CONSTANT_ATOMS.contains(&name.as_str()) {
                    Ok(Param::Const(Literal::Atom(name.clone())))
                } else {
                    Ok(Param::Var(name.clone()))
                }
            }
            Some(TokenKind::Int(n)) => {
                self.idx += 1;
                Ok(Param::Const(Literal::Int(positive(*n, pos)?)))
            }
            Some(TokenKind::Minus) => match self.peek_at(1) {
                Some(TokenKind::Int(n)) => {
                    self.idx += 2;
                    Ok(Param::Const(Literal::Int(negative(*n, pos)?)))
                }
                _ => {
                    self.idx += 1;
                    self.error(&["integer"])
                }
            },
            _ => self.error(&["parameter"]),
        }
    }

    pub fn expr(&mut self) -> Result<Expr, SyntaxError> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return Err(SyntaxError::TooDeep { pos: self.pos() });
        }
        let result = stacker::maybe_grow(32 * 1024, 1024 * 1024, || self.choice());
        self.nesting -= 1;
        result
    }

    fn choice(&mut self) -> Result<Expr, SyntaxError> {
        let mut branches = vec![self.comparison()?];
        while self.eat(&TokenKind::ChoiceOp) {
            branches.push(self.comparison()?);
        }
        Ok(Expr::choice(branches))
    }

    fn comparison(&mut self) -> Result<Expr, SyntaxError> {
        let lhs = self.additive()?;
        let op = match self.peek() {
            Some(TokenKind::EqEq) => "==",
            Some(TokenKind::NotEq) => "!=",
            Some(TokenKind::Lt) => "<",
            Some(TokenKind::Le) => "<=",
            Some(TokenKind::Gt) => ">",
            Some(TokenKind::Ge) => ">=",
            _ => return Ok(lhs),
        };
        self.idx += 1;
        let rhs = self.additive()?;
        Ok(Expr::call(op, vec![lhs, rhs]))
    }

    fn additive(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Plus) => "+",
                Some(TokenKind::Minus) => "-",
                _ => return Ok(lhs),
            };
            self.idx += 1;
            let rhs = self.multiplicative()?;
            lhs = Expr::call(op, vec![lhs, rhs]);
        }
    }

    fn multiplicative(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Star) => "*",
                Some(TokenKind::Slash) => "/",
                Some(TokenKind::Mod) => "mod",
                _ => return Ok(lhs),
            };
            self.idx += 1;
            let rhs = self.unary()?;
            lhs = Expr::call(op, vec![lhs, rhs]);
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.pos();
        if !self.eat(&TokenKind::Minus) {
            return self.primary();
        }
        if let Some(TokenKind::Int(n)) = self.peek() {
            self.idx += 1;
            return Ok(Expr::int(negative(*n, pos)?));
        }
        let operand = self.primary()?;
        Ok(Expr::call("-", vec![Expr::int(0), operand]))
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.pos();
        let Some(tok) = self.bump() else {
            return self.error(&["expression"]);
        };
        match &tok.kind {
            TokenKind::Int(n) => Ok(Expr::int(positive(*n, pos)?)),
            TokenKind::Ident(name) => {
                if !self.eat(&TokenKind::LParen) {
                    return Ok(Expr::Var(name.clone()));
                }
                let args = self.sequence(TokenKind::RParen, "`)`")?;
                Ok(Expr::Call(name.clone(), args))
            }
            TokenKind::Fail => Ok(Expr::call("fail", Vec::new())),
            TokenKind::LBracket => Ok(Expr::list(self.sequence(TokenKind::RBracket, "`]`")?)),
            TokenKind::If => {
                let cond = self.expr()?;
                self.expect(TokenKind::Then, "`then`")?;
                let then = self.expr()?;
                self.expect(TokenKind::Else, "`else`")?;
                let otherwise = self.expr()?;
                Ok(Expr::if_then_else(cond, then, otherwise))
            }
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            _ => {
                self.idx -= 1;
                self.error(&["expression"])
            }
        }
    }

    /// Comma-separated expressions up to `close`; the opener is already consumed.
    fn sequence(&mut self, close: TokenKind, what: &str) -> Result<Vec<Expr>, SyntaxError> {
        let mut items = Vec::new();
        if self.eat(&close) {
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            if self.eat(&close) {
                return Ok(items);
            }
            let expected = format!("`,` or {what}");
            self.expect(TokenKind::Comma, &expected)?;
        }
    }
}

fn positive(n: u64, pos: Pos) -> Result<i64, SyntaxError> {
    i64::try_from(n).map_err(|_| SyntaxError::IntegerRange { pos })
}

fn negative(n: u64, pos: Pos) -> Result<i64, SyntaxError> {
    0i64.checked_sub_unsigned(n).ok_or(SyntaxError::IntegerRange { pos })
}
