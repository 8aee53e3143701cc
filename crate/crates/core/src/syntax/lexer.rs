use std::fmt;

use super::error::SyntaxError;
use super::Symbol;

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(Symbol),
    /// Unsigned magnitude; sign and range are settled by the parser.
    Int(u64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Assign,
    ChoiceOp,
    Plus,
    Minus,
    Star,
    Slash,
    Mod,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    If,
    Then,
    Else,
    Fail,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            TokenKind::Int(n) => format!("integer `{n}`"),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            TokenKind::Ident(_) | TokenKind::Int(_) => "",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Comma => ",",
            TokenKind::Semi => ";",
            TokenKind::Assign => "=",
            TokenKind::ChoiceOp => "++",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Slash => "/",
            TokenKind::Mod => "mod",
            TokenKind::EqEq => "==",
            TokenKind::NotEq => "!=",
            TokenKind::Lt => "<",
            TokenKind::Le => "<=",
            TokenKind::Gt => ">",
            TokenKind::Ge => ">=",
            TokenKind::If => "if",
            TokenKind::Then => "then",
            TokenKind::Else => "else",
            TokenKind::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn eat(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.bump();
            true
        } else {
            false
        }
    }
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut cursor = Cursor { chars: source.chars().peekable(), pos: Pos { line: 1, col: 1 } };
    let mut tokens = Vec::new();

    while let Some(c) = cursor.peek() {
        let pos = cursor.pos;
        if c.is_whitespace() {
            cursor.bump();
            continue;
        }
        if c == '#' {
            while let Some(c) = cursor.peek() {
                if c == '\n' {
                    break;
                }
                cursor.bump();
            }
            continue;
        }

        let kind = if c.is_ascii_lowercase() {
            let mut name = String::new();
            while let Some(c) = cursor.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    name.push(c);
                    cursor.bump();
                } else {
                    break;
                }
            }
            match name.as_str() {
                "if" => TokenKind::If,
                "then" => TokenKind::Then,
                "else" => TokenKind::Else,
                "fail" => TokenKind::Fail,
                "mod" => TokenKind::Mod,
                _ => TokenKind::Ident(Symbol::new(&name)),
            }
        } else if c.is_ascii_digit() {
            let mut value: u64 = 0;
            while let Some(d) = cursor.peek().and_then(|c| c.to_digit(10)) {
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(u64::from(d)))
                    .ok_or(SyntaxError::IntegerRange { pos })?;
                cursor.bump();
            }
            TokenKind::Int(value)
        } else {
            cursor.bump();
            match c {
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '[' => TokenKind::LBracket,
                ']' => TokenKind::RBracket,
                ',' => TokenKind::Comma,
                ';' => TokenKind::Semi,
                '*' => TokenKind::Star,
                '/' => TokenKind::Slash,
                '-' => TokenKind::Minus,
                '+' if cursor.eat('+') => TokenKind::ChoiceOp,
                '+' => TokenKind::Plus,
                '=' if cursor.eat('=') => TokenKind::EqEq,
                '=' => TokenKind::Assign,
                '!' if cursor.eat('=') => TokenKind::NotEq,
                '<' if cursor.eat('=') => TokenKind::Le,
                '<' => TokenKind::Lt,
                '>' if cursor.eat('=') => TokenKind::Ge,
                '>' => TokenKind::Gt,
                other => return Err(SyntaxError::Lex { pos, found: other }),
            }
        };
        tokens.push(Token { kind, pos });
    }
    Ok(tokens)
}

/// Position just past the last character, used for end-of-input errors.
pub fn end_pos(source: &str) -> Pos {
    let mut pos = Pos { line: 1, col: 1 };
    for c in source.chars() {
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
        } else {
            pos.col += 1;
        }
    }
    pos
}
