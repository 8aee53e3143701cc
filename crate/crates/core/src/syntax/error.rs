use thiserror::Error;

use super::lexer::Pos;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{pos}: unexpected character `{found}`")]
    Lex { pos: Pos, found: char },

    #[error("{pos}: integer literal out of range")]
    IntegerRange { pos: Pos },

    #[error("{pos}: expected {}, found {found}", .expected.join(" or "))]
    Parse { pos: Pos, expected: Vec<String>, found: String },

    #[error("{pos}: parameter `{name}` appears more than once in the head of `{clause}`")]
    DuplicateParam { pos: Pos, clause: String, name: String },

    #[error("{pos}: `{name}` is a builtin and cannot be defined by a clause")]
    ReservedName { pos: Pos, name: String },

    #[error("{pos}: expression nested too deeply")]
    TooDeep { pos: Pos },
}

impl SyntaxError {
    pub fn pos(&self) -> Pos {
        match self {
            SyntaxError::Lex { pos, .. }
            | SyntaxError::IntegerRange { pos }
            | SyntaxError::Parse { pos, .. }
            | SyntaxError::DuplicateParam { pos, .. }
            | SyntaxError::ReservedName { pos, .. }
            | SyntaxError::TooDeep { pos } => *pos,
        }
    }
}
