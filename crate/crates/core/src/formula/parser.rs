//! Recursive-descent parser for the formula text grammar:
//!
//! ```text
//! formula := xor
//! xor     := unary ( "+" unary )*
//! unary   := "<" INT ">" unary | "[" INT "]" unary | atom
//! atom    := "top" | "bot" | IDENT | "(" formula ")"
//! ```
//!
//! `#` starts a line comment. `+` is left-associative; modal prefixes bind
//! tighter than `+`. Modality indices start at 1.

use super::Formula;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Int(u64),
    Ident(String),
    Top,
    Bot,
    Eof,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn next_token(&mut self) -> Result<Spanned> {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let (line, column) = (self.line, self.column);
        let spanned = |tok| Spanned { tok, line, column };
        let Some(&c) = self.chars.peek() else {
            return Ok(spanned(Tok::Eof));
        };
        let tok = match c {
            '+' => {
                self.bump();
                Tok::Plus
            }
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            '<' => {
                self.bump();
                Tok::LAngle
            }
            '>' => {
                self.bump();
                Tok::RAngle
            }
            '[' => {
                self.bump();
                Tok::LBracket
            }
            ']' => {
                self.bump();
                Tok::RBracket
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&d) = self.chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(v as u64))
                            .ok_or_else(|| self.err("integer too large"))?;
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Int(n)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                match ident.as_str() {
                    "top" => Tok::Top,
                    "bot" => Tok::Bot,
                    _ => Tok::Ident(ident),
                }
            }
            other => return Err(self.err(format!("unexpected character `{other}`"))),
        };
        Ok(spanned(tok))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Spanned,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self> {
        let mut lexer = Lexer::new(text);
        let current = lexer.next_token()?;
        Ok(Parser { lexer, current })
    }

    fn advance(&mut self) -> Result<()> {
        self.current = self.lexer.next_token()?;
        Ok(())
    }

    fn err_here(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.current.line,
            column: self.current.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.current.tok == tok {
            self.advance()
        } else {
            Err(self.err_here(format!("expected {what}")))
        }
    }

    fn parse_xor(&mut self) -> Result<Formula> {
        let mut acc = self.parse_unary()?;
        while self.current.tok == Tok::Plus {
            self.advance()?;
            let rhs = self.parse_unary()?;
            acc = Formula::xor(acc, rhs);
        }
        Ok(acc)
    }

    fn modality_index(&mut self) -> Result<u32> {
        match self.current.tok {
            Tok::Int(n) if n >= 1 && n <= u32::MAX as u64 => {
                self.advance()?;
                Ok(n as u32)
            }
            Tok::Int(0) => Err(self.err_here("modality index must be at least 1")),
            _ => Err(self.err_here("expected modality index")),
        }
    }

    fn parse_unary(&mut self) -> Result<Formula> {
        match self.current.tok {
            Tok::LAngle => {
                self.advance()?;
                let i = self.modality_index()?;
                self.expect(Tok::RAngle, "`>`")?;
                Ok(Formula::dia(i, self.parse_unary()?))
            }
            Tok::LBracket => {
                self.advance()?;
                let i = self.modality_index()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(Formula::box_(i, self.parse_unary()?))
            }
            _ => self.parse_atom(),
        }
    }

    fn parse_atom(&mut self) -> Result<Formula> {
        match std::mem::replace(&mut self.current.tok, Tok::Eof) {
            Tok::Top => {
                self.advance()?;
                Ok(Formula::top())
            }
            Tok::Bot => {
                self.advance()?;
                Ok(Formula::bot())
            }
            Tok::Ident(name) => {
                self.advance()?;
                Ok(Formula::prop(name))
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.parse_xor()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            tok => {
                self.current.tok = tok;
                Err(self.err_here("expected `top`, `bot`, an identifier, a modality, or `(`"))
            }
        }
    }
}

/// Parse formula text into an AST. See the module docs for the grammar.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut parser = Parser::new(text)?;
    let f = parser.parse_xor()?;
    if parser.current.tok != Tok::Eof {
        return Err(parser.err_here("trailing input after formula"));
    }
    Ok(f)
}
