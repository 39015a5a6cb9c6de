//! Recursive-descent parser for the formula language.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" or)*
//! or      := and ("or" and)*
//! and     := unary ("and" unary)*
//! unary   := "not" unary | quant | atom | "(" formula ")"
//! quant   := ("forall" | "exists") IDENT ["in" IDENT] "(" formula ")"
//! atom    := IDENT ("=" | "in") IDENT
//! ```
//!
//! `and`, `or` and `<->` associate to the left, `->` to the right. Unicode
//! aliases: `∀ ∃ ∈ ∧ ∨ ¬ → ↔`.

use std::fmt;

use super::{Formula, Var};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at {line}:{column} near {found:?}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Equals,
    In,
    And,
    Or,
    Not,
    Implies,
    Iff,
    Forall,
    Exists,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => s.as_str(),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Equals => "=",
            Tok::In => "in",
            Tok::And => "and",
            Tok::Or => "or",
            Tok::Not => "not",
            Tok::Implies => "->",
            Tok::Iff => "<->",
            Tok::Forall => "forall",
            Tok::Exists => "exists",
            Tok::End => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Equals),
            '∀' => Some(Tok::Forall),
            '∃' => Some(Tok::Exists),
            '∈' => Some(Tok::In),
            '∧' => Some(Tok::And),
            '∨' => Some(Tok::Or),
            '¬' => Some(Tok::Not),
            '→' => Some(Tok::Implies),
            '↔' => Some(Tok::Iff),
            _ => None,
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: tl, column: tc });
        if let Some(tok) = single {
            bump(&mut chars);
            push(&mut out, tok);
        } else if c == '-' {
            bump(&mut chars);
            if chars.peek() == Some(&'>') {
                bump(&mut chars);
                push(&mut out, Tok::Implies);
            } else {
                return Err(ParseError {
                    line: tl,
                    column: tc,
                    found: "-".into(),
                    message: "expected '->'".into(),
                });
            }
        } else if c == '<' {
            bump(&mut chars);
            let ok = chars.peek() == Some(&'-') && {
                bump(&mut chars);
                chars.peek() == Some(&'>')
            };
            if !ok {
                return Err(ParseError {
                    line: tl,
                    column: tc,
                    found: "<".into(),
                    message: "expected '<->'".into(),
                });
            }
            bump(&mut chars);
            push(&mut out, Tok::Iff);
        } else if c.is_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' || c == '\'' {
                    word.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            let tok = match word.as_str() {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "in" => Tok::In,
                "and" => Tok::And,
                "or" => Tok::Or,
                "not" => Tok::Not,
                _ => Tok::Ident(word),
            };
            push(&mut out, tok);
        } else {
            return Err(ParseError {
                line: tl,
                column: tc,
                found: c.to_string(),
                message: "unexpected character".into(),
            });
        }
    }
    out.push(Spanned { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn advance(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            found: t.tok.to_string(),
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.advance();
            Ok(())
        } else {
            Err(self.error_here(format!("expected '{want}'")))
        }
    }

    fn ident(&mut self) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.advance();
                Ok(Var::new(name))
            }
            _ => Err(self.error_here("expected a variable name")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.advance();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.advance();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.advance();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.advance();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => self.quant(),
            Tok::LParen => {
                self.advance();
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(_) => self.atom(),
            _ => Err(self.error_here("expected a formula")),
        }
    }

    fn quant(&mut self) -> Result<Formula, ParseError> {
        let universal = self.advance().tok == Tok::Forall;
        let var = self.ident()?;
        let bound = if *self.peek() == Tok::In {
            self.advance();
            let at = self.pos;
            let y = self.ident()?;
            if y == var {
                self.pos = at;
                return Err(self.error_here(format!(
                    "bounded quantifier variable '{var}' may not also be its bound"
                )));
            }
            Some(y)
        } else {
            None
        };
        self.expect(Tok::LParen)?;
        let body = self.formula()?;
        self.expect(Tok::RParen)?;
        Ok(match (universal, bound) {
            (true, None) => Formula::forall(var, body),
            (false, None) => Formula::exists(var, body),
            (true, Some(y)) => Formula::bounded_forall(var, y, body),
            (false, Some(y)) => Formula::bounded_exists(var, y, body),
        })
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let a = self.ident()?;
        match self.peek() {
            Tok::Equals => {
                self.advance();
                Ok(Formula::Eq(a, self.ident()?))
            }
            Tok::In => {
                self.advance();
                Ok(Formula::Mem(a, self.ident()?))
            }
            _ => Err(self.error_here("expected '=' or 'in'")),
        }
    }
}

/// Parses `text` into a [`Formula`]. Free variables are allowed.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let phi = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.error_here("unexpected trailing input"));
    }
    Ok(phi)
}
