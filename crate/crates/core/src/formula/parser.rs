//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Precedence, loosest first: `->` (right), `|`, `&`, `U` (right), then the
//! prefix operators `!`, `X`, `F`, `G`. Atoms are `true`, `false`, `B(a)`
//! and `N(a,b)`.

use alloc::string::{String, ToString};
use core::fmt;

use super::Formula;
use crate::model::AgentId;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at position {position}")]
pub struct FormulaError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: FormulaErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    UnknownOperator(String),
    Expected(&'static str, String),
    InvalidAgent(String),
}

impl fmt::Display for FormulaErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            FormulaErrorKind::UnexpectedEnd => f.write_str("unexpected end of formula"),
            FormulaErrorKind::UnknownOperator(w) => write!(f, "unknown operator `{w}`"),
            FormulaErrorKind::Expected(what, found) => write!(f, "expected {what}, found {found}"),
            FormulaErrorKind::InvalidAgent(w) => write!(f, "invalid agent name `{w}`"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept `MAJ(a)` and `MAJ^k(a)` atoms, as printed by translation.
    pub allow_majority: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token<'a> {
    Word(&'a str),
    LParen,
    RParen,
    Comma,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Caret,
    End,
}

impl fmt::Display for Token<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Word(w) => write!(f, "`{w}`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Comma => f.write_str("`,`"),
            Token::Bang => f.write_str("`!`"),
            Token::Amp => f.write_str("`&`"),
            Token::Pipe => f.write_str("`|`"),
            Token::Arrow => f.write_str("`->`"),
            Token::Caret => f.write_str("`^`"),
            Token::End => f.write_str("end of formula"),
        }
    }
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the next token and its start offset.
    fn next(&mut self) -> Result<(Token<'a>, usize), FormulaError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Token::End, start));
        };
        let simple = match c {
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            ',' => Some(Token::Comma),
            '!' => Some(Token::Bang),
            '&' => Some(Token::Amp),
            '|' => Some(Token::Pipe),
            '^' => Some(Token::Caret),
            _ => None,
        };
        if let Some(tok) = simple {
            self.pos += 1;
            return Ok((tok, start));
        }
        if rest.starts_with("->") {
            self.pos += 2;
            return Ok((Token::Arrow, start));
        }
        let len = rest.bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
        if len == 0 {
            return Err(FormulaError { position: start, kind: FormulaErrorKind::UnexpectedChar(c) });
        }
        self.pos += len;
        let word = &rest[..len];
        Ok((Token::Word(word), start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<(Token<'a>, usize)>,
    options: ParseOptions,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<&(Token<'a>, usize), FormulaError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next()?);
        }
        Ok(self.peeked.as_ref().expect("just filled"))
    }

    fn bump(&mut self) -> Result<(Token<'a>, usize), FormulaError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next(),
        }
    }

    fn expect(&mut self, want: Token<'static>, what: &'static str) -> Result<(), FormulaError> {
        let (tok, pos) = self.bump()?;
        if tok == want {
            Ok(())
        } else {
            Err(unexpected(tok, pos, what))
        }
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        if self.peek()?.0 == Token::Arrow {
            self.bump()?;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.conjunction()?;
        while self.peek()?.0 == Token::Pipe {
            self.bump()?;
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.until()?;
        while self.peek()?.0 == Token::Amp {
            self.bump()?;
            let rhs = self.until()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.unary()?;
        if self.peek()?.0 == Token::Word("U") {
            self.bump()?;
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        let (tok, pos) = self.bump()?;
        match tok {
            Token::Bang => Ok(Formula::not(self.unary()?)),
            Token::Word("X") => Ok(Formula::next(self.unary()?)),
            Token::Word("F") => Ok(Formula::eventually(self.unary()?)),
            Token::Word("G") => Ok(Formula::always(self.unary()?)),
            Token::Word("true") => Ok(Formula::Top),
            Token::Word("false") => Ok(Formula::bottom()),
            Token::Word("B") => {
                self.expect(Token::LParen, "`(`")?;
                let a = self.agent()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(Formula::Beh(a))
            }
            Token::Word("N") => {
                self.expect(Token::LParen, "`(`")?;
                let a = self.agent()?;
                self.expect(Token::Comma, "`,`")?;
                let b = self.agent()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(Formula::Nbr(a, b))
            }
            Token::Word("MAJ") if self.options.allow_majority => {
                let mut ahead = 0;
                if self.peek()?.0 == Token::Caret {
                    self.bump()?;
                    let (tok, pos) = self.bump()?;
                    ahead = match tok {
                        Token::Word(w) => w.parse().map_err(|_| unexpected(tok.clone(), pos, "a step count"))?,
                        other => return Err(unexpected(other, pos, "a step count")),
                    };
                }
                self.expect(Token::LParen, "`(`")?;
                let agent = self.agent()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(Formula::MajorityGE { agent, ahead })
            }
            Token::LParen => {
                let inner = self.implication()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Word(w) => {
                Err(FormulaError { position: pos, kind: FormulaErrorKind::UnknownOperator(w.to_string()) })
            }
            other => Err(unexpected(other, pos, "a formula")),
        }
    }

    fn agent(&mut self) -> Result<AgentId, FormulaError> {
        let (tok, pos) = self.bump()?;
        match tok {
            Token::Word(w) => AgentId::new(w)
                .map_err(|_| FormulaError { position: pos, kind: FormulaErrorKind::InvalidAgent(w.to_string()) }),
            other => Err(unexpected(other, pos, "an agent name")),
        }
    }
}

fn unexpected(tok: Token<'_>, pos: usize, what: &'static str) -> FormulaError {
    let kind = if tok == Token::End {
        FormulaErrorKind::UnexpectedEnd
    } else {
        FormulaErrorKind::Expected(what, tok.to_string())
    };
    FormulaError { position: pos, kind }
}

pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    parse_formula_with(text, ParseOptions::default())
}

pub fn parse_formula_with(text: &str, options: ParseOptions) -> Result<Formula, FormulaError> {
    let mut parser = Parser { lexer: Lexer { text, pos: 0 }, peeked: None, options };
    let f = parser.implication()?;
    let (tok, pos) = parser.bump()?;
    if tok != Token::End {
        return Err(unexpected(tok, pos, "end of formula"));
    }
    Ok(f)
}
