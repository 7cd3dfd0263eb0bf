use std::fmt;

use thiserror::Error;

use super::{Formula, TRUTH_ATOM};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at column {}", .position + 1)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    UnbalancedParen,
    ReservedAtom(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found `{found}`")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "unexpected end of input, expected {expected}")
            }
            ParseErrorKind::UnbalancedParen => f.write_str("unbalanced parenthesis"),
            ParseErrorKind::ReservedAtom(name) => write!(f, "atom `{name}` is reserved"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Top,
    Bottom,
    Gamma,
    Pi,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Box,
    Diamond,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Token::Ident(name) => name.as_str(),
            Token::Top => "T",
            Token::Bottom => "F",
            Token::Gamma => "gamma",
            Token::Pi => "pi",
            Token::Not => "~",
            Token::And => "&",
            Token::Or => "|",
            Token::Implies => "->",
            Token::Iff => "<->",
            Token::Box => "[]",
            Token::Diamond => "<>",
            Token::LParen => "(",
            Token::RParen => ")",
            Token::Comma => ",",
        };
        f.write_str(s)
    }
}

fn err(position: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { position, kind }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |s: &[u8]| bytes[i..].starts_with(s);
        let token = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b',' => Token::Comma,
            b'-' if two(b"->") => Token::Implies,
            b'<' if two(b"<->") => Token::Iff,
            b'<' if two(b"<>") => Token::Diamond,
            b'[' if two(b"[]") => Token::Box,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let word = &text[i..j];
                i = j;
                let token = match word {
                    "gamma" => Token::Gamma,
                    "pi" => Token::Pi,
                    "T" => Token::Top,
                    "F" => Token::Bottom,
                    TRUTH_ATOM => {
                        return Err(err(start, ParseErrorKind::ReservedAtom(word.to_string())))
                    }
                    _ if c == b'_' => return Err(err(start, ParseErrorKind::UnexpectedChar('_'))),
                    _ => Token::Ident(word.to_string()),
                };
                out.push((start, token));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('\0');
                return Err(err(start, ParseErrorKind::UnexpectedChar(ch)));
            }
        };
        i += match token {
            Token::Iff => 3,
            Token::Implies | Token::Diamond | Token::Box => 2,
            _ => 1,
        };
        out.push((start, token));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: Token, expected: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == token => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(err(
                self.offset(),
                ParseErrorKind::UnexpectedToken { found: t.to_string(), expected },
            )),
            None => Err(err(self.end, ParseErrorKind::UnexpectedEnd { expected })),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.implication()?;
        while self.eat(&Token::Iff) {
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if self.eat(&Token::Implies) {
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while self.eat(&Token::Or) {
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while self.eat(&Token::And) {
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        const EXPECTED: &str = "a formula";
        let offset = self.offset();
        let Some(token) = self.peek().cloned() else {
            return Err(err(self.end, ParseErrorKind::UnexpectedEnd { expected: EXPECTED }));
        };
        self.pos += 1;
        match token {
            Token::Not => Ok(Formula::not(self.unary()?)),
            Token::Box => Ok(Formula::boxed(self.unary()?)),
            Token::Diamond => Ok(Formula::diamond(self.unary()?)),
            Token::Pi => Ok(Formula::pi(self.unary()?)),
            Token::Ident(name) => Ok(Formula::atom(&name)),
            Token::Top => Ok(Formula::top()),
            Token::Bottom => Ok(Formula::bottom()),
            Token::Gamma => {
                self.expect(Token::LParen, "`(` after gamma")?;
                let a = self.iff()?;
                self.expect(Token::Comma, "`,` between gamma arguments")?;
                let b = self.iff()?;
                self.close_paren(offset)?;
                Ok(Formula::reach(a, b))
            }
            Token::LParen => {
                let inner = self.iff()?;
                self.close_paren(offset)?;
                Ok(inner)
            }
            Token::RParen => Err(err(offset, ParseErrorKind::UnbalancedParen)),
            other => Err(err(
                offset,
                ParseErrorKind::UnexpectedToken { found: other.to_string(), expected: EXPECTED },
            )),
        }
    }

    fn close_paren(&mut self, open: usize) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token::RParen) => {
                self.pos += 1;
                Ok(())
            }
            None => Err(err(open, ParseErrorKind::UnbalancedParen)),
            Some(t) => Err(err(
                self.offset(),
                ParseErrorKind::UnexpectedToken { found: t.to_string(), expected: "`)`" },
            )),
        }
    }
}

/// Parses the surface syntax into a core formula.
///
/// Precedence, tightest first: `~ [] <> pi`, `&`, `|`, `->` (right
/// associative), `<->`.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, end: text.len() };
    let formula = parser.iff()?;
    match parser.peek() {
        None => Ok(formula),
        Some(Token::RParen) => Err(err(parser.offset(), ParseErrorKind::UnbalancedParen)),
        Some(t) => Err(err(
            parser.offset(),
            ParseErrorKind::UnexpectedToken { found: t.to_string(), expected: "end of input" },
        )),
    }
}
