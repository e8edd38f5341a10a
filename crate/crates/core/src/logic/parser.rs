//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Precedence, tightest first: `!`, `&`, `|`, `->` (right associative),
//! `<->` (left associative). Constants are `true` and `false`.

use super::formula::Formula;
use super::world::Vocabulary;
use crate::error::{EdiError, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::Iff
            }
            b'a'..=b'z' => {
                while i + 1 < bytes.len()
                    && matches!(bytes[i + 1], b'a'..=b'z' | b'0'..=b'9' | b'_')
                {
                    i += 1;
                }
                match &text[start..=i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(EdiError::Syntax {
                    pos: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        toks.push((tok, start));
    }
    toks.push((Tok::End, text.len()));
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vocab: &'a Vocabulary,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> EdiError {
        EdiError::Syntax {
            pos: self.offset(),
            message: format!("expected {wanted}, found {}", self.peek().describe()),
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(name) => {
                let pos = self.offset();
                self.bump();
                self.vocab
                    .atom_index(&name)
                    .map(Formula::Atom)
                    .ok_or(EdiError::UnknownAtom { name, pos })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("an atom, constant, `!` or `(`")),
        }
    }
}

/// Parses `text` against `vocab`. Positions in errors are byte offsets.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        vocab,
    };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(f)
}
