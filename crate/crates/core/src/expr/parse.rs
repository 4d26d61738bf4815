use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::{BinOp, Constant, Func, Node};
use crate::error::{Error, Expected, Result};

const OPERAND: &[&str] = &["number", "identifier", "'('", "'-'"];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok<'a> {
    Num(f64),
    Ident(&'a str),
    Op(u8),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Returns the next token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok<'a>, usize)> {
        self.skip_ws();
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let Some(&c) = bytes.get(start) else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            b'0'..=b'9' | b'.' => return self.number(start),
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut end = start;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                self.pos = end;
                return Ok((Tok::Ident(&self.src[start..end]), start));
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    expected: Expected(vec!["number", "identifier", "operator", "'('", "')'"]),
                })
            }
        };
        self.pos += 1;
        Ok((tok, start))
    }

    fn number(&mut self, start: usize) -> Result<(Tok<'a>, usize)> {
        let bytes = self.src.as_bytes();
        let mut end = start;
        let digits = |end: &mut usize| {
            let from = *end;
            while *end < bytes.len() && bytes[*end].is_ascii_digit() {
                *end += 1;
            }
            *end - from
        };
        let mut mantissa = digits(&mut end);
        if end < bytes.len() && bytes[end] == b'.' {
            end += 1;
            mantissa += digits(&mut end);
        }
        if mantissa == 0 {
            return Err(Error::Syntax { offset: start, expected: Expected(vec!["digit"]) });
        }
        // Exponent only when a digit follows, so `2e` stays `2` then `e`.
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut probe = end + 1;
            if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                probe += 1;
            }
            if probe < bytes.len() && bytes[probe].is_ascii_digit() {
                end = probe;
                digits(&mut end);
            }
        }
        let text = &self.src[start..end];
        let value: f64 = text
            .parse()
            .map_err(|_| Error::Syntax { offset: start, expected: Expected(vec!["number"]) })?;
        self.pos = end;
        Ok((Tok::Num(value), start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok<'a>,
    offset: usize,
    var: &'a str,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<()> {
        let (tok, offset) = self.lexer.next()?;
        self.tok = tok;
        self.offset = offset;
        Ok(())
    }

    fn fail<T>(&self, expected: &[&'static str]) -> Result<T> {
        Err(Error::Syntax { offset: self.offset, expected: Expected(expected.to_vec()) })
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Op(b'+') => BinOp::Add,
                Tok::Op(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Node::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Op(b'*') => BinOp::Mul,
                Tok::Op(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Node::bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.tok == Tok::Op(b'-') {
            self.bump()?;
            return Ok(Node::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if self.tok == Tok::Op(b'^') {
            self.bump()?;
            let exponent = self.unary()?;
            return Ok(Node::bin(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node> {
        match self.tok {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Node::Num(v))
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                if self.tok != Tok::RParen {
                    return self.fail(&["operator", "')'"]);
                }
                self.bump()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let at = self.offset;
                if name == self.var {
                    self.bump()?;
                    return Ok(Node::Var);
                }
                if let Some(func) = Func::from_name(name) {
                    self.bump()?;
                    if self.tok != Tok::LParen {
                        return self.fail(&["'('"]);
                    }
                    self.bump()?;
                    let arg = self.expr()?;
                    if self.tok != Tok::RParen {
                        return self.fail(&["operator", "')'"]);
                    }
                    self.bump()?;
                    return Ok(Node::call(func, arg));
                }
                let constant = match name {
                    "pi" => Constant::Pi,
                    "e" => Constant::E,
                    _ => {
                        return Err(Error::UnknownIdentifier { name: name.to_string(), offset: at })
                    }
                };
                self.bump()?;
                Ok(Node::Const(constant))
            }
            _ => self.fail(OPERAND),
        }
    }
}

/// Parses `source` with `t` as the variable.
pub fn parse(source: &str) -> Result<Node> {
    parse_with_var(source, "t")
}

pub(crate) fn parse_with_var(source: &str, var: &str) -> Result<Node> {
    if source.trim().is_empty() {
        return Err(Error::Syntax { offset: source.len(), expected: Expected(OPERAND.to_vec()) });
    }
    let mut parser = Parser {
        lexer: Lexer { src: source, pos: 0 },
        tok: Tok::End,
        offset: 0,
        var,
    };
    parser.bump()?;
    let node = parser.expr()?;
    if parser.tok != Tok::End {
        let expected: Vec<&'static str> = vec!["operator", "end of input"];
        return parser.fail(&expected);
    }
    Ok(node)
}
