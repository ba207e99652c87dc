//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := "-" unary | power
//! power    := primary ("^" exponent)*
//! exponent := "-" exponent | primary
//! primary  := number | ident | ident "(" expr ")" | "(" expr ")"
//! number   := digits ["." digits] [("e" | "E") ["+" | "-"] digits]
//! ```
//!
//! `^` binds tighter than unary minus (`-x^2` is `-(x^2)`), and every binary
//! operator is left-associative, including `^`.

use super::ast::{BinaryOp, Expr, Function, Symbols};
use crate::error::{Error, Result, Span};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(v) => format!("number `{v}`"),
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Star => "`*`".into(),
            Token::Slash => "`/`".into(),
            Token::Caret => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Token, Span)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);

    while i < chars.len() {
        let c = chars[i];
        let at = Span { line, column };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        let token = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                i = scan_number(&chars, i);
                let literal: String = chars[start..i].iter().collect();
                let value = literal
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Parse {
                        at,
                        expected: vec!["number".into()],
                        found: format!("`{literal}`"),
                    })?;
                column += i - start;
                tokens.push((Token::Number(value), at));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                column += i - start;
                tokens.push((Token::Ident(chars[start..i].iter().collect()), at));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    at,
                    expected: vec!["expression".into()],
                    found: format!("character `{other}`"),
                })
            }
        };
        tokens.push((token, at));
        i += 1;
        column += 1;
    }
    tokens.push((Token::End, Span { line, column }));
    Ok(tokens)
}

fn scan_number(chars: &[char], mut i: usize) -> usize {
    let digits = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
    };
    digits(&mut i);
    if i < chars.len() && chars[i] == '.' {
        i += 1;
        digits(&mut i);
    }
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if j < chars.len() && chars[j].is_ascii_digit() {
            i = j;
            digits(&mut i);
        }
    }
    i
}

struct Parser<'a> {
    tokens: Vec<(Token, Span)>,
    pos: usize,
    symbols: &'a Symbols,
}

const OPERAND: [&str; 4] = ["number", "identifier", "`(`", "`-`"];

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Token, Span) {
        let t = self.tokens[self.pos].clone();
        if t.0 != Token::End {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> Error {
        Error::Parse {
            at: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinaryOp::Add,
                Token::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinaryOp::Mul,
                Token::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.primary()?;
        while *self.peek() == Token::Caret {
            self.bump();
            base = Expr::binary(BinaryOp::Pow, base, self.exponent()?);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Expr> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(Expr::neg(self.exponent()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Token::Number(v) => {
                self.bump();
                Ok(Expr::Number(v))
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Token::Ident(name) => {
                let (_, at) = self.bump();
                if *self.peek() == Token::LParen {
                    let function = Function::from_name(&name)
                        .ok_or_else(|| Error::UnknownSymbol { name: name.clone(), at })?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::call(function, arg));
                }
                if Function::from_name(&name).is_some() {
                    return Err(Error::Parse {
                        at: self.span(),
                        expected: vec!["`(`".into()],
                        found: self.peek().describe(),
                    });
                }
                self.symbols
                    .resolve(&name)
                    .map(Expr::Symbol)
                    .ok_or(Error::UnknownSymbol { name, at })
            }
            _ => Err(self.unexpected(&OPERAND)),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if *self.peek() == Token::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&["`)`", "operator"]))
        }
    }
}

/// Parse `text` against the declared coordinate and parameter names.
pub fn parse(text: &str, symbols: &Symbols) -> Result<Expr> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        symbols,
    };
    let expr = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.unexpected(&["operator", "end of input"]));
    }
    Ok(expr)
}
