//! Arithmetic expressions in one variable over ℚ.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use redform::exactfield::{Poly, RatFunc, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var,
    Neg(Box<Expr>),
    Bin { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr>, pos: usize },
    Pow { base: Box<Expr>, exp: i64, pos: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Parser<'a> {
    text: &'a str,
    var: &'a str,
    toks: Vec<(Tok, usize)>,
    at: usize,
}

fn locate(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error(text: &str, offset: usize, message: impl Into<String>) -> ParseError {
    let (line, column) = locate(text, offset);
    ParseError { line, column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
        } else if ch.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek().filter(|(_, d)| d.is_ascii_digit()) {
                s.push(d);
                it.next();
            }
            out.push((Tok::Int(s.parse().expect("digits")), i));
        } else if ch.is_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek().filter(|(_, d)| d.is_alphanumeric() || *d == '_') {
                s.push(d);
                it.next();
            }
            out.push((Tok::Ident(s), i));
        } else if "+-*/^()".contains(ch) {
            out.push((Tok::Sym(ch), i));
            it.next();
        } else if ch == '−' {
            out.push((Tok::Sym('-'), i));
            it.next();
        } else {
            return Err(error(text, i, format!("unexpected character '{ch}'")));
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(error(self.text, self.pos(), message))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Tok::Sym(c @ ('+' | '-')) = *self.peek() {
            let (_, pos) = self.bump();
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs), pos };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Tok::Sym(c @ ('*' | '/')) = *self.peek() {
            let (_, pos) = self.bump();
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs), pos };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            let (_, pos) = self.bump();
            let exp = self.exponent()?;
            return Ok(Expr::Pow { base: Box::new(base), exp, pos });
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let start = self.pos();
        let paren = *self.peek() == Tok::Sym('(');
        if paren {
            self.bump();
        }
        let neg = *self.peek() == Tok::Sym('-');
        if neg {
            self.bump();
        }
        let Tok::Int(n) = self.peek().clone() else { return self.fail("exponent must be an integer") };
        self.bump();
        if paren {
            if *self.peek() != Tok::Sym(')') {
                return self.fail("expected ')'");
            }
            self.bump();
        }
        let mut e = n.to_i64().filter(|v| *v <= 1 << 20).ok_or_else(|| error(self.text, start, "exponent too large"))?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            let inner = self.exponent()?;
            let p = u32::try_from(inner).map_err(|_| error(self.text, start, "nested exponent must be a small non-negative integer"))?;
            e = e.checked_pow(p).filter(|v| *v <= 1 << 20).ok_or_else(|| error(self.text, start, "exponent too large"))?;
        }
        Ok(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) if s == self.var => {
                self.bump();
                Ok(Expr::Var)
            }
            Tok::Ident(s) => self.fail(format!("unknown identifier '{s}' (the variable is '{}')", self.var)),
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::Sym(')') {
                    return self.fail("expected ')'");
                }
                self.bump();
                Ok(e)
            }
            Tok::Sym(c) => self.fail(format!("unexpected '{c}'")),
            Tok::End => self.fail("unexpected end of expression"),
        }
    }
}

pub fn parse_ast(text: &str, var: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { text, var, toks, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("unexpected trailing input");
    }
    Ok(e)
}

pub fn eval(e: &Expr, text: &str) -> Result<RatFunc, ParseError> {
    Ok(match e {
        Expr::Int(n) => RatFunc::constant(Q::from_integer(n.clone())),
        Expr::Var => RatFunc::from_poly(Poly::x()),
        Expr::Neg(a) => -&eval(a, text)?,
        Expr::Bin { op, lhs, rhs, pos } => {
            let (a, b) = (eval(lhs, text)?, eval(rhs, text)?);
            match op {
                BinOp::Add => &a + &b,
                BinOp::Sub => &a - &b,
                BinOp::Mul => &a * &b,
                BinOp::Div => {
                    if b.is_zero() {
                        return Err(error(text, *pos, "division by zero"));
                    }
                    a.checked_div(&b).map_err(|_| error(text, *pos, "division by zero"))?
                }
            }
        }
        Expr::Pow { base, exp, pos } => {
            let b = eval(base, text)?;
            if b.is_zero() && *exp < 0 {
                return Err(error(text, *pos, "negative power of zero"));
            }
            let e = i32::try_from(*exp).map_err(|_| error(text, *pos, "exponent too large"))?;
            b.powi(e).map_err(|_| error(text, *pos, "negative power of zero"))?
        }
    })
}

/// Parses `text` into a rational function of `var`.
pub fn parse_expression(text: &str, var: &str) -> Result<RatFunc, ParseError> {
    eval(&parse_ast(text, var)?, text)
}

/// Parses an expression that must be a rational constant.
pub fn parse_constant(text: &str, var: &str) -> Result<Q, ParseError> {
    let f = parse_expression(text, var)?;
    f.constant_value().ok_or_else(|| error(text, 0, "expected a constant"))
}

pub fn print_expression(f: &RatFunc, var: &str) -> String {
    f.to_string_in(var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use redform::exactfield::q;

    #[test]
    fn precedence() {
        let x = RatFunc::x();
        assert_eq!(parse_expression("-x^2", "x").unwrap(), -&(&x * &x));
        assert_eq!(parse_expression("2^3^2", "x").unwrap(), RatFunc::constant(q(512, 1)));
        assert_eq!(parse_expression("1 - 2 - 3", "x").unwrap(), RatFunc::constant(q(-4, 1)));
        assert_eq!(parse_expression("12/3/2", "x").unwrap(), RatFunc::constant(q(2, 1)));
        assert_eq!(parse_expression("x^-1", "x").unwrap(), x.inv().unwrap());
    }

    #[test]
    fn positioned_errors() {
        let e = parse_expression("1 + (x", "x").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        let e = parse_expression("1/(x - x)", "x").unwrap_err();
        assert_eq!((e.column, e.message.as_str()), (2, "division by zero"));
        let e = parse_expression("y + 1", "x").unwrap_err();
        assert_eq!(e.column, 1);
        let e = parse_expression("1 +\n  $", "x").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
    }
}
