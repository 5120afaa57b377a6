//! Expression language for polynomial input.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary ('*' unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' INT)?          -- E1 also accepts '^' '-' INT
//! atom     := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! `E1` denotes the formal exponential `e^t`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::printer::EXP_SYMBOL;
use crate::graded::{Chart, GradedPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error(transparent)]
    Algebra(#[from] crate::error::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expression {
    Number(BigRational),
    Identifier(String),
    /// `E1^k`.
    Exp(i32),
    Neg(Box<Expression>),
    Add(Box<Expression>, Box<Expression>),
    Sub(Box<Expression>, Box<Expression>),
    Mul(Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
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

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, ExprError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, column);
        if ch == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if ch.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let tok = if ch.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                chars.next();
                column += 1;
            }
            Tok::Int(digits.parse().expect("ascii digits"))
        } else if ch.is_alphabetic() || ch == '_' {
            let mut ident = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                ident.push(d);
                chars.next();
                column += 1;
            }
            Tok::Ident(ident)
        } else {
            chars.next();
            column += 1;
            match ch {
                '+' => Tok::Plus,
                '-' | '−' => Tok::Minus,
                '*' | '·' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => return Err(syntax(l, c, format!("unexpected character `{other}`"))),
            }
        };
        out.push(Spanned {
            tok,
            line: l,
            column: c,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ExprError {
        let t = self.peek();
        syntax(t.line, t.column, message)
    }

    fn expr(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    lhs = Expression::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = Expression::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.next();
            lhs = Expression::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expression, ExprError> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(Expression::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn small_int(&mut self) -> Result<u32, ExprError> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => u32::try_from(v).map_err(|_| syntax(t.line, t.column, "exponent too large")),
            _ => Err(syntax(t.line, t.column, "expected a nonnegative integer exponent")),
        }
    }

    fn power(&mut self) -> Result<Expression, ExprError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        if let Expression::Exp(1) = base {
            let negative = self.peek().tok == Tok::Minus;
            if negative {
                self.next();
            }
            let k = i32::try_from(self.small_int()?).map_err(|_| self.error_here("exponent too large"))?;
            return Ok(Expression::Exp(if negative { -k } else { k }));
        }
        if self.peek().tok == Tok::Minus {
            return Err(self.error_here(format!("negative powers are only allowed for {EXP_SYMBOL}")));
        }
        Ok(Expression::Pow(Box::new(base), self.small_int()?))
    }

    fn atom(&mut self) -> Result<Expression, ExprError> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => {
                if self.peek().tok == Tok::Slash {
                    self.next();
                    let d = self.next();
                    match d.tok {
                        Tok::Int(den) if !den.is_zero() => {
                            Ok(Expression::Number(BigRational::new(n, den)))
                        }
                        Tok::Int(_) => Err(syntax(d.line, d.column, "zero denominator")),
                        _ => Err(syntax(d.line, d.column, "expected an integer denominator")),
                    }
                } else {
                    Ok(Expression::Number(BigRational::from_integer(n)))
                }
            }
            Tok::Ident(name) if name == EXP_SYMBOL => Ok(Expression::Exp(1)),
            Tok::Ident(name) => Ok(Expression::Identifier(name)),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.next();
                if close.tok != Tok::RParen {
                    return Err(syntax(close.line, close.column, "expected `)`"));
                }
                Ok(inner)
            }
            Tok::End => Err(syntax(t.line, t.column, "unexpected end of input")),
            other => Err(syntax(t.line, t.column, format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<Expression, ExprError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = parser.expr()?;
    if parser.peek().tok != Tok::End {
        return Err(parser.error_here("unexpected trailing input"));
    }
    Ok(e)
}

impl Expression {
    pub fn to_polynomial(&self, chart: &Arc<Chart>) -> Result<GradedPolynomial, ExprError> {
        Ok(match self {
            Expression::Number(q) => GradedPolynomial::constant(chart, q.clone()),
            Expression::Identifier(name) => GradedPolynomial::generator(chart, name)
                .map_err(|_| ExprError::UnknownIdentifier(name.clone()))?,
            Expression::Exp(k) => GradedPolynomial::exponential(chart, *k)?,
            Expression::Neg(e) => -e.to_polynomial(chart)?,
            Expression::Add(a, b) => a.to_polynomial(chart)? + b.to_polynomial(chart)?,
            Expression::Sub(a, b) => a.to_polynomial(chart)? - b.to_polynomial(chart)?,
            Expression::Mul(a, b) => a.to_polynomial(chart)? * b.to_polynomial(chart)?,
            Expression::Pow(a, k) => a.to_polynomial(chart)?.pow(*k),
        })
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Number(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Expression::Number(q) => write!(f, "({}/{})", q.numer(), q.denom()),
            Expression::Identifier(n) => f.write_str(n),
            Expression::Exp(1) => f.write_str(EXP_SYMBOL),
            Expression::Exp(k) => write!(f, "{EXP_SYMBOL}^{k}"),
            Expression::Neg(e) => write!(f, "(-{e})"),
            Expression::Add(a, b) => write!(f, "({a} + {b})"),
            Expression::Sub(a, b) => write!(f, "({a} - {b})"),
            Expression::Mul(a, b) => write!(f, "{a}*{b}"),
            Expression::Pow(a, k) => write!(f, "{a}^{k}"),
        }
    }
}

/// Parse and evaluate on `chart`.
pub fn parse_polynomial(text: &str, chart: &Arc<Chart>) -> Result<GradedPolynomial, ExprError> {
    parse_expression(text)?.to_polynomial(chart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{make_chart, rational, CoordinateKind::*, CoordinateSpec};

    fn chart() -> Arc<Chart> {
        make_chart(&[
            CoordinateSpec::new("x", 0, Base),
            CoordinateSpec::new("y", 0, Base),
            CoordinateSpec::new("p_x", 1, Momentum),
            CoordinateSpec::new("θ", 1, Theta),
            CoordinateSpec::new("t", 0, Time),
        ])
        .unwrap()
    }

    #[test]
    fn two_term_sum() {
        let e = parse_expression("x*y + 2").unwrap();
        match e {
            Expression::Add(a, b) => {
                assert!(matches!(*a, Expression::Mul(_, _)));
                assert_eq!(*b, Expression::Number(rational(2, 1)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_power_rejected() {
        let err = parse_expression("x^-1").unwrap_err();
        assert_eq!(
            err,
            ExprError::Syntax {
                line: 1,
                column: 3,
                message: "negative powers are only allowed for E1".into()
            }
        );
        assert_eq!(parse_expression("E1^-1").unwrap(), Expression::Exp(-1));
        assert_eq!(parse_expression("E1^-3").unwrap(), Expression::Exp(-3));
    }

    #[test]
    fn rational_coefficient() {
        let e = parse_expression("3/2*x^2").unwrap();
        assert_eq!(
            e,
            Expression::Mul(
                Box::new(Expression::Number(rational(3, 2))),
                Box::new(Expression::Pow(Box::new(Expression::Identifier("x".into())), 2))
            )
        );
    }

    #[test]
    fn evaluation_and_errors() {
        let c = chart();
        let p = parse_polynomial("θ*p_x + (x - 1)^2*E1^-1", &c).unwrap();
        let q = parse_polynomial("-p_x*θ + x^2*E1^-1 - 2*x*E1^-1 + E1^-1", &c).unwrap();
        assert_eq!(p, q);
        assert_eq!(
            parse_polynomial("z + 1", &c).unwrap_err(),
            ExprError::UnknownIdentifier("z".into())
        );
        assert!(matches!(
            parse_expression("x +\n  * y").unwrap_err(),
            ExprError::Syntax { line: 2, column: 3, .. }
        ));
        assert!(parse_expression("(x + y").is_err());
        assert!(parse_expression("1/0").is_err());
        assert!(parse_expression("x y").is_err());
    }
}
