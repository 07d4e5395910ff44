//! Text formats: scalar and polynomial expressions, points, matrices, and
//! the map headers `P^d: [...]` and `A^d: (...) inv (...)`.
//!
//! Expressions follow ordinary precedence (`^` over unary minus over `*`
//! `/` over `+` `-`); juxtaposition is multiplication and division is only
//! allowed by nonzero constants. Variables are `x<n>`; the imaginary unit
//! `i` is accepted over `Q(i)` only.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Var(usize),
    Imag,
    Word(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(text.parse().expect("digits")));
        } else if c == 'x' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let idx = text
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable x{text}")))?;
            out.push(Token::Var(idx));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if word == "i" {
                out.push(Token::Imag);
            } else {
                out.push(Token::Word(word));
            }
        } else if "+-*/^()[],:;".contains(c) {
            out.push(Token::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    field: FieldSpec,
    nvars: usize,
    offset: usize,
}

impl Parser {
    fn new(s: &str, field: FieldSpec) -> Result<Self> {
        Ok(Parser {
            tokens: tokenize(s)?,
            pos: 0,
            field,
            nvars: 0,
            offset: 0,
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek() == Some(&Token::Sym(c))
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.next() {
            Some(Token::Sym(d)) if d == c => Ok(()),
            other => Err(Error::Parse(format!("expected `{c}`, found {other:?}"))),
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<()> {
        match self.next() {
            Some(Token::Word(ref v)) if v == w => Ok(()),
            other => Err(Error::Parse(format!("expected `{w}`, found {other:?}"))),
        }
    }

    fn expect_num(&mut self) -> Result<BigInt> {
        match self.next() {
            Some(Token::Num(n)) => Ok(n),
            other => Err(Error::Parse(format!("expected a number, found {other:?}"))),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(Error::Parse(format!("trailing input at {t:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            if self.at_sym('+') {
                self.pos += 1;
                acc = &acc + &self.term()?;
            } else if self.at_sym('-') {
                self.pos += 1;
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Token::Num(_)) | Some(Token::Var(_)) | Some(Token::Imag) | Some(Token::Sym('('))
        )
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            if self.at_sym('*') {
                self.pos += 1;
                acc = &acc * &self.factor()?;
            } else if self.at_sym('/') {
                self.pos += 1;
                let d = self.factor()?;
                if !d.is_constant() {
                    return Err(Error::Parse("division by a non-constant".into()));
                }
                let c = d.constant_term();
                if c.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                acc = acc.scale(&c.inv()?);
            } else if self.starts_atom() {
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        if self.at_sym('-') {
            self.pos += 1;
            return Ok(-&self.factor()?);
        }
        if self.at_sym('+') {
            self.pos += 1;
            return self.factor();
        }
        let base = self.atom()?;
        if self.at_sym('^') {
            self.pos += 1;
            let e = self.expect_num()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| Error::Parse("exponent too large".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.next() {
            Some(Token::Num(n)) => Ok(Polynomial::constant(
                Scalar::from_bigint(self.field, &n),
                self.nvars,
            )),
            Some(Token::Imag) => {
                if self.field != FieldSpec::GaussianRational {
                    return Err(Error::Parse("`i` requires the field Qi".into()));
                }
                Ok(Polynomial::constant(Scalar::i(), self.nvars))
            }
            Some(Token::Var(k)) => {
                if k < self.offset || k - self.offset >= self.nvars {
                    return Err(Error::Parse(format!("variable x{k} out of range")));
                }
                Ok(Polynomial::var(self.field, self.nvars, k - self.offset))
            }
            Some(Token::Sym('(')) => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn scalar(&mut self) -> Result<Scalar> {
        let saved = self.nvars;
        self.nvars = 0;
        let p = self.expr();
        self.nvars = saved;
        Ok(p?.constant_term())
    }

    /// `sep`-separated list of items up to (not including) `close`.
    fn list<T>(
        &mut self,
        sep: char,
        close: char,
        mut item: impl FnMut(&mut Self) -> Result<T>,
    ) -> Result<Vec<T>> {
        let mut out = vec![item(self)?];
        while self.at_sym(sep) {
            self.pos += 1;
            out.push(item(self)?);
        }
        self.expect_sym(close)?;
        Ok(out)
    }

    fn header(&mut self, letter: &str) -> Result<usize> {
        self.expect_word(letter)?;
        self.expect_sym('^')?;
        let d = self.expect_num()?;
        let d: usize = d
            .try_into()
            .map_err(|_| Error::Parse("dimension too large".into()))?;
        self.expect_sym(':')?;
        Ok(d)
    }
}

/// Parse a polynomial in `nvars` variables named `x{offset}..`.
pub fn parse_polynomial(field: FieldSpec, nvars: usize, offset: usize, s: &str) -> Result<Polynomial> {
    let mut p = Parser::new(s, field)?;
    p.nvars = nvars;
    p.offset = offset;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_scalar(field: FieldSpec, s: &str) -> Result<Scalar> {
    let mut p = Parser::new(s, field)?;
    let v = p.scalar()?;
    p.finish()?;
    Ok(v)
}

/// `[a : b : ...]`, the homogeneous coordinates of a point.
pub fn parse_point(field: FieldSpec, s: &str) -> Result<Vec<Scalar>> {
    let mut p = Parser::new(s, field)?;
    p.expect_sym('[')?;
    let coords = p.list(':', ']', Parser::scalar)?;
    p.finish()?;
    Ok(coords)
}

/// `[[a,b],[c,d]]`.
pub fn parse_matrix(field: FieldSpec, s: &str) -> Result<Matrix> {
    let mut p = Parser::new(s, field)?;
    p.expect_sym('[')?;
    let rows = p.list(',', ']', |p| {
        p.expect_sym('[')?;
        p.list(',', ']', Parser::scalar)
    })?;
    p.finish()?;
    Matrix::from_rows(field, rows)
}

/// `P^d: [f0 : ... : fd]` in variables `x0..xd`. Returns `(d, components)`.
pub fn parse_projective_map(field: FieldSpec, s: &str) -> Result<(usize, Vec<Polynomial>)> {
    let mut p = Parser::new(s, field)?;
    let d = p.header("P")?;
    p.nvars = d + 1;
    p.expect_sym('[')?;
    let comps = p.list(':', ']', Parser::expr)?;
    p.finish()?;
    if comps.len() != d + 1 {
        return Err(Error::DimMismatch {
            expected: d + 1,
            got: comps.len(),
        });
    }
    Ok((d, comps))
}

/// `A^d: (p1; ...; pd) inv (q1; ...; qd)` in variables `x1..xd`.
pub fn parse_affine_map(
    field: FieldSpec,
    s: &str,
) -> Result<(usize, Vec<Polynomial>, Vec<Polynomial>)> {
    let mut p = Parser::new(s, field)?;
    let d = p.header("A")?;
    p.nvars = d;
    p.offset = 1;
    p.expect_sym('(')?;
    let forward = p.list(';', ')', Parser::expr)?;
    p.expect_word("inv")?;
    p.expect_sym('(')?;
    let inverse = p.list(';', ')', Parser::expr)?;
    p.finish()?;
    for comps in [&forward, &inverse] {
        if comps.len() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: comps.len(),
            });
        }
    }
    Ok((d, forward, inverse))
}
