//! Expression parser for the three input sublanguages:
//!
//! * plain parameter expressions, e.g. `(1-s^2)/4` or `2+3*i`,
//! * structure-constant equations over `c[i][j][k]`,
//! * linear cochain expressions over `D[p][q]`, e.g. `D[1][2]-D[2][1]`.
//!
//! Grammar (shared by all three):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := "-"? base ("^" uint)?
//! base   := uint ("/" uint)? | "i" | name | name index+ | "(" expr ")"
//! ```
//!
//! A `uint "/" uint` pair is one rational literal, so `3/4^2` is `(3/4)^2`;
//! division by anything non-literal happens at term level, so `1/s` still
//! means what it should. Exponents are nonnegative literals only.

use super::gaussian::GaussianRational;
use super::scalar::Scalar;
use super::Context;
use num::BigInt;
use num::BigRational;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    UInt(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => { toks.push((start, Tok::Plus)); i += 1; }
            b'-' => { toks.push((start, Tok::Minus)); i += 1; }
            b'*' => { toks.push((start, Tok::Star)); i += 1; }
            b'/' => { toks.push((start, Tok::Slash)); i += 1; }
            b'^' => { toks.push((start, Tok::Caret)); i += 1; }
            b'(' => { toks.push((start, Tok::LParen)); i += 1; }
            b')' => { toks.push((start, Tok::RParen)); i += 1; }
            b'[' => { toks.push((start, Tok::LBracket)); i += 1; }
            b']' => { toks.push((start, Tok::RBracket)); i += 1; }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((start, Tok::UInt(text[start..i].to_string())));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => return err(start, format!("unexpected character {:?}", text[start..].chars().next().unwrap())),
        }
    }
    Ok(toks)
}

/// Which indexed atoms are admitted, and what they mean.
enum AtomMode<'a> {
    /// Only context parameters.
    ParamsOnly,
    /// `c[i][j][k]` resolves through the callback, 1-based, bounds `dim`.
    Constants { dim: usize, resolve: &'a dyn Fn(usize, usize, usize) -> Scalar },
    /// `D[p][q]` is a formal linear generator, 1-based, bounds `dim`.
    Cochain { dim: usize },
}

/// Evaluation result: a scalar part plus a linear combination of `D[p][q]`
/// generators (empty except in cochain mode).
struct Val {
    s: Scalar,
    lin: BTreeMap<(usize, usize), Scalar>,
}

impl Val {
    fn pure(s: Scalar) -> Val {
        Val { s, lin: BTreeMap::new() }
    }

    fn is_pure(&self) -> bool {
        self.lin.is_empty()
    }

    fn add(mut self, rhs: Val) -> Val {
        self.s = &self.s + &rhs.s;
        for (k, v) in rhs.lin {
            let entry = match self.lin.remove(&k) {
                Some(old) => &old + &v,
                None => v,
            };
            if !entry.is_zero() {
                self.lin.insert(k, entry);
            }
        }
        self
    }

    fn neg(mut self) -> Val {
        self.s = -&self.s;
        for v in self.lin.values_mut() {
            *v = -&*v;
        }
        self
    }

    fn scale(mut self, c: &Scalar) -> Val {
        self.s = &self.s * c;
        let mut lin = BTreeMap::new();
        for (k, v) in self.lin {
            let sv = &v * c;
            if !sv.is_zero() {
                lin.insert(k, sv);
            }
        }
        self.lin = lin;
        self
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ctx: &'a Context,
    mode: AtomMode<'a>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        let at = self.here();
        match self.bump() {
            Some(ref t) if t == want => Ok(()),
            _ => err(at, format!("expected {what}")),
        }
    }

    fn expr(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let at = self.here();
                    let rhs = self.factor()?;
                    acc = match (acc.is_pure(), rhs.is_pure()) {
                        (true, _) => rhs.scale(&acc.s),
                        (_, true) => acc.scale(&rhs.s),
                        _ => return err(at, "product of two cochain terms is not linear"),
                    };
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.here();
                    let rhs = self.factor()?;
                    if !rhs.is_pure() {
                        return err(at, "cannot divide by a cochain term");
                    }
                    let inv = match rhs.s.inv() {
                        Some(v) => v,
                        None => return err(at, "division by zero"),
                    };
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Val, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let mut v = self.base()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            let at_caret = self.here();
            self.bump();
            let at = self.here();
            let e = match self.bump() {
                Some(Tok::UInt(d)) => match d.parse::<u32>() {
                    Ok(e) => e,
                    Err(_) => return err(at, "exponent too large"),
                },
                _ => return err(at, "expected a nonnegative integer exponent"),
            };
            if !v.is_pure() {
                return err(at_caret, "cannot raise a cochain term to a power");
            }
            v = Val::pure(v.s.pow_i(e as i64).unwrap());
        }
        Ok(v)
    }

    fn base(&mut self) -> Result<Val, ParseError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::UInt(num)) => {
                // two-token lookahead: UInt Slash UInt is a rational literal
                if matches!(self.peek(), Some(Tok::Slash))
                    && matches!(self.peek2(), Some(Tok::UInt(_)))
                {
                    self.bump();
                    let at_den = self.here();
                    let den = match self.bump() {
                        Some(Tok::UInt(d)) => d,
                        _ => unreachable!(),
                    };
                    let d: BigInt = den.parse().unwrap();
                    if d == BigInt::from(0) {
                        return err(at_den, "division by zero");
                    }
                    let n: BigInt = num.parse().unwrap();
                    let q = GaussianRational::from_rational(BigRational::new(n, d));
                    Ok(Val::pure(Scalar::constant(self.ctx, q)))
                } else {
                    let n: BigInt = num.parse().unwrap();
                    let q = GaussianRational::from_rational(BigRational::from(n));
                    Ok(Val::pure(Scalar::constant(self.ctx, q)))
                }
            }
            Some(Tok::LParen) => {
                let v = self.expr()?;
                self.expect(&Tok::RParen, "closing parenthesis")?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => self.atom(at, name),
            Some(t) => err(at, format!("unexpected token {t:?}")),
            None => err(at, "unexpected end of input"),
        }
    }

    fn index(&mut self, upper: usize) -> Result<usize, ParseError> {
        self.expect(&Tok::LBracket, "'['")?;
        let at = self.here();
        let idx = match self.bump() {
            Some(Tok::UInt(d)) => match d.parse::<usize>() {
                Ok(v) => v,
                Err(_) => return err(at, "index out of range"),
            },
            _ => return err(at, "expected an index"),
        };
        if idx < 1 || idx > upper {
            return err(at, format!("index {idx} out of range 1..={upper}"));
        }
        self.expect(&Tok::RBracket, "']'")?;
        Ok(idx)
    }

    fn atom(&mut self, at: usize, name: String) -> Result<Val, ParseError> {
        if name == "i" {
            return Ok(Val::pure(Scalar::i(self.ctx)));
        }
        match self.mode {
            AtomMode::Cochain { dim } if name == "D" => {
                let p = self.index(dim)?;
                let q = self.index(dim)?;
                let mut lin = BTreeMap::new();
                lin.insert((p - 1, q - 1), Scalar::one(self.ctx));
                return Ok(Val { s: Scalar::zero(self.ctx), lin });
            }
            AtomMode::Constants { dim, resolve } if name == "c" => {
                let i = self.index(dim)?;
                let j = self.index(dim)?;
                let k = self.index(dim)?;
                return Ok(Val::pure(resolve(i - 1, j - 1, k - 1)));
            }
            _ => {}
        }
        match self.ctx.index(&name) {
            Some(_) => Ok(Val::pure(Scalar::param(self.ctx, &name))),
            None => err(at, format!("unknown parameter {name:?}")),
        }
    }
}

fn run(text: &str, ctx: &Context, mode: AtomMode<'_>) -> Result<Val, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return err(0, "empty expression");
    }
    let mut p = Parser { toks, pos: 0, end: text.len(), ctx, mode };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return err(p.here(), "trailing input after expression");
    }
    Ok(v)
}

/// Parses an expression in the context's parameters (plus `i` and rational
/// literals) into an exact field value.
pub fn parse_expression(text: &str, ctx: &Context) -> Result<Scalar, ParseError> {
    Ok(run(text, ctx, AtomMode::ParamsOnly)?.s)
}

/// Parses an equation side over structure-constant symbols `c[i][j][k]`
/// (1-based, each index at most `dim`); the callback supplies the value of
/// each symbol. Full field arithmetic is allowed, including products of
/// constants.
pub fn parse_constant_equation(
    text: &str,
    ctx: &Context,
    dim: usize,
    resolve: &dyn Fn(usize, usize, usize) -> Scalar,
) -> Result<Scalar, ParseError> {
    Ok(run(text, ctx, AtomMode::Constants { dim, resolve })?.s)
}

/// Parses a linear expression over `D[p][q]` generators (1-based, indexes at
/// most `dim`) into its coefficient vector, laid out row-major:
/// entry `(p-1)*dim + (q-1)` is the coefficient of `D[p][q]`. The expression
/// must be homogeneous linear: a leftover constant part is an error (the
/// plain `0` is accepted as the zero vector).
pub fn parse_cochain(text: &str, ctx: &Context, dim: usize) -> Result<Vec<Scalar>, ParseError> {
    let v = run(text, ctx, AtomMode::Cochain { dim })?;
    if !v.s.is_zero() {
        return err(0, "cochain expression has a non-cochain constant part");
    }
    let mut out = vec![Scalar::zero(ctx); dim * dim];
    for ((p, q), c) in v.lin {
        out[p * dim + q] = c;
    }
    Ok(out)
}
