//! Expression grammar shared by symbols and ladder operators.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | factor
//! factor := base ('^' int)?
//! base   := number | 'hbar' | 'i' | 'sqrt(hbar/2)' | var | '(' expr ')'
//! var    := ('x' | 'p' | 'z' | 'zbar' | 'a' | 'abar' | 'ad') index?
//! ```
//!
//! Division is accepted only by invertible scalars (a rational times a power
//! of `hbar`). Products are evaluated left to right, which matters for
//! ladder expressions.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarName {
    X,
    P,
    Z,
    ZBar,
    A,
    ABar,
    Ad,
}

impl VarName {
    fn from_ident(s: &str) -> Option<VarName> {
        Some(match s {
            "x" => VarName::X,
            "p" => VarName::P,
            "z" => VarName::Z,
            "zbar" => VarName::ZBar,
            "a" => VarName::A,
            "abar" => VarName::ABar,
            "ad" => VarName::Ad,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VarName::X => "x",
            VarName::P => "p",
            VarName::Z => "z",
            VarName::ZBar => "zbar",
            VarName::A => "a",
            VarName::ABar => "abar",
            VarName::Ad => "ad",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(BigRational),
    Hbar,
    ImagUnit,
    SqrtHalfHbar,
    Var {
        name: VarName,
        /// zero-based mode
        mode: usize,
        position: usize,
    },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String, Option<usize>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let int_part = &text[start..i];
                let mut frac_part = "";
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    let fs = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    frac_part = &text[fs..i];
                }
                if int_part.is_empty() && frac_part.is_empty() {
                    return Err(Error::Syntax {
                        position: start,
                        message: "malformed number".into(),
                    });
                }
                let digits = format!("{int_part}{frac_part}");
                let numer: BigInt = digits.parse().map_err(|_| Error::Syntax {
                    position: start,
                    message: "malformed number".into(),
                })?;
                let denom = num::pow(BigInt::from(10), frac_part.len());
                out.push((Tok::Num(BigRational::new(numer, denom)), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let name = text[start..i].to_string();
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let index = if ds < i {
                    Some(text[ds..i].parse::<usize>().map_err(|_| Error::Syntax {
                        position: ds,
                        message: "malformed index".into(),
                    })?)
                } else {
                    None
                };
                out.push((Tok::Ident(name, index), start));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    position: start,
                    message: format!("unexpected character `{}`", c as char),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn position(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.position(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    let at = self.position();
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.factor(),
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.bump() {
                Some((Tok::Num(n), at)) => {
                    if !n.is_integer() || n.is_negative() {
                        return Err(Error::Syntax {
                            position: at,
                            message: "exponent must be a non-negative integer".into(),
                        });
                    }
                    let e: u32 = n.to_integer().try_into().map_err(|_| Error::Syntax {
                        position: at,
                        message: "exponent too large".into(),
                    })?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => {
                    self.pos -= 1;
                    self.error("expected integer exponent")
                }
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr> {
        let at = self.position();
        match self.bump() {
            Some((Tok::Num(n), _)) => Ok(Expr::Number(n)),
            Some((Tok::LParen, _)) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some((Tok::Ident(name, index), _)) => match (name.as_str(), index) {
                ("hbar", None) => Ok(Expr::Hbar),
                ("i", None) => Ok(Expr::ImagUnit),
                ("sqrt", None) => {
                    self.expect(Tok::LParen, "`(` after sqrt")?;
                    match self.bump() {
                        Some((Tok::Ident(h, None), _)) if h == "hbar" => {}
                        _ => {
                            self.pos -= 1;
                            return self.error("only sqrt(hbar/2) is supported");
                        }
                    }
                    self.expect(Tok::Slash, "`/` in sqrt(hbar/2)")?;
                    match self.bump() {
                        Some((Tok::Num(n), _)) if n == BigRational::from_integer(2.into()) => {}
                        _ => {
                            self.pos -= 1;
                            return self.error("only sqrt(hbar/2) is supported");
                        }
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::SqrtHalfHbar)
                }
                (ident, index) => match VarName::from_ident(ident) {
                    Some(var) => {
                        let index = index.unwrap_or(1);
                        if index == 0 {
                            return Err(Error::Syntax {
                                position: at,
                                message: "variable indices start at 1".into(),
                            });
                        }
                        Ok(Expr::Var {
                            name: var,
                            mode: index - 1,
                            position: at,
                        })
                    }
                    None => Err(Error::UnknownVariable {
                        name: match index {
                            Some(i) => format!("{ident}{i}"),
                            None => ident.to_string(),
                        },
                        position: at,
                    }),
                },
            },
            Some(_) => {
                self.pos -= 1;
                self.error("expected a number, variable or `(`")
            }
            None => self.error("unexpected end of input"),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    if parser.peek().is_none() {
        return parser.error("empty expression");
    }
    let e = parser.expr()?;
    if parser.peek().is_some() {
        return parser.error("unexpected trailing input");
    }
    Ok(e)
}

/// Algebra an [`Expr`] can be evaluated into.
pub(crate) trait ExprAlgebra {
    type Value: Clone;
    fn scalar(&self, s: Scalar) -> Self::Value;
    fn variable(&self, name: VarName, mode: usize, position: usize) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn as_scalar(&self, a: &Self::Value) -> Option<Scalar>;
    fn max_mode_degree(&self, a: &Self::Value) -> u32;
}

/// Evaluates `expr`; the per-mode degree of every intermediate product is
/// bounded by `degree_cap`.
pub(crate) fn evaluate<A: ExprAlgebra>(expr: &Expr, alg: &A, degree_cap: u32) -> Result<A::Value> {
    let cap_error = |degree: u32| Error::DegreeCap {
        degree,
        cap: degree_cap,
    };
    match expr {
        Expr::Number(n) => Ok(alg.scalar(Scalar::from_rational(n.clone()))),
        Expr::Hbar => Ok(alg.scalar(Scalar::hbar())),
        Expr::ImagUnit => Ok(alg.scalar(Scalar::i())),
        Expr::SqrtHalfHbar => Ok(alg.scalar(Scalar::t_pow(1))),
        Expr::Var {
            name,
            mode,
            position,
        } => alg.variable(*name, *mode, *position),
        Expr::Add(a, b) => Ok(alg.add(&evaluate(a, alg, degree_cap)?, &evaluate(b, alg, degree_cap)?)),
        Expr::Sub(a, b) => Ok(alg.sub(&evaluate(a, alg, degree_cap)?, &evaluate(b, alg, degree_cap)?)),
        Expr::Neg(a) => Ok(alg.neg(&evaluate(a, alg, degree_cap)?)),
        Expr::Mul(a, b) => {
            let l = evaluate(a, alg, degree_cap)?;
            let r = evaluate(b, alg, degree_cap)?;
            let v = alg.mul(&l, &r);
            let d = alg.max_mode_degree(&v);
            if d > degree_cap {
                return Err(cap_error(d));
            }
            Ok(v)
        }
        Expr::Div(a, b, at) => {
            let l = evaluate(a, alg, degree_cap)?;
            let r = evaluate(b, alg, degree_cap)?;
            let inv = alg
                .as_scalar(&r)
                .and_then(|s| s.inverse())
                .ok_or(Error::Syntax {
                    position: *at,
                    message: "division is only allowed by a nonzero rational times a power of hbar"
                        .into(),
                })?;
            Ok(alg.mul(&l, &alg.scalar(inv)))
        }
        Expr::Pow(a, e) => {
            let base = evaluate(a, alg, degree_cap)?;
            // Degrees add under products; reject before expanding.
            let d = alg.max_mode_degree(&base).saturating_mul(*e);
            if d > degree_cap {
                return Err(cap_error(d));
            }
            let mut acc = alg.scalar(Scalar::one());
            for _ in 0..*e {
                acc = alg.mul(&acc, &base);
            }
            Ok(acc)
        }
    }
}

/// Renders `coefficient * factors` as one or more signed terms.
///
/// A coefficient with several `t`-powers or both real and imaginary parts is
/// split into separate terms sharing the same factors, so the output stays
/// inside the grammar without parentheses.
pub(crate) fn render_terms(items: &[(Scalar, Vec<String>)]) -> String {
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for (coef, factors) in items {
        // Highest t power first, real part before imaginary part.
        for (e, c) in coef.terms().collect::<Vec<_>>().into_iter().rev() {
            for (q, imag) in [(&c.re, false), (&c.im, true)] {
                if q.is_zero() {
                    continue;
                }
                pieces.push(render_piece(q, imag, e, factors));
            }
        }
    }
    if pieces.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (negative, body)) in pieces.iter().enumerate() {
        if idx == 0 {
            if *negative {
                out.push('-');
            }
        } else {
            out.push_str(if *negative { " - " } else { " + " });
        }
        out.push_str(body);
    }
    out
}

fn render_piece(q: &BigRational, imag: bool, t_exponent: i32, factors: &[String]) -> (bool, String) {
    let k = t_exponent.div_euclid(2);
    let odd = t_exponent.rem_euclid(2) == 1;
    // q t^(2k) = (q / 2^k) hbar^k
    let two = BigRational::from_integer(2.into());
    let scaled = if k >= 0 {
        q / num::pow(two, k as usize)
    } else {
        q * num::pow(two, (-k) as usize)
    };
    let negative = scaled.is_negative();
    let magnitude = scaled.abs();
    let mut parts: Vec<String> = Vec::new();
    if !magnitude.numer().is_one() {
        parts.push(magnitude.numer().to_string());
    }
    if imag {
        parts.push("i".into());
    }
    match k {
        1 => parts.push("hbar".into()),
        k if k > 1 => parts.push(format!("hbar^{k}")),
        _ => {}
    }
    if odd {
        parts.push("sqrt(hbar/2)".into());
    }
    parts.extend(factors.iter().cloned());
    let mut body = if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    };
    if !magnitude.denom().is_one() {
        body.push('/');
        body.push_str(&magnitude.denom().to_string());
    }
    match k {
        -1 => body.push_str("/hbar"),
        k if k < -1 => body.push_str(&format!("/hbar^{}", -k)),
        _ => {}
    }
    (negative, body)
}

pub(crate) fn power_factor(name: &str, mode: usize, mode_count: usize, exponent: u32) -> Option<String> {
    if exponent == 0 {
        return None;
    }
    let var = if mode_count > 1 {
        format!("{name}{}", mode + 1)
    } else {
        name.to_string()
    };
    Some(if exponent == 1 {
        var
    } else {
        format!("{var}^{exponent}")
    })
}
