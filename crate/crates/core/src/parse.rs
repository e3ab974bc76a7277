//! Text syntax for field descriptors, polynomials and field elements.
//!
//! Descriptors: `Q`, `F2`, `F3(t)`, `F2[a]/(a^2+a+1)`, and towers such as
//! `F2[a]/(a^2+a+1)[b]/(b^2+b+a)`. An extension generator written as `x`
//! collides with the polynomial indeterminate and is renamed to the first
//! free letter of `a, b, c, …`.
//!
//! Polynomials: `+ - * / ^`, parentheses, integer literals, the
//! indeterminate `x` (or `X`), and the field's own symbols. Juxtaposition
//! multiplies (`2x`). Division is only allowed by nonzero constants.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fields::{check_symbol, Field, FieldElement};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push(Token {
                tok: Tok::Num(n),
                start,
                end: i,
            });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                start,
                end: i,
            });
        } else if "+-*/^()".contains(c) {
            out.push(Token {
                tok: Tok::Op(c),
                start: i,
                end: i + 1,
            });
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap();
            return Err(Error::parse(ch.to_string(), "unexpected character"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    field: &'a Field,
    vars: &'a [&'a str],
}

type Spanned = (Poly, usize, usize);

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn peek_op(&self, op: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Op(c), .. }) if *c == op)
    }

    fn text(&self, start: usize, end: usize) -> String {
        self.src[start..end].to_string()
    }

    fn eof_error(&self) -> Error {
        Error::parse("<end of input>", "unexpected end of input")
    }

    fn expr(&mut self) -> Result<Spanned> {
        let (mut acc, start, mut end) = self.term()?;
        loop {
            let op = if self.peek_op('+') {
                '+'
            } else if self.peek_op('-') {
                '-'
            } else {
                break;
            };
            self.pos += 1;
            let (rhs, _, e) = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
            end = e;
        }
        Ok((acc, start, end))
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Token {
                tok: Tok::Num(_) | Tok::Ident(_) | Tok::Op('('),
                ..
            })
        )
    }

    fn term(&mut self) -> Result<Spanned> {
        let (mut acc, start, mut end) = self.unary()?;
        loop {
            if self.peek_op('*') {
                self.pos += 1;
                let (rhs, _, e) = self.unary()?;
                acc = &acc * &rhs;
                end = e;
            } else if self.peek_op('/') {
                self.pos += 1;
                let (rhs, rs, e) = self.unary()?;
                end = e;
                if !rhs.is_constant() {
                    return Err(Error::parse(
                        self.text(rs, e),
                        "division by a non-constant polynomial",
                    ));
                }
                let c = rhs.coeff(0);
                let inv = self.field.inv(&c).map_err(|_| {
                    Error::parse(
                        self.text(start, e),
                        format!("`{}` is zero in {}", self.text(rs, e), self.field),
                    )
                })?;
                acc = acc.scale(&inv);
            } else if self.starts_factor() {
                let (rhs, _, e) = self.power()?;
                acc = &acc * &rhs;
                end = e;
            } else {
                break;
            }
        }
        Ok((acc, start, end))
    }

    fn unary(&mut self) -> Result<Spanned> {
        if self.peek_op('-') || self.peek_op('+') {
            let t = self.toks[self.pos].clone();
            self.pos += 1;
            let (v, _, e) = self.unary()?;
            let v = if t.tok == Tok::Op('-') { -&v } else { v };
            return Ok((v, t.start, e));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Spanned> {
        let (base, start, mut end) = self.primary()?;
        if self.peek_op('^') {
            self.pos += 1;
            let t = self.peek().cloned().ok_or_else(|| self.eof_error())?;
            let e = match &t.tok {
                Tok::Num(n) => u32::try_from(n)
                    .ok()
                    .filter(|&e| e <= 4096)
                    .ok_or_else(|| Error::parse(self.text(t.start, t.end), "exponent too large"))?,
                _ => {
                    return Err(Error::parse(
                        self.text(t.start, t.end),
                        "exponent must be a non-negative integer",
                    ))
                }
            };
            self.pos += 1;
            end = t.end;
            return Ok((base.pow(e), start, end));
        }
        Ok((base, start, end))
    }

    fn primary(&mut self) -> Result<Spanned> {
        let t = self.peek().cloned().ok_or_else(|| self.eof_error())?;
        self.pos += 1;
        match &t.tok {
            Tok::Num(n) => Ok((
                Poly::constant(self.field, self.field.from_bigint(n)),
                t.start,
                t.end,
            )),
            Tok::Ident(name) => {
                if self.vars.contains(&name.as_str()) {
                    Ok((Poly::x(self.field), t.start, t.end))
                } else if let Some(c) = self.field.symbol_value(name) {
                    Ok((Poly::constant(self.field, c), t.start, t.end))
                } else {
                    Err(Error::parse(
                        name.clone(),
                        format!("unknown symbol over {}", self.field),
                    ))
                }
            }
            Tok::Op('(') => {
                let (v, _, _) = self.expr()?;
                match self.peek() {
                    Some(Token {
                        tok: Tok::Op(')'),
                        end,
                        ..
                    }) => {
                        let end = *end;
                        self.pos += 1;
                        Ok((v, t.start, end))
                    }
                    Some(other) => Err(Error::parse(
                        self.text(other.start, other.end),
                        "expected `)`",
                    )),
                    None => Err(self.eof_error()),
                }
            }
            Tok::Op(_) => Err(Error::parse(self.text(t.start, t.end), "unexpected operator")),
        }
    }
}

fn parse_with(field: &Field, src: &str, vars: &[&str]) -> Result<Poly> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::parse("<empty>", "empty expression"));
    }
    let mut p = Parser {
        src,
        toks,
        pos: 0,
        field,
        vars,
    };
    let (v, _, _) = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(Error::parse(p.text(t.start, t.end), "unexpected trailing input"));
    }
    Ok(v)
}

/// Parses a polynomial in `x` (or `X`) over `field`.
pub fn parse_poly(field: &Field, src: &str) -> Result<Poly> {
    parse_with(field, src, &["x", "X"])
}

/// Parses a polynomial in an arbitrary indeterminate.
pub fn parse_poly_in(field: &Field, src: &str, var: &str) -> Result<Poly> {
    parse_with(field, src, &[var])
}

/// Parses a constant of `field`.
pub fn parse_element(field: &Field, src: &str) -> Result<FieldElement> {
    let p = parse_with(field, src, &[])?;
    Ok(FieldElement::new(field, p.coeff(0)))
}

fn fresh_generator(base: &Field) -> String {
    let taken = base.symbols();
    ('a'..='w')
        .map(|c| c.to_string())
        .find(|c| !taken.contains(c))
        .expect("fewer than 23 tower levels")
}

/// Parses a field descriptor.
pub fn parse_field(src: &str) -> Result<Field> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |msg: &str| Error::parse(src.trim(), msg.to_string());
    let (mut field, mut rest) = if let Some(rest) = s.strip_prefix('Q') {
        (Field::rationals(), rest)
    } else if let Some(after) = s.strip_prefix('F') {
        let digits = after.chars().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return Err(bad("expected a prime after `F`"));
        }
        let p: u64 = after[..digits]
            .parse()
            .map_err(|_| bad("prime is too large"))?;
        let after = &after[digits..];
        if let Some(inner) = after.strip_prefix('(') {
            let close = inner.find(')').ok_or_else(|| bad("missing `)`"))?;
            let var = &inner[..close];
            (Field::rational_functions(p, var)?, &inner[close + 1..])
        } else {
            (Field::prime(p)?, after)
        }
    } else {
        return Err(bad("expected `Q` or `F<p>`"));
    };
    while !rest.is_empty() {
        let inner = rest.strip_prefix('[').ok_or_else(|| bad("expected `[`"))?;
        let close = inner.find(']').ok_or_else(|| bad("missing `]`"))?;
        let written = &inner[..close];
        check_symbol(written)?;
        let after = inner[close + 1..]
            .strip_prefix("/(")
            .ok_or_else(|| bad("expected `/(` after the generator"))?;
        let mut depth = 1usize;
        let mut end = None;
        for (i, c) in after.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        end = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let end = end.ok_or_else(|| bad("unbalanced parentheses"))?;
        let modulus = parse_poly_in(&field, &after[..end], written)?;
        let generator = if written == "x" || written == "X" || field.symbols().iter().any(|s| s == written)
        {
            fresh_generator(&field)
        } else {
            written.to_string()
        };
        field = Field::extension(modulus, &generator)?;
        rest = &after[end + 1..];
    }
    Ok(field)
}
