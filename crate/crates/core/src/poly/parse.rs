//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Integer literals are reduced mod p. When s > 1 the generator identifier
//! (default `a`) denotes the chosen generator of F_q over F_p.

use super::{BaseField, SparsePoly};
use crate::{Error, Result};

pub const DEFAULT_GENERATOR: &str = "a";

/// Parses `text` as a polynomial in `vars` over `base`.
pub fn parse_poly(text: &str, vars: &[impl AsRef<str>], base: &BaseField) -> Result<SparsePoly> {
    parse_poly_with_generator(text, vars, base, DEFAULT_GENERATOR)
}

pub fn parse_poly_with_generator(
    text: &str,
    vars: &[impl AsRef<str>],
    base: &BaseField,
    generator: &str,
) -> Result<SparsePoly> {
    let vars: Vec<&str> = vars.iter().map(|v| v.as_ref()).collect();
    if base.s() > 1 && vars.contains(&generator) {
        return Err(Error::InvalidParameter(format!(
            "variable name `{generator}` collides with the field generator"
        )));
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars: &vars,
        base,
        generator: (base.s() > 1).then_some(generator),
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
    base: &'a BaseField,
    generator: Option<&'a str>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SparsePoly> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<SparsePoly> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(b'-') => return Err(Error::NegativeExponent { pos: self.pos }),
                Some(c) if c.is_ascii_digit() => {}
                _ => return Err(self.error("expected exponent")),
            }
            let start = self.pos;
            let digits = self.digits();
            let e: u32 = digits.parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: "exponent too large".into(),
            })?;
            return Ok(atom.pow(e));
        }
        Ok(atom)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<SparsePoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.base.p() as u64;
                let value = self
                    .digits()
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(SparsePoly::from_int(self.base, self.nvars(), value as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(SparsePoly::var(self.base, self.nvars(), i));
                }
                if self.generator == Some(name) {
                    let fq = self.base.descriptor();
                    let g = fq.element(&[0, 1]).expect("s > 1");
                    return Ok(SparsePoly::constant(self.base, self.nvars(), g));
                }
                Err(Error::UnknownVariable {
                    name: name.to_string(),
                    pos: start,
                })
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
