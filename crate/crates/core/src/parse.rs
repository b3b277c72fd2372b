//! Polynomial expressions: `coef*var^k*... ± ...`, with parentheses and division by constants.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::ScalarField;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    src: &'a str,
    vars: &'a [String],
    field: ScalarField,
    context: &'a str,
}

fn location(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map(|s| s.chars().count()).unwrap_or(0) + 1;
    (line, column)
}

fn err(src: &str, context: &str, offset: usize, message: impl Into<String>) -> Error {
    let (line, column) = location(src, offset);
    Error::Parse {
        context: context.to_string(),
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(src: &str, context: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let end = chars.get(i).map(|x| x.0).unwrap_or(src.len());
            let n: BigInt = src[chars[start].0..end].parse().expect("digits");
            out.push((Tok::Num(n), off));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'') {
                i += 1;
            }
            // A parenthesised index directly after a name is part of it: t(1).
            if i < chars.len() && chars[i].1 == '(' {
                let mut j = i + 1;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                if j > i + 1 && j < chars.len() && chars[j].1 == ')' {
                    i = j + 1;
                }
            }
            let end = chars.get(i).map(|x| x.0).unwrap_or(src.len());
            out.push((Tok::Ident(src[chars[start].0..end].to_string()), off));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), off));
            i += 1;
        } else {
            return Err(err(src, context, off, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.src.len())
    }

    fn fail(&self, message: impl Into<String>) -> Error {
        err(self.src, self.context, self.offset(), message)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(&Tok::Sym('/')) {
                self.pos += 1;
                let at = self.offset();
                let d = self.unary()?;
                if !d.is_constant() || d.is_zero() {
                    return Err(err(self.src, self.context, at, "division only by nonzero constants"));
                }
                let inv = d.constant_value().expect("nonzero").inv()?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| self.fail("exponent too large"))?;
                    Ok(base.pow(e, self.field))
                }
                _ => Err(self.fail("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.field.from_bigint(&n)))
            }
            Some(Tok::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Poly::var(i as u32, self.field))
                }
                None => Err(self.fail(format!("unknown variable '{name}'"))),
            },
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.fail("expected ')'"));
                }
                Ok(inner)
            }
            Some(t) => Err(self.fail(format!("unexpected token {t:?}"))),
            None => Err(self.fail("unexpected end of expression")),
        }
    }
}

/// Parse `src` as a polynomial in `vars` over `field`; `context` names the location for errors.
pub fn parse_poly(src: &str, vars: &[String], field: ScalarField, context: &str) -> Result<Poly> {
    let toks = tokenize(src, context)?;
    let mut p = Parser {
        toks,
        pos: 0,
        src,
        vars,
        field,
        context,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.fail("trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn round_trip_rendering() {
        let vars = names(&["t(1)", "t(2)", "x"]);
        let q = ScalarField::Rationals;
        let p = parse_poly("2*t(1)*t(2) - t(2) + 1/2*x^3", &vars, q, "test").unwrap();
        let text = p.render(&vars, MonomialOrder::DegRevLex);
        assert_eq!(text, "1/2*x^3 + 2*t(1)*t(2) - t(2)");
        assert_eq!(parse_poly(&text, &vars, q, "test").unwrap(), p);
        let p = parse_poly("-(x - 1)^2 / 2", &vars, q, "test").unwrap();
        assert_eq!(p.render(&vars, MonomialOrder::DegRevLex), "-1/2*x^2 + x - 1/2");
    }

    #[test]
    fn prime_field_literals() {
        let f5 = ScalarField::prime(5).unwrap();
        let vars = names(&["x"]);
        let p = parse_poly("x/2 - 1", &vars, f5, "test").unwrap();
        assert_eq!(p.render(&vars, MonomialOrder::DegRevLex), "3*x + 4");
    }

    #[test]
    fn errors_carry_position() {
        let vars = names(&["x"]);
        match parse_poly("x + y", &vars, ScalarField::Rationals, "C.relations[0]") {
            Err(Error::Parse { context, line, column, .. }) => {
                assert_eq!((context.as_str(), line, column), ("C.relations[0]", 1, 5));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("x/(x)", &vars, ScalarField::Rationals, "t").is_err());
        assert!(parse_poly("x^", &vars, ScalarField::Rationals, "t").is_err());
        assert!(parse_poly("(x", &vars, ScalarField::Rationals, "t").is_err());
    }
}
