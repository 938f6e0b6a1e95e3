//! Recursive-descent parser for polynomials, forms, fields and branch tuples.
//!
//! `*` multiplies (wedge for forms). `^` followed by an integer is a power,
//! otherwise it is a wedge, so both `x1^2*dx2^dx3` and `x1^2*dx2*dx3` work.
//! `dx<var>` is the differential of a variable.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::AlgresError;
use crate::exterior::{euler_field, wedge, DiffForm, VectorField};
use crate::qpoly::{Monomial, Polynomial, Rational, Series1D, WeightSystem};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Comma,
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str, line: usize) -> Result<Lexed, AlgresError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(s.parse().unwrap()), col));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => return Err(AlgresError::parse(line, col, format!("unexpected character '{c}'"))),
        };
        toks.push((t, col));
        i += 1;
    }
    Ok(Lexed { toks })
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(src: &str, vars: &'a [String], line: usize) -> Result<Self, AlgresError> {
        let lexed = lex(src, line)?;
        Ok(Parser { toks: lexed.toks, pos: 0, line, end_col: src.chars().count() + 1, vars })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn err(&self, msg: impl Into<String>) -> AlgresError {
        AlgresError::parse(self.line, self.col(), msg)
    }

    fn expect(&mut self, t: Tok) -> Result<(), AlgresError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {t:?}")))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn dim(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<DiffForm, AlgresError> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                neg = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.scale(&-Rational::one());
        }
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => Rational::one(),
                Some(Tok::Minus) => -Rational::one(),
                _ => break,
            };
            self.pos += 1;
            let col = self.col();
            let t = self.term()?;
            if t.degree() != acc.degree() {
                if t.is_zero() {
                    continue;
                }
                if acc.is_zero() {
                    acc = t.scale(&sign);
                    continue;
                }
                return Err(AlgresError::parse(self.line, col, "sum of forms of different degrees"));
            }
            acc.add_scaled(&t, &sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<DiffForm, AlgresError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                }
                Some(Tok::Caret) if !matches!(self.peek_at(1), Some(Tok::Num(_))) => {
                    self.pos += 1;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let Some(Tok::Num(d)) = self.peek().cloned() else {
                        return Err(self.err("division only by an integer literal"));
                    };
                    if d.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    self.pos += 1;
                    acc = acc.scale(&Rational::new(BigInt::one(), d));
                    continue;
                }
                _ => break,
            }
            let col = self.col();
            let rhs = self.power()?;
            acc = wedge(&acc, &rhs).map_err(|e| AlgresError::parse(self.line, col, e.to_string()))?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<DiffForm, AlgresError> {
        let base = self.atom()?;
        let mut out = base;
        while self.peek() == Some(&Tok::Caret) {
            let Some(Tok::Num(e)) = self.peek_at(1).cloned() else { break };
            if out.degree() != 0 {
                return Err(self.err("power of a form of positive degree"));
            }
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            self.pos += 2;
            out = DiffForm::function(out.as_function().pow(e));
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<DiffForm, AlgresError> {
        let n = self.dim();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(DiffForm::function(Polynomial::constant(n, Rational::from_integer(v))))
            }
            Some(Tok::Ident(name)) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    self.pos += 1;
                    return Ok(DiffForm::function(Polynomial::var(n, i)));
                }
                if let Some(rest) = name.strip_prefix('d') {
                    if let Some(i) = self.vars.iter().position(|v| v == rest) {
                        self.pos += 1;
                        return Ok(DiffForm::dx(n, i));
                    }
                }
                Err(self.err(format!("unknown symbol '{name}'")))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.power()?.scale(&-Rational::one()))
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn finish(&self) -> Result<(), AlgresError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }
}

pub fn parse_form_at(src: &str, vars: &[String], line: usize) -> Result<DiffForm, AlgresError> {
    let mut p = Parser::new(src, vars, line)?;
    if p.at_end() {
        return Err(p.err("empty expression"));
    }
    let f = p.expr()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_form(src: &str, vars: &[String]) -> Result<DiffForm, AlgresError> {
    parse_form_at(src, vars, 1)
}

pub fn parse_polynomial_at(src: &str, vars: &[String], line: usize) -> Result<Polynomial, AlgresError> {
    let f = parse_form_at(src, vars, line)?;
    if f.degree() != 0 {
        return Err(AlgresError::parse(line, 1, "expected a polynomial, found a differential form"));
    }
    Ok(f.as_function())
}

pub fn parse_polynomial(src: &str, vars: &[String]) -> Result<Polynomial, AlgresError> {
    parse_polynomial_at(src, vars, 1)
}

fn split_tuple(src: &str, line: usize) -> Result<Vec<(String, usize)>, AlgresError> {
    let s = src.trim();
    let offset = src.find(s).unwrap_or(0);
    if !s.starts_with('(') || !s.ends_with(')') {
        return Err(AlgresError::parse(line, offset + 1, "expected a parenthesized tuple"));
    }
    let inner = &s[1..s.len() - 1];
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push((inner[start..i].to_string(), offset + 2 + start));
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push((inner[start..].to_string(), offset + 2 + start));
    Ok(parts)
}

/// Parse `(p1, p2, ...)` of polynomials in one variable `t`.
pub fn parse_series_tuple_at(src: &str, var: &str, line: usize) -> Result<Vec<Series1D>, AlgresError> {
    let vars = vec![var.to_string()];
    let mut out = Vec::new();
    for (part, col) in split_tuple(src, line)? {
        let p = parse_polynomial_at(&part, &vars, line).map_err(|e| match e {
            AlgresError::Parse { line, col: c, msg } => AlgresError::Parse { line, col: col + c - 1, msg },
            other => other,
        })?;
        out.push(Series1D::from_coeffs(p.terms().map(|(m, c)| (m.0[0], c.clone()))));
    }
    Ok(out)
}

pub fn parse_series_tuple(src: &str, var: &str) -> Result<Vec<Series1D>, AlgresError> {
    parse_series_tuple_at(src, var, 1)
}

/// Parse a vector field: either `(X1, ..., Xn)` or `<polynomial>*E` where
/// `E` is the Euler field of `w`.
pub fn parse_field(src: &str, vars: &[String], w: &WeightSystem) -> Result<VectorField, AlgresError> {
    let s = src.trim();
    if s.starts_with('(') {
        let mut comps = Vec::new();
        for (part, _) in split_tuple(s, 1)? {
            comps.push(parse_polynomial(&part, vars)?);
        }
        if comps.len() != vars.len() {
            return Err(AlgresError::parse(1, 1, format!("field needs {} components", vars.len())));
        }
        return Ok(VectorField::new(comps));
    }
    let mut ext: Vec<String> = vars.to_vec();
    ext.push("E".into());
    let n = vars.len();
    let p = parse_polynomial(s, &ext)?;
    let mut mult = Polynomial::zero(n);
    for (m, c) in p.terms() {
        if m.0[n] != 1 {
            return Err(AlgresError::parse(1, 1, "field must be linear in E"));
        }
        mult.add_term(Monomial(m.0[..n].to_vec()), c);
    }
    Ok(euler_field(w).scale_by(&mult))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, ratio};

    fn v3() -> Vec<String> {
        ["x1", "x2", "x3"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn polynomials() {
        let p = parse_polynomial("x1^2 + x3^3", &v3()).unwrap();
        assert_eq!(p, &Polynomial::var(3, 0).pow(2) + &Polynomial::var(3, 2).pow(3));
        let q = parse_polynomial("-1/2*x2 + 3/4", &v3()).unwrap();
        assert_eq!(q.constant_term(), ratio(3, 4));
        assert_eq!(q.coeff(&Monomial(vec![0, 1, 0])), ratio(-1, 2));
        let r = parse_polynomial("(x1 - x2)^2", &v3()).unwrap();
        assert_eq!(r.num_terms(), 3);
    }

    #[test]
    fn forms() {
        let f = parse_form("x2*dx2^dx3 + 1/2*x3*dx1^dx3", &v3()).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.coeff(&[0, 2]), Polynomial::var(3, 2).scale(&ratio(1, 2)));
        let g = parse_form("dx3^dx2", &v3()).unwrap();
        assert_eq!(g.coeff(&[1, 2]), Polynomial::constant(3, rat(-1)));
        let h = parse_form("x1^2*dx2*dx3", &v3()).unwrap();
        assert_eq!(h.coeff(&[1, 2]), Polynomial::var(3, 0).pow(2));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_polynomial_at("x1 + y", &v3(), 7) {
            Err(AlgresError::Parse { line, col, .. }) => {
                assert_eq!(line, 7);
                assert_eq!(col, 6);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_form("dx1 + x1", &v3()).is_err());
        assert!(parse_form("dx1^2", &v3()).is_err());
        assert!(parse_polynomial("x1 +", &v3()).is_err());
        assert!(parse_polynomial("x1 x2", &v3()).is_err());
    }

    #[test]
    fn tuples_and_fields() {
        let s = parse_series_tuple("(t^6, t^5, -t^4)", "t").unwrap();
        assert_eq!(s[2], Series1D::monomial(4, rat(-1)));
        let w = WeightSystem::new(vec![6, 5, 4]).unwrap();
        let x = parse_field("x1*x3*E", &v3(), &w).unwrap();
        assert_eq!(x.components[0], parse_polynomial("6*x1^2*x3", &v3()).unwrap());
        let e = parse_field("E", &v3(), &w).unwrap();
        assert_eq!(e, euler_field(&w));
        let t = parse_field("(x2, -x1, 0)", &v3(), &w).unwrap();
        assert_eq!(t.components[1], parse_polynomial("-x1", &v3()).unwrap());
    }
}
