//! Parser and canonical printer for the compact structure-constant notation.
//!
//! An algebra is written `(de^1, de^2, ..., de^n)`; each entry is a signed
//! sum of terms `coeff.ij` or bare `ij`, e.g. `(a1.17,-47-a2.57,0)`.
//! A coefficient may also multiply a parenthesised group of index strings:
//! `2a.(36+45)`. Forms use the same terms with `k` digits, e.g.
//! `1425+1436-3457`; unsorted digit strings are normalised with their
//! permutation sign.
//!
//! ```text
//! algebra := "(" entry ("," entry)* ")"
//! entry   := "0" | term (("+"|"-") term)*
//! term    := [coeff "."] (digits | "(" term (("+"|"-") term)* ")")
//! coeff   := signed products of integers, "/" integer, parameters,
//!            "^" integer and parenthesised sums
//! ```

use std::fmt::Write as _;

use num_traits::Signed;
use thiserror::Error;

use crate::exterior::{Form, KForm};
use crate::lie::{LieAlgebra, LieError};
use crate::linalg::{zero_vector, Vector};
use crate::scalar::{normalize_name, Monomial, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("mixed degrees: expected {expected} indices, found {found}")]
    DegreeMixing { expected: usize, found: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let chars = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '\u{2212}' | '\u{2013}' => '-',
                '\u{00b7}' | '\u{22c5}' => '*',
                c => c,
            })
            .collect();
        Parser { chars, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn integer(&mut self) -> Option<num_bigint::BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    fn ident(&mut self) -> Option<String> {
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Some(normalize_name(&self.chars[start..self.pos].iter().collect::<String>()))
    }

    /// sum := product (("+"|"-") product)*
    fn sum(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.signed_product()?;
        loop {
            if self.eat('+') {
                acc += &self.product()?;
            } else if self.eat('-') {
                acc -= &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn signed_product(&mut self) -> Result<Scalar, ParseError> {
        if self.eat('-') {
            Ok(-self.product()?)
        } else {
            self.eat('+');
            self.product()
        }
    }

    fn product(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.integer().ok_or_else(|| self.err("expected an integer divisor"))?;
                    if d == 0.into() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&num_rational::BigRational::new(1.into(), d));
                }
                Some(c) if c.is_ascii_alphabetic() || c == '(' => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Scalar, ParseError> {
        let base = self.factor()?;
        if self.eat('^') {
            let e = self.integer().ok_or_else(|| self.err("expected an exponent"))?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn factor(&mut self) -> Result<Scalar, ParseError> {
        if let Some(n) = self.integer() {
            return Ok(Scalar::from_rational(num_rational::BigRational::from_integer(n)));
        }
        if let Some(name) = self.ident() {
            return Ok(Scalar::param(&name));
        }
        if self.eat('(') {
            let s = self.sum()?;
            self.expect(')')?;
            return Ok(s);
        }
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        Err(self.err("expected a coefficient"))
    }

    /// Digit string as zero-based indices.
    fn digits(&mut self) -> Result<Vec<usize>, ParseError> {
        let mut idx = Vec::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            let d = c.to_digit(10).expect("digit") as usize;
            if d == 0 {
                return Err(self.err("index 0 is not allowed"));
            }
            idx.push(d - 1);
            self.pos += 1;
        }
        if idx.is_empty() {
            return Err(self.err("expected index digits"));
        }
        Ok(idx)
    }

    /// Signed terms until `,`, `)` or end; each as (coefficient, indices).
    fn terms(&mut self) -> Result<Vec<(Scalar, Vec<usize>)>, ParseError> {
        let mut out = Vec::new();
        let mut first = true;
        loop {
            let sign = if self.eat('-') {
                Scalar::int(-1)
            } else if self.eat('+') || first {
                Scalar::one()
            } else {
                return Ok(out);
            };
            first = false;
            for (c, idx) in self.term()? {
                out.push((&sign * &c, idx));
            }
            if !matches!(self.peek(), Some('+') | Some('-')) {
                return Ok(out);
            }
        }
    }

    fn term(&mut self) -> Result<Vec<(Scalar, Vec<usize>)>, ParseError> {
        let save = self.pos;
        if let Ok(c) = self.product() {
            if self.eat('.') {
                return Ok(self.indexed()?.into_iter().map(|(d, idx)| (&c * &d, idx)).collect());
            }
        }
        self.pos = save;
        self.indexed()
    }

    fn indexed(&mut self) -> Result<Vec<(Scalar, Vec<usize>)>, ParseError> {
        if self.eat('(') {
            let inner = self.terms()?;
            self.expect(')')?;
            return Ok(inner);
        }
        Ok(vec![(Scalar::one(), self.digits()?)])
    }
}

fn check_terms(terms: &[(Scalar, Vec<usize>)], degree: Option<usize>, dim: usize) -> Result<usize, ParseError> {
    let expected = degree.or_else(|| terms.first().map(|t| t.1.len())).unwrap_or(0);
    for (_, idx) in terms {
        if idx.len() != expected {
            return Err(ParseError::DegreeMixing { expected, found: idx.len() });
        }
        if let Some(&i) = idx.iter().find(|&&i| i >= dim) {
            return Err(ParseError::IndexOutOfRange { index: i + 1, dim });
        }
    }
    Ok(expected)
}

fn is_literal_zero(p: &Parser) -> bool {
    p.peek() == Some('0') && matches!(p.chars.get(p.pos + 1), None | Some(',') | Some(')'))
}

/// Parses `(entry, ..., entry)` into the algebra with those differentials.
pub fn parse_algebra(text: &str) -> Result<LieAlgebra, ParseError> {
    let mut p = Parser::new(text);
    p.expect('(')?;
    let mut entries: Vec<Vec<(Scalar, Vec<usize>)>> = Vec::new();
    loop {
        if is_literal_zero(&p) {
            p.pos += 1;
            entries.push(Vec::new());
        } else {
            entries.push(p.terms()?);
        }
        if p.eat(',') {
            continue;
        }
        p.expect(')')?;
        break;
    }
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    let n = entries.len();
    let mut des = Vec::with_capacity(n);
    for terms in &entries {
        check_terms(terms, Some(2), n)?;
        let mut f = KForm::zero(n, 2);
        for (c, idx) in terms {
            if idx[0] == idx[1] {
                return Err(ParseError::Syntax { pos: 0, msg: format!("repeated index in {}{}", idx[0] + 1, idx[1] + 1) });
            }
            f.add_term(idx, c.clone());
        }
        des.push(f);
    }
    Ok(LieAlgebra::from_differentials(&des)?)
}

/// Parses a form on `dim` dimensions; `"0"` gives the zero 0-form.
pub fn parse_form(text: &str, dim: usize) -> Result<KForm, ParseError> {
    parse_form_inner(text, dim, None)
}

/// Like [`parse_form`] with a prescribed degree (so `"0"` has that degree).
pub fn parse_form_of_degree(text: &str, dim: usize, degree: usize) -> Result<KForm, ParseError> {
    parse_form_inner(text, dim, Some(degree))
}

fn parse_form_inner(text: &str, dim: usize, degree: Option<usize>) -> Result<KForm, ParseError> {
    let mut p = Parser::new(text);
    if is_literal_zero(&p) && p.chars.len() == 1 {
        return Ok(Form::zero(dim, degree.unwrap_or(0)));
    }
    let terms = p.terms()?;
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    let k = check_terms(&terms, degree, dim)?;
    let mut f = Form::zero(dim, k);
    for (c, idx) in terms {
        f.add_term(&idx, c);
    }
    Ok(f)
}

pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    let mut p = Parser::new(text);
    let s = p.sum()?;
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    Ok(s)
}

/// Parses `-a1*e1 + 2e3` style vectors; every term must be linear in one `e<k>`.
pub fn parse_vector(text: &str, dim: usize) -> Result<Vector, ParseError> {
    let s = parse_scalar(text)?;
    let mut v = zero_vector(dim);
    for (m, c) in s.terms() {
        let basis: Vec<_> = m.factors().iter().filter(|(n, _)| basis_index(n).is_some()).collect();
        let [(name, 1)] = basis.as_slice() else {
            return Err(ParseError::Syntax { pos: 0, msg: format!("term {m} is not linear in one basis vector") });
        };
        let i = basis_index(name).expect("filtered");
        if i == 0 || i > dim {
            return Err(ParseError::IndexOutOfRange { index: i, dim });
        }
        let rest: Vec<(String, u32)> = m.factors().iter().filter(|(n, _)| n != name).cloned().collect();
        let mut coeff = Scalar::monomial(c.clone(), Monomial::one());
        for (n, e) in rest {
            coeff = &coeff * &Scalar::param(&n).pow(e);
        }
        v[i - 1] += &coeff;
    }
    Ok(v)
}

fn basis_index(name: &str) -> Option<usize> {
    name.strip_prefix('e').filter(|r| !r.is_empty() && r.chars().all(|c| c.is_ascii_digit()))?.parse().ok()
}

fn index_string(idx: &[usize]) -> String {
    idx.iter()
        .map(|&i| if i < 9 { char::from(b'1' + i as u8).to_string() } else { format!("{{{}}}", i + 1) })
        .collect()
}

/// Canonical text of one coefficient-times-indices term (with leading sign if negative).
fn term_string(c: &Scalar, idx: &str) -> String {
    if let Some(q) = c.constant() {
        let a = q.abs();
        let sign = if q.is_negative() { "-" } else { "" };
        if num_traits::One::is_one(&a) {
            return format!("{sign}{idx}");
        }
        return format!("{sign}{}.{idx}", Scalar::from_rational(a));
    }
    if c.num_terms() == 1 {
        return format!("{c}.{idx}");
    }
    if c.leading_is_negative() {
        format!("-({}).{idx}", -c)
    } else {
        format!("({c}).{idx}")
    }
}

fn join_terms(parts: impl IntoIterator<Item = String>) -> String {
    let mut out = String::new();
    for t in parts {
        if !out.is_empty() && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_form(f: &KForm) -> String {
    if f.degree() == 0 {
        return f.coeff(&[]).to_string();
    }
    join_terms(f.terms().into_iter().map(|(idx, c)| term_string(c, &index_string(&idx))))
}

pub fn print_algebra(g: &LieAlgebra) -> String {
    let mut out = String::from("(");
    for (k, de) in g.differentials().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push_str(&print_form(de));
    }
    out.push(')');
    out
}

/// Canonical re-print of algebra text.
pub fn canonicalize_algebra(text: &str) -> Result<String, ParseError> {
    Ok(print_algebra(&parse_algebra(text)?))
}

/// `e1*a1 + ...` style rendering of a vector, re-parsable by [`parse_vector`].
pub fn print_vector(v: &[Scalar]) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let t = if c.is_one() {
            format!("e{}", i + 1)
        } else if c.num_terms() == 1 {
            format!("{c}*e{}", i + 1)
        } else {
            format!("({c})*e{}", i + 1)
        };
        if !out.is_empty() && !t.starts_with('-') {
            out.push('+');
        }
        let _ = write!(out, "{t}");
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Floating-point form with coefficients rounded to `digits` decimals; tiny terms are dropped.
pub fn print_real_form(f: &crate::exterior::RealForm, digits: usize) -> String {
    let cut = 0.5 * 10f64.powi(-(digits as i32));
    let mut out = String::new();
    for (idx, c) in f.terms() {
        if c.abs() < cut {
            continue;
        }
        let mag = format!("{:.*}", digits, c.abs());
        let mag = mag.trim_end_matches('0').trim_end_matches('.');
        let body = if mag == "1" { index_string(&idx) } else { format!("{mag}.{}", index_string(&idx)) };
        out.push_str(if *c < 0.0 { "-" } else if out.is_empty() { "" } else { "+" });
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl std::fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_algebra(self))
    }
}

impl std::fmt::Display for Form<Scalar> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_form(self))
    }
}
