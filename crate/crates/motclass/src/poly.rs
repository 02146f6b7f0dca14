use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::MotError;

/// Multivariate polynomial with integer coefficients over named variables.
///
/// Exponent vectors are indexed like `vars`, which is kept sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c.into());
        p
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], BigInt::one());
        Self { vars: vec![name.to_string()], terms }
    }

    /// Build from explicit variables and terms; `vars` is re-sorted.
    pub fn from_terms(vars: &[&str], terms: &[(Vec<u32>, i64)]) -> Self {
        let base = Self { vars: vars.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() };
        let mut p = base.clone();
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len());
            p.add_term(e.clone(), BigInt::from(*c));
        }
        let mut sorted: Vec<String> = p.vars.clone();
        sorted.sort();
        sorted.dedup();
        p.embed(&sorted)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Re-index onto a superset of the current variables (in the given order).
    pub fn embed(&self, vars: &[String]) -> Self {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("embed: variable missing"))
            .collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            terms.insert(ne, c.clone());
        }
        Self { vars: vars.to_vec(), terms }
    }

    fn unify(&self, o: &Self) -> (Self, Self) {
        if self.vars == o.vars {
            return (self.clone(), o.clone());
        }
        let mut vars: Vec<String> = self.vars.iter().chain(o.vars.iter()).cloned().collect();
        vars.sort();
        vars.dedup();
        (self.embed(&vars), o.embed(&vars))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (mut a, b) = self.unify(o);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.unify(o);
        let mut r = Self { vars: a.vars.clone(), terms: BTreeMap::new() };
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(1).embed_like(self);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn embed_like(&self, o: &Self) -> Self {
        let mut vars = self.vars.clone();
        vars.extend(o.vars.iter().cloned());
        vars.sort();
        vars.dedup();
        self.embed(&vars)
    }

    /// Total degrees of the monomials that occur.
    pub fn degrees(&self) -> Vec<u32> {
        self.terms.keys().map(|e| e.iter().sum()).collect()
    }

    /// Lowest total degree among occurring monomials.
    pub fn order(&self) -> Option<u32> {
        self.degrees().into_iter().min()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Evaluate modulo the prime `p`.
    pub fn eval_mod(&self, x: &[u64], p: u64) -> u64 {
        assert_eq!(x.len(), self.vars.len());
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = mod_big(c, p);
            for (xi, &k) in x.iter().zip(e) {
                t = mulmod(t, powmod(*xi, k as u64, p), p);
            }
            acc = (acc + t) % p;
        }
        acc
    }

    /// Terms with coefficients reduced mod `p` in `[0, p)`, zero terms dropped.
    pub fn terms_mod(&self, p: u64) -> Vec<(Vec<u32>, u64)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), mod_big(c, p)))
            .filter(|(_, c)| *c != 0)
            .collect()
    }

    /// Rename variables (same arity); result is re-sorted.
    pub fn rename(&self, names: &[&str]) -> Self {
        assert_eq!(names.len(), self.vars.len());
        let renamed = Self {
            vars: names.iter().map(|s| s.to_string()).collect(),
            terms: self.terms.clone(),
        };
        let mut sorted = renamed.vars.clone();
        sorted.sort();
        renamed.embed(&sorted)
    }
}

pub(crate) fn mod_big(c: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((c % &m) + &m) % &m;
    r.to_u64().unwrap()
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

impl fmt::Display for Poly {
    /// Canonical rendering: terms by descending total degree, then lexicographic.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (e, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let abs = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { self.vars[j].clone() } else { format!("{}^{k}", self.vars[j]) })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for Poly {
    type Err = MotError;
    fn from_str(s: &str) -> Result<Self, MotError> {
        parse_poly(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, MotError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(src[start..i].parse().unwrap())));
                continue;
            }
            b'a'..=b'z' => {
                while i < b.len() && (b[i].is_ascii_lowercase() || b[i].is_ascii_digit()) {
                    i += 1;
                }
                out.push((start, Tok::Var(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap();
                return Err(MotError::UnknownToken { pos: start, token: ch.to_string() });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err(&self, msg: &str) -> MotError {
        MotError::Syntax { pos: self.pos(), msg: msg.to_string() }
    }

    // expr := ['-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Poly, MotError> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.i += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.i += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := power ('*' power)*
    fn term(&mut self) -> Result<Poly, MotError> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Tok::Star) {
            self.i += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    // power := atom ['^' exponent], right-associative
    fn power(&mut self) -> Result<Poly, MotError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.i += 1;
            let k = self.exponent()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, MotError> {
        let at = self.pos();
        let e = self.power()?;
        if !e.is_constant() || e.constant_term().is_negative() {
            return Err(MotError::Syntax { pos: at, msg: "exponent must be a nonnegative integer".into() });
        }
        e.constant_term()
            .to_u32()
            .ok_or(MotError::Syntax { pos: at, msg: "exponent too large".into() })
    }

    fn atom(&mut self) -> Result<Poly, MotError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(Poly::constant(n))
            }
            Some(Tok::Var(v)) => {
                self.i += 1;
                Ok(Poly::var(&v))
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(_) => Err(self.err("unexpected token")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse an integer polynomial: variables `[a-z][a-z0-9]*`, integers,
/// `+ - * ^` and parentheses; `^` binds tightest and is right-associative.
pub fn parse_poly(src: &str) -> Result<Poly, MotError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, i: 0, end: src.len() };
    let e = p.expr()?;
    if p.i < p.toks.len() {
        return Err(p.err("unexpected token"));
    }
    let mut vars = e.vars.clone();
    vars.sort();
    Ok(e.embed(&vars))
}
