use std::str::FromStr;

use num_bigint::BigInt;

use crate::{LaurentPoly, LocError, LocRat};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Self { s: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> LocError {
        LocError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn expect(&mut self, b: u8) -> Result<(), LocError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn int(&mut self) -> Result<BigInt, LocError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }

    fn signed_small(&mut self) -> Result<i64, LocError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let v: i64 = self
            .int()?
            .try_into()
            .map_err(|_| LocError::Parse { pos: at, msg: "exponent too large".into() })?;
        Ok(if neg { -v } else { v })
    }

    /// `L` or `L^e`, `e` possibly negative.
    fn mono(&mut self) -> Result<i64, LocError> {
        self.expect(b'L')?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.signed_small()
        } else {
            Ok(1)
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, LocError> {
        match self.peek() {
            Some(b'L') => Ok(LaurentPoly::monomial(1, self.mono()?)),
            Some(c) if c.is_ascii_digit() => {
                let c = self.int()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let e = self.mono()?;
                    Ok(LaurentPoly::monomial(c, e))
                } else {
                    Ok(LaurentPoly::constant(c))
                }
            }
            _ => Err(self.err("expected term")),
        }
    }

    fn poly(&mut self) -> Result<LaurentPoly, LocError> {
        let mut neg = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            neg = true;
        }
        let mut acc = LaurentPoly::zero();
        loop {
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => neg = false,
                Some(b'-') => neg = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    /// `(1-L)` or `(1-L^n)`, `n >= 1`.
    fn factor(&mut self) -> Result<u32, LocError> {
        self.expect(b'(')?;
        let at = self.pos;
        if self.int()? != BigInt::from(1) {
            return Err(LocError::Parse { pos: at, msg: "expected 1".into() });
        }
        self.expect(b'-')?;
        let at = self.pos;
        let e = self.mono()?;
        if e < 1 || e > u32::MAX as i64 {
            return Err(LocError::Parse { pos: at, msg: "factor exponent must be >= 1".into() });
        }
        self.expect(b')')?;
        Ok(e as u32)
    }
}

impl FromStr for LaurentPoly {
    type Err = LocError;
    fn from_str(s: &str) -> Result<Self, LocError> {
        let mut c = Cursor::new(s);
        let p = c.poly()?;
        if c.peek().is_some() {
            return Err(c.err("trailing input"));
        }
        Ok(p)
    }
}

impl FromStr for LocRat {
    type Err = LocError;
    /// Grammar of the `Display` output: `P` or `P / (1-L^a)(1-L^b)...`,
    /// with `P` optionally parenthesized.
    fn from_str(s: &str) -> Result<Self, LocError> {
        let mut c = Cursor::new(s);
        let num = if c.peek() == Some(b'(') {
            c.pos += 1;
            let p = c.poly()?;
            c.expect(b')')?;
            p
        } else {
            c.poly()?
        };
        let mut den = Vec::new();
        if c.peek() == Some(b'/') {
            c.pos += 1;
            den.push(c.factor()?);
            while c.peek() == Some(b'(') {
                den.push(c.factor()?);
            }
        }
        if c.peek().is_some() {
            return Err(c.err("trailing input"));
        }
        Ok(LocRat::new(num, den))
    }
}
