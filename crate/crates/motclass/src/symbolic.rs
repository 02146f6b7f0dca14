use std::collections::BTreeMap;
use std::fmt;

use locring::LocRat;

use crate::field::lcm;
use crate::MotError;

/// Opaque class `[Y -> X]` with a good action factoring through `mu_order`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub name: String,
    pub base: String,
    pub order: u64,
    pub augmented: bool,
}

impl Atom {
    pub fn new(name: &str, base: &str, order: u64) -> Self {
        assert!(order >= 1, "action order must be >= 1");
        Self { name: name.into(), base: base.into(), order, augmented: false }
    }

    /// Action order after augmentation is taken into account.
    pub fn effective_order(&self) -> u64 {
        if self.augmented {
            1
        } else {
            self.order
        }
    }

    fn key(&self) -> (&str, &str, u64) {
        (&self.name, &self.base, self.order)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ConvKind {
    Zero,
    One,
}

impl ConvKind {
    pub fn index(self) -> u8 {
        match self {
            ConvKind::Zero => 0,
            ConvKind::One => 1,
        }
    }

    /// Value of `1 *_i 1`: `L - 1` for `i = 0`, `L - 2` for `i = 1`.
    pub fn trivial_scalar(self) -> LocRat {
        match self {
            ConvKind::Zero => LocRat::l_minus_one(),
            ConvKind::One => LocRat::l_minus_two(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Factor {
    Atom(Atom),
    /// Unevaluated convolution; `left <= right`.
    Conv { kind: ConvKind, left: Monomial, right: Monomial },
    /// Augmentation of a product that is not a single atom.
    Aug(Monomial),
}

impl Factor {
    pub fn order(&self) -> u64 {
        match self {
            Factor::Atom(a) => a.effective_order(),
            Factor::Conv { left, right, .. } => lcm(left.order(), right.order()),
            Factor::Aug(_) => 1,
        }
    }
}

/// Sorted multiset of factors; the empty product is the unit class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(pub(crate) Vec<Factor>);

impl Monomial {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Self(vec![Factor::Atom(a)])
    }

    /// Sort and apply R1, closed under multiplication: when a product has both
    /// marked and unmarked atoms, the augmentation marks sit on the smallest
    /// atoms. A mark that can reach an atom of order 1 disappears, since
    /// augmentation is the identity there.
    pub fn canonical(mut fs: Vec<Factor>) -> Self {
        clear_trivial_marks(&mut fs);
        let mut atoms: Vec<&mut Atom> = fs
            .iter_mut()
            .filter_map(|f| if let Factor::Atom(a) = f { Some(a) } else { None })
            .collect();
        let marked = atoms.iter().filter(|a| a.augmented).count();
        if marked > 0 && marked < atoms.len() {
            let has_trivial = atoms.iter().any(|a| a.order == 1);
            atoms.sort_by(|a, b| a.key().cmp(&b.key()));
            for (i, a) in atoms.iter_mut().enumerate() {
                a.augmented = !has_trivial && i < marked;
            }
        }
        fs.sort();
        Self(fs)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        Self::canonical(self.0.clone()) == *self
    }

    pub fn order(&self) -> u64 {
        self.0.iter().fold(1, |acc, f| lcm(acc, f.order()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut fs = self.0.clone();
        fs.extend(o.0.iter().cloned());
        Self::canonical(fs)
    }

    /// Atoms occurring anywhere, including inside convolution and augmentation nodes.
    pub fn atoms(&self, out: &mut Vec<Atom>) {
        for f in &self.0 {
            match f {
                Factor::Atom(a) => out.push(a.clone()),
                Factor::Conv { left, right, .. } => {
                    left.atoms(out);
                    right.atoms(out);
                }
                Factor::Aug(m) => m.atoms(out),
            }
        }
    }
}

fn clear_trivial_marks(fs: &mut [Factor]) {
    for f in fs {
        if let Factor::Atom(a) = f {
            if a.order == 1 {
                a.augmented = false;
            }
        }
    }
}

/// Conv of two monomials, as a scalar times a monomial.
pub fn conv_monomials(kind: ConvKind, a: &Monomial, b: &Monomial) -> (LocRat, Monomial) {
    if a.order() == 1 && b.order() == 1 {
        return (kind.trivial_scalar(), a.mul(b));
    }
    let (left, right) = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    (LocRat::one(), Monomial(vec![Factor::Conv { kind, left, right }]))
}

pub fn augment_monomial(m: &Monomial) -> Monomial {
    if m.order() == 1 {
        return m.clone();
    }
    if let [Factor::Atom(a)] = m.0.as_slice() {
        let mut a = a.clone();
        a.augmented = true;
        return Monomial::atom(a);
    }
    Monomial(vec![Factor::Aug(m.clone())])
}

/// Finite sum of scalar multiples of monomials, fully rewritten.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SymbolicClass {
    terms: BTreeMap<Monomial, LocRat>,
}

impl SymbolicClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(LocRat::one())
    }

    pub fn scalar(c: LocRat) -> Self {
        Self::term(c, Monomial::unit())
    }

    pub fn atom(a: Atom) -> Self {
        Self::term(LocRat::one(), Monomial::canonical(vec![Factor::Atom(a)]))
    }

    pub fn term(c: LocRat, m: Monomial) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    /// Build from terms already in normal form; rejects duplicates and
    /// non-canonical monomials.
    pub fn from_normal_terms(ts: Vec<(Monomial, LocRat)>) -> Result<Self, String> {
        let mut terms = BTreeMap::new();
        let mut prev: Option<Monomial> = None;
        for (m, c) in ts {
            if !m.is_canonical() {
                return Err(format!("monomial not canonical: {m}"));
            }
            if c.is_zero() {
                return Err(format!("zero coefficient on {m}"));
            }
            if prev.as_ref().is_some_and(|p| p >= &m) {
                return Err(format!("terms not strictly increasing at {m}"));
            }
            prev = Some(m.clone());
            terms.insert(m, c);
        }
        Ok(Self { terms })
    }

    fn add_term(&mut self, m: Monomial, c: LocRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LocRat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the unit monomial; `Some` only for pure scalars.
    pub fn as_scalar(&self) -> Option<LocRat> {
        match self.terms.len() {
            0 => Some(LocRat::zero()),
            1 => self.terms.get(&Monomial::unit()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &LocRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn ext_mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn conv_kind(&self, o: &Self, kind: ConvKind) -> Self {
        let mut r = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let (s, m) = conv_monomials(kind, m1, m2);
                r.add_term(m, &(c1 * c2) * &s);
            }
        }
        r
    }

    pub fn conv0(&self, o: &Self) -> Self {
        self.conv_kind(o, ConvKind::Zero)
    }

    pub fn conv1(&self, o: &Self) -> Self {
        self.conv_kind(o, ConvKind::One)
    }

    pub fn conv(&self, o: &Self) -> Self {
        self.conv0(o).sub(&self.conv1(o))
    }

    pub fn augment(&self) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            r.add_term(augment_monomial(m), c.clone());
        }
        r
    }

    /// Action order: lcm over all monomials.
    pub fn order(&self) -> u64 {
        self.terms.keys().fold(1, |acc, m| lcm(acc, m.order()))
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for m in self.terms.keys() {
            m.atoms(&mut out);
        }
        for a in &mut out {
            a.augmented = false;
        }
        out.sort();
        out.dedup();
        out
    }

    /// Replace every atom's base tag.
    pub fn retag_base(&self, base: &str) -> Self {
        fn mono(m: &Monomial, base: &str) -> Monomial {
            Monomial::canonical(
                m.0.iter()
                    .map(|f| match f {
                        Factor::Atom(a) => {
                            let mut a = a.clone();
                            a.base = base.to_string();
                            Factor::Atom(a)
                        }
                        Factor::Conv { kind, left, right } => {
                            let (l, r) = (mono(left, base), mono(right, base));
                            let (left, right) = if l <= r { (l, r) } else { (r, l) };
                            Factor::Conv { kind: *kind, left, right }
                        }
                        Factor::Aug(m) => Factor::Aug(mono(m, base)),
                    })
                    .collect(),
            )
        }
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            r.add_term(mono(m, base), c.clone());
        }
        r
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}:{}", self.name, self.base, self.order)?;
        if self.augmented {
            write!(f, "'")?;
        }
        Ok(())
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Atom(a) => write!(f, "{a}"),
            Factor::Conv { kind, left, right } => write!(f, "conv{}({left}, {right})", kind.index()),
            Factor::Aug(m) => write!(f, "aug({m})"),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Display for SymbolicClass {
    /// Terms `[c]*m` joined by ` + `; the unit monomial is omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "[{c}]")?;
            } else {
                write!(f, "[{c}]*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymbolicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct ClassParser<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> ClassParser<'a> {
    fn err(&self, msg: &str) -> MotError {
        MotError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(' ') {
            self.pos += 1;
        }
    }

    fn eat(&mut self, t: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(t) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &str) -> Result<(), MotError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{t}'")))
        }
    }

    fn ident(&mut self, allow_empty: bool) -> Result<String, MotError> {
        self.skip_ws();
        let n = self
            .rest()
            .char_indices()
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
            .map(|(i, _)| i)
            .unwrap_or(self.rest().len());
        if n == 0 && !allow_empty {
            return Err(self.err("expected identifier"));
        }
        let id = self.rest()[..n].to_string();
        self.pos += n;
        Ok(id)
    }

    fn class(&mut self) -> Result<SymbolicClass, MotError> {
        if self.eat("0") {
            return Ok(SymbolicClass::zero());
        }
        let mut acc = SymbolicClass::zero();
        loop {
            self.expect("[")?;
            let end = self.rest().find(']').ok_or_else(|| self.err("unclosed '['"))?;
            let at = self.pos;
            let c: LocRat = self.rest()[..end]
                .parse()
                .map_err(|e: locring::LocError| MotError::Syntax { pos: at, msg: e.to_string() })?;
            self.pos += end + 1;
            let t = if self.eat("*") {
                self.monomial()?.scale(&c)
            } else {
                SymbolicClass::scalar(c)
            };
            acc = acc.add(&t);
            if !self.eat("+") {
                return Ok(acc);
            }
        }
    }

    fn monomial(&mut self) -> Result<SymbolicClass, MotError> {
        let mut acc = self.factor()?;
        while self.eat("*") {
            acc = acc.ext_mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SymbolicClass, MotError> {
        if self.eat("conv0(") || self.eat("conv1(") {
            let kind = if self.s[..self.pos].ends_with("conv0(") { ConvKind::Zero } else { ConvKind::One };
            let a = self.monomial()?;
            self.expect(",")?;
            let b = self.monomial()?;
            self.expect(")")?;
            return Ok(a.conv_kind(&b, kind));
        }
        if self.eat("aug(") {
            let a = self.monomial()?;
            self.expect(")")?;
            return Ok(a.augment());
        }
        if self.eat("1") {
            return Ok(SymbolicClass::one());
        }
        let name = self.ident(false)?;
        self.expect("@")?;
        let base = self.ident(true)?;
        self.expect(":")?;
        let at = self.pos;
        let digits = self.ident(false)?;
        let order: u64 = digits
            .parse()
            .ok()
            .filter(|&o| o >= 1)
            .ok_or(MotError::Syntax { pos: at, msg: "bad action order".into() })?;
        let atom = SymbolicClass::atom(Atom::new(&name, &base, order));
        if self.rest().starts_with('\'') {
            self.pos += 1;
            return Ok(atom.augment());
        }
        Ok(atom)
    }
}

impl std::str::FromStr for SymbolicClass {
    type Err = MotError;
    fn from_str(s: &str) -> Result<Self, MotError> {
        let mut p = ClassParser { s, pos: 0 };
        let c = p.class()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(c)
    }
}
