//! Unnormalized class expressions and a rewriter that applies the rules one
//! redex at a time, in an order picked by the caller.

use locring::LocRat;

use crate::symbolic::{Atom, ConvKind, Factor, Monomial, SymbolicClass};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Zero,
    One,
    Atom(Atom),
    Scale(LocRat, Box<Expr>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Conv(ConvKind, Box<Expr>, Box<Expr>),
    Aug(Box<Expr>),
}

impl Expr {
    /// Evaluate with the smart constructors of [`SymbolicClass`].
    pub fn eval(&self) -> SymbolicClass {
        match self {
            Expr::Zero => SymbolicClass::zero(),
            Expr::One => SymbolicClass::one(),
            Expr::Atom(a) => SymbolicClass::atom(a.clone()),
            Expr::Scale(c, e) => e.eval().scale(c),
            Expr::Add(es) => es.iter().fold(SymbolicClass::zero(), |acc, e| acc.add(&e.eval())),
            Expr::Mul(es) => es.iter().fold(SymbolicClass::one(), |acc, e| acc.ext_mul(&e.eval())),
            Expr::Conv(k, a, b) => a.eval().conv_kind(&b.eval(), *k),
            Expr::Aug(e) => e.eval().augment(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Expr::Zero | Expr::One | Expr::Atom(_) => 1,
            Expr::Scale(_, e) | Expr::Aug(e) => 1 + e.size(),
            Expr::Add(es) | Expr::Mul(es) => 1 + es.iter().map(Expr::size).sum::<usize>(),
            Expr::Conv(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    fn children_mut(&mut self) -> Vec<&mut Expr> {
        match self {
            Expr::Zero | Expr::One | Expr::Atom(_) => vec![],
            Expr::Scale(_, e) | Expr::Aug(e) => vec![e.as_mut()],
            Expr::Add(es) | Expr::Mul(es) => es.iter_mut().collect(),
            Expr::Conv(_, a, b) => vec![a.as_mut(), b.as_mut()],
        }
    }

    fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Zero | Expr::One | Expr::Atom(_) => vec![],
            Expr::Scale(_, e) | Expr::Aug(e) => vec![e.as_ref()],
            Expr::Add(es) | Expr::Mul(es) => es.iter().collect(),
            Expr::Conv(_, a, b) => vec![a.as_ref(), b.as_ref()],
        }
    }
}

/// A normal factor, read without any rewriting.
fn as_factor(e: &Expr) -> Option<Factor> {
    match e {
        Expr::Atom(a) if !(a.augmented && a.order == 1) => Some(Factor::Atom(a.clone())),
        Expr::Conv(kind, l, r) => {
            let (left, right) = (as_monomial(l)?, as_monomial(r)?);
            (left <= right && !(left.order() == 1 && right.order() == 1))
                .then_some(Factor::Conv { kind: *kind, left, right })
        }
        Expr::Aug(m) => {
            let m = as_monomial(m)?;
            (m.order() > 1 && !matches!(m.factors(), [Factor::Atom(_)])).then_some(Factor::Aug(m))
        }
        _ => None,
    }
}

/// A normal monomial: `One`, a normal factor, or a sorted product of at least two.
fn as_monomial(e: &Expr) -> Option<Monomial> {
    let m = match e {
        Expr::One => Monomial::unit(),
        Expr::Mul(es) if es.len() >= 2 => {
            let fs: Option<Vec<Factor>> = es.iter().map(as_factor).collect();
            let fs = fs?;
            if fs.windows(2).any(|w| w[0] > w[1]) {
                return None;
            }
            Monomial(fs)
        }
        _ => Monomial(vec![as_factor(e)?]),
    };
    m.is_canonical().then_some(m)
}

fn as_term(e: &Expr) -> Option<(LocRat, Monomial)> {
    match e {
        Expr::Scale(c, m) if !c.is_zero() && !c.is_one() => Some((c.clone(), as_monomial(m)?)),
        _ => Some((LocRat::one(), as_monomial(e)?)),
    }
}

fn make_term(c: LocRat, m: Expr) -> Expr {
    if c.is_zero() {
        Expr::Zero
    } else if c.is_one() {
        m
    } else {
        Expr::Scale(c, Box::new(m))
    }
}

fn monomial_expr(m: &Monomial) -> Expr {
    let fs: Vec<Expr> = m.factors().iter().map(factor_expr).collect();
    match fs.len() {
        0 => Expr::One,
        1 => fs.into_iter().next().unwrap(),
        _ => Expr::Mul(fs),
    }
}

fn factor_expr(f: &Factor) -> Expr {
    match f {
        Factor::Atom(a) => Expr::Atom(a.clone()),
        Factor::Conv { kind, left, right } => {
            Expr::Conv(*kind, Box::new(monomial_expr(left)), Box::new(monomial_expr(right)))
        }
        Factor::Aug(m) => Expr::Aug(Box::new(monomial_expr(m))),
    }
}

type Rule = fn(&Expr) -> Option<Expr>;

fn add_flatten(e: &Expr) -> Option<Expr> {
    let Expr::Add(es) = e else { return None };
    if !es.iter().any(|x| matches!(x, Expr::Add(_) | Expr::Zero)) && es.len() >= 2 {
        return None;
    }
    let mut out = Vec::new();
    for x in es {
        match x {
            Expr::Add(inner) => out.extend(inner.iter().cloned()),
            Expr::Zero => {}
            other => out.push(other.clone()),
        }
    }
    Some(match out.len() {
        0 => Expr::Zero,
        1 => out.pop().unwrap(),
        _ => Expr::Add(out),
    })
}

fn add_collect(e: &Expr) -> Option<Expr> {
    let Expr::Add(es) = e else { return None };
    let ts: Vec<Option<(LocRat, Monomial)>> = es.iter().map(as_term).collect();
    for i in 0..es.len() {
        for j in i + 1..es.len() {
            if let (Some((c1, m1)), Some((c2, m2))) = (&ts[i], &ts[j]) {
                if m1 == m2 {
                    let mut out: Vec<Expr> = Vec::new();
                    for (k, x) in es.iter().enumerate() {
                        if k == i {
                            out.push(make_term(c1 + c2, monomial_expr(m1)));
                        } else if k != j {
                            out.push(x.clone());
                        }
                    }
                    return Some(Expr::Add(out));
                }
            }
        }
    }
    None
}

fn add_sort(e: &Expr) -> Option<Expr> {
    let Expr::Add(es) = e else { return None };
    let ts: Option<Vec<(LocRat, Monomial)>> = es.iter().map(as_term).collect();
    let ts = ts?;
    // equal neighbours are add_collect's redex; sorting them is a no-op
    if ts.windows(2).all(|w| w[0].1 <= w[1].1) {
        return None;
    }
    let mut idx: Vec<usize> = (0..es.len()).collect();
    idx.sort_by(|&a, &b| ts[a].1.cmp(&ts[b].1));
    Some(Expr::Add(idx.into_iter().map(|i| es[i].clone()).collect()))
}

fn mul_flatten(e: &Expr) -> Option<Expr> {
    let Expr::Mul(es) = e else { return None };
    if es.iter().any(|x| matches!(x, Expr::Zero)) {
        return Some(Expr::Zero);
    }
    if !es.iter().any(|x| matches!(x, Expr::Mul(_) | Expr::One)) && es.len() >= 2 {
        return None;
    }
    let mut out = Vec::new();
    for x in es {
        match x {
            Expr::Mul(inner) => out.extend(inner.iter().cloned()),
            Expr::One => {}
            other => out.push(other.clone()),
        }
    }
    Some(match out.len() {
        0 => Expr::One,
        1 => out.pop().unwrap(),
        _ => Expr::Mul(out),
    })
}

fn mul_distribute(e: &Expr) -> Option<Expr> {
    let Expr::Mul(es) = e else { return None };
    let i = es.iter().position(|x| matches!(x, Expr::Add(_)))?;
    let Expr::Add(summands) = &es[i] else { unreachable!() };
    Some(Expr::Add(
        summands
            .iter()
            .map(|s| {
                let mut v = es.clone();
                v[i] = s.clone();
                Expr::Mul(v)
            })
            .collect(),
    ))
}

fn mul_pull_scalar(e: &Expr) -> Option<Expr> {
    let Expr::Mul(es) = e else { return None };
    let i = es.iter().position(|x| matches!(x, Expr::Scale(..)))?;
    let Expr::Scale(c, inner) = &es[i] else { unreachable!() };
    let mut v = es.clone();
    v[i] = (**inner).clone();
    Some(Expr::Scale(c.clone(), Box::new(Expr::Mul(v))))
}

fn mul_sort(e: &Expr) -> Option<Expr> {
    let Expr::Mul(es) = e else { return None };
    let fs: Option<Vec<Factor>> = es.iter().map(as_factor).collect();
    let fs = fs?;
    if fs.windows(2).all(|w| w[0] <= w[1]) {
        return None;
    }
    let mut idx: Vec<usize> = (0..es.len()).collect();
    idx.sort_by(|&a, &b| fs[a].cmp(&fs[b]));
    Some(Expr::Mul(idx.into_iter().map(|i| es[i].clone()).collect()))
}

fn scale_rules(e: &Expr) -> Option<Expr> {
    let Expr::Scale(c, inner) = e else { return None };
    if c.is_zero() || matches!(**inner, Expr::Zero) {
        return Some(Expr::Zero);
    }
    if c.is_one() {
        return Some((**inner).clone());
    }
    match &**inner {
        Expr::Scale(d, x) => Some(Expr::Scale(c * d, x.clone())),
        Expr::Add(es) => Some(Expr::Add(
            es.iter().map(|x| Expr::Scale(c.clone(), Box::new(x.clone()))).collect(),
        )),
        _ => None,
    }
}

fn conv_linear(e: &Expr) -> Option<Expr> {
    let Expr::Conv(k, a, b) = e else { return None };
    if matches!(**a, Expr::Zero) || matches!(**b, Expr::Zero) {
        return Some(Expr::Zero);
    }
    for (side, x) in [(0, a), (1, b)] {
        match &**x {
            Expr::Add(es) => {
                return Some(Expr::Add(
                    es.iter()
                        .map(|s| {
                            let s = Box::new(s.clone());
                            if side == 0 {
                                Expr::Conv(*k, s, b.clone())
                            } else {
                                Expr::Conv(*k, a.clone(), s)
                            }
                        })
                        .collect(),
                ))
            }
            Expr::Scale(c, inner) => {
                let conv = if side == 0 {
                    Expr::Conv(*k, inner.clone(), b.clone())
                } else {
                    Expr::Conv(*k, a.clone(), inner.clone())
                };
                return Some(Expr::Scale(c.clone(), Box::new(conv)));
            }
            _ => {}
        }
    }
    None
}

fn conv_trivial(e: &Expr) -> Option<Expr> {
    let Expr::Conv(k, a, b) = e else { return None };
    let (ma, mb) = (as_monomial(a)?, as_monomial(b)?);
    if ma.order() == 1 && mb.order() == 1 {
        return Some(Expr::Scale(k.trivial_scalar(), Box::new(Expr::Mul(vec![(**a).clone(), (**b).clone()]))));
    }
    None
}

fn conv_sort(e: &Expr) -> Option<Expr> {
    let Expr::Conv(k, a, b) = e else { return None };
    let (ma, mb) = (as_monomial(a)?, as_monomial(b)?);
    (ma > mb).then(|| Expr::Conv(*k, b.clone(), a.clone()))
}

fn aug_rules(e: &Expr) -> Option<Expr> {
    let Expr::Aug(inner) = e else { return None };
    match &**inner {
        Expr::Zero => Some(Expr::Zero),
        Expr::One => Some(Expr::One),
        Expr::Add(es) => Some(Expr::Add(es.iter().map(|x| Expr::Aug(Box::new(x.clone()))).collect())),
        Expr::Scale(c, x) => Some(Expr::Scale(c.clone(), Box::new(Expr::Aug(x.clone())))),
        Expr::Atom(a) => {
            let mut a = a.clone();
            a.augmented = a.order > 1;
            Some(Expr::Atom(a))
        }
        x => {
            let m = as_monomial(x)?;
            (m.order() == 1).then(|| x.clone())
        }
    }
}

fn atom_trivial_flag(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Atom(a) if a.augmented && a.order == 1 => {
            let mut a = a.clone();
            a.augmented = false;
            Some(Expr::Atom(a))
        }
        _ => None,
    }
}

/// R1, only applied once nothing else applies anywhere, so the product it
/// acts on is maximal.
fn r1(e: &Expr) -> Option<Expr> {
    let Expr::Mul(es) = e else { return None };
    let fs: Option<Vec<Factor>> = es.iter().map(as_factor).collect();
    let cur = Monomial(fs?);
    let m = Monomial::canonical(cur.0.clone());
    (m != cur).then(|| monomial_expr(&m))
}

const RULES: &[Rule] = &[
    add_flatten,
    add_collect,
    add_sort,
    mul_flatten,
    mul_distribute,
    mul_pull_scalar,
    mul_sort,
    scale_rules,
    conv_linear,
    conv_trivial,
    conv_sort,
    aug_rules,
    atom_trivial_flag,
];

fn collect_redexes(e: &Expr, rules: &[Rule], path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, usize)>) {
    for (ri, r) in rules.iter().enumerate() {
        if r(e).is_some() {
            out.push((path.clone(), ri));
        }
    }
    for (i, c) in e.children().into_iter().enumerate() {
        path.push(i);
        collect_redexes(c, rules, path, out);
        path.pop();
    }
}

fn node_at<'a>(e: &'a mut Expr, path: &[usize]) -> &'a mut Expr {
    match path.split_first() {
        None => e,
        Some((&i, rest)) => node_at(e.children_mut().swap_remove(i), rest),
    }
}

/// Rewrite to normal form. `choose(n)` picks one of `n` available redexes.
/// Returns the final expression and the number of rewrite steps.
pub fn rewrite(mut e: Expr, choose: &mut dyn FnMut(usize) -> usize, max_steps: usize) -> (Expr, usize) {
    let r1_rules: &[Rule] = &[r1];
    for step in 0..max_steps {
        let mut reds = Vec::new();
        collect_redexes(&e, RULES, &mut Vec::new(), &mut reds);
        let rules = if reds.is_empty() {
            collect_redexes(&e, r1_rules, &mut Vec::new(), &mut reds);
            r1_rules
        } else {
            RULES
        };
        if reds.is_empty() {
            return (e, step);
        }
        let (path, ri) = &reds[choose(reds.len()) % reds.len()];
        let node = node_at(&mut e, path);
        *node = rules[*ri](node).expect("redex applies");
    }
    panic!("rewriting did not terminate within {max_steps} steps");
}

/// Read a fully rewritten expression as a class, without further rewriting.
pub fn read_normal(e: &Expr) -> Result<SymbolicClass, String> {
    let terms: Vec<&Expr> = match e {
        Expr::Zero => vec![],
        Expr::Add(es) => es.iter().collect(),
        other => vec![other],
    };
    let mut out = Vec::new();
    for t in terms {
        let (c, m) = as_term(t).ok_or_else(|| format!("not a normal term: {t:?}"))?;
        out.push((m, c));
    }
    SymbolicClass::from_normal_terms(out)
}
