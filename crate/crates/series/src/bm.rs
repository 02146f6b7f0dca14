use crate::field::Field;
use crate::fpoly::FPoly;

/// Berlekamp-Massey: the shortest connection polynomial `C` (with `C(0) = 1`)
/// and linear complexity `L` of `s`, so `sum_j C_j s_{i-j} = 0` for `i >= L`.
pub fn berlekamp_massey<F: Field>(s: &[F]) -> (Vec<F>, usize) {
    let mut c = vec![F::one()];
    let mut b = vec![F::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = F::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d = d.add(&c[i].mul(&s[n - i]));
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = d.div(&bd);
        let t = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, F::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] = c[i + m].sub(&coef.mul(bi));
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = t;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.truncate(l + 1);
    while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    (c, l)
}

/// Rational generating function `P/Q` for `s`, accepted only when at least
/// `margin` terms beyond `2L` confirm the recurrence.
pub fn fit_rational<F: Field>(s: &[F], margin: usize) -> Option<(FPoly<F>, FPoly<F>)> {
    let (c, l) = berlekamp_massey(s);
    if s.len() < 2 * l + margin {
        return None;
    }
    let q = FPoly::new(c);
    let mut p = vec![F::zero(); l];
    for (i, slot) in p.iter_mut().enumerate() {
        let mut acc = F::zero();
        for j in 0..=i {
            acc = acc.add(&q.coeff(j).mul(&s[i - j]));
        }
        *slot = acc;
    }
    Some((FPoly::new(p), q))
}
