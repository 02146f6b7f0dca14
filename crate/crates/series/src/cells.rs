use std::collections::BTreeMap;

use motclass::Coeff;

use crate::coeff::SeriesCoeff;
use crate::field::Scalar;
use crate::seq::{Seq, FIT_MARGIN};
use crate::trunc::{BoundMode, TruncSeries};
use crate::SeriesError;

/// Ordered cell of `N^r`: an ordered set partition of the coordinates.
/// Coordinates in one block share a value and values increase from block to
/// block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellSpec {
    blocks: Vec<Vec<usize>>,
}

impl CellSpec {
    /// From blocks of coordinate indices; each block is sorted.
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
            assert!(!b.is_empty(), "empty block in a cell");
        }
        let mut all: Vec<usize> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        assert!(all.iter().enumerate().all(|(i, &k)| i == k), "blocks must partition 0..r");
        Self { blocks }
    }

    /// From a permutation `rho` and breakpoints `0 = r_0 < ... < r_i = r`.
    pub fn from_rho_breaks(rho: &[usize], breaks: &[usize]) -> Self {
        Self::new(breaks.windows(2).map(|w| rho[w[0]..w[1]].to_vec()).collect())
    }

    /// The strict chain `n_1 < ... < n_r` in the given coordinates.
    pub fn chain(r: usize) -> Self {
        Self::new((0..r).map(|i| vec![i]).collect())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn arity(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn rho(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn breaks(&self) -> Vec<usize> {
        let mut out = vec![0];
        for b in &self.blocks {
            out.push(out.last().unwrap() + b.len());
        }
        out
    }

    pub fn contains(&self, n: &[u32]) -> bool {
        cell_of(n) == *self
    }

    /// Exponent vector of the chain value `v_j` on block `j`.
    pub fn exponent(&self, v: &[u32]) -> Vec<u32> {
        let mut e = vec![0; self.arity()];
        for (b, &x) in self.blocks.iter().zip(v) {
            for &i in b {
                e[i] = x;
            }
        }
        e
    }
}

impl std::fmt::Display for CellSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|i| format!("n{}", i + 1)).collect::<Vec<_>>().join("="))
            .collect();
        f.write_str(&parts.join("<"))
    }
}

/// The cell containing `n`.
pub fn cell_of(n: &[u32]) -> CellSpec {
    let mut idx: Vec<usize> = (0..n.len()).collect();
    idx.sort_by_key(|&i| (n[i], i));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match blocks.last_mut() {
            Some(b) if n[b[0]] == n[i] => b.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    CellSpec { blocks }
}

/// All ordered cells of `N^r`, in a fixed order. There are Fubini many.
pub fn ordered_cells(r: usize) -> Vec<CellSpec> {
    fn rec(rest: &[usize], acc: &mut Vec<Vec<usize>>, out: &mut Vec<CellSpec>) {
        if rest.is_empty() {
            out.push(CellSpec { blocks: acc.clone() });
            return;
        }
        let k = rest.len();
        for mask in 1u32..(1 << k) {
            let block: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| rest[i]).collect();
            let left: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 0).map(|i| rest[i]).collect();
            acc.push(block);
            rec(&left, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(&(0..r).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Split a truncated series by cells; every cell gets a part, possibly empty.
pub fn cell_decompose<C: Coeff>(a: &TruncSeries<C>) -> BTreeMap<CellSpec, TruncSeries<C>> {
    let mut out: BTreeMap<CellSpec, TruncSeries<C>> = ordered_cells(a.nvars())
        .into_iter()
        .map(|c| (c, TruncSeries::with_mode(a.vars.clone(), a.bound, a.mode)))
        .collect();
    for (n, c) in a.iter() {
        out.get_mut(&cell_of(n)).expect("every exponent lies in a cell").set(n.clone(), c.clone());
    }
    out
}

/// External product over blocks of univariate factor sequences: the
/// coefficient at chain values `v_1 < ... < v_i` is
/// `factors[0][v_1] x ... x factors[i-1][v_i]`.
#[derive(Clone, Debug)]
pub struct ProductTerm<C: SeriesCoeff> {
    pub factors: Vec<Seq<C>>,
}

impl<C: SeriesCoeff> ProductTerm<C> {
    pub fn new(factors: Vec<Seq<C>>) -> Self {
        Self { factors }
    }

    pub fn at(&self, v: &[u32]) -> C {
        let mut it = self.factors.iter().zip(v);
        let (f, &x) = it.next().expect("product term without factors");
        let mut c = f.coeff(x as usize);
        for (f, &x) in it {
            if c.is_zero() {
                return c;
            }
            c = c.ext_mul(&f.coeff(x as usize));
        }
        c
    }
}

/// Which tail sum `Phi^{-1}` uses for a trailing factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TailBound {
    /// `sum_{l > 0} a_{n + l}`
    Zero,
    /// `sum_{l > 1} a_{n + l}`
    One,
}

/// Series given cell by cell in product form.
#[derive(Clone, Debug)]
pub struct CellSeries<C: SeriesCoeff> {
    pub vars: Vec<String>,
    zero: C,
    cells: BTreeMap<CellSpec, Vec<ProductTerm<C>>>,
}

impl<C: SeriesCoeff> CellSeries<C> {
    pub fn new(vars: Vec<String>, zero: &C) -> Self {
        Self { vars, zero: zero.zero_like(), cells: BTreeMap::new() }
    }

    pub fn zero_coeff(&self) -> &C {
        &self.zero
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn push(&mut self, cell: CellSpec, t: ProductTerm<C>) {
        assert_eq!(cell.arity(), self.nvars(), "cell arity differs from variable count");
        assert_eq!(t.factors.len(), cell.blocks().len(), "one factor per block");
        if t.factors.iter().any(|f| f.is_zero()) {
            self.cells.entry(cell).or_default();
            return;
        }
        self.cells.entry(cell).or_default().push(t);
    }

    pub fn cells(&self) -> impl Iterator<Item = (&CellSpec, &Vec<ProductTerm<C>>)> {
        self.cells.iter()
    }

    pub fn terms(&self, cell: &CellSpec) -> &[ProductTerm<C>] {
        self.cells.get(cell).map_or(&[], |v| v.as_slice())
    }

    pub fn add(&self, o: &Self) -> Result<Self, SeriesError> {
        if self.vars != o.vars {
            return Err(SeriesError::VariableMismatch(format!("{:?} vs {:?}", self.vars, o.vars)));
        }
        let mut r = self.clone();
        for (c, ts) in &o.cells {
            r.cells.entry(c.clone()).or_default().extend(ts.iter().cloned());
        }
        Ok(r)
    }

    /// Apply `f` to each product term, keeping its cell.
    pub fn map_terms(
        &self,
        f: impl Fn(&CellSpec, &ProductTerm<C>) -> Result<ProductTerm<C>, SeriesError>,
    ) -> Result<Self, SeriesError> {
        let mut r = Self::new(self.vars.clone(), &self.zero);
        for (c, ts) in &self.cells {
            r.cells.entry(c.clone()).or_default();
            for t in ts {
                r.push(c.clone(), f(c, t)?);
            }
        }
        Ok(r)
    }

    /// `Phi`: the leading factor is kept and every trailing factor `a`
    /// becomes `(L-1)^{-1} (a_{n-1} - a_n)`.
    pub fn phi(&self) -> Result<Self, SeriesError> {
        let inv = self
            .zero
            .l_pow(1)
            .sub(&C::S::one())
            .try_inv()
            .ok_or_else(|| SeriesError::NotIntegrable("L - 1 is not invertible".into()))?;
        self.map_terms(|_, t| {
            let mut fs = t.factors.clone();
            for f in fs.iter_mut().skip(1) {
                *f = f.shift_up(1).sub(f).scale_s(&inv);
            }
            Ok(ProductTerm::new(fs))
        })
    }

    /// `Phi^{-1}`: every trailing factor `a` becomes `(L-1) sum_{l>b} a_{n+l}`
    /// with `b` from `bound`. With `augment` the tail sums the augmented
    /// coefficients instead.
    pub fn phi_inv(&self, bound: TailBound, augment: bool) -> Result<Self, SeriesError> {
        let lm1 = self.zero.l_pow(1).sub(&C::S::one());
        let b = match bound {
            TailBound::Zero => 0,
            TailBound::One => 1,
        };
        self.map_terms(|_, t| {
            let mut fs = t.factors.clone();
            for f in fs.iter_mut().skip(1) {
                let g = if augment { f.map(|c| c.augment()) } else { f.clone() };
                *f = g.tail(b)?.scale_s(&lm1);
            }
            Ok(ProductTerm::new(fs))
        })
    }

    /// The diagonal `T_1 = ... = T_r = T` as one exact sequence in `T`.
    /// Each product term is refitted from enough terms to determine it.
    pub fn diagonal_seq(&self) -> Result<Seq<C>, SeriesError> {
        let mut out = Seq::zero(&self.zero);
        for (cell, ts) in &self.cells {
            for t in ts {
                out = out.add(&term_diagonal(&self.zero, cell, t)?);
            }
        }
        Ok(out)
    }

    /// Coefficients with exponents inside the bound.
    pub fn expand(&self, bound: u32, mode: BoundMode) -> TruncSeries<C> {
        let mut out = TruncSeries::with_mode(self.vars.clone(), bound, mode);
        for (cell, ts) in &self.cells {
            if ts.is_empty() {
                continue;
            }
            for v in chains(cell, &out) {
                let mut c = self.zero.clone();
                for t in ts {
                    c = c.add(&t.at(&v));
                }
                out.set(cell.exponent(&v), c);
            }
        }
        out
    }
}

/// For block sizes `s_j` and factor complexities `c_j` the diagonal of a
/// product term has denominator degree at most
/// `sum_j (s_j + ... + s_k) prod_{i >= j} (c_i + 1)`, and the numerator
/// exceeds it by at most `sum_j s_j (c_j + 1)`.
fn term_diagonal<C: SeriesCoeff>(zero: &C, cell: &CellSpec, t: &ProductTerm<C>) -> Result<Seq<C>, SeriesError> {
    let sizes: Vec<usize> = cell.blocks().iter().map(|b| b.len()).collect();
    let cs: Vec<usize> = t.factors.iter().map(|f| f.complexity() + 1).collect();
    let k = sizes.len();
    let mut den = 0;
    for j in 0..k {
        let s: usize = sizes[j..].iter().sum();
        let c: usize = cs[j..].iter().product();
        den += s * c;
    }
    let extra: usize = sizes.iter().zip(&cs).map(|(s, c)| s * c).sum();
    let n = 2 * (den + extra) + FIT_MARGIN;
    let mut vals = vec![zero.clone(); n];
    fn rec<C: SeriesCoeff>(sizes: &[usize], t: &ProductTerm<C>, v: &mut Vec<u32>, w: usize, vals: &mut [C]) {
        let j = v.len();
        if j == sizes.len() {
            vals[w] = vals[w].add(&t.at(v));
            return;
        }
        let rest: usize = sizes[j..].iter().sum();
        let mut x = v.last().map_or(0, |&y| y + 1);
        // the remaining blocks at x, x+1, ... must still fit
        while w + rest * x as usize + (1..sizes.len() - j).map(|i| sizes[j + i] * i).sum::<usize>() < vals.len() {
            v.push(x);
            rec(sizes, t, v, w + sizes[j] * x as usize, vals);
            v.pop();
            x += 1;
        }
    }
    rec(&sizes, t, &mut Vec::new(), 0, &mut vals);
    Seq::fit(zero, &vals, FIT_MARGIN)
}

/// Strictly increasing chain values on the blocks of `cell` whose exponent
/// vectors lie inside the bound of `out`.
fn chains<C: Coeff>(cell: &CellSpec, out: &TruncSeries<C>) -> Vec<Vec<u32>> {
    fn rec<C: Coeff>(cell: &CellSpec, out: &TruncSeries<C>, v: &mut Vec<u32>, acc: &mut Vec<Vec<u32>>) {
        let k = cell.blocks().len();
        if v.len() == k {
            acc.push(v.clone());
            return;
        }
        let mut x = v.last().map_or(0, |&y| y + 1);
        loop {
            // smallest completion: the remaining blocks at x, x+1, ...
            let mut w = v.clone();
            for j in 0..(k - v.len()) as u32 {
                w.push(x + j);
            }
            if !out.in_bound(&cell.exponent(&w)) {
                break;
            }
            v.push(x);
            rec(cell, out, v, acc);
            v.pop();
            x += 1;
        }
    }
    let mut acc = Vec::new();
    rec(cell, out, &mut Vec::new(), &mut acc);
    acc
}
