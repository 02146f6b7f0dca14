//! The `⊠∗`-product of integrable series.
//!
//! Operands and results are [`CellSeries`]: each ordered cell carries sums of
//! external products of univariate factor sequences, one per block. The
//! univariate product follows the three-case coefficient rule; the
//! multivariate one merges the block chains of both operands, with matched
//! blocks combined by the `c~` rule, and is conjugated by `Phi`.

use rayon::prelude::*;
use series::{CellSeries, CellSpec, ProductTerm, Scalar, Seq, SeriesCoeff, SeriesError, TailBound};

/// One step of a merge of two block chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    /// next block of the first operand alone
    A,
    /// next block of the second operand alone
    B,
    /// next blocks of both operands, with equal values
    M,
}

/// All merges of chains of lengths `r` and `s` (Delannoy paths).
pub fn merge_patterns(r: usize, s: usize) -> Vec<Vec<Step>> {
    fn rec(r: usize, s: usize, acc: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
        if r == 0 && s == 0 {
            out.push(acc.clone());
            return;
        }
        for (st, dr, ds) in [(Step::A, 1, 0), (Step::B, 0, 1), (Step::M, 1, 1)] {
            if r >= dr && s >= ds {
                acc.push(st);
                rec(r - dr, s - ds, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(r, s, &mut Vec::new(), &mut out);
    out
}

/// `I_{n,m} = {(i, j) : n_i = m_j}`.
pub fn matched(n: &[u32], m: &[u32]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in n.iter().enumerate() {
        for (j, b) in m.iter().enumerate() {
            if a == b {
                out.push((i, j));
            }
        }
    }
    out
}

fn l_minus_one<C: SeriesCoeff>(z: &C) -> C::S {
    z.l_pow(1).sub(&C::S::one())
}

fn not_integrable(e: SeriesError) -> SeriesError {
    match e {
        SeriesError::TailNotSummable(m) => SeriesError::NotIntegrable(m),
        e => e,
    }
}

/// `(L-1) sum_{l>0} z'_{n+l}` as a sequence in `n`.
fn aug_tail<C: SeriesCoeff>(z: &Seq<C>) -> Result<Seq<C>, SeriesError> {
    let lm1 = l_minus_one(z.zero_coeff());
    Ok(z.map(|c| c.augment()).tail(0).map_err(not_integrable)?.scale_s(&lm1))
}

/// The matched-block factor
/// `-a_l * b_l + sum_{1<=k<=l} L^{k-l} a_k *_0 b_k + (L-1) sum_{k>l} (a_l x b'_k + a'_k x b_l)`.
pub fn tilde<C: SeriesCoeff>(a: &Seq<C>, b: &Seq<C>) -> Result<Seq<C>, SeriesError> {
    let z = a.zero_coeff();
    let conv = a.hadamard(b, |x, y| x.conv(y))?;
    let c0 = a.hadamard(b, |x, y| x.conv0(y))?;
    let c0 = c0.sub(&Seq::poly(z, vec![c0.coeff(0)]));
    let linv = z.l_pow(-1);
    let summed = c0.mul_scalar_gf(&[C::S::one()], &[C::S::one(), linv.neg()]);
    let ta = aug_tail(a)?;
    let tb = aug_tail(b)?;
    let x1 = a.hadamard(&tb, |x, y| x.ext_mul(y))?;
    let x2 = ta.hadamard(b, |x, y| x.ext_mul(y))?;
    Ok(summed.sub(&conv).add(&x1).add(&x2))
}

/// Univariate `a(T) ⊠∗ b(U)` in variables `(T, U)`:
/// `(L-1) sum_{l>m} a_n x b'_l` for `n < m`, symmetric for `n > m`, and the
/// `c~` rule on the diagonal.
pub fn boxast_uni<C: SeriesCoeff>(a: &Seq<C>, b: &Seq<C>, t: &str, u: &str) -> Result<CellSeries<C>, SeriesError> {
    if t == u {
        return Err(SeriesError::VariableMismatch(format!("both operands use variable {t}")));
    }
    let z = a.zero_coeff();
    let mut out = CellSeries::new(vec![t.to_string(), u.to_string()], z);
    out.push(CellSpec::new(vec![vec![0], vec![1]]), ProductTerm::new(vec![a.clone(), aug_tail(b)?]));
    out.push(CellSpec::new(vec![vec![1], vec![0]]), ProductTerm::new(vec![b.clone(), aug_tail(a)?]));
    out.push(CellSpec::new(vec![vec![0, 1]]), ProductTerm::new(vec![tilde(a, b)?]));
    Ok(out)
}

fn joint_vars(a: &[String], b: &[String]) -> Result<Vec<String>, SeriesError> {
    if let Some(v) = a.iter().find(|v| b.contains(v)) {
        return Err(SeriesError::VariableMismatch(format!("variable {v} occurs in both operands")));
    }
    Ok(a.iter().chain(b).cloned().collect())
}

/// `⊠∗_0` on cellwise operands: every pair of cells is merged by every
/// pattern, matched blocks through [`tilde`].
fn boxast0_cells<C: SeriesCoeff>(a: &CellSeries<C>, b: &CellSeries<C>) -> Result<CellSeries<C>, SeriesError> {
    let vars = joint_vars(&a.vars, &b.vars)?;
    let r = a.nvars();
    let z = a.zero_coeff();
    let mut jobs = Vec::new();
    for (ca, ta) in a.cells() {
        for (cb, tb) in b.cells() {
            for pat in merge_patterns(ca.blocks().len(), cb.blocks().len()) {
                for x in ta {
                    for y in tb {
                        jobs.push((ca, cb, pat.clone(), x, y));
                    }
                }
            }
        }
    }
    let done: Result<Vec<(CellSpec, ProductTerm<C>)>, SeriesError> = jobs
        .par_iter()
        .map(|(ca, cb, pat, x, y)| {
            let (mut i, mut j) = (0, 0);
            let mut blocks = Vec::new();
            let mut factors = Vec::new();
            for st in pat {
                match st {
                    Step::A => {
                        blocks.push(ca.blocks()[i].clone());
                        factors.push(x.factors[i].clone());
                        i += 1;
                    }
                    Step::B => {
                        blocks.push(cb.blocks()[j].iter().map(|k| k + r).collect());
                        factors.push(y.factors[j].clone());
                        j += 1;
                    }
                    Step::M => {
                        let mut blk = ca.blocks()[i].clone();
                        blk.extend(cb.blocks()[j].iter().map(|k| k + r));
                        blocks.push(blk);
                        factors.push(tilde(&x.factors[i], &y.factors[j])?);
                        i += 1;
                        j += 1;
                    }
                }
            }
            Ok((CellSpec::new(blocks), ProductTerm::new(factors)))
        })
        .collect();
    let mut out = CellSeries::new(vars, z);
    for (c, t) in done? {
        out.push(c, t);
    }
    Ok(out)
}

/// `a(T) ⊠∗_0 b(U)` for operands supported on the strict chains
/// `n_1 < ... < n_r` and `m_1 < ... < m_s`.
pub fn boxast0_multi<C: SeriesCoeff>(a: &CellSeries<C>, b: &CellSeries<C>) -> Result<CellSeries<C>, SeriesError> {
    for (s, name) in [(a, "first"), (b, "second")] {
        let chain = CellSpec::chain(s.nvars());
        if let Some((c, _)) = s.cells().find(|(c, ts)| **c != chain && !ts.is_empty()) {
            return Err(SeriesError::SupportViolation(format!("{name} operand has terms on cell {c}")));
        }
    }
    boxast0_cells(a, b)
}

/// Options for the `Phi^{-1}` step of the multivariate product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhiOptions {
    pub bound: TailBound,
    pub augment: bool,
}

impl Default for PhiOptions {
    fn default() -> Self {
        Self { bound: TailBound::Zero, augment: false }
    }
}

/// `a(T) ⊠∗ b(U) = Phi^{-1}(Phi(a) ⊠∗_0 Phi(b))`, cell by cell.
pub fn boxast_multi<C: SeriesCoeff>(
    a: &CellSeries<C>,
    b: &CellSeries<C>,
    opts: PhiOptions,
) -> Result<CellSeries<C>, SeriesError> {
    let pa = a.phi().map_err(not_integrable)?;
    let pb = b.phi().map_err(not_integrable)?;
    boxast0_cells(&pa, &pb)?.phi_inv(opts.bound, opts.augment).map_err(not_integrable)
}

/// Univariate series as a one-cell series.
pub fn from_seq<C: SeriesCoeff>(a: &Seq<C>, var: &str) -> CellSeries<C> {
    let mut out = CellSeries::new(vec![var.to_string()], a.zero_coeff());
    out.push(CellSpec::chain(1), ProductTerm::new(vec![a.clone()]));
    out
}
