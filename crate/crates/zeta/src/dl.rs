//! Denef-Loeser formulas from resolution data, with optional cone conditions,
//! and Euler characteristics of lattice cones.

use std::collections::BTreeMap;

use locring::LocRat;
use motclass::{Atom, Binding, GeomSet, SymbolicClass};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use series::{BoundMode, ClosedSeries, GeomFactor, Strand, TruncSeries};

use crate::nearby::mu_binding;
use crate::ZetaError;

/// Lattice points with coordinates up to this size are used to validate
/// supplied cone decompositions.
pub const SAMPLE_BOUND: i64 = 6;

/// Simplicial cone `{sum lambda_j g_j}` with `lambda_j > 0` on open faces and
/// `lambda_j >= 0` on closed ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConePiece {
    pub gens: Vec<Vec<i64>>,
    pub open_faces: Vec<bool>,
}

/// Disjoint union of simplicial cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub cones: Vec<ConePiece>,
}

impl ConePiece {
    pub fn open(gens: Vec<Vec<i64>>) -> Self {
        let open_faces = vec![true; gens.len()];
        Self { gens, open_faces }
    }

    /// Coordinates of `x` in the generators, if `x` lies in their span.
    fn solve(&self, x: &[i64]) -> Option<Vec<BigRational>> {
        let m = self.gens.len();
        let dim = x.len();
        let r = |v: i64| BigRational::from_integer(BigInt::from(v));
        // rows: coordinates, columns: generators, then x
        let mut a: Vec<Vec<BigRational>> =
            (0..dim).map(|i| self.gens.iter().map(|g| r(g[i])).chain([r(x[i])]).collect()).collect();
        let mut piv_cols = Vec::new();
        let mut row = 0;
        for col in 0..m {
            let Some(p) = (row..dim).find(|&i| !a[i][col].is_zero()) else { return None };
            a.swap(row, p);
            let inv = a[row][col].recip();
            for v in a[row].iter_mut() {
                *v = &*v * &inv;
            }
            for i in 0..dim {
                if i != row && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in 0..=m {
                        let t = &a[row][j] * &f;
                        a[i][j] = &a[i][j] - t;
                    }
                }
            }
            piv_cols.push(col);
            row += 1;
        }
        if a[row..].iter().any(|rw| !rw[m].is_zero()) {
            return None;
        }
        Some((0..m).map(|j| a[j][m].clone()).collect())
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        if self.gens.is_empty() {
            return x.iter().all(|&v| v == 0);
        }
        match self.solve(x) {
            Some(l) => l.iter().zip(&self.open_faces).all(|(v, &open)| if open { v.is_positive() } else { !v.is_negative() }),
            None => false,
        }
    }

    /// Linearly independent generators spanning a saturated sublattice.
    pub fn is_unimodular(&self) -> bool {
        let m = self.gens.len();
        if m == 0 {
            return true;
        }
        let dim = self.gens[0].len();
        if m > dim {
            return false;
        }
        let mut g = BigInt::zero();
        for rows in subsets(dim, m) {
            let mat: Vec<Vec<BigInt>> = rows.iter().map(|&i| self.gens.iter().map(|v| BigInt::from(v[i])).collect()).collect();
            g = g.gcd(&det(mat));
        }
        g == BigInt::from(1)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in start..n {
            acc.push(i);
            rec(i + 1, n, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Fraction-free determinant.
fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn lattice_box(dim: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

impl ConeSpec {
    /// `{1 <= n_1 < ... < n_r}` as one open unimodular cone.
    pub fn delta(r: usize) -> Self {
        let gens = (0..r).map(|j| (0..r).map(|i| (i >= j) as i64).collect()).collect();
        Self { dim: Some(r), cones: vec![ConePiece::open(gens)] }
    }

    /// The open positive orthant.
    pub fn orthant(r: usize) -> Self {
        let gens = (0..r).map(|j| (0..r).map(|i| (i == j) as i64).collect()).collect();
        Self { dim: Some(r), cones: vec![ConePiece::open(gens)] }
    }

    pub fn from_json(s: &str) -> Result<Self, ZetaError> {
        let c: Self = serde_json::from_str(s).map_err(|e| ZetaError::Parse(e.to_string()))?;
        c.dimension()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cone specs always serialize")
    }

    pub fn dimension(&self) -> Result<usize, ZetaError> {
        let mut dims = self.cones.iter().flat_map(|c| c.gens.iter().map(|g| g.len())).chain(self.dim);
        let Some(d) = dims.next() else {
            return Err(ZetaError::InvalidData("cone dimension is not determined".into()));
        };
        if dims.any(|e| e != d) {
            return Err(ZetaError::InvalidData("generators of different lengths".into()));
        }
        for c in &self.cones {
            if c.open_faces.len() != c.gens.len() {
                return Err(ZetaError::InvalidData("one face flag per generator expected".into()));
            }
        }
        Ok(d)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.cones.iter().any(|c| c.contains(x))
    }

    /// Pieces pairwise disjoint on all lattice points of the sample box.
    pub fn check_disjoint(&self) -> Result<(), ZetaError> {
        let d = self.dimension()?;
        for x in lattice_box(d, -SAMPLE_BOUND, SAMPLE_BOUND) {
            if self.cones.iter().filter(|c| c.contains(&x)).count() > 1 {
                return Err(ZetaError::ConeNotDecomposed(format!("pieces overlap at {x:?}")));
            }
        }
        Ok(())
    }
}

/// `chi` of a disjoint union of relatively open unimodular cones: each
/// piece contributes `(-1)^dim`, the limit of its generating function.
pub fn cone_euler(c: &ConeSpec) -> Result<i64, ZetaError> {
    c.check_disjoint()?;
    let mut chi = 0;
    for p in &c.cones {
        if p.open_faces.iter().any(|&o| !o) {
            return Err(ZetaError::ConeNotDecomposed("piece with a closed face".into()));
        }
        if !p.is_unimodular() {
            return Err(ZetaError::ConeNotDecomposed(format!("piece {:?} is not unimodular", p.gens)));
        }
        chi += if p.gens.len() % 2 == 0 { 1 } else { -1 };
    }
    Ok(chi)
}

fn default_order() -> u64 {
    1
}

fn default_true() -> bool {
    true
}

/// One stratum `E_I^o` of a resolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    #[serde(rename = "I")]
    pub index: Vec<usize>,
    /// atom name of `[E~_I^o]`; `"1"` for the class of the base
    pub atom: String,
    #[serde(default = "default_order")]
    pub order: u64,
    /// `N[i][j] = N_i(f_j)` for the `i`-th member of `I`
    #[serde(rename = "N")]
    pub mult: Vec<Vec<u32>>,
    pub nu: Vec<u32>,
    /// whether the stratum maps into the base locus
    #[serde(default = "default_true")]
    pub in_a: bool,
    /// decomposition of `N_I^{-1}(C)` in `k`-space, for cone conditions
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cones: Option<ConeSpec>,
}

/// Resolution data of a family `(f_1, ..., f_r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionData {
    pub strata: Vec<Stratum>,
    /// atom name to presentation, as geometric set documents
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bindings: BTreeMap<String, serde_json::Value>,
}

impl Stratum {
    pub fn class(&self) -> SymbolicClass {
        if self.atom == "1" {
            SymbolicClass::one()
        } else {
            SymbolicClass::atom(Atom::new(&self.atom, "X0", self.order))
        }
    }

    /// `N_I(k) = sum_i k_i N_i`.
    fn image(&self, k: &[i64]) -> Vec<i64> {
        let r = self.mult[0].len();
        (0..r).map(|j| k.iter().zip(&self.mult).map(|(ki, n)| ki * n[j] as i64).sum()).collect()
    }

    fn weight(&self, k: &[i64]) -> i64 {
        k.iter().zip(&self.nu).map(|(ki, &v)| ki * v as i64).sum()
    }

    /// `(L - 1)^{|I| - 1} [E~_I^o]`.
    fn coefficient(&self) -> SymbolicClass {
        let e = self.index.len() as u32 - 1;
        self.class().scale(&LocRat::l_minus_one().pow(e))
    }
}

impl ResolutionData {
    pub fn from_json(s: &str) -> Result<Self, ZetaError> {
        let d: Self = serde_json::from_str(s).map_err(|e| ZetaError::Parse(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("resolution data always serializes")
    }

    /// Single stratum `I = {1}` with multiplicity `n`, discrepancy `nu`.
    pub fn single(atom: &str, order: u64, n: u32, nu: u32) -> Self {
        Self {
            strata: vec![Stratum {
                index: vec![1],
                atom: atom.into(),
                order,
                mult: vec![vec![n]],
                nu: vec![nu],
                in_a: true,
                cones: None,
            }],
            bindings: BTreeMap::new(),
        }
    }

    /// Number of functions in the family.
    pub fn family_size(&self) -> usize {
        self.strata.first().and_then(|s| s.mult.first()).map_or(1, |n| n.len())
    }

    pub fn validate(&self) -> Result<(), ZetaError> {
        let r = self.family_size();
        for s in &self.strata {
            let bad = |m: &str| Err(ZetaError::InvalidData(format!("stratum {:?}: {m}", s.index)));
            if s.index.is_empty() {
                return bad("empty index set");
            }
            if s.mult.len() != s.index.len() || s.nu.len() != s.index.len() {
                return bad("one multiplicity row and one nu per index expected");
            }
            if s.mult.iter().any(|n| n.len() != r) {
                return bad("multiplicity rows of different lengths");
            }
            if s.nu.iter().any(|&v| v < 1) {
                return bad("nu must be at least 1");
            }
            if s.in_a && s.mult.iter().any(|n| n.iter().all(|&k| k == 0)) {
                return bad("every divisor of a base stratum needs a positive multiplicity");
            }
            if s.order == 0 {
                return bad("action order must be positive");
            }
        }
        Ok(())
    }

    /// Presentations for the atoms: the supplied ones, plus `mu_a` for
    /// atoms named that way.
    pub fn binding(&self) -> Result<Binding, ZetaError> {
        let orders: Vec<u64> = self
            .strata
            .iter()
            .filter(|s| s.atom == format!("mu_{}", s.order))
            .map(|s| s.order)
            .collect();
        let mut b = mu_binding(&orders);
        for (k, v) in &self.bindings {
            b.insert(k.clone(), GeomSet::from_json(&v.to_string())?);
        }
        Ok(b)
    }

    fn vars(&self) -> Vec<String> {
        match self.family_size() {
            1 => vec!["T".into()],
            r => (1..=r).map(|i| format!("T{i}")).collect(),
        }
    }
}

fn geom(s: &Stratum, g: &[i64]) -> Result<GeomFactor, ZetaError> {
    let n = s.image(g);
    if n.iter().any(|&v| v < 0) || n.iter().all(|&v| v == 0) {
        return Err(ZetaError::ConeNotDecomposed(format!("generator {g:?} has image {n:?}")));
    }
    Ok(GeomFactor::new(-s.weight(g), n.iter().map(|&v| v as u32).collect()))
}

/// Check that `s.cones` decomposes `{k > 0 : N_I(k) in C}` on the sample box.
fn check_decomposition(s: &Stratum, d: &ConeSpec, c: &ConeSpec) -> Result<(), ZetaError> {
    let m = s.index.len();
    if d.dimension()? != m {
        return Err(ZetaError::ConeNotDecomposed(format!("stratum {:?}: decomposition in the wrong dimension", s.index)));
    }
    for p in &d.cones {
        if !p.is_unimodular() {
            return Err(ZetaError::ConeNotDecomposed(format!("piece {:?} is not unimodular", p.gens)));
        }
        if p.gens.iter().any(|g| g.iter().any(|&v| v < 0)) {
            return Err(ZetaError::ConeNotDecomposed(format!("piece {:?} leaves the orthant", p.gens)));
        }
    }
    for k in lattice_box(m, 0, SAMPLE_BOUND) {
        let want = k.iter().all(|&v| v > 0) && c.contains(&s.image(&k));
        let have = d.cones.iter().filter(|p| p.contains(&k)).count();
        if have != want as usize {
            return Err(ZetaError::ConeNotDecomposed(format!(
                "stratum {:?}: point {k:?} lies in {have} pieces",
                s.index
            )));
        }
    }
    Ok(())
}

/// `Z^C_f(T) = sum_{I in A} (L-1)^{|I|-1} [E~_I^o] sum_{k in N_I^{-1}(C)} L^{-nu(k)} T^{N_I(k)}`
/// in closed form. Without a cone, `C` is everything and each stratum gives
/// `prod_i L^{-nu_i} T^{N_i} / (1 - L^{-nu_i} T^{N_i})`; with a cone every
/// base stratum must carry its decomposition of `N_I^{-1}(C)`.
pub fn dl_eval(res: &ResolutionData, cone: Option<&ConeSpec>) -> Result<ClosedSeries<SymbolicClass>, ZetaError> {
    res.validate()?;
    let vars = res.vars();
    let r = vars.len();
    if let Some(c) = cone {
        if c.dimension()? != r {
            return Err(ZetaError::InvalidData(format!("cone of dimension {} for a family of {r}", c.dimension()?)));
        }
    }
    let mut out = ClosedSeries::new(vars);
    for s in res.strata.iter().filter(|s| s.in_a) {
        let coeff = s.coefficient();
        let pieces = match cone {
            None => ConeSpec::orthant(s.index.len()),
            Some(c) => {
                let d = s.cones.clone().ok_or_else(|| {
                    ZetaError::ConeNotDecomposed(format!("stratum {:?} has no decomposition", s.index))
                })?;
                check_decomposition(s, &d, c)?;
                d
            }
        };
        for p in &pieces.cones {
            // a closed generator expands as 1/(1-y) = 1 + y/(1-y)
            let mut partial: Vec<Vec<GeomFactor>> = vec![vec![]];
            for (g, &open) in p.gens.iter().zip(&p.open_faces) {
                let f = geom(s, g)?;
                let mut next = Vec::new();
                for fs in partial {
                    if !open {
                        next.push(fs.clone());
                    }
                    let mut with = fs;
                    with.push(f.clone());
                    next.push(with);
                }
                partial = next;
            }
            for fs in partial {
                out.push(Strand::new(coeff.clone(), vec![0; r], fs));
            }
        }
    }
    Ok(out)
}

/// The same sum by direct enumeration of `k` through total degree `degree`.
pub fn dl_trunc(
    res: &ResolutionData,
    cone: Option<&ConeSpec>,
    degree: u32,
) -> Result<TruncSeries<SymbolicClass>, ZetaError> {
    res.validate()?;
    let mut out = TruncSeries::with_mode(res.vars(), degree, BoundMode::Total);
    for s in res.strata.iter().filter(|s| s.in_a) {
        let coeff = s.coefficient();
        let m = s.index.len();
        for k in lattice_box(m, 1, degree as i64) {
            let n = s.image(&k);
            if n.iter().sum::<i64>() > degree as i64 {
                continue;
            }
            if cone.is_some_and(|c| !c.contains(&n)) {
                continue;
            }
            let e: Vec<u32> = n.iter().map(|&v| v as u32).collect();
            out.add_at(e, &coeff.scale(&LocRat::l_pow(-s.weight(&k))));
        }
    }
    Ok(out)
}
