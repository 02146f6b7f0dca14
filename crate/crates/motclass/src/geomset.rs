use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::count::CountVal;
use crate::field::{gcd, Fp};
use crate::poly::{mulmod, parse_poly, powmod, Poly};
use crate::MotError;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Affine variety `{x in A^d : equations = 0, x_i != 0 for i in nonzero}` with
/// the diagonal action `xi . x = (xi^{w_1} x_1, ..., xi^{w_d} x_d)` of `mu_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeomSet {
    pub vars: Vec<String>,
    pub equations: Vec<Poly>,
    pub nonzero: Vec<usize>,
    pub order: u64,
    pub weights: Vec<u64>,
    pub base_coords: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawGeomSet {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vars: Option<Vec<String>>,
    equations: Vec<String>,
    #[serde(default)]
    nonzero: Vec<usize>,
    order: u64,
    weights: Vec<u64>,
    #[serde(default)]
    base_coords: Vec<usize>,
}

impl GeomSet {
    /// Coordinates named `x1..xd`.
    pub fn default_vars(d: usize) -> Vec<String> {
        (1..=d).map(|i| format!("x{i}")).collect()
    }

    pub fn new(
        vars: Vec<String>,
        equations: Vec<Poly>,
        nonzero: Vec<usize>,
        order: u64,
        weights: Vec<u64>,
    ) -> Result<Self, MotError> {
        let s = Self {
            equations: equations.iter().map(|e| e.embed(&vars)).collect(),
            vars,
            nonzero,
            order,
            weights,
            base_coords: Vec::new(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    fn validate(&self) -> Result<(), MotError> {
        let d = self.dim();
        if self.order == 0 {
            return Err(MotError::InvalidGeomSet("action order must be >= 1".into()));
        }
        if self.weights.len() != d {
            return Err(MotError::InvalidGeomSet(format!(
                "expected {d} weights, got {}",
                self.weights.len()
            )));
        }
        if self.nonzero.iter().chain(&self.base_coords).any(|&i| i >= d) {
            return Err(MotError::InvalidGeomSet("coordinate index out of range".into()));
        }
        for e in &self.equations {
            self.equation_shift(e)?;
        }
        Ok(())
    }

    /// Lowest weight of the monomials of `e`, after checking that all weights
    /// agree modulo the action order.
    fn equation_shift(&self, e: &Poly) -> Result<u64, MotError> {
        let ws: Vec<u64> = e
            .terms()
            .map(|(a, _)| a.iter().zip(&self.weights).map(|(&k, &w)| k as u64 * w).sum())
            .collect();
        let Some(&lo) = ws.iter().min() else { return Ok(0) };
        if ws.iter().any(|w| (w - lo) % self.order != 0) {
            return Err(MotError::NotEquivariant(e.to_string()));
        }
        Ok(lo)
    }

    /// `mu_a = {u : u^a = 1}` with the translation action of weight 1.
    pub fn mu(a: u64) -> Self {
        let u = Poly::var("u");
        let eq = u.pow(a as u32).sub(&Poly::constant(1));
        Self::new(vec!["u".into()], vec![eq], vec![0], a, vec![1]).unwrap()
    }

    /// `G_m` with trivial action.
    pub fn gm() -> Self {
        Self::new(vec!["u".into()], vec![], vec![0], 1, vec![0]).unwrap()
    }

    /// A point.
    pub fn point() -> Self {
        Self::new(vec![], vec![], vec![], 1, vec![]).unwrap()
    }

    /// `F_i^n = {u^n + v^n = i, uv != 0}` with the diagonal action.
    pub fn fermat(n: u64, i: i64) -> Self {
        let (u, v) = (Poly::var("u"), Poly::var("v"));
        let eq = u.pow(n as u32).add(&v.pow(n as u32)).sub(&Poly::constant(i));
        Self::new(vec!["u".into(), "v".into()], vec![eq], vec![0, 1], n, vec![1, 1]).unwrap()
    }

    pub fn from_json(s: &str) -> Result<Self, MotError> {
        let raw: RawGeomSet = serde_json::from_str(s).map_err(|e| MotError::Json(e.to_string()))?;
        let vars = raw.vars.unwrap_or_else(|| Self::default_vars(raw.dim));
        if vars.len() != raw.dim {
            return Err(MotError::InvalidGeomSet("vars length differs from dim".into()));
        }
        let mut equations = Vec::new();
        for e in &raw.equations {
            let p = parse_poly(e)?;
            if let Some(v) = p.vars().iter().find(|v| !vars.contains(v)) {
                return Err(MotError::InvalidGeomSet(format!("unknown variable {v}")));
            }
            equations.push(p);
        }
        let mut s = Self::new(vars, equations, raw.nonzero, raw.order, raw.weights)?;
        s.base_coords = raw.base_coords;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        let raw = RawGeomSet {
            dim: self.dim(),
            vars: Some(self.vars.clone()),
            equations: self.equations.iter().map(|e| e.to_string()).collect(),
            nonzero: self.nonzero.clone(),
            order: self.order,
            weights: self.weights.clone(),
            base_coords: self.base_coords.clone(),
        };
        serde_json::to_string(&raw).unwrap()
    }

    /// Number of candidate points an enumeration over `F_q` visits.
    pub fn candidates(&self, q: u64) -> Option<u64> {
        let nz = self.nonzero_mask();
        nz.iter().try_fold(1u64, |acc, &z| acc.checked_mul(if z { q - 1 } else { q }))
    }

    fn nonzero_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.dim()];
        for &i in &self.nonzero {
            m[i] = true;
        }
        m
    }

    /// Twisted point count for the twist index `s` (the group element `zeta^s`).
    pub fn twisted_count(&self, field: Fp, s: i64, budget: u64) -> Result<BigInt, MotError> {
        let p = field.p;
        if self.order % p == 0 {
            return Err(MotError::UnsupportedOrder { order: self.order, p });
        }
        let cand = self.candidates(p).unwrap_or(u64::MAX);
        if cand > budget {
            return Err(MotError::FieldTooLarge { candidates: cand, budget });
        }
        // Substituting x_i = eta^{-s w_i} y_i with eta^N = omega turns each
        // equation into one over F_q with twisted coefficients.
        let mut eqs: Vec<Vec<(Vec<u32>, u64)>> = Vec::new();
        for e in &self.equations {
            let lo = self.equation_shift(e)?;
            let mut terms = Vec::new();
            for (a, c) in e.terms_mod(p) {
                let w: u64 = a.iter().zip(&self.weights).map(|(&k, &w)| k as u64 * w).sum();
                let k = ((w - lo) / self.order) as i64;
                terms.push((a, mulmod(c, field.omega_pow(-s * k), p)));
            }
            eqs.push(terms);
        }
        let d = self.dim();
        if d == 0 {
            let ok = eqs.iter().all(|t| t.iter().map(|(_, c)| *c).sum::<u64>() % p == 0);
            return Ok(BigInt::from(ok as u8));
        }
        let nz = self.nonzero_mask();
        let range = |i: usize| if nz[i] { 1..p } else { 0..p };
        let total: u64 = range(0)
            .into_par_iter()
            .map(|x0| {
                let mut x = vec![0u64; d];
                x[0] = x0;
                for i in 1..d {
                    x[i] = range(i).start;
                }
                let mut cnt = 0u64;
                loop {
                    if eqs.iter().all(|t| eval_terms(t, &x, p) == 0) {
                        cnt += 1;
                    }
                    // odometer over coordinates 1..d
                    let mut i = 1;
                    loop {
                        if i >= d {
                            return cnt;
                        }
                        x[i] += 1;
                        if x[i] < p {
                            break;
                        }
                        x[i] = range(i).start;
                        i += 1;
                    }
                }
            })
            .sum();
        Ok(BigInt::from(total))
    }

    /// Twist vector over `mu_order`.
    pub fn count_val(&self, field: Fp, budget: u64) -> Result<CountVal, MotError> {
        let g = gcd(self.order, field.p - 1);
        let mut v = Vec::with_capacity(g as usize);
        for s in 0..g as i64 {
            v.push(BigRational::from_integer(self.twisted_count(field, s, budget)?));
        }
        Ok(CountVal::new(field, v))
    }

    /// Check `P(xi . x) = xi^e P(x)` at sample points for a generator `xi` of
    /// `mu_order`. Needs `order | q - 1`.
    pub fn spot_check_equivariance(&self, field: Fp, points: &[Vec<u64>]) -> bool {
        let p = field.p;
        if (p - 1) % self.order != 0 {
            return false;
        }
        let xi = field.pow(field.omega, (p - 1) / self.order);
        self.equations.iter().all(|e| {
            let lo = self.equation_shift(e).unwrap_or(0);
            points.iter().all(|x| {
                let moved: Vec<u64> = x
                    .iter()
                    .zip(&self.weights)
                    .map(|(&xi_, &w)| mulmod(xi_, powmod(xi, w, p), p))
                    .collect();
                e.eval_mod(&moved, p) == mulmod(powmod(xi, lo, p), e.eval_mod(x, p), p)
            })
        })
    }
}

fn eval_terms(t: &[(Vec<u32>, u64)], x: &[u64], p: u64) -> u64 {
    let mut acc = 0u64;
    for (a, c) in t {
        let mut m = *c;
        for (xi, &k) in x.iter().zip(a) {
            if k > 0 {
                m = mulmod(m, powmod(*xi, k as u64, p), p);
            }
        }
        acc += m;
        if acc >= p {
            acc -= p;
        }
    }
    acc
}
