use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use locring::LocRat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::field::{gcd, lcm, Fp};

/// Count realization of a class with a `mu_N` action.
///
/// `v[s]` is the number of `F_q`-points of the twist of the variety by the
/// `mu_N`-torsor `{tau : tau^N = omega^s}`; for `N | q - 1` this is the number of
/// points with `Frob(x) = zeta^-s . x`. The vector is kept at its minimal period.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CountVal {
    field: Fp,
    v: Vec<BigRational>,
}

fn reduce(mut v: Vec<BigRational>) -> Vec<BigRational> {
    let n = v.len();
    for p in 1..n {
        if n % p == 0 && (p..n).all(|i| v[i] == v[i % p]) {
            v.truncate(p);
            return v;
        }
    }
    v
}

impl CountVal {
    pub fn new(field: Fp, v: Vec<BigRational>) -> Self {
        assert!(!v.is_empty(), "empty twist vector");
        Self { field, v: reduce(v) }
    }

    pub fn from_ints(field: Fp, v: &[i64]) -> Self {
        Self::new(field, v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
    }

    pub fn constant(field: Fp, c: BigRational) -> Self {
        Self { field, v: vec![c] }
    }

    pub fn zero(field: Fp) -> Self {
        Self::constant(field, BigRational::zero())
    }

    pub fn one(field: Fp) -> Self {
        Self::constant(field, BigRational::from_integer(BigInt::from(1)))
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn q(&self) -> u64 {
        self.field.p
    }

    /// Minimal period of the twist vector.
    pub fn order(&self) -> u64 {
        self.v.len() as u64
    }

    pub fn values(&self) -> &[BigRational] {
        &self.v
    }

    /// Plain `F_q`-point count.
    pub fn count(&self) -> &BigRational {
        &self.v[0]
    }

    pub fn at(&self, s: i64) -> &BigRational {
        &self.v[s.rem_euclid(self.v.len() as i64) as usize]
    }

    /// The vector viewed through `mu_n`, `n` a multiple of the order.
    pub fn lifted(&self, n: u64) -> Vec<BigRational> {
        assert_eq!(n % self.order(), 0, "lift to a non-multiple order");
        (0..n as i64).map(|s| self.at(s).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().all(|x| x.is_zero())
    }

    fn check_field(&self, o: &Self) {
        assert_eq!(self.field, o.field, "count values over different fields");
    }

    fn zip(&self, o: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        self.check_field(o);
        let n = lcm(self.order(), o.order());
        let v = (0..n as i64).map(|s| f(self.at(s), o.at(s))).collect();
        Self::new(self.field, v)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        Self { field: self.field, v: self.v.iter().map(|x| -x).collect() }
    }

    /// External product: diagonal action, pointwise in the twist.
    pub fn mul(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a * b)
    }

    pub fn scale_rat(&self, c: &BigRational) -> Self {
        Self::new(self.field, self.v.iter().map(|x| x * c).collect())
    }

    pub fn scale(&self, c: &LocRat) -> Self {
        let q = BigRational::from_integer(BigInt::from(self.field.p));
        let c = c.eval_at(&q).expect("L = q is never a root of 1 - L^n");
        self.scale_rat(&c)
    }

    /// Augmentation: the count of `(A x G_m)/mu_N` divided by `q - 1`, which is the
    /// mean of the twist vector, with trivial residual action.
    pub fn augment(&self) -> Self {
        let sum: BigRational = self.v.iter().sum();
        Self::constant(self.field, sum / BigRational::from_integer(BigInt::from(self.v.len())))
    }

    /// `[F_i^N x^{mu_N x mu_N} (A x B)]` for `i` in `{0, 1}`.
    pub fn conv(&self, o: &Self, i: u8) -> Self {
        self.check_field(o);
        let n = lcm(self.order(), o.order());
        let table = fermat_table(self.field, n);
        let c = &table.counts[i as usize];
        let a = self.lifted(n);
        let b = o.lifted(n);
        let n = n as usize;
        let mut out = vec![BigRational::zero(); n];
        for (t, slot) in out.iter_mut().enumerate() {
            let mut acc = BigInt::zero();
            let mut acc_r = BigRational::zero();
            for u1 in 0..n {
                let x = &a[(u1 + t) % n];
                if x.is_zero() {
                    continue;
                }
                for u2 in 0..n {
                    let k = c[u1 % table.g][u2 % table.g];
                    if k == 0 {
                        continue;
                    }
                    let y = &b[(u2 + t) % n];
                    if y.is_integer() && x.is_integer() {
                        acc += BigInt::from(k) * x.numer() * y.numer();
                    } else {
                        acc_r += BigRational::from_integer(BigInt::from(k)) * x * y;
                    }
                }
            }
            *slot = (BigRational::from_integer(acc) + acc_r) * &table.weight;
        }
        Self::new(self.field, out)
    }

    pub fn conv0(&self, o: &Self) -> Self {
        self.conv(o, 0)
    }

    pub fn conv1(&self, o: &Self) -> Self {
        self.conv(o, 1)
    }
}

struct FermatTable {
    /// `gcd(N, q - 1)`; the counts depend on twists modulo this.
    g: usize,
    /// `counts[i][s][t] = #{Y, Z in H : omega^s Y + omega^t Z = i}`, `H` the
    /// subgroup of `N`-th powers.
    counts: [Vec<Vec<u64>>; 2],
    /// `g^2 / N^2`: each element of `H` is an `N`-th power `g` times, and the
    /// quotient by `mu_N x mu_N` divides by `N^2`.
    weight: BigRational,
}

fn fermat_table(field: Fp, n: u64) -> Arc<FermatTable> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Arc<FermatTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(field.p, n)) {
        return t.clone();
    }
    let t = Arc::new(build_fermat(field, n));
    cache.lock().unwrap().insert((field.p, n), t.clone());
    t
}

fn build_fermat(field: Fp, n: u64) -> FermatTable {
    let p = field.p;
    let g = gcd(n, p - 1) as usize;
    let mut in_h = vec![false; p as usize];
    let mut h = Vec::new();
    for y in 1..p {
        let yn = field.pow(y, g as u64);
        if !in_h[yn as usize] {
            in_h[yn as usize] = true;
            h.push(yn);
        }
    }
    let mut counts = [vec![vec![0u64; g]; g], vec![vec![0u64; g]; g]];
    for s in 0..g {
        let ws = field.omega_pow(s as i64);
        for t in 0..g {
            let wt_inv = field.inv(field.omega_pow(t as i64));
            for (i, table) in counts.iter_mut().enumerate() {
                let mut k = 0;
                for &y in &h {
                    // Z = (i - omega^s Y) / omega^t
                    let z = field.mul((i as u64 + p - field.mul(ws, y)) % p, wt_inv);
                    if z != 0 && in_h[z as usize] {
                        k += 1;
                    }
                }
                table[s][t] = k;
            }
        }
    }
    let weight = BigRational::new(BigInt::from(g * g), BigInt::from(n * n));
    FermatTable { g, counts, weight }
}

impl fmt::Display for CountVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.v.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for CountVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}@q={}", self.field.p)
    }
}
