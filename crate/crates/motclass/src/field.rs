use crate::poly::{mulmod, powmod};
use crate::MotError;

/// Prime field `F_p` with its smallest multiplicative generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    pub p: u64,
    pub omega: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Fp {
    pub fn new(p: u64) -> Result<Self, MotError> {
        if !is_prime(p) {
            return Err(MotError::UnsupportedField(p));
        }
        if p == 2 {
            return Ok(Self { p, omega: 1 });
        }
        let fs = prime_factors(p - 1);
        let omega = (2..p)
            .find(|&w| fs.iter().all(|&r| powmod(w, (p - 1) / r, p) != 1))
            .expect("a prime field has a generator");
        Ok(Self { p, omega })
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        powmod(a, e, self.p)
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero");
        powmod(a, self.p - 2, self.p)
    }

    /// `omega^k` for any integer `k`.
    pub fn omega_pow(&self, k: i64) -> u64 {
        let m = (self.p - 1) as i64;
        self.pow(self.omega, k.rem_euclid(m) as u64)
    }

    /// Discrete logarithm table: `log[x]` for `x` in `1..p`.
    pub fn log_table(&self) -> Vec<u64> {
        let mut log = vec![0u64; self.p as usize];
        let mut x = 1u64;
        for k in 0..self.p - 1 {
            log[x as usize] = k;
            x = self.mul(x, self.omega);
        }
        log
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}
