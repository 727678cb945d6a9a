//! Prime-field arithmetic with canonical representatives in `[0, p)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted; keeps products of two residues inside a `u64`.
pub const MAX_PRIME: u32 = (1 << 31) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldPrime(u32);

impl FieldPrime {
    pub fn new(p: u32) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::Input(format!("modulus {p} exceeds {MAX_PRIME}")));
        }
        if !is_prime(p) {
            return Err(Error::Input(format!("modulus {p} is not prime")));
        }
        Ok(FieldPrime(p))
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.0 as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.0 as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(self, a: u32, b: u32, c: u32) -> u32 {
        ((a as u64 + b as u64 * c as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in GF({})", self.0);
        self.pow(a, self.0 as u64 - 2)
    }

    pub fn reduce_i64(self, a: i64) -> u32 {
        a.rem_euclid(self.0 as i64) as u32
    }

    pub fn reduce_u64(self, a: u64) -> u32 {
        (a % self.0 as u64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, used when printing coefficients.
    pub fn signed(self, a: u32) -> i64 {
        if a as u64 * 2 > self.0 as u64 {
            a as i64 - self.0 as i64
        } else {
            a as i64
        }
    }
}

impl TryFrom<u32> for FieldPrime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        FieldPrime::new(p)
    }
}

impl From<FieldPrime> for u32 {
    fn from(f: FieldPrime) -> u32 {
        f.0
    }
}

impl std::fmt::Display for FieldPrime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.0)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let n = n as u64;
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
