use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};

use super::{zigzag, GroupOracle};
use crate::error::Error;

/// `(ℤ, +)` with the `p`-adic basis `V_n = pⁿℤ`.
#[derive(Clone, Debug)]
pub struct ZpAdapter {
    p: u64,
}

impl ZpAdapter {
    pub fn new(p: u64) -> Result<Self, Error> {
        let prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if !prime {
            return Err(Error::Config(format!("{p} is not prime")));
        }
        Ok(ZpAdapter { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn power(&self, n: u64) -> BigInt {
        Pow::pow(BigInt::from(self.p), n)
    }
}

impl GroupOracle for ZpAdapter {
    type Elem = BigInt;

    fn name(&self) -> String {
        format!("zp{}", self.p)
    }

    fn identity(&self) -> BigInt {
        BigInt::zero()
    }

    fn enumerate(&self, m: u64) -> BigInt {
        BigInt::from(zigzag(m.saturating_sub(1)))
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn inv(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn basis_member(&self, n: u64, g: &BigInt) -> bool {
        g.is_multiple_of(&self.power(n))
    }

    fn basis_enumerate(&self, n: u64, i: u64) -> BigInt {
        BigInt::from(zigzag(i)) * self.power(n)
    }

    fn conj_bound(&self, _g: &BigInt, n: u64) -> u64 {
        n
    }

    fn sq_bound(&self, n: u64) -> u64 {
        n
    }

    fn theta_exact(&self, _g: &BigInt, n: u64) -> Option<u64> {
        Some(n)
    }

    fn format(&self, g: &BigInt) -> String {
        g.to_string()
    }
}
