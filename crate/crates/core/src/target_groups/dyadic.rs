use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::GroupOracle;

/// A dyadic rational `num / 2^exp`, normalized so that `num` is odd
/// whenever `exp > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u64) -> Self {
        let mut d = Dyadic { num: num.into(), exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { num: BigInt::zero(), exp: 0 }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.num.is_even() {
            self.num >>= 1u32;
            self.exp -= 1;
        }
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        Dyadic::new(a + b, exp)
    }

    /// `|self| < 2^{-n}`.
    fn below(&self, n: u64) -> bool {
        (self.num.abs() << n) < (BigInt::one() << self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

/// `(ℤ[1/2], +)` with the metric balls `V_n = {q : |q| < 2^{-n}}` for
/// `n ≥ 1` and `V_0` the whole group.
#[derive(Clone, Debug, Default)]
pub struct DyadicAdapter;

impl DyadicAdapter {
    /// Elements with `exp + |num| = s`, in the enumeration order.
    fn shell(s: u64) -> impl Iterator<Item = Dyadic> {
        let range = if s == 0 { 0..0 } else { 0..s };
        let zero = (s == 0).then(Dyadic::zero);
        zero.into_iter().chain(range.flat_map(move |e| {
            let a = s - e;
            let ok = e == 0 || a % 2 == 1;
            ok.then(|| [Dyadic::new(a, e), Dyadic::new(-BigInt::from(a), e)])
                .into_iter()
                .flatten()
        }))
    }

    fn shell_len(s: u64) -> u64 {
        if s == 0 {
            1
        } else {
            2 * (0..s).filter(|&e| e == 0 || (s - e) % 2 == 1).count() as u64
        }
    }
}

impl GroupOracle for DyadicAdapter {
    type Elem = Dyadic;

    fn name(&self) -> String {
        "dyadic".into()
    }

    fn identity(&self) -> Dyadic {
        Dyadic::zero()
    }

    fn enumerate(&self, m: u64) -> Dyadic {
        let mut idx = m.saturating_sub(1);
        let mut s = 0;
        loop {
            let len = Self::shell_len(s);
            if idx < len {
                return Self::shell(s).nth(idx as usize).expect("index inside shell");
            }
            idx -= len;
            s += 1;
        }
    }

    fn mul(&self, a: &Dyadic, b: &Dyadic) -> Dyadic {
        a.add(b)
    }

    fn inv(&self, a: &Dyadic) -> Dyadic {
        Dyadic { num: -&a.num, exp: a.exp }
    }

    fn basis_member(&self, n: u64, g: &Dyadic) -> bool {
        n == 0 || g.below(n)
    }

    /// `0`, then for `e = 1, 2, …` the odd `a` with `|a| < 2^e` in the order
    /// `1, −1, 3, −3, …`, each giving `a / 2^{e+n}`.
    fn basis_enumerate(&self, n: u64, i: u64) -> Dyadic {
        if i == 0 {
            return Dyadic::zero();
        }
        if n == 0 {
            return self.enumerate(i + 1);
        }
        let e = u64::from((i + 1).ilog2());
        let offset = i + 1 - (1u64 << e);
        let a = 2 * (offset / 2) + 1;
        let num = if offset.is_multiple_of(2) { BigInt::from(a) } else { -BigInt::from(a) };
        Dyadic::new(num, e + n)
    }

    fn conj_bound(&self, _g: &Dyadic, n: u64) -> u64 {
        n
    }

    fn sq_bound(&self, n: u64) -> u64 {
        if n == 0 {
            0
        } else {
            n + 1
        }
    }

    fn theta_exact(&self, _g: &Dyadic, n: u64) -> Option<u64> {
        Some(n)
    }

    fn format(&self, g: &Dyadic) -> String {
        g.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let d = DyadicAdapter;
        assert!(d.basis_member(2, &Dyadic::new(1, 3)));
        assert!(!d.basis_member(2, &Dyadic::new(1, 2)));
        assert_eq!(d.sq_bound(3), 4);
        assert_eq!(d.basis_enumerate(5, 0), Dyadic::zero());
        assert_eq!(d.basis_enumerate(2, 1), Dyadic::new(1, 3));
        assert_eq!(d.basis_enumerate(2, 2), Dyadic::new(-1, 3));
        assert_eq!(d.basis_enumerate(0, 1), d.enumerate(2));
    }

    #[test]
    fn enumeration_is_injective_and_normalized() {
        let d = DyadicAdapter;
        let first: Vec<Dyadic> = (1..=500).map(|m| d.enumerate(m)).collect();
        assert_eq!(first[0], Dyadic::zero());
        let set: std::collections::HashSet<_> = first.iter().cloned().collect();
        assert_eq!(set.len(), first.len());
        for q in &first {
            assert_eq!(*q, Dyadic::new(q.numerator().clone(), q.exponent()));
        }
        // 3/4 appears early.
        assert!(first.contains(&Dyadic::new(3, 2)));
    }

    #[test]
    fn arithmetic_normalizes() {
        let d = DyadicAdapter;
        let q = d.mul(&Dyadic::new(1, 2), &Dyadic::new(1, 2));
        assert_eq!(q, Dyadic::new(1, 1));
        assert_eq!(d.mul(&q, &d.inv(&q)), Dyadic::zero());
    }
}
