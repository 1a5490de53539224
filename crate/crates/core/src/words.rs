//! Exact arithmetic in the free group on generators indexed by `u64`.
//!
//! Words are immutable, always freely reduced, and compare structurally.
//! The text format is a whitespace-separated list of tokens where `k` is the
//! generator `k` and `k'` is its inverse; the empty string is the identity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A signed generator `k^{+1}` or `k^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: u64,
    pub inverse: bool,
}

impl Letter {
    pub const fn pos(index: u64) -> Self {
        Letter { index, inverse: false }
    }

    pub const fn neg(index: u64) -> Self {
        Letter { index, inverse: true }
    }

    /// Builds a letter from an exponent in `{+1, -1}`.
    pub fn with_exponent(index: u64, exponent: i8) -> Result<Self, Error> {
        match exponent {
            1 => Ok(Letter::pos(index)),
            -1 => Ok(Letter::neg(index)),
            e => Err(Error::WordParse(format!("exponent {e} is not +1 or -1"))),
        }
    }

    pub fn exponent(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter { index: self.index, inverse: !self.inverse }
    }

    /// True if `self` and `other` cancel when adjacent.
    pub fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}'", self.index)
        } else {
            write!(f, "{}", self.index)
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(tok: &str) -> Result<Self, Self::Err> {
        let (digits, inverse) = match tok.strip_suffix('\'') {
            Some(d) => (d, true),
            None => (tok, false),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::WordParse(format!("bad token {tok:?}")));
        }
        let index = digits
            .parse::<u64>()
            .map_err(|e| Error::WordParse(format!("bad token {tok:?}: {e}")))?;
        Ok(Letter { index, inverse })
    }
}

/// A freely reduced word. The empty word is the identity `e`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord(Vec<Letter>);

/// Freely reduces a raw letter sequence with a single stack pass.
pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> ReducedWord {
    let mut out: Vec<Letter> = Vec::new();
    for l in raw {
        match out.last() {
            Some(&top) if top.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    ReducedWord(out)
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        ReducedWord(vec![l])
    }

    /// Reduces `raw`; convenience alias for [`reduce`].
    pub fn from_letters<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        reduce(raw)
    }

    /// Builds a word from signed integers: `k` for generator `k`, `-(k+1)`
    /// for the inverse of `k`. Only meant for tests and examples.
    pub fn from_signed(raw: &[i64]) -> Self {
        reduce(raw.iter().map(|&v| {
            if v >= 0 {
                Letter::pos(v as u64)
            } else {
                Letter::neg((-v - 1) as u64)
            }
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiply(&self, other: &ReducedWord) -> ReducedWord {
        // Only the junction can cancel.
        let mut cut = 0;
        let (a, b) = (&self.0, &other.0);
        while cut < a.len() && cut < b.len() && a[a.len() - 1 - cut].cancels(b[cut]) {
            cut += 1;
        }
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * cut);
        out.extend_from_slice(&a[..a.len() - cut]);
        out.extend_from_slice(&b[cut..]);
        ReducedWord(out)
    }

    pub fn invert(&self) -> ReducedWord {
        ReducedWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// `g⁻¹ · self · g`, reduced.
    pub fn conjugate(&self, g: &ReducedWord) -> ReducedWord {
        g.invert().multiply(self).multiply(g)
    }

    /// Splits `self` as `wing⁻¹ · core · wing` with `core` cyclically reduced
    /// and `wing` as long as possible.
    pub fn cyclic_reduce(&self) -> (ReducedWord, ReducedWord) {
        let w = &self.0;
        let mut i = 0;
        while 2 * i + 1 < w.len() && w[i].cancels(w[w.len() - 1 - i]) {
            i += 1;
        }
        let core = ReducedWord(w[i..w.len() - i].to_vec());
        let wing = ReducedWord(w[w.len() - i..].to_vec());
        (core, wing)
    }

    /// Sum of generator indices over all letters, ignoring exponents.
    pub fn index_sum(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, l| acc.saturating_add(l.index))
    }

    /// Signed exponent sum per generator, sorted by generator.
    pub fn abelianization(&self) -> Vec<(u64, i64)> {
        let mut sums: Vec<(u64, i64)> = Vec::new();
        for l in &self.0 {
            let d = l.exponent() as i64;
            match sums.binary_search_by_key(&l.index, |&(k, _)| k) {
                Ok(pos) => sums[pos].1 += d,
                Err(pos) => sums.insert(pos, (l.index, d)),
            }
        }
        sums.retain(|&(_, s)| s != 0);
        sums
    }

    /// Distinct generators appearing in the word, sorted.
    pub fn alphabet(&self) -> Vec<u64> {
        let mut a: Vec<u64> = self.0.iter().map(|l| l.index).collect();
        a.sort_unstable();
        a.dedup();
        a
    }

    /// The largest generator index used, if any.
    pub fn max_index(&self) -> Option<u64> {
        self.0.iter().map(|l| l.index).max()
    }
}

/// Free functions mirroring the method API.
pub fn multiply(a: &ReducedWord, b: &ReducedWord) -> ReducedWord {
    a.multiply(b)
}

pub fn invert(w: &ReducedWord) -> ReducedWord {
    w.invert()
}

pub fn conjugate(w: &ReducedWord, g: &ReducedWord) -> ReducedWord {
    w.conjugate(g)
}

pub fn cyclic_reduce(w: &ReducedWord) -> (ReducedWord, ReducedWord) {
    w.cyclic_reduce()
}

pub fn index_sum(w: &ReducedWord) -> u64 {
    w.index_sum()
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for ReducedWord {
    type Err = Error;

    /// Parses the text format and reduces the result.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .split_whitespace()
            .map(Letter::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(reduce(letters))
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ReducedWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(serde::de::Error::custom)
    }
}

/// All reduced words of length exactly `len` over generators `0..=max_gen`,
/// in lexicographic order.
pub fn all_reduced_words(len: usize, max_gen: u64) -> Vec<ReducedWord> {
    let alphabet: Vec<Letter> = (0..=max_gen)
        .flat_map(|k| [Letter::pos(k), Letter::neg(k)])
        .collect();
    let mut out = vec![Vec::<Letter>::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * alphabet.len());
        for w in &out {
            for &l in &alphabet {
                if w.last().is_some_and(|t| t.cancels(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(ReducedWord).collect()
}

/// All reduced words of length at most `max_len`.
pub fn reduced_words_up_to(max_len: usize, max_gen: u64) -> Vec<ReducedWord> {
    (0..=max_len).flat_map(|l| all_reduced_words(l, max_gen)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        let raw = [Letter::pos(3), Letter::neg(5), Letter::pos(5), Letter::pos(2)];
        assert_eq!(reduce(raw), w("3 2"));
        assert_eq!(reduce([]), ReducedWord::identity());
        assert_eq!(reduce([Letter::pos(4), Letter::neg(4)]), ReducedWord::identity());
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(w("3 5").multiply(&w("5' 4")), w("3 4"));
        let x = w("3 5' 7");
        assert_eq!(x.multiply(&ReducedWord::identity()), x);
        assert!(x.multiply(&x.invert()).is_identity());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("3 5'").invert(), w("5 3'"));
        assert_eq!(ReducedWord::identity().invert(), ReducedWord::identity());
        assert_eq!(w("2").invert(), w("2'"));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(w("31").conjugate(&w("5")), w("5' 31 5"));
        assert_eq!(w("3 4").conjugate(&ReducedWord::identity()), w("3 4"));
        assert_eq!(w("5").conjugate(&w("5")), w("5"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("5' 31 5").cyclic_reduce(), (w("31"), w("5")));
        assert_eq!(w("31").cyclic_reduce(), (w("31"), ReducedWord::identity()));
        let (core, wing) = w("3 7 3'").cyclic_reduce();
        assert_eq!(core, w("7"));
        assert_eq!(wing, w("3'"));
        assert_eq!(core.conjugate(&wing), w("3 7 3'"));
    }

    #[test]
    fn cyclic_reduce_keeps_one_letter_core() {
        // [k, k'] cannot occur in a reduced word, so the core is never emptied.
        let (core, wing) = w("1 2 1'").cyclic_reduce();
        assert_eq!((core, wing), (w("2"), w("1'")));
        assert_eq!(ReducedWord::identity().cyclic_reduce().0, ReducedWord::identity());
    }

    #[test]
    fn index_sum_examples() {
        assert_eq!(w("3 5' 3").index_sum(), 11);
        assert_eq!(ReducedWord::identity().index_sum(), 0);
        assert_eq!(w("0 0 0").index_sum(), 0);
    }

    #[test]
    fn text_format() {
        assert_eq!(w("5' 31 5").to_string(), "5' 31 5");
        assert_eq!(w("").to_string(), "");
        assert!("5''".parse::<ReducedWord>().is_err());
        assert!("x".parse::<ReducedWord>().is_err());
        assert!("-3".parse::<ReducedWord>().is_err());
        // Unreduced text is reduced on parse.
        assert_eq!(w("1 2 2' 3"), w("1 3"));
    }

    #[test]
    fn word_counts() {
        // 2(k+1) choices for the first letter, one fewer for every later one.
        assert_eq!(all_reduced_words(3, 2).len(), 6 * 5 * 5);
        assert_eq!(reduced_words_up_to(2, 0).len(), 1 + 2 + 2);
    }

    #[test]
    fn abelianization_drops_zero() {
        assert_eq!(w("1 2 1'").abelianization(), vec![(2, 1)]);
        assert_eq!(w("3 3 0'").abelianization(), vec![(0, -1), (3, 2)]);
    }
}
