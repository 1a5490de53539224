//! The index chain `U_n ⊆ ℕ` and the recursive scale functions `φ_n`.
//!
//! The chain is stored through its level function `ν`: `m ∈ U_n` iff
//! `ν(m) ≥ n`. Every fiber `ν⁻¹(n)` is infinite and `ν` is finite everywhere,
//! so `U_0 = ℕ`, the chain is decreasing with empty intersection, and each
//! difference `U_n ∖ U_{n+1}` is infinite.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::words::{Letter, ReducedWord};

/// Level function of a decreasing chain of subsets of ℕ.
///
/// `Adic(b)` uses `ν(m) = v_b(m + 1)`, the `b`-adic valuation of `m + 1`.
/// `Dyadic` is `Adic(2)` with a bit-twiddling fast path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum IndexChain {
    #[default]
    Dyadic,
    Adic(u64),
}

impl IndexChain {
    pub fn adic(base: u64) -> Result<Self, Error> {
        match base {
            0 | 1 => Err(Error::Config(format!("chain base must be at least 2, got {base}"))),
            2 => Ok(IndexChain::Dyadic),
            b => Ok(IndexChain::Adic(b)),
        }
    }

    pub fn base(self) -> u64 {
        match self {
            IndexChain::Dyadic => 2,
            IndexChain::Adic(b) => b,
        }
    }

    /// `ν(m)`.
    pub fn level(self, m: u64) -> u64 {
        match self {
            IndexChain::Dyadic => u64::from(m.trailing_ones()),
            IndexChain::Adic(b) => {
                let b = u128::from(b);
                let mut x = u128::from(m) + 1;
                let mut v = 0;
                while x % b == 0 {
                    x /= b;
                    v += 1;
                }
                v
            }
        }
    }

    /// `m ∈ U_n`.
    pub fn contains(self, n: u64, m: u64) -> bool {
        self.level(m) >= n
    }

    fn power(self, n: u64) -> Option<u64> {
        let n = u32::try_from(n).ok()?;
        self.base().checked_pow(n)
    }

    /// The `t`-th element (from 0, increasing) of the fiber `ν⁻¹(n)`,
    /// or `None` if it does not fit in a `u64`.
    pub fn fiber_point(self, n: u64, t: u64) -> Option<u64> {
        let b = self.base();
        // t-th positive integer not divisible by b.
        let q = t.checked_add(t / (b - 1))?.checked_add(1)?;
        self.power(n)?.checked_mul(q)?.checked_sub(1)
    }

    /// Position of `m` inside its own fiber, inverse to [`Self::fiber_point`].
    pub fn fiber_position(self, m: u64) -> u64 {
        let b = u128::from(self.base());
        let mut q = u128::from(m) + 1;
        while q % b == 0 {
            q /= b;
        }
        let below = q - 1;
        (below - below / b) as u64
    }

    /// The `t`-th element (from 0, increasing) of `U_n`.
    pub fn level_point(self, n: u64, t: u64) -> Option<u64> {
        self.power(n)?.checked_mul(t.checked_add(1)?)?.checked_sub(1)
    }

    /// Checks the chain axioms on a finite window: for every `n ≤ max_level`
    /// the fiber has at least `per_fiber` members below `bound`, and the
    /// enumeration helpers agree with `ν`.
    pub fn check_fibers(self, max_level: u64, per_fiber: u64, bound: u64) -> Result<(), Error> {
        let mut counts = vec![0u64; max_level as usize + 1];
        for m in 0..bound {
            let v = self.level(m);
            if v <= max_level {
                let pos = counts[v as usize];
                if self.fiber_point(v, pos) != Some(m) || self.fiber_position(m) != pos {
                    return Err(Error::HypothesisViolation(format!(
                        "fiber enumeration disagrees with level at m={m}"
                    )));
                }
                counts[v as usize] += 1;
            }
        }
        match counts.iter().position(|&c| c < per_fiber) {
            Some(n) => Err(Error::HypothesisViolation(format!(
                "fiber {n} has only {} members below {bound}",
                counts[n]
            ))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for IndexChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexChain::Dyadic => f.write_str("dyadic"),
            IndexChain::Adic(b) => write!(f, "adic:{b}"),
        }
    }
}

impl FromStr for IndexChain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dyadic" => Ok(IndexChain::Dyadic),
            _ => match s.strip_prefix("adic:") {
                Some(b) => IndexChain::adic(
                    b.parse()
                        .map_err(|_| Error::Config(format!("bad chain base {b:?}")))?,
                ),
                None => Err(Error::Config(format!("unknown chain {s:?} (dyadic | adic:<b>)"))),
            },
        }
    }
}

impl Serialize for IndexChain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IndexChain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

const DEFAULT_MEMO_CAPACITY: usize = 1 << 16;

/// Evaluates `φ_n` and `Φ_n(g) = U_{φ_n(g)}` for one chain.
///
/// The memo is shared and guarded by a mutex; a caller that finds it busy
/// computes without it, so results never depend on scheduling.
pub struct PhiContext {
    chain: IndexChain,
    memo: Mutex<HashMap<(u64, ReducedWord), u64>>,
    capacity: usize,
}

impl fmt::Debug for PhiContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiContext").field("chain", &self.chain).finish_non_exhaustive()
    }
}

impl Clone for PhiContext {
    fn clone(&self) -> Self {
        PhiContext::with_capacity(self.chain, self.capacity)
    }
}

impl PhiContext {
    pub fn new(chain: IndexChain) -> Self {
        Self::with_capacity(chain, DEFAULT_MEMO_CAPACITY)
    }

    /// A context whose shared memo holds at most `capacity` entries
    /// (it is cleared when full). `0` disables it.
    pub fn with_capacity(chain: IndexChain, capacity: usize) -> Self {
        PhiContext { chain, memo: Mutex::new(HashMap::new()), capacity }
    }

    pub fn chain(&self) -> IndexChain {
        self.chain
    }

    pub fn nu(&self, m: u64) -> u64 {
        self.chain.level(m)
    }

    /// `φ_n(w)` by the max-of-two-branches recursion on reduced length,
    /// with `φ_n(e) = n` and `φ_n(k^{±1}) = n + k`.
    pub fn phi(&self, n: u64, w: &ReducedWord) -> u64 {
        if w.len() <= 1 || self.capacity == 0 {
            return phi_recursive(n, w.letters());
        }
        let key = (n, w.clone());
        if let Ok(memo) = self.memo.try_lock() {
            if let Some(&v) = memo.get(&key) {
                return v;
            }
        }
        let v = phi_recursive(n, w.letters());
        if let Ok(mut memo) = self.memo.try_lock() {
            if memo.len() >= self.capacity {
                memo.clear();
            }
            memo.insert(key, v);
        }
        v
    }

    /// The conjectured closed form `n + index_sum(w)`; kept only as an
    /// independent cross-check of [`Self::phi`].
    pub fn phi_closed(&self, n: u64, w: &ReducedWord) -> u64 {
        n.saturating_add(w.index_sum())
    }

    /// `φ_n(g·h)`: the `U`-index of the right translate `Φ_n^h(g) = Φ_n(gh)`.
    pub fn phi_threshold(&self, n: u64, g: &ReducedWord, h: &ReducedWord) -> u64 {
        self.phi(n, &g.multiply(h))
    }

    /// Whether generator `k` lies in `Φ_n^h(g)`.
    pub fn in_phi_set(&self, n: u64, g: &ReducedWord, h: &ReducedWord, k: u64) -> bool {
        self.nu(k) >= self.phi_threshold(n, g, h)
    }

    /// The recursion tree behind `φ_n(w)`, for display.
    pub fn explain(&self, n: u64, w: &ReducedWord) -> PhiTrace {
        trace(n, w.letters())
    }
}

/// Memoized over the `O(len²)` contiguous subwords, which are the only
/// arguments the recursion ever reaches for a fixed `n`.
fn phi_recursive(n: u64, w: &[Letter]) -> u64 {
    fn go(n: u64, w: &[Letter], i: usize, j: usize, memo: &mut HashMap<(usize, usize), u64>) -> u64 {
        match j - i {
            0 => n,
            1 => n.saturating_add(w[i].index),
            _ => {
                if let Some(&v) = memo.get(&(i, j)) {
                    return v;
                }
                // φ_{φ_n(prefix)}(last) and φ_{φ_n(suffix)}(first).
                let left = go(n, w, i, j - 1, memo).saturating_add(w[j - 1].index);
                let right = go(n, w, i + 1, j, memo).saturating_add(w[i].index);
                let v = left.max(right);
                memo.insert((i, j), v);
                v
            }
        }
    }
    go(n, w, 0, w.len(), &mut HashMap::new())
}

/// One node of the `φ` recursion: the subword, its value, and the two
/// branches (`prefix` then last letter, `suffix` then first letter).
#[derive(Clone, Debug, Serialize)]
pub struct PhiTrace {
    pub n: u64,
    pub word: ReducedWord,
    pub value: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<PhiTrace>,
}

fn trace(n: u64, w: &[Letter]) -> PhiTrace {
    let word = ReducedWord::from_letters(w.iter().copied());
    if w.len() <= 1 {
        return PhiTrace { n, value: phi_recursive(n, w), word, branches: Vec::new() };
    }
    let prefix = trace(n, &w[..w.len() - 1]);
    let suffix = trace(n, &w[1..]);
    let value = (prefix.value.saturating_add(w[w.len() - 1].index))
        .max(suffix.value.saturating_add(w[0].index));
    PhiTrace { n, word, value, branches: vec![prefix, suffix] }
}

impl PhiTrace {
    /// Indented rendering, truncated after `max_lines` lines.
    pub fn render(&self, max_lines: usize) -> String {
        fn walk(t: &PhiTrace, depth: usize, out: &mut Vec<String>, max: usize) {
            if out.len() >= max {
                return;
            }
            let word = if t.word.is_identity() { "e".to_string() } else { t.word.to_string() };
            out.push(format!("{}phi_{}([{}]) = {}", "  ".repeat(depth), t.n, word, t.value));
            for b in &t.branches {
                walk(b, depth + 1, out, max);
            }
        }
        let mut lines = Vec::new();
        walk(self, 0, &mut lines, max_lines);
        lines.join("\n")
    }
}
