use std::fmt;
use std::sync::OnceLock;

use super::GroupOracle;
use crate::finite::permutations;

/// A permutation of ℕ with finite support, stored as the image of
/// `0..len` with trailing fixed points trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity() -> Self {
        Perm(Vec::new())
    }

    /// From an image vector; panics if it is not a permutation of `0..len`.
    pub fn from_images(images: Vec<u32>) -> Self {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            assert!((x as usize) < images.len() && !seen[x as usize], "not a permutation: {images:?}");
            seen[x as usize] = true;
        }
        let mut p = Perm(images);
        p.trim();
        p
    }

    pub fn transposition(a: u32, b: u32) -> Self {
        let n = a.max(b) as usize + 1;
        let mut img: Vec<u32> = (0..n as u32).collect();
        img.swap(a as usize, b as usize);
        Perm::from_images(img)
    }

    fn trim(&mut self) {
        while let Some(&last) = self.0.last() {
            if last as usize + 1 == self.0.len() {
                self.0.pop();
            } else {
                break;
            }
        }
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.0.get(x as usize).copied().unwrap_or(x)
    }

    /// One past the largest moved point; 0 for the identity.
    pub fn support_bound(&self) -> u32 {
        self.0.len() as u32
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        let n = self.0.len().max(other.0.len());
        let mut p = Perm((0..n as u32).map(|x| self.apply(other.apply(x))).collect());
        p.trim();
        p
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    /// Conjugates by the shift `x ↦ x + n`, giving a permutation that fixes
    /// `0..n`.
    pub fn shift(&self, n: u32) -> Perm {
        if self.0.is_empty() {
            return Perm::identity();
        }
        Perm((0..n).chain(self.0.iter().map(|&x| x + n)).collect())
    }

    pub fn fixes_below(&self, n: u64) -> bool {
        self.0.iter().enumerate().take(n as usize).all(|(i, &x)| i as u32 == x)
    }

    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32);
                x = self.0[x] as usize;
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("e");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

const MAX_BLOCK: usize = 10;

/// Finitary permutations of ℕ with `V_n` the pointwise stabilizer of
/// `{0, …, n−1}`.
///
/// The enumeration lists blocks `N = 1, 2, …`, block `N` holding the
/// permutations of `0..N` that move `N − 1`, ordered by number of moved
/// points and then by the image vector read from the top point down. So
/// `g_1 = e`, `g_2 = (0 1)`, `g_3 = (0 2)`. Blocks are built on first use;
/// indices beyond `10!` are not supported.
#[derive(Debug, Default)]
pub struct SymFinAdapter {
    blocks: [OnceLock<Vec<Perm>>; MAX_BLOCK + 1],
}

impl Clone for SymFinAdapter {
    fn clone(&self) -> Self {
        SymFinAdapter::new()
    }
}

impl SymFinAdapter {
    pub fn new() -> Self {
        Self::default()
    }

    fn block(&self, n: usize) -> &[Perm] {
        self.blocks[n].get_or_init(|| {
            if n == 1 {
                return vec![Perm::identity()];
            }
            let mut ps: Vec<Perm> = permutations(n)
                .into_iter()
                .filter(|p| p[n - 1] != n - 1)
                .map(|p| Perm::from_images(p.into_iter().map(|x| x as u32).collect()))
                .collect();
            ps.sort_by_cached_key(|p| {
                let moved = (0..n as u32).filter(|&x| p.apply(x) != x).count();
                let top_down: Vec<u32> = (0..n as u32).rev().map(|x| p.apply(x)).collect();
                (moved, top_down)
            });
            ps
        })
    }

    /// The conjugation bound `max_{i<n}(g(i), g⁻¹(i)) + 1`, which is exact.
    fn conj_exact(g: &Perm, n: u64) -> u64 {
        let ginv = g.inverse();
        let limit = n.min(u64::from(u32::MAX)) as u32;
        let moved_max = (0..limit.min(g.support_bound()))
            .map(|i| g.apply(i).max(ginv.apply(i)) as u64 + 1)
            .max()
            .unwrap_or(0);
        // points i ≥ support_bound are fixed by g: they contribute i + 1 ≤ n
        moved_max.max(n)
    }
}

impl GroupOracle for SymFinAdapter {
    type Elem = Perm;

    fn name(&self) -> String {
        "symfin".into()
    }

    fn identity(&self) -> Perm {
        Perm::identity()
    }

    fn enumerate(&self, m: u64) -> Perm {
        let mut idx = m.saturating_sub(1) as usize;
        for n in 1..=MAX_BLOCK {
            let b = self.block(n);
            if idx < b.len() {
                return b[idx].clone();
            }
            idx -= b.len();
        }
        panic!("symfin enumeration index {m} beyond supported range");
    }

    fn mul(&self, a: &Perm, b: &Perm) -> Perm {
        a.compose(b)
    }

    fn inv(&self, a: &Perm) -> Perm {
        a.inverse()
    }

    fn basis_member(&self, n: u64, g: &Perm) -> bool {
        g.fixes_below(n)
    }

    fn basis_enumerate(&self, n: u64, i: u64) -> Perm {
        self.enumerate(i + 1).shift(n as u32)
    }

    fn conj_bound(&self, g: &Perm, n: u64) -> u64 {
        Self::conj_exact(g, n)
    }

    fn sq_bound(&self, n: u64) -> u64 {
        n
    }

    fn theta_exact(&self, g: &Perm, n: u64) -> Option<u64> {
        Some(Self::conj_exact(g, n))
    }

    fn format(&self, g: &Perm) -> String {
        g.to_string()
    }
}
