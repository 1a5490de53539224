//! Neighborhoods of the identity in the free-group topology.
//!
//! For a map `Φ` from words to subsets of ℕ the set
//! `V_Φ = ⋃_g g⁻¹(Φ(g) ∪ Φ(g)⁻¹)g` consists of conjugated single letters.
//! A subbasic neighborhood is the symmetric product `⟨V_{Φ^h_{k·n}}⟩_{n≥1}`,
//! the set of all finite products of factors taken from pairwise distinct
//! slots `n`, in any order. Membership is witnessed by a [`SymCertificate`]
//! that can be rechecked without the search that produced it.

mod bk;
mod cert;
mod search;

pub use bk::{bk_check_finite, BkReport, BkViolation};
pub use cert::{cert_conjugate, cert_invert, cert_square, cert_verify, hausdorff_support, CertFactor, SymCertificate};
pub use search::{sym_member_bounded, Membership, SearchBounds};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scale::PhiContext;
use crate::words::{Letter, ReducedWord};

/// Designates the subbasic set `⟨V_{Φ^h_{k·n}}⟩_{n≥1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubbasicSpec {
    pub h: ReducedWord,
    pub k: u64,
}

impl SubbasicSpec {
    pub fn new(h: ReducedWord, k: u64) -> Result<Self, Error> {
        if k == 0 {
            return Err(Error::InvalidBounds("dilation k must be at least 1".into()));
        }
        Ok(SubbasicSpec { h, k })
    }

    pub fn plain(k: u64) -> Self {
        SubbasicSpec { h: ReducedWord::identity(), k: k.max(1) }
    }

    /// The `φ` index used by slot `n`.
    pub fn slot_level(&self, slot: u64) -> u64 {
        self.k.saturating_mul(slot)
    }
}

/// A conjugator `g` and letter with `w = g⁻¹ · letter · g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPhiWitness {
    pub conjugator: ReducedWord,
    pub letter: Letter,
    /// `φ_n(g·h)`, which `ν(letter)` must reach.
    pub threshold: u64,
}

/// Decides `w ∈ V_{Φ_n^h}` exactly.
///
/// `w` must be a conjugate `g₀⁻¹ k^ε g₀` of one letter; the conjugators that
/// also work are exactly `k^m g₀`. The threshold `φ_n(k^m g₀ h)` only drops
/// while the `k^m` prefix cancels against `g₀h`, which needs
/// `|m| ≤ len(g₀h)`; the scanned window is one wider than that. Within the
/// window the smallest threshold wins, ties going to the `m` closest to 0
/// (`0, 1, -1, 2, -2, …`).
pub fn vphi_member(
    ctx: &PhiContext,
    w: &ReducedWord,
    n: u64,
    h: &ReducedWord,
) -> Result<Option<VPhiWitness>, Error> {
    if w.is_identity() {
        return Err(Error::IdentityInVPhi);
    }
    let (core, wing) = w.cyclic_reduce();
    if core.len() != 1 {
        return Ok(None);
    }
    let letter = core.letters()[0];
    let best = best_conjugator(ctx, letter.index, &wing, n, h);
    if ctx.nu(letter.index) >= best.1 {
        Ok(Some(VPhiWitness { conjugator: best.0, letter, threshold: best.1 }))
    } else {
        Ok(None)
    }
}

/// The conjugator `k^m g₀` minimizing `φ_n(k^m g₀ h)` over the window, and
/// that minimum.
pub(crate) fn best_conjugator(
    ctx: &PhiContext,
    k: u64,
    g0: &ReducedWord,
    n: u64,
    h: &ReducedWord,
) -> (ReducedWord, u64) {
    let window = g0.multiply(h).len() as i64 + 1;
    let mut best: Option<(ReducedWord, u64)> = None;
    let order = std::iter::once(0).chain((1..=window).flat_map(|m| [m, -m]));
    for m in order {
        let power = letter_power(k, m);
        let g = power.multiply(g0);
        let t = ctx.phi_threshold(n, &g, h);
        if best.as_ref().is_none_or(|(_, bt)| t < *bt) {
            best = Some((g, t));
        }
    }
    best.expect("window is never empty")
}

fn letter_power(k: u64, m: i64) -> ReducedWord {
    let l = if m >= 0 { Letter::pos(k) } else { Letter::neg(k) };
    ReducedWord::from_letters(std::iter::repeat_n(l, m.unsigned_abs() as usize))
}
