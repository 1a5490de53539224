use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cert::{CertFactor, SymCertificate};
use super::SubbasicSpec;
use crate::error::Error;
use crate::scale::PhiContext;
use crate::words::{reduced_words_up_to, Letter, ReducedWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_factors: usize,
    pub max_conj_len: usize,
}

impl SearchBounds {
    pub fn new(max_factors: usize, max_conj_len: usize) -> Result<Self, Error> {
        if max_factors == 0 {
            return Err(Error::InvalidBounds("max_factors must be at least 1".into()));
        }
        Ok(SearchBounds { max_factors, max_conj_len })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "certificate", rename_all = "lowercase")]
pub enum Membership {
    Member(SymCertificate),
    /// Nothing found within the bounds. Not a proof of non-membership.
    Unknown,
}

impl Membership {
    pub fn certificate(&self) -> Option<&SymCertificate> {
        match self {
            Membership::Member(c) => Some(c),
            Membership::Unknown => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    value: ReducedWord,
    conjugator: ReducedWord,
    letter: Letter,
    /// Largest slot whose threshold the factor meets.
    max_slot: u64,
}

/// Bounded search for a certificate of `w ∈ ⟨V_{Φ^h_{k·n}}⟩`.
///
/// Iterative deepening on the factor count, then on conjugator length; the
/// first certificate in lexicographic candidate order is returned, so the
/// result does not depend on how rayon schedules the top-level branches.
///
/// Conjugators and letters are drawn from the generators of `w` and `h`
/// only. This loses nothing: killing every other generator maps a
/// certificate to one with no more factors, no longer conjugators, and
/// thresholds `φ(g·h) = n + index_sum(g·h)` that can only drop.
pub fn sym_member_bounded(
    ctx: &PhiContext,
    w: &ReducedWord,
    spec: &SubbasicSpec,
    bounds: SearchBounds,
) -> Result<Membership, Error> {
    if bounds.max_factors == 0 {
        return Err(Error::InvalidBounds("max_factors must be at least 1".into()));
    }
    if spec.k == 0 {
        return Err(Error::InvalidBounds("dilation k must be at least 1".into()));
    }
    if w.is_identity() {
        return Ok(Membership::Member(SymCertificate::empty(spec.clone())));
    }
    let mut alphabet = w.alphabet();
    alphabet.extend(spec.h.alphabet());
    alphabet.sort_unstable();
    alphabet.dedup();

    let raw = raw_candidates(ctx, spec, &alphabet, bounds.max_conj_len);
    let excess: i64 = w.abelianization().iter().map(|&(_, e)| e.abs()).sum();

    for r in 1..=bounds.max_factors {
        if !parity_ok(excess, r) {
            continue;
        }
        for len in 0..=bounds.max_conj_len {
            let cands = dedup_candidates(&raw, len);
            let step = 2 * len + 1;
            let found = cands.par_iter().enumerate().find_map_first(|(_, first)| {
                let mut chosen = vec![first];
                let rem = first.value.invert().multiply(w);
                if !prune_ok(&rem, r - 1, step) || !slots_feasible(&chosen) {
                    return None;
                }
                dfs(&cands, &rem, r - 1, step, &mut chosen)
            });
            if let Some(factors) = found {
                let cert = assign_slots(&factors, spec);
                debug_assert!(super::cert_verify(ctx, &cert, w));
                return Ok(Membership::Member(cert));
            }
        }
    }
    Ok(Membership::Unknown)
}

fn dfs<'a>(
    cands: &'a [Candidate],
    rem: &ReducedWord,
    left: usize,
    step: usize,
    chosen: &mut Vec<&'a Candidate>,
) -> Option<Vec<Candidate>> {
    if left == 0 {
        return rem.is_identity().then(|| chosen.iter().map(|&c| c.clone()).collect());
    }
    for c in cands {
        let next = c.value.invert().multiply(rem);
        if !prune_ok(&next, left - 1, step) {
            continue;
        }
        chosen.push(c);
        if slots_feasible(chosen) {
            if let Some(found) = dfs(cands, &next, left - 1, step, chosen) {
                return Some(found);
            }
        }
        chosen.pop();
    }
    None
}

/// Each factor changes one generator's exponent sum by ±1.
fn parity_ok(excess: i64, factors: usize) -> bool {
    let f = factors as i64;
    excess <= f && (f - excess) % 2 == 0
}

fn prune_ok(rem: &ReducedWord, left: usize, step: usize) -> bool {
    if rem.len() > left * step {
        return false;
    }
    let excess: i64 = rem.abelianization().iter().map(|&(_, e)| e.abs()).sum();
    parity_ok(excess, left)
}

/// Distinct slots exist iff the `j`-th smallest `max_slot` is at least `j`.
fn slots_feasible(chosen: &[&Candidate]) -> bool {
    let mut s: Vec<u64> = chosen.iter().map(|c| c.max_slot).collect();
    s.sort_unstable();
    s.iter().enumerate().all(|(j, &v)| v > j as u64)
}

/// Gives each factor the deepest slot still free, largest `max_slot` first.
fn assign_slots(factors: &[Candidate], spec: &SubbasicSpec) -> SymCertificate {
    let mut order: Vec<usize> = (0..factors.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(factors[i].max_slot), i));
    let mut slots = vec![0u64; factors.len()];
    let mut prev = u64::MAX;
    for i in order {
        let s = factors[i].max_slot.min(prev - 1);
        slots[i] = s;
        prev = s;
    }
    SymCertificate {
        factors: factors
            .iter()
            .zip(slots)
            .map(|(c, slot)| CertFactor { slot, conjugator: c.conjugator.clone(), letter: c.letter })
            .collect(),
        spec: spec.clone(),
    }
}

fn max_slot(ctx: &PhiContext, spec: &SubbasicSpec, g: &ReducedWord, k: u64) -> u64 {
    let nu = ctx.nu(k);
    // φ_{k·n} ≥ k·n, so no slot beyond ν/k can work.
    let cap = nu / spec.k;
    let gh = g.multiply(&spec.h);
    let mut best = 0;
    for n in 1..=cap {
        if nu >= ctx.phi(spec.slot_level(n), &gh) {
            best = n;
        } else {
            break;
        }
    }
    best
}

fn raw_candidates(
    ctx: &PhiContext,
    spec: &SubbasicSpec,
    alphabet: &[u64],
    max_len: usize,
) -> Vec<Candidate> {
    let mut out = Vec::new();
    let max_gen = alphabet.last().copied().unwrap_or(0);
    let in_alphabet = |w: &ReducedWord| w.letters().iter().all(|l| alphabet.binary_search(&l.index).is_ok());
    // Enumerate over 0..=max_gen and filter; alphabets are tiny in practice
    // but their indices need not be contiguous.
    let conjugators: Vec<ReducedWord> = if alphabet.len() as u64 == max_gen + 1 {
        reduced_words_up_to(max_len, max_gen)
    } else {
        words_over(alphabet, max_len)
    };
    for g in conjugators.into_iter().filter(in_alphabet) {
        for &k in alphabet {
            let slot = max_slot(ctx, spec, &g, k);
            if slot == 0 {
                continue;
            }
            for letter in [Letter::pos(k), Letter::neg(k)] {
                out.push(Candidate {
                    value: ReducedWord::letter(letter).conjugate(&g),
                    conjugator: g.clone(),
                    letter,
                    max_slot: slot,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.conjugator.len(), &a.conjugator, a.letter).cmp(&(b.conjugator.len(), &b.conjugator, b.letter))
    });
    out
}

/// Reduced words of length ≤ `max_len` over an arbitrary alphabet.
fn words_over(alphabet: &[u64], max_len: usize) -> Vec<ReducedWord> {
    let letters: Vec<Letter> = alphabet.iter().flat_map(|&k| [Letter::pos(k), Letter::neg(k)]).collect();
    let mut layer = vec![ReducedWord::identity()];
    let mut all = layer.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.letters().last().is_some_and(|t| t.cancels(l)) {
                    continue;
                }
                next.push(w.multiply(&ReducedWord::letter(l)));
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Candidates with conjugator length ≤ `len`, one per factor value, keeping
/// the largest `max_slot` (first in order on ties).
fn dedup_candidates(raw: &[Candidate], len: usize) -> Vec<Candidate> {
    let mut best: HashMap<&ReducedWord, usize> = HashMap::new();
    let eligible: Vec<&Candidate> = raw.iter().filter(|c| c.conjugator.len() <= len).collect();
    for (i, c) in eligible.iter().enumerate() {
        match best.get(&c.value) {
            Some(&j) if eligible[j].max_slot >= c.max_slot => {}
            _ => {
                best.insert(&c.value, i);
            }
        }
    }
    let mut keep: Vec<usize> = best.into_values().collect();
    keep.sort_unstable();
    keep.into_iter().map(|i| eligible[i].clone()).collect()
}
