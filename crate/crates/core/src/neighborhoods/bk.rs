use std::collections::HashMap;

use serde::Serialize;

use crate::error::Error;
use crate::finite::FiniteGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BkViolation {
    pub element: usize,
    /// `(slot, factor)` pairs in product order.
    pub factors: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BkReport {
    pub k: usize,
    pub slots: Vec<usize>,
    /// Slot subsets examined.
    pub subsets: usize,
    /// Distinct (subset, product) pairs examined.
    pub products: usize,
    pub violations: Vec<BkViolation>,
}

/// Exhaustive check that every product of at most `max_factors` factors from
/// pairwise distinct sets `V_n`, `n ≥ k + 2`, lies in `V_k`.
///
/// `chain[n]` is `V_n`; slots run over the listed indices only. The chain
/// must contain the identity in every set, be symmetric, and satisfy
/// `V_{n+1}² ⊆ V_n`; otherwise `HypothesisViolation` is returned.
///
/// Products are built per subset of slots: the products over `S` in every
/// order are `⋃_{i∈S} P(S∖{i}) · V_i`, so each subset is visited once.
pub fn bk_check_finite(
    group: &FiniteGroup,
    chain: &[Vec<usize>],
    k: usize,
    max_factors: usize,
) -> Result<BkReport, Error> {
    let order = group.order();
    let sets: Vec<Vec<bool>> = chain
        .iter()
        .map(|v| {
            let mut s = vec![false; order];
            for &x in v {
                if x < order {
                    s[x] = true;
                }
            }
            s
        })
        .collect();
    for (n, v) in chain.iter().enumerate() {
        if let Some(&x) = v.iter().find(|&&x| x >= order) {
            return Err(Error::HypothesisViolation(format!("V_{n} contains unknown element {x}")));
        }
        if !sets[n][group.identity()] {
            return Err(Error::HypothesisViolation(format!("V_{n} misses the identity")));
        }
        if let Some(&x) = v.iter().find(|&&x| !sets[n][group.inv(x)]) {
            return Err(Error::HypothesisViolation(format!("V_{n} is not symmetric at {x}")));
        }
    }
    for n in 0..chain.len().saturating_sub(1) {
        for &a in &chain[n + 1] {
            for &b in &chain[n + 1] {
                if !sets[n][group.mul(a, b)] {
                    return Err(Error::HypothesisViolation(format!(
                        "V_{}^2 is not inside V_{n}: {a}*{b}",
                        n + 1
                    )));
                }
            }
        }
    }
    if k >= chain.len() {
        return Err(Error::InvalidBounds(format!("k={k} beyond chain of length {}", chain.len())));
    }
    scan_products(group, chain, &sets, k, k + 2, max_factors)
}

/// Per element: `(last slot, previous product, last factor)`, `None` for the empty product.
type Trail = HashMap<usize, Option<(usize, usize, usize)>>;

fn scan_products(
    group: &FiniteGroup,
    chain: &[Vec<usize>],
    sets: &[Vec<bool>],
    k: usize,
    first_slot: usize,
    max_factors: usize,
) -> Result<BkReport, Error> {
    let slots: Vec<usize> = (first_slot..chain.len()).collect();
    if slots.len() > 20 {
        return Err(Error::InvalidBounds("more than 20 slots".into()));
    }
    let subsets = 1usize << slots.len();
    let mut products: Vec<Trail> = vec![HashMap::new(); subsets];
    products[0].insert(group.identity(), None);
    let mut report = BkReport { k, slots: slots.clone(), subsets: 0, products: 0, violations: Vec::new() };

    let mut masks: Vec<usize> = (1..subsets).filter(|m| m.count_ones() as usize <= max_factors).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let mut here: Trail = HashMap::new();
        for (bit, &slot) in slots.iter().enumerate() {
            if mask & (1 << bit) == 0 {
                continue;
            }
            let prev = &products[mask ^ (1 << bit)];
            let mut prev_elems: Vec<&usize> = prev.keys().collect();
            prev_elems.sort_unstable();
            for &p in prev_elems {
                for &v in &chain[slot] {
                    here.entry(group.mul(p, v)).or_insert(Some((slot, p, v)));
                }
            }
        }
        report.subsets += 1;
        report.products += here.len();
        let mut bad: Vec<usize> = here.keys().copied().filter(|&x| !sets[k][x]).collect();
        bad.sort_unstable();
        for x in bad {
            report.violations.push(BkViolation { element: x, factors: unwind(&products, &here, mask, x, &slots) });
        }
        products[mask] = here;
    }
    Ok(report)
}

fn unwind(
    products: &[Trail],
    here: &Trail,
    mut mask: usize,
    mut x: usize,
    slots: &[usize],
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut table = here;
    while let Some(Some((slot, prev, v))) = table.get(&x) {
        out.push((*slot, *v));
        let bit = slots.iter().position(|s| s == slot).expect("slot in list");
        mask ^= 1 << bit;
        x = *prev;
        table = &products[mask];
    }
    out.reverse();
    out
}
