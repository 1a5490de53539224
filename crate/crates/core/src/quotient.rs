//! The quotient homomorphism from the free group onto an oracle group.
//!
//! Pipeline: refine the oracle's basis so every enumerated element has a
//! scale `θ_g(n) ≤ n + m(g)`; on each fiber `ν⁻¹(n)` of the index chain run
//! the greedy surjection onto `V′_n` subject to `m(f(k)) ≤ k`; amalgamate the
//! fibers into `f : ℕ → G` and extend it to words. The `verify_*` and
//! `*_check` functions replay the continuity and openness arguments on
//! bounded instances.

use std::collections::HashMap;
use std::sync::RwLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scale::{IndexChain, PhiContext};
use crate::target_groups::GroupOracle;
use crate::words::{Letter, ReducedWord};

/// Indices `j_0 = 0 < j_1 < …` into the oracle basis; `V′_n = V_{j_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinedBasis {
    indices: Vec<u64>,
}

impl RefinedBasis {
    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn depth(&self) -> usize {
        self.indices.len() - 1
    }

    /// `j_n`.
    pub fn index(&self, n: u64) -> Result<u64, Error> {
        self.indices
            .get(n as usize)
            .copied()
            .ok_or(Error::DepthExceeded { depth: self.depth(), needed: n })
    }

    /// Least `m` with `j_m ≥ raw`.
    fn first_at_least(&self, raw: u64) -> Result<u64, Error> {
        let pos = self.indices.partition_point(|&j| j < raw);
        if pos == self.indices.len() {
            Err(Error::DepthExceeded { depth: self.depth(), needed: raw })
        } else {
            Ok(pos as u64)
        }
    }

    /// Checks the defining inequalities against the oracle's bounds.
    pub fn validate<O: GroupOracle>(&self, o: &O) -> Result<(), Error> {
        if self.indices.first() != Some(&0) {
            return Err(Error::OracleUnsound("refined basis must start at index 0".into()));
        }
        for n in 0..self.depth() {
            let (jn, jn1) = (self.indices[n], self.indices[n + 1]);
            if jn1 <= jn {
                return Err(Error::OracleUnsound(format!("indices not increasing at {n}")));
            }
            if o.sq_bound(jn) > jn1 {
                return Err(Error::OracleUnsound(format!("V'_{}^2 not inside V'_{n}", n + 1)));
            }
            for m in 1..=n as u64 {
                if o.conj_bound(&o.enumerate(m), jn) > jn1 {
                    return Err(Error::OracleUnsound(format!("g_{m} conjugation fails at level {n}")));
                }
            }
        }
        Ok(())
    }
}

/// Builds `j_{n+1} = max(sq_bound(j_n), max_{m≤n} conj_bound(g_m, j_n), j_n + 1)`
/// and spot-checks the result by sampling.
pub fn build_refined_basis<O: GroupOracle>(o: &O, depth: usize) -> Result<RefinedBasis, Error> {
    if depth == 0 {
        return Err(Error::InvalidBounds("depth must be at least 1".into()));
    }
    let mut indices = vec![0u64];
    let gs: Vec<O::Elem> = (1..=depth as u64).map(|m| o.enumerate(m)).collect();
    for n in 0..depth {
        let jn = indices[n];
        let conj = gs[..n].iter().map(|g| o.conj_bound(g, jn)).max().unwrap_or(0);
        indices.push(o.sq_bound(jn).max(conj).max(jn + 1));
    }
    let basis = RefinedBasis { indices };
    // Post-hoc sampling of the guarantees the bounds claim.
    for n in 0..depth.min(8) {
        let (jn, jn1) = (basis.indices[n], basis.indices[n + 1]);
        let count = o.basis_len(jn1).map_or(20, |l| l.min(20));
        let vs: Vec<O::Elem> = (0..count).map(|i| o.basis_enumerate(jn1, i)).collect();
        for (m, g) in gs[..n].iter().enumerate() {
            if let Some(v) = vs.iter().find(|v| !o.conjugates_into(v, g, jn)) {
                return Err(Error::OracleUnsound(format!(
                    "g_{} conjugates {} out of V_{jn}",
                    m + 1,
                    o.format(v)
                )));
            }
        }
        for a in &vs {
            for b in &vs {
                if !o.basis_member(jn, &o.mul(a, b)) {
                    return Err(Error::OracleUnsound(format!("V_{jn1}^2 escapes V_{jn}")));
                }
            }
        }
    }
    Ok(basis)
}

/// `θ′_g(n)` against the refined basis, with whether it is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Theta {
    pub value: u64,
    pub exact: bool,
}

/// Refined-basis scale of one element over `n ≤ n_max` and the resulting
/// offset `m(g) = max(0, max_n θ′_g(n) − n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaleOffsets {
    pub theta_upper: Vec<u64>,
    pub exact: bool,
    pub m: u64,
}

/// `θ′_g(n)`: the least refined index whose raw index reaches the raw
/// scale at `j_n`. Exact when the oracle provides `theta_exact`, otherwise
/// an upper bound from `conj_bound`.
pub fn refined_theta<O: GroupOracle>(basis: &RefinedBasis, o: &O, g: &O::Elem, n: u64) -> Result<Theta, Error> {
    if *g == o.identity() {
        return Ok(Theta { value: n, exact: true });
    }
    let jn = basis.index(n)?;
    let (raw, exact) = match o.theta_exact(g, jn) {
        Some(t) => (t, true),
        None => (o.conj_bound(g, jn), false),
    };
    Ok(Theta { value: basis.first_at_least(raw)?, exact })
}

pub fn scale_offsets<O: GroupOracle>(
    basis: &RefinedBasis,
    o: &O,
    g: &O::Elem,
    n_max: u64,
) -> Result<ScaleOffsets, Error> {
    let mut theta_upper = Vec::with_capacity(n_max as usize + 1);
    let mut exact = true;
    let mut m = 0;
    for n in 0..=n_max {
        let t = refined_theta(basis, o, g, n)?;
        exact &= t.exact;
        m = m.max(t.value.saturating_sub(n));
        theta_upper.push(t.value);
    }
    Ok(ScaleOffsets { theta_upper, exact, m })
}

/// State of the greedy surjection: the smallest index not yet chosen.
///
/// At domain point `k` the candidate is that index; it is taken when its
/// offset is at most `k`, otherwise index 0 (the identity) is repeated.
/// Everything below `next` has been chosen, so this single counter is the
/// whole "not yet chosen" state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Greedy {
    next: u64,
    len: Option<u64>,
}

impl Greedy {
    pub fn new(len: Option<u64>) -> Self {
        Greedy { next: 0, len }
    }

    pub fn next_candidate(&self) -> u64 {
        self.next
    }

    pub fn choose<E>(&mut self, k: u64, m_of: impl FnOnce(u64) -> Result<u64, E>) -> Result<u64, E> {
        if self.len.is_some_and(|l| self.next >= l) {
            return Ok(0);
        }
        if m_of(self.next)? <= k {
            self.next += 1;
            Ok(self.next - 1)
        } else {
            Ok(0)
        }
    }
}

/// `f(k)` of the greedy surjection over the domain `ℕ` itself.
pub fn greedy_surjection(m_values: impl Fn(u64) -> u64, k: u64) -> u64 {
    let mut g = Greedy::new(None);
    let mut out = 0;
    for x in 0..=k {
        out = g.choose::<std::convert::Infallible>(x, |i| Ok(m_values(i))).unwrap();
    }
    out
}

#[derive(Clone, Debug, Default)]
struct FiberState {
    greedy: Greedy,
    /// Index into `V′_n` chosen at each fiber position.
    choices: Vec<u64>,
    /// `m` of `V′_n[i]` for every candidate looked at so far.
    offsets: Vec<u64>,
}

/// One recorded greedy step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Choice {
    pub k: u64,
    pub index: u64,
    pub m: u64,
    pub element: String,
}

const DEFAULT_N_MAX: u64 = 64;

/// The surjection `f : ℕ → G` and its extension `f̄` to the free group.
///
/// Fibers are extended lazily behind a lock; every query result is a pure
/// function of the construction parameters.
pub struct QuotientMap<O: GroupOracle> {
    oracle: O,
    chain: IndexChain,
    basis: RefinedBasis,
    n_max: u64,
    phi: PhiContext,
    fibers: RwLock<HashMap<u64, FiberState>>,
}

impl<O: GroupOracle> QuotientMap<O> {
    /// Refines the basis to `depth` and prepares the per-fiber greedy
    /// states. Offsets `m(g)` are computed over `n ≤ n_max`, which must stay
    /// below `depth`.
    pub fn build(oracle: O, chain: IndexChain, depth: usize, n_max: u64) -> Result<Self, Error> {
        if n_max as usize >= depth {
            return Err(Error::InvalidBounds(format!("n_max {n_max} must be below depth {depth}")));
        }
        let basis = build_refined_basis(&oracle, depth)?;
        Ok(QuotientMap {
            oracle,
            chain,
            basis,
            n_max,
            phi: PhiContext::new(chain),
            fibers: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_defaults(oracle: O, chain: IndexChain) -> Result<Self, Error> {
        Self::build(oracle, chain, 2 * DEFAULT_N_MAX as usize, DEFAULT_N_MAX)
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn chain(&self) -> IndexChain {
        self.chain
    }

    pub fn basis(&self) -> &RefinedBasis {
        &self.basis
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn phi_context(&self) -> &PhiContext {
        &self.phi
    }

    /// Membership in `V′_n`.
    pub fn refined_member(&self, n: u64, g: &O::Elem) -> Result<bool, Error> {
        Ok(self.oracle.basis_member(self.basis.index(n)?, g))
    }

    /// `V′_n[i]`.
    pub fn refined_element(&self, n: u64, i: u64) -> Result<O::Elem, Error> {
        Ok(self.oracle.basis_enumerate(self.basis.index(n)?, i))
    }

    pub fn theta(&self, g: &O::Elem, n: u64) -> Result<Theta, Error> {
        refined_theta(&self.basis, &self.oracle, g, n)
    }

    pub fn offsets(&self, g: &O::Elem) -> Result<ScaleOffsets, Error> {
        scale_offsets(&self.basis, &self.oracle, g, self.n_max)
    }

    /// `m(g)`.
    pub fn m_of(&self, g: &O::Elem) -> Result<u64, Error> {
        Ok(self.offsets(g)?.m)
    }

    /// Runs fiber `n` until `done` holds, then reads from it.
    fn with_fiber<R>(
        &self,
        n: u64,
        done: impl Fn(&FiberState) -> bool,
        read: impl FnOnce(&FiberState) -> R,
    ) -> Result<R, Error> {
        if let Some(st) = self.fibers.read().expect("fiber lock").get(&n) {
            if done(st) {
                return Ok(read(st));
            }
        }
        let jn = self.basis.index(n)?;
        let mut guard = self.fibers.write().expect("fiber lock");
        let st = guard
            .entry(n)
            .or_insert_with(|| FiberState { greedy: Greedy::new(self.oracle.basis_len(jn)), ..Default::default() });
        while !done(st) {
            let t = st.choices.len() as u64;
            let k = self
                .chain
                .fiber_point(n, t)
                .ok_or_else(|| Error::InvalidBounds(format!("fiber {n} position {t} overflows u64")))?;
            let offsets = &mut st.offsets;
            let idx = st.greedy.choose(k, |i| -> Result<u64, Error> {
                if let Some(&m) = offsets.get(i as usize) {
                    return Ok(m);
                }
                let m = self.m_of(&self.oracle.basis_enumerate(jn, i))?;
                offsets.push(m);
                Ok(m)
            })?;
            st.choices.push(idx);
        }
        Ok(read(st))
    }

    /// Index into `V′_{ν(k)}` of `f(k)`, and its offset `m`.
    pub fn choice(&self, k: u64) -> Result<(u64, u64), Error> {
        let n = self.chain.level(k);
        let t = self.chain.fiber_position(k) as usize;
        self.with_fiber(n, |st| st.choices.len() > t, |st| {
            let idx = st.choices[t];
            (idx, st.offsets[idx as usize])
        })
    }

    /// `f(k) ∈ V′_{ν(k)}`.
    pub fn amalgamated_f(&self, k: u64) -> Result<O::Elem, Error> {
        let (idx, _) = self.choice(k)?;
        self.refined_element(self.chain.level(k), idx)
    }

    /// `f̄(w)`, the product of `f(k)^{±1}` over the letters.
    pub fn bar_f(&self, w: &ReducedWord) -> Result<O::Elem, Error> {
        let o = &self.oracle;
        w.letters().iter().try_fold(o.identity(), |acc, l| {
            let x = self.amalgamated_f(l.index)?;
            let x = if l.inverse { o.inv(&x) } else { x };
            Ok(o.mul(&acc, &x))
        })
    }

    /// The greedy log of fiber `n` for its first `positions` points.
    pub fn choice_log(&self, n: u64, positions: usize) -> Result<Vec<Choice>, Error> {
        let raw = self.with_fiber(n, |st| st.choices.len() >= positions, |st| {
            st.choices[..positions]
                .iter()
                .map(|&i| (i, st.offsets[i as usize]))
                .collect::<Vec<_>>()
        })?;
        raw.into_iter()
            .enumerate()
            .map(|(t, (index, m))| {
                let k = self.chain.fiber_point(n, t as u64).expect("already computed");
                Ok(Choice { k, index, m, element: self.oracle.format(&self.refined_element(n, index)?) })
            })
            .collect()
    }

    pub fn verify_chain_eq1(&self, k: u64, n: u64) -> Result<Eq1Report, Error> {
        let fk = self.amalgamated_f(k)?;
        let (_, m) = self.choice(k)?;
        let theta = self.theta(&fk, n)?;
        let phi = self.phi.phi(n, &ReducedWord::letter(Letter::pos(k)));
        let holds = phi == n + k && m <= k && theta.value <= n + m;
        Ok(Eq1Report {
            k,
            n,
            phi,
            m,
            theta: theta.value,
            theta_exact: theta.exact,
            slack_k_minus_m: k as i64 - m as i64,
            slack_bound_minus_theta: (n + m) as i64 - theta.value as i64,
            holds,
        })
    }

    /// `θ′_{f̄(w)}(n) ≤ φ_n(w)`.
    pub fn verify_main_lemma(&self, w: &ReducedWord, n: u64) -> Result<MainLemmaReport, Error> {
        let image = self.bar_f(w)?;
        let theta = self.theta(&image, n)?;
        let phi = self.phi.phi(n, w);
        let verdict = if theta.value <= phi {
            Verdict::Pass
        } else if theta.exact {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        };
        Ok(MainLemmaReport { n, theta: theta.value, theta_exact: theta.exact, phi, verdict })
    }

    /// Samples elements of `V_{Φ_n}` and products over distinct slots
    /// `≥ n + 2`, and checks that `f̄` maps each into `V′_n`.
    pub fn continuity_check<R: Rng>(&self, n: u64, samples: usize, rng: &mut R) -> Result<ContinuityReport, Error> {
        let mut report = ContinuityReport { n, single: 0, products: 0, violations: Vec::new() };
        for _ in 0..samples {
            let w = self.sample_vphi(n, rng)?;
            report.single += 1;
            if !self.refined_member(n, &self.bar_f(&w)?)? {
                report.violations.push(w);
            }
        }
        for _ in 0..samples {
            let count = rng.gen_range(1..=3usize);
            let mut slots: Vec<u64> = (n + 2..n + 8).collect();
            for i in 0..count {
                let j = rng.gen_range(i..slots.len());
                slots.swap(i, j);
            }
            let mut w = ReducedWord::identity();
            for &s in &slots[..count] {
                w = w.multiply(&self.sample_vphi(s, rng)?);
            }
            report.products += 1;
            if !self.refined_member(n, &self.bar_f(&w)?)? {
                report.violations.push(w);
            }
        }
        Ok(report)
    }

    /// A random `g⁻¹ k^{±1} g` with `ν(k) ≥ φ_n(g)`.
    pub fn sample_vphi<R: Rng>(&self, n: u64, rng: &mut R) -> Result<ReducedWord, Error> {
        let len = rng.gen_range(0..=3usize);
        let g = ReducedWord::from_letters((0..len).map(|_| {
            let k = rng.gen_range(0..=4u64);
            if rng.gen_bool(0.5) {
                Letter::pos(k)
            } else {
                Letter::neg(k)
            }
        }));
        let t = self.phi.phi(n, &g);
        let k = self
            .chain
            .level_point(t, rng.gen_range(0..16))
            .ok_or_else(|| Error::InvalidBounds(format!("level {t} overflows u64")))?;
        let l = if rng.gen_bool(0.5) { Letter::pos(k) } else { Letter::neg(k) };
        Ok(ReducedWord::letter(l).conjugate(&g))
    }

    /// For each of the first `prefix` elements of `V′_n`, the first `k` in
    /// the fiber `ν⁻¹(n)` with `f(k)` equal to it.
    pub fn openness_check(&self, n: u64, prefix: u64) -> Result<OpennessReport, Error> {
        let jn = self.basis.index(n)?;
        let want = self.oracle.basis_len(jn).map_or(prefix, |l| l.min(prefix));
        let choices = self.with_fiber(n, |st| st.greedy.next_candidate() >= want, |st| st.choices.clone())?;
        let mut covered = Vec::with_capacity(want as usize);
        for i in 0..want {
            let t = choices.iter().position(|&c| c == i).expect("greedy passed index");
            let k = self.chain.fiber_point(n, t as u64).expect("already computed");
            covered.push(Cover { index: i, element: self.oracle.format(&self.refined_element(n, i)?), k });
        }
        let max_k = covered.iter().map(|c| c.k).max().unwrap_or(0);
        Ok(OpennessReport { n, requested: prefix, covered, max_k })
    }

    /// Checks `m(f(k)) ≤ k` for every `k ≤ k_max`; returns the violators.
    pub fn sur_constraint_check(&self, k_max: u64) -> Result<Vec<u64>, Error> {
        let mut bad = Vec::new();
        for k in 0..=k_max {
            let (_, m) = self.choice(k)?;
            if m > k {
                bad.push(k);
            }
        }
        Ok(bad)
    }

    /// `group` is the adapter id the map can be rebuilt from.
    pub fn snapshot(&self, group: &str, fibers: u64, positions: usize) -> Result<QuotientSnapshot, Error> {
        let logs = (0..fibers)
            .map(|n| Ok((n, self.choice_log(n, positions)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(QuotientSnapshot {
            schema: 1,
            group: group.to_string(),
            chain: self.chain,
            depth: self.basis.depth(),
            n_max: self.n_max,
            indices: self.basis.indices.clone(),
            fibers: logs.into_iter().map(|(n, choices)| FiberLog { n, choices }).collect(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eq1Report {
    pub k: u64,
    pub n: u64,
    pub phi: u64,
    pub m: u64,
    pub theta: u64,
    pub theta_exact: bool,
    pub slack_k_minus_m: i64,
    pub slack_bound_minus_theta: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainLemmaReport {
    pub n: u64,
    pub theta: u64,
    pub theta_exact: bool,
    pub phi: u64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityReport {
    pub n: u64,
    pub single: usize,
    pub products: usize,
    pub violations: Vec<ReducedWord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub index: u64,
    pub element: String,
    pub k: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpennessReport {
    pub n: u64,
    pub requested: u64,
    pub covered: Vec<Cover>,
    pub max_k: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberLog {
    pub n: u64,
    pub choices: Vec<Choice>,
}

/// The `quotient build` output file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSnapshot {
    pub schema: u32,
    pub group: String,
    pub chain: IndexChain,
    pub depth: usize,
    pub n_max: u64,
    pub indices: Vec<u64>,
    pub fibers: Vec<FiberLog>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::FiniteGroup;
    use crate::target_groups::{DyadicAdapter, FiniteAdapter, Perm, SymFinAdapter, ZpAdapter};
    use num_bigint::BigInt;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn refined_basis_examples() {
        let zp = ZpAdapter::new(2).unwrap();
        assert_eq!(build_refined_basis(&zp, 4).unwrap().indices(), &[0, 1, 2, 3, 4]);
        let dy = DyadicAdapter;
        assert_eq!(build_refined_basis(&dy, 3).unwrap().indices(), &[0, 1, 2, 3]);
        let sf = SymFinAdapter::new();
        let b = build_refined_basis(&sf, 10).unwrap();
        b.validate(&sf).unwrap();
        assert_eq!(b.indices(), &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
        assert!(build_refined_basis(&zp, 0).is_err());
    }

    /// ℤ with `V_n = 2ⁿℤ` but a deliberately loose `sq_bound(n) = 2n + 1`,
    /// so refinement has to skip raw indices.
    struct Loose(ZpAdapter);

    impl GroupOracle for Loose {
        type Elem = BigInt;
        fn name(&self) -> String {
            "loose".into()
        }
        fn identity(&self) -> BigInt {
            self.0.identity()
        }
        fn enumerate(&self, m: u64) -> BigInt {
            self.0.enumerate(m)
        }
        fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
            self.0.mul(a, b)
        }
        fn inv(&self, a: &BigInt) -> BigInt {
            self.0.inv(a)
        }
        fn basis_member(&self, n: u64, g: &BigInt) -> bool {
            self.0.basis_member(n, g)
        }
        fn basis_enumerate(&self, n: u64, i: u64) -> BigInt {
            self.0.basis_enumerate(n, i)
        }
        fn conj_bound(&self, _g: &BigInt, n: u64) -> u64 {
            n
        }
        fn sq_bound(&self, n: u64) -> u64 {
            2 * n + 1
        }
    }

    #[test]
    fn loose_bounds_force_sparser_refinement() {
        let o = Loose(ZpAdapter::new(2).unwrap());
        let b = build_refined_basis(&o, 4).unwrap();
        assert_eq!(b.indices(), &[0, 1, 3, 7, 15]);
        b.validate(&o).unwrap();
        // bound-only scales: θ′ from conj_bound, exact = false
        let t = refined_theta(&b, &o, &BigInt::from(3), 2).unwrap();
        assert_eq!(t, Theta { value: 2, exact: false });
    }

    #[test]
    fn greedy_examples() {
        for k in 0..20 {
            assert_eq!(greedy_surjection(|_| 0, k), k);
        }
        let m = |i: u64| [0, 3, 1, 0].get(i as usize).copied().unwrap_or(0);
        let f: Vec<u64> = (0..5).map(|k| greedy_surjection(m, k)).collect();
        assert_eq!(f, vec![0, 0, 0, 1, 2]);
    }

    #[test]
    fn scale_offset_examples() {
        let sf = SymFinAdapter::new();
        let b = build_refined_basis(&sf, 20).unwrap();
        assert_eq!(scale_offsets(&b, &sf, &Perm::identity(), 10).unwrap().m, 0);
        let s = scale_offsets(&b, &sf, &Perm::transposition(0, 4), 10).unwrap();
        assert_eq!(s.m, 4);
        assert_eq!(s.theta_upper[1], 5);
        assert!(s.exact);
        let zp = ZpAdapter::new(3).unwrap();
        let bz = build_refined_basis(&zp, 20).unwrap();
        assert_eq!(scale_offsets(&bz, &zp, &BigInt::from(17), 10).unwrap().m, 0);
    }

    #[test]
    fn amalgamated_examples_zp2() {
        let q = QuotientMap::build(ZpAdapter::new(2).unwrap(), IndexChain::Dyadic, 40, 20).unwrap();
        assert_eq!(q.amalgamated_f(0).unwrap(), BigInt::from(0));
        assert_eq!(q.amalgamated_f(2).unwrap(), BigInt::from(1));
        assert_eq!(q.amalgamated_f(7).unwrap(), BigInt::from(0));
        assert_eq!(q.bar_f(&ReducedWord::identity()).unwrap(), BigInt::from(0));
        assert_eq!(q.bar_f(&w("0 2")).unwrap(), BigInt::from(1));
        assert_eq!(q.bar_f(&w("2 2'")).unwrap(), BigInt::from(0));
        // the fiber of level 3 is 7, 23, 39, …: second point picks 8
        assert_eq!(q.amalgamated_f(23).unwrap(), BigInt::from(8));
    }

    #[test]
    fn eq1_examples() {
        let q = QuotientMap::build(ZpAdapter::new(2).unwrap(), IndexChain::Dyadic, 40, 20).unwrap();
        let r = q.verify_chain_eq1(10, 3).unwrap();
        assert!(r.holds);
        assert_eq!(r.slack_k_minus_m, 10);
        assert_eq!(r.m, 0);
        let r0 = q.verify_chain_eq1(0, 4).unwrap();
        assert!(r0.holds);
        assert_eq!(r0.m, 0);
    }

    #[test]
    fn main_lemma_identity_passes() {
        let q = QuotientMap::build(SymFinAdapter::new(), IndexChain::Dyadic, 80, 40).unwrap();
        for n in 0..5 {
            let r = q.verify_main_lemma(&ReducedWord::identity(), n).unwrap();
            assert_eq!(r.verdict, Verdict::Pass);
            assert_eq!((r.theta, r.phi), (n, n));
        }
    }

    #[test]
    fn finite_adapter_pipeline() {
        let q = QuotientMap::build(FiniteAdapter::new(FiniteGroup::symmetric(3)), IndexChain::Dyadic, 20, 10).unwrap();
        let rep = q.openness_check(0, 50).unwrap();
        assert_eq!(rep.covered.len(), 6);
        let rep1 = q.openness_check(1, 50).unwrap();
        assert_eq!(rep1.covered.len(), 1);
        assert!(q.sur_constraint_check(300).unwrap().is_empty());
    }

    #[test]
    fn homomorphism_on_samples() {
        let q = QuotientMap::build(SymFinAdapter::new(), IndexChain::Dyadic, 80, 40).unwrap();
        let o = q.oracle();
        let words = crate::words::reduced_words_up_to(2, 5);
        for a in words.iter().step_by(7) {
            for b in words.iter().step_by(11) {
                let lhs = q.bar_f(&a.multiply(b)).unwrap();
                let rhs = o.mul(&q.bar_f(a).unwrap(), &q.bar_f(b).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn n_max_must_stay_below_depth() {
        assert!(QuotientMap::build(SymFinAdapter::new(), IndexChain::Dyadic, 10, 10).is_err());
    }
}
