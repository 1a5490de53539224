//! Bounded verification suites behind `couniv verify`.
//!
//! Every random choice is drawn from a ChaCha stream derived from the run
//! seed and the check name, so reports are reproducible regardless of how
//! checks are scheduled.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Error;
use crate::finite::FiniteGroup;
use crate::neighborhoods::{
    bk_check_finite, cert_conjugate, cert_invert, cert_square, cert_verify, hausdorff_support, sym_member_bounded,
    CertFactor, Membership, SearchBounds, SubbasicSpec, SymCertificate,
};
use crate::pw::{random_scenario, run_scenario, ScenarioBounds};
use crate::quotient::{QuotientMap, Verdict};
use crate::report::{Record, Report};
use crate::scale::{IndexChain, PhiContext};
use crate::target_groups::{GroupId, GroupOracle};
use crate::with_group;
use crate::words::{reduced_words_up_to, Letter, ReducedWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Phi,
    Certs,
    Bk,
    Sur,
    Eq1,
    MainLemma,
    Continuity,
    Openness,
    Pw,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Phi,
        Suite::Certs,
        Suite::Bk,
        Suite::Sur,
        Suite::Eq1,
        Suite::MainLemma,
        Suite::Continuity,
        Suite::Openness,
        Suite::Pw,
    ];

    /// Parses a comma-separated list; `all` selects every suite and the
    /// empty string none.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>, Error> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Phi => "phi",
            Suite::Certs => "certs",
            Suite::Bk => "bk",
            Suite::Sur => "sur",
            Suite::Eq1 => "eq1",
            Suite::MainLemma => "mainlemma",
            Suite::Continuity => "continuity",
            Suite::Openness => "openness",
            Suite::Pw => "pw",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

/// Instance sizes of the suites. The defaults are the acceptance sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sizes {
    pub phi_len: usize,
    pub phi_letters: u64,
    pub phi_n: u64,
    pub cert_fuzz: usize,
    pub cert_transforms: usize,
    pub bk_factors: usize,
    pub sur_k: u64,
    pub cover_n: u64,
    pub cover_prefix: u64,
    pub eq1_k: u64,
    pub eq1_n: u64,
    pub main_len: usize,
    pub main_letters: u64,
    pub main_n: u64,
    pub continuity_n: u64,
    pub continuity_samples: usize,
    pub pw_scenarios: usize,
}

impl Default for Sizes {
    fn default() -> Self {
        Sizes {
            phi_len: 4,
            phi_letters: 8,
            phi_n: 5,
            cert_fuzz: 10_000,
            cert_transforms: 1_000,
            bk_factors: 4,
            sur_k: 10_000,
            cover_n: 4,
            cover_prefix: 50,
            eq1_k: 1_000,
            eq1_n: 5,
            main_len: 3,
            main_letters: 20,
            main_n: 4,
            continuity_n: 6,
            continuity_samples: 500,
            pw_scenarios: 100,
        }
    }
}

impl Sizes {
    /// Roughly a hundredth of the acceptance sizes, for smoke runs.
    pub fn small() -> Self {
        Sizes {
            phi_len: 3,
            phi_letters: 4,
            phi_n: 2,
            cert_fuzz: 100,
            cert_transforms: 50,
            bk_factors: 3,
            sur_k: 500,
            cover_n: 2,
            cover_prefix: 10,
            eq1_k: 100,
            eq1_n: 2,
            main_len: 2,
            main_letters: 8,
            main_n: 2,
            continuity_n: 2,
            continuity_samples: 30,
            pw_scenarios: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub group: String,
    pub chain: IndexChain,
    pub bounds: SearchBounds,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub depth: usize,
    pub n_max: u64,
    pub sizes: Sizes,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: "symfin".into(),
            chain: IndexChain::Dyadic,
            bounds: SearchBounds { max_factors: 3, max_conj_len: 2 },
            suites: Suite::ALL.to_vec(),
            seed: 0,
            depth: 128,
            n_max: 64,
            sizes: Sizes::default(),
        }
    }
}

/// A ChaCha stream determined by the seed and a label.
pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    // FNV-1a keeps stream ids stable across toolchains.
    let id = label
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Runs the selected suites. Records come back in canonical order.
pub fn run_suite(config: &RunConfig) -> Result<Report, Error> {
    if config.bounds.max_factors == 0 {
        return Err(Error::Config("max_factors must be at least 1".into()));
    }
    let group: GroupId = config.group.parse()?;
    let any = group.build()?;
    let records = with_group!(&any, o => run_with(o.clone(), config))?;
    let cfg = serde_json::to_value(config).expect("config serializes");
    Ok(Report::new(cfg, records))
}

fn run_with<O: GroupOracle + Clone>(o: O, config: &RunConfig) -> Result<Vec<Record>, Error> {
    let needs_map = config
        .suites
        .iter()
        .any(|s| matches!(s, Suite::Sur | Suite::Eq1 | Suite::MainLemma | Suite::Continuity | Suite::Openness));
    let q = if needs_map {
        Some(QuotientMap::build(o.clone(), config.chain, config.depth, config.n_max)?)
    } else {
        None
    };
    let mut records = Vec::new();
    for suite in &config.suites {
        let sz = &config.sizes;
        let seed = config.seed;
        let mut recs = match suite {
            Suite::Phi => phi_suite(config.chain, sz),
            Suite::Certs => cert_suite(config.chain, config.bounds, sz, seed)?,
            Suite::Bk => bk_suite(sz)?,
            Suite::Pw => vec![pw_suite(&o, sz, seed)?],
            Suite::Sur => vec![sur_suite(q.as_ref().expect("built"), sz)?],
            Suite::Eq1 => eq1_suite(q.as_ref().expect("built"), sz)?,
            Suite::MainLemma => main_lemma_suite(q.as_ref().expect("built"), sz)?,
            Suite::Continuity => continuity_suite(q.as_ref().expect("built"), sz, seed)?,
            Suite::Openness => openness_suite(q.as_ref().expect("built"), sz)?,
        };
        records.append(&mut recs);
    }
    Ok(records)
}

/// `n + index_sum(w)`, `φ_n(w) = φ_n(w⁻¹)` and monotonicity in `n`.
pub fn phi_suite(chain: IndexChain, sz: &Sizes) -> Vec<Record> {
    let ctx = PhiContext::new(chain);
    let words = reduced_words_up_to(sz.phi_len, sz.phi_letters);
    let mut out = Vec::new();
    for n in 0..=sz.phi_n {
        let inst = format!("n={n}");
        let start = Instant::now();
        let values: Vec<u64> = words.par_iter().map(|w| ctx.phi(n, w)).collect();
        let bad = words.iter().zip(&values).find(|(w, &v)| v != ctx.phi_closed(n, w));
        out.push(
            Record::new("phi_closed_form", "scale function equals n plus the index sum", inst.clone())
                .outcome(bad.map(|(w, &v)| json!({"word": w, "phi": v, "expected": ctx.phi_closed(n, w)})))
                .cases(words.len() as u64)
                .timed(start),
        );
        let start = Instant::now();
        let bad = words.par_iter().zip(&values).find_first(|(w, &v)| ctx.phi(n, &w.invert()) != v);
        out.push(
            Record::new("phi_symmetric", "scale function is invariant under inversion", inst.clone())
                .outcome(bad.map(|(w, _)| json!({"word": w})))
                .cases(words.len() as u64)
                .timed(start),
        );
        let start = Instant::now();
        let bad = words.par_iter().zip(&values).find_first(|(w, &v)| ctx.phi(n + 1, w) < v);
        out.push(
            Record::new("phi_monotone", "scale function is nondecreasing in n", inst)
                .outcome(bad.map(|(w, _)| json!({"word": w})))
                .cases(words.len() as u64)
                .timed(start),
        );
    }
    out
}

fn random_conjugator<R: Rng>(rng: &mut R, max_len: usize, max_gen: u64) -> ReducedWord {
    let len = rng.gen_range(0..=max_len);
    ReducedWord::from_letters((0..len).map(|_| {
        let k = rng.gen_range(0..=max_gen);
        if rng.gen_bool(0.5) {
            Letter::pos(k)
        } else {
            Letter::neg(k)
        }
    }))
}

/// A valid certificate with up to `max_factors` factors in distinct slots
/// `1..=6`, conjugators of length ≤ 2, and letters at exactly the level
/// their thresholds demand.
pub fn random_certificate<R: Rng>(
    ctx: &PhiContext,
    spec: &SubbasicSpec,
    max_factors: usize,
    rng: &mut R,
) -> SymCertificate {
    let mut slots: Vec<u64> = (1..=6).collect();
    let r = rng.gen_range(0..=max_factors.min(slots.len()));
    for i in 0..r {
        let j = rng.gen_range(i..slots.len());
        slots.swap(i, j);
    }
    let factors = slots[..r]
        .iter()
        .map(|&slot| {
            let conjugator = random_conjugator(rng, 2, 4);
            let t = ctx.phi_threshold(spec.slot_level(slot), &conjugator, &spec.h);
            let k = ctx.chain().level_point(t, rng.gen_range(0..4)).expect("level fits in u64");
            let letter = if rng.gen_bool(0.5) { Letter::pos(k) } else { Letter::neg(k) };
            CertFactor { slot, conjugator, letter }
        })
        .collect();
    SymCertificate { factors, spec: spec.clone() }
}

fn random_spec<R: Rng>(rng: &mut R, k_choices: &[u64]) -> SubbasicSpec {
    let k = k_choices[rng.gen_range(0..k_choices.len())];
    SubbasicSpec { h: random_conjugator(rng, 1, 3), k }
}

/// Search soundness on fuzzed inputs, the three certificate transformations,
/// and letter support of every certificate produced.
pub fn cert_suite(chain: IndexChain, bounds: SearchBounds, sz: &Sizes, seed: u64) -> Result<Vec<Record>, Error> {
    let ctx = PhiContext::new(chain);
    let mut out = Vec::new();
    let mut support = SupportTally::default();

    let start = Instant::now();
    let mut rng = stream(seed, "cert_search");
    let inputs: Vec<(ReducedWord, SubbasicSpec)> = (0..sz.cert_fuzz)
        .map(|_| {
            let spec = random_spec(&mut rng, &[1, 2]);
            let w = if rng.gen_bool(0.5) {
                random_certificate(&ctx, &spec, bounds.max_factors.min(2), &mut rng).product()
            } else {
                random_conjugator(&mut rng, 4, 40)
            };
            (w, spec)
        })
        .collect();
    let results = inputs
        .par_iter()
        .map(|(w, spec)| sym_member_bounded(&ctx, w, spec, bounds))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut members = 0u64;
    let mut bad = None;
    for ((w, _), r) in inputs.iter().zip(&results) {
        if let Membership::Member(c) = r {
            members += 1;
            support.add(&ctx, c);
            if bad.is_none() && !cert_verify(&ctx, c, w) {
                bad = Some(json!({"word": w, "certificate": c}));
            }
        }
    }
    out.push(
        Record::new("cert_search_sound", "every certificate found by search verifies", "fuzz")
            .outcome(bad)
            .slack(Some(members as i64))
            .cases(inputs.len() as u64)
            .timed(start),
    );

    type Transform = fn(&PhiContext, &mut ChaCha8Rng, &mut SupportTally) -> Option<serde_json::Value>;
    let transforms: [(&str, &str, Transform); 3] = [
        ("cert_invert", "inverse of a member is certified by the inverted certificate", invert_case),
        ("cert_square", "products of two doubled-dilation members are certified", square_case),
        ("cert_conjugate", "conjugating by the translate yields an untranslated certificate", conjugate_case),
    ];
    for (check, anchor, case) in transforms {
        let start = Instant::now();
        let mut rng = stream(seed, check);
        let mut bad = None;
        for _ in 0..sz.cert_transforms {
            if let Some(w) = case(&ctx, &mut rng, &mut support) {
                bad.get_or_insert(w);
            }
        }
        out.push(
            Record::new(check, anchor, "random")
                .outcome(bad)
                .cases(sz.cert_transforms as u64)
                .timed(start),
        );
    }
    out.push(
        Record::new("hausdorff_support", "certified words use only letters of level at least k", "all")
            .outcome(support.bad)
            .cases(support.seen),
    );
    Ok(out)
}

#[derive(Default)]
struct SupportTally {
    seen: u64,
    bad: Option<serde_json::Value>,
}

impl SupportTally {
    fn add(&mut self, ctx: &PhiContext, c: &SymCertificate) {
        self.seen += 1;
        if self.bad.is_none() && !hausdorff_support(ctx, c) {
            self.bad = Some(json!({ "certificate": c }));
        }
    }
}

fn invert_case(ctx: &PhiContext, rng: &mut ChaCha8Rng, t: &mut SupportTally) -> Option<serde_json::Value> {
    let spec = random_spec(rng, &[1, 2, 3]);
    let c = random_certificate(ctx, &spec, 3, rng);
    let w = c.product();
    let inv = cert_invert(&c);
    t.add(ctx, &c);
    t.add(ctx, &inv);
    (!cert_verify(ctx, &c, &w) || !cert_verify(ctx, &inv, &w.invert())).then(|| json!({"certificate": c}))
}

fn square_case(ctx: &PhiContext, rng: &mut ChaCha8Rng, t: &mut SupportTally) -> Option<serde_json::Value> {
    let spec = random_spec(rng, &[2, 4]);
    let c1 = random_certificate(ctx, &spec, 3, rng);
    let c2 = random_certificate(ctx, &spec, 3, rng);
    let fail = |_| Some(json!({"left": c1, "right": c2}));
    let sq = match cert_square(&c1, &c2) {
        Ok(sq) => sq,
        Err(e) => return fail(e),
    };
    t.add(ctx, &sq);
    (!cert_verify(ctx, &sq, &c1.product().multiply(&c2.product()))).then(|| json!({"left": c1, "right": c2}))
}

fn conjugate_case(ctx: &PhiContext, rng: &mut ChaCha8Rng, t: &mut SupportTally) -> Option<serde_json::Value> {
    let spec = random_spec(rng, &[1, 2]);
    let c = random_certificate(ctx, &spec, 3, rng);
    let moved = match cert_conjugate(&c, &spec.h) {
        Ok(m) => m,
        Err(_) => return Some(json!({"certificate": c})),
    };
    t.add(ctx, &moved);
    (!cert_verify(ctx, &moved, &c.product().conjugate(&spec.h))).then(|| json!({"certificate": c}))
}

/// `V_0 = S_5 ⊇ … ⊇ V_6 = {e}` with `V_n = V_{n+1}² ∪ T_n`, where `T_n`
/// holds the transpositions `(a b)` with `n ≤ a < b`. Symmetric and
/// square-closed by construction, and not a chain of subgroups.
pub fn s5_chain() -> (FiniteGroup, Vec<Vec<usize>>) {
    let g = FiniteGroup::symmetric(5);
    let order = g.order();
    let transposition = |a: usize, b: usize| -> usize {
        let images: Vec<usize> = (0..5).map(|x| if x == a { b } else if x == b { a } else { x }).collect();
        g.find_label(&format!("{images:?}")).expect("transposition is a label")
    };
    let mut chain: Vec<Vec<usize>> = vec![vec![g.identity()]];
    for n in (0..6).rev() {
        let next = chain.last().expect("nonempty");
        let mut set = vec![false; order];
        for &a in next {
            for &b in next {
                set[g.mul(a, b)] = true;
            }
        }
        if n == 0 {
            set.iter_mut().for_each(|s| *s = true);
        }
        for a in n..5 {
            for b in a + 1..5 {
                set[transposition(a, b)] = true;
            }
        }
        chain.push((0..order).filter(|&x| set[x]).collect());
    }
    chain.reverse();
    (g, chain)
}

/// Subgroup chain `2^j ℤ/256`.
pub fn cyclic_chain() -> (FiniteGroup, Vec<Vec<usize>>) {
    let g = FiniteGroup::cyclic(256);
    let chain = (0..=8).map(|j| (0..256).step_by(1 << j).collect()).collect();
    (g, chain)
}

pub fn bk_suite(sz: &Sizes) -> Result<Vec<Record>, Error> {
    let mut out = Vec::new();
    let anchor = "products over distinct slots from k+2 on stay in V_k";
    for (name, (g, chain)) in [("cyclic256", cyclic_chain()), ("s5", s5_chain())] {
        for k in 0..=2 {
            let start = Instant::now();
            let r = bk_check_finite(&g, &chain, k, sz.bk_factors)?;
            out.push(
                Record::new("bk_finite", anchor, format!("{name} k={k}"))
                    .outcome(r.violations.first().cloned())
                    .cases(r.products as u64)
                    .timed(start),
            );
        }
    }
    let start = Instant::now();
    let g = FiniteGroup::cyclic(8);
    let bad_chain = vec![(0..8).collect(), vec![0, 4], vec![0, 1, 7]];
    let rejected = matches!(bk_check_finite(&g, &bad_chain, 0, 2), Err(Error::HypothesisViolation(_)));
    out.push(
        Record::new("bk_rejects_bad_chain", "chains without the square property are refused", "cyclic8")
            .outcome((!rejected).then_some("accepted"))
            .cases(1)
            .timed(start),
    );
    Ok(out)
}

/// `m(f(k)) ≤ k` for every `k` up to the bound.
pub fn sur_suite<O: GroupOracle>(q: &QuotientMap<O>, sz: &Sizes) -> Result<Record, Error> {
    let start = Instant::now();
    let bad = q.sur_constraint_check(sz.sur_k)?;
    Ok(Record::new("sur_constraint", "greedy choices respect m(f(k)) <= k", group_instance(q, format!("k<={}", sz.sur_k)))
        .outcome(bad.first().map(|k| json!({ "k": k })))
        .cases(sz.sur_k + 1)
        .timed(start))
}

fn group_instance<O: GroupOracle>(q: &QuotientMap<O>, rest: String) -> String {
    format!("{} {}", q.oracle().name(), rest)
}

/// The inequality chain `φ_n(k) = n + k ≥ n + m(f(k)) ≥ θ_{f(k)}(n)`.
pub fn eq1_suite<O: GroupOracle>(q: &QuotientMap<O>, sz: &Sizes) -> Result<Vec<Record>, Error> {
    for k in 0..=sz.eq1_k {
        q.choice(k)?;
    }
    (0..=sz.eq1_n)
        .into_par_iter()
        .map(|n| {
            let start = Instant::now();
            let reports = (0..=sz.eq1_k).map(|k| q.verify_chain_eq1(k, n)).collect::<Result<Vec<_>, Error>>()?;
            let slack = reports.iter().map(|r| r.slack_bound_minus_theta.min(r.slack_k_minus_m)).min();
            let bad = reports.iter().find(|r| !r.holds);
            let inexact = reports.iter().any(|r| !r.theta_exact);
            let mut rec = Record::new("scale_chain", "phi_n(k) >= n + m(f(k)) >= theta_f(k)(n)", group_instance(q, format!("n={n}")))
                .outcome(bad)
                .slack(slack)
                .cases(reports.len() as u64)
                .timed(start);
            if inexact && rec.verdict == Verdict::Pass {
                rec.witness = Some(json!("theta is an upper bound for some k"));
            }
            Ok(rec)
        })
        .collect()
}

/// `θ_{f̄(w)}(n) ≤ φ_n(w)` over every word of the given length and alphabet.
pub fn main_lemma_suite<O: GroupOracle>(q: &QuotientMap<O>, sz: &Sizes) -> Result<Vec<Record>, Error> {
    for k in 0..=sz.main_letters {
        q.choice(k)?;
    }
    let words = reduced_words_up_to(sz.main_len, sz.main_letters);
    let mut out = Vec::new();
    for n in 0..=sz.main_n {
        let start = Instant::now();
        let reports = words
            .par_iter()
            .map(|w| q.verify_main_lemma(w, n).map(|r| (w, r)))
            .collect::<Result<Vec<_>, Error>>()?;
        let fail = reports.iter().find(|(_, r)| r.verdict == Verdict::Fail);
        let inconclusive = reports.iter().filter(|(_, r)| r.verdict == Verdict::Inconclusive).count();
        let slack = reports.iter().map(|(_, r)| r.phi as i64 - r.theta as i64).min();
        let mut rec = Record::new("main_lemma", "theta of the image at n is at most phi_n", group_instance(q, format!("n={n}")))
            .slack(slack)
            .cases(words.len() as u64);
        rec = match fail {
            Some((w, r)) => rec.verdict(Verdict::Fail).witness(json!({"word": w, "report": r})),
            None if inconclusive > 0 => rec.verdict(Verdict::Inconclusive).witness(json!({ "inconclusive": inconclusive })),
            None => rec,
        };
        out.push(rec.timed(start));
    }
    Ok(out)
}

pub fn continuity_suite<O: GroupOracle>(q: &QuotientMap<O>, sz: &Sizes, seed: u64) -> Result<Vec<Record>, Error> {
    (0..=sz.continuity_n)
        .map(|n| {
            let start = Instant::now();
            let mut rng = stream(seed, &format!("continuity {n}"));
            let r = q.continuity_check(n, sz.continuity_samples, &mut rng)?;
            Ok(Record::new("continuity", "the image of V_Phi_n and of its slot products lies in V'_n", group_instance(q, format!("n={n}")))
                .outcome(r.violations.first().map(|w| json!({ "word": w })))
                .cases((r.single + r.products) as u64)
                .timed(start))
        })
        .collect()
}

/// Every one of the first elements of `V′_n` is hit on the fiber `ν⁻¹(n)`.
pub fn openness_suite<O: GroupOracle>(q: &QuotientMap<O>, sz: &Sizes) -> Result<Vec<Record>, Error> {
    (0..=sz.cover_n)
        .map(|n| {
            let start = Instant::now();
            let r = q.openness_check(n, sz.cover_prefix)?;
            let expected = q
                .oracle()
                .basis_len(q.basis().index(n)?)
                .map_or(sz.cover_prefix, |l| l.min(sz.cover_prefix));
            let mut rec = Record::new("surjective_prefix", "the fiber of level n covers the first elements of V'_n", group_instance(q, format!("n={n}")))
                .cases(expected)
                .timed(start);
            if r.covered.len() as u64 == expected {
                rec = rec.witness(json!({ "max_k": r.max_k }));
            } else {
                rec = rec.verdict(Verdict::Fail).witness(json!({ "covered": r.covered.len(), "expected": expected }));
            }
            Ok(rec)
        })
        .collect()
}

pub fn pw_suite<O: GroupOracle>(o: &O, sz: &Sizes, seed: u64) -> Result<Record, Error> {
    let start = Instant::now();
    let mut rng = stream(seed, "pw");
    let mut nontrivial = 0u64;
    let mut bad = None;
    for i in 0..sz.pw_scenarios {
        let sc = random_scenario(o, ScenarioBounds::default(), &mut rng)?;
        nontrivial += u64::from(!sc.b_word.is_identity());
        if let Err(e) = run_scenario(o, &sc) {
            bad.get_or_insert(json!({ "scenario": i, "error": e.to_string() }));
        }
    }
    let rec = Record::new("openness_witness", "b in V at x lifts to a map in every g W_U g^-1", format!("{} scenarios", o.name()))
        .cases(sz.pw_scenarios as u64)
        .timed(start);
    Ok(match bad {
        Some(b) => rec.verdict(Verdict::Fail).witness(b),
        None => rec.witness(json!({ "nontrivial_b": nontrivial })),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_lists_parse() {
        assert_eq!(Suite::parse_list("").unwrap(), vec![]);
        assert_eq!(Suite::parse_list("eq1,phi").unwrap(), vec![Suite::Phi, Suite::Eq1]);
        assert_eq!(Suite::parse_list("all").unwrap().len(), 9);
        assert!(Suite::parse_list("nope").is_err());
    }

    #[test]
    fn s5_chain_satisfies_hypotheses() {
        let (g, chain) = s5_chain();
        assert_eq!(chain.len(), 7);
        assert_eq!(chain[0].len(), 120);
        assert_eq!(chain[6], vec![g.identity()]);
        // some level is not a subgroup
        let not_closed = chain.iter().any(|v| v.iter().any(|&a| v.iter().any(|&b| !v.contains(&g.mul(a, b)))));
        assert!(not_closed);
        assert!(bk_check_finite(&g, &chain, 0, 2).is_ok());
    }

    #[test]
    fn empty_suite_gives_empty_report() {
        let cfg = RunConfig { suites: vec![], ..RunConfig::default() };
        let r = run_suite(&cfg).unwrap();
        assert!(r.records.is_empty());
        assert!(!r.has_fail());
    }

    #[test]
    fn small_run_is_deterministic_and_passes() {
        let cfg = RunConfig { group: "zp2".into(), sizes: Sizes::small(), seed: 11, ..RunConfig::default() };
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert!(!a.has_fail(), "{}", a.to_json());
    }
}
