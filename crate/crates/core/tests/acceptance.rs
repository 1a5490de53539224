//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Expected values come from oracles defined in this file.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use couniv::harness::{self, cyclic_chain, random_certificate, run_suite, s5_chain, RunConfig, Sizes, Suite};
use couniv::neighborhoods::{
    bk_check_finite, cert_conjugate, cert_invert, cert_square, cert_verify, hausdorff_support, sym_member_bounded,
    Membership, SearchBounds, SubbasicSpec, SymCertificate,
};
use couniv::pw::{eval_at, random_scenario, run_scenario, ScenarioBounds};
use couniv::quotient::{QuotientMap, Verdict};
use couniv::target_groups::{GroupId, GroupOracle, Perm, SymFinAdapter};
use couniv::words::{reduced_words_up_to, Letter, ReducedWord};
use couniv::{with_group, Error, IndexChain, PhiContext};

const ADAPTERS: [&str; 5] = ["zp2", "zp3", "dyadic", "symfin", "finite-sym:3"];
const SEED: u64 = 20_240_601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

// ---- oracles -------------------------------------------------------------

/// Level on the default chain: trailing one bits of `m`.
fn oracle_nu(m: u64) -> u64 {
    let mut m = m;
    let mut t = 0;
    while m & 1 == 1 {
        t += 1;
        m >>= 1;
    }
    t
}

fn oracle_index_sum(w: &ReducedWord) -> u64 {
    w.letters().iter().map(|l| l.index).sum()
}

/// The defining recursion, unmemoized.
fn oracle_phi_rec(n: u64, idx: &[u64]) -> u64 {
    match idx {
        [] => n,
        [k] => n + k,
        [first, .., last] => {
            let a = oracle_phi_rec(n, &idx[..idx.len() - 1]) + last;
            let b = oracle_phi_rec(n, &idx[1..]) + first;
            a.max(b)
        }
    }
}

/// Independent certificate check: distinct positive slots, closed-form
/// thresholds, and the product spelled out letter by letter.
fn oracle_cert_ok(c: &SymCertificate, w: &ReducedWord) -> bool {
    let mut slots: Vec<u64> = c.factors.iter().map(|f| f.slot).collect();
    slots.sort_unstable();
    if slots.first() == Some(&0) || slots.windows(2).any(|p| p[0] == p[1]) {
        return false;
    }
    let thresholds_ok = c.factors.iter().all(|f| {
        let gh = f.conjugator.multiply(&c.spec.h);
        oracle_nu(f.letter.index) >= c.spec.k * f.slot + oracle_index_sum(&gh)
    });
    let mut raw = Vec::new();
    for f in &c.factors {
        raw.extend(f.conjugator.invert().letters().iter().copied());
        raw.push(f.letter);
        raw.extend(f.conjugator.letters().iter().copied());
    }
    thresholds_ok && ReducedWord::from_letters(raw) == *w
}

fn oracle_support_ok(c: &SymCertificate) -> bool {
    c.factors.iter().all(|f| oracle_nu(f.letter.index) >= c.spec.k)
}

/// `θ` on S_fin by brute force: the least `j` such that every transposition
/// `(a b)` with `j ≤ a < b < bound` conjugates into `V_n` both ways.
fn oracle_theta_symfin(o: &SymFinAdapter, g: &Perm, n: u64, bound: u32) -> u64 {
    (0..=bound as u64)
        .find(|&j| {
            (j as u32..bound).all(|a| {
                (a + 1..bound).all(|b| o.conjugates_into(&Perm::transposition(a, b), g, n))
            })
        })
        .expect("bound exceeds the support")
}

// ---- criteria ------------------------------------------------------------

fn words_grid() -> Vec<ReducedWord> {
    reduced_words_up_to(4, 8)
}

fn criterion_1() -> Outcome {
    let ctx = PhiContext::new(IndexChain::Dyadic);
    let words = words_grid();
    let mismatches: usize = (0..=5u64)
        .map(|n| words.par_iter().filter(|w| ctx.phi(n, w) != n + oracle_index_sum(w)).count())
        .sum();
    // the unmemoized recursion agrees with the closed form on the same grid
    let rec_mismatch = words.par_iter().filter(|w| {
        let idx: Vec<u64> = w.letters().iter().map(|l| l.index).collect();
        oracle_phi_rec(3, &idx) != 3 + oracle_index_sum(w)
    });
    let cases = words.len() * 6;
    match (mismatches, rec_mismatch.count()) {
        (0, 0) => pass(format!("{cases} cases")),
        (m, r) => fail(format!("{m} mismatches, {r} oracle disagreements")),
    }
}

fn criterion_2() -> Outcome {
    let ctx = PhiContext::new(IndexChain::Dyadic);
    let words = words_grid();
    let violations: usize = (0..=5u64)
        .map(|n| {
            words
                .par_iter()
                .filter(|w| {
                    let v = ctx.phi(n, w);
                    v != ctx.phi(n, &w.invert()) || ctx.phi(n + 1, w) < v
                })
                .count()
        })
        .sum();
    if violations == 0 {
        pass(format!("{} cases", words.len() * 6))
    } else {
        fail(format!("{violations} violations"))
    }
}

fn random_word<R: Rng>(rng: &mut R, max_len: usize, max_gen: u64) -> ReducedWord {
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

fn random_spec<R: Rng>(rng: &mut R, ks: &[u64]) -> SubbasicSpec {
    SubbasicSpec { h: random_word(rng, 1, 3), k: ks[rng.gen_range(0..ks.len())] }
}

/// Runs criterion 3 and collects every certificate for criterion 5.
fn criterion_3(all_certs: &mut Vec<SymCertificate>) -> Outcome {
    let ctx = PhiContext::new(IndexChain::Dyadic);
    let bounds = SearchBounds::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut inputs = Vec::new();
    while inputs.len() < 10_000 {
        let spec = random_spec(&mut rng, &[1, 2]);
        let w = if rng.gen_bool(0.5) {
            random_certificate(&ctx, &spec, 2, &mut rng).product()
        } else {
            random_word(&mut rng, 4, 40)
        };
        inputs.push((w, spec));
    }
    let found: Vec<Option<SymCertificate>> = inputs
        .par_iter()
        .map(|(w, spec)| match sym_member_bounded(&ctx, w, spec, bounds).unwrap() {
            Membership::Member(c) => Some(c),
            Membership::Unknown => None,
        })
        .collect();
    let mut failures = 0;
    let mut members = 0;
    for ((w, _), c) in inputs.iter().zip(found) {
        if let Some(c) = c {
            members += 1;
            failures += usize::from(!cert_verify(&ctx, &c, w) || !oracle_cert_ok(&c, w));
            all_certs.push(c);
        }
    }
    let (mut inv_fail, mut sq_fail, mut conj_fail) = (0, 0, 0);
    for _ in 0..1_000 {
        let spec = random_spec(&mut rng, &[1, 2, 3]);
        let c = random_certificate(&ctx, &spec, 3, &mut rng);
        let w = c.product();
        let inv = cert_invert(&c);
        inv_fail += usize::from(!cert_verify(&ctx, &inv, &w.invert()) || !oracle_cert_ok(&inv, &w.invert()));
        all_certs.push(c);
        all_certs.push(inv);
    }
    for _ in 0..1_000 {
        let spec = random_spec(&mut rng, &[2, 4]);
        let c1 = random_certificate(&ctx, &spec, 3, &mut rng);
        let c2 = random_certificate(&ctx, &spec, 3, &mut rng);
        let uv = c1.product().multiply(&c2.product());
        match cert_square(&c1, &c2) {
            Ok(sq) => {
                sq_fail += usize::from(!cert_verify(&ctx, &sq, &uv) || !oracle_cert_ok(&sq, &uv));
                all_certs.push(sq);
            }
            Err(_) => sq_fail += 1,
        }
    }
    for _ in 0..1_000 {
        let spec = random_spec(&mut rng, &[1, 2]);
        let c = random_certificate(&ctx, &spec, 3, &mut rng);
        let target = c.product().conjugate(&spec.h);
        match cert_conjugate(&c, &spec.h) {
            Ok(m) => {
                conj_fail += usize::from(!cert_verify(&ctx, &m, &target) || !oracle_cert_ok(&m, &target));
                all_certs.push(m);
            }
            Err(_) => conj_fail += 1,
        }
    }
    let detail = format!(
        "{members}/10000 fuzzed members verified ({failures} bad); invert {inv_fail}, square {sq_fail}, conjugate {conj_fail} failures of 1000"
    );
    if failures + inv_fail + sq_fail + conj_fail == 0 && members > 0 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut violations = 0;
    let mut products = 0;
    for (g, chain) in [cyclic_chain(), s5_chain()] {
        for k in 0..=2 {
            match bk_check_finite(&g, &chain, k, 4) {
                Ok(r) => {
                    violations += r.violations.len();
                    products += r.products;
                }
                Err(e) => return fail(format!("valid chain refused: {e}")),
            }
        }
    }
    let g = couniv::finite::FiniteGroup::cyclic(8);
    let bad = vec![(0..8).collect(), vec![0, 4], vec![0, 1, 7]];
    let rejected = matches!(bk_check_finite(&g, &bad, 0, 2), Err(Error::HypothesisViolation(_)));
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("{products} products, {violations} violations, bad chain rejected: {rejected}, {secs:.1}s");
    if violations == 0 && rejected && secs < 60.0 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_5(all_certs: &[SymCertificate]) -> Outcome {
    let ctx = PhiContext::new(IndexChain::Dyadic);
    let bad = all_certs.iter().filter(|c| !hausdorff_support(&ctx, c) || !oracle_support_ok(c)).count();
    if bad == 0 && !all_certs.is_empty() {
        pass(format!("{} certificates", all_certs.len()))
    } else {
        fail(format!("{bad} of {} certificates use low letters", all_certs.len()))
    }
}

fn for_each_adapter(mut check: impl FnMut(&str) -> Result<String, String>) -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for id in ADAPTERS {
        match check(id) {
            Ok(d) => details.push(format!("{id}: {d}")),
            Err(d) => {
                ok = false;
                details.push(format!("{id}: FAILED {d}"));
            }
        }
    }
    Outcome { ok, detail: details.join("; ") }
}

fn build_map<O: GroupOracle + Clone>(o: &O) -> QuotientMap<O> {
    QuotientMap::build(o.clone(), IndexChain::Dyadic, 128, 64).expect("quotient map builds")
}

fn criterion_6() -> Outcome {
    for_each_adapter(|id| {
        let any = id.parse::<GroupId>().unwrap().build().unwrap();
        with_group!(&any, o => {
            let q = build_map(o);
            let bad = q.sur_constraint_check(10_000).map_err(|e| e.to_string())?;
            if !bad.is_empty() {
                return Err(format!("m(f(k)) > k at k = {}", bad[0]));
            }
            let mut max_k = 0;
            for n in 0..=4 {
                let jn = q.basis().index(n).unwrap();
                let want = o.basis_len(jn).map_or(50, |l| l.min(50));
                let r = q.openness_check(n, 50).map_err(|e| e.to_string())?;
                // an independent replay: every listed k really maps to its element
                for c in &r.covered {
                    if q.amalgamated_f(c.k).unwrap() != o.basis_enumerate(jn, c.index) || c.k > 0 && oracle_level(c.k) != n {
                        return Err(format!("cover entry {c:?} is wrong"));
                    }
                }
                if r.covered.len() as u64 != want {
                    return Err(format!("n={n}: covered {} of {want}", r.covered.len()));
                }
                max_k = max_k.max(r.max_k);
            }
            Ok(format!("cover index {max_k}"))
        })
    })
}

fn oracle_level(k: u64) -> u64 {
    oracle_nu(k)
}

fn criterion_7() -> Outcome {
    for_each_adapter(|id| {
        let any = id.parse::<GroupId>().unwrap().build().unwrap();
        with_group!(&any, o => {
            let q = build_map(o);
            let mut min_slack = i64::MAX;
            for n in 0..=5u64 {
                for k in 0..=1_000u64 {
                    let r = q.verify_chain_eq1(k, n).map_err(|e| e.to_string())?;
                    if r.phi != n + k || !r.holds {
                        return Err(format!("violation at k={k}, n={n}: {r:?}"));
                    }
                    min_slack = min_slack.min(r.slack_bound_minus_theta);
                }
            }
            Ok(format!("min slack {min_slack}"))
        })
    })
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let o = SymFinAdapter::new();
    let q = build_map(&o);
    if q.basis().indices()[..30] != (0..30).collect::<Vec<u64>>()[..] {
        return fail("refined basis differs from the raw basis");
    }
    for k in 0..=20 {
        q.choice(k).unwrap();
    }
    let words = reduced_words_up_to(3, 20);
    let mut counts = [0usize; 3];
    for n in 0..=4u64 {
        let verdicts: Vec<Verdict> = words.par_iter().map(|w| q.verify_main_lemma(w, n).unwrap().verdict).collect();
        for v in verdicts {
            match v {
                Verdict::Pass => counts[0] += 1,
                Verdict::Inconclusive => counts[1] += 1,
                _ => counts[2] += 1,
            }
        }
    }
    // brute-force θ and closed-form φ on a stride of the same words
    let mut oracle_bad = 0;
    for w in words.iter().step_by(37) {
        let image = q.bar_f(w).unwrap();
        let bound = image.support_bound() + 6;
        for n in 0..=4u64 {
            let theta = oracle_theta_symfin(&o, &image, n, bound);
            let lib = q.verify_main_lemma(w, n).unwrap();
            if theta != lib.theta || theta > n + oracle_index_sum(w) {
                oracle_bad += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!(
        "{} PASS, {} INCONCLUSIVE, {} FAIL over {} words x 5 levels; {oracle_bad} oracle mismatches; {secs:.1}s",
        counts[0],
        counts[1],
        counts[2],
        words.len()
    );
    if counts[1] + counts[2] + oracle_bad == 0 && secs < 120.0 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_9() -> Outcome {
    for_each_adapter(|id| {
        let any = id.parse::<GroupId>().unwrap().build().unwrap();
        with_group!(&any, o => {
            let q = build_map(o);
            let mut total = 0;
            for n in 0..=6u64 {
                let mut rng = harness::stream(SEED, &format!("acceptance continuity {n}"));
                let r = q.continuity_check(n, 500, &mut rng).map_err(|e| e.to_string())?;
                if let Some(w) = r.violations.first() {
                    return Err(format!("n={n}: {w} maps outside V'_{n}"));
                }
                total += r.single + r.products;
            }
            Ok(format!("{total} samples"))
        })
    })
}

fn criterion_10() -> Outcome {
    for_each_adapter(|id| {
        let any = id.parse::<GroupId>().unwrap().build().unwrap();
        with_group!(&any, o => {
            let mut rng = harness::stream(SEED, "acceptance pw");
            let mut nontrivial = 0;
            for i in 0..100 {
                let sc = random_scenario(o, ScenarioBounds::default(), &mut rng).map_err(|e| e.to_string())?;
                let t = run_scenario(o, &sc).map_err(|e| format!("scenario {i}: {e}"))?;
                let b = couniv::pw::eval_word(o, &sc.b_word, &sc.point().coords);
                // the intermediate containment a_i^-1 b a_i in U, recomputed here
                for g in &sc.conjugators {
                    let a = eval_at(o, g, sc.x).unwrap();
                    if !o.basis_member(sc.u, &o.mul(&o.mul(&o.inv(&a), &b), &a)) {
                        return Err(format!("scenario {i}: conjugate of b escapes U"));
                    }
                }
                if !t.all_passed() || !o.basis_member(t.v_index, &b) {
                    return Err(format!("scenario {i}: checks failed"));
                }
                nontrivial += usize::from(!sc.b_word.is_identity());
            }
            Ok(format!("100 scenarios, {nontrivial} with b != e"))
        })
    })
}

fn criterion_11() -> Outcome {
    let cfg = RunConfig {
        group: "symfin".into(),
        suites: Suite::ALL.to_vec(),
        sizes: Sizes::small(),
        seed: SEED,
        ..RunConfig::default()
    };
    let a = run_suite(&cfg).expect("suite runs");
    let b = run_suite(&cfg).expect("suite runs");
    let other = run_suite(&RunConfig { seed: SEED + 1, ..cfg }).expect("suite runs");
    let same = a.canonical_json() == b.canonical_json();
    let detail = format!(
        "{} records, identical: {same}, seed-sensitive: {}",
        a.records.len(),
        a.canonical_json() != other.canonical_json()
    );
    if same && !a.has_fail() {
        pass(detail)
    } else {
        fail(detail)
    }
}

type Criterion = Box<dyn FnOnce(&mut Vec<SymCertificate>) -> Outcome>;

fn main() -> ExitCode {
    let mut certs = Vec::new();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("phi closed form", Box::new(|_| criterion_1())),
        ("phi symmetry and monotonicity", Box::new(|_| criterion_2())),
        ("certificate soundness", Box::new(criterion_3)),
        ("finite slot-product brute force", Box::new(|_| criterion_4())),
        ("certificate letter support", Box::new(|c| criterion_5(c))),
        ("greedy constraint and prefix surjectivity", Box::new(|_| criterion_6())),
        ("scale inequality chain", Box::new(|_| criterion_7())),
        ("main lemma on S_fin", Box::new(|_| criterion_8())),
        ("continuity", Box::new(|_| criterion_9())),
        ("evaluation map openness", Box::new(|_| criterion_10())),
        ("determinism", Box::new(|_| criterion_11())),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run(&mut certs);
        let status = if out.ok { "PASS" } else { "FAIL" };
        failed += usize::from(!out.ok);
        println!(
            "criterion {:>2} {status} {name}: {} ({:.1}s)",
            i + 1,
            out.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
