use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::SubbasicSpec;
use crate::error::Error;
use crate::scale::PhiContext;
use crate::words::{Letter, ReducedWord};

/// One factor `g⁻¹ · letter · g` placed in `slot`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CertFactor {
    pub slot: u64,
    pub conjugator: ReducedWord,
    pub letter: Letter,
}

impl CertFactor {
    pub fn value(&self) -> ReducedWord {
        ReducedWord::letter(self.letter).conjugate(&self.conjugator)
    }
}

/// Factorization witness for membership in `⟨V_{Φ^h_{k·n}}⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymCertificate {
    pub factors: Vec<CertFactor>,
    pub spec: SubbasicSpec,
}

impl SymCertificate {
    pub fn empty(spec: SubbasicSpec) -> Self {
        SymCertificate { factors: Vec::new(), spec }
    }

    /// The product of all factors, in order.
    pub fn product(&self) -> ReducedWord {
        self.factors
            .iter()
            .fold(ReducedWord::identity(), |acc, f| acc.multiply(&f.value()))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.factors.iter().map(|f| f.letter)
    }
}

/// Rechecks a certificate from scratch: positive distinct slots, the
/// threshold `ν(k_i) ≥ φ_{k·n_i}(g_i·h)` for every factor, and that the
/// factor product reduces to `w`.
pub fn cert_verify(ctx: &PhiContext, c: &SymCertificate, w: &ReducedWord) -> bool {
    if c.spec.k == 0 {
        return false;
    }
    let mut seen = HashSet::with_capacity(c.factors.len());
    for f in &c.factors {
        if f.slot == 0 || !seen.insert(f.slot) {
            return false;
        }
        let level = c.spec.slot_level(f.slot);
        if ctx.nu(f.letter.index) < ctx.phi_threshold(level, &f.conjugator, &c.spec.h) {
            return false;
        }
    }
    c.product() == *w
}

/// Every letter used at dilation `k` lies in `U_k`, so the certified word
/// lies in the normal closure of `U_k`.
pub fn hausdorff_support(ctx: &PhiContext, c: &SymCertificate) -> bool {
    c.letters().all(|l| ctx.nu(l.index) >= c.spec.k)
}

/// Certificate for `w⁻¹` from one for `w`: factors reversed, letters
/// inverted, slots and conjugators kept.
pub fn cert_invert(c: &SymCertificate) -> SymCertificate {
    SymCertificate {
        factors: c
            .factors
            .iter()
            .rev()
            .map(|f| CertFactor { slot: f.slot, conjugator: f.conjugator.clone(), letter: f.letter.inv() })
            .collect(),
        spec: c.spec.clone(),
    }
}

/// From certificates of `u` and `v` at dilation `2k`, a certificate of `u·v`
/// at dilation `k`: slot `n` of `c1` moves to `2n − 1` and slot `n` of `c2`
/// to `2n`. Both moves only lower the `φ` index, which is sound because
/// `φ_n` is nondecreasing in `n`.
pub fn cert_square(c1: &SymCertificate, c2: &SymCertificate) -> Result<SymCertificate, Error> {
    if c1.spec.h != c2.spec.h {
        return Err(Error::TranslateMismatch(c1.spec.h.to_string(), c2.spec.h.to_string()));
    }
    if c1.spec.k != c2.spec.k {
        return Err(Error::InvalidBounds(format!(
            "dilations differ: {} vs {}",
            c1.spec.k, c2.spec.k
        )));
    }
    if !c1.spec.k.is_multiple_of(2) {
        return Err(Error::OddDilation(c1.spec.k));
    }
    let spec = SubbasicSpec { h: c1.spec.h.clone(), k: c1.spec.k / 2 };
    let mut out = SymCertificate::empty(spec);
    if c1.product().multiply(&c2.product()).is_identity() {
        return Ok(out);
    }
    for f in &c1.factors {
        out.factors.push(CertFactor { slot: 2 * f.slot - 1, ..f.clone() });
    }
    for f in &c2.factors {
        out.factors.push(CertFactor { slot: 2 * f.slot, ..f.clone() });
    }
    Ok(out)
}

/// From a certificate of `w` against translate `h`, a certificate of
/// `h⁻¹wh` against the untranslated family: each conjugator `g_i` becomes
/// `g_i·h`, which leaves every threshold `φ(g_i·h)` unchanged.
pub fn cert_conjugate(c: &SymCertificate, h: &ReducedWord) -> Result<SymCertificate, Error> {
    if c.spec.h != *h {
        return Err(Error::TranslateMismatch(c.spec.h.to_string(), h.to_string()));
    }
    Ok(SymCertificate {
        factors: c
            .factors
            .iter()
            .map(|f| CertFactor { conjugator: f.conjugator.multiply(h), ..f.clone() })
            .collect(),
        spec: SubbasicSpec { h: ReducedWord::identity(), k: c.spec.k },
    })
}
