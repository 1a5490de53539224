//! Oracle-presented countable metrizable groups.
//!
//! A [`GroupOracle`] exposes an enumeration `g_1 = e, g_2, …`, the group law,
//! and a decreasing symmetric neighborhood basis `V_0 = G ⊇ V_1 ⊇ …` at the
//! identity through membership tests, enumerations, and analytic bounds.
//! Containment between infinite sets is never decided by search: adapters
//! must supply `conj_bound` and `sq_bound` themselves.

mod dyadic;
mod finite;
mod symfin;
mod zp;

use std::fmt;
use std::hash::Hash;
use std::path::Path;
use std::str::FromStr;

pub use dyadic::{Dyadic, DyadicAdapter};
pub use finite::FiniteAdapter;
pub use symfin::{Perm, SymFinAdapter};
pub use zp::ZpAdapter;

use crate::error::Error;
use crate::finite::FiniteGroup;

pub trait GroupOracle: Send + Sync {
    type Elem: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    fn name(&self) -> String;

    fn identity(&self) -> Self::Elem;

    /// `g_m` for `m ≥ 1`, with `g_1 = e`. Injective while `m` stays within
    /// [`Self::order`].
    fn enumerate(&self, m: u64) -> Self::Elem;

    /// `None` for infinite groups.
    fn order(&self) -> Option<u64> {
        None
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Membership in `V_n`.
    fn basis_member(&self, n: u64, g: &Self::Elem) -> bool;

    /// The `i`-th element of `V_n`, with index 0 the identity. Injective
    /// within [`Self::basis_len`].
    fn basis_enumerate(&self, n: u64, i: u64) -> Self::Elem;

    /// Size of `V_n`, `None` when infinite.
    fn basis_len(&self, _n: u64) -> Option<u64> {
        None
    }

    /// Some `j` with `g⁻¹V_jg ∪ gV_jg⁻¹ ⊆ V_n`.
    fn conj_bound(&self, g: &Self::Elem, n: u64) -> u64;

    /// Some `j` with `V_j² ⊆ V_n`.
    fn sq_bound(&self, n: u64) -> u64;

    /// The least `j` with `g⁻¹V_jg ∪ gV_jg⁻¹ ⊆ V_n`, when the adapter knows it.
    fn theta_exact(&self, _g: &Self::Elem, _n: u64) -> Option<u64> {
        None
    }

    fn format(&self, g: &Self::Elem) -> String {
        format!("{g:?}")
    }

    /// `g⁻¹ v g`.
    fn conj(&self, v: &Self::Elem, g: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(&self.inv(g), v), g)
    }

    /// Both `g⁻¹vg` and `gvg⁻¹` lie in `V_n`.
    fn conjugates_into(&self, v: &Self::Elem, g: &Self::Elem, n: u64) -> bool {
        self.basis_member(n, &self.conj(v, g)) && self.basis_member(n, &self.conj(v, &self.inv(g)))
    }

    /// `a^e` for a signed exponent.
    fn pow(&self, a: &Self::Elem, e: i64) -> Self::Elem {
        let base = if e < 0 { self.inv(a) } else { a.clone() };
        (0..e.unsigned_abs()).fold(self.identity(), |acc, _| self.mul(&acc, &base))
    }
}

/// Sample-based validation of the oracle contract: `V_0 = G`, symmetry,
/// `sq_bound`, `conj_bound`, the enumeration conventions, and `theta_exact`
/// soundness plus a bounded minimality witness.
pub fn validate_oracle<O: GroupOracle>(o: &O, n_max: u64, elems: u64, per_set: u64) -> Result<(), Error> {
    let e = o.identity();
    let bad = |msg: String| Err(Error::OracleUnsound(format!("{}: {msg}", o.name())));
    if o.enumerate(1) != e {
        return bad("g_1 is not the identity".into());
    }
    let gs: Vec<O::Elem> = (1..=elems).map(|m| o.enumerate(m)).collect();
    let distinct = o.order().map_or(gs.len() as u64, |ord| ord.min(gs.len() as u64)) as usize;
    for i in 0..distinct {
        for j in 0..i {
            if gs[i] == gs[j] {
                return bad(format!("enumeration repeats at {} and {}", j + 1, i + 1));
            }
        }
    }
    for g in &gs {
        if !o.basis_member(0, g) {
            return bad(format!("{} not in V_0", o.format(g)));
        }
    }
    for n in 0..=n_max {
        if o.basis_enumerate(n, 0) != e {
            return bad(format!("V_{n} enumeration does not start at e"));
        }
        let count = o.basis_len(n).map_or(per_set, |l| l.min(per_set));
        let vs: Vec<O::Elem> = (0..count).map(|i| o.basis_enumerate(n, i)).collect();
        for (i, v) in vs.iter().enumerate() {
            if !o.basis_member(n, v) {
                return bad(format!("V_{n}[{i}] = {} fails membership", o.format(v)));
            }
            if !o.basis_member(n, &o.inv(v)) {
                return bad(format!("V_{n} not symmetric at {}", o.format(v)));
            }
            if vs[..i].contains(v) {
                return bad(format!("V_{n} enumeration repeats {}", o.format(v)));
            }
        }
        let j = o.sq_bound(n);
        let sq: Vec<O::Elem> = (0..o.basis_len(j).map_or(per_set, |l| l.min(per_set)))
            .map(|i| o.basis_enumerate(j, i))
            .collect();
        for a in sq.iter().take(20) {
            for b in sq.iter().take(20) {
                if !o.basis_member(n, &o.mul(a, b)) {
                    return bad(format!("V_{j}^2 not inside V_{n}"));
                }
            }
        }
        for g in &gs {
            let j = o.conj_bound(g, n);
            let count = o.basis_len(j).map_or(per_set, |l| l.min(per_set));
            for i in 0..count {
                let v = o.basis_enumerate(j, i);
                if !o.conjugates_into(&v, g, n) {
                    return bad(format!("conj_bound({}, {n}) = {j} fails at {}", o.format(g), o.format(&v)));
                }
            }
            if let Some(t) = o.theta_exact(g, n) {
                if t > j {
                    return bad(format!("theta_exact exceeds conj_bound for {}", o.format(g)));
                }
                if t > 0 {
                    let count = o.basis_len(t - 1).map_or(per_set, |l| l.min(per_set));
                    let escapes =
                        (0..count).any(|i| !o.conjugates_into(&o.basis_enumerate(t - 1, i), g, n));
                    if !escapes {
                        return bad(format!(
                            "no witness that theta({}, {n}) = {t} is minimal",
                            o.format(g)
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Adapter selection as accepted by the CLI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupId {
    Zp(u64),
    SymFin,
    Dyadic,
    /// A Cayley-table file.
    Finite(String),
    /// A built-in symmetric group table `S_d`.
    FiniteSym(usize),
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::Zp(p) => write!(f, "zp{p}"),
            GroupId::SymFin => f.write_str("symfin"),
            GroupId::Dyadic => f.write_str("dyadic"),
            GroupId::Finite(path) => write!(f, "finite:{path}"),
            GroupId::FiniteSym(d) => write!(f, "finite-sym:{d}"),
        }
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(p) = s.strip_prefix("zp") {
            let p: u64 = p.parse().map_err(|_| Error::Config(format!("bad prime in {s:?}")))?;
            return Ok(GroupId::Zp(p));
        }
        if let Some(path) = s.strip_prefix("finite:") {
            return Ok(GroupId::Finite(path.to_string()));
        }
        if let Some(d) = s.strip_prefix("finite-sym:") {
            let d: usize = d.parse().map_err(|_| Error::Config(format!("bad degree in {s:?}")))?;
            if !(1..=6).contains(&d) {
                return Err(Error::Config("finite-sym degree must be 1..=6".into()));
            }
            return Ok(GroupId::FiniteSym(d));
        }
        match s {
            "symfin" => Ok(GroupId::SymFin),
            "dyadic" => Ok(GroupId::Dyadic),
            _ => Err(Error::Config(format!(
                "unknown group {s:?} (zp<p> | symfin | dyadic | finite:<file> | finite-sym:<d>)"
            ))),
        }
    }
}

/// A constructed adapter of any supported kind.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum AnyGroup {
    Zp(ZpAdapter),
    SymFin(SymFinAdapter),
    Dyadic(DyadicAdapter),
    Finite(FiniteAdapter),
}

impl GroupId {
    pub fn build(&self) -> Result<AnyGroup, Error> {
        Ok(match self {
            GroupId::Zp(p) => AnyGroup::Zp(ZpAdapter::new(*p)?),
            GroupId::SymFin => AnyGroup::SymFin(SymFinAdapter::new()),
            GroupId::Dyadic => AnyGroup::Dyadic(DyadicAdapter),
            GroupId::Finite(path) => {
                let text = std::fs::read_to_string(Path::new(path))
                    .map_err(|e| Error::Config(format!("cannot read {path}: {e}")))?;
                AnyGroup::Finite(FiniteAdapter::new(FiniteGroup::parse_table(&text)?))
            }
            GroupId::FiniteSym(d) => AnyGroup::Finite(FiniteAdapter::new(FiniteGroup::symmetric(*d))),
        })
    }
}

/// Runs `$body` with `$o` bound to the concrete adapter inside `$any`.
#[macro_export]
macro_rules! with_group {
    ($any:expr, $o:ident => $body:expr) => {
        match $any {
            $crate::target_groups::AnyGroup::Zp($o) => $body,
            $crate::target_groups::AnyGroup::SymFin($o) => $body,
            $crate::target_groups::AnyGroup::Dyadic($o) => $body,
            $crate::target_groups::AnyGroup::Finite($o) => $body,
        }
    };
}

/// The enumeration of ℤ used by the adapters: `0, 1, −1, 2, −2, …`.
pub(crate) fn zigzag(i: u64) -> i64 {
    if i % 2 == 1 {
        i.div_ceil(2) as i64
    } else {
        -((i / 2) as i64)
    }
}
