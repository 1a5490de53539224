//! Piecewise-word maps on a finite sample of `G^ℕ`.
//!
//! A sample point is a truncated sequence `(x_0, …, x_{d−1})` of group
//! elements. A [`PiecewiseMap`] partitions the sample into cells and assigns
//! each cell a word in the coordinate projections `p_0, …, p_{d−1}`; the
//! maps form a group under pointwise multiplication. Every subset of a
//! finite sample is clopen, so the partition may be arbitrary.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::Error;
use crate::target_groups::GroupOracle;
use crate::words::{Letter, ReducedWord};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SamplePoint<E> {
    pub coords: Vec<E>,
}

/// A finite set of sample points sharing one dimension `d ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample<E> {
    points: Vec<SamplePoint<E>>,
    dim: usize,
}

impl<E: Clone + Eq> Sample<E> {
    pub fn new(points: Vec<SamplePoint<E>>) -> Result<Arc<Self>, Error> {
        let dim = points.first().map_or(0, |p| p.coords.len());
        if dim == 0 || points.iter().any(|p| p.coords.len() != dim) {
            return Err(Error::InvalidBounds("sample points need one common dimension d ≥ 1".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidBounds(format!("sample point {i} is repeated")));
            }
        }
        Ok(Arc::new(Sample { points, dim }))
    }

    pub fn points(&self) -> &[SamplePoint<E>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, x: &SamplePoint<E>) -> Result<usize, Error> {
        self.points.iter().position(|p| p == x).ok_or(Error::UnknownPoint)
    }
}

/// Cells are numbered in order of first appearance and carry distinct
/// words, so equal maps have equal representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseMap<E> {
    sample: Arc<Sample<E>>,
    cell_of: Vec<usize>,
    cells: Vec<ReducedWord>,
}

impl<E: Clone + Eq> PiecewiseMap<E> {
    /// `cell_of[i]` names the cell of sample point `i`.
    pub fn from_cells(sample: Arc<Sample<E>>, cell_of: Vec<usize>, cells: Vec<ReducedWord>) -> Result<Self, Error> {
        if cell_of.len() != sample.len() {
            return Err(Error::SampleMismatch);
        }
        if let Some(&c) = cell_of.iter().find(|&&c| c >= cells.len()) {
            return Err(Error::InvalidBounds(format!("cell {c} has no word")));
        }
        for w in &cells {
            if let Some(m) = w.max_index().filter(|&m| m >= sample.dim() as u64) {
                return Err(Error::CoordinateOutOfRange { letter: m, dim: sample.dim() });
            }
        }
        let words = cell_of.iter().map(|&c| cells[c].clone()).collect();
        Ok(Self::from_pointwise(sample, words))
    }

    pub fn constant(sample: Arc<Sample<E>>, word: ReducedWord) -> Result<Self, Error> {
        let n = sample.len();
        Self::from_cells(sample, vec![0; n], vec![word])
    }

    pub fn identity(sample: Arc<Sample<E>>) -> Self {
        let n = sample.len();
        Self::from_pointwise(sample, vec![ReducedWord::identity(); n])
    }

    /// `word` on the cell `{x_i}`, the identity elsewhere.
    pub fn on_point(sample: Arc<Sample<E>>, i: usize, word: ReducedWord) -> Result<Self, Error> {
        if i >= sample.len() {
            return Err(Error::UnknownPoint);
        }
        let cell_of = (0..sample.len()).map(|j| usize::from(j == i)).collect();
        Self::from_cells(sample, cell_of, vec![ReducedWord::identity(), word])
    }

    fn from_pointwise(sample: Arc<Sample<E>>, words: Vec<ReducedWord>) -> Self {
        let mut ids: HashMap<ReducedWord, usize> = HashMap::new();
        let mut cells = Vec::new();
        let cell_of = words
            .into_iter()
            .map(|w| {
                *ids.entry(w.clone()).or_insert_with(|| {
                    cells.push(w);
                    cells.len() - 1
                })
            })
            .collect();
        PiecewiseMap { sample, cell_of, cells }
    }

    pub fn sample(&self) -> &Arc<Sample<E>> {
        &self.sample
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[ReducedWord] {
        &self.cells
    }

    pub fn cell_of(&self) -> &[usize] {
        &self.cell_of
    }

    /// The word used at sample point `i`.
    pub fn word_at(&self, i: usize) -> &ReducedWord {
        &self.cells[self.cell_of[i]]
    }

    fn same_sample(&self, other: &Self) -> Result<(), Error> {
        if Arc::ptr_eq(&self.sample, &other.sample) || self.sample == other.sample {
            Ok(())
        } else {
            Err(Error::SampleMismatch)
        }
    }
}

/// Substitutes the coordinates of point `i` into the word of its cell.
pub fn eval_at<O: GroupOracle>(o: &O, f: &PiecewiseMap<O::Elem>, i: usize) -> Result<O::Elem, Error> {
    let point = f.sample.points.get(i).ok_or(Error::UnknownPoint)?;
    Ok(eval_word(o, f.word_at(i), &point.coords))
}

pub fn eval<O: GroupOracle>(o: &O, f: &PiecewiseMap<O::Elem>, x: &SamplePoint<O::Elem>) -> Result<O::Elem, Error> {
    eval_at(o, f, f.sample.position(x)?)
}

/// Letters must index coordinates; callers validate beforehand.
pub fn eval_word<O: GroupOracle>(o: &O, w: &ReducedWord, coords: &[O::Elem]) -> O::Elem {
    w.letters().iter().fold(o.identity(), |acc, l| {
        let c = &coords[l.index as usize];
        let c = if l.inverse { o.inv(c) } else { c.clone() };
        o.mul(&acc, &c)
    })
}

/// Pointwise product on the common refinement, with equal-word cells merged.
pub fn k_mul<E: Clone + Eq>(f: &PiecewiseMap<E>, g: &PiecewiseMap<E>) -> Result<PiecewiseMap<E>, Error> {
    f.same_sample(g)?;
    let words = (0..f.sample.len()).map(|i| f.word_at(i).multiply(g.word_at(i))).collect();
    Ok(PiecewiseMap::from_pointwise(f.sample.clone(), words))
}

pub fn k_inv<E: Clone + Eq>(f: &PiecewiseMap<E>) -> PiecewiseMap<E> {
    PiecewiseMap {
        sample: f.sample.clone(),
        cell_of: f.cell_of.clone(),
        cells: f.cells.iter().map(ReducedWord::invert).collect(),
    }
}

/// `f(x) ∈ V_u` at every sample point.
pub fn w_u_member<O: GroupOracle>(o: &O, f: &PiecewiseMap<O::Elem>, u: u64) -> Result<bool, Error> {
    for i in 0..f.sample.len() {
        if !o.basis_member(u, &eval_at(o, f, i)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f ∈ ⋂_i g_i W_U g_i⁻¹`; an empty list means plain `W_U`.
pub fn invariant_nbhd_member<O: GroupOracle>(
    o: &O,
    f: &PiecewiseMap<O::Elem>,
    conjugators: &[PiecewiseMap<O::Elem>],
    u: u64,
) -> Result<bool, Error> {
    if conjugators.is_empty() {
        return w_u_member(o, f, u);
    }
    for g in conjugators {
        if !w_u_member(o, &k_mul(&k_mul(&k_inv(g), f)?, g)?, u)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `j` with `a⁻¹V_j³a ⊆ V_u`: conjugation bound, then two square bounds.
pub fn cube_bound<O: GroupOracle>(o: &O, a: &O::Elem, u: u64) -> u64 {
    o.sq_bound(o.sq_bound(o.conj_bound(a, u)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PwCheck {
    pub name: String,
    pub passed: bool,
}

/// The steps of the openness argument for one scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpennessTranscript {
    pub x: Vec<String>,
    pub a: Vec<String>,
    pub u_index: u64,
    pub v_index: u64,
    pub b_word: ReducedWord,
    pub b: String,
    /// `(cell word, points in the cell)` of the witness.
    pub witness: Vec<(ReducedWord, Vec<usize>)>,
    pub checks: Vec<PwCheck>,
}

impl OpennessTranscript {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Number of basis elements per factor in the sampled check of `a⁻¹V³a ⊆ U`.
const CUBE_SAMPLES: u64 = 6;

/// Given `b = b_word(x) ∈ V`, returns `f = b_word` on `{x}` and the identity
/// elsewhere, verified to lie in `⋂ g_i W_U g_i⁻¹` with `f(x) = b`.
///
/// `V = V_j` with `j` the largest [`cube_bound`] over `e` and the values
/// `a_i = g_i(x)`.
pub fn openness_witness<O: GroupOracle>(
    o: &O,
    x: &SamplePoint<O::Elem>,
    sample: &Arc<Sample<O::Elem>>,
    conjugators: &[PiecewiseMap<O::Elem>],
    u: u64,
    b_word: &ReducedWord,
) -> Result<(PiecewiseMap<O::Elem>, OpennessTranscript), Error> {
    let xi = sample.position(x)?;
    if let Some(m) = b_word.max_index().filter(|&m| m >= sample.dim() as u64) {
        return Err(Error::CoordinateOutOfRange { letter: m, dim: sample.dim() });
    }
    let a = conjugators
        .iter()
        .map(|g| {
            g.same_sample(&PiecewiseMap::identity(sample.clone()))?;
            eval_at(o, g, xi)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let v_index = std::iter::once(o.identity())
        .chain(a.iter().cloned())
        .map(|ai| cube_bound(o, &ai, u))
        .max()
        .expect("at least the identity");
    let b = eval_word(o, b_word, &x.coords);
    if !o.basis_member(v_index, &b) {
        return Err(Error::BNotInV(format!("{} not in V_{v_index}", o.format(&b))));
    }
    let f = PiecewiseMap::on_point(sample.clone(), xi, b_word.clone())?;

    let mut checks = vec![
        PwCheck { name: "f(x) = b".into(), passed: eval_at(o, &f, xi)? == b },
        PwCheck { name: "f in every g W_U g^-1".into(), passed: invariant_nbhd_member(o, &f, conjugators, u)? },
    ];
    let conj_b = a.iter().all(|ai| o.basis_member(u, &o.conj(&b, ai)));
    checks.push(PwCheck { name: "a_i^-1 b a_i in U".into(), passed: conj_b });
    let count = o.basis_len(v_index).map_or(CUBE_SAMPLES, |l| l.min(CUBE_SAMPLES));
    let vs: Vec<O::Elem> = (0..count).map(|i| o.basis_enumerate(v_index, i)).collect();
    let cube_ok = std::iter::once(o.identity()).chain(a.iter().cloned()).all(|ai| {
        vs.iter().all(|v1| {
            vs.iter().all(|v2| {
                let v12 = o.mul(v1, v2);
                vs.iter().all(|v3| o.basis_member(u, &o.conj(&o.mul(&v12, v3), &ai)))
            })
        })
    });
    checks.push(PwCheck { name: "a_i^-1 V^3 a_i in U (sampled)".into(), passed: cube_ok });

    let mut witness: Vec<(ReducedWord, Vec<usize>)> = f.cells.iter().map(|w| (w.clone(), Vec::new())).collect();
    for (i, &c) in f.cell_of.iter().enumerate() {
        witness[c].1.push(i);
    }
    let transcript = OpennessTranscript {
        x: x.coords.iter().map(|c| o.format(c)).collect(),
        a: a.iter().map(|ai| o.format(ai)).collect(),
        u_index: u,
        v_index,
        b_word: b_word.clone(),
        b: o.format(&b),
        witness,
        checks,
    };
    if !transcript.all_passed() {
        let failed: Vec<&str> = transcript.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        return Err(Error::VerificationFailed(failed.join("; ")));
    }
    Ok((f, transcript))
}

/// Shape limits for [`random_scenario`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioBounds {
    pub sample_size: usize,
    pub dim: usize,
    pub conjugators: usize,
    pub u_max: u64,
}

impl Default for ScenarioBounds {
    fn default() -> Self {
        ScenarioBounds { sample_size: 4, dim: 3, conjugators: 3, u_max: 4 }
    }
}

/// A random openness configuration with `b ∈ V ∩ G_x`.
#[derive(Clone, Debug)]
pub struct Scenario<E> {
    pub sample: Arc<Sample<E>>,
    pub x: usize,
    pub conjugators: Vec<PiecewiseMap<E>>,
    pub u: u64,
    pub b_word: ReducedWord,
}

fn random_word<R: Rng>(rng: &mut R, max_len: usize, dim: usize) -> ReducedWord {
    let len = rng.gen_range(0..=max_len);
    ReducedWord::from_letters((0..len).map(|_| {
        let k = rng.gen_range(0..dim as u64);
        if rng.gen_bool(0.5) {
            Letter::pos(k)
        } else {
            Letter::neg(k)
        }
    }))
}

/// Coordinates come from basis sets of random depth so that `V ∩ G_x` has
/// nontrivial elements; `b` is the first random word landing in `V`,
/// falling back to the identity.
pub fn random_scenario<O: GroupOracle, R: Rng>(o: &O, bounds: ScenarioBounds, rng: &mut R) -> Result<Scenario<O::Elem>, Error> {
    let shape = ScenarioBounds {
        dim: rng.gen_range(1..=bounds.dim.max(1)),
        sample_size: rng.gen_range(1..=bounds.sample_size.max(1)),
        conjugators: rng.gen_range(0..=bounds.conjugators),
        u_max: rng.gen_range(0..=bounds.u_max),
    };
    scenario_with_shape(o, shape, rng)
}

/// Like [`random_scenario`] with every bound attained exactly; `u_max` is
/// the neighborhood index. The sample may come out smaller when the
/// adapter has too few distinct elements.
pub fn scenario_with_shape<O: GroupOracle, R: Rng>(o: &O, shape: ScenarioBounds, rng: &mut R) -> Result<Scenario<O::Elem>, Error> {
    let dim = shape.dim;
    let size = shape.sample_size;
    let mut points: Vec<SamplePoint<O::Elem>> = Vec::with_capacity(size);
    let mut attempts = 0;
    while points.len() < size && attempts < 100 * size {
        attempts += 1;
        let coords = (0..dim)
            .map(|_| {
                let depth = rng.gen_range(0..=10u64);
                let len = o.basis_len(depth).unwrap_or(40).min(40);
                o.basis_enumerate(depth, rng.gen_range(0..len))
            })
            .collect();
        let p = SamplePoint { coords };
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let sample = Sample::new(points)?;
    let x = rng.gen_range(0..sample.len());
    let count = shape.conjugators;
    let conjugators = (0..count)
        .map(|_| {
            let cells = rng.gen_range(1..=sample.len());
            let cell_of = (0..sample.len()).map(|_| rng.gen_range(0..cells)).collect();
            let words = (0..cells).map(|_| random_word(rng, 2, dim)).collect();
            PiecewiseMap::from_cells(sample.clone(), cell_of, words)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let u = shape.u_max;

    let xp = &sample.points()[x];
    let v_index = std::iter::once(o.identity())
        .chain(conjugators.iter().map(|g| eval_at(o, g, x).expect("x in sample")))
        .map(|a| cube_bound(o, &a, u))
        .max()
        .expect("at least the identity");
    let b_word = (0..200)
        .map(|_| random_word(rng, 3, dim))
        .find(|w| !w.is_identity() && o.basis_member(v_index, &eval_word(o, w, &xp.coords)))
        .unwrap_or_else(ReducedWord::identity);
    Ok(Scenario { sample, x, conjugators, u, b_word })
}

impl<E: Clone + Eq> Scenario<E> {
    pub fn point(&self) -> &SamplePoint<E> {
        &self.sample.points()[self.x]
    }
}

/// Runs [`openness_witness`] on a scenario.
pub fn run_scenario<O: GroupOracle>(o: &O, s: &Scenario<O::Elem>) -> Result<OpennessTranscript, Error> {
    openness_witness(o, s.point(), &s.sample, &s.conjugators, s.u, &s.b_word).map(|(_, t)| t)
}
