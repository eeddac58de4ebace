//! Sparse covering codes: a code `L`, the projection `T` onto the first `q`
//! coordinates, and a center distribution under which every `t`-sparse target
//! is covered by `T(B(s, r) ∩ L)` with probability at least `δ`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::RngCore;

use crate::budget::{ball_size, Budget};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::gf2codes::{bch_designed_dimension, bch_generator, LinearCode, MAX_FIELD_DEGREE};
use crate::{ratio, Rational};

/// Lower bound on the covering probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaBound {
    Exact(Rational),
    /// `d^{−d/2}`, irrational for odd `d`; compared through `p²·d^d ≥ 1`.
    InverseRootPower { d: u32 },
}

impl DeltaBound {
    /// `δ²` as an exact rational.
    fn squared(&self) -> Rational {
        match self {
            DeltaBound::Exact(v) => v * v,
            DeltaBound::InverseRootPower { d } => {
                Rational::new(BigInt::one(), BigInt::from(*d).pow(*d))
            }
        }
    }

    /// `δ` itself when rational.
    pub fn exact(&self) -> Option<Rational> {
        match self {
            DeltaBound::Exact(v) => Some(v.clone()),
            DeltaBound::InverseRootPower { d } if d % 2 == 0 => Some(Rational::new(
                BigInt::one(),
                BigInt::from(*d).pow(d / 2),
            )),
            DeltaBound::InverseRootPower { .. } => None,
        }
    }

    /// Whether `p ≥ δ`.
    pub fn is_met_by(&self, p: &Rational) -> bool {
        !p.is_negative() && p * p >= self.squared()
    }

    /// Whether an observed fraction `f` over `trials` samples satisfies
    /// `f ≥ δ − 3·√(δ/trials)`. With `D = δ²` and `c = 9/trials` this is
    /// `f ≥ δ`, or `(D + f²)² ≤ D·(2f + c)²` when `f < δ`.
    pub fn is_met_statistically(&self, f: &Rational, trials: u64) -> bool {
        if self.is_met_by(f) {
            return true;
        }
        if trials == 0 {
            return false;
        }
        let d2 = self.squared();
        let c = Rational::new(BigInt::from(9), BigInt::from(trials));
        let lhs = &d2 + f * f;
        let rhs = ratio::int(2) * f + c;
        if rhs.is_negative() {
            return false;
        }
        &lhs * &lhs <= &d2 * &rhs * &rhs
    }

    pub fn approx(&self) -> f64 {
        match self {
            DeltaBound::Exact(v) => ratio::approx(v),
            DeltaBound::InverseRootPower { d } => (*d as f64).powf(-(*d as f64) / 2.0),
        }
    }
}

impl std::fmt::Display for DeltaBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeltaBound::Exact(v) => write!(f, "{}", ratio::show(v)),
            DeltaBound::InverseRootPower { d } => write!(f, "{d}^(-{d}/2)"),
        }
    }
}

/// A code with projection and center distribution, as consumed by the
/// SNC-to-MDP gadget reduction. Implementations keep the first `q` rows of
/// the generator equal to `[I_q | 0]`, so `T·L·z` is the prefix of `z`.
pub trait CoveringGadget {
    /// The `h × m` generator `L`.
    fn generator(&self) -> &BitMatrix;
    fn q(&self) -> usize;
    fn t(&self) -> usize;
    /// Minimum distance guaranteed for `L`.
    fn d(&self) -> usize;
    fn r(&self) -> usize;
    fn delta(&self) -> DeltaBound;
    fn sample_center(&self, rng: &mut dyn RngCore) -> BitVector;
    /// Exact `Pr_{s∼D}[x ∈ T(B(s, r) ∩ L)]`.
    fn coverage_probability(&self, x: &BitVector, budget: Budget) -> Result<Rational>;

    /// The slack `ε` the gadget was built for, when it has one.
    fn eps(&self) -> Option<Rational> {
        None
    }

    fn h(&self) -> usize {
        self.generator().rows()
    }

    fn m(&self) -> usize {
        self.generator().cols()
    }

    /// A message `z` with `T·L·z = x` and `‖Lz − s‖₀ ≤ r`, scanning the
    /// `2^{m−q}` completions of `x` in increasing binary order.
    fn cover_witness(&self, x: &BitVector, s: &BitVector, budget: Budget) -> Result<Option<BitVector>> {
        let (q, m, h) = (self.q(), self.m(), self.h());
        if x.len() != q || s.len() != h {
            return Err(Error::DimensionMismatch(format!(
                "target of length {} and center of length {} for q = {q}, h = {h}",
                x.len(),
                s.len()
            )));
        }
        let free = m - q;
        let count = 1u128.checked_shl(free as u32).unwrap_or(u128::MAX);
        budget.check("prefix-compatible messages", count)?;
        let l = self.generator();
        let base = l.mul_vec(&x.concat(&BitVector::zeros(free)));
        let tail_columns: Vec<BitVector> = (q..m).map(|j| l.column(j)).collect();
        for code in 0..count as u64 {
            let mut word = base.clone();
            for (i, col) in tail_columns.iter().enumerate() {
                if code >> i & 1 == 1 {
                    word.xor_assign(col);
                }
            }
            if word.distance(s) <= self.r() {
                return Ok(Some(x.concat(&BitVector::from_u64(free, code))));
            }
        }
        Ok(None)
    }
}

/// Checks that the first `q` rows of `l` are `[I_q | 0]`.
fn check_prefix_identity(l: &BitMatrix, q: usize) -> Result<()> {
    if q > l.cols() || q > l.rows() {
        return Err(Error::InfeasibleParameters(format!(
            "projection width {q} exceeds the {}×{} generator",
            l.rows(),
            l.cols()
        )));
    }
    for i in 0..q {
        if *l.row(i) != BitVector::unit(l.cols(), i) {
            return Err(Error::InvalidInstance(format!(
                "generator row {i} is not the unit vector e_{i}"
            )));
        }
    }
    Ok(())
}

/// Every target of weight at most `t` in `F₂^q`, in weight-then-support order.
pub fn sparse_targets(q: usize, t: usize) -> Vec<BitVector> {
    let mut out = vec![BitVector::zeros(q)];
    let mut layer = vec![Vec::<usize>::new()];
    for _ in 0..t.min(q) {
        let mut next = Vec::new();
        for support in &layer {
            let start = support.last().map_or(0, |&j| j + 1);
            for j in start..q {
                let mut s = support.clone();
                s.push(j);
                next.push(s);
            }
        }
        out.extend(next.iter().map(|s| BitVector::from_support(q, s)));
        layer = next;
    }
    out
}

/// BCH-based gadget: `d = 2⌈t/ε⌉ + 1`, `r = (d−1)/2 + t`, centers with a zero
/// prefix and a uniform tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccGadget {
    code: LinearCode,
    q: usize,
    t: usize,
    d: usize,
    r: usize,
    eps: Option<Rational>,
}

/// Chooses `h = 2^μ − 1` minimal with `h ≥ max(2q, d)` and message length at
/// least `q`.
pub fn scc_block_length(q: usize, d: usize) -> Result<usize> {
    for mu in 1..=MAX_FIELD_DEGREE {
        let h = (1usize << mu) - 1;
        if h < 2 * q || h < d {
            continue;
        }
        if bch_designed_dimension(h, d).is_some_and(|m| m >= q) {
            return Ok(h);
        }
    }
    Err(Error::InfeasibleParameters(format!(
        "no BCH length up to 2^{MAX_FIELD_DEGREE} − 1 fits q = {q}, d = {d}"
    )))
}

pub fn scc_construct(q: usize, t: usize, eps: &Rational) -> Result<SccGadget> {
    if !eps.is_positive() {
        return Err(Error::InfeasibleParameters("ε must be positive".into()));
    }
    if q == 0 {
        return Err(Error::InfeasibleParameters("projection width must be positive".into()));
    }
    let half = ratio::ceil_u64(&(ratio::from_count(t) / eps))? as usize;
    let d = 2 * half + 1;
    let r = (d - 1) / 2 + t;
    if r >= d {
        return Err(Error::InfeasibleParameters(format!(
            "covering radius {r} is not below the distance {d}"
        )));
    }
    let h = scc_block_length(q, d)?;
    let code = bch_generator(h, d)?;
    let mut gadget = SccGadget::from_parts(code, q, t, d, r)?;
    gadget.eps = Some(eps.clone());
    Ok(gadget)
}

impl SccGadget {
    /// Wraps any code whose first `q` rows are `[I_q | 0]`. The distance `d`
    /// is taken as given.
    pub fn from_parts(code: LinearCode, q: usize, t: usize, d: usize, r: usize) -> Result<Self> {
        check_prefix_identity(code.generator(), q)?;
        if r >= d {
            return Err(Error::InfeasibleParameters(format!(
                "covering radius {r} is not below the distance {d}"
            )));
        }
        Ok(SccGadget {
            code,
            q,
            t,
            d,
            r,
            eps: None,
        })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Tails (coordinates `q..h`) of the `2^{m−q}` codewords with prefix `x`.
    pub fn compatible_tails(&self, x: &BitVector, budget: Budget) -> Result<Vec<BitVector>> {
        let (q, m, h) = (self.q, self.m(), self.h());
        let free = m - q;
        let count = 1u128.checked_shl(free as u32).unwrap_or(u128::MAX);
        budget.check("prefix-compatible messages", count)?;
        let l = self.code.generator();
        let tail_columns: Vec<BitVector> = (q..m).map(|j| l.column(j).slice(q, h)).collect();
        let base = l.mul_vec(&x.concat(&BitVector::zeros(free))).slice(q, h);
        let mut out = Vec::with_capacity(count as usize);
        let mut word = base;
        out.push(word.clone());
        crate::gf2::gray_walk(free, |bit, _| {
            word.xor_assign(&tail_columns[bit]);
            out.push(word.clone());
        });
        Ok(out)
    }
}

impl CoveringGadget for SccGadget {
    fn generator(&self) -> &BitMatrix {
        self.code.generator()
    }

    fn q(&self) -> usize {
        self.q
    }

    fn t(&self) -> usize {
        self.t
    }

    fn d(&self) -> usize {
        self.d
    }

    fn r(&self) -> usize {
        self.r
    }

    fn delta(&self) -> DeltaBound {
        DeltaBound::InverseRootPower { d: self.d as u32 }
    }

    fn eps(&self) -> Option<Rational> {
        self.eps.clone()
    }

    fn sample_center(&self, rng: &mut dyn RngCore) -> BitVector {
        let tail = self.h() - self.q;
        let bits = (0..tail).map(|_| rng.next_u32() & 1 == 1);
        BitVector::zeros(self.q).concat(&BitVector::from_bools(bits))
    }

    /// Scans every tail and tests it against every compatible codeword tail.
    fn coverage_probability(&self, x: &BitVector, budget: Budget) -> Result<Rational> {
        if x.len() != self.q {
            return Err(Error::DimensionMismatch(format!(
                "target of length {} for q = {}",
                x.len(),
                self.q
            )));
        }
        let prefix = x.weight();
        let span = self.h() - self.q;
        if prefix > self.r {
            return Ok(Rational::zero());
        }
        let radius = self.r - prefix;
        let tails = self.compatible_tails(x, budget)?;
        let centers = 1u128.checked_shl(span as u32).unwrap_or(u128::MAX);
        budget.check("center enumeration", centers.saturating_mul(tails.len() as u128))?;
        if span > 63 {
            return Err(Error::too_large("center enumeration", centers, budget.limit()));
        }
        let words: Vec<u64> = tails.iter().map(BitVector::to_u64).collect();
        let covered = (0..1u64 << span)
            .filter(|s| words.iter().any(|w| (w ^ s).count_ones() as usize <= radius))
            .count();
        Ok(Rational::new(covered.into(), BigInt::one() << span))
    }
}

/// A repetition-code surrogate: `L` stacks `reps` copies of `I_q`, so
/// `d = reps`. Centers are `Lz ⊕ u` for `|z| ≤ t` with a fixed weight-`r`
/// offset `u` on the tail, drawn uniformly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MicroGadget {
    generator: BitMatrix,
    q: usize,
    t: usize,
    r: usize,
    centers: Vec<BitVector>,
    delta: Rational,
}

impl MicroGadget {
    /// Fails with a budget error when the exact `δ`, one coverage scan per
    /// target over every center, exceeds `budget`.
    pub fn repetition(q: usize, t: usize, reps: usize, r: usize, budget: Budget) -> Result<Self> {
        if q == 0 || reps < 2 {
            return Err(Error::InfeasibleParameters(
                "repetition gadget needs q ≥ 1 and at least two copies".into(),
            ));
        }
        if r >= reps {
            return Err(Error::InfeasibleParameters(format!(
                "covering radius {r} is not below the distance {reps}"
            )));
        }
        let h = q * reps;
        if r > h - q {
            return Err(Error::InfeasibleParameters(format!(
                "offset weight {r} exceeds the tail length {}",
                h - q
            )));
        }
        let targets = ball_size(q as u64, t as u64);
        budget.check("micro gadget coverage table", targets.saturating_mul(targets))?;
        let generator = BitMatrix::identity(q).repeat_rows(reps);
        let offset = BitVector::from_support(h, &(q..q + r).collect::<Vec<_>>());
        let centers: Vec<BitVector> = sparse_targets(q, t)
            .iter()
            .map(|z| generator.mul_vec(z).xor(&offset))
            .collect();
        let mut gadget = MicroGadget {
            generator,
            q,
            t,
            r,
            centers,
            delta: Rational::zero(),
        };
        let mut delta: Option<Rational> = None;
        for x in sparse_targets(q, t) {
            let p = gadget.coverage_probability(&x, budget)?;
            delta = Some(match delta {
                Some(d) if d <= p => d,
                _ => p,
            });
        }
        gadget.delta = delta.unwrap_or_else(Rational::zero);
        Ok(gadget)
    }

    pub fn centers(&self) -> &[BitVector] {
        &self.centers
    }
}

impl CoveringGadget for MicroGadget {
    fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    fn q(&self) -> usize {
        self.q
    }

    fn t(&self) -> usize {
        self.t
    }

    fn d(&self) -> usize {
        self.generator.rows() / self.q
    }

    fn r(&self) -> usize {
        self.r
    }

    fn delta(&self) -> DeltaBound {
        DeltaBound::Exact(self.delta.clone())
    }

    fn sample_center(&self, rng: &mut dyn RngCore) -> BitVector {
        let i = (rng.next_u64() % self.centers.len() as u64) as usize;
        self.centers[i].clone()
    }

    /// `m = q`, so `x` itself is the only message projecting to `x`.
    fn coverage_probability(&self, x: &BitVector, budget: Budget) -> Result<Rational> {
        if x.len() != self.q {
            return Err(Error::DimensionMismatch(format!(
                "target of length {} for q = {}",
                x.len(),
                self.q
            )));
        }
        budget.check("center scan", self.centers.len() as u128)?;
        let word = self.generator.mul_vec(x);
        let covered = self.centers.iter().filter(|s| word.distance(s) <= self.r).count();
        Ok(Rational::new(covered.into(), self.centers.len().into()))
    }
}

/// Whether the radius-`(d−1)/2` balls around the given words are pairwise
/// disjoint, i.e. all pairwise distances reach `d`.
pub fn balls_disjoint(words: &[BitVector], d: usize) -> bool {
    words
        .iter()
        .enumerate()
        .all(|(i, a)| words[i + 1..].iter().all(|b| a.distance(b) >= d))
}

/// Number of points within `radius` of some word, by marking every ball.
/// Independent of the scan used by [`SccGadget::coverage_probability`].
pub fn union_of_balls(words: &[BitVector], len: usize, radius: usize, budget: Budget) -> Result<usize> {
    budget.check(
        "ball marking",
        ball_size(len as u64, radius as u64).saturating_mul(words.len() as u128),
    )?;
    let mut marked: HashSet<BitVector> = HashSet::new();
    for w in words {
        mark_ball(w, 0, radius, &mut marked);
    }
    Ok(marked.len())
}

fn mark_ball(center: &BitVector, start: usize, radius: usize, marked: &mut HashSet<BitVector>) {
    marked.insert(center.clone());
    if radius == 0 {
        return;
    }
    for i in start..center.len() {
        let mut next = center.clone();
        next.flip(i);
        mark_ball(&next, i + 1, radius - 1, marked);
    }
}
