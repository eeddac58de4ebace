//! Binary linear codes: narrow-sense primitive BCH construction, tensor
//! products, and exact oracles for minimum distance, MLD and SNC.

use crate::budget::{ball_size, Budget};
use crate::error::{Error, Result};
use crate::gf2::{gray_walk, BitMatrix, BitVector};
use crate::Rational;

/// Primitive polynomials over GF(2), indexed by degree, bit `i` is the
/// coefficient of `x^i`.
const PRIMITIVE_POLYNOMIALS: [u32; 17] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B,
    0x4443, 0x8003, 0x1100B,
];

/// Largest supported extension degree.
pub const MAX_FIELD_DEGREE: u32 = 16;

/// Largest message length enumerated in full by [`code_distance_exact`].
pub const FULL_ENUMERATION_LIMIT: usize = 24;

/// The field GF(2^degree) in exponent/logarithm table form.
#[derive(Debug, Clone)]
pub struct GaloisField {
    degree: u32,
    exp: Vec<u32>,
}

impl GaloisField {
    pub fn new(degree: u32) -> Result<Self> {
        if degree == 0 || degree > MAX_FIELD_DEGREE {
            return Err(Error::InfeasibleParameters(format!(
                "field degree {degree} outside 1..={MAX_FIELD_DEGREE}"
            )));
        }
        let order = (1u32 << degree) - 1;
        let poly = PRIMITIVE_POLYNOMIALS[degree as usize];
        let mut exp = Vec::with_capacity(order as usize);
        let mut value = 1u32;
        for _ in 0..order {
            exp.push(value);
            value <<= 1;
            if value >> degree & 1 == 1 {
                value ^= poly;
            }
        }
        Ok(GaloisField { degree, exp })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Multiplicative order of the generator, `2^degree − 1`.
    pub fn order(&self) -> usize {
        self.exp.len()
    }

    /// `α^e` as a bit pattern.
    pub fn alpha_pow(&self, e: usize) -> u32 {
        self.exp[e % self.exp.len()]
    }
}

/// A binary linear code given by an `h × m` generator acting on messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: BitMatrix,
    designed_distance: usize,
    systematic_prefix: Option<usize>,
    coordinate_order: Vec<usize>,
}

impl LinearCode {
    /// Wraps a generator; fails unless it has full column rank.
    pub fn new(generator: BitMatrix, designed_distance: usize) -> Result<Self> {
        if generator.rank() != generator.cols() {
            return Err(Error::InvalidInstance(
                "generator does not have full column rank".into(),
            ));
        }
        let h = generator.rows();
        Ok(LinearCode {
            generator,
            designed_distance,
            systematic_prefix: None,
            coordinate_order: (0..h).collect(),
        })
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn block_length(&self) -> usize {
        self.generator.rows()
    }

    pub fn message_length(&self) -> usize {
        self.generator.cols()
    }

    pub fn designed_distance(&self) -> usize {
        self.designed_distance
    }

    pub fn systematic_prefix(&self) -> Option<usize> {
        self.systematic_prefix
    }

    /// Coordinate `i` of this code is coordinate `coordinate_order[i]` of the
    /// underlying construction.
    pub fn coordinate_order(&self) -> &[usize] {
        &self.coordinate_order
    }

    pub fn encode(&self, message: &BitVector) -> BitVector {
        self.generator.mul_vec(message)
    }

    /// Rows spanning the dual code.
    pub fn parity_check(&self) -> BitMatrix {
        let rows = self.generator.left_nullspace();
        BitMatrix::from_rows(self.block_length(), rows).expect("dual rows have block length")
    }

    pub fn contains(&self, word: &BitVector) -> bool {
        self.parity_check().mul_vec(word).is_zero()
    }
}

fn check_bch_shape(h: usize, d: usize) -> Result<u32> {
    if h == 0 || !(h + 1).is_power_of_two() {
        return Err(Error::InfeasibleParameters(format!(
            "block length {h} is not of the form 2^μ − 1"
        )));
    }
    if d == 0 || d > h {
        return Err(Error::InfeasibleParameters(format!(
            "designed distance {d} outside 1..={h}"
        )));
    }
    Ok((h + 1).trailing_zeros())
}

/// Parity check of the narrow-sense primitive BCH code, one block of
/// `log₂(h+1)` binary rows per odd root exponent below `d`.
pub fn bch_parity_check(h: usize, d: usize) -> Result<BitMatrix> {
    let degree = check_bch_shape(h, d)?;
    let field = GaloisField::new(degree)?;
    let mut rows = Vec::new();
    for j in (1..d).step_by(2) {
        for bit in 0..degree {
            rows.push(BitVector::from_bools(
                (0..h).map(|i| field.alpha_pow(i * j) >> bit & 1 == 1),
            ));
        }
    }
    BitMatrix::from_rows(h, rows)
}

/// Designed message length `h − ⌈(d−1)/2⌉·log₂(h+1)`, if positive.
pub fn bch_designed_dimension(h: usize, d: usize) -> Option<usize> {
    let degree = check_bch_shape(h, d).ok()? as usize;
    h.checked_sub(d.saturating_sub(1).div_ceil(2) * degree)
        .filter(|&m| m >= 1)
}

/// Generator whose top rows restricted to `order[..m]` form the identity.
/// Coordinates are permuted so an information set comes first.
fn systematic_generator(basis: &[BitVector], len: usize, m: usize) -> (BitMatrix, Vec<usize>) {
    let stacked = BitMatrix::from_rows(len, basis.to_vec()).expect("basis vectors share a length");
    let pivots = stacked.rref().pivots;
    let mut order = pivots.clone();
    order.extend((0..len).filter(|c| !pivots.contains(c)));
    let permuted = stacked.select_columns(&order);
    let echelon = permuted.rref().matrix;
    let columns: Vec<BitVector> = (0..m).map(|i| echelon.row(i).clone()).collect();
    let generator = BitMatrix::from_columns(len, &columns).expect("codewords have block length");
    (generator, order)
}

/// The full narrow-sense primitive BCH code of length `h` and designed
/// distance `d`, whose dimension may exceed the designed one.
pub fn narrow_sense_bch(h: usize, d: usize) -> Result<LinearCode> {
    let parity = bch_parity_check(h, d)?;
    let basis = parity.nullspace();
    if basis.is_empty() {
        return Err(Error::InfeasibleParameters(format!(
            "BCH code of length {h} and designed distance {d} is trivial"
        )));
    }
    let dim = basis.len();
    let (generator, order) = systematic_generator(&basis, h, dim);
    Ok(LinearCode {
        generator,
        designed_distance: d,
        systematic_prefix: Some(dim),
        coordinate_order: order,
    })
}

/// An `[h, m, ≥d]` BCH code systematic on its first `m` coordinates, where
/// `m = h − ⌈(d−1)/2⌉·log₂(h+1)`. When the true BCH dimension is larger the
/// code is the systematic subcode on the first `m` information symbols.
pub fn bch_generator(h: usize, d: usize) -> Result<LinearCode> {
    let m = bch_designed_dimension(h, d).ok_or_else(|| {
        Error::InfeasibleParameters(format!(
            "h = {h}, d = {d} leaves no message symbols"
        ))
    })?;
    let parity = bch_parity_check(h, d)?;
    let basis = parity.nullspace();
    debug_assert!(basis.len() >= m);
    let (generator, order) = systematic_generator(&basis, h, m);
    Ok(LinearCode {
        generator,
        designed_distance: d,
        systematic_prefix: Some(m),
        coordinate_order: order,
    })
}

/// Kronecker product code; coordinate `(i, j)` is flattened to `i·h₂ + j`.
pub fn tensor_code(c1: &LinearCode, c2: &LinearCode) -> LinearCode {
    let generator = c1.generator.kron(&c2.generator);
    let h = generator.rows();
    LinearCode {
        generator,
        designed_distance: c1.designed_distance * c2.designed_distance,
        systematic_prefix: None,
        coordinate_order: (0..h).collect(),
    }
}

/// Outcome of a minimum-distance computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distance {
    /// Exact minimum weight with the smallest witness in support order.
    Exact {
        distance: usize,
        codeword: BitVector,
        message: BitVector,
    },
    /// Every nonzero codeword is heavier than `cap`.
    Exceeds { cap: usize },
}

impl Distance {
    pub fn exact(&self) -> Option<usize> {
        match self {
            Distance::Exact { distance, .. } => Some(*distance),
            Distance::Exceeds { .. } => None,
        }
    }
}

/// Minimum distance of a code; see [`min_nonzero_image_weight`].
pub fn code_distance_exact(
    code: &LinearCode,
    weight_cap: Option<usize>,
    budget: Budget,
) -> Result<Distance> {
    min_nonzero_image_weight(&code.generator, weight_cap, budget)
}

/// `min ‖G x‖₀` over nonzero messages `x`. Full enumeration is used when the
/// message length allows it, otherwise supports of size at most `weight_cap`
/// are enumerated against the parity check.
pub fn min_nonzero_image_weight(
    g: &BitMatrix,
    weight_cap: Option<usize>,
    budget: Budget,
) -> Result<Distance> {
    let m = g.cols();
    let n = g.rows();
    if m == 0 {
        return Err(Error::InvalidInstance("code has no message symbols".into()));
    }
    let kernel = g.nullspace();
    if let Some(message) = kernel.into_iter().min_by(|a, b| a.weight_then_support_cmp(b)) {
        return Ok(Distance::Exact {
            distance: 0,
            codeword: BitVector::zeros(n),
            message,
        });
    }
    let full_fits = m <= FULL_ENUMERATION_LIMIT && (1u128 << m) <= budget.limit() as u128;
    if full_fits {
        return Ok(full_distance_scan(g));
    }
    let Some(cap) = weight_cap else {
        return Err(Error::too_large(
            "full distance enumeration",
            format!("2^{m} messages"),
            budget.limit(),
        ));
    };
    capped_distance(g, cap, budget)
}

/// Enumerates supports of size at most `cap` in weight-then-lexicographic
/// order against the parity check of the column space of `g`, which must
/// have full column rank.
pub fn capped_distance(g: &BitMatrix, cap: usize, budget: Budget) -> Result<Distance> {
    let n = g.rows();
    budget.check("capped distance enumeration", ball_size(n as u64, cap as u64))?;
    let parity_rows = g.left_nullspace();
    let parity = BitMatrix::from_rows(n, parity_rows).expect("dual rows have block length");
    let columns = parity.columns();
    let zero = BitVector::zeros(parity.rows());
    for w in 1..=cap.min(n) {
        let mut support = Vec::with_capacity(w);
        if let Some(found) = first_zero_sum(&columns, w, 0, &zero, &mut support) {
            let codeword = BitVector::from_support(n, &found);
            let message = g.solve(&codeword).expect("codeword lies in the column space");
            return Ok(Distance::Exact {
                distance: w,
                codeword,
                message,
            });
        }
    }
    Ok(Distance::Exceeds { cap })
}

fn full_distance_scan(g: &BitMatrix) -> Distance {
    let columns = g.columns();
    let mut image = BitVector::zeros(g.rows());
    let mut best: Option<(BitVector, BitVector)> = None;
    gray_walk(g.cols(), |bit, message| {
        image.xor_assign(&columns[bit]);
        let better = match &best {
            None => true,
            Some((cw, _)) => image.weight_then_support_cmp(cw).is_lt(),
        };
        if better {
            best = Some((image.clone(), message.clone()));
        }
    });
    let (codeword, message) = best.expect("at least one nonzero message");
    Distance::Exact {
        distance: codeword.weight(),
        codeword,
        message,
    }
}

/// First subset (in lexicographic order) of exactly `remaining` more
/// columns, all with index at least `start`, whose sum with `acc` is zero.
fn first_zero_sum(
    columns: &[BitVector],
    remaining: usize,
    start: usize,
    acc: &BitVector,
    support: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if remaining == 0 {
        return acc.is_zero().then(|| support.clone());
    }
    for j in start..=columns.len().saturating_sub(remaining) {
        let next = acc.xor(&columns[j]);
        support.push(j);
        if let Some(found) = first_zero_sum(columns, remaining - 1, j + 1, &next, support) {
            return Some(found);
        }
        support.pop();
    }
    None
}

/// A minimum-weight `x` with `A x = y` and `‖x‖₀ ≤ kmax`, or `None`.
///
/// The search branches on an unsatisfied row, choosing which of its
/// available columns is the first one used, so each solution is reached on
/// one path only. It is pruned by the best weight found so far and by a
/// covering bound, and every visited node counts against `budget`.
pub fn mld_exact(
    a: &BitMatrix,
    y: &BitVector,
    kmax: usize,
    budget: Budget,
) -> Result<Option<BitVector>> {
    if y.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "target of length {} for a matrix with {} rows",
            y.len(),
            a.rows()
        )));
    }
    if a.solve(y).is_none() {
        return Ok(None);
    }
    let mut search = MldSearch {
        columns: a.columns(),
        rows: a.row_vectors().to_vec(),
        limit: kmax.min(a.cols()),
        best: None,
        meter: budget.meter("minimum-weight decoding search"),
    };
    let mut chosen = BitVector::zeros(a.cols());
    search.descend(y, &BitVector::all_ones(a.cols()), &mut chosen, 0)?;
    Ok(search.best.map(|(_, x)| x))
}

struct MldSearch {
    columns: Vec<BitVector>,
    rows: Vec<BitVector>,
    limit: usize,
    best: Option<(usize, BitVector)>,
    meter: crate::budget::Meter,
}

impl MldSearch {
    fn cap(&self) -> Option<usize> {
        match &self.best {
            None => Some(self.limit),
            Some((w, _)) => w.checked_sub(1).map(|c| c.min(self.limit)),
        }
    }

    fn descend(
        &mut self,
        residual: &BitVector,
        available: &BitVector,
        chosen: &mut BitVector,
        depth: usize,
    ) -> Result<()> {
        self.meter.tick()?;
        if residual.is_zero() {
            if self.best.as_ref().is_none_or(|(w, _)| depth < *w) {
                self.best = Some((depth, chosen.clone()));
            }
            return Ok(());
        }
        let Some(cap) = self.cap() else {
            return Ok(());
        };
        if depth >= cap {
            return Ok(());
        }
        let unsatisfied = residual.weight();
        let reach = available
            .ones()
            .map(|j| self.columns[j].and_weight(residual))
            .max()
            .unwrap_or(0);
        if reach == 0 || depth + unsatisfied.div_ceil(reach) > cap {
            return Ok(());
        }
        let branch_row = residual
            .ones()
            .min_by_key(|&i| self.rows[i].and_weight(available))
            .expect("residual is nonzero");
        let candidates: Vec<usize> = self.rows[branch_row].and(available).ones().collect();
        let mut remaining = available.clone();
        for j in candidates {
            remaining.set(j, false);
            let next = residual.xor(&self.columns[j]);
            chosen.set(j, true);
            self.descend(&next, &remaining, chosen, depth + 1)?;
            chosen.set(j, false);
            if self.cap().is_none_or(|c| depth >= c) {
                break;
            }
        }
        Ok(())
    }
}

/// Three-way decision for a sparse nearest codeword instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SncDecision {
    /// Some `x` of weight at most `k` has `‖Ax − y‖₀ ≤ k`.
    Yes(BitVector),
    /// Every `x` has `‖Ax − y‖₀ > γk`.
    No,
    /// Neither side of the promise holds.
    Neither,
}

/// Exact SNC decision. Small message lengths are scanned in full; larger
/// ones enumerate the weight-`k` ball for the YES side and decode the
/// syndrome of `y` for the NO side.
pub fn snc_exact(
    a: &BitMatrix,
    y: &BitVector,
    k: usize,
    gamma: &Rational,
    budget: Budget,
) -> Result<SncDecision> {
    if y.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "target of length {} for a matrix with {} rows",
            y.len(),
            a.rows()
        )));
    }
    let threshold = crate::ratio::floor_u64(&(gamma * Rational::from_integer(k.into())))? as usize;
    let m = a.cols();
    if m <= FULL_ENUMERATION_LIMIT && (1u128 << m) <= budget.limit() as u128 {
        Ok(snc_full_scan(a, y, k, threshold))
    } else {
        snc_sparse(a, y, k, threshold, budget)
    }
}

fn snc_full_scan(a: &BitMatrix, y: &BitVector, k: usize, threshold: usize) -> SncDecision {
    let m = a.cols();
    let columns = a.columns();
    let mut image = BitVector::zeros(a.rows());
    let mut nearest = y.weight();
    let mut witness: Option<BitVector> = (nearest <= k).then(|| BitVector::zeros(m));
    gray_walk(m, |bit, x| {
        image.xor_assign(&columns[bit]);
        let dist = image.distance(y);
        nearest = nearest.min(dist);
        if dist <= k
            && x.weight() <= k
            && witness.as_ref().is_none_or(|w| x.weight_then_support_cmp(w).is_lt())
        {
            witness = Some(x.clone());
        }
    });
    match witness {
        Some(w) => SncDecision::Yes(w),
        None if nearest > threshold => SncDecision::No,
        None => SncDecision::Neither,
    }
}

fn snc_sparse(
    a: &BitMatrix,
    y: &BitVector,
    k: usize,
    threshold: usize,
    budget: Budget,
) -> Result<SncDecision> {
    let m = a.cols();
    budget.check("sparse ball enumeration", ball_size(m as u64, k as u64))?;
    let columns = a.columns();
    for w in 0..=k.min(m) {
        let mut support = Vec::with_capacity(w);
        if let Some(found) = first_near(&columns, k, w, 0, y, &mut support) {
            return Ok(SncDecision::Yes(BitVector::from_support(m, &found)));
        }
    }
    let parity = BitMatrix::from_rows(a.rows(), a.left_nullspace()).expect("dual rows fit");
    let syndrome = parity.mul_vec(y);
    let decoded = mld_exact(&parity, &syndrome, threshold, budget)?;
    Ok(if decoded.is_some() {
        SncDecision::Neither
    } else {
        SncDecision::No
    })
}

fn first_near(
    columns: &[BitVector],
    k: usize,
    remaining: usize,
    start: usize,
    residual: &BitVector,
    support: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if remaining == 0 {
        return (residual.weight() <= k).then(|| support.clone());
    }
    for j in start..=columns.len().saturating_sub(remaining) {
        let next = residual.xor(&columns[j]);
        support.push(j);
        if let Some(found) = first_near(columns, k, remaining - 1, j + 1, &next, support) {
            return Some(found);
        }
        support.pop();
    }
    None
}
