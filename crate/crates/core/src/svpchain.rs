//! The integer chain: 2CSP to lattice vector sum (LVS), LVS composition and
//! amplification, LVS to sparse nearest vector (SNVP), the BCH lattice with
//! its center sampler, and the intermediate and final SVP lattices.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::RngCore;

use crate::budget::Budget;
use crate::csp::Csp2Instance;
use crate::error::{Error, Result};
use crate::gf2::{gray_walk, BitMatrix, BitVector};
use crate::gf2codes::bch_parity_check;
use crate::latticecore::{tensor_lattice, LvsInstance, SnvpInstance, SvpInstance};
use crate::mldchain::{snc_copies, CspLayout};
use crate::{ratio, IntMatrix, IntVector, Rational};

/// CSP-to-LVS output with the column layout used for witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LvsReduction {
    pub instance: LvsInstance,
    pub layout: CspLayout,
    /// `1 + ε/3`.
    pub gap: Rational,
}

/// Same layout as the GF(2) construction with the edge entries of the
/// consistency rows set to `−1`, so consistency rows read
/// `x_(u_b,σ) − Σ x_(e,σ₀,σ₁) = 0` over the integers.
pub fn csp_to_lvs(gamma: &Csp2Instance, eps: &Rational) -> Result<LvsReduction> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("ε must be positive".into()));
    }
    let layout = CspLayout::build(gamma)?;
    let mut a = IntMatrix::zeros(layout.rows.len(), layout.columns.len());
    for &(r, c, negative) in &layout.entries {
        a.set(r, c, if negative { -BigInt::one() } else { BigInt::one() });
    }
    let y: IntVector = (0..layout.rows.len())
        .map(|r| BigInt::from((r < layout.unit_rows) as u8))
        .collect();
    let k = gamma.vertices() + gamma.edges().len();
    Ok(LvsReduction {
        instance: LvsInstance::new(a, y, k)?,
        layout,
        gap: Rational::one() + eps / ratio::int(3),
    })
}

impl LvsReduction {
    pub fn lift(&self, gamma: &Csp2Instance, psi: &[u32]) -> Result<IntVector> {
        Ok(self
            .layout
            .lift(gamma, psi)?
            .into_iter()
            .map(|b| BigInt::from(b as u8))
            .collect())
    }
}

/// `(A, z, k₁) ⊕ (B, z′, k₂)` over the integers: row block `[B | 0]`, then for
/// each column `i` of `B` a block with `−z` in column `i` and `A` on the
/// `i`-th column block. Target `z′ ∘ 0`, parameter `k₂ + k₁k₂`.
pub fn lvs_compose(i1: &LvsInstance, i2: &LvsInstance) -> Result<LvsInstance> {
    let (u, v) = (i1.a.rows(), i1.a.cols());
    let (u2, v2) = (i2.a.rows(), i2.a.cols());
    let mut c = IntMatrix::zeros(u2 + u * v2, v2 + v * v2);
    for r in 0..u2 {
        for j in 0..v2 {
            c.set(r, j, i2.a.get(r, j).clone());
        }
    }
    for block in 0..v2 {
        let row0 = u2 + block * u;
        let col0 = v2 + block * v;
        for r in 0..u {
            if !i1.y[r].is_zero() {
                c.set(row0 + r, block, -i1.y[r].clone());
            }
            for j in 0..v {
                let entry = i1.a.get(r, j);
                if !entry.is_zero() {
                    c.set(row0 + r, col0 + j, entry.clone());
                }
            }
        }
    }
    let mut w = i2.y.clone();
    w.extend(std::iter::repeat_n(BigInt::zero(), u * v2));
    LvsInstance::new(c, w, i2.k + i1.k * i2.k)
}

/// `x⁰ = x₂` and `xⁱ = x⁰ᵢ · x₁`.
pub fn lvs_compose_witness(x1: &[BigInt], x2: &[BigInt]) -> IntVector {
    let mut x = x2.to_vec();
    for coefficient in x2 {
        x.extend(x1.iter().map(|v| v * coefficient));
    }
    x
}

/// Largest composite, in matrix entries, that [`lvs_amplify`] will build.
pub const LVS_ENTRY_LIMIT: u128 = 1 << 26;

/// `A⁽¹⁾ = A` and `A⁽ʲ⁾ = A ⊕ A⁽ʲ⁻¹⁾` up to `j = ⌈3c/2⌉`, taking the gap
/// from `η` to `η^c`. The parameter becomes `k(k+1)^{j−1}`.
pub fn lvs_amplify(i: &LvsInstance, c: u32) -> Result<LvsInstance> {
    let levels = (3 * c).div_ceil(2).max(1);
    let mut current = i.clone();
    for _ in 1..levels {
        let rows = current.a.rows() as u128 + (i.a.rows() * current.a.cols()) as u128;
        let cols = (current.a.cols() as u128) * (1 + i.a.cols() as u128);
        if rows.saturating_mul(cols) > LVS_ENTRY_LIMIT {
            return Err(Error::too_large(
                "composite lattice instance",
                format!("{rows}x{cols} entries"),
                LVS_ENTRY_LIMIT as u64,
            ));
        }
        current = lvs_compose(i, &current)?;
    }
    Ok(current)
}

/// `⌈ηk + 1⌉` stacked copies of `A` over `Id_m`, targets `y` over `0`, `t = k`.
pub fn lvs_to_snvp(i: &LvsInstance, eta: &Rational, p: u32) -> Result<SnvpInstance> {
    let copies = snc_copies(i.k, eta)?;
    let m = i.a.cols();
    let b = i.a.repeat_rows(copies).vstack(&IntMatrix::identity(m));
    let mut y: IntVector = Vec::with_capacity(b.rows());
    for _ in 0..copies {
        y.extend(i.y.iter().cloned());
    }
    y.extend(std::iter::repeat_n(BigInt::zero(), m));
    SnvpInstance::new(b, y, i.k, p)
}

/// `1/γ_p = 1/2 + (2^p + 1)/η + 1/2^p`.
pub fn gamma_p_inverse(p: u32, eta: &Rational) -> Rational {
    let two_p = Rational::from_integer(BigInt::one() << p as usize);
    ratio::frac(1, 2) + (&two_p + Rational::one()) / eta + Rational::one() / two_p
}

/// Parameters of the SNVP-to-SVP reduction, with optional overrides that
/// replace the astronomically large faithful values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvpChainParams {
    pub p: u32,
    pub eta: Rational,
    pub t: usize,
    /// `ηt`.
    pub l: usize,
    /// `(1/2 + 1/2^p + 1/η)·ηt`.
    pub r: usize,
    pub gamma_p: Rational,
    pub h_override: Option<BigInt>,
    pub q_override: Option<BigInt>,
    pub d_override: Option<BigInt>,
    pub rho_override: Option<BigInt>,
}

impl SvpChainParams {
    pub fn new(p: u32, eta: &Rational, t: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::WrongNorm(p));
        }
        if *eta < Rational::one() {
            return Err(Error::InfeasibleParameters("η must be at least 1".into()));
        }
        let inverse = gamma_p_inverse(p, eta);
        if inverse >= Rational::one() {
            return Err(Error::InfeasibleParameters(format!(
                "1/2 + 1/2^p + (2^p+1)/η = {} is not below 1",
                ratio::show(&inverse)
            )));
        }
        let tr = ratio::from_count(t);
        let l = eta * &tr;
        if !l.is_integer() {
            return Err(Error::InvalidParameter(format!(
                "l = ηt = {} is not integral",
                ratio::show(&l)
            )));
        }
        let two_p = Rational::from_integer(BigInt::one() << p as usize);
        let r = (ratio::frac(1, 2) + Rational::one() / two_p + Rational::one() / eta) * &l;
        if !r.is_integer() {
            return Err(Error::InvalidParameter(format!(
                "r = {} is not integral; choose (p, η, t) accordingly",
                ratio::show(&r)
            )));
        }
        Ok(SvpChainParams {
            p,
            eta: eta.clone(),
            t,
            l: ratio::floor_u64(&l)? as usize,
            r: ratio::floor_u64(&r)? as usize,
            gamma_p: Rational::one() / inverse,
            h_override: None,
            q_override: None,
            d_override: None,
            rho_override: None,
        })
    }

    /// `l^{10l}`, the default for both `Q` and `D`.
    pub fn large_scale(&self) -> BigInt {
        BigInt::from(self.l).pow(10 * self.l as u32)
    }

    pub fn final_scale(&self) -> BigInt {
        self.d_override.clone().unwrap_or_else(|| self.large_scale())
    }

    /// `2^p t + r`, which equals `γ_p^{-1}·l` unless `r` is overridden.
    pub fn final_budget(&self) -> Rational {
        ratio::from_count((self.t << self.p) + self.r)
    }

    /// Overridden `h`, or the faithful one for an `n`-row SNVP matrix.
    pub fn block_length(&self, n: usize) -> Result<BigInt> {
        match &self.h_override {
            Some(h) => Ok(h.clone()),
            None => faithful_block_length(n, self),
        }
    }
}

/// Smallest `h` with `h + 1` a power of two and
/// `h ≥ max(2^{10p+10}·n, (100l)^{100ηl})`.
pub fn faithful_block_length(n: usize, params: &SvpChainParams) -> Result<BigInt> {
    let first = (BigInt::one() << (10 * params.p as usize + 10)) * n;
    let exponent = ratio::int(100) * &params.eta * ratio::from_count(params.l);
    let (Some(num), Some(den)) = (exponent.numer().to_u32(), exponent.denom().to_u32()) else {
        return Err(Error::SizeOverflow("exponent 100ηl does not fit".into()));
    };
    let base = BigInt::from(100 * params.l);
    let power = base.pow(num);
    // h ≥ base^{num/den} ⇔ h^den ≥ base^num.
    let mut mu = power.bits().div_ceil(den as u64).max(first.bits()).max(1);
    while mu > 1 {
        let h: BigInt = (BigInt::one() << (mu - 1) as usize) - 1;
        if h >= first && h.pow(den) >= power {
            mu -= 1;
        } else {
            break;
        }
    }
    loop {
        let h: BigInt = (BigInt::one() << mu as usize) - 1;
        if h >= first && h.pow(den) >= power {
            return Ok(h);
        }
        mu += 1;
    }
}

/// `⌈(l−1)/2⌉·log₂(h+1)`; `None` unless `h + 1` is a power of two.
pub fn bch_codimension(l: usize, h: &BigInt) -> Option<BigInt> {
    let next: BigInt = h + 1u32;
    if !h.is_positive() || next.clone() & (h.clone()) != BigInt::zero() {
        return None;
    }
    let mu = next.bits() - 1;
    Some(BigInt::from(l.saturating_sub(1).div_ceil(2)) * mu)
}

/// `⌊h^r / (100·h^{l/2}·l^l)⌋`, the guaranteed number of good vectors.
pub fn good_vector_bound(h: &BigInt, l: usize, r: usize) -> BigInt {
    let numer = h.pow(r as u32);
    let base = BigInt::from(100u32) * BigInt::from(l).pow(l as u32) * h.pow((l / 2) as u32);
    if l.is_multiple_of(2) {
        return numer / base;
    }
    // ⌊X/√h⌋ = ⌊√(X²/h)⌋ with X = numer/base.
    let squared_num = &numer * &numer;
    let squared_den = &base * &base * h;
    (squared_num / squared_den).sqrt()
}

/// `⌊10⁻⁵ · N_g⌋`.
pub fn annoying_vector_bound(n_good: &BigInt) -> BigInt {
    n_good / BigInt::from(100_000u32)
}

/// Prime range `[⌈10⁻⁴N_g⌉, ⌊10⁻²N_g⌋]`.
pub fn prime_range(n_good: &BigInt) -> (BigInt, BigInt) {
    let lo = n_good.div_ceil(&BigInt::from(10_000u32));
    let hi = n_good / BigInt::from(100u32);
    (lo, hi)
}

/// A nonnegative integer known exactly or, when too large to compute, by
/// its base-2 logarithm.
#[derive(Debug, Clone, PartialEq)]
pub enum Magnitude {
    Exact(BigInt),
    Log2(f64),
}

/// Integers longer than this many bits are shown by magnitude only.
pub const EXACT_DISPLAY_BITS: u64 = 4096;

/// Largest numerator, in bits, for which `N_g` is computed exactly.
pub const EXACT_COUNT_BITS: u64 = 1 << 22;

impl Magnitude {
    pub fn exact(&self) -> Option<&BigInt> {
        match self {
            Magnitude::Exact(v) => Some(v),
            Magnitude::Log2(_) => None,
        }
    }

    pub fn log2(&self) -> f64 {
        match self {
            Magnitude::Exact(v) => log2_big(v),
            Magnitude::Log2(v) => *v,
        }
    }
}

impl std::fmt::Display for Magnitude {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Magnitude::Exact(v) => f.write_str(&show_big(v)),
            Magnitude::Log2(v) => write!(f, "~2^{v:.3}"),
        }
    }
}

/// Decimal text, or `~2^x (n bits)` past [`EXACT_DISPLAY_BITS`].
pub fn show_big(v: &BigInt) -> String {
    if v.bits() <= EXACT_DISPLAY_BITS {
        v.to_string()
    } else {
        format!("~2^{:.3} ({} bits)", log2_big(v), v.bits())
    }
}

/// `log₂ |v|` from the leading 64 bits; `−∞` for zero.
pub fn log2_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(64);
    let top = (v.abs() >> shift as usize).to_u64().unwrap_or(u64::MAX);
    (top as f64).log2() + shift as f64
}

/// Feasibility report of the faithful (or overridden) SVP reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct SvpFeasibility {
    pub n: usize,
    pub q: usize,
    pub h: BigInt,
    pub g: BigInt,
    pub intermediate_shape: (BigInt, BigInt),
    pub final_shape: (BigInt, BigInt),
    pub n_good: Magnitude,
    pub n_annoying: Magnitude,
    pub rho_range: (Magnitude, Magnitude),
    pub q_scale: BigInt,
    pub d_scale: BigInt,
    pub budget: Rational,
    /// `n ≤ h/2^{p+1}`.
    pub row_bound_holds: bool,
    /// Whether the intermediate lattice fits under [`MATERIALIZE_LIMIT`].
    pub materializable: bool,
}

pub fn feasibility_report(n: usize, q: usize, params: &SvpChainParams) -> Result<SvpFeasibility> {
    let h = params.block_length(n)?;
    let g = bch_codimension(params.l, &h).ok_or_else(|| {
        Error::InfeasibleParameters("h + 1 must be a power of two".into())
    })?;
    let exact_counts = h.bits().saturating_mul(params.r as u64) <= EXACT_COUNT_BITS;
    let (n_good, n_annoying, rho_range) = if exact_counts {
        let n_good = good_vector_bound(&h, params.l, params.r);
        let (lo, hi) = prime_range(&n_good);
        let annoying = annoying_vector_bound(&n_good);
        (
            Magnitude::Exact(n_good),
            Magnitude::Exact(annoying),
            (Magnitude::Exact(lo), Magnitude::Exact(hi)),
        )
    } else {
        let log_h = log2_big(&h);
        let l = params.l as f64;
        let log_good = (params.r as f64 - l / 2.0) * log_h - 100f64.log2() - l * l.log2();
        (
            Magnitude::Log2(log_good),
            Magnitude::Log2(log_good - 100_000f64.log2()),
            (
                Magnitude::Log2(log_good - 10_000f64.log2()),
                Magnitude::Log2(log_good - 100f64.log2()),
            ),
        )
    };
    let rows: BigInt = BigInt::from(n) + &h + &g;
    let cols: BigInt = BigInt::from(q) + &h + &g + 1u32;
    let materializable = &rows * &cols <= BigInt::from(MATERIALIZE_LIMIT);
    Ok(SvpFeasibility {
        n,
        q,
        intermediate_shape: (rows.clone(), cols.clone()),
        final_shape: (rows + 1u32, cols + 1u32),
        n_annoying,
        rho_range,
        q_scale: params.q_override.clone().unwrap_or_else(|| params.large_scale()),
        d_scale: params.final_scale(),
        budget: params.final_budget(),
        row_bound_holds: BigInt::from(n) << (params.p as usize + 1) <= h,
        materializable,
        h,
        g,
        n_good,
    })
}

/// `[[I_h, 0], [Q·P, 2Q·I_g]]` for the BCH parity check `P` of designed
/// distance `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BchLatticeGadget {
    pub basis: IntMatrix,
    pub h: usize,
    pub g: usize,
    pub l: usize,
    pub q_scale: BigInt,
    pub parity: BitMatrix,
}

pub fn bch_lattice(l: usize, h: usize, q_override: Option<BigInt>) -> Result<BchLatticeGadget> {
    if h == 0 || !(h + 1).is_power_of_two() {
        return Err(Error::InfeasibleParameters(format!(
            "h + 1 = {} is not a power of two",
            h + 1
        )));
    }
    let mu = (h + 1).trailing_zeros() as usize;
    let g = l.saturating_sub(1).div_ceil(2) * mu;
    if g == 0 || g + 1 > h || l > h {
        return Err(Error::InfeasibleParameters(format!(
            "no [{h}, {h} − g, {l}] BCH code with g = {g}"
        )));
    }
    let parity = bch_parity_check(h, l)?;
    debug_assert_eq!(parity.rows(), g);
    let q_scale = q_override.unwrap_or_else(|| BigInt::from(l).pow(10 * l as u32));
    let two_q: BigInt = &q_scale * 2u32;
    let scaled_parity = IntMatrix::from_bits(&parity).scale(&q_scale);
    let basis = IntMatrix::blocks(&[
        vec![IntMatrix::identity(h), IntMatrix::zeros(h, g)],
        vec![scaled_parity, IntMatrix::identity(g).scale(&two_q)],
    ]);
    Ok(BchLatticeGadget {
        basis,
        h,
        g,
        l,
        q_scale,
        parity,
    })
}

/// Center `s = s₁ ∘ 0^g` and, when enumerable, its number of good vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterSample {
    pub s: IntVector,
    pub prefix: BitVector,
    pub good_count: Option<u64>,
}

/// Largest code dimension for which good vectors are counted.
pub const GOOD_COUNT_DIMENSION_LIMIT: usize = 20;

impl BchLatticeGadget {
    /// Basis of the binary code with parity check `P`.
    pub fn code_basis(&self) -> Vec<BitVector> {
        self.parity.nullspace()
    }

    /// All codewords, packed into `u64` words.
    pub fn codewords(&self, budget: Budget) -> Result<Vec<u64>> {
        if self.h > 64 {
            return Err(Error::too_large("codeword list", format!("length {}", self.h), 64));
        }
        let basis = self.code_basis();
        let count = 1u128.checked_shl(basis.len() as u32).unwrap_or(u128::MAX);
        budget.check("BCH codewords", count)?;
        let words: Vec<u64> = basis.iter().map(BitVector::to_u64).collect();
        let mut out = vec![0u64];
        let mut current = 0u64;
        gray_walk(basis.len(), |bit, _| {
            current ^= words[bit];
            out.push(current);
        });
        Ok(out)
    }

    /// Number of codewords at Hamming distance exactly `r` from `prefix`.
    pub fn good_count(&self, prefix: &BitVector, r: usize, budget: Budget) -> Result<u64> {
        let s = prefix.to_u64();
        Ok(self
            .codewords(budget)?
            .iter()
            .filter(|&&c| (c ^ s).count_ones() as usize == r)
            .count() as u64)
    }

    /// Coefficient vectors `z` with `B z − s ∈ {0,1}^{h+g}` of weight exactly
    /// `r`: for a codeword `c` at distance `r`, `z₁ = s₁ + (c ⊕ s₁)` and
    /// `z₂ = −P z₁ / 2`.
    pub fn good_coefficients(&self, prefix: &BitVector, r: usize, budget: Budget) -> Result<Vec<IntVector>> {
        let s = prefix.to_u64();
        let parity = IntMatrix::from_bits(&self.parity);
        let mut out = Vec::new();
        for c in self.codewords(budget)? {
            if ((c ^ s).count_ones() as usize) != r {
                continue;
            }
            let z1: IntVector = (0..self.h)
                .map(|i| BigInt::from((s >> i & 1) + ((c ^ s) >> i & 1)))
                .collect();
            let z2: IntVector = parity.mul_vec(&z1).into_iter().map(|v: BigInt| -(v / BigInt::from(2u32))).collect();
            let mut z = z1;
            z.extend(z2);
            out.push(z);
        }
        Ok(out)
    }
}

/// `s₁` uniform in `{0,1}^h`, `s = s₁ ∘ 0^g`.
pub fn bch_center_sample(g: &BchLatticeGadget, r: usize, rng: &mut dyn RngCore) -> CenterSample {
    let prefix = BitVector::from_bools((0..g.h).map(|_| rng.next_u32() & 1 == 1));
    let mut s: IntVector = prefix.iter().map(|b| BigInt::from(b as u8)).collect();
    s.extend(std::iter::repeat_n(BigInt::zero(), g.g));
    let dimension = g.h - g.parity.rank();
    let good_count = (dimension <= GOOD_COUNT_DIMENSION_LIMIT && r <= g.h)
        .then(|| g.good_count(&prefix, r, Budget::DEFAULT).ok())
        .flatten();
    CenterSample {
        s,
        prefix,
        good_count,
    }
}

/// `⌈(1/100)·2^{−g}·C(h, r)⌉` as a rational threshold for good counts.
pub fn good_count_threshold(g: &BchLatticeGadget, r: usize) -> Rational {
    let binom = crate::budget::binomial(g.h as u64, r as u64);
    Rational::new(BigInt::from(binom), BigInt::from(100u32) << g.g)
}

/// Largest intermediate lattice, in entries, that will be materialized.
pub const MATERIALIZE_LIMIT: u128 = 1 << 24;

/// `[[2B, 0, 2y], [0, B_BCH, s]]`.
pub fn intermediate_lattice(
    i: &SnvpInstance,
    params: &SvpChainParams,
    bch: &BchLatticeGadget,
    center: &[BigInt],
) -> Result<IntMatrix> {
    let (n, q) = (i.b.rows(), i.b.cols());
    let size = bch.h + bch.g;
    if center.len() != size {
        return Err(Error::DimensionMismatch(format!(
            "center of length {} for a BCH lattice of dimension {size}",
            center.len()
        )));
    }
    if bch.l != params.l {
        return Err(Error::InvalidParameter(format!(
            "BCH lattice built for l = {}, parameters have l = {}",
            bch.l, params.l
        )));
    }
    if (n as u128) << (params.p + 1) > bch.h as u128 {
        return Err(Error::InfeasibleParameters(format!(
            "n = {n} exceeds h/2^(p+1) for h = {}",
            bch.h
        )));
    }
    let entries = ((n + size) as u128) * ((q + size + 1) as u128);
    if entries > MATERIALIZE_LIMIT {
        return Err(Error::SizeOverflow(format!("{entries} intermediate entries")));
    }
    let two = BigInt::from(2u32);
    let column = |v: &[BigInt]| IntMatrix::from_rows(1, v.iter().map(|x| vec![x.clone()]).collect())
        .expect("single column");
    let two_y: IntVector = i.y.iter().map(|v| v * &two).collect();
    Ok(IntMatrix::blocks(&[
        vec![i.b.scale(&two), IntMatrix::zeros(n, size), column(&two_y)],
        vec![IntMatrix::zeros(size, q), bch.basis.clone(), column(center)],
    ]))
}

/// Final lattice with its random constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalLattice {
    pub instance: SvpInstance,
    pub rho: BigInt,
    pub mix_row: IntVector,
    pub scale: BigInt,
}

/// `[[B_int, 0], [D·r·B_int, D·ρ]]` with `ρ` prime in the good-vector range
/// (or overridden) and `r` uniform in `[0, ρ−1]^{rows}`. The budget is the
/// exact rational `γ_p^{-1}·l`.
pub fn final_lattice(
    b_int: &IntMatrix,
    params: &SvpChainParams,
    n_good: &BigInt,
    rng: &mut dyn RngCore,
) -> Result<FinalLattice> {
    let entries = ((b_int.rows() + 1) as u128) * ((b_int.cols() + 1) as u128);
    if entries > MATERIALIZE_LIMIT {
        return Err(Error::SizeOverflow(format!("{entries} final entries")));
    }
    let mut rng = RngAdapter(rng);
    let rho = match &params.rho_override {
        Some(rho) => rho.clone(),
        None => {
            let (lo, hi) = prime_range(n_good);
            sample_prime(&lo, &hi, &mut rng)?
        }
    };
    if rho < BigInt::from(3u32) {
        return Err(Error::InfeasibleParameters("ρ must exceed 2".into()));
    }
    let mix_row: IntVector = (0..b_int.rows())
        .map(|_| rng.gen_bigint_range(&BigInt::zero(), &rho))
        .collect();
    let scale = params.final_scale();
    let row = IntMatrix::from_rows(b_int.rows(), vec![mix_row.clone()]).expect("row length");
    let constraint = row.mul(b_int).scale(&scale);
    let corner = IntMatrix::from_rows(1, vec![vec![&scale * &rho]]).expect("1x1");
    let basis = IntMatrix::blocks(&[
        vec![b_int.clone(), IntMatrix::zeros(b_int.rows(), 1)],
        vec![constraint, corner],
    ]);
    Ok(FinalLattice {
        instance: SvpInstance::new(basis, params.final_budget(), params.p)?,
        rho,
        mix_row,
        scale,
    })
}

impl FinalLattice {
    /// `x ∘ u` with `r·B_int·x = −u·ρ`, when the constraint vanishes mod `ρ`.
    pub fn lift_witness(&self, b_int: &IntMatrix, x: &[BigInt]) -> Option<IntVector> {
        let value: BigInt = self
            .mix_row
            .iter()
            .zip(b_int.mul_vec(x))
            .map(|(a, b)| a * b)
            .sum();
        let (u, rem) = value.div_rem(&self.rho);
        if !rem.is_zero() {
            return None;
        }
        let mut out = x.to_vec();
        out.push(-u);
        Some(out)
    }
}

/// Adapts a `dyn RngCore` for the `rand` extension traits.
struct RngAdapter<'a>(&'a mut dyn RngCore);

impl RngCore for RngAdapter<'_> {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}

/// Bases that make Miller–Rabin deterministic below 3.3·10²⁴; above that
/// the test is probabilistic with error below 4^{−13}.
const WITNESS_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &WITNESS_BASES {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let minus_one = n - &one;
    let shift = minus_one.trailing_zeros().unwrap_or(0);
    let odd = &minus_one >> shift as usize;
    'bases: for &a in &WITNESS_BASES {
        let mut x = BigInt::from(a).modpow(&odd, n);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..shift {
            x = x.modpow(&two, n);
            if x == minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Rejection-samples a prime uniformly from `[lo, hi]`.
pub fn sample_prime<R: RngCore>(lo: &BigInt, hi: &BigInt, rng: &mut R) -> Result<BigInt> {
    if lo > hi {
        return Err(Error::InfeasibleParameters(format!(
            "prime range [{lo}, {hi}] is empty"
        )));
    }
    let upper = hi + 1u32;
    let attempts = 64 * (hi.bits() as usize + 1);
    for _ in 0..attempts {
        let candidate = rng.gen_bigint_range(lo, &upper);
        if is_probable_prime(&candidate) {
            return Ok(candidate);
        }
    }
    Err(Error::InfeasibleParameters(format!(
        "no prime found in [{lo}, {hi}] after {attempts} samples"
    )))
}

/// Tensor square of an ℓ₂ SVP instance with squared YES budget and squared
/// NO bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmplifiedSvp {
    pub instance: SvpInstance,
    pub no_bound_pp: Rational,
}

pub fn svp_amplify_l2(i: &SvpInstance, no_bound_pp: &Rational) -> Result<AmplifiedSvp> {
    if i.p != 2 {
        return Err(Error::WrongNorm(i.p));
    }
    let basis = tensor_lattice(&i.b, &i.b);
    Ok(AmplifiedSvp {
        instance: SvpInstance::new(basis, &i.k_pp * &i.k_pp, 2)?,
        no_bound_pp: no_bound_pp * no_bound_pp,
    })
}

/// Which condition of the annoying-vector definition a lattice vector meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorClass {
    /// Hamming weight at least `l`.
    Heavy,
    /// All even with Hamming weight at least `l/2^p`.
    EvenHeavy,
    /// All even with a coordinate of magnitude at least the large scale.
    EvenLarge,
    /// None of the above.
    Annoying,
}

pub fn classify_vector(z: &[BigInt], l: usize, p: u32, large: &BigInt) -> VectorClass {
    let weight = z.iter().filter(|v| !v.is_zero()).count();
    if weight >= l {
        return VectorClass::Heavy;
    }
    let even = z.iter().all(|v| v.is_even());
    if even && (weight as u128) << p >= l as u128 {
        return VectorClass::EvenHeavy;
    }
    if even && z.iter().any(|v| v.abs() >= *large) {
        return VectorClass::EvenLarge;
    }
    VectorClass::Annoying
}
