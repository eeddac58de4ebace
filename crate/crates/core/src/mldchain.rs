//! The GF(2) chain: 2CSP to minimum-weight decoding (MLD), the composition
//! operator and its gap amplification, and MLD to sparse nearest codeword.

use log::warn;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::csp::{Assignment, Csp2Instance};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::ratio;
use crate::Rational;

/// `A x = y` with `‖x‖₀ ≤ k` over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MldInstance {
    pub a: BitMatrix,
    pub y: BitVector,
    pub k: usize,
}

impl MldInstance {
    pub fn new(a: BitMatrix, y: BitVector, k: usize) -> Result<Self> {
        if y.len() != a.rows() {
            return Err(Error::DimensionMismatch(format!(
                "target of length {} for {} rows",
                y.len(),
                a.rows()
            )));
        }
        if k > a.cols() {
            return Err(Error::InvalidInstance(format!(
                "parameter {k} exceeds {} columns",
                a.cols()
            )));
        }
        Ok(MldInstance { a, y, k })
    }

    /// A trivially unsolvable instance: the single zero column against `(1)`.
    pub fn canonical_no() -> Self {
        MldInstance {
            a: BitMatrix::zeros(1, 1),
            y: BitVector::all_ones(1),
            k: 1,
        }
    }

    pub fn is_solution(&self, x: &BitVector) -> bool {
        x.len() == self.a.cols() && self.a.mul_vec(x) == self.y
    }
}

/// Sparse nearest codeword: some `x` with `‖x‖₀ ≤ k` and `‖Ax − y‖₀ ≤ k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SncInstance {
    pub a: BitMatrix,
    pub y: BitVector,
    pub k: usize,
}

impl SncInstance {
    pub fn new(a: BitMatrix, y: BitVector, k: usize) -> Result<Self> {
        if y.len() != a.rows() {
            return Err(Error::DimensionMismatch(format!(
                "target of length {} for {} rows",
                y.len(),
                a.rows()
            )));
        }
        Ok(SncInstance { a, y, k })
    }

    pub fn residual_weight(&self, x: &BitVector) -> usize {
        self.a.mul_vec(x).distance(&self.y)
    }
}

/// Column of the CSP matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColumnLabel {
    /// Vertex `vertex` takes label `label`.
    Vertex { vertex: usize, label: u32 },
    /// Edge `edge` takes the allowed pair `(left, right)`.
    Edge { edge: usize, left: u32, right: u32 },
}

/// Row of the CSP matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowLabel {
    /// Exactly one label per vertex.
    Vertex { vertex: usize },
    /// Exactly one allowed pair per edge.
    Edge { edge: usize },
    /// Edge pairs agree with the label of endpoint `side` (0 = tail).
    Consistency { edge: usize, label: u32, side: u8 },
}

/// Matrix layout shared by the GF(2) and the integer constructions. Each
/// entry carries a sign: vertex columns enter consistency rows positively,
/// edge columns negatively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspLayout {
    pub columns: Vec<ColumnLabel>,
    pub rows: Vec<RowLabel>,
    /// `(row, column, negative)` for every nonzero entry.
    pub entries: Vec<(usize, usize, bool)>,
    /// Number of rows whose target is 1; these come first.
    pub unit_rows: usize,
}

impl CspLayout {
    pub fn build(gamma: &Csp2Instance) -> Result<Self> {
        if let Some(edge) = gamma.edges().iter().position(|e| e.allowed().is_empty()) {
            return Err(Error::EmptyConstraint { edge });
        }
        let sigma = gamma.alphabet_size();
        let mut columns = Vec::new();
        for vertex in 0..gamma.vertices() {
            for label in 0..sigma {
                columns.push(ColumnLabel::Vertex { vertex, label });
            }
        }
        let mut edge_offsets = Vec::with_capacity(gamma.edges().len());
        for (edge, e) in gamma.edges().iter().enumerate() {
            edge_offsets.push(columns.len());
            for &(left, right) in e.allowed() {
                columns.push(ColumnLabel::Edge { edge, left, right });
            }
        }
        let mut rows = Vec::new();
        let mut entries = Vec::new();
        let vertex_col = |v: usize, s: u32| v * sigma as usize + s as usize;
        for vertex in 0..gamma.vertices() {
            let r = rows.len();
            rows.push(RowLabel::Vertex { vertex });
            for label in 0..sigma {
                entries.push((r, vertex_col(vertex, label), false));
            }
        }
        for (edge, e) in gamma.edges().iter().enumerate() {
            let r = rows.len();
            rows.push(RowLabel::Edge { edge });
            for i in 0..e.allowed().len() {
                entries.push((r, edge_offsets[edge] + i, false));
            }
        }
        let unit_rows = rows.len();
        for (edge, e) in gamma.edges().iter().enumerate() {
            for label in 0..sigma {
                for side in 0..2u8 {
                    let r = rows.len();
                    rows.push(RowLabel::Consistency { edge, label, side });
                    let endpoint = if side == 0 { e.from } else { e.to };
                    entries.push((r, vertex_col(endpoint, label), false));
                    for (i, &(left, right)) in e.allowed().iter().enumerate() {
                        let matches = if side == 0 { left == label } else { right == label };
                        if matches {
                            entries.push((r, edge_offsets[edge] + i, true));
                        }
                    }
                }
            }
        }
        Ok(CspLayout {
            columns,
            rows,
            entries,
            unit_rows,
        })
    }

    /// The 0/1 indicator of the canonical witness for `psi`.
    pub fn lift(&self, gamma: &Csp2Instance, psi: &[u32]) -> Result<Vec<bool>> {
        if psi.len() != gamma.vertices() {
            return Err(Error::DimensionMismatch(format!(
                "assignment of length {} for {} vertices",
                psi.len(),
                gamma.vertices()
            )));
        }
        if let Some(edge) = gamma.first_violated(psi) {
            return Err(Error::NotSatisfying { edge });
        }
        Ok(self
            .columns
            .iter()
            .map(|c| match *c {
                ColumnLabel::Vertex { vertex, label } => psi[vertex] == label,
                ColumnLabel::Edge { edge, left, right } => {
                    let e = &gamma.edges()[edge];
                    psi[e.from] == left && psi[e.to] == right
                }
            })
            .collect())
    }

    /// Least label `σ` with a nonzero `(u, σ)` coordinate, per vertex.
    pub fn lower<F: Fn(usize) -> bool>(&self, vertices: usize, nonzero: F) -> Option<Assignment> {
        let mut psi: Vec<Option<u32>> = vec![None; vertices];
        for (j, c) in self.columns.iter().enumerate() {
            if let ColumnLabel::Vertex { vertex, label } = *c {
                if nonzero(j) && psi[vertex].is_none() {
                    psi[vertex] = Some(label);
                }
            }
        }
        psi.into_iter().collect()
    }
}

/// The CSP-to-MLD reduction output with its labels and claimed gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MldReduction {
    pub instance: MldInstance,
    pub layout: CspLayout,
    /// `1 + ε/3`.
    pub gap: Rational,
}

/// Builds `A` with vertex, edge and consistency row families and target
/// `1^{|V|+|E|} ∘ 0^{2|E||Σ|}`, parameter `k = |V| + |E|`.
pub fn csp_to_mld(gamma: &Csp2Instance, eps: &Rational) -> Result<MldReduction> {
    if *eps <= Rational::zero() {
        return Err(Error::InvalidParameter("ε must be positive".into()));
    }
    let layout = CspLayout::build(gamma)?;
    let mut a = BitMatrix::zeros(layout.rows.len(), layout.columns.len());
    for &(r, c, _) in &layout.entries {
        a.set(r, c, true);
    }
    let mut y = BitVector::zeros(layout.rows.len());
    for r in 0..layout.unit_rows {
        y.set(r, true);
    }
    let k = gamma.vertices() + gamma.edges().len();
    Ok(MldReduction {
        instance: MldInstance { a, y, k },
        layout,
        gap: Rational::one() + eps / ratio::int(3),
    })
}

/// Like [`csp_to_mld`], but an empty constraint set yields
/// [`MldInstance::canonical_no`] with a warning.
pub fn csp_to_mld_or_canonical(gamma: &Csp2Instance, eps: &Rational) -> Result<MldInstance> {
    match csp_to_mld(gamma, eps) {
        Ok(r) => Ok(r.instance),
        Err(Error::EmptyConstraint { edge }) => {
            warn!("edge {edge} admits no label pair; emitting the canonical NO instance");
            Ok(MldInstance::canonical_no())
        }
        Err(e) => Err(e),
    }
}

impl MldReduction {
    /// The weight-`(|V|+|E|)` solution encoding a satisfying assignment.
    pub fn lift(&self, gamma: &Csp2Instance, psi: &[u32]) -> Result<BitVector> {
        Ok(BitVector::from_bools(self.layout.lift(gamma, psi)?))
    }

    /// Reads an assignment back from a solution, with its exact value.
    pub fn lower(&self, gamma: &Csp2Instance, x: &BitVector) -> Result<(Assignment, Rational)> {
        if !self.instance.is_solution(x) {
            return Err(Error::NotASolution);
        }
        let psi = self
            .layout
            .lower(gamma.vertices(), |j| x.get(j))
            .ok_or(Error::NotASolution)?;
        let value = gamma.value_of(&psi);
        Ok((psi, value))
    }
}

pub fn witness_lift(gamma: &Csp2Instance, psi: &[u32], labels: &MldReduction) -> Result<BitVector> {
    labels.lift(gamma, psi)
}

pub fn witness_lower(
    x: &BitVector,
    labels: &MldReduction,
    gamma: &Csp2Instance,
) -> Result<(Assignment, Rational)> {
    labels.lower(gamma, x)
}

/// `(A, z, k₁) ⊕ (B, z′, k₂)`: row block `S₀ = [B | 0]`, and for each column
/// `i` of `B` a row block with `z` in column `i` and `A` on the `i`-th column
/// block. The target is `z′ ∘ 0` and the parameter `k₂(k₁ + 1)`.
pub fn compose(i1: &MldInstance, i2: &MldInstance) -> Result<MldInstance> {
    if i1.y.is_zero() || i2.y.is_zero() {
        return Err(Error::ZeroTarget);
    }
    let (u, v) = (i1.a.rows(), i1.a.cols());
    let (u2, v2) = (i2.a.rows(), i2.a.cols());
    let mut c = BitMatrix::zeros(u2 + u * v2, v2 + v * v2);
    for r in 0..u2 {
        for j in i2.a.row(r).ones() {
            c.set(r, j, true);
        }
    }
    for block in 0..v2 {
        let row0 = u2 + block * u;
        let col0 = v2 + block * v;
        for r in 0..u {
            if i1.y.get(r) {
                c.set(row0 + r, block, true);
            }
            for j in i1.a.row(r).ones() {
                c.set(row0 + r, col0 + j, true);
            }
        }
    }
    let w = i2.y.concat(&BitVector::zeros(u * v2));
    Ok(MldInstance {
        a: c,
        y: w,
        k: i2.k * (i1.k + 1),
    })
}

/// Composite witness: `x⁰ = x₂` and `xⁱ = x⁰ᵢ · x₁`.
pub fn compose_witness(x1: &BitVector, x2: &BitVector) -> BitVector {
    let mut x = x2.clone();
    for i in 0..x2.len() {
        x = x.concat(&if x2.get(i) {
            x1.clone()
        } else {
            BitVector::zeros(x1.len())
        });
    }
    x
}

/// Claimed state after each composition step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmplifyStep {
    pub k: usize,
    /// The gap is `γ^{gap_exponent}`.
    pub gap_exponent: Rational,
    /// Solutions of a NO instance are heavier than this.
    pub no_threshold: Rational,
    /// `no_threshold / k`, the gap actually certified by the composition.
    pub effective_gap: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amplified {
    pub instance: MldInstance,
    pub steps: Vec<AmplifyStep>,
}

/// Checks `k ≥ 1/(γ^η − 1)` for `η = a/b` by comparing `γ^a ≥ (1 + 1/k)^b`.
pub fn amplification_precondition(k: usize, gamma: &Rational, slack: &Rational) -> bool {
    if k == 0 || *gamma <= Rational::one() {
        return false;
    }
    let (Some(a), Some(b)) = (to_u32(slack.numer()), to_u32(slack.denom())) else {
        return false;
    };
    let lhs = ratio::pow(gamma, a);
    let rhs = ratio::pow(&(Rational::one() + Rational::new(BigInt::one(), k.into())), b);
    lhs >= rhs
}

fn to_u32(n: &BigInt) -> Option<u32> {
    u32::try_from(n).ok()
}

/// Largest composite size, in matrix entries, that [`amplify`] will build.
pub const AMPLIFY_ENTRY_LIMIT: u128 = 1 << 28;

/// Self-composes until the claimed gap `γ^{(2−η)^s}` reaches the target,
/// where `η` is the amplification slack.
pub fn amplify(
    i: &MldInstance,
    gamma: &Rational,
    target_gamma: &Rational,
    amplification_slack: &Rational,
) -> Result<Amplified> {
    let slack = amplification_slack;
    if *slack <= Rational::zero() || *slack >= ratio::int(2) {
        return Err(Error::InvalidParameter(
            "amplification slack must lie in (0, 2)".into(),
        ));
    }
    let growth = ratio::int(2) - slack;
    let mut current = i.clone();
    let mut exponent = Rational::one();
    let mut threshold = gamma * Rational::from_integer(i.k.into());
    let mut steps = Vec::new();
    let reached = |exp: &Rational| -> Result<bool> {
        let (Some(a), Some(b)) = (to_u32(exp.numer()), to_u32(exp.denom())) else {
            return Err(Error::InvalidParameter("gap exponent too large to compare".into()));
        };
        if a > 4096 || b > 4096 {
            return Err(Error::InvalidParameter("gap exponent too large to compare".into()));
        }
        Ok(ratio::pow(gamma, a) >= ratio::pow(target_gamma, b))
    };
    if growth <= Rational::one() && !reached(&exponent)? {
        return Err(Error::InvalidParameter(
            "slack of at least 1 never increases the gap".into(),
        ));
    }
    // Later steps have larger k and gap, so the first check covers them.
    if !reached(&exponent)? && !amplification_precondition(i.k, gamma, slack) {
        return Err(Error::ParameterTooSmall(format!(
            "k = {} is below 1/(γ^η − 1)",
            i.k
        )));
    }
    while !reached(&exponent)? {
        let rows = (current.a.rows() as u128) * (1 + current.a.cols() as u128);
        let cols = (current.a.cols() as u128) * (1 + current.a.cols() as u128);
        if rows.saturating_mul(cols) > AMPLIFY_ENTRY_LIMIT {
            return Err(Error::too_large(
                "composite matrix",
                format!("{rows}x{cols} entries"),
                AMPLIFY_ENTRY_LIMIT as u64,
            ));
        }
        current = compose(&current, &current)?;
        exponent *= &growth;
        threshold = &threshold + &threshold * &threshold;
        steps.push(AmplifyStep {
            k: current.k,
            gap_exponent: exponent.clone(),
            effective_gap: &threshold / Rational::from_integer(current.k.into()),
            no_threshold: threshold.clone(),
        });
    }
    Ok(Amplified {
        instance: current,
        steps,
    })
}

/// `⌈γk + 1⌉` stacked copies of `A` over `Id_m`, target copies of `y` over zero.
pub fn mld_to_snc(i: &MldInstance, gamma: &Rational) -> Result<SncInstance> {
    let copies = snc_copies(i.k, gamma)?;
    let m = i.a.cols();
    let a = i.a.repeat_rows(copies).vstack(&BitMatrix::identity(m));
    let y = i.y.repeat(copies).concat(&BitVector::zeros(m));
    SncInstance::new(a, y, i.k)
}

/// `⌈γk + 1⌉`.
pub fn snc_copies(k: usize, gamma: &Rational) -> Result<usize> {
    let c = gamma * Rational::from_integer(k.into()) + Rational::one();
    Ok(ratio::ceil_u64(&c)? as usize)
}
