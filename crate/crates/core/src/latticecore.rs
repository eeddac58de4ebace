//! Integer matrices, ℓ_p^p norms, lattice tensor products, and the exact
//! integer-side oracles: bounded SVP/CVP enumeration and the rational-span
//! NO checkers for LVS and SNVP.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::{ratio, IntMatrix, IntVector, Rational};

/// Dense row-major matrix over a ring of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + Zero + One + PartialEq> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let count = rows.len();
        let mut data = Vec::with_capacity(count * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: count,
            cols,
            data,
        })
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        self.row_iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c).clone() + a.clone() * b.clone();
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: &T) -> Self {
        self.map(|v| v.clone() * factor.clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row counts must agree");
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column counts must agree");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Assembles a block matrix; every block row must share a height and
    /// every block column a width.
    pub fn blocks(grid: &[Vec<Self>]) -> Self {
        grid.iter()
            .map(|row| {
                row.iter()
                    .skip(1)
                    .fold(row[0].clone(), |acc, block| acc.hstack(block))
            })
            .reduce(|acc, band| acc.vstack(&band))
            .expect("at least one block row")
    }

    /// `count` stacked copies, i.e. `1_count ⊗ self`.
    pub fn repeat_rows(&self, count: usize) -> Self {
        Matrix {
            rows: self.rows * count,
            cols: self.cols,
            data: (0..count).flat_map(|_| self.data.iter().cloned()).collect(),
        }
    }

    /// Kronecker product with entry `(i₁·r₂ + i₂, j₁·c₂ + j₂)`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let b = other.get(i2, j2);
                        if !b.is_zero() {
                            out.set(
                                i1 * other.rows + i2,
                                j1 * other.cols + j2,
                                a.clone() * b.clone(),
                            );
                        }
                    }
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }
}

impl Matrix<i64> {
    pub fn to_big(&self) -> IntMatrix {
        self.map(|&v| BigInt::from(v))
    }
}

impl IntMatrix {
    pub fn from_i64_rows(cols: usize, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn from_bits(bits: &BitMatrix) -> Self {
        let mut m = Self::zeros(bits.rows(), bits.cols());
        for r in 0..bits.rows() {
            for c in bits.row(r).ones() {
                m.set(r, c, BigInt::one());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::default();
        for row in self.row_iter() {
            basis.insert(row.to_vec());
        }
        basis.len()
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn int_vector(values: &[i64]) -> IntVector {
    values.iter().map(|&v| BigInt::from(v)).collect()
}

/// `Σ |vᵢ|^p`.
pub fn lp_norm_pp(v: &[BigInt], p: u32) -> BigInt {
    v.iter().map(|x| x.abs().pow(p)).sum()
}

/// Basis of `L(A) ⊗ L(B)`: column `i·cols(B) + j` is `aᵢ ⊗ bⱼ`.
pub fn tensor_lattice(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    a.kron(b)
}

/// `A x = r·y` with `‖x‖₀ ≤ k`, `r ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LvsInstance {
    pub a: IntMatrix,
    pub y: IntVector,
    pub k: usize,
}

impl LvsInstance {
    pub fn new(a: IntMatrix, y: IntVector, k: usize) -> Result<Self> {
        if y.len() != a.rows() {
            return Err(Error::DimensionMismatch(format!(
                "target of length {} for {} rows",
                y.len(),
                a.rows()
            )));
        }
        if y.iter().all(Zero::is_zero) {
            return Err(Error::ZeroTarget);
        }
        if y.iter().any(|v| !v.is_zero() && !v.is_one()) {
            return Err(Error::InvalidInstance("target entries must be 0 or 1".into()));
        }
        Ok(LvsInstance { a, y, k })
    }

    pub fn is_solution(&self, x: &[BigInt]) -> bool {
        x.len() == self.a.cols() && self.a.mul_vec(x) == self.y
    }
}

/// `‖Bx − y‖_p^p ≤ t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SnvpInstance {
    pub b: IntMatrix,
    pub y: IntVector,
    pub t: usize,
    pub p: u32,
}

impl SnvpInstance {
    pub fn new(b: IntMatrix, y: IntVector, t: usize, p: u32) -> Result<Self> {
        if y.len() != b.rows() {
            return Err(Error::DimensionMismatch(format!(
                "target of length {} for {} rows",
                y.len(),
                b.rows()
            )));
        }
        if y.iter().all(Zero::is_zero) {
            return Err(Error::ZeroTarget);
        }
        if p < 2 {
            return Err(Error::WrongNorm(p));
        }
        Ok(SnvpInstance { b, y, t, p })
    }

    pub fn residual(&self, x: &[BigInt]) -> IntVector {
        self.b
            .mul_vec(x)
            .into_iter()
            .zip(&self.y)
            .map(|(v, y)| v - y)
            .collect()
    }
}

/// `‖Bx‖_p^p ≤ k_pp` for some nonzero integer `x`. The budget is an exact
/// rational since the final reduction's budget is generally not integral.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SvpInstance {
    pub b: IntMatrix,
    pub k_pp: Rational,
    pub p: u32,
}

impl SvpInstance {
    pub fn new(b: IntMatrix, k_pp: Rational, p: u32) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::InvalidInstance("basis must be nonzero".into()));
        }
        if p == 0 {
            return Err(Error::WrongNorm(p));
        }
        Ok(SvpInstance { b, k_pp, p })
    }

    pub fn within_budget(&self, x: &[BigInt]) -> bool {
        Rational::from_integer(lp_norm_pp(&self.b.mul_vec(x), self.p)) <= self.k_pp
    }
}

/// Result of a bounded enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub value: BigInt,
    pub witness: IntVector,
    /// The value is the true minimum over all integer coefficient vectors.
    pub exact: bool,
}

/// Minimum of `‖Bx‖_p^p` over nonzero `x ∈ [−c, c]^cols`.
pub fn svp_enum(b: &IntMatrix, p: u32, coeff_bound: u64, budget: Budget) -> Result<Enumeration> {
    if b.cols() == 0 || coeff_bound == 0 {
        return Err(Error::InvalidParameter(
            "enumeration needs a column and a positive coefficient bound".into(),
        ));
    }
    let zero = vec![BigInt::zero(); b.rows()];
    let (value, witness) = box_minimum(b, &zero, p, coeff_bound, true, budget)?;
    let exact = triangular_certificate(b, &zero, p, &value, coeff_bound);
    Ok(Enumeration {
        value,
        witness,
        exact,
    })
}

/// Minimum of `‖Bx − y‖_p^p` over `x ∈ [−c, c]^cols`.
pub fn cvp_enum(i: &SnvpInstance, coeff_bound: u64, budget: Budget) -> Result<Enumeration> {
    let (value, witness) = box_minimum(&i.b, &i.y, i.p, coeff_bound, false, budget)?;
    let exact = triangular_certificate(&i.b, &i.y, i.p, &value, coeff_bound);
    Ok(Enumeration {
        value,
        witness,
        exact,
    })
}

/// Order used to break ties between equal-norm witnesses: the last
/// coordinate is most significant, and `0 < 1 < −1 < 2 < −2 < …`.
fn witness_cmp(a: &[BigInt], b: &[BigInt]) -> Ordering {
    let rank = |v: &BigInt| -> BigInt {
        let twice: BigInt = v.abs() * 2u32;
        if v.is_positive() {
            twice - 1u32
        } else {
            twice
        }
    };
    a.iter()
        .rev()
        .zip(b.iter().rev())
        .map(|(x, y)| rank(x).cmp(&rank(y)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn box_minimum(
    b: &IntMatrix,
    target: &[BigInt],
    p: u32,
    c: u64,
    skip_zero: bool,
    budget: Budget,
) -> Result<(BigInt, IntVector)> {
    let n = b.cols();
    let side = 2 * c as u128 + 1;
    let points = u32::try_from(n)
        .ok()
        .and_then(|e| side.checked_pow(e))
        .unwrap_or(u128::MAX);
    budget.check("enumeration box", points)?;
    let columns = b.columns();
    let bound = BigInt::from(c);
    let mut x: IntVector = vec![-bound.clone(); n];
    // Residual B·x − target, updated incrementally along the odometer.
    let mut residual: IntVector = target.iter().map(|t| -t).collect();
    for (j, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            residual[r] += v * &x[j];
        }
    }
    let mut best: Option<(BigInt, IntVector)> = None;
    loop {
        if !(skip_zero && x.iter().all(Zero::is_zero)) {
            let value = lp_norm_pp(&residual, p);
            let better = match &best {
                None => true,
                Some((v, w)) => match value.cmp(v) {
                    Ordering::Less => true,
                    Ordering::Equal => witness_cmp(&x, w).is_lt(),
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((value, x.clone()));
            }
        }
        let mut j = 0;
        loop {
            if j == n {
                return best.ok_or_else(|| Error::InvalidParameter("empty enumeration box".into()));
            }
            if x[j] < bound {
                x[j] += 1u32;
                for (r, v) in columns[j].iter().enumerate() {
                    residual[r] += v;
                }
                break;
            }
            let span = BigInt::from(2 * c);
            x[j] = -bound.clone();
            for (r, v) in columns[j].iter().enumerate() {
                residual[r] -= v * &span;
            }
            j += 1;
        }
    }
}

/// For each column `j`, a row whose last nonzero entry sits in column `j`.
fn pivot_rows(b: &IntMatrix) -> Option<Vec<usize>> {
    let mut pivots = vec![None; b.cols()];
    for (r, row) in b.row_iter().enumerate() {
        if let Some(last) = row.iter().rposition(|v| !v.is_zero()) {
            pivots[last].get_or_insert(r);
        }
    }
    pivots.into_iter().collect()
}

/// Forward substitution bound: any `x` with `‖Bx − y‖_p^p ≤ value` satisfies
/// `|x_j| ≤ (R + |y_π(j)| + Σ_{i<j} |b_π(j),i| X_i) / |b_π(j),j|` with
/// `R = ⌊value^{1/p}⌋`. Exact when every such bound fits the box.
fn triangular_certificate(b: &IntMatrix, y: &[BigInt], p: u32, value: &BigInt, c: u64) -> bool {
    let Some(pivots) = pivot_rows(b) else {
        return false;
    };
    let radius = value.nth_root(p);
    let limit = BigInt::from(c);
    let mut bounds: Vec<BigInt> = Vec::with_capacity(b.cols());
    for (j, &r) in pivots.iter().enumerate() {
        let row = b.row(r);
        let mut numer = &radius + y[r].abs();
        for (i, xb) in bounds.iter().enumerate().take(j) {
            numer += row[i].abs() * xb;
        }
        let xj = numer.div_floor(&row[j].abs());
        if xj > limit {
            return false;
        }
        bounds.push(xj);
    }
    true
}

/// Fraction-free echelon basis supporting push/pop for subset searches.
#[derive(Debug, Clone, Default)]
struct EchelonBasis {
    vectors: Vec<(usize, IntVector)>,
}

impl EchelonBasis {
    fn len(&self) -> usize {
        self.vectors.len()
    }

    fn reduce(&self, mut v: IntVector) -> IntVector {
        for (pivot, b) in &self.vectors {
            if v[*pivot].is_zero() {
                continue;
            }
            let (f, g) = (b[*pivot].clone(), v[*pivot].clone());
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = &f * &*vi - &g * bi;
            }
            normalize(&mut v);
        }
        v
    }

    fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Inserts if independent; returns whether the basis grew.
    fn insert(&mut self, v: IntVector) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                self.vectors.push((pivot, r));
                true
            }
            None => false,
        }
    }

    fn pop(&mut self) {
        self.vectors.pop();
    }
}

fn normalize(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Whether `a` and `b` are nonzero multiples of each other.
fn proportional(a: &[BigInt], b: &[BigInt]) -> bool {
    let Some(i) = a.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if b[i].is_zero() {
        return false;
    }
    a.iter().zip(b).all(|(x, y)| x * &b[i] == y * &a[i])
}

/// True iff no support of size at most `support_cap` has `y` in the rational
/// span of its columns, so no integer `x` and `r ≠ 0` give `Ax = r·y`.
pub fn lvs_no_check(i: &LvsInstance, support_cap: usize, budget: Budget) -> Result<bool> {
    let mut columns: Vec<IntVector> = Vec::new();
    for col in i.a.columns() {
        if col.iter().all(Zero::is_zero) || columns.iter().any(|c| proportional(c, &col)) {
            continue;
        }
        columns.push(col);
    }
    let mut search = SpanSearch {
        columns: &columns,
        target: &i.y,
        basis: EchelonBasis::default(),
        meter: budget.meter("support subsets"),
    };
    Ok(!search.reaches(0, support_cap)?)
}

struct SpanSearch<'a> {
    columns: &'a [IntVector],
    target: &'a [BigInt],
    basis: EchelonBasis,
    meter: crate::budget::Meter,
}

impl SpanSearch<'_> {
    fn reaches(&mut self, start: usize, remaining: usize) -> Result<bool> {
        self.meter.tick()?;
        if self.basis.contains(self.target) {
            return Ok(true);
        }
        if remaining == 0 {
            return Ok(false);
        }
        for j in start..self.columns.len() {
            if self.basis.insert(self.columns[j].clone()) {
                let found = self.reaches(j + 1, remaining - 1)?;
                self.basis.pop();
                if found {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// True iff discarding any `⌊ηt⌋` rows leaves `B x = w·y` without a rational
/// solution with `w ≠ 0`.
pub fn snvp_no_check(i: &SnvpInstance, eta: &Rational, budget: Budget) -> Result<bool> {
    let allowance = ratio::floor_u64(&(eta * ratio::from_count(i.t)))? as usize;
    // Proportional augmented rows impose one constraint; dropping some but not
    // all copies is useless, so rows are grouped with their multiplicity.
    let mut classes: Vec<(IntVector, usize)> = Vec::new();
    for (r, row) in i.b.row_iter().enumerate() {
        let mut aug = row.to_vec();
        aug.push(i.y[r].clone());
        if aug.iter().all(Zero::is_zero) {
            continue;
        }
        match classes.iter_mut().find(|(c, _)| proportional(c, &aug)) {
            Some((_, count)) => *count += 1,
            None => classes.push((aug, 1)),
        }
    }
    let mut dropped = vec![false; classes.len()];
    let mut meter = budget.meter("row subsets");
    let solvable = drop_search(&classes, &mut dropped, 0, allowance, &mut meter)?;
    Ok(!solvable)
}

fn drop_search(
    classes: &[(IntVector, usize)],
    dropped: &mut [bool],
    start: usize,
    allowance: usize,
    meter: &mut crate::budget::Meter,
) -> Result<bool> {
    meter.tick()?;
    let mut extended = false;
    for j in start..classes.len() {
        if classes[j].1 <= allowance {
            extended = true;
            dropped[j] = true;
            let found = drop_search(classes, dropped, j + 1, allowance - classes[j].1, meter)?;
            dropped[j] = false;
            if found {
                return Ok(true);
            }
        }
    }
    if extended {
        // Checked at the maximal descendants already, by monotonicity.
        return Ok(false);
    }
    Ok(kept_rows_consistent(classes, dropped))
}

/// Whether the kept rows admit `Bx = y` rationally: rank of `B` equals the
/// rank of `[B | y]`.
fn kept_rows_consistent(classes: &[(IntVector, usize)], dropped: &[bool]) -> bool {
    let mut plain = EchelonBasis::default();
    let mut augmented = EchelonBasis::default();
    for ((row, _), &gone) in classes.iter().zip(dropped) {
        if gone {
            continue;
        }
        let width = row.len() - 1;
        plain.insert(row[..width].to_vec());
        augmented.insert(row.clone());
    }
    plain.len() == augmented.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert, prop_assert_eq, prop_assume, proptest};

    fn m(cols: usize, rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(cols, rows).unwrap()
    }

    #[test]
    fn norms() {
        assert_eq!(lp_norm_pp(&int_vector(&[1, -2, 0]), 2), BigInt::from(5));
        assert_eq!(lp_norm_pp(&int_vector(&[0, 0]), 2), BigInt::zero());
        assert_eq!(lp_norm_pp(&int_vector(&[3]), 3), BigInt::from(27));
    }

    #[test]
    fn tensor_examples() {
        let id2 = IntMatrix::identity(2);
        assert_eq!(tensor_lattice(&id2, &id2), IntMatrix::identity(4));
        assert_eq!(tensor_lattice(&m(1, &[&[2]]), &m(1, &[&[3]])), m(1, &[&[6]]));
    }

    #[test]
    fn identity_enumeration() {
        let e = svp_enum(&IntMatrix::identity(3), 2, 1, Budget::DEFAULT).unwrap();
        assert_eq!(e.value, BigInt::one());
        assert_eq!(e.witness, int_vector(&[1, 0, 0]));
        assert!(e.exact);
    }

    #[test]
    fn triangular_gadget_certificate() {
        let q = 8;
        let b = m(2, &[&[1, 0], &[q, 2 * q]]);
        let e = svp_enum(&b, 2, 2, Budget::DEFAULT).unwrap();
        assert!(e.exact);
        // (-2, 1) lands on (-2, 0); the derived bounds are |x₀| ≤ 2 and |x₁| ≤ 1.
        assert_eq!(e.value, BigInt::from(4));
        assert_eq!(e.witness, int_vector(&[-2, 1]));
    }

    #[test]
    fn generic_basis_is_not_certified() {
        let b = m(2, &[&[3, 5], &[4, 7]]);
        let e = svp_enum(&b, 2, 1, Budget::DEFAULT).unwrap();
        assert!(!e.exact);
    }

    #[test]
    fn enumeration_budget() {
        assert!(matches!(
            svp_enum(&IntMatrix::identity(20), 2, 3, Budget(1000)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn cvp_examples() {
        let i = SnvpInstance::new(IntMatrix::identity(2), int_vector(&[1, 1]), 0, 2).unwrap();
        let e = cvp_enum(&i, 1, Budget::DEFAULT).unwrap();
        assert_eq!((e.value.clone(), e.witness.clone(), e.exact), (BigInt::zero(), int_vector(&[1, 1]), true));
        let e0 = cvp_enum(&i, 0, Budget::DEFAULT).unwrap();
        assert_eq!(e0.value, BigInt::from(2));
        assert!(!e0.exact);
    }

    #[test]
    fn lvs_examples() {
        let i = LvsInstance::new(m(1, &[&[1], &[0]]), int_vector(&[0, 1]), 1).unwrap();
        assert!(lvs_no_check(&i, 1, Budget::DEFAULT).unwrap());
        let j = LvsInstance::new(m(1, &[&[2]]), int_vector(&[1]), 1).unwrap();
        assert!(!lvs_no_check(&j, 1, Budget::DEFAULT).unwrap());
        assert!(matches!(
            LvsInstance::new(m(1, &[&[2]]), int_vector(&[0]), 1),
            Err(Error::ZeroTarget)
        ));
    }

    #[test]
    fn snvp_zero_row_must_be_dropped() {
        // Row 0 reads 0 = w, so only discarding it leaves a consistent system.
        let b = m(1, &[&[0], &[1], &[1]]);
        let y = int_vector(&[1, 1, 1]);
        let i = SnvpInstance::new(b, y, 1, 2).unwrap();
        assert!(snvp_no_check(&i, &Rational::zero(), Budget::DEFAULT).unwrap());
        assert!(!snvp_no_check(&i, &Rational::one(), Budget::DEFAULT).unwrap());
    }

    #[test]
    fn snvp_conflicting_rows() {
        // x = w and 2x = w force w = 0 unless one row is discarded.
        let b = m(1, &[&[1], &[1], &[2]]);
        let y = int_vector(&[1, 1, 1]);
        let i = SnvpInstance::new(b, y, 1, 2).unwrap();
        assert!(!snvp_no_check(&i, &Rational::one(), Budget::DEFAULT).unwrap());
        let tight = SnvpInstance::new(m(1, &[&[1], &[1], &[2], &[2]]), int_vector(&[1, 1, 1, 1]), 1, 2)
            .unwrap();
        assert!(snvp_no_check(&tight, &Rational::one(), Budget::DEFAULT).unwrap());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(m(2, &[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(2, &[&[1, 2], &[3, 4]]).rank(), 2);
    }

    fn small_matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
        let data: Vec<Vec<BigInt>> = (0..rows)
            .map(|r| (0..cols).map(|c| BigInt::from(entries[r * cols + c])).collect())
            .collect();
        IntMatrix::from_rows(cols, data).unwrap()
    }

    proptest! {
        #[test]
        fn norm_zero_iff_zero(v in proptest::collection::vec(-5i64..=5, 0..6), p in 1u32..4) {
            let v = int_vector(&v);
            prop_assert_eq!(lp_norm_pp(&v, p).is_zero(), v.iter().all(Zero::is_zero));
        }

        #[test]
        fn rerun_with_larger_box_never_improves(
            lower in proptest::collection::vec(-4i64..=4, 3),
            diag in proptest::collection::vec(1i64..=4, 3),
        ) {
            let b = small_matrix(3, 3, &[
                diag[0], 0, 0,
                lower[0], diag[1], 0,
                lower[1], lower[2], diag[2],
            ]);
            for c in 1..=3u64 {
                let e = svp_enum(&b, 2, c, Budget::DEFAULT).unwrap();
                if e.exact {
                    let wider = svp_enum(&b, 2, c + 1, Budget::DEFAULT).unwrap();
                    prop_assert_eq!(wider.value, e.value);
                }
            }
        }

        #[test]
        fn lvs_agrees_with_box_search(entries in proptest::collection::vec(-2i64..=2, 6), y in proptest::collection::vec(0i64..=1, 2)) {
            let a = small_matrix(2, 3, &entries);
            let y = int_vector(&y);
            if y.iter().all(Zero::is_zero) {
                return Ok(());
            }
            let inst = LvsInstance::new(a.clone(), y.clone(), 3).unwrap();
            let no = lvs_no_check(&inst, 3, Budget::DEFAULT).unwrap();
            let mut hit = false;
            for code in 0..7i64.pow(3) {
                let x: IntVector = (0..3).map(|j| BigInt::from((code / 7i64.pow(j)) % 7 - 3)).collect();
                let ax = a.mul_vec(&x);
                for r in (-9i64..=9).filter(|r| *r != 0) {
                    if ax.iter().zip(&y).all(|(v, t)| *v == t * r) {
                        hit = true;
                    }
                }
            }
            if hit {
                prop_assert!(!no);
            }
        }

        #[test]
        fn tensor_lambda_submultiplicative(
            a in proptest::collection::vec(-3i64..=3, 4),
            b in proptest::collection::vec(-3i64..=3, 4),
        ) {
            let ma = small_matrix(2, 2, &[a[0].abs() + 1, 0, a[1], a[2].abs() + 1]);
            let mb = small_matrix(2, 2, &[b[0].abs() + 1, 0, b[1], b[2].abs() + 1]);
            let la = svp_enum(&ma, 2, 6, Budget::DEFAULT).unwrap();
            let lb = svp_enum(&mb, 2, 6, Budget::DEFAULT).unwrap();
            prop_assume!(la.exact && lb.exact);
            let t = tensor_lattice(&ma, &mb);
            let w: IntVector = la.witness.iter()
                .flat_map(|u| lb.witness.iter().map(move |v| u * v))
                .collect();
            let product = &la.value * &lb.value;
            prop_assert_eq!(lp_norm_pp(&t.mul_vec(&w), 2), product.clone());
            let lt = svp_enum(&t, 2, 1, Budget::DEFAULT).unwrap();
            prop_assert!(lt.value.clone().min(product.clone()) <= product);
        }
    }
}
