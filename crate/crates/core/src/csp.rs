//! Binary constraint satisfaction instances, 3-CNF formulas with a DIMACS
//! reader, exact value computation, and the randomized clause-partition
//! reduction from 3SAT to 2CSP.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::budget::{saturating_pow, Budget};
use crate::error::{Error, Result};
use crate::Rational;

/// A label assignment, one symbol per vertex.
pub type Assignment = Vec<u32>;

/// A directed constraint edge with its sorted set of allowed label pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    allowed: Vec<(u32, u32)>,
}

impl Edge {
    pub fn new(from: usize, to: usize, allowed: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let allowed: BTreeSet<(u32, u32)> = allowed.into_iter().collect();
        Edge {
            from,
            to,
            allowed: allowed.into_iter().collect(),
        }
    }

    pub fn allowed(&self) -> &[(u32, u32)] {
        &self.allowed
    }

    pub fn permits(&self, left: u32, right: u32) -> bool {
        self.allowed.binary_search(&(left, right)).is_ok()
    }

    /// Same edge with some allowed pairs removed.
    pub fn restricted(&self, keep: impl Fn(u32, u32) -> bool) -> Edge {
        Edge {
            from: self.from,
            to: self.to,
            allowed: self
                .allowed
                .iter()
                .copied()
                .filter(|&(a, b)| keep(a, b))
                .collect(),
        }
    }
}

/// A binary constraint satisfaction instance on a directed simple graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Csp2Instance {
    vertices: usize,
    alphabet_size: u32,
    edges: Vec<Edge>,
}

impl Csp2Instance {
    pub fn new(vertices: usize, alphabet_size: u32, edges: Vec<Edge>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidInstance("a 2CSP needs at least one vertex".into()));
        }
        if alphabet_size == 0 {
            return Err(Error::InvalidInstance("alphabet must be nonempty".into()));
        }
        let mut seen = BTreeSet::new();
        for (i, e) in edges.iter().enumerate() {
            if e.from >= vertices || e.to >= vertices {
                return Err(Error::InvalidInstance(format!(
                    "edge {i} references a vertex outside 0..{vertices}"
                )));
            }
            if e.from == e.to {
                return Err(Error::InvalidInstance(format!("edge {i} is a self-loop")));
            }
            if !seen.insert((e.from, e.to)) {
                return Err(Error::InvalidInstance(format!(
                    "edge {i} duplicates ({}, {})",
                    e.from, e.to
                )));
            }
            if let Some(&(a, b)) = e
                .allowed
                .iter()
                .find(|&&(a, b)| a >= alphabet_size || b >= alphabet_size)
            {
                return Err(Error::InvalidInstance(format!(
                    "edge {i} allows ({a}, {b}) outside the alphabet"
                )));
            }
        }
        Ok(Csp2Instance {
            vertices,
            alphabet_size,
            edges,
        })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn satisfied_edges(&self, psi: &[u32]) -> usize {
        self.edges
            .iter()
            .filter(|e| e.permits(psi[e.from], psi[e.to]))
            .count()
    }

    /// Fraction of satisfied edges; an instance without edges has value 1.
    pub fn value_of(&self, psi: &[u32]) -> Rational {
        if self.edges.is_empty() {
            return Rational::from_integer(1.into());
        }
        Rational::new(
            BigInt::from(self.satisfied_edges(psi)),
            BigInt::from(self.edges.len()),
        )
    }

    pub fn first_violated(&self, psi: &[u32]) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| !e.permits(psi[e.from], psi[e.to]))
    }

    /// Same graph with some allowed pairs removed per edge.
    pub fn with_edges(&self, edges: Vec<Edge>) -> Result<Self> {
        Csp2Instance::new(self.vertices, self.alphabet_size, edges)
    }
}

/// Exact optimum of a 2CSP with one maximizing assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspValue {
    pub value: Rational,
    pub assignment: Assignment,
}

/// `max_ψ val(ψ)` by scanning all `|Σ|^|V|` assignments in odometer order.
/// The first maximizer found is returned; the scan stops at value 1.
pub fn csp_value(gamma: &Csp2Instance, budget: Budget) -> Result<CspValue> {
    let total = saturating_pow(gamma.alphabet_size as u128, gamma.vertices as u32);
    budget.check("assignment enumeration", total)?;
    let mut psi = vec![0u32; gamma.vertices];
    let mut best_count = gamma.satisfied_edges(&psi);
    let mut best = psi.clone();
    let edges = gamma.edges.len();
    loop {
        if best_count == edges {
            break;
        }
        let mut i = 0;
        loop {
            if i == psi.len() {
                return Ok(CspValue {
                    value: gamma.value_of(&best),
                    assignment: best,
                });
            }
            psi[i] += 1;
            if psi[i] < gamma.alphabet_size {
                break;
            }
            psi[i] = 0;
            i += 1;
        }
        let count = gamma.satisfied_edges(&psi);
        if count > best_count {
            best_count = count;
            best = psi.clone();
        }
    }
    Ok(CspValue {
        value: gamma.value_of(&best),
        assignment: best,
    })
}

/// A signed literal over variables numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn positive(var: u32) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn negative(var: u32) -> Self {
        Literal { var, negated: true }
    }

    /// From DIMACS notation, where `-3` means the negation of variable 3.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        let var = u32::try_from(value.unsigned_abs()).ok()?;
        (var != 0).then_some(Literal {
            var,
            negated: value < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    /// Truth value under an assignment indexed by variable number minus one.
    pub fn holds(self, values: &[bool]) -> bool {
        values[self.var as usize - 1] != self.negated
    }
}

/// A CNF formula whose clauses have one to three literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cnf3Formula {
    num_vars: u32,
    clauses: Vec<Vec<Literal>>,
}

impl Cnf3Formula {
    pub fn new(num_vars: u32, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            if c.is_empty() || c.len() > 3 {
                return Err(Error::InvalidInstance(format!(
                    "clause {i} has {} literals",
                    c.len()
                )));
            }
            if let Some(l) = c.iter().find(|l| l.var == 0 || l.var > num_vars) {
                return Err(Error::InvalidInstance(format!(
                    "clause {i} references undeclared variable {}",
                    l.var
                )));
            }
        }
        Ok(Cnf3Formula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    /// Largest number of clauses any single variable appears in.
    pub fn max_occurrence(&self) -> usize {
        let mut counts = vec![0usize; self.num_vars as usize + 1];
        for c in &self.clauses {
            let vars: BTreeSet<u32> = c.iter().map(|l| l.var).collect();
            for v in vars {
                counts[v as usize] += 1;
            }
        }
        counts.into_iter().max().unwrap_or(0)
    }

    pub fn clause_vars(&self, clause: usize) -> BTreeSet<u32> {
        self.clauses[clause].iter().map(|l| l.var).collect()
    }

    pub fn satisfied_clauses(&self, values: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|c| c.iter().any(|l| l.holds(values)))
            .count()
    }

    /// Largest fraction of simultaneously satisfiable clauses, with a
    /// maximizing assignment.
    pub fn max_sat(&self, budget: Budget) -> Result<(Rational, Vec<bool>)> {
        let n = self.num_vars as usize;
        if n >= 64 {
            return Err(Error::too_large("assignment enumeration", format!("2^{n}"), budget.limit()));
        }
        budget.check("assignment enumeration", 1u128 << n)?;
        let mut best = (0usize, vec![false; n]);
        for bits in 0u64..(1u64 << n) {
            let values: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            let sat = self.satisfied_clauses(&values);
            if sat > best.0 || bits == 0 {
                best = (sat, values);
                if sat == self.clauses.len() {
                    break;
                }
            }
        }
        let total = self.clauses.len().max(1);
        let value = if self.clauses.is_empty() {
            Rational::from_integer(1.into())
        } else {
            Rational::new(BigInt::from(best.0), BigInt::from(total))
        };
        Ok((value, best.1))
    }

    /// Parses DIMACS CNF text (`p cnf <vars> <clauses>` header, clauses
    /// terminated by `0`, comment lines starting with `c`).
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut declared: Option<(u32, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 || parts[0] != "cnf" {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "expected `p cnf <vars> <clauses>`".into(),
                    });
                }
                let vars = parts[1].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: "bad variable count".into(),
                })?;
                let count = parts[2].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: "bad clause count".into(),
                })?;
                declared = Some((vars, count));
                continue;
            }
            if declared.is_none() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "clause before the problem line".into(),
                });
            }
            for token in line.split_whitespace() {
                let value: i64 = token.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad literal {token:?}"),
                })?;
                if value == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(Literal::from_dimacs(value).ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: format!("bad literal {token:?}"),
                    })?);
                }
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        let (vars, count) = declared.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing problem line".into(),
        })?;
        if clauses.len() != count {
            return Err(Error::Parse {
                line: 0,
                message: format!("header declares {count} clauses, found {}", clauses.len()),
            });
        }
        Cnf3Formula::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Cnf3Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for c in &self.clauses {
            for l in c {
                write!(f, "{} ", l.to_dimacs())?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

/// A partial assignment to a sorted variable list: bit `b` holds the value of
/// the `b`-th variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAssignment(pub u64);

/// The 2CSP produced from a formula together with the data needed to map
/// assignments between the two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatReduction {
    pub csp: Csp2Instance,
    /// The formula after padding to a clause count divisible by `k`.
    pub padded: Cnf3Formula,
    /// Clause indices of each part, into `padded`.
    pub parts: Vec<Vec<usize>>,
    /// Sorted variables touched by each part.
    pub part_vars: Vec<Vec<u32>>,
    /// Satisfying partial assignments of each part; symbols beyond the list
    /// length are sinks.
    pub alphabets: Vec<Vec<PartialAssignment>>,
}

impl SatReduction {
    /// Restricts a full assignment of the original variables to each part.
    pub fn lift(&self, values: &[bool]) -> Result<Assignment> {
        let mut full = values.to_vec();
        full.resize(self.padded.num_vars() as usize, false);
        self.part_vars
            .iter()
            .zip(&self.alphabets)
            .enumerate()
            .map(|(i, (vars, alphabet))| {
                let mut code = 0u64;
                for (b, &v) in vars.iter().enumerate() {
                    if full[v as usize - 1] {
                        code |= 1 << b;
                    }
                }
                alphabet
                    .binary_search(&PartialAssignment(code))
                    .map(|pos| pos as u32)
                    .map_err(|_| Error::NotSatisfying { edge: i })
            })
            .collect()
    }
}

/// Appends tautologies `z ∨ ¬z` on fresh variables until `k` divides the
/// clause count (and there are at least `k` clauses).
pub fn pad_clauses(phi: &Cnf3Formula, k: usize) -> Cnf3Formula {
    let mut clauses = phi.clauses.clone();
    let mut vars = phi.num_vars;
    while clauses.len() < k || !clauses.len().is_multiple_of(k) {
        vars += 1;
        clauses.push(vec![Literal::positive(vars), Literal::negative(vars)]);
    }
    Cnf3Formula {
        num_vars: vars,
        clauses,
    }
}

/// Random clause partition into `k` parts, one vertex per part, with the
/// satisfying partial assignments of each part as its labels and agreement
/// constraints on every pair of parts.
pub fn threesat_to_2csp<R: Rng + ?Sized>(
    phi: &Cnf3Formula,
    k: usize,
    rng: &mut R,
) -> Result<SatReduction> {
    if k == 0 {
        return Err(Error::InvalidParameter("number of parts must be positive".into()));
    }
    let padded = pad_clauses(phi, k);
    let mut order: Vec<usize> = (0..padded.clauses.len()).collect();
    order.shuffle(rng);
    let size = order.len() / k;
    let parts: Vec<Vec<usize>> = order
        .chunks(size)
        .map(|c| {
            let mut c = c.to_vec();
            c.sort_unstable();
            c
        })
        .collect();
    let part_vars: Vec<Vec<u32>> = parts
        .iter()
        .map(|p| {
            let vars: BTreeSet<u32> = p.iter().flat_map(|&c| padded.clause_vars(c)).collect();
            vars.into_iter().collect()
        })
        .collect();
    if let Some(v) = part_vars.iter().find(|v| v.len() > 63) {
        return Err(Error::too_large(
            "partial assignment enumeration",
            format!("2^{}", v.len()),
            1 << 63,
        ));
    }
    let alphabets: Vec<Vec<PartialAssignment>> = parts
        .iter()
        .zip(&part_vars)
        .map(|(clauses, vars)| satisfying_partials(&padded, clauses, vars))
        .collect();
    let sigma = alphabets.iter().map(Vec::len).max().unwrap_or(0).max(1);
    let sigma = u32::try_from(sigma)
        .map_err(|_| Error::InvalidParameter("alphabet does not fit 32 bits".into()))?;
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let shared: Vec<(usize, usize)> = part_vars[i]
                .iter()
                .enumerate()
                .filter_map(|(bi, v)| part_vars[j].binary_search(v).ok().map(|bj| (bi, bj)))
                .collect();
            let mut allowed = Vec::new();
            for (a, pa) in alphabets[i].iter().enumerate() {
                for (b, pb) in alphabets[j].iter().enumerate() {
                    let agree = shared
                        .iter()
                        .all(|&(bi, bj)| (pa.0 >> bi & 1) == (pb.0 >> bj & 1));
                    if agree {
                        allowed.push((a as u32, b as u32));
                    }
                }
            }
            edges.push(Edge::new(i, j, allowed));
        }
    }
    let csp = Csp2Instance::new(k, sigma, edges)?;
    Ok(SatReduction {
        csp,
        padded,
        parts,
        part_vars,
        alphabets,
    })
}

fn satisfying_partials(
    phi: &Cnf3Formula,
    clauses: &[usize],
    vars: &[u32],
) -> Vec<PartialAssignment> {
    let mut values = vec![false; phi.num_vars() as usize];
    (0u64..(1u64 << vars.len()))
        .filter(|&code| {
            for (b, &v) in vars.iter().enumerate() {
                values[v as usize - 1] = code >> b & 1 == 1;
            }
            clauses
                .iter()
                .all(|&c| phi.clauses[c].iter().any(|l| l.holds(&values)))
        })
        .map(PartialAssignment)
        .collect()
}

/// Checks `|var(S_i) ∩ var(S_j)| < 1000·n·Δ³ / k²` for every pair of parts.
/// Returns false when `parts` is not a partition of the clauses into `k`
/// equal parts.
pub fn partition_overlap_check(phi: &Cnf3Formula, parts: &[Vec<usize>], k: usize) -> bool {
    let delta = BigInt::from(phi.max_occurrence());
    let bound = Rational::new(
        BigInt::from(1000u32) * BigInt::from(phi.num_vars()) * &delta * &delta * &delta,
        BigInt::from(k) * BigInt::from(k),
    );
    partition_overlap_check_with_bound(phi, parts, k, &bound)
}

/// [`partition_overlap_check`] against an explicit strict bound.
pub fn partition_overlap_check_with_bound(
    phi: &Cnf3Formula,
    parts: &[Vec<usize>],
    k: usize,
    bound: &Rational,
) -> bool {
    if k == 0 || parts.len() != k || !is_equal_partition(parts, phi.clauses.len()) {
        return false;
    }
    let vars: Vec<BTreeSet<u32>> = parts
        .iter()
        .map(|p| p.iter().flat_map(|&c| phi.clause_vars(c)).collect())
        .collect();
    (0..k).all(|i| {
        (i + 1..k).all(|j| {
            let overlap = vars[i].intersection(&vars[j]).count();
            Rational::from_integer(BigInt::from(overlap)) < *bound
        })
    })
}

fn is_equal_partition(parts: &[Vec<usize>], clauses: usize) -> bool {
    let size = parts.first().map_or(0, Vec::len);
    let mut seen = vec![false; clauses];
    for p in parts {
        if p.len() != size {
            return false;
        }
        for &c in p {
            if c >= clauses || std::mem::replace(&mut seen[c], true) {
                return false;
            }
        }
    }
    seen.into_iter().all(|s| s)
}
