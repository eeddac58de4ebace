//! Acceptance criteria. Runs as a plain binary so every criterion prints one
//! PASS/FAIL line; the process fails if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fptgap::csp::{csp_value, partition_overlap_check, threesat_to_2csp, Cnf3Formula, Csp2Instance, Edge, Literal};
use fptgap::gf2codes::{bch_generator, code_distance_exact, mld_exact, tensor_code, LinearCode};
use fptgap::harness::{cmd_reduce, cmd_verify, Node, Options, Overrides, Pipeline, Source};
use fptgap::instance::{InstanceFile, Kind, Payload};
use fptgap::latticecore::{
    lp_norm_pp, lvs_no_check, snvp_no_check, svp_enum, tensor_lattice, LvsInstance, SnvpInstance,
};
use fptgap::mdpchain::{mdp_witness, pick_gadget_params, snc_to_mdp};
use fptgap::mldchain::{compose, compose_witness, csp_to_mld, MldInstance, SncInstance};
use fptgap::ratio::{frac, from_count, int, show};
use fptgap::scc::{scc_construct, sparse_targets, CoveringGadget, DeltaBound, MicroGadget};
use fptgap::svpchain::{bch_center_sample, bch_lattice, csp_to_lvs, good_count_threshold, lvs_to_snvp};
use fptgap::{BitMatrix, BitVector, Budget, Rational};

/// Criterion 1: instances per outcome class and the wall-clock limit.
const CSP_MLD_MIN_INSTANCES: usize = 200;
const CSP_MLD_TIME_LIMIT: Duration = Duration::from_secs(60);
/// Criterion 2: pairs per case and the NO gap.
const COMPOSE_MIN_PAIRS: usize = 50;
const COMPOSE_GAP: i64 = 2;
/// Criterion 3: `δ = d^{−d/2}` with `d = 5`.
const SCC_DELTA_D: u32 = 5;
/// Criterion 5: pairs per family.
const TENSOR_MIN_PAIRS: usize = 10;
/// Criterion 6: seeds and gaps.
const MICRO_SEEDS: u64 = 500;
const MICRO_GAMMA_PRIME: i64 = 5;
const MICRO_GAMMA: (i64, i64) = (3, 2);
/// Criterion 7: exact mean, sample count and required fraction.
const BCH_MEAN: (i64, i64) = (455, 256);
const BCH_TAIL_SAMPLES: usize = 1000;
const BCH_TAIL_FRACTION: (i64, i64) = (95, 100);
/// Criterion 8: instances checked.
const INTEGER_MIN_INSTANCES: usize = 100;
/// Criterion 9: satisfiable formulas, overlap seeds and required fraction.
const SAT_FORMULAS: usize = 50;
const OVERLAP_SEEDS: u64 = 50;
const OVERLAP_FRACTION: (i64, i64) = (9, 10);
const OVERLAP_MAX_VARS: u32 = 30;
const OVERLAP_PART_CLAUSES: usize = 2;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A 2CSP with at most `max_v` vertices, `max_sigma` labels and `max_edges`
/// distinct ordered pairs, each pair kept in a constraint with probability `keep`.
fn random_csp(r: &mut ChaCha8Rng, max_v: usize, max_sigma: u32, max_edges: usize, keep: f64) -> Csp2Instance {
    let v = r.gen_range(2..=max_v);
    let sigma = r.gen_range(2..=max_sigma);
    let mut pairs: Vec<(usize, usize)> = (0..v)
        .flat_map(|a| (0..v).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    pairs.shuffle(r);
    let count = r.gen_range(1..=max_edges.min(pairs.len()));
    let edges = pairs[..count]
        .iter()
        .map(|&(a, b)| {
            let mut allowed: Vec<(u32, u32)> = (0..sigma)
                .flat_map(|x| (0..sigma).map(move |y| (x, y)))
                .filter(|_| r.gen_bool(keep))
                .collect();
            if allowed.is_empty() {
                allowed.push((r.gen_range(0..sigma), r.gen_range(0..sigma)));
            }
            Edge::new(a, b, allowed)
        })
        .collect();
    Csp2Instance::new(v, sigma, edges).expect("random CSP is well formed")
}

fn criterion_csp_to_mld() -> Outcome {
    let eps = frac(1, 4);
    let no_threshold = Rational::one() - &eps;
    let start = Instant::now();
    let mut r = rng(1);
    let (mut yes, mut no, mut skipped, mut failures) = (0usize, 0usize, 0usize, Vec::new());
    while yes + no < CSP_MLD_MIN_INSTANCES || yes == 0 || no == 0 {
        let g = random_csp(&mut r, 4, 3, 12, 0.4);
        let value = csp_value(&g, Budget::DEFAULT).expect("tiny CSP").value;
        let red = csp_to_mld(&g, &eps).expect("CSP reduces");
        let k = g.vertices() + g.edges().len();
        if value.is_one() {
            yes += 1;
            match mld_exact(&red.instance.a, &red.instance.y, k, Budget::DEFAULT) {
                Ok(Some(x)) if x.weight() == k && red.instance.is_solution(&x) => {}
                other => failures.push(format!("YES instance #{yes}: {other:?}")),
            }
        } else if value < no_threshold {
            no += 1;
            let cap = fptgap::ratio::floor_u64(&(from_count(k) * (Rational::one() + &eps / int(3)))).unwrap() as usize;
            match mld_exact(&red.instance.a, &red.instance.y, cap, Budget(1 << 34)) {
                Ok(None) => {}
                other => failures.push(format!("NO instance #{no}: {other:?}")),
            }
        } else {
            skipped += 1;
        }
    }
    let elapsed = start.elapsed();
    let passed = failures.is_empty() && elapsed < CSP_MLD_TIME_LIMIT;
    Outcome::new(
        passed,
        format!(
            "{yes} YES, {no} NO, {skipped} in the gap skipped, {} failures, {:.2}s{}",
            failures.len(),
            elapsed.as_secs_f64(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

/// A random MLD instance with a solution of weight at most `k`.
fn random_mld_yes(r: &mut ChaCha8Rng) -> (MldInstance, BitVector) {
    loop {
        let rows = r.gen_range(2..=3);
        let cols = r.gen_range(2..=4);
        let a = BitMatrix::from_rows(cols, (0..rows).map(|_| BitVector::from_u64(cols, r.gen_range(0..1 << cols))).collect())
            .expect("rows match");
        let k = r.gen_range(1..=2usize);
        let support: Vec<usize> = {
            let mut idx: Vec<usize> = (0..cols).collect();
            idx.shuffle(r);
            idx.truncate(r.gen_range(1..=k));
            idx
        };
        let x = BitVector::from_support(cols, &support);
        let y = a.mul_vec(&x);
        if y.is_zero() {
            continue;
        }
        let i = MldInstance::new(a, y, k).expect("nonzero target");
        let best = mld_exact(&i.a, &i.y, k, Budget::DEFAULT).unwrap().expect("planted solution exists");
        return (i, best);
    }
}

/// A random MLD instance whose target is reachable but only above `γk`.
fn random_mld_no(r: &mut ChaCha8Rng, gamma: usize) -> MldInstance {
    loop {
        let rows = r.gen_range(3..=4);
        let cols = r.gen_range(3..=5);
        let a = BitMatrix::from_rows(cols, (0..rows).map(|_| BitVector::from_u64(cols, r.gen_range(0..1 << cols))).collect())
            .expect("rows match");
        let y = BitVector::from_u64(rows, r.gen_range(1..1 << rows));
        if a.solve(&y).is_none() {
            continue;
        }
        let k = 1;
        if mld_exact(&a, &y, gamma * k, Budget::DEFAULT).unwrap().is_none() {
            return MldInstance::new(a, y, k).expect("nonzero target");
        }
    }
}

fn criterion_composition() -> Outcome {
    let mut r = rng(2);
    let mut failures = Vec::new();
    for n in 0..COMPOSE_MIN_PAIRS {
        let (i1, x1) = random_mld_yes(&mut r);
        let (i2, x2) = random_mld_yes(&mut r);
        let c = compose(&i1, &i2).expect("nonzero targets");
        let bound = i2.k * (i1.k + 1);
        let witness = compose_witness(&x1, &x2);
        let minimal = mld_exact(&c.a, &c.y, bound, Budget::DEFAULT).unwrap();
        let ok = c.k == bound
            && c.is_solution(&witness)
            && witness.weight() <= bound
            && minimal.as_ref().is_some_and(|x| x.weight() <= bound);
        if !ok {
            failures.push(format!("YES pair {n}: minimal {minimal:?}"));
        }
    }
    let gamma = COMPOSE_GAP as usize;
    for n in 0..COMPOSE_MIN_PAIRS {
        let i1 = random_mld_no(&mut r, gamma);
        let i2 = random_mld_no(&mut r, gamma);
        let c = compose(&i1, &i2).expect("nonzero targets");
        let cap = gamma * i2.k + gamma * gamma * i1.k * i2.k;
        if let Some(x) = mld_exact(&c.a, &c.y, cap, Budget(1 << 30)).unwrap() {
            failures.push(format!("NO pair {n}: composite solution of weight {}", x.weight()));
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "{COMPOSE_MIN_PAIRS} YES/YES and {COMPOSE_MIN_PAIRS} NO/NO pairs at γ = {COMPOSE_GAP}, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_scc_coverage() -> Outcome {
    let gadget = scc_construct(3, 1, &frac(1, 2)).expect("gadget builds");
    let shape = (gadget.d(), gadget.r(), gadget.generator().rows(), gadget.generator().cols());
    if shape != (5, 3, 15, 7) {
        return Outcome::new(false, format!("gadget (d, r, h, m) = {shape:?}, expected (5, 3, 15, 7)"));
    }
    let delta = DeltaBound::InverseRootPower { d: SCC_DELTA_D };
    let tail = gadget.generator().rows() - gadget.q();
    let mut passed = gadget.delta() == delta;
    let mut parts = Vec::new();
    for x in sparse_targets(3, 1) {
        let mut covered = 0u64;
        for s_tail in 0..1u64 << tail {
            let s = BitVector::zeros(3).concat(&BitVector::from_u64(tail, s_tail));
            if gadget.cover_witness(&x, &s, Budget::DEFAULT).unwrap().is_some() {
                covered += 1;
            }
        }
        let p = Rational::new(covered.into(), BigInt::one() << tail);
        let scan = gadget.coverage_probability(&x, Budget::DEFAULT).unwrap();
        passed &= p == scan && delta.is_met_by(&p);
        parts.push(format!("{}: {}", x.iter().map(|b| if b { '1' } else { '0' }).collect::<String>(), show(&p)));
    }
    Outcome::new(passed, format!("{} ≥ {delta} ≈ {:.5}", parts.join(", "), delta.approx()))
}

/// Minimum weight over all nonzero messages, by direct encoding.
fn brute_distance(code: &LinearCode) -> usize {
    let m = code.message_length();
    (1..1u64 << m)
        .map(|msg| code.encode(&BitVector::from_u64(m, msg)).weight())
        .min()
        .expect("nonempty message space")
}

fn criterion_bch_distances() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (h, d) in [(15usize, 5usize), (7, 3)] {
        let code = bch_generator(h, d).expect("BCH code builds");
        let exact = code_distance_exact(&code, None, Budget::DEFAULT).unwrap().exact();
        let brute = brute_distance(&code);
        passed &= exact == Some(d) && brute == d;
        parts.push(format!("({h},{d}): {exact:?} by search, {brute} by enumeration"));
    }
    Outcome::new(passed, parts.join("; "))
}

fn repetition(n: usize) -> LinearCode {
    LinearCode::new(BitMatrix::from_rows(1, vec![BitVector::all_ones(1); n]).unwrap(), n).unwrap()
}

fn parity(n: usize) -> LinearCode {
    let g = BitMatrix::identity(n - 1).vstack(&BitMatrix::from_rows(n - 1, vec![BitVector::all_ones(n - 1)]).unwrap());
    LinearCode::new(g, 2).unwrap()
}

fn random_lattice(r: &mut ChaCha8Rng) -> fptgap::IntMatrix {
    loop {
        let rows: Vec<Vec<BigInt>> = (0..2).map(|_| (0..2).map(|_| BigInt::from(r.gen_range(-3i64..=3))).collect()).collect();
        let b = fptgap::IntMatrix::from_rows(2, rows).unwrap();
        if b.rank() == 2 {
            return b;
        }
    }
}

fn criterion_tensor() -> Outcome {
    let codes: Vec<(&str, LinearCode)> = vec![
        ("rep2", repetition(2)),
        ("rep3", repetition(3)),
        ("par3", parity(3)),
        ("par4", parity(4)),
        ("bch7", bch_generator(7, 3).unwrap()),
        ("bch15", bch_generator(15, 5).unwrap()),
    ];
    let mut failures = Vec::new();
    let mut code_pairs = 0;
    for (i, (n1, c1)) in codes.iter().enumerate() {
        for (n2, c2) in &codes[i..] {
            if c1.message_length() * c2.message_length() > 20 {
                continue;
            }
            let d1 = brute_distance(c1);
            let d2 = brute_distance(c2);
            let t = tensor_code(c1, c2);
            let dt = code_distance_exact(&t, None, Budget(1 << 26)).unwrap().exact();
            code_pairs += 1;
            if dt != Some(d1 * d2) || brute_distance(&t) != d1 * d2 {
                failures.push(format!("{n1}⊗{n2}: {dt:?} ≠ {d1}·{d2}"));
            }
        }
    }
    let mut r = rng(5);
    let mut lattice_pairs = 0;
    while lattice_pairs < TENSOR_MIN_PAIRS {
        let (b1, b2) = (random_lattice(&mut r), random_lattice(&mut r));
        let e1 = svp_enum(&b1, 2, 3, Budget::DEFAULT).unwrap();
        let e2 = svp_enum(&b2, 2, 3, Budget::DEFAULT).unwrap();
        if !(e1.exact && e2.exact) {
            continue;
        }
        lattice_pairs += 1;
        let t = tensor_lattice(&b1, &b2);
        let product = &e1.value * &e2.value;
        let witness: Vec<BigInt> = e1.witness.iter().flat_map(|a| e2.witness.iter().map(move |b| a * b)).collect();
        let witness_norm = lp_norm_pp(&t.mul_vec(&witness), 2);
        let bound = e1.witness.iter().chain(&e2.witness).map(|v| v.magnitude().clone()).max().unwrap();
        let coeff = u64::try_from(&bound * &bound).unwrap().max(1);
        let et = svp_enum(&t, 2, coeff, Budget(1 << 26)).unwrap();
        if witness_norm != product || et.value > product {
            failures.push(format!("lattice pair {lattice_pairs}: λ² = {} > {product}", et.value));
        }
    }
    let passed = failures.is_empty() && code_pairs >= TENSOR_MIN_PAIRS;
    Outcome::new(
        passed,
        format!(
            "{code_pairs} code pairs, {lattice_pairs} lattice pairs, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_micro_gadget() -> Outcome {
    let gadget = MicroGadget::repetition(2, 1, 8, 1, Budget::DEFAULT).expect("micro gadget builds");
    let gamma_prime = int(MICRO_GAMMA_PRIME);
    let gamma = frac(MICRO_GAMMA.0, MICRO_GAMMA.1);
    let gp = pick_gadget_params(&gamma_prime, &gamma, &gadget).expect("window is nonempty");
    let ones = BitVector::all_ones(6);
    let yes_matrix = BitMatrix::from_columns(6, &[ones.clone(), BitVector::zeros(6)]).unwrap();
    let yes = SncInstance::new(yes_matrix, ones.clone(), 1).unwrap();
    let no = SncInstance::new(BitMatrix::zeros(6, 2), ones, 1).unwrap();
    let x = BitVector::unit(2, 0);
    let k_out = gp.k_out as usize;
    let cap = fptgap::ratio::floor_u64(&(&gamma * from_count(k_out))).unwrap() as usize;
    let (mut successes, mut no_failures) = (0u64, 0u64);
    for seed in 0..MICRO_SEEDS {
        let red = snc_to_mdp(&yes, &gp, &gadget, &mut rng(seed)).unwrap();
        if let Some(z) = gadget.cover_witness(&x, &red.center, Budget::DEFAULT).unwrap() {
            let w = red.instance.a.mul_vec(&mdp_witness(&z)).weight();
            if (1..=k_out).contains(&w) {
                successes += 1;
            }
        }
        let red = snc_to_mdp(&no, &gp, &gadget, &mut rng(seed)).unwrap();
        match red.instance.distance(Some(cap), Budget::DEFAULT).unwrap().exact() {
            Some(d) if d <= cap => no_failures += 1,
            _ => {}
        }
    }
    let delta = gadget.delta();
    let f = Rational::new(successes.into(), MICRO_SEEDS.into());
    let passed = delta.is_met_statistically(&f, MICRO_SEEDS) && no_failures == 0;
    let margin = delta.approx() - 3.0 * (delta.approx() / MICRO_SEEDS as f64).sqrt();
    Outcome::new(
        passed,
        format!(
            "YES {successes}/{MICRO_SEEDS} = {:.4} vs δ = {delta}, margin {margin:.4}; NO failures {no_failures} at cap {cap} (k_out = {k_out})",
            fptgap::ratio::approx(&f)
        ),
    )
}

fn criterion_bch_counting() -> Outcome {
    let (l, h, r) = (5usize, 15usize, 3usize);
    let gadget = bch_lattice(l, h, None).expect("BCH lattice builds");
    let parity = &gadget.parity;
    let errors: Vec<BitVector> = (0..1u64 << h)
        .filter(|e| e.count_ones() as usize == r)
        .map(|e| BitVector::from_u64(h, e))
        .collect();
    let mut total_scan = 0u64;
    let mut total_syndrome = 0u64;
    for s in 0..1u64 << h {
        let prefix = BitVector::from_u64(h, s);
        total_scan += gadget.good_count(&prefix, r, Budget::DEFAULT).unwrap();
        let syndrome = parity.mul_vec(&prefix);
        total_syndrome += errors.iter().filter(|e| parity.mul_vec(e) == syndrome).count() as u64;
    }
    let mean = Rational::new(total_scan.into(), (1u64 << h).into());
    let expected = frac(BCH_MEAN.0, BCH_MEAN.1);
    let mean_ok = mean == expected && total_scan == total_syndrome;
    let threshold = good_count_threshold(&gadget, r);
    let mut source = rng(7);
    let meeting = (0..BCH_TAIL_SAMPLES)
        .filter(|_| {
            let c = bch_center_sample(&gadget, r, &mut source);
            let count = c.good_count.expect("dimension 7 is enumerable");
            Rational::from_integer(count.into()) >= threshold
        })
        .count();
    let fraction = Rational::new(meeting.into(), BCH_TAIL_SAMPLES.into());
    let tail_ok = fraction >= frac(BCH_TAIL_FRACTION.0, BCH_TAIL_FRACTION.1);
    Outcome::new(
        mean_ok && tail_ok,
        format!(
            "g = {}, mean {} (expected {}), tail {meeting}/{BCH_TAIL_SAMPLES} ≥ {} (need {}/{})",
            gadget.g,
            show(&mean),
            show(&expected),
            show(&threshold),
            BCH_TAIL_FRACTION.0,
            BCH_TAIL_FRACTION.1
        ),
    )
}

fn residual_is_sparse_indicator(v: &[BigInt], k: usize) -> bool {
    v.iter().all(|e| e.is_zero() || e.is_one()) && v.iter().filter(|e| e.is_one()).count() <= k
}

fn criterion_integer_chain() -> Outcome {
    let eps = frac(1, 4);
    let no_threshold = Rational::one() - &eps;
    let mut r = rng(8);
    let (mut yes, mut no, mut failures) = (0usize, 0usize, Vec::new());
    while yes + no < INTEGER_MIN_INSTANCES || yes == 0 || no == 0 {
        let g = random_csp(&mut r, 3, 2, 4, 0.35);
        let value = csp_value(&g, Budget::DEFAULT).unwrap();
        let red = csp_to_lvs(&g, &eps).unwrap();
        let lvs: &LvsInstance = &red.instance;
        let k = lvs.k;
        if value.value.is_one() {
            yes += 1;
            let x = red.lift(&g, &value.assignment).unwrap();
            let snvp: SnvpInstance = lvs_to_snvp(lvs, &red.gap, 2).unwrap();
            let res = snvp.residual(&x);
            let ok = lvs.is_solution(&x)
                && residual_is_sparse_indicator(&res, k)
                && (1..=3).all(|p| lp_norm_pp(&res, p) <= BigInt::from(k));
            if !ok {
                failures.push(format!("YES instance #{yes}"));
            }
        } else if value.value < no_threshold {
            no += 1;
            let cap = fptgap::ratio::floor_u64(&(from_count(k) * &red.gap)).unwrap() as usize;
            let snvp = lvs_to_snvp(lvs, &red.gap, 2).unwrap();
            let lvs_ok = lvs_no_check(lvs, cap, Budget(1 << 30)).unwrap();
            let snvp_ok = snvp_no_check(&snvp, &red.gap, Budget(1 << 30)).unwrap();
            if !(lvs_ok && snvp_ok) {
                failures.push(format!("NO instance #{no}: lvs {lvs_ok}, snvp {snvp_ok}"));
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "{yes} YES, {no} NO, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

/// A random 3CNF whose clauses are all satisfied by a planted assignment.
fn planted_formula(r: &mut ChaCha8Rng, n: u32, m: usize) -> (Cnf3Formula, Vec<bool>) {
    let planted: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let mut vars: Vec<u32> = (1..=n).collect();
        vars.shuffle(r);
        let clause: Vec<Literal> = vars[..3]
            .iter()
            .map(|&v| if r.gen_bool(0.5) { Literal::positive(v) } else { Literal::negative(v) })
            .collect();
        if clause.iter().any(|l| l.holds(&planted)) {
            clauses.push(clause);
        }
    }
    (Cnf3Formula::new(n, clauses).unwrap(), planted)
}

fn criterion_threesat() -> Outcome {
    let mut r = rng(9);
    let mut failures = Vec::new();
    for n in 0..SAT_FORMULAS {
        let vars = r.gen_range(3..=6);
        let clauses = r.gen_range(3..=6);
        let parts = r.gen_range(2..=3);
        let (phi, planted) = planted_formula(&mut r, vars, clauses);
        let red = threesat_to_2csp(&phi, parts, &mut r).unwrap();
        let value = csp_value(&red.csp, Budget(1 << 26)).unwrap().value;
        let lifted = red.lift(&planted).map(|psi| red.csp.value_of(&psi));
        if !value.is_one() || lifted.as_ref().map_or(true, |v| !v.is_one()) {
            failures.push(format!("formula {n}: val = {}", show(&value)));
        }
    }
    let mut holding = 0u64;
    for seed in 0..OVERLAP_SEEDS {
        let mut r = rng(1000 + seed);
        let vars = r.gen_range(10..=OVERLAP_MAX_VARS);
        let clauses = 2 * vars as usize;
        // Two clauses per part keep each alphabet within 2^6 labels.
        let parts = clauses / OVERLAP_PART_CLAUSES;
        let (phi, _) = planted_formula(&mut r, vars, clauses);
        let red = threesat_to_2csp(&phi, parts, &mut r).unwrap();
        if partition_overlap_check(&red.padded, &red.parts, parts) {
            holding += 1;
        }
    }
    let fraction = Rational::new(holding.into(), OVERLAP_SEEDS.into());
    let passed = failures.is_empty() && fraction >= frac(OVERLAP_FRACTION.0, OVERLAP_FRACTION.1);
    Outcome::new(
        passed,
        format!(
            "{SAT_FORMULAS} formulas, {} with val ≠ 1; overlap bound held on {holding}/{OVERLAP_SEEDS} seeds",
            failures.len()
        ),
    )
}

fn unit_lvs() -> InstanceFile {
    let a = fptgap::IntMatrix::from_i64_rows(1, &[&[1]]).unwrap();
    InstanceFile::new(Payload::Lvs(LvsInstance::new(a, vec![BigInt::one()], 1).unwrap())).with_param("gamma", "2")
}

fn reduce_text(from: Kind, to: Kind, input: &InstanceFile, opts: &Options) -> InstanceFile {
    let out = cmd_reduce(Node::Instance(from), Node::Instance(to), &Source::Instance(input.clone()), opts)
        .unwrap_or_else(|e| panic!("{from} → {to}: {e}"));
    out.output.expect("edge materializes its output")
}

fn criterion_determinism() -> Outcome {
    let mut problems = Vec::new();
    let mut r = rng(10);
    let csp = Csp2Instance::new(2, 2, vec![Edge::new(0, 1, [(0, 0), (1, 1)])]).unwrap();
    let opts = Options {
        seed: 42,
        seeds: 20,
        ..Options::default()
    };
    let svp_opts = Options {
        seed: 42,
        overrides: Overrides::parse(&["h=127", "Q=4", "D=10", "rho=5"]).unwrap(),
        ..Options::default()
    };
    let csp_file = InstanceFile::new(Payload::Csp2(csp.clone())).with_param("eps", "1/4");
    let mld = reduce_text(Kind::Csp2, Kind::Mld, &csp_file, &opts);
    let snc = reduce_text(Kind::Mld, Kind::Snc, &mld, &opts);
    let mdp = reduce_text(Kind::Snc, Kind::Mdp, &snc, &opts);
    let lvs = reduce_text(Kind::Csp2, Kind::Lvs, &csp_file, &opts);
    let snvp = reduce_text(Kind::Lvs, Kind::Snvp, &unit_lvs(), &opts);
    let svp = reduce_text(Kind::Snvp, Kind::Svp, &snvp, &svp_opts);
    let files = [csp_file, mld, snc, mdp, lvs, snvp, svp];

    let again = [
        reduce_text(Kind::Snc, Kind::Mdp, &files[2], &opts),
        reduce_text(Kind::Snvp, Kind::Svp, &files[5], &svp_opts),
    ];
    if again[0].emit() != files[3].emit() {
        problems.push("snc → mdp output differs between runs".to_string());
    }
    if again[1].emit() != files[6].emit() {
        problems.push("snvp → svp output differs between runs".to_string());
    }
    for (pipeline, input, o) in [
        (Pipeline::Mdp, &files[0], &opts),
        (Pipeline::Svp, &unit_lvs(), &svp_opts),
    ] {
        let run = || cmd_verify(pipeline, &Source::Instance(input.clone()), o).map(|rep| rep.to_json());
        match (run(), run()) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => problems.push(format!("verify {pipeline:?} not reproducible: {:?} vs {:?}", a.is_ok(), b.is_ok())),
        }
    }

    let mut kinds = Vec::new();
    for f in &files {
        let text = f.emit();
        match InstanceFile::parse(&text) {
            Ok(parsed) if parsed == *f && parsed.emit() == text => kinds.push(f.kind()),
            Ok(_) => problems.push(format!("{} does not round-trip", f.kind())),
            Err(e) => problems.push(format!("{} fails to parse: {e}", f.kind())),
        }
    }
    let all_kinds = Kind::ALL.iter().all(|k| kinds.contains(k));
    if !all_kinds {
        problems.push(format!("round-trip covered only {kinds:?}"));
    }
    let (phi, _) = planted_formula(&mut r, 5, 7);
    if Cnf3Formula::parse_dimacs(&phi.to_dimacs()).ok().as_ref() != Some(&phi) {
        problems.push("DIMACS does not round-trip".into());
    }
    Outcome::new(
        problems.is_empty(),
        if problems.is_empty() {
            format!("re-runs identical; parse∘emit identity on {} kinds and DIMACS", kinds.len())
        } else {
            problems.join("; ")
        },
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("CSP→MLD promise mapping", criterion_csp_to_mld),
        ("composition operator", criterion_composition),
        ("SCC coverage", criterion_scc_coverage),
        ("BCH distances", criterion_bch_distances),
        ("tensor identities", criterion_tensor),
        ("SNC→MDP on the micro gadget", criterion_micro_gadget),
        ("BCH-lattice counting", criterion_bch_counting),
        ("integer chain CSP→LVS→SNVP", criterion_integer_chain),
        ("3SAT→2CSP", criterion_threesat),
        ("determinism and round-trip", criterion_determinism),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        if !outcome.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {verdict}: {name} ({}) [{:.2}s]",
            n + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
