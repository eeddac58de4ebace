//! End-to-end checks across reduction stages against the exact oracles.

use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::{prop_assert, prop_assert_eq, prop_assume, proptest, ProptestConfig};

use fptgap::csp::{csp_value, Csp2Instance, Edge};
use fptgap::gf2codes::{code_distance_exact, mld_exact, tensor_code, LinearCode};
use fptgap::harness::{cmd_verify, Case, GadgetChoice, Options, Overrides, Pipeline, Source, Verdict};
use fptgap::instance::{InstanceFile, Payload};
use fptgap::latticecore::LvsInstance;
use fptgap::mldchain::{compose, compose_witness, csp_to_mld, MldInstance};
use fptgap::ratio::{floor_u64, frac, from_count};
use fptgap::svpchain::{lvs_compose, lvs_compose_witness};
use fptgap::{BitMatrix, BitVector, Budget, IntMatrix, Rational};

/// The fifteen nonempty constraints over a binary alphabet.
fn binary_constraints() -> Vec<Vec<(u32, u32)>> {
    let pairs = [(0, 0), (0, 1), (1, 0), (1, 1)];
    (1..16u32)
        .map(|mask| (0..4).filter(|b| mask >> b & 1 == 1).map(|b| pairs[b]).collect())
        .collect()
}

/// Every 2CSP on two vertices and two labels with constraints on `(0,1)`,
/// `(1,0)` or both.
fn all_two_vertex_csps() -> Vec<Csp2Instance> {
    let constraints = binary_constraints();
    let mut out = Vec::new();
    for c in &constraints {
        out.push(Csp2Instance::new(2, 2, vec![Edge::new(0, 1, c.clone())]).unwrap());
        out.push(Csp2Instance::new(2, 2, vec![Edge::new(1, 0, c.clone())]).unwrap());
        for d in &constraints {
            let edges = vec![Edge::new(0, 1, c.clone()), Edge::new(1, 0, d.clone())];
            out.push(Csp2Instance::new(2, 2, edges).unwrap());
        }
    }
    out
}

#[test]
fn csp_to_mld_promise_holds_on_every_two_vertex_instance() {
    let eps = frac(1, 4);
    let instances = all_two_vertex_csps();
    assert_eq!(instances.len(), 255);
    for g in instances {
        let value = csp_value(&g, Budget::DEFAULT).unwrap().value;
        let red = csp_to_mld(&g, &eps).unwrap();
        let k = g.vertices() + g.edges().len();
        let cap = floor_u64(&(from_count(k) * &red.gap)).unwrap() as usize;
        let found = mld_exact(&red.instance.a, &red.instance.y, cap, Budget::DEFAULT).unwrap();
        if value.is_one() {
            let x = found.as_ref().expect("satisfiable instance has a solution");
            assert_eq!(x.weight(), k);
            let (_, lowered) = red.lower(&g, x).unwrap();
            assert!(lowered.is_one());
        }
        if found.is_some() {
            assert!(value >= Rational::one() - &eps, "light solution for value {value}");
        }
    }
}

#[test]
fn composed_no_instances_stay_heavy() {
    // A = I₃ with target 1³ needs all three columns, above 2·k for k = 1.
    let heavy = MldInstance::new(BitMatrix::identity(3), BitVector::all_ones(3), 1).unwrap();
    let c = compose(&heavy, &heavy).unwrap();
    let gamma = 2;
    let cap = gamma * heavy.k + gamma * gamma * heavy.k * heavy.k;
    assert!(mld_exact(&c.a, &c.y, cap, Budget::DEFAULT).unwrap().is_none());
    let best = mld_exact(&c.a, &c.y, c.a.cols(), Budget::DEFAULT).unwrap().unwrap();
    assert_eq!(best.weight(), 3 + 3 * 3);
}

fn bit_matrix(rows: usize, cols: usize, bits: &[bool]) -> BitMatrix {
    let rows_v = (0..rows)
        .map(|r| BitVector::from_bools(bits[r * cols..(r + 1) * cols].iter().copied()))
        .collect();
    BitMatrix::from_rows(cols, rows_v).unwrap()
}

fn int_matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    let rows_v = (0..rows)
        .map(|r| entries[r * cols..(r + 1) * cols].iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    IntMatrix::from_rows(cols, rows_v).unwrap()
}

/// `x = 1 ∘ tail`.
fn planted_witness(tail: &[i64]) -> Vec<BigInt> {
    std::iter::once(1).chain(tail.iter().copied()).map(BigInt::from).collect()
}

/// A 2×3 instance whose first column is chosen so that `A·(1 ∘ tail)` equals
/// the binary target encoded by `target`.
fn planted_lvs(entries: &[i64], tail: &[i64], target: u64) -> LvsInstance {
    let y: Vec<i64> = (0..2).map(|r| (target >> r & 1) as i64).collect();
    let mut full = entries.to_vec();
    for r in 0..2 {
        let rest: i64 = (1..3).map(|c| entries[r * 3 + c] * tail[c - 1]).sum();
        full[r * 3] = y[r] - rest;
    }
    LvsInstance::new(int_matrix(2, 3, &full), y.into_iter().map(BigInt::from).collect(), 3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn composite_witness_solves_with_predicted_weight(
        bits1 in proptest::collection::vec(proptest::bool::ANY, 12),
        bits2 in proptest::collection::vec(proptest::bool::ANY, 12),
        x1 in 1u64..16,
        x2 in 1u64..16,
    ) {
        let (a1, a2) = (bit_matrix(3, 4, &bits1), bit_matrix(3, 4, &bits2));
        let (x1, x2) = (BitVector::from_u64(4, x1), BitVector::from_u64(4, x2));
        let (y1, y2) = (a1.mul_vec(&x1), a2.mul_vec(&x2));
        prop_assume!(!y1.is_zero() && !y2.is_zero());
        let i1 = MldInstance::new(a1, y1, x1.weight()).unwrap();
        let i2 = MldInstance::new(a2, y2, x2.weight()).unwrap();
        let c = compose(&i1, &i2).unwrap();
        let x = compose_witness(&x1, &x2);
        prop_assert!(c.is_solution(&x));
        prop_assert_eq!(x.weight(), x2.weight() * (1 + x1.weight()));
        prop_assert_eq!(c.k, i2.k * (i1.k + 1));
    }

    #[test]
    fn integer_composite_witness_solves(
        e1 in proptest::collection::vec(-2i64..=2, 6),
        e2 in proptest::collection::vec(-2i64..=2, 6),
        tail1 in proptest::collection::vec(-1i64..=1, 2),
        tail2 in proptest::collection::vec(-1i64..=1, 2),
        y1 in 1u64..4,
        y2 in 1u64..4,
    ) {
        let i1 = planted_lvs(&e1, &tail1, y1);
        let i2 = planted_lvs(&e2, &tail2, y2);
        let (x1, x2) = (planted_witness(&tail1), planted_witness(&tail2));
        prop_assert!(i1.is_solution(&x1) && i2.is_solution(&x2));
        let c = lvs_compose(&i1, &i2).unwrap();
        prop_assert!(c.is_solution(&lvs_compose_witness(&x1, &x2)));
    }

    #[test]
    fn tensor_code_distance_is_the_product(
        bits1 in proptest::collection::vec(proptest::bool::ANY, 8),
        bits2 in proptest::collection::vec(proptest::bool::ANY, 8),
    ) {
        let (g1, g2) = (bit_matrix(4, 2, &bits1), bit_matrix(4, 2, &bits2));
        prop_assume!(g1.rank() == 2 && g2.rank() == 2);
        let (c1, c2) = (LinearCode::new(g1, 1).unwrap(), LinearCode::new(g2, 1).unwrap());
        let d = |c: &LinearCode| code_distance_exact(c, None, Budget::DEFAULT).unwrap().exact().unwrap();
        prop_assert_eq!(d(&tensor_code(&c1, &c2)), d(&c1) * d(&c2));
    }
}

fn equality_csp() -> InstanceFile {
    let g = Csp2Instance::new(2, 2, vec![Edge::new(0, 1, [(0, 0), (1, 1)])]).unwrap();
    InstanceFile::new(Payload::Csp2(g)).with_param("eps", "1/4")
}

/// `B = [1⁶ | 0]`, `y = 1⁶`, `k = 1` with a declared gap of 5.
const YES_SNC: &str = "fptgap-instance 1\nkind snc\nparam gamma 5\nrows 6\ncols 2\nk 1\nmatrix\n10\n10\n10\n10\n10\n10\ntarget\n111111\nend\n";

#[test]
fn mdp_pipeline_passes_with_the_bch_gadget() {
    let opts = Options {
        seeds: 100,
        gadget: GadgetChoice::Scc,
        gamma: Some(frac(11, 10)),
        ..Options::default()
    };
    let rep = cmd_verify(Pipeline::Mdp, &Source::parse(YES_SNC).unwrap(), &opts).unwrap();
    assert_eq!(rep.case, Some(Case::Yes));
    assert_eq!(rep.verdict, Verdict::Pass, "{}", rep.to_json());
    assert!(rep.success.iter().all(|s| s.passed));
}

#[test]
fn mdp_pipeline_rejects_an_empty_bch_window() {
    let opts = Options {
        gadget: GadgetChoice::Scc,
        ..Options::default()
    };
    let err = cmd_verify(Pipeline::Mdp, &Source::Instance(equality_csp()), &opts).unwrap_err();
    assert!(matches!(err, fptgap::Error::EmptyWindow(_)), "{err}");
}

fn unit_lvs() -> InstanceFile {
    let a = IntMatrix::from_i64_rows(1, &[&[1]]).unwrap();
    InstanceFile::new(Payload::Lvs(LvsInstance::new(a, vec![BigInt::one()], 1).unwrap())).with_param("gamma", "2")
}

#[test]
fn svp_pipeline_materializes_under_overrides() {
    let opts = Options {
        overrides: Overrides::parse(&["h=127", "Q=4", "D=10", "rho=5"]).unwrap(),
        ..Options::default()
    };
    let rep = cmd_verify(Pipeline::Svp, &Source::Instance(unit_lvs()), &opts).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass, "{}", rep.to_json());
    let last = rep.stages.last().unwrap();
    assert_eq!(last.reduction, "snvp->svp");
    assert_eq!(last.output_shape, "216x214");
    assert!(rep.witness_checks.iter().all(|w| w.passed));
}

#[test]
fn svp_pipeline_reports_faithful_sizes_without_overrides() {
    let rep = cmd_verify(Pipeline::Svp, &Source::Instance(unit_lvs()), &Options::default()).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert_eq!(rep.feasibility.get("materializable").map(String::as_str), Some("false"));
    assert!(rep.feasibility.get("h").is_some_and(|h| h.starts_with("~2^")));
}
