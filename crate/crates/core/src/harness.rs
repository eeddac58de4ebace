//! Reduction dispatch, end-to-end verification pipelines and oracle access,
//! producing deterministic JSON reports.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::csp::{csp_value, threesat_to_2csp, Cnf3Formula, Csp2Instance};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::gf2codes::{mld_exact, min_nonzero_image_weight, snc_exact, Distance, SncDecision};
use crate::instance::{digest_text, is_structured, InstanceFile, Kind, Payload};
use crate::latticecore::{
    cvp_enum, lp_norm_pp, lvs_no_check, snvp_no_check, svp_enum, LvsInstance, SnvpInstance,
};
use crate::mdpchain::{mdp_amplify, pick_gadget_params, pick_window_params, snc_to_mdp, GadgetParams};
use crate::mldchain::{compose, csp_to_mld, mld_to_snc, MldInstance};
use crate::scc::{scc_construct, CoveringGadget, MicroGadget};
use crate::svpchain::{
    bch_center_sample, bch_lattice, feasibility_report, final_lattice, good_vector_bound,
    intermediate_lattice, lvs_compose, lvs_to_snvp, show_big, svp_amplify_l2, SvpChainParams,
    SvpFeasibility,
};
use crate::{ratio, IntVector, Rational};

/// A node of the reduction graph: a CNF formula or an instance kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Cnf,
    Instance(Kind),
}

impl FromStr for Node {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "cnf" {
            return Ok(Node::Cnf);
        }
        let s = if s == "csp" { "csp2" } else { s };
        Kind::from_tag(s)
            .map(Node::Instance)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown instance kind {s:?}")))
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Cnf => f.write_str("cnf"),
            Node::Instance(k) => write!(f, "{k}"),
        }
    }
}

/// Input read from disk: a structured instance or a DIMACS formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Instance(InstanceFile),
    Cnf(Cnf3Formula),
}

impl Source {
    pub fn parse(text: &str) -> Result<Self> {
        if is_structured(text) {
            InstanceFile::parse(text).map(Source::Instance)
        } else {
            Cnf3Formula::parse_dimacs(text).map(Source::Cnf)
        }
    }

    pub fn node(&self) -> Node {
        match self {
            Source::Instance(f) => Node::Instance(f.kind()),
            Source::Cnf(_) => Node::Cnf,
        }
    }

    pub fn digest(&self) -> String {
        match self {
            Source::Instance(f) => f.digest(),
            Source::Cnf(phi) => digest_text(&phi.to_dimacs()),
        }
    }

    fn shape(&self) -> String {
        match self {
            Source::Instance(f) => shape(&f.payload),
            Source::Cnf(phi) => format!("n={} m={}", phi.num_vars(), phi.clauses().len()),
        }
    }
}

fn shape(p: &Payload) -> String {
    match p {
        Payload::Csp2(g) => format!(
            "|V|={} |E|={} |Σ|={}",
            g.vertices(),
            g.edges().len(),
            g.alphabet_size()
        ),
        Payload::Mld(i) => format!("{}x{}", i.a.rows(), i.a.cols()),
        Payload::Snc(i) => format!("{}x{}", i.a.rows(), i.a.cols()),
        Payload::Mdp(i) => format!("{}x{}", i.a.rows(), i.a.cols()),
        Payload::Lvs(i) => format!("{}x{}", i.a.rows(), i.a.cols()),
        Payload::Snvp(i) => format!("{}x{}", i.b.rows(), i.b.cols()),
        Payload::Svp(i) => format!("{}x{}", i.b.rows(), i.b.cols()),
    }
}

/// Which covering gadget the SNC-to-MDP step uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GadgetChoice {
    /// Repetition-code surrogate with exact δ.
    #[default]
    Micro,
    /// BCH sparse covering code built for `ε`.
    Scc,
}

impl FromStr for GadgetChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "micro" => Ok(GadgetChoice::Micro),
            "scc" => Ok(GadgetChoice::Scc),
            _ => Err(Error::InvalidParameter(format!("unknown gadget {s:?}"))),
        }
    }
}

/// `key=value` replacements for derived parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub h: Option<BigInt>,
    pub q_scale: Option<BigInt>,
    pub d_scale: Option<BigInt>,
    pub rho: Option<BigInt>,
    /// Covering radius of the gadget or of the BCH lattice.
    pub r: Option<usize>,
    /// Copies in the repetition gadget.
    pub reps: Option<usize>,
}

impl Overrides {
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let mut o = Overrides::default();
        for item in items {
            let item = item.as_ref();
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("override {item:?} is not key=value")))?;
            let big = || {
                value
                    .parse::<BigInt>()
                    .map_err(|_| Error::InvalidParameter(format!("{key} must be an integer")))
            };
            let small = || {
                value
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("{key} must be a nonnegative integer")))
            };
            match key {
                "h" => o.h = Some(big()?),
                "Q" => o.q_scale = Some(big()?),
                "D" => o.d_scale = Some(big()?),
                "rho" => o.rho = Some(big()?),
                "r" => o.r = Some(small()?),
                "reps" => o.reps = Some(small()?),
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown override {key:?}; expected h, Q, D, rho, r or reps"
                    )))
                }
            }
        }
        Ok(o)
    }
}

/// Shared knobs of every command.
#[derive(Debug, Clone)]
pub struct Options {
    pub seed: u64,
    pub seeds: u64,
    pub budget: Budget,
    pub eps: Option<Rational>,
    pub gamma: Option<Rational>,
    pub eta: Option<Rational>,
    pub p: Option<u32>,
    /// Number of parts for the CNF reduction.
    pub parts: Option<usize>,
    pub gadget: GadgetChoice,
    pub overrides: Overrides,
    pub report_only: bool,
    /// Coefficient box for lattice enumeration.
    pub coeff_bound: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            seeds: 200,
            budget: Budget::DEFAULT,
            eps: None,
            gamma: None,
            eta: None,
            p: None,
            parts: None,
            gadget: GadgetChoice::Micro,
            overrides: Overrides::default(),
            report_only: false,
            coeff_bound: 2,
        }
    }
}

pub const DEFAULT_EPS: (i64, i64) = (1, 4);
pub const DEFAULT_SVP_ETA: i64 = 24;
pub const DEFAULT_P: u32 = 2;

impl Options {
    fn eps(&self) -> Rational {
        self.eps.clone().unwrap_or_else(|| ratio::frac(DEFAULT_EPS.0, DEFAULT_EPS.1))
    }

    fn p(&self) -> u32 {
        self.p.unwrap_or(DEFAULT_P)
    }

    fn svp_eta(&self) -> Rational {
        self.eta.clone().unwrap_or_else(|| ratio::int(DEFAULT_SVP_ETA))
    }
}

/// One executed reduction with digests of both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub reduction: String,
    pub input_digest: String,
    pub output_digest: String,
    pub input_shape: String,
    pub output_shape: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    #[serde(rename = "YES")]
    Yes,
    #[serde(rename = "NO")]
    No,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Yes => "YES",
            Case::No => "NO",
        })
    }
}

/// A constructed witness or an oracle certificate for one stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub stage: String,
    pub case: Case,
    pub method: String,
    pub passed: bool,
    pub detail: String,
}

/// Fraction of seeds on which a randomized stage produced a YES witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuccessRecord {
    pub stage: String,
    pub seeds: u64,
    pub successes: u64,
    pub fraction: String,
    pub required: String,
    pub passed: bool,
}

/// Claimed gap of a stage against the ratio actually observed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapRecord {
    pub stage: String,
    pub claimed: String,
    pub observed: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "BUDGET")]
    Budget,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Budget => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Budget => "BUDGET",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub pipeline: String,
    pub input_digest: String,
    pub seed: u64,
    pub seeds: u64,
    pub budget: u64,
    pub case: Option<Case>,
    pub verdict: Verdict,
    pub stages: Vec<StageRecord>,
    pub witness_checks: Vec<WitnessCheck>,
    pub success: Vec<SuccessRecord>,
    pub gaps: Vec<GapRecord>,
    /// Claims that were not checked, with the reason.
    pub unchecked: Vec<String>,
    pub feasibility: BTreeMap<String, String>,
    pub error: Option<String>,
}

impl VerificationReport {
    fn new(pipeline: Pipeline, source: &Source, opts: &Options) -> Self {
        VerificationReport {
            pipeline: pipeline.to_string(),
            input_digest: source.digest(),
            seed: opts.seed,
            seeds: opts.seeds,
            budget: opts.budget.limit(),
            case: None,
            verdict: Verdict::Pass,
            stages: Vec::new(),
            witness_checks: Vec::new(),
            success: Vec::new(),
            gaps: Vec::new(),
            unchecked: Vec::new(),
            feasibility: BTreeMap::new(),
            error: None,
        }
    }

    fn check(&mut self, stage: &str, case: Case, method: &str, passed: bool, detail: impl Into<String>) {
        self.witness_checks.push(WitnessCheck {
            stage: stage.into(),
            case,
            method: method.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn gap(&mut self, stage: &str, claimed: &Rational, observed: String, holds: bool) {
        self.gaps.push(GapRecord {
            stage: stage.into(),
            claimed: ratio::show(claimed),
            observed,
            holds,
        });
    }

    fn settle(&mut self) {
        let failed = self.witness_checks.iter().any(|c| !c.passed)
            || self.success.iter().any(|s| !s.passed)
            || self.gaps.iter().any(|g| !g.holds);
        self.verdict = if failed {
            Verdict::Fail
        } else if self.error.is_some() {
            Verdict::Budget
        } else {
            Verdict::Pass
        };
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Outcome of [`cmd_reduce`]; report-only SVP runs write no instance.
#[derive(Debug, Clone, Serialize)]
pub struct ReduceOutcome {
    #[serde(skip)]
    pub output: Option<InstanceFile>,
    pub stage: StageRecord,
    pub feasibility: BTreeMap<String, String>,
}

impl ReduceOutcome {
    /// Stage record and feasibility figures as JSON.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("outcome serializes");
        s.push('\n');
        s
    }
}

fn rational_param(file: &InstanceFile, key: &str) -> Result<Option<Rational>> {
    file.params.get(key).map(|v| ratio::parse(v)).transpose()
}

/// Input gap: the file's `gamma` param, else `--gamma`.
fn input_gap(file: &InstanceFile, opts: &Options) -> Result<Rational> {
    match rational_param(file, "gamma")? {
        Some(g) => Ok(g),
        None => opts.gamma.clone().ok_or_else(|| {
            Error::InvalidParameter("the input carries no gamma param; pass --gamma".into())
        }),
    }
}

/// NO threshold of a self-composition: `T ↦ T + T²` with `T = γk`.
fn composed_gap(gamma: &Rational, k: usize, k_out: usize) -> Rational {
    let t = gamma * ratio::from_count(k);
    (&t + &t * &t) / ratio::from_count(k_out)
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index))
}

/// Gadget for an SNC instance with `q` columns and parameter `t`.
fn build_gadget(
    q: usize,
    t: usize,
    gamma_prime: &Rational,
    gamma: &Rational,
    opts: &Options,
) -> Result<(Box<dyn CoveringGadget>, GadgetParams)> {
    match opts.gadget {
        GadgetChoice::Micro => {
            let r = opts.overrides.r.unwrap_or(1);
            let reps = match opts.overrides.reps {
                Some(reps) => reps,
                None => (r + 1..=4096)
                    .find(|&reps| pick_window_params(gamma_prime, gamma, t, reps, r).is_ok())
                    .ok_or_else(|| Error::EmptyWindow("no repetition count up to 4096 fits".into()))?,
            };
            let gadget = MicroGadget::repetition(q, t, reps, r, opts.budget)?;
            let params = pick_gadget_params(gamma_prime, gamma, &gadget)?;
            Ok((Box::new(gadget), params))
        }
        GadgetChoice::Scc => {
            let gadget = scc_construct(q, t, &opts.eps.clone().unwrap_or_else(|| ratio::frac(1, 2)))?;
            let params = pick_gadget_params(gamma_prime, gamma, &gadget)?;
            Ok((Box::new(gadget), params))
        }
    }
}

fn default_output_gap(gamma_prime: &Rational) -> Rational {
    (Rational::one() + gamma_prime) / ratio::int(2)
}

fn gadget_params_map(p: &GadgetParams, g: &dyn CoveringGadget) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("a".into(), p.a.to_string());
    m.insert("b".into(), p.b.to_string());
    m.insert("k_out".into(), p.k_out.to_string());
    m.insert("gamma".into(), ratio::show(&p.gamma));
    m.insert("gamma_prime".into(), ratio::show(&p.gamma_prime));
    m.insert("window".into(), format!("({}, {})", ratio::show(&p.window.0), ratio::show(&p.window.1)));
    m.insert("gadget".into(), format!("h={} m={} q={} t={} d={} r={}", g.h(), g.m(), g.q(), g.t(), g.d(), g.r()));
    m.insert("delta".into(), g.delta().to_string());
    m
}

/// Applies one edge of the reduction graph.
pub fn cmd_reduce(from: Node, to: Node, source: &Source, opts: &Options) -> Result<ReduceOutcome> {
    if source.node() != from {
        return Err(Error::InvalidInstance(format!(
            "input is a {} instance, not {from}",
            source.node()
        )));
    }
    let illegal = || Error::IllegalEdge {
        from: from.to_string(),
        to: to.to_string(),
    };
    let mut params = BTreeMap::new();
    let mut feasibility = BTreeMap::new();
    let output: Option<InstanceFile> = match (source, to) {
        (Source::Cnf(phi), Node::Instance(Kind::Csp2)) => {
            let k = opts
                .parts
                .ok_or_else(|| Error::InvalidParameter("cnf→csp2 needs --parts".into()))?;
            let red = threesat_to_2csp(phi, k, &mut rng_for(opts.seed, 0))?;
            params.insert("parts".into(), k.to_string());
            params.insert("seed".into(), opts.seed.to_string());
            Some(InstanceFile::new(Payload::Csp2(red.csp)).with_param("parts", k))
        }
        (Source::Cnf(_), _) => return Err(illegal()),
        (Source::Instance(file), Node::Instance(target)) => {
            let out = reduce_instance(file, target, opts, &mut params, &mut feasibility)?;
            match out {
                Some(o) => Some(o),
                None if target == Kind::Svp => None,
                None => return Err(illegal()),
            }
        }
        (Source::Instance(_), Node::Cnf) => return Err(illegal()),
    };
    let (output_digest, output_shape) = match &output {
        Some(o) => (o.digest(), shape(&o.payload)),
        None => (String::new(), "report-only".to_string()),
    };
    Ok(ReduceOutcome {
        stage: StageRecord {
            reduction: format!("{from}->{to}"),
            input_digest: source.digest(),
            output_digest,
            input_shape: source.shape(),
            output_shape,
            params,
        },
        output,
        feasibility,
    })
}

fn illegal_edge(from: Kind, to: Kind) -> Error {
    Error::IllegalEdge {
        from: from.to_string(),
        to: to.to_string(),
    }
}

/// `None` only for a report-only SVP reduction.
fn reduce_instance(
    file: &InstanceFile,
    target: Kind,
    opts: &Options,
    params: &mut BTreeMap<String, String>,
    feasibility: &mut BTreeMap<String, String>,
) -> Result<Option<InstanceFile>> {
    let from = file.kind();
    let out = match (&file.payload, target) {
        (Payload::Csp2(g), Kind::Mld) => {
            let eps = opts.eps();
            let red = csp_to_mld(g, &eps)?;
            params.insert("eps".into(), ratio::show(&eps));
            InstanceFile::new(Payload::Mld(red.instance))
                .with_param("eps", ratio::show(&eps))
                .with_param("gamma", ratio::show(&red.gap))
        }
        (Payload::Mld(i), Kind::Mld) => {
            let gamma = input_gap(file, opts)?;
            let out = compose(i, i)?;
            let gap = composed_gap(&gamma, i.k, out.k);
            params.insert("gamma_in".into(), ratio::show(&gamma));
            InstanceFile::new(Payload::Mld(out)).with_param("gamma", ratio::show(&gap))
        }
        (Payload::Mld(i), Kind::Snc) => {
            let gamma = input_gap(file, opts)?;
            params.insert("gamma".into(), ratio::show(&gamma));
            InstanceFile::new(Payload::Snc(mld_to_snc(i, &gamma)?)).with_param("gamma", ratio::show(&gamma))
        }
        (Payload::Snc(i), Kind::Mdp) => {
            let gamma_prime = rational_param(file, "gamma")?.ok_or_else(|| {
                Error::InvalidParameter("the SNC input carries no gamma param".into())
            })?;
            let gamma = opts.gamma.clone().unwrap_or_else(|| default_output_gap(&gamma_prime));
            let (gadget, gp) = build_gadget(i.a.cols(), i.k, &gamma_prime, &gamma, opts)?;
            let red = snc_to_mdp(i, &gp, gadget.as_ref(), &mut rng_for(opts.seed, 0))?;
            params.extend(gadget_params_map(&gp, gadget.as_ref()));
            params.insert("seed".into(), opts.seed.to_string());
            InstanceFile::new(Payload::Mdp(red.instance)).with_param("gamma", ratio::show(&gamma))
        }
        (Payload::Mdp(i), Kind::Mdp) => {
            let out = mdp_amplify(i, 1, opts.budget)?;
            let mut f = InstanceFile::new(Payload::Mdp(out));
            if let Some(g) = rational_param(file, "gamma")? {
                f = f.with_param("gamma", ratio::show(&(&g * &g)));
            }
            f
        }
        (Payload::Csp2(g), Kind::Lvs) => {
            let eps = opts.eps();
            let red = crate::svpchain::csp_to_lvs(g, &eps)?;
            params.insert("eps".into(), ratio::show(&eps));
            InstanceFile::new(Payload::Lvs(red.instance))
                .with_param("eps", ratio::show(&eps))
                .with_param("gamma", ratio::show(&red.gap))
        }
        (Payload::Lvs(i), Kind::Lvs) => {
            let gamma = input_gap(file, opts)?;
            let out = lvs_compose(i, i)?;
            let gap = composed_gap(&gamma, i.k, out.k);
            params.insert("gamma_in".into(), ratio::show(&gamma));
            InstanceFile::new(Payload::Lvs(out)).with_param("gamma", ratio::show(&gap))
        }
        (Payload::Lvs(i), Kind::Snvp) => {
            let gamma = input_gap(file, opts)?;
            let p = opts.p();
            params.insert("gamma".into(), ratio::show(&gamma));
            params.insert("p".into(), p.to_string());
            InstanceFile::new(Payload::Snvp(lvs_to_snvp(i, &gamma, p)?))
                .with_param("gamma", ratio::show(&gamma))
        }
        (Payload::Snvp(i), Kind::Svp) => {
            let chain = svp_params(i, opts)?;
            let report = feasibility_report(i.b.rows(), i.b.cols(), &chain)?;
            feasibility.extend(feasibility_map(&chain, &report));
            params.insert("eta".into(), ratio::show(&chain.eta));
            params.insert("seed".into(), opts.seed.to_string());
            if opts.report_only || opts.overrides.h.is_none() {
                return Ok(None);
            }
            let built = materialize_svp(i, &chain, opts.seed)?;
            params.insert("rho".into(), built.rho.to_string());
            InstanceFile::new(Payload::Svp(built.instance.clone()))
                .with_param("gamma", ratio::show(&chain.gamma_p))
        }
        (Payload::Svp(i), Kind::Svp) => {
            let out = svp_amplify_l2(i, &rational_param(file, "no_bound")?.unwrap_or_else(|| i.k_pp.clone()))?;
            let mut f = InstanceFile::new(Payload::Svp(out.instance))
                .with_param("no_bound", ratio::show(&out.no_bound_pp));
            if let Some(g) = rational_param(file, "gamma")? {
                f = f.with_param("gamma", ratio::show(&(&g * &g)));
            }
            f
        }
        _ => return Err(illegal_edge(from, target)),
    };
    Ok(Some(out))
}

fn svp_params(i: &SnvpInstance, opts: &Options) -> Result<SvpChainParams> {
    let mut chain = SvpChainParams::new(i.p, &opts.svp_eta(), i.t)?;
    let o = &opts.overrides;
    chain.h_override = o.h.clone();
    chain.q_override = o.q_scale.clone();
    chain.d_override = o.d_scale.clone();
    chain.rho_override = o.rho.clone();
    if let Some(r) = o.r {
        chain.r = r;
    }
    Ok(chain)
}

fn feasibility_map(chain: &SvpChainParams, f: &SvpFeasibility) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let pair = |a: &BigInt, b: &BigInt| format!("{} x {}", show_big(a), show_big(b));
    m.insert("p".into(), chain.p.to_string());
    m.insert("eta".into(), ratio::show(&chain.eta));
    m.insert("t".into(), chain.t.to_string());
    m.insert("l".into(), chain.l.to_string());
    m.insert("r".into(), chain.r.to_string());
    m.insert("gamma_p".into(), ratio::show(&chain.gamma_p));
    m.insert("n".into(), f.n.to_string());
    m.insert("q".into(), f.q.to_string());
    m.insert("h".into(), show_big(&f.h));
    m.insert("g".into(), show_big(&f.g));
    m.insert("intermediate_shape".into(), pair(&f.intermediate_shape.0, &f.intermediate_shape.1));
    m.insert("final_shape".into(), pair(&f.final_shape.0, &f.final_shape.1));
    m.insert("n_good".into(), f.n_good.to_string());
    m.insert("n_annoying".into(), f.n_annoying.to_string());
    m.insert("rho_range".into(), format!("[{}, {}]", f.rho_range.0, f.rho_range.1));
    m.insert("Q".into(), show_big(&f.q_scale));
    m.insert("D".into(), show_big(&f.d_scale));
    m.insert("budget".into(), ratio::show(&f.budget));
    m.insert("row_bound_holds".into(), f.row_bound_holds.to_string());
    m.insert("materializable".into(), f.materializable.to_string());
    m
}

struct MaterializedSvp {
    instance: crate::latticecore::SvpInstance,
    rho: BigInt,
    b_int: crate::IntMatrix,
    bch: crate::svpchain::BchLatticeGadget,
    center: crate::svpchain::CenterSample,
    fin: crate::svpchain::FinalLattice,
}

fn materialize_svp(i: &SnvpInstance, chain: &SvpChainParams, seed: u64) -> Result<MaterializedSvp> {
    let h = chain.block_length(i.b.rows())?;
    let h_small = usize::try_from(&h)
        .ok()
        .filter(|&h| h < 1 << 16)
        .ok_or_else(|| Error::SizeOverflow(format!("h = {} cannot be materialized", show_big(&h))))?;
    let bch = bch_lattice(chain.l, h_small, chain.q_override.clone())?;
    let mut rng = rng_for(seed, 0);
    let center = bch_center_sample(&bch, chain.r, &mut rng);
    let b_int = intermediate_lattice(i, chain, &bch, &center.s)?;
    let n_good = good_vector_bound(&h, chain.l, chain.r);
    let fin = final_lattice(&b_int, chain, &n_good, &mut rng)?;
    Ok(MaterializedSvp {
        instance: fin.instance.clone(),
        rho: fin.rho.clone(),
        b_int,
        bch,
        center,
        fin,
    })
}

/// Named end-to-end pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    /// CSP → MLD → SNC → MDP through a covering gadget.
    Mdp,
    /// CSP → LVS → SNVP → SVP through the BCH lattice.
    Svp,
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mdp" => Ok(Pipeline::Mdp),
            "svp" => Ok(Pipeline::Svp),
            _ => Err(Error::InvalidParameter(format!("unknown pipeline {s:?}; expected mdp or svp"))),
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::Mdp => "csp->mld->snc->mdp",
            Pipeline::Svp => "csp->lvs->snvp->svp",
        })
    }
}

/// Runs a pipeline over the seed sweep. Budget exhaustion yields a partial
/// report with verdict `BUDGET`; other errors are returned.
pub fn cmd_verify(pipeline: Pipeline, source: &Source, opts: &Options) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(pipeline, source, opts);
    let outcome = match pipeline {
        Pipeline::Mdp => verify_mdp(&mut report, source, opts),
        Pipeline::Svp => verify_svp(&mut report, source, opts),
    };
    match outcome {
        Ok(()) => {}
        Err(e @ Error::TooLarge { .. }) => report.error = Some(e.to_string()),
        Err(e) => return Err(e),
    }
    report.settle();
    Ok(report)
}

fn stage_record(
    reduction: &str,
    input: &InstanceFile,
    output: &InstanceFile,
    params: BTreeMap<String, String>,
) -> StageRecord {
    StageRecord {
        reduction: reduction.into(),
        input_digest: input.digest(),
        output_digest: output.digest(),
        input_shape: shape(&input.payload),
        output_shape: shape(&output.payload),
        params,
    }
}

/// YES when `val = 1`, NO when `val < 1 − ε`, an error inside the gap.
fn csp_case(g: &Csp2Instance, eps: &Rational, budget: Budget) -> Result<(Case, Vec<u32>)> {
    let v = csp_value(g, budget)?;
    if v.value.is_one() {
        Ok((Case::Yes, v.assignment))
    } else if v.value < Rational::one() - eps {
        Ok((Case::No, v.assignment))
    } else {
        Err(Error::InvalidInstance(format!(
            "value {} lies in the promise gap [1 − ε, 1)",
            ratio::show(&v.value)
        )))
    }
}

fn floor_count(gamma: &Rational, k: usize) -> Result<usize> {
    Ok(ratio::floor_u64(&(gamma * ratio::from_count(k)))? as usize)
}

fn verify_mdp(report: &mut VerificationReport, source: &Source, opts: &Options) -> Result<()> {
    let not_supported = || Error::InvalidInstance("the mdp pipeline starts from csp2, mld or snc".into());
    let Source::Instance(file) = source else {
        return Err(not_supported());
    };
    let budget = opts.budget;
    let (snc_file, gap, case, witness) = match &file.payload {
        Payload::Csp2(g) => {
            let eps = opts.eps();
            let (case, psi) = csp_case(g, &eps, budget)?;
            report.case = Some(case);
            let (mld, gap, x) = match csp_to_mld(g, &eps) {
                Ok(red) => {
                    let mld_file = InstanceFile::new(Payload::Mld(red.instance.clone()));
                    let mut params = BTreeMap::new();
                    params.insert("eps".into(), ratio::show(&eps));
                    report.stages.push(stage_record("csp2->mld", file, &mld_file, params));
                    let x = match case {
                        Case::Yes => {
                            let x = red.lift(g, &psi)?;
                            let ok = red.instance.is_solution(&x) && x.weight() == red.instance.k;
                            report.check(
                                "csp2->mld",
                                Case::Yes,
                                "lifted assignment",
                                ok,
                                format!("weight {} for k = {}", x.weight(), red.instance.k),
                            );
                            Some(x)
                        }
                        Case::No => None,
                    };
                    (red.instance, red.gap, x)
                }
                Err(Error::EmptyConstraint { edge }) => {
                    report.unchecked.push(format!(
                        "edge {edge} has no allowed pair; the canonical NO instance replaces the reduction"
                    ));
                    (MldInstance::canonical_no(), Rational::one() + &eps / ratio::int(3), None)
                }
                Err(e) => return Err(e),
            };
            if case == Case::No {
                check_mld_no(report, &mld, &gap, budget)?;
            }
            snc_from_mld(report, &mld, &gap, case, x)?
        }
        Payload::Mld(i) => {
            let gap = input_gap(file, opts)?;
            let (case, x) = classify_mld(report, i, &gap, budget)?;
            report.case = Some(case);
            snc_from_mld(report, i, &gap, case, x)?
        }
        Payload::Snc(i) => {
            let gap = input_gap(file, opts)?;
            let (case, x) = match snc_exact(&i.a, &i.y, i.k, &gap, budget)? {
                SncDecision::Yes(x) => (Case::Yes, Some(x)),
                SncDecision::No => (Case::No, None),
                SncDecision::Neither => {
                    return Err(Error::InvalidInstance("the SNC input satisfies neither promise".into()))
                }
            };
            report.case = Some(case);
            let method = "exact SNC decision";
            report.check("snc", case, method, true, "classified by full enumeration");
            (file.clone(), gap, case, x)
        }
        _ => return Err(not_supported()),
    };
    gadget_stage(report, &snc_file, &gap, case, witness.as_ref(), opts)
}

fn check_mld_no(report: &mut VerificationReport, mld: &MldInstance, gap: &Rational, budget: Budget) -> Result<()> {
    let cap = floor_count(gap, mld.k)?;
    let found = mld_exact(&mld.a, &mld.y, cap, budget)?;
    report.check(
        "csp2->mld",
        Case::No,
        "minimum-weight decoding search",
        found.is_none(),
        match &found {
            None => format!("no solution of weight ≤ {cap}"),
            Some(x) => format!("solution of weight {} ≤ {cap}", x.weight()),
        },
    );
    report.gap(
        "csp2->mld",
        gap,
        match &found {
            None => format!("> {cap}/{}", mld.k),
            Some(x) => format!("{}/{}", x.weight(), mld.k),
        },
        found.is_none(),
    );
    Ok(())
}

fn classify_mld(
    report: &mut VerificationReport,
    i: &MldInstance,
    gap: &Rational,
    budget: Budget,
) -> Result<(Case, Option<BitVector>)> {
    if let Some(x) = mld_exact(&i.a, &i.y, i.k, budget)? {
        report.check("mld", Case::Yes, "minimum-weight decoding search", true, format!("weight {}", x.weight()));
        return Ok((Case::Yes, Some(x)));
    }
    let cap = floor_count(gap, i.k)?;
    match mld_exact(&i.a, &i.y, cap, budget)? {
        None => {
            report.check("mld", Case::No, "minimum-weight decoding search", true, format!("no solution of weight ≤ {cap}"));
            Ok((Case::No, None))
        }
        Some(_) => Err(Error::InvalidInstance("the MLD input satisfies neither promise".into())),
    }
}

fn snc_from_mld(
    report: &mut VerificationReport,
    mld: &MldInstance,
    gap: &Rational,
    case: Case,
    x: Option<BitVector>,
) -> Result<(InstanceFile, Rational, Case, Option<BitVector>)> {
    let budget = Budget(report.budget);
    let snc = mld_to_snc(mld, gap)?;
    let mld_file = InstanceFile::new(Payload::Mld(mld.clone())).with_param("gamma", ratio::show(gap));
    let snc_file = InstanceFile::new(Payload::Snc(snc.clone())).with_param("gamma", ratio::show(gap));
    let mut params = BTreeMap::new();
    params.insert("gamma".into(), ratio::show(gap));
    report.stages.push(stage_record("mld->snc", &mld_file, &snc_file, params));
    match (case, &x) {
        (Case::Yes, Some(x)) => {
            let residual = snc.residual_weight(x);
            let ok = residual <= snc.k && x.weight() <= snc.k;
            report.check(
                "mld->snc",
                Case::Yes,
                "mapped witness",
                ok,
                format!("weight {}, residual weight {residual}, k = {}", x.weight(), snc.k),
            );
        }
        (Case::Yes, None) => report.unchecked.push("no SNC witness available".into()),
        (Case::No, _) => {
            let decision = snc_exact(&snc.a, &snc.y, snc.k, gap, budget)?;
            report.check(
                "mld->snc",
                Case::No,
                "exact SNC decision",
                decision == SncDecision::No,
                format!("{decision:?}"),
            );
        }
    }
    Ok((snc_file, gap.clone(), case, x))
}

fn gadget_stage(
    report: &mut VerificationReport,
    snc_file: &InstanceFile,
    gap: &Rational,
    case: Case,
    witness: Option<&BitVector>,
    opts: &Options,
) -> Result<()> {
    let Payload::Snc(snc) = &snc_file.payload else {
        unreachable!("gadget stage receives an SNC instance");
    };
    if opts.seeds == 0 {
        return Err(Error::InvalidParameter("at least one seed is required".into()));
    }
    let budget = opts.budget;
    let gamma = opts.gamma.clone().unwrap_or_else(|| default_output_gap(gap));
    let (gadget, gp) = build_gadget(snc.a.cols(), snc.k, gap, &gamma, opts)?;
    let cap = floor_count(&gamma, gp.k_out as usize)?;
    let mut digests = String::new();
    let mut successes = 0u64;
    let mut heavy_witnesses = 0u64;
    let mut max_yes_weight = 0usize;
    let mut no_failures = 0u64;
    let mut min_no_distance: Option<usize> = None;
    for index in 0..opts.seeds {
        let red = snc_to_mdp(snc, &gp, gadget.as_ref(), &mut rng_for(opts.seed, index))?;
        digests.push_str(&InstanceFile::new(Payload::Mdp(red.instance.clone())).digest());
        digests.push('\n');
        match case {
            Case::Yes => {
                let x = witness.expect("YES case carries a witness");
                if let Some(z) = gadget.cover_witness(x, &red.center, budget)? {
                    let codeword = red.instance.a.mul_vec(&crate::mdpchain::mdp_witness(&z));
                    let w = codeword.weight();
                    max_yes_weight = max_yes_weight.max(w);
                    if w >= 1 && w <= gp.k_out as usize {
                        successes += 1;
                    } else {
                        heavy_witnesses += 1;
                    }
                }
            }
            Case::No => match red.instance.distance(Some(cap), budget)? {
                Distance::Exceeds { .. } => {}
                Distance::Exact { distance, .. } => {
                    min_no_distance = Some(min_no_distance.map_or(distance, |m| m.min(distance)));
                    if distance <= cap {
                        no_failures += 1;
                    }
                }
            },
        }
    }
    let mut params = gadget_params_map(&gp, gadget.as_ref());
    params.insert("seeds".into(), opts.seeds.to_string());
    params.insert("output_digest".into(), "sha256 of the per-seed digests, one per line".into());
    report.stages.push(StageRecord {
        reduction: "snc->mdp".into(),
        input_digest: snc_file.digest(),
        output_digest: digest_text(&digests),
        input_shape: shape(&snc_file.payload),
        output_shape: format!("{}x{}", gp.a as usize * snc.a.rows() + gp.b as usize * gadget.h(), gadget.m() + 1),
        params,
    });
    let k_out = gp.k_out as usize;
    match case {
        Case::Yes => {
            let fraction = Rational::new(successes.into(), opts.seeds.into());
            let delta = gadget.delta();
            report.success.push(SuccessRecord {
                stage: "snc->mdp".into(),
                seeds: opts.seeds,
                successes,
                fraction: ratio::show(&fraction),
                required: format!("δ − 3·√(δ/{}) with δ = {delta}", opts.seeds),
                passed: delta.is_met_statistically(&fraction, opts.seeds),
            });
            report.check(
                "snc->mdp",
                Case::Yes,
                "covering witness",
                heavy_witnesses == 0,
                format!("{successes} witnesses of weight ≤ {k_out}, {heavy_witnesses} heavier"),
            );
            report.gap("snc->mdp", &gamma, format!("max witness weight {max_yes_weight}/{k_out}"), heavy_witnesses == 0);
        }
        Case::No => {
            report.check(
                "snc->mdp",
                Case::No,
                "capped distance search",
                no_failures == 0,
                format!("{} of {} seeds exceed γ·k_out = {cap}", opts.seeds - no_failures, opts.seeds),
            );
            let observed = match min_no_distance {
                Some(d) => format!("min distance {d}/{k_out}"),
                None => format!("distance > {cap}/{k_out} on every seed"),
            };
            report.gap("snc->mdp", &gamma, observed, no_failures == 0);
        }
    }
    Ok(())
}

fn verify_svp(report: &mut VerificationReport, source: &Source, opts: &Options) -> Result<()> {
    let not_supported = || Error::InvalidInstance("the svp pipeline starts from csp2, lvs or snvp".into());
    let Source::Instance(file) = source else {
        return Err(not_supported());
    };
    let budget = opts.budget;
    let p = opts.p();
    let (snvp_file, case, x) = match &file.payload {
        Payload::Csp2(g) => {
            let eps = opts.eps();
            let (case, psi) = csp_case(g, &eps, budget)?;
            report.case = Some(case);
            let red = crate::svpchain::csp_to_lvs(g, &eps)?;
            let lvs_file = InstanceFile::new(Payload::Lvs(red.instance.clone()));
            let mut params = BTreeMap::new();
            params.insert("eps".into(), ratio::show(&eps));
            report.stages.push(stage_record("csp2->lvs", file, &lvs_file, params));
            let x = match case {
                Case::Yes => {
                    let x = red.lift(g, &psi)?;
                    let support = x.iter().filter(|v| !v.is_zero()).count();
                    let ok = red.instance.is_solution(&x) && support == red.instance.k;
                    report.check(
                        "csp2->lvs",
                        Case::Yes,
                        "lifted assignment",
                        ok,
                        format!("support {support} for k = {}", red.instance.k),
                    );
                    Some(x)
                }
                Case::No => {
                    check_lvs_no(report, "csp2->lvs", &red.instance, &red.gap, budget)?;
                    None
                }
            };
            snvp_from_lvs(report, &red.instance, &red.gap, Some(case), x, p, budget)?
        }
        Payload::Lvs(i) => {
            let gap = input_gap(file, opts)?;
            let case = if check_lvs_no(report, "lvs", i, &gap, budget)? {
                Some(Case::No)
            } else {
                report.witness_checks.pop();
                report.gaps.pop();
                report.unchecked.push("no constructive YES witness for a bare LVS input".into());
                None
            };
            report.case = case;
            snvp_from_lvs(report, i, &gap, case, None, p, budget)?
        }
        Payload::Snvp(i) => {
            let gap = input_gap(file, opts)?;
            let case = if snvp_no_check(i, &gap, budget)? {
                report.check("snvp", Case::No, "rational-span support scan", true, "no sparse consistent subsystem");
                Some(Case::No)
            } else {
                report.unchecked.push("no constructive YES witness for a bare SNVP input".into());
                None
            };
            report.case = case;
            (file.clone(), case, None)
        }
        _ => return Err(not_supported()),
    };
    svp_stage(report, &snvp_file, case, x.as_ref(), opts)
}

/// Records the LVS NO certificate and returns whether it held.
fn check_lvs_no(
    report: &mut VerificationReport,
    stage: &str,
    lvs: &LvsInstance,
    gap: &Rational,
    budget: Budget,
) -> Result<bool> {
    let cap = floor_count(gap, lvs.k)?;
    let ok = lvs_no_check(lvs, cap, budget)?;
    report.check(
        stage,
        Case::No,
        "rational-span support scan",
        ok,
        format!("no support of size ≤ {cap} spans a nonzero multiple of the target"),
    );
    report.gap(stage, gap, if ok { format!("> {cap}/{}", lvs.k) } else { "not certified".into() }, ok);
    Ok(ok)
}

fn snvp_from_lvs(
    report: &mut VerificationReport,
    lvs: &LvsInstance,
    gap: &Rational,
    case: Option<Case>,
    x: Option<IntVector>,
    p: u32,
    budget: Budget,
) -> Result<(InstanceFile, Option<Case>, Option<IntVector>)> {
    let snvp = lvs_to_snvp(lvs, gap, p)?;
    let lvs_file = InstanceFile::new(Payload::Lvs(lvs.clone())).with_param("gamma", ratio::show(gap));
    let snvp_file = InstanceFile::new(Payload::Snvp(snvp.clone())).with_param("gamma", ratio::show(gap));
    let mut params = BTreeMap::new();
    params.insert("gamma".into(), ratio::show(gap));
    params.insert("p".into(), p.to_string());
    report.stages.push(stage_record("lvs->snvp", &lvs_file, &snvp_file, params));
    match (case, &x) {
        (Some(Case::Yes), Some(x)) => {
            let residual = snvp.residual(x);
            let binary = residual.iter().all(|v| v.is_zero() || v.is_one());
            let weight = residual.iter().filter(|v| !v.is_zero()).count();
            let norm = lp_norm_pp(&residual, p);
            let ok = binary && weight <= snvp.t && norm <= BigInt::from(snvp.t);
            report.check(
                "lvs->snvp",
                Case::Yes,
                "mapped witness",
                ok,
                format!("residual in {{0,1}}: {binary}, weight {weight}, ℓ_p^p = {norm}, t = {}", snvp.t),
            );
        }
        (Some(Case::No), _) => {
            let ok = snvp_no_check(&snvp, gap, budget)?;
            report.check(
                "lvs->snvp",
                Case::No,
                "rational-span support scan",
                ok,
                format!("no consistent subsystem after dropping ≤ ⌊γt⌋ = {} rows", floor_count(gap, snvp.t)?),
            );
        }
        _ => {}
    }
    Ok((snvp_file, case, x))
}

fn svp_stage(
    report: &mut VerificationReport,
    snvp_file: &InstanceFile,
    case: Option<Case>,
    x: Option<&IntVector>,
    opts: &Options,
) -> Result<()> {
    let Payload::Snvp(snvp) = &snvp_file.payload else {
        unreachable!("SVP stage receives an SNVP instance");
    };
    let chain = svp_params(snvp, opts)?;
    let feasibility = feasibility_report(snvp.b.rows(), snvp.b.cols(), &chain)?;
    report.feasibility = feasibility_map(&chain, &feasibility);
    if opts.report_only || opts.overrides.h.is_none() {
        report
            .unchecked
            .push("SVP stage in report-only mode: dimensions and counts reported, nothing materialized".into());
        return Ok(());
    }
    let built = materialize_svp(snvp, &chain, opts.seed)?;
    let svp_file = InstanceFile::new(Payload::Svp(built.instance.clone()));
    let mut params = BTreeMap::new();
    params.insert("eta".into(), ratio::show(&chain.eta));
    params.insert("l".into(), chain.l.to_string());
    params.insert("r".into(), chain.r.to_string());
    params.insert("h".into(), built.bch.h.to_string());
    params.insert("rho".into(), built.rho.to_string());
    report.stages.push(stage_record("snvp->svp", snvp_file, &svp_file, params));
    let size = built.bch.h + built.bch.g;
    let expected = (snvp.b.rows() + size + 1, snvp.b.cols() + size + 2);
    let actual = (built.instance.b.rows(), built.instance.b.cols());
    report.check(
        "snvp->svp",
        case.unwrap_or(Case::Yes),
        "structure",
        expected == actual && built.instance.k_pp == chain.final_budget(),
        format!("shape {}x{}, budget {}", actual.0, actual.1, ratio::show(&built.instance.k_pp)),
    );
    report.unchecked.push("SVP NO side is not enumerable at these dimensions".into());
    let (Some(Case::Yes), Some(x)) = (case, x) else {
        return Ok(());
    };
    let Some(count) = built.center.good_count else {
        report.unchecked.push("good vectors are not enumerable (BCH code dimension too large)".into());
        return Ok(());
    };
    if count == 0 {
        report.unchecked.push("the sampled center has no good vector".into());
        return Ok(());
    }
    let zs = built.bch.good_coefficients(&built.center.prefix, chain.r, opts.budget)?;
    let mut all_within = true;
    let mut final_witness = None;
    for z in &zs {
        let mut w = x.clone();
        w.extend(z.iter().cloned());
        w.push(-BigInt::one());
        let v = built.b_int.mul_vec(&w);
        all_within &= Rational::from_integer(lp_norm_pp(&v, chain.p)) <= built.instance.k_pp;
        if final_witness.is_none() {
            final_witness = built.fin.lift_witness(&built.b_int, &w);
        }
    }
    report.check(
        "snvp->svp",
        Case::Yes,
        "good vectors of the intermediate lattice",
        all_within,
        format!("{} good vectors, all within the budget: {all_within}", zs.len()),
    );
    match final_witness {
        Some(w) => {
            let ok = built.instance.within_budget(&w);
            report.check("snvp->svp", Case::Yes, "final lattice witness", ok, "good vector meets the constraint mod ρ");
        }
        None => report
            .unchecked
            .push("no good vector satisfies the random constraint mod ρ for this seed".into()),
    }
    Ok(())
}

/// Result of running an oracle on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionRecord {
    pub kind: String,
    pub input_digest: String,
    pub value: String,
    pub witness: Option<String>,
    pub exact: bool,
    pub detail: String,
}

impl SolutionRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }
}

fn show_bits(v: &BitVector) -> String {
    v.iter().map(|b| if b { '1' } else { '0' }).collect()
}

fn show_ints(v: &[BigInt]) -> String {
    v.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")
}

/// Exposes the exact oracles.
pub fn cmd_solve(file: &InstanceFile, opts: &Options) -> Result<SolutionRecord> {
    let budget = opts.budget;
    let record = |value: String, witness: Option<String>, exact: bool, detail: String| SolutionRecord {
        kind: file.kind().to_string(),
        input_digest: file.digest(),
        value,
        witness,
        exact,
        detail,
    };
    Ok(match &file.payload {
        Payload::Csp2(g) => {
            let v = csp_value(g, budget)?;
            let psi = v.assignment.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            record(ratio::show(&v.value), Some(psi), true, "maximum fraction of satisfied edges".into())
        }
        Payload::Mld(i) => match mld_exact(&i.a, &i.y, i.k, budget)? {
            Some(x) => record(x.weight().to_string(), Some(show_bits(&x)), true, "minimum solution weight".into()),
            None => record(format!("> {}", i.k), None, true, format!("no solution of weight ≤ {}", i.k)),
        },
        Payload::Snc(i) => {
            let gamma = rational_param(file, "gamma")?.or(opts.gamma.clone()).unwrap_or_else(Rational::one);
            let d = snc_exact(&i.a, &i.y, i.k, &gamma, budget)?;
            let witness = match &d {
                SncDecision::Yes(x) => Some(show_bits(x)),
                _ => None,
            };
            let value = match d {
                SncDecision::Yes(_) => "YES",
                SncDecision::No => "NO",
                SncDecision::Neither => "NEITHER",
            };
            record(value.into(), witness, true, format!("decision at γ = {}", ratio::show(&gamma)))
        }
        Payload::Mdp(i) => match min_nonzero_image_weight(&i.a, Some(i.k), budget)? {
            Distance::Exact { distance, codeword, .. } => {
                record(distance.to_string(), Some(show_bits(&codeword)), true, "minimum distance".into())
            }
            Distance::Exceeds { cap } => record(format!("> {cap}"), None, true, "every nonzero codeword is heavier".into()),
        },
        Payload::Lvs(i) => {
            let no = lvs_no_check(i, i.k, budget)?;
            let value = if no { "NO" } else { "SPAN" };
            let detail = if no {
                format!("no support of size ≤ {} spans a nonzero multiple of the target", i.k)
            } else {
                format!("some support of size ≤ {} spans a nonzero rational multiple of the target", i.k)
            };
            record(value.into(), None, true, detail)
        }
        Payload::Snvp(i) => {
            let e = cvp_enum(i, opts.coeff_bound, budget)?;
            record(e.value.to_string(), Some(show_ints(&e.witness)), e.exact, format!("ℓ_{}^{} distance, coefficients in [−{c}, {c}]", i.p, i.p, c = opts.coeff_bound))
        }
        Payload::Svp(i) => {
            let e = svp_enum(&i.b, i.p, opts.coeff_bound, budget)?;
            record(e.value.to_string(), Some(show_ints(&e.witness)), e.exact, format!("ℓ_{}^{} norm, coefficients in [−{c}, {c}]", i.p, i.p, c = opts.coeff_bound))
        }
    })
}
