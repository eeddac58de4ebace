//! Command-line front end: reduce, verify and solve.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use fptgap::harness::{
    cmd_reduce, cmd_solve, cmd_verify, GadgetChoice, Node, Options, Overrides, Pipeline, Source,
};
use fptgap::{ratio, Budget, Error, Rational};

const EXIT_BUDGET: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "fptgap", version, about = "Gap-preserving reductions for codes and lattices with exact oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one reduction and write the resulting instance.
    Reduce {
        /// Source kind: cnf, csp2, mld, snc, mdp, lvs, snvp or svp.
        #[arg(long)]
        from: Node,
        /// Target kind.
        #[arg(long)]
        to: Node,
        input: PathBuf,
        /// Where to write the reduced instance.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a pipeline end to end and emit a verification report.
    Verify {
        /// mdp or svp.
        #[arg(long)]
        pipeline: Pipeline,
        input: PathBuf,
        /// Number of seeds in the sweep.
        #[arg(long, default_value_t = 200)]
        seeds: u64,
        /// Write the report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the exact oracle for an instance.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of enumeration candidates.
    #[arg(long, default_value_t = Budget::DEFAULT.limit())]
    budget: u64,
    #[arg(long, value_parser = parse_rational)]
    eps: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    gamma: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    eta: Option<Rational>,
    #[arg(long)]
    p: Option<u32>,
    /// Number of clause parts for cnf→csp2.
    #[arg(long)]
    parts: Option<usize>,
    /// micro or scc.
    #[arg(long, default_value = "micro")]
    gadget: GadgetChoice,
    /// Replace a derived parameter: h, Q, D, rho, r or reps.
    #[arg(long = "param-override", value_name = "KEY=VALUE")]
    param_override: Vec<String>,
    /// Report dimensions and counts without materializing large instances.
    #[arg(long)]
    report_only: bool,
    /// Coefficient box for lattice enumeration.
    #[arg(long, default_value_t = 2)]
    coeff_bound: u64,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    ratio::parse(s).map_err(|e| e.to_string())
}

impl Common {
    fn options(&self, seeds: u64) -> anyhow::Result<Options> {
        Ok(Options {
            seed: self.seed,
            seeds,
            budget: Budget(self.budget),
            eps: self.eps.clone(),
            gamma: self.gamma.clone(),
            eta: self.eta.clone(),
            p: self.p,
            parts: self.parts,
            gadget: self.gadget,
            overrides: Overrides::parse(&self.param_override)?,
            report_only: self.report_only,
            coeff_bound: self.coeff_bound,
        })
    }
}

fn read_source(path: &Path) -> anyhow::Result<Source> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Source::parse(&text)?)
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Reduce {
            from,
            to,
            input,
            output,
            common,
        } => {
            let opts = common.options(1)?;
            let outcome = cmd_reduce(from, to, &read_source(&input)?, &opts)?;
            if let Some(file) = &outcome.output {
                let path = output.context("--output is required when an instance is produced")?;
                fs::write(&path, file.emit()).with_context(|| format!("writing {}", path.display()))?;
            }
            print!("{}", outcome.to_json());
            Ok(0)
        }
        Command::Verify {
            pipeline,
            input,
            seeds,
            report,
            common,
        } => {
            let opts = common.options(seeds)?;
            let result = cmd_verify(pipeline, &read_source(&input)?, &opts)?;
            write_or_print(report.as_deref(), &result.to_json())?;
            eprintln!("{}", result.verdict);
            Ok(result.verdict.exit_code() as u8)
        }
        Command::Solve { input, common } => {
            let opts = common.options(1)?;
            let Source::Instance(file) = read_source(&input)? else {
                anyhow::bail!(Error::InvalidInstance("solve expects a structured instance file".into()));
            };
            print!("{}", cmd_solve(&file, &opts)?.to_json());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = matches!(e.downcast_ref::<Error>(), Some(Error::TooLarge { .. }));
            ExitCode::from(if budget { EXIT_BUDGET } else { EXIT_INPUT })
        }
    }
}
