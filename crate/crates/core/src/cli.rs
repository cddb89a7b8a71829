//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and returns the process exit code: 0 on success, 1 when any
//! emitted comparison failed, 2 on usage or precondition errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baseline::{baseline_census, BaselineKind};
use crate::census::{self, budget_from_env, CensusConfig, MapFamily, SampleScheme};
use crate::error::Result;
use crate::ffield::{make_field, FieldCtx};
use crate::report::{FormulaDump, Mode};
use crate::verify;

#[derive(Debug, Parser)]
#[command(name = "fqdyn", version, about = "Cycle censuses of maps over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Average cycle statistics over polynomials or rational maps of degree d.
    Census(CensusArgs),
    /// Brute-force checks of the counting lemmas and bounds.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Random and quadratic functional-graph baselines.
    #[command(subcommand)]
    Baseline(BaselineCommand),
    /// Evaluate every closed form and bound at (q, d[, k]).
    Theory(TheoryArgs),
    /// Rho-length experiment with Brent's cycle detection.
    Rho(RhoArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Poly,
    Rat,
}

impl From<FamilyArg> for MapFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Poly => MapFamily::Poly,
            FamilyArg::Rat => MapFamily::Rational,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Sampled => Mode::Sampled,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u32,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Monic modulus as comma-separated coefficients, constant term first.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
}

impl FieldArgs {
    fn field(&self) -> Result<FieldCtx> {
        make_field(self.p, self.n, self.modulus.as_deref())
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Evaluation budget for exhaustive runs (default: FQDYN_BUDGET or 1e9).
    #[arg(long)]
    pub budget: Option<u128>,
}

impl RunArgs {
    fn config(&self, kmax: Option<usize>) -> CensusConfig {
        let mut cfg = CensusConfig {
            kmax,
            budget: self.budget.unwrap_or_else(budget_from_env),
            ..CensusConfig::default()
        };
        if let Some(j) = self.jobs {
            cfg = cfg.with_jobs(j);
        }
        cfg
    }
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// In sampled mode, visit every map once instead of drawing at random.
    #[arg(long)]
    pub full_support: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Polynomial cycle totals, cycle-giver counts and per-k averages.
    LemmaPolys(VerifyFieldArgs),
    /// Rational-map counts of degree at most / exactly d.
    RatCount(VerifyFieldArgs),
    /// Constrained monic multiples against the case table.
    Prov(ProvArgs),
    /// Rational-map cycle sandwich and average bounds.
    CycleBounds(VerifyFieldArgs),
}

#[derive(Debug, Args)]
pub struct VerifyFieldArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = 2)]
    pub dmax: usize,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct ProvArgs {
    #[arg(long, default_value_t = 240)]
    pub instances: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Subcommand)]
pub enum BaselineCommand {
    /// Uniformly random self-maps of n points.
    Random(RandomArgs),
    /// Graphs on m*t vertices with every in-degree 0 or m.
    Quadratic(QuadraticArgs),
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub kmax: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct QuadraticArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub t: u64,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub d: u64,
    #[arg(long)]
    pub k: Option<u64>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct RhoArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Poly)]
    pub family: FamilyArg,
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Treat a mean rho length outside the diagnostic band as a failure.
    #[arg(long)]
    pub strict_rho: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

/// Rendered output of one command.
struct Outcome {
    text: String,
    failures: Vec<String>,
}

fn render<T>(format: Format, value: &T, json: fn(&T) -> String, csv: fn(&T) -> String) -> String {
    match format {
        Format::Json => json(value),
        Format::Csv => csv(value),
    }
}

fn execute(cmd: &Command) -> Result<(Outcome, &RunArgs)> {
    match cmd {
        Command::Census(a) => {
            let ctx = a.field.field()?;
            let cfg = a.run.config(a.kmax);
            let report = match a.mode {
                ModeArg::Exhaustive => census::census(&ctx, a.family.into(), a.d, &cfg)?,
                ModeArg::Sampled => {
                    let scheme = if a.full_support {
                        SampleScheme::FullSupport
                    } else {
                        SampleScheme::Uniform
                    };
                    census::sampled_census(&ctx, a.family.into(), a.d, a.samples, a.seed, scheme, &cfg)?
                }
            };
            let text = render(a.run.format, &report, |r| r.to_json(), |r| r.to_csv());
            Ok((Outcome { text, failures: report.failures() }, &a.run))
        }
        Command::Verify(v) => {
            let (verification, run) = match v {
                VerifyCommand::LemmaPolys(a) => {
                    (verify::lemma_polys(&a.field.field()?, a.dmax, &a.run.config(None))?, &a.run)
                }
                VerifyCommand::RatCount(a) => {
                    (verify::rat_count(&a.field.field()?, a.dmax, &a.run.config(None))?, &a.run)
                }
                VerifyCommand::Prov(a) => (verify::prov(a.instances, a.seed)?, &a.run),
                VerifyCommand::CycleBounds(a) => {
                    (verify::cycle_bounds(&a.field.field()?, a.dmax, &a.run.config(None))?, &a.run)
                }
            };
            let text = render(run.format, &verification, |v| v.to_json(), |v| v.to_csv());
            Ok((Outcome { text, failures: verification.failures() }, run))
        }
        Command::Baseline(b) => {
            let (kind, s, run) = match b {
                BaselineCommand::Random(a) => (BaselineKind::Random { n: a.n }, &a.sampling, &a.run),
                BaselineCommand::Quadratic(a) => {
                    (BaselineKind::Quadratic { m: a.m, t: a.t }, &a.sampling, &a.run)
                }
            };
            let report = baseline_census(kind, s.mode.into(), s.samples, s.seed, &run.config(s.kmax))?;
            let text = render(run.format, &report, |r| r.to_json(), |r| r.to_csv());
            Ok((Outcome { text, failures: report.failures() }, run))
        }
        Command::Theory(a) => {
            let ctx = a.field.field()?;
            let dump = FormulaDump::build(ctx.q() as u64, a.d, a.k);
            let text = render(a.run.format, &dump, |d| d.to_json(), |d| d.to_csv());
            Ok((Outcome { text, failures: Vec::new() }, &a.run))
        }
        Command::Rho(a) => {
            let ctx = a.field.field()?;
            let summary = census::rho_experiment(
                &ctx,
                a.d,
                a.family.into(),
                a.samples,
                a.seed,
                a.strict_rho,
                &a.run.config(None),
            )?;
            let mut failures = Vec::new();
            if summary.status == crate::report::Status::Fail {
                failures.push(format!(
                    "mean rho {:.2} outside [{:.2}, {:.2}]",
                    summary.mean_rho, summary.band[0], summary.band[1]
                ));
            }
            let text = render(a.run.format, &summary, |s| s.to_json(), |s| s.to_csv());
            Ok((Outcome { text, failures }, &a.run))
        }
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (outcome, run) = match execute(&cli.command) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let written = match &run.output {
        Some(path) => std::fs::write(path, &outcome.text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(outcome.text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return 2;
    }
    if outcome.failures.is_empty() {
        0
    } else {
        for f in &outcome.failures {
            eprintln!("check failed: {f}");
        }
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_command_lines() {
        Cli::try_parse_from(["fqdyn", "census", "--family", "poly", "--p", "2", "--n", "1", "--d", "2", "--format", "json"]).unwrap();
        Cli::try_parse_from(["fqdyn", "verify", "lemma-polys", "--p", "3", "--n", "1", "--dmax", "3"]).unwrap();
        Cli::try_parse_from(["fqdyn", "baseline", "quadratic", "--m", "2", "--t", "3"]).unwrap();
        Cli::try_parse_from(["fqdyn", "rho", "--p", "10007", "--d", "2", "--strict-rho"]).unwrap();
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["fqdyn", "census", "--bogus"]), 2);
        let out = std::env::temp_dir().join(format!("fqdyn-cli-{}.json", std::process::id()));
        let out_s = out.to_str().unwrap();
        assert_eq!(run(["fqdyn", "census", "--family", "rat", "--p", "5", "--n", "1", "--d", "9", "--output", out_s]), 2);
        assert_eq!(run(["fqdyn", "theory", "--p", "3", "--d", "2", "--output", out_s]), 0);
        let _ = std::fs::remove_file(out);
    }
}
