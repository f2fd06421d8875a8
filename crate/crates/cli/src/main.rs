use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mbp_core::lattice::{lattice_demo, Defect};
use mbp_core::masking::{self, BraidWord};
use mbp_core::noise::{self, ChannelKind};
use mbp_core::suite::{run_suite, SuiteConfig, SuiteName, SuiteReport};
use mbp_core::{AnyonModel, ModelId, Subspace};

#[derive(Parser, Debug)]
#[command(
    name = "mbp",
    version,
    about = "Verification suites for anyon punctures on the toric code"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Numeric tolerance for floating-point checks.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tolerance: f64,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample count for seeded sweeps (noise parameters and masking inputs).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Print JSON to stdout.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Print a human-readable summary to stdout (default).
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the fusion, R-symbol and F-matrix data of a model.
    DumpModel {
        #[arg(long, value_enum, default_value_t = ModelArg::Ising)]
        model: ModelArg,
    },
    /// Fusion and braiding tables, spins and the braid evolution matrix.
    VerifyAnyons,
    /// Logical gates on the symmetric and antisymmetric subspaces.
    VerifySubspaces,
    /// Collective-noise sweep; with both --subspace and --channel set, prints
    /// the per-sample Gram matrices instead of the suite report.
    NoiseScan {
        #[arg(long, value_enum)]
        subspace: Option<SubspaceArg>,
        #[arg(long, value_enum)]
        channel: Option<ChannelArg>,
    },
    /// Masking marginals and six-puncture braid signs; with --word, checks a
    /// single braid word such as "1,2;2,3".
    MaskCheck {
        #[arg(long)]
        word: Option<String>,
    },
    /// Builds a torus, creates the listed defects and reports rank data.
    LatticeDemo {
        /// Side length of the torus.
        #[arg(long = "L", alias = "side", default_value_t = 8)]
        side: usize,
        /// JSON list of {kind, region, corners}.
        #[arg(long)]
        defects: Option<PathBuf>,
    },
    /// Every suite.
    VerifyAll,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModelArg {
    Toric,
    Ising,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SubspaceArg {
    Symmetric,
    Antisymmetric,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ChannelArg {
    Dephasing,
    Rotation,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every check passed.
fn run(cli: Cli) -> Result<bool> {
    let c = &cli.common;
    match cli.command {
        Command::DumpModel { model } => {
            let id = match model {
                ModelArg::Toric => ModelId::Toric,
                ModelArg::Ising => ModelId::Ising,
            };
            let doc = AnyonModel::by_id(id).to_document();
            let json = serde_json::to_string_pretty(&doc)? + "\n";
            emit(c, &json, &json)?;
            Ok(true)
        }
        Command::VerifyAnyons => suite(c, SuiteName::Anyons),
        Command::VerifySubspaces => suite(c, SuiteName::Subspaces),
        Command::VerifyAll => suite(c, SuiteName::All),
        Command::NoiseScan { subspace, channel } => match (subspace, channel) {
            (None, None) => suite(c, SuiteName::Noise),
            (Some(sub), Some(ch)) => noise_detail(c, sub, ch),
            _ => bail!("--subspace and --channel must be given together"),
        },
        Command::MaskCheck { word: None } => suite(c, SuiteName::Masking),
        Command::MaskCheck { word: Some(w) } => {
            let word: BraidWord = w.parse().map_err(anyhow::Error::msg)?;
            let samples = c.samples.unwrap_or(100);
            let report = masking::mask_check(&AnyonModel::ising(), samples, c.seed, &word)?;
            let ok = report.max_marginal_deviation <= c.tolerance;
            let json = serde_json::to_string_pretty(&report)? + "\n";
            let text = format!(
                "{} braid word {} over {samples} inputs: max marginal deviation {:.3e} (A {:.3e}, B {:.3e}, C {:.3e})\n",
                if ok { "PASS" } else { "FAIL" },
                report.braid_word,
                report.max_marginal_deviation,
                report.per_party_deviations[0],
                report.per_party_deviations[1],
                report.per_party_deviations[2],
            );
            emit(c, &json, &text)?;
            Ok(ok)
        }
        Command::LatticeDemo { side, defects } => {
            let defects: Vec<Defect> = match defects {
                Some(path) => {
                    let raw = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str(&raw)
                        .with_context(|| format!("parsing defects from {}", path.display()))?
                }
                None => Vec::new(),
            };
            let summary = lattice_demo(side, &defects, c.seed)?;
            let json = serde_json::to_string_pretty(&summary)? + "\n";
            let text = format!(
                "L = {side}: {} qubits, {} generators, rank {}, logical qubits {}, commutation {}\n",
                summary.n_qubits,
                summary.n_generators,
                summary.rank,
                summary
                    .logical_count
                    .map_or_else(|| "undefined".to_string(), |n| n.to_string()),
                if summary.commutation_ok { "ok" } else { "FAILED" },
            );
            emit(c, &json, &text)?;
            Ok(summary.commutation_ok)
        }
    }
}

fn suite(c: &Common, name: SuiteName) -> Result<bool> {
    let mut cfg = SuiteConfig::new(name);
    cfg.tolerance = c.tolerance;
    cfg.seed = c.seed;
    if let Some(n) = c.samples {
        cfg.noise_samples = n;
        cfg.mask_samples = n;
    }
    let report: SuiteReport = run_suite(&cfg)?;
    emit(c, &report.to_json(), &report.to_text())?;
    Ok(report.passed)
}

fn noise_detail(c: &Common, sub: SubspaceArg, ch: ChannelArg) -> Result<bool> {
    let sub = match sub {
        SubspaceArg::Symmetric => Subspace::Symmetric,
        SubspaceArg::Antisymmetric => Subspace::Antisymmetric,
    };
    let kind = match ch {
        ChannelArg::Dephasing => ChannelKind::Dephasing,
        ChannelArg::Rotation => ChannelKind::Rotation,
    };
    let samples = c.samples.unwrap_or(200);
    let reports = noise::noise_scan(sub, kind, samples, c.seed)?;
    let worst = reports
        .iter()
        .map(|r| r.identity_deviation())
        .fold(0.0, f64::max);
    let ok = worst <= c.tolerance;
    let json = serde_json::to_string_pretty(&reports)? + "\n";
    let text = format!(
        "{} {sub:?} subspace, {kind:?} channel, {samples} samples: max |G - I| = {worst:.3e}\n",
        if ok { "PASS" } else { "FAIL" }
    );
    emit(c, &json, &text)?;
    Ok(ok)
}

fn emit(c: &Common, json: &str, text: &str) -> Result<()> {
    if let Some(path) = &c.output {
        write_file(path, json)?;
    }
    if c.json {
        print!("{json}");
    } else {
        print!("{text}");
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
