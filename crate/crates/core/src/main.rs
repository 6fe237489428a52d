use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rackrepair::constructions::{build, repair_family, SchemeParams};
use rackrepair::harness::{
    emit_report, emit_trend, nbar_sweep, render_ratio, run_sweep, ExperimentConfig, OutputFormat,
};
use rackrepair::repair::{audit, RepairError, Repairer};
use rackrepair::rs_code::NodeId;

#[derive(Parser)]
#[command(name = "rackrepair", version, about = "Rack-aware Reed–Solomon trace repair")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the instance: layout, field and evaluation points.
    Build(Common),
    /// Repair one node and print its transcript and bandwidth report.
    Repair {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rack: usize,
        #[arg(long, default_value_t = 1)]
        slot: usize,
    },
    /// Check and repair every node.
    Sweep(Common),
    /// Construction 1 over a range of n̄ at fixed r̄.
    NbarSweep {
        #[command(flatten)]
        common: Common,
        /// Largest n̄; the smallest is `--nbar`.
        #[arg(long)]
        max_nbar: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    C1,
    C2,
    Cor7,
    Homogeneous,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "c1")]
    mode: ModeArg,
    #[arg(long, default_value_t = 3)]
    q: u32,
    #[arg(long, default_value_t = 2)]
    u: usize,
    #[arg(long)]
    nbar: usize,
    #[arg(long)]
    rbar: Option<u64>,
    /// Comma-separated primes for C2, e.g. `2,2`.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    #[arg(long, default_value_t = 0)]
    v: usize,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn params(&self) -> Result<SchemeParams> {
        let need_rbar = || self.rbar.context("--rbar is required for this mode");
        let params = match self.mode {
            ModeArg::C1 => SchemeParams::c1(self.q, self.u, self.nbar, need_rbar()?),
            ModeArg::Cor7 => SchemeParams::cor7(self.q, self.u, self.nbar, need_rbar()?),
            ModeArg::Homogeneous => {
                if self.u != 1 {
                    bail!("homogeneous mode needs --u 1");
                }
                SchemeParams::homogeneous(self.q, self.nbar, need_rbar()?)
            }
            ModeArg::C2 => SchemeParams::c2(
                self.q,
                self.u,
                self.nbar,
                self.primes.clone().context("--primes is required for c2")?,
            ),
        };
        Ok(params.with_v(self.v))
    }

    fn format(&self) -> OutputFormat {
        match self.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build(common) => {
            let params = common.params()?;
            params.validate()?;
            let instance = build(&params)?;
            let text = serde_json::to_string_pretty(&instance.describe())? + "\n";
            common.emit(&text)?;
            Ok(true)
        }
        Command::Repair { common, rack, slot } => {
            let params = common.params()?;
            params.validate()?;
            let instance = build(&params)?;
            let node = NodeId::new(rack, slot);
            let repairer = Repairer::new(&instance, repair_family(&instance, node)?)?;
            let report = repairer.report();
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let codeword = instance.code.encode(&instance.code.random_message(&mut rng))?;
            let transcript = match repairer.repair(&codeword) {
                Ok(t) => t,
                Err(RepairError::Mismatch(t)) => {
                    eprintln!("{}", t.to_json());
                    bail!("recovered symbol differs from erased symbol at {node}");
                }
                Err(e) => return Err(e.into()),
            };
            let findings = audit(&transcript, report);
            let mut text = transcript.to_json();
            text.push('\n');
            let per_rack: Vec<String> =
                report.per_rack.iter().map(|(e, b)| format!("{e}:{b}")).collect();
            text.push_str(&format!(
                "# node={} b={} per_rack={} b_min={} upper={} case={} ratio={} audit={}\n",
                node,
                report.b,
                per_rack.join(","),
                render_ratio(report.bounds.b_min),
                report.bounds.shown_upper().map(render_ratio).unwrap_or_default(),
                report.bounds.case,
                render_ratio(report.ratio),
                if findings.passed() { "pass" } else { "fail" },
            ));
            common.emit(&text)?;
            Ok(findings.passed())
        }
        Command::Sweep(common) => {
            let config = ExperimentConfig {
                params: common.params()?,
                trials: common.trials,
                seed: common.seed,
                format: common.format(),
            };
            let outcome = run_sweep(&config)?;
            common.emit(&emit_report(&outcome.rows, config.format)?)?;
            for f in &outcome.failures {
                eprintln!("repair failure at {}: {}", f.node, f.reason);
                if let Some(t) = &f.transcript {
                    eprintln!("{t}");
                }
            }
            Ok(outcome.passed())
        }
        Command::NbarSweep { common, max_nbar } => {
            let r_bar = common.rbar.context("--rbar is required")?;
            let trend = nbar_sweep(
                common.q,
                common.u,
                r_bar,
                common.nbar,
                max_nbar,
                common.trials,
                common.seed,
            )?;
            common.emit(&emit_trend(&trend, common.format())?)?;
            for f in &trend.failures {
                eprintln!("repair failure at {}: {}", f.node, f.reason);
                if let Some(t) = &f.transcript {
                    eprintln!("{t}");
                }
            }
            Ok(trend.failures.is_empty() && trend.rows.iter().all(|r| r.all_ok))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
