use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use multicorr::lab::{self, Computed, Ensemble, Quantity, SweepConfig};
use multicorr::states::{ghz, random_mixed, random_pure, w_state, write_state, MultipartiteState};
use multicorr::{Error, LogBase, Result, Settings};

/// Multipartite correlation measures: dual total correlation and its
/// relative-entropy forms.
#[derive(Parser)]
#[command(name = "multicorr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the full gap report for a built-in state (ghz, product, bell, mixed).
    Demo {
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate seeded random states and write JSON-lines records plus a summary.
    Sweep {
        /// Comma-separated local dimensions, e.g. 2,2,2.
        #[arg(long, default_value = "2,2,2", value_delimiter = ',')]
        dims: Vec<usize>,
        /// pure, full-rank or rank-R.
        #[arg(long, default_value = "full-rank")]
        ensemble: Ensemble,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = SweepConfig::DEFAULT_GAP_THRESHOLD)]
        gap_threshold: f64,
        /// Leave out per-quantity timings so reruns are byte-identical.
        #[arg(long)]
        no_timings: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate one quantity (I, T, eq3, eq4, J, Jtilde, cross:i,j, report) on a state file.
    Compute {
        file: PathBuf,
        quantity: Quantity,
        #[command(flatten)]
        common: Common,
    },
    /// Write a state file: ghz, w, pure or mixed.
    Generate {
        kind: String,
        #[arg(long, default_value = "2,2,2", value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Rank for `mixed`; defaults to full rank.
        #[arg(long)]
        rank: Option<usize>,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Logarithm base: 2 (bits) or e (nats).
    #[arg(long, default_value = "2")]
    base: LogBase,
    /// Largest total dimension any operator may have.
    #[arg(long, default_value_t = Settings::DEFAULT_DIM_CAP)]
    cap: usize,
    /// Relative eigenvalue threshold defining a support.
    #[arg(long, default_value_t = Settings::DEFAULT_SUPPORT_THRESHOLD)]
    tol_support: f64,
    /// Tolerance of the support containment test.
    #[arg(long, default_value_t = Settings::DEFAULT_CONTAINMENT_TOL)]
    tol_contain: f64,
    /// Also write a JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn settings(&self) -> Settings {
        Settings {
            base: self.base,
            support_threshold: self.tol_support,
            containment_tol: self.tol_contain,
            dim_cap: self.cap,
        }
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn write_json_line(path: &PathBuf, value: &serde_json::Value) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn generate(
    kind: &str,
    dims: Vec<usize>,
    seed: u64,
    rank: Option<usize>,
) -> Result<MultipartiteState> {
    let equal_local_dim = || match dims.first() {
        Some(&d) if dims.iter().all(|&x| x == d) => Ok(d),
        _ => Err(Error::Config(format!(
            "{kind} needs equal local dimensions, got {dims:?}"
        ))),
    };
    match kind {
        "ghz" => ghz(dims.len(), equal_local_dim()?),
        "w" => {
            if equal_local_dim()? != 2 {
                return Err(Error::Config("w is defined on qubits".into()));
            }
            w_state(dims.len())
        }
        "pure" => random_pure(dims, seed),
        "mixed" => {
            let rank = rank.unwrap_or_else(|| dims.iter().product());
            random_mixed(dims, rank, seed)
        }
        other => Err(Error::Config(format!(
            "unknown state kind {other:?} (ghz, w, pure, mixed)"
        ))),
    }
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Demo { name, common } => {
            let rec = lab::demo(&name, &common.settings())?;
            write!(out, "{}", rec.render())?;
            if let Some(path) = &common.out {
                write_json_line(path, &rec.to_json(true))?;
            }
        }
        Command::Sweep {
            dims,
            ensemble,
            samples,
            seed,
            gap_threshold,
            no_timings,
            common,
        } => {
            let cfg = SweepConfig {
                dims,
                ensemble,
                samples,
                seed,
                settings: common.settings(),
                gap_threshold,
            };
            let result = lab::sweep(&cfg)?;
            match &common.out {
                Some(path) => {
                    let mut w = create(path)?;
                    result.write_jsonl(&mut w, !no_timings)?;
                    w.flush()?;
                    serde_json::to_writer_pretty(&mut out, &result.summary)?;
                    writeln!(out)?;
                }
                None => result.write_jsonl(&mut out, !no_timings)?,
            }
        }
        Command::Compute {
            file,
            quantity,
            common,
        } => {
            let computed = lab::compute(&file, quantity, &common.settings())?;
            let text = computed.render();
            if text.ends_with('\n') {
                write!(out, "{text}")?;
            } else {
                writeln!(out, "{text}")?;
            }
            if let Some(path) = &common.out {
                let json = match &computed {
                    Computed::Scalar { value, base } => serde_json::json!({
                        "file": file.display().to_string(),
                        "quantity": format!("{quantity:?}"),
                        "base": base,
                        "result": value,
                    }),
                    Computed::Report(rec) => rec.to_json(true),
                };
                write_json_line(path, &json)?;
            }
        }
        Command::Generate {
            kind,
            dims,
            seed,
            rank,
            out: path,
        } => {
            let state = generate(&kind, dims, seed, rank)?;
            match path {
                Some(p) => write_state(&state, p)?,
                None => writeln!(out, "{}", multicorr::states::state_to_json(&state))?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(lab::exit_code(&e) as u8)
        }
    }
}
