use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lineshape_cli::{cmd_detect, cmd_eval, cmd_gen, CliError, DetectArgs, DetectInput, EvalArgs, GenArgs, RunConfig, SweepSpec};

/// Synthetic collimator data, line-constrained segmentation and evaluation.
#[derive(Parser)]
#[command(name = "lineshape", version)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// RNG seed (overrides `seed` in the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Log progress to standard error (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset.
    Gen {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long)]
        jobs: Option<usize>,
        /// PFM base images used round-robin instead of procedural phantoms.
        #[arg(long)]
        base: Vec<PathBuf>,
    },
    /// Predict a mask and lines for one image or one mask + Hough pair.
    Detect(DetectCmd),
    /// Score a prediction directory against ground truth.
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        gt: PathBuf,
        /// JSON report path; the per-sample CSV is written with a .csv extension.
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        ea_accept: Option<f64>,
        /// Threshold sweep `t0:t1:steps`, both ends inclusive.
        #[arg(long)]
        sweep: Option<SweepSpec>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args)]
struct DetectCmd {
    /// Raw radiograph (PFM); uses the classical edge path.
    #[arg(long, conflicts_with_all = ["mask", "hough", "meta"], required_unless_present = "mask")]
    image: Option<PathBuf>,
    /// Region mask (PGM) supplying the fill seed.
    #[arg(long, requires = "hough")]
    mask: Option<PathBuf>,
    /// Hough accumulator (PFM), n_rho columns by n_theta rows.
    #[arg(long, requires = "mask")]
    hough: Option<PathBuf>,
    /// JSON sidecar with the accumulator's `hough` quantization.
    #[arg(long)]
    meta: Option<PathBuf>,
    /// Blob threshold as a fraction of the Hough maximum.
    #[arg(long = "t")]
    threshold: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    /// Name outputs by sample id so the directory can be evaluated.
    #[arg(long)]
    id: Option<usize>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    match cli.command {
        Command::Gen { out, count, jobs, base } => {
            let m = cmd_gen(&cfg, &GenArgs { out: out.clone(), count, jobs, base })?;
            println!("wrote {} samples to {}", m.count, out.display());
        }
        Command::Detect(d) => {
            let input = match (d.image, d.mask, d.hough) {
                (Some(image), _, _) => DetectInput::Image(image),
                (None, Some(mask), Some(hough)) => DetectInput::Supplied { mask, hough, meta: d.meta },
                _ => return Err(CliError::Usage("detect needs --image or --mask with --hough".into())),
            };
            let args = DetectArgs {
                input,
                threshold: d.threshold,
                out: d.out,
                id: d.id,
            };
            let p = cmd_detect(&cfg, &args)?;
            println!("{} lines, written to {}", p.lines.len(), args.out.display());
        }
        Command::Eval { pred, gt, report, ea_accept, sweep, jobs } => {
            let args = EvalArgs {
                pred,
                gt,
                report,
                ea_accept,
                sweep,
                jobs,
            };
            let r = cmd_eval(&cfg, &args)?;
            println!(
                "{} samples: dice mean {:.4}, precision {:.4}, recall {:.4}, f1 {:.4}",
                r.samples, r.dice.mean, r.precision, r.recall, r.f1
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            // Keep the one-line `error:` contract: fold clap's message onto
            // one line and drop the usage block that follows it.
            let text = e.to_string();
            let msg: Vec<&str> = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            let msg = msg.join(" ");
            let msg = msg.strip_prefix("error: ").unwrap_or(&msg);
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
