use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rankbench_core::report::{compare_report, rank_report, sweep_report, RankConfig};
use rankbench_core::stats::stats_report;
use rankbench_core::{
    grid_from_range, CriterionDirection, DecisionMatrixPair, LabeledMatrix, Method,
    NormalizationScheme, DEFAULT_SIGMA_FLOOR, DEFAULT_TIE_EPSILON,
};

mod render;

#[derive(Parser)]
#[command(
    name = "rankbench",
    version,
    about = "Rank stochastic algorithms from mean and standard-deviation matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank algorithms at one weight pair.
    Rank(RankArgs),
    /// Rank over a grid of mean weights and report where the order settles.
    Sweep(SweepArgs),
    /// A-TOPSIS and Hellinger-TOPSIS orders side by side.
    Compare(RankArgs),
    /// Friedman test and pairwise Wilcoxon signed-rank tests on the means.
    Stats(StatsArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Benefit,
    Cost,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Vector,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Atopsis,
    Hellinger,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// CSV of means, one row per algorithm.
    #[arg(long)]
    mu: PathBuf,
    #[arg(long, value_enum, default_value = "benefit")]
    direction: DirectionArg,
    #[arg(long, value_enum, default_value = "max")]
    norm: NormArg,
    #[arg(long, default_value_t = DEFAULT_TIE_EPSILON)]
    tie_eps: f64,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Drop an algorithm before ranking; repeatable.
    #[arg(long, value_name = "NAME")]
    exclude: Vec<String>,
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    common: Common,
    /// CSV of standard deviations, same shape and labels as --mu.
    #[arg(long)]
    sigma: PathBuf,
    /// Weight of the means; the deviations get 1 - w_mu.
    #[arg(long, default_value_t = 0.7)]
    w_mu: f64,
    #[arg(long, value_enum, default_value = "atopsis")]
    method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_SIGMA_FLOOR)]
    sigma_floor: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    rank: RankArgs,
    #[arg(long, default_value_t = 0.5)]
    start: f64,
    #[arg(long, default_value_t = 1.0)]
    stop: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    common: Common,
    /// Optional; when given it is validated against --mu but not used.
    #[arg(long)]
    sigma: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Args)]
struct ServeArgs {
    /// Defaults to $RANKBENCH_PORT, then 8080.
    #[arg(long)]
    port: Option<u16>,
    #[arg(long, default_value = "0.0.0.0")]
    host: std::net::IpAddr,
}

impl Common {
    fn config(&self) -> RankConfig {
        RankConfig {
            direction: match self.direction {
                DirectionArg::Benefit => CriterionDirection::Benefit,
                DirectionArg::Cost => CriterionDirection::Cost,
            },
            normalization: match self.norm {
                NormArg::Vector => NormalizationScheme::Vector,
                NormArg::Max => NormalizationScheme::Max,
            },
            tie_epsilon: self.tie_eps,
            ..RankConfig::default()
        }
    }
}

impl RankArgs {
    fn config(&self) -> RankConfig {
        RankConfig {
            method: match self.method {
                MethodArg::Atopsis => Method::Atopsis,
                MethodArg::Hellinger => Method::Hellinger,
            },
            sigma_floor: self.sigma_floor,
            ..self.common.config()
        }
        .with_mean_weight(self.w_mu)
    }

    fn load(&self) -> Result<DecisionMatrixPair, String> {
        let mu = read_matrix(&self.common.mu)?;
        let sigma = read_matrix(&self.sigma)?;
        let pair = DecisionMatrixPair::new(mu, sigma)
            .map_err(|e| format!("{}: {e}", self.sigma.display()))?;
        pair.without_rows(&self.common.exclude)
            .map_err(|e| e.to_string())
    }
}

fn read_matrix(path: &Path) -> Result<LabeledMatrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    LabeledMatrix::from_csv(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Rank(args) => {
            let report = rank_report(&args.load()?, &args.config()).map_err(|e| e.to_string())?;
            emit(&args.common.out, &render::rank(&report, args.common.format))
        }
        Command::Sweep(args) => {
            let grid =
                grid_from_range(args.start, args.stop, args.step).map_err(|e| e.to_string())?;
            let view = sweep_report(&args.rank.load()?, &grid, &args.rank.config())
                .map_err(|e| e.to_string())?;
            emit(
                &args.rank.common.out,
                &render::sweep(&view, args.rank.common.format),
            )
        }
        Command::Compare(args) => {
            let view = compare_report(&args.load()?, &args.config()).map_err(|e| e.to_string())?;
            emit(
                &args.common.out,
                &render::compare(&view, args.common.format),
            )
        }
        Command::Stats(args) => {
            let mu = read_matrix(&args.common.mu)?;
            if let Some(path) = &args.sigma {
                DecisionMatrixPair::new(mu.clone(), read_matrix(path)?)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            let mu = mu
                .without_rows(&args.common.exclude)
                .map_err(|e| e.to_string())?;
            let mut report = stats_report(&mu, args.common.config().direction, args.alpha)
                .map_err(|e| e.to_string())?;
            report.sort_by_p();
            emit(
                &args.common.out,
                &render::stats(&report, args.common.format),
            )
        }
        Command::Serve(args) => {
            let port = rankbench_service::resolve_port(args.port)?;
            let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
            runtime
                .block_on(rankbench_service::serve(SocketAddr::new(args.host, port)))
                .map_err(|e| format!("serve on port {port}: {e}"))
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on bad flags.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
