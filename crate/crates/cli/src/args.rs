use std::path::PathBuf;

use aqabound::algorithm_zoo::{BooleanFunctionSpec, GroverForm};
use aqabound::dynamics::ScheduleShape;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(name = "aqabound", version, about = "Runtime lower bounds for adiabatic quantum algorithms")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct GlobalOpts {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for random graphs and Monte Carlo trials. AQABOUND_SEED takes
    /// precedence when set.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for parallel sweeps and trials.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Omit the timestamp from JSON output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Runtime lower bound for one problem, optionally with a scan over n.
    Bound(BoundArgs),
    /// Integrate the Schrödinger equation and check the inequality chain.
    Simulate(SimulateArgs),
    /// Spectral gap sweep and comparison with the runtime bound.
    Gap(GapArgs),
    /// k-clique moments on a given or random graph, with randomized estimators.
    Kclique(KcliqueArgs),
    /// Run a built-in verification suite.
    Verify(VerifyArgs),
    /// Print a problem as JSON, loadable again with the `file` kind.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    DjDas,
    DjWei,
    Bv,
    Grover,
    Ising,
    Kclique,
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormArg {
    Diagonal,
    Projector,
}

impl From<FormArg> for GroverForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Diagonal => GroverForm::Diagonal,
            FormArg::Projector => GroverForm::Projector,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ProblemArgs {
    #[arg(value_enum)]
    pub kind: ProblemKind,
    /// Qubit count, or vertex count for random k-clique graphs.
    #[arg(long)]
    pub n: Option<usize>,
    /// Boolean function: constant:B, balanced:V, ip:BITS or table:BITS.
    #[arg(long, value_parser = parse_function, default_value = "balanced:0")]
    pub function: BooleanFunctionSpec,
    /// Bernstein–Vazirani secret as a bit string, bit 0 first.
    #[arg(long)]
    pub secret: Option<String>,
    /// Grover marked labels.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub marked: Vec<u64>,
    #[arg(long, value_enum, default_value_t = FormArg::Diagonal)]
    pub form: FormArg,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Edge probability for random graphs and the randomized estimators.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Use a seeded random graph.
    #[arg(long)]
    pub random: bool,
    /// Edge list (kclique) or problem JSON (file).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Use the deformed k-clique cost min(h, 1).
    #[arg(long)]
    pub deformed: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
#[group(multiple = false)]
pub struct TimingArgs {
    /// Schedule average λ̄; defaults to 1 without a schedule.
    #[arg(long)]
    pub lambda_bar: Option<f64>,
    /// Schedule shape (linear, power:Q or table:F0,F1,...) whose average is λ̄.
    #[arg(long, value_parser = parse_schedule)]
    pub schedule: Option<ScheduleShape>,
}

#[derive(Args, Debug, Serialize)]
pub struct BoundArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[command(flatten)]
    pub timing: TimingArgs,
    /// Use this C(1) instead of the problem's target state.
    #[arg(long)]
    pub overlap: Option<f64>,
    /// Classify the family by scanning δV over several n.
    #[arg(long)]
    pub scan: bool,
    /// n values for --scan; default is up to six values ending at --n.
    #[arg(long, value_delimiter = ',')]
    pub scan_n: Vec<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_parser = parse_schedule, default_value = "linear")]
    pub schedule: ScheduleShape,
    /// Total evolution time.
    #[arg(long = "T")]
    pub total_time: f64,
    /// Integration steps; default 2000 per unit of T·‖H‖ (at least 1000).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Allowance used for the runtime-bound check on the final state.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Also write the trajectory CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Corrupt one fidelity sample before verification (self-test).
    #[arg(long)]
    pub inject_fault: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct GapArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[command(flatten)]
    pub timing: TimingArgs,
    /// Also write the gap profile CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct KcliqueArgs {
    /// Seeded random graph on --n vertices.
    #[arg(long, conflicts_with = "file")]
    pub random: bool,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge-list file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long)]
    pub deformed: bool,
    /// Monte Carlo trials for the randomized moments; 0 skips them.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Chain,
    Moments,
    Sm5,
    All,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
}

#[derive(Args, Debug, Serialize)]
pub struct ExportArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
}

pub fn parse_function(s: &str) -> Result<BooleanFunctionSpec, String> {
    s.parse().map_err(|e: aqabound::Error| e.to_string())
}

pub fn parse_schedule(s: &str) -> Result<ScheduleShape, String> {
    s.parse().map_err(|e: aqabound::Error| e.to_string())
}
