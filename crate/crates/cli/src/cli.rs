use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "vclab", version, about = "VC dimension, sample-complexity bounds and learning simulations")]
pub struct Cli {
    /// Directory that receives report.json and sweep.csv.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Do not echo the report on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// VC dimension of a space over a finite pool.
    Vcdim(VcdimArgs),
    /// Growth function over a finite pool, one value per m.
    Growth(GrowthArgs),
    /// Sauer-Shelah bound and its polynomial form.
    Sauer(SauerArgs),
    /// Sample-complexity bounds.
    Bounds(BoundsArgs),
    /// Uniform convergence probability by simulation or enumeration.
    UcpSim(SimArgs),
    /// PAC success probability of a learner.
    PacSim(PacArgs),
    /// No-Free-Lunch construction with exact expected errors.
    Nfl(NflArgs),
    /// Formula parsing, evaluation and shattering search.
    #[command(subcommand)]
    Formula(FormulaCommand),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Vcdim(_) => "vcdim".into(),
            Command::Growth(_) => "growth".into(),
            Command::Sauer(_) => "sauer".into(),
            Command::Bounds(_) => "bounds".into(),
            Command::UcpSim(_) => "ucp-sim".into(),
            Command::PacSim(_) => "pac-sim".into(),
            Command::Nfl(_) => "nfl".into(),
            Command::Formula(f) => format!("formula {}", f.name()),
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct VcdimArgs {
    /// Builtin space name, JSON file, or inline JSON.
    #[arg(long)]
    pub space: String,
    /// Instance pool: JSON file or inline JSON array.
    #[arg(long)]
    pub pool: String,
    /// Largest set size to try.
    #[arg(long, default_value_t = 8)]
    pub limit: usize,
    /// Maximum number of subsets to test.
    #[arg(long, default_value_t = 2_000_000)]
    pub node_budget: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct GrowthArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub pool: String,
    /// Largest m (defaults to the pool size).
    #[arg(long)]
    pub max_m: Option<usize>,
    /// Also write sweep.csv.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct SauerArgs {
    #[arg(long)]
    pub d: u64,
    #[arg(long)]
    pub m: u64,
    /// Also write sweep.csv over 1..=m.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub d: u64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 1)]
    pub mh: u64,
    /// Sample size reported by the NMSE learner, for the PAC bound.
    #[arg(long, default_value_t = 1)]
    pub m0_nmse: u64,
    /// Also write sweep.csv over an eps x delta grid.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct SimArgs {
    #[arg(long)]
    pub space: String,
    /// Distribution: JSON file or inline JSON.
    #[arg(long)]
    pub dist: String,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<usize>,
    /// Tolerance, as a rational (`1/10`) or decimal.
    #[arg(long)]
    pub eps: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Enumerate every multi-sample instead of sampling.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct PacArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sim: SimArgs,
    /// `builtin:NAME` or `file:table.json`.
    #[arg(long, default_value = "builtin:sem")]
    pub learner: String,
}

#[derive(Args, Debug, Serialize)]
pub struct NflArgs {
    #[arg(long)]
    pub m: usize,
    /// `builtin:NAME` or `file:table.json`.
    #[arg(long, default_value = "builtin:sem")]
    pub learner: String,
    /// `full`, a builtin space name, a JSON file or inline JSON.
    #[arg(long, default_value = "full")]
    pub space: String,
    /// The 2m points of S (defaults to atoms x0, x1, ...).
    #[arg(long)]
    pub points: Option<String>,
    /// Allow the larger learner-call budget needed for m = 4.
    #[arg(long)]
    pub extended: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "action")]
pub enum FormulaCommand {
    /// Parse and print the canonical form.
    Parse(FormulaArgs),
    /// Evaluate at one object and parameter tuple.
    Eval(EvalArgs),
    /// Dichotomies induced on a set of instances.
    Space(SpaceArgs),
    /// Search for a shattering witness map.
    Shatter(ShatterArgs),
}

impl FormulaCommand {
    fn name(&self) -> &'static str {
        match self {
            FormulaCommand::Parse(_) => "parse",
            FormulaCommand::Eval(_) => "eval",
            FormulaCommand::Space(_) => "space",
            FormulaCommand::Shatter(_) => "shatter",
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct FormulaArgs {
    /// Formula text, or `@path` to read it from a file.
    pub formula: String,
    /// Object variables, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub objects: Vec<String>,
    /// Parameter variables, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<String>,
    /// `exact` or `float`; defaults to float only when exp is used.
    #[arg(long)]
    pub backend: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub formula: FormulaArgs,
    /// Object values, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<String>,
    /// Parameter values, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub w: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct SpaceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub formula: FormulaArgs,
    /// Instances: `1;2;3`, `1,0;0,1`, a JSON file or inline JSON.
    #[arg(long, allow_hyphen_values = true)]
    pub instances: String,
    /// Parameter grid: one comma list per parameter separated by `;`, or a
    /// single list shared by all parameters.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "list")]
    pub grid: Option<String>,
    /// Explicit parameter tuples separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    pub list: Option<String>,
    /// Search budget when the parameters are unrestricted.
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct ShatterArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub formula: FormulaArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub instances: String,
    /// Values tried first, in the format of `formula space --grid`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
}
