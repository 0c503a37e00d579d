use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hdv_core::behavior::DEFAULT_ORDER;
use hdv_core::{CodebookKind, Seed, DEFAULT_DIMENSION};

#[derive(Debug, Parser)]
#[command(
    name = "hdv",
    version,
    about = "Hyperdimensional models of developer behavior, style and context"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Hypervector dimension for newly created codebooks, models and profiles.
    #[arg(long, global = true, env = "HDV_DIMENSION", default_value_t = DEFAULT_DIMENSION, value_parser = parse_dimension)]
    pub dimension: usize,

    /// Generation seed, decimal or 0x-prefixed hex.
    #[arg(long, global = true, env = "HDV_SEED", default_value = "0x5EED5EED5EED5EED", value_parser = parse_seed)]
    pub seed: Seed,

    /// Confidence threshold for cleanup. Defaults to 4/sqrt(D) of the data in use.
    #[arg(long, global = true, env = "HDV_TAU", value_parser = parse_tau)]
    pub tau: Option<f64>,

    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// Exit with status 3 when a result is below the confidence threshold.
    #[arg(long, global = true)]
    pub strict: bool,

    /// Echo the effective configuration and log progress to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a sequence model from a JSONL action log.
    Train(TrainArgs),
    /// Predict the action that follows a prefix.
    Predict(PredictArgs),
    /// Score a model on every window of a JSONL action log.
    Eval(EvalArgs),
    /// Sum several models that share seed, dimension and window length.
    Merge(MergeArgs),
    /// Create or inspect codebook files.
    #[command(subcommand)]
    Codebook(CodebookCommand),
    /// Write a synthetic Markov action log.
    Generate(GenerateArgs),
    /// Style profiles, mappings and restyling.
    #[command(subcommand)]
    Style(StyleCommand),
    /// Project-context bundles.
    #[command(subcommand)]
    Context(ContextCommand),
    /// Run a capacity sweep and write CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// JSONL log with `ts`, `session` and `action` fields.
    #[arg(long)]
    pub log: PathBuf,
    /// Output model path.
    #[arg(long)]
    pub model: PathBuf,
    /// Window length.
    #[arg(long, short, default_value_t = DEFAULT_ORDER)]
    pub n: usize,
    /// Start from an existing action codebook instead of an empty one.
    #[arg(long)]
    pub codebook: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Comma-separated prefix of n-1 actions.
    #[arg(long, value_delimiter = ',', required = true)]
    pub prefix: Vec<String>,
    /// Unbind from the raw bundle sums instead of the sign-normalized bundle.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub log: PathBuf,
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    /// Model to merge; repeat for each input.
    #[arg(long = "model", required = true, num_args = 1)]
    pub models: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum CodebookCommand {
    /// Write a codebook with the given names.
    New {
        #[arg(long, value_parser = parse_kind, default_value = "action")]
        kind: CodebookKind,
        /// Comma-separated symbol names.
        #[arg(long, value_delimiter = ',')]
        names: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a codebook's metadata and names.
    Show {
        #[arg(long)]
        codebook: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of distinct actions.
    #[arg(long, default_value_t = 20)]
    pub alphabet: usize,
    /// Prefix for generated action names.
    #[arg(long, default_value = "action")]
    pub prefix: String,
    #[arg(long, default_value_t = 10)]
    pub sessions: usize,
    /// Events per session.
    #[arg(long, default_value_t = 50)]
    pub length: usize,
    /// Successors per action in a random sparse chain; uniform when absent.
    #[arg(long)]
    pub fan_out: Option<usize>,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum StyleCommand {
    /// Build a profile from attribute=value pairs.
    Profile {
        #[arg(long = "pair", required = true, value_parser = parse_pair)]
        pairs: Vec<(String, String)>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Infer a profile from a source file.
    Infer {
        #[arg(long)]
        input: PathBuf,
        /// Write the profile here; only report when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a mapping from a source profile to a target profile.
    Map {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Translate one style value through a mapping.
    Translate {
        #[arg(long)]
        mapping: PathBuf,
        #[arg(long)]
        value: String,
    },
    /// Rewrite a source file through a mapping.
    Restyle {
        #[arg(long)]
        mapping: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Output path; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ContextCommand {
    /// Encode role=filler pairs into a context file.
    Encode {
        #[arg(long = "pair", required = true, value_parser = parse_pair)]
        pairs: Vec<(String, String)>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ask which filler a role holds, or which role holds a filler.
    Query {
        #[arg(long)]
        context: PathBuf,
        #[arg(long, conflicts_with = "filler", required_unless_present = "filler")]
        role: Option<String>,
        #[arg(long)]
        filler: Option<String>,
        /// Extra candidate names for the cleanup codebook, comma-separated.
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
    },
    /// Similarity between two contexts.
    Diff {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Build the transition between two contexts and apply it.
    Transition {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// Context to move through the transition; `--from` when absent.
        #[arg(long)]
        apply: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON sweep configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_dimension(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(d) if d >= 2 => Ok(d),
        _ => Err(format!("{s:?} is not an integer of at least 2")),
    }
}

fn parse_seed(s: &str) -> Result<Seed, String> {
    Seed::parse(s).ok_or_else(|| format!("{s:?} is not a decimal or 0x-prefixed hex u64"))
}

fn parse_tau(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if (-1.0..=1.0).contains(&t) => Ok(t),
        _ => Err(format!("{s:?} is not a number in [-1, 1]")),
    }
}

fn parse_kind(s: &str) -> Result<CodebookKind, String> {
    CodebookKind::from_label(s)
        .ok_or_else(|| "expected one of action, style-attribute, style-value, context-role, context-filler".to_string())
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.is_empty() && !v.is_empty() => Ok((k.to_string(), v.to_string())),
        _ => Err(format!("{s:?} is not of the form NAME=VALUE")),
    }
}
