use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "genbinom", version, about = "Generalized binomial distributions: figure data, traces, reports")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Natural,
    Qbracket,
    Explicit,
    PowerLog,
    RootDriven,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Sequence family.
    #[arg(long, global = true, value_enum, default_value = "natural")]
    pub family: FamilyArg,
    /// Deformation parameter for `qbracket`.
    #[arg(long, global = true)]
    pub q: Option<String>,
    /// Comma-separated root sequence a_1,a_2,... for `root-driven` and `reconstruct`.
    #[arg(long, global = true)]
    pub roots: Option<String>,
    /// Root sequence from a JSON array or single-column CSV.
    #[arg(long, global = true)]
    pub roots_file: Option<PathBuf>,
    /// Sequence values x_0, x_1, ... for `explicit`.
    #[arg(long, global = true)]
    pub values_file: Option<PathBuf>,
    /// Exponent of n for `power-log`.
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Exponent of (1 + ln n) for `power-log`.
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// Largest index to materialize (also the horizon of `classify` and `reconstruct`).
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Series and root-isolation tolerance.
    #[arg(long, global = true)]
    pub tol: Option<String>,
    /// Work in binary floating point with this many bits instead of exact rationals.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Print values as decimals instead of exact fractions.
    #[arg(long, global = true)]
    pub decimal: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// p_n(eta) over an eta grid for each requested n.
    Curves {
        /// Indices, as a range `1..5` or a list `3,5`.
        #[arg(long)]
        n: String,
        /// `start:end:points`, evenly spaced and inclusive.
        #[arg(long, default_value = "0:1:201")]
        eta_grid: String,
        /// Stop each curve at the smallest root of p_n in (0, 1] (the default).
        #[arg(long, conflicts_with = "show_negative")]
        clip_at_root: bool,
        /// Emit the whole grid, negative parts included.
        #[arg(long)]
        show_negative: bool,
    },
    /// varpi_{n,0}(eta) against (1 - eta)^n.
    CompareLoss {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value = "1/100:99/100:99")]
        eta_grid: String,
    },
    /// P_k^(n)(t / x_n) against its limit as n grows.
    Limit {
        #[arg(long, default_value = "1")]
        t: String,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long)]
        n: String,
    },
    /// Positivity class and eta_max table up to --n-max.
    Classify,
    /// Rebuild x_n and I_n from a root sequence.
    Reconstruct {
        /// Also run the determinant and minor identities at every step.
        #[arg(long)]
        check_det: bool,
        /// Skip solving the linear system at each step.
        #[arg(long)]
        no_system: bool,
    },
    /// Seeded draws of k from the distribution row.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eta: String,
        #[arg(long, default_value_t = 100_000)]
        draws: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Coefficientwise check of the generating-function product identity.
    IdentityCheck {
        #[arg(long)]
        eta: String,
        #[arg(long, default_value = "1/2")]
        t: String,
        #[arg(long, default_value_t = 30)]
        order: usize,
    },
}

/// `"1..5"` (inclusive), `"3,5"` or `"7"`.
pub fn parse_n_spec(text: &str) -> anyhow::Result<Vec<usize>> {
    let text = text.trim();
    let out: Vec<usize> = if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse()?;
        let b: usize = b.trim().trim_start_matches('=').parse()?;
        anyhow::ensure!(a <= b, "empty range {text}");
        (a..=b).collect()
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<_, _>>()?
    };
    anyhow::ensure!(!out.is_empty(), "no indices in {text:?}");
    Ok(out)
}

/// `"start:end:points"` as exact strings, split but not yet parsed.
pub fn split_grid(text: &str) -> anyhow::Result<(String, String, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    anyhow::ensure!(parts.len() == 3, "grid must be start:end:points, got {text:?}");
    let points: usize = parts[2].trim().parse()?;
    anyhow::ensure!(points >= 1, "grid needs at least one point");
    Ok((parts[0].trim().to_string(), parts[1].trim().to_string(), points))
}
