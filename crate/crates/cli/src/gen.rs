use std::path::PathBuf;

use clap::Args;
use mdsvar::mdsgen::{generate, scheme_rate, MdsParams, DEFAULT_MAX_ATTEMPTS};
use mdsvar::rational::format_rate;

use crate::output::{emit, parse_levels, Failure};

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Number of users.
    #[arg(long)]
    pub k: usize,
    /// Prime field modulus.
    #[arg(long, default_value_t = 10007)]
    pub q: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Levels to generate, e.g. `1,2` or `1-3` (default: all of 1..=K).
    #[arg(long)]
    pub levels: Option<String>,
    /// Symbols per source block (default: n_max!).
    #[arg(long)]
    pub block: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: usize,
    /// Scheme JSON destination (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &GenArgs) -> Result<bool, Failure> {
    let levels = args.levels.as_deref().map(parse_levels).transpose()?;
    let params = MdsParams::new(args.k, args.q, levels, args.block)?;
    let scheme = generate(&params, args.seed, args.max_attempts)?;
    emit(args.out.as_ref(), &scheme.to_json())?;
    eprintln!(
        "K={} q={} levels={:?} block={} L_Z={}",
        params.k(),
        params.q(),
        params.levels(),
        params.block(),
        params.source_len()
    );
    eprintln!("rate: {}", format_rate(&scheme_rate(&scheme)));
    Ok(true)
}
