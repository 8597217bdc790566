use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use vgv_core::oracle::{Oracle, ResultsCache, DEFAULT_CAP};

use crate::errors::CliError;

pub const TOOL: &str = "vgv";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_BUDGET: u64 = 100_000;
pub const DEFAULT_CACHE: &str = ".vgv-cache/results.jsonl";
pub const DEFAULT_MAX_EXT: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Largest field (number of elements) the point-count oracle will enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    /// Maximum number of parameter cells a search may evaluate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// JSONL results cache.
    #[arg(long, global = true, default_value = DEFAULT_CACHE)]
    pub cache: PathBuf,
    /// Neither read nor write the results cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest extension of the curve's field the formula path may move to.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_EXT)]
    pub max_ext: u32,
}

/// Everything that determines a run's output; embedded in every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub cap: u64,
    pub budget: u64,
    pub cache: Option<PathBuf>,
    pub format: Format,
    pub threads: usize,
    pub seed: u64,
    pub max_ext: u32,
}

impl From<&GlobalArgs> for RunConfig {
    fn from(g: &GlobalArgs) -> Self {
        RunConfig {
            cap: g.cap,
            budget: g.budget,
            cache: (!g.no_cache).then(|| g.cache.clone()),
            format: g.format,
            threads: g.threads,
            seed: g.seed,
            max_ext: g.max_ext,
        }
    }
}

impl RunConfig {
    pub fn open_cache(&self) -> Result<Option<ResultsCache>, CliError> {
        self.cache.as_ref().map(ResultsCache::open).transpose().map_err(CliError::from)
    }

    pub fn oracle<'a>(&self, cache: &'a mut Option<ResultsCache>) -> Oracle<'a> {
        Oracle { cap: self.cap, cache: cache.as_mut() }
    }
}

/// Common wrapper for every report.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: &'a RunConfig,
    pub result: T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'static str, config: &'a RunConfig, result: T) -> Self {
        Envelope { tool: TOOL, version: VERSION, command, config, result }
    }
}
