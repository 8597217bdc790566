use clap::Args;

use vgv_core::lfunction::Curve;
use vgv_core::oracle::CountResult;

use crate::config::RunConfig;
use crate::errors::CliError;
use crate::spec_args::SpecArgs;

#[derive(Args, Debug, Clone)]
pub struct CountArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Count over F_{q^k}.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

pub fn run(args: &CountArgs, cfg: &RunConfig) -> Result<CountResult, CliError> {
    if args.k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    let spec = args.spec.to_spec()?;
    let curve = Curve::resolve(&spec)?;
    let mut cache = cfg.open_cache()?;
    let mut oracle = cfg.oracle(&mut cache);
    if !oracle.feasible(&curve, args.k) {
        return Err(CliError::Resource(format!(
            "F_{{{}^{}}} has more than --cap = {} elements; counts above the cap are refused",
            curve.p0(),
            curve.field_degree(args.k),
            cfg.cap
        )));
    }
    Ok(oracle.count(&spec, &curve, args.k)?)
}
