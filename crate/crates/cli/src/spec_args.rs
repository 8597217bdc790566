use std::path::PathBuf;

use clap::Args;

use vgv_core::lfunction::{CoeffSpec, CurveSpec, ZetaSpec};

use crate::errors::CliError;

/// A curve given by a JSON spec file or inline flags.
#[derive(Args, Debug, Clone, Default)]
pub struct SpecArgs {
    /// JSON curve spec `{p0, s, n, R, r, zeta}`.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// The characteristic (alias `--p`).
    #[arg(long, alias = "p")]
    pub p0: Option<u64>,
    /// `p = p0^s`.
    #[arg(long)]
    pub s: Option<u32>,
    /// `q = p^n`.
    #[arg(long)]
    pub n: Option<u32>,
    /// Coefficients a_0, a_1, ... of R on x, x^p, x^{p^2}, ...: integers, `g^k`, or
    /// colon-separated coordinate vectors such as `1:0:2`.
    #[arg(long = "R", value_name = "COEFFS", allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    /// The exponent in `z^{p^r} - z = xR(x)`.
    #[arg(long)]
    pub r: Option<u32>,
    /// Minimal polynomial of the twist scalar over F_p0, lowest degree first.
    #[arg(long, value_name = "COEFFS", allow_hyphen_values = true)]
    pub zeta_minpoly: Option<String>,
    /// Which root of the minimal polynomial, in codec-index order.
    #[arg(long, default_value_t = 0)]
    pub zeta_root: usize,
}

pub fn parse_int_list(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("expected an integer, got {t:?} in {s:?}"))))
        .collect()
}

fn parse_coeff(t: &str) -> Result<CoeffSpec, CliError> {
    let t = t.trim();
    if let Ok(a) = t.parse::<i64>() {
        return Ok(CoeffSpec::Int(a));
    }
    if let Some(k) = t.strip_prefix("g^") {
        k.parse::<u64>().map_err(|_| CliError::Usage(format!("bad generator power {t:?}")))?;
        return Ok(CoeffSpec::Power(t.to_string()));
    }
    if t.contains(':') {
        let v = t.split(':').map(|x| x.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>().map_err(|_| CliError::Usage(format!("bad coordinate vector {t:?}")))?;
        return Ok(CoeffSpec::Vector(v));
    }
    Err(CliError::Usage(format!("malformed coefficient {t:?}: expected an integer, g^k or a:b:c")))
}

impl SpecArgs {
    pub fn is_given(&self) -> bool {
        self.spec.is_some() || self.coeffs.is_some()
    }

    pub fn to_spec(&self) -> Result<CurveSpec, CliError> {
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            return serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())));
        }
        let p0 = self.p0.ok_or_else(|| CliError::Usage("--p0 is required without --spec".into()))?;
        let coeffs = self.coeffs.as_deref().ok_or_else(|| CliError::Usage("--R is required without --spec".into()))?;
        if coeffs.trim().is_empty() {
            return Err(CliError::Usage("--R is empty".into()));
        }
        let coeffs = coeffs.split(',').map(parse_coeff).collect::<Result<Vec<_>, _>>()?;
        let zeta = self.zeta_minpoly.as_deref().map(parse_int_list).transpose()?.map(|minpoly| ZetaSpec { minpoly, which_root: self.zeta_root });
        Ok(CurveSpec { p0, s: self.s.unwrap_or(1), n: self.n.unwrap_or(1), coeffs, r: self.r.unwrap_or(1), zeta })
    }
}
