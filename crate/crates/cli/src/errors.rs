use vgv_core::criteria::CriteriaError;
use vgv_core::field::FieldError;
use vgv_core::heisenberg::HeisError;
use vgv_core::lfunction::LError;
use vgv_core::oracle::OracleError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_MATH: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    /// Two independent computations disagree.
    Math(String),
    /// Refused for size: enumeration cap, field size or search budget.
    Resource(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Math(_) => EXIT_MATH,
            CliError::Resource(_) => EXIT_RESOURCE,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Math(m) | CliError::Resource(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self {
            CliError::Usage(_) => "usage error",
            CliError::Math(_) => "mathematical inconsistency",
            CliError::Resource(_) => "resource refusal",
        };
        write!(f, "{kind}: {}", self.message())
    }
}

fn field(e: &FieldError) -> CliError {
    match e {
        FieldError::DegreeTooLarge { .. } => CliError::Resource(e.to_string()),
        FieldError::NonPrimeP0(_) | FieldError::ZeroDegree => CliError::Usage(e.to_string()),
        _ => CliError::Math(e.to_string()),
    }
}

fn heis(e: &HeisError) -> CliError {
    match e {
        HeisError::Field(f) => field(f),
        HeisError::EvenCharacteristic | HeisError::DegreeZero | HeisError::HypothesisViolated(_) | HeisError::Lin(_) => CliError::Usage(e.to_string()),
        _ => CliError::Math(e.to_string()),
    }
}

impl From<LError> for CliError {
    fn from(e: LError) -> Self {
        match &e {
            LError::Spec(_) | LError::HypothesisViolated(_) | LError::FormulaPathUnavailable(_) | LError::Lin(_) => CliError::Usage(e.to_string()),
            LError::TooLarge(_) => CliError::Resource(e.to_string()),
            LError::Field(f) => field(f),
            LError::Heis(h) => heis(h),
            LError::Inconsistent(_) | LError::Cyc(_) => CliError::Math(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } => CliError::Resource(e.to_string()),
            OracleError::Mismatch { .. } => CliError::Math(e.to_string()),
            OracleError::Cache(_) => CliError::Usage(e.to_string()),
            OracleError::L(l) => l.into(),
        }
    }
}

impl From<CriteriaError> for CliError {
    fn from(e: CriteriaError) -> Self {
        match e {
            CriteriaError::L(l) => l.into(),
            CriteriaError::Oracle(o) => o.into(),
            CriteriaError::Heis(h) => heis(&h),
            CriteriaError::Field(f) => field(&f),
            CriteriaError::Inconsistent(_) | CriteriaError::ConjectureCounterexample(_) => CliError::Math(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
