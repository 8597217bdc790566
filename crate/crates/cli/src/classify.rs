use clap::Args;
use num_bigint::BigInt;
use serde::Serialize;

use vgv_core::criteria::{self, CriteriaError, CriterionReport, Evaluator};
use vgv_core::cyclotomic::CycInt;
use vgv_core::field::FieldDescriptor;
use vgv_core::heisenberg::{find_abelian, AbelianData};
use vgv_core::lfunction::{weil_bounds, Curve, CurveSpec, FormulaPath, LError, Verdict};
use vgv_core::oracle::{spec_hash, Oracle};

use crate::config::RunConfig;
use crate::errors::CliError;
use crate::spec_args::SpecArgs;

#[derive(Args, Debug, Clone)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// First k of the verdict table over F_{q^k}.
    #[arg(long, default_value_t = 1)]
    pub kmin: u32,
    /// Last k of the verdict table.
    #[arg(long, default_value_t = 4)]
    pub kmax: u32,
    /// Skip the criterion reports.
    #[arg(long)]
    pub no_criteria: bool,
}

/// One line of a verdict table over `F_{q^k}`.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub k: u32,
    pub field: String,
    pub verdict: Option<Verdict>,
    /// `formula+oracle`, `formula`, `oracle` or `none`.
    pub evidence: &'static str,
    #[serde(with = "vgv_core::bigfmt::opt_bigint")]
    pub count: Option<BigInt>,
    #[serde(with = "vgv_core::bigfmt::bigint")]
    pub bound_hi: BigInt,
    #[serde(with = "vgv_core::bigfmt::bigint")]
    pub bound_lo: BigInt,
}

#[derive(Serialize)]
pub struct Eigenvalue {
    pub tau: CycInt,
    pub display: String,
    pub multiplicity: usize,
}

#[derive(Serialize)]
pub struct FormulaSummary {
    /// The eigenvalues are those of Frobenius over `F_{q^extension}`.
    pub extension: u32,
    pub eigenvalues: Vec<Eigenvalue>,
    #[serde(with = "vgv_core::bigfmt::opt_bigint_vec")]
    pub l_polynomial: Option<Vec<BigInt>>,
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub spec: CurveSpec,
    pub spec_hash: String,
    pub field: FieldDescriptor,
    #[serde(with = "vgv_core::bigfmt::bigint")]
    pub q: BigInt,
    #[serde(with = "vgv_core::bigfmt::bigint")]
    pub genus: BigInt,
    /// Degree over F_q of the splitting field of `E_R`.
    pub splitting_degree: Option<usize>,
    pub abelian: Option<AbelianData>,
    pub formula: Option<FormulaSummary>,
    pub table: Vec<Row>,
    pub criteria: Vec<CriterionReport>,
    pub notes: Vec<String>,
}

/// The verdict table: formula and oracle wherever each applies; they must agree.
pub fn verdict_table(curve: &Curve, spec: &CurveSpec, formula: Option<&FormulaPath>, oracle: &mut Oracle<'_>, ks: impl Iterator<Item = u32>) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    for k in ks {
        let deg = curve.field_degree(k);
        let (bound_lo, bound_hi) = weil_bounds(curve.p0(), deg, &curve.genus());
        let fv = formula.and_then(|f| f.verdict(k));
        let fc = match formula {
            Some(f) => f.predicted_count(k)?,
            None => None,
        };
        let oc = if oracle.feasible(curve, k) { Some(oracle.count(spec, curve, k)?) } else { None };
        if let (Some(c), Some(o)) = (&fc, &oc) {
            if *c != o.projective {
                return Err(CliError::Math(format!("over F_{{{}^{deg}}} the formula predicts {c} points, the oracle counts {}", curve.p0(), o.projective)));
            }
        }
        if let (Some(v), Some(o)) = (fv, &oc) {
            if v != o.verdict {
                return Err(CliError::Math(format!("over F_{{{}^{deg}}} the formula says {v}, the oracle {}", curve.p0(), o.verdict)));
            }
        }
        let evidence = match (fv.is_some() || fc.is_some(), oc.is_some()) {
            (true, true) => "formula+oracle",
            (true, false) => "formula",
            (false, true) => "oracle",
            (false, false) => "none",
        };
        rows.push(Row {
            k,
            field: format!("F_{{{}^{deg}}}", curve.p0()),
            verdict: fv.or(oc.as_ref().map(|o| o.verdict)),
            evidence,
            count: oc.map(|o| o.projective).or(fc),
            bound_hi,
            bound_lo,
        });
    }
    Ok(rows)
}

fn soft<T>(r: Result<T, CriteriaError>, notes: &mut Vec<String>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) => match CliError::from(e) {
            CliError::Math(m) => Err(CliError::Math(m)),
            other => {
                notes.push(other.to_string());
                Ok(None)
            }
        },
    }
}

pub fn run(args: &ClassifyArgs, cfg: &RunConfig) -> Result<ClassifyReport, CliError> {
    if args.kmin == 0 || args.kmin > args.kmax {
        return Err(CliError::Usage(format!("empty k range {}..={}", args.kmin, args.kmax)));
    }
    let spec = args.spec.to_spec()?;
    let curve = Curve::resolve(&spec)?;
    let mut notes = Vec::new();
    let formula = match FormulaPath::build(&curve, cfg.max_ext) {
        Ok(f) => Some(f),
        Err(LError::FormulaPathUnavailable(m)) => {
            notes.push(format!("formula path unavailable: {m}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let abelian = match formula.as_ref().filter(|f| f.extension == 1 && curve.r == 1) {
        Some(f) => f.abelian.first().cloned(),
        None if curve.p0() != 2 && curve.e() >= 1 => match find_abelian(&curve.ctx, &curve.poly) {
            Ok(d) => Some(d),
            Err(e) => {
                notes.push(format!("no abelian subgroup data over F_q ({e}); falling back to the formula over an extension or to counting"));
                None
            }
        },
        None => None,
    };
    let summary = match &formula {
        Some(f) => {
            let l = match f.l_polynomial() {
                Ok(l) => Some(l),
                Err(LError::TooLarge(m)) => {
                    notes.push(m);
                    None
                }
                Err(e) => return Err(e.into()),
            };
            Some(FormulaSummary {
                extension: f.extension,
                eigenvalues: f.distinct.iter().map(|(t, m)| Eigenvalue { tau: t.clone(), display: t.to_string(), multiplicity: *m }).collect(),
                l_polynomial: l,
            })
        }
        None => None,
    };
    let mut cache = cfg.open_cache()?;
    let table = {
        let mut oracle = cfg.oracle(&mut cache);
        verdict_table(&curve, &spec, formula.as_ref(), &mut oracle, args.kmin..=args.kmax)?
    };
    let mut reports = Vec::new();
    if !args.no_criteria {
        let mut ev = Evaluator::new(cfg.oracle(&mut cache), cfg.max_ext);
        if curve.r == 1 {
            reports.extend(soft(criteria::thm_cpq(&mut ev, &spec), &mut notes)?);
            reports.extend(soft(criteria::thm_ast_family(&mut ev, &spec), &mut notes)?.into_iter().flatten());
            reports.extend(soft(criteria::prop_split(&mut ev, &spec), &mut notes)?);
            if curve.n % 2 == 0 && curve.e() as u32 == curve.n / 2 {
                reports.extend(soft(criteria::prop_pp(&mut ev, &spec), &mut notes)?);
            }
        } else if curve.n % 2 == 0 && curve.e() as u32 == curve.n / 2 {
            reports.extend(soft(criteria::prop_c1(&mut ev, &spec), &mut notes)?);
        }
        reports.extend(soft(criteria::conjecture_check(&mut ev, &spec, args.kmax), &mut notes)?);
        if spec.zeta.is_some() {
            reports.extend(soft(criteria::cor_ccc(&mut ev, &spec), &mut notes)?);
        }
        reports.retain(|r| r.hypotheses_met);
    }
    let splitting_degree = match curve.splitting_degree() {
        Ok(d) => Some(d),
        Err(e) => {
            notes.push(format!("splitting degree unavailable: {e}"));
            None
        }
    };
    Ok(ClassifyReport {
        spec_hash: spec_hash(&spec),
        field: curve.ctx.descriptor(),
        q: curve.q(),
        genus: curve.genus(),
        splitting_degree,
        abelian,
        formula: summary,
        table,
        criteria: reports,
        notes,
        spec,
    })
}
