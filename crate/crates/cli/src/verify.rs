use clap::Args;
use serde::Serialize;

use vgv_core::criteria::{self, CriteriaError, CriterionId, CriterionReport, Evaluator, Family214, TwistFamily};
use vgv_core::field::FieldCtx;
use vgv_core::lfunction::{CoeffSpec, CurveSpec};

use crate::config::RunConfig;
use crate::errors::CliError;
use crate::spec_args::{parse_int_list, SpecArgs};

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Criterion id: cpq, ttbb, ttb3, ttb4, t214, split, pp, c1, conj, mp, lc, ccc, minus2, lcc, lcc2, char3.
    #[arg(long)]
    pub theorem: CriterionId,
    /// A single curve (or `--p`, `--s`, `--n`, `--r` as grid parameters).
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Number of middle coefficients of g for t214.
    #[arg(long)]
    pub e: Option<u32>,
    /// `c_0, …, c_{e-1}` for t214; all choices when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Half the extension degree for pp and c1 (`q = p^{2f}`).
    #[arg(long, default_value_t = 1)]
    pub f: u32,
    /// The parameter alpha of the twist family.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<i64>,
    /// Degree of the twist field for ccc.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Largest k for criteria that sweep k.
    #[arg(long)]
    pub kmax: Option<u32>,
}

#[derive(Serialize)]
pub struct Cell {
    pub params: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<CriterionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Serialize, Default)]
pub struct Summary {
    pub cells: usize,
    pub hypotheses_met: usize,
    pub consistent: usize,
    pub inconsistent: usize,
    pub skipped: usize,
    /// Grid points outside the family (for t214: g does not divide x^n - 1).
    pub excluded: usize,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub theorem: CriterionId,
    pub statement: &'static str,
    pub cells: Vec<Cell>,
    pub summary: Summary,
    pub pass: bool,
}

struct Runner<'e, 'a> {
    ev: &'e mut Evaluator<'a>,
    cells: Vec<Cell>,
}

impl Runner<'_, '_> {
    fn push(&mut self, params: String, r: Result<Vec<CriterionReport>, CriteriaError>) {
        match r {
            Ok(reps) => {
                for rep in reps {
                    self.cells.push(Cell { params: params.clone(), report: Some(rep), skipped: None, error: None });
                }
            }
            Err(e) => match CliError::from(e) {
                CliError::Math(m) => self.cells.push(Cell { params, report: None, skipped: None, error: Some(m) }),
                other => self.cells.push(Cell { params, report: None, skipped: Some(other.to_string()), error: None }),
            },
        }
    }
}

fn one(r: Result<CriterionReport, CriteriaError>) -> Result<Vec<CriterionReport>, CriteriaError> {
    r.map(|x| vec![x])
}

/// Curves `a_0 x + a_1 x^p` over `F_{p^n}` with `a_1 ≠ 0`, for criteria taking an arbitrary curve.
fn default_grid(p0: u64, s: u32, n: u32, r: u32) -> Vec<CurveSpec> {
    let mut out = Vec::new();
    for a0 in 0..p0 as i64 {
        for a1 in 1..p0 as i64 {
            out.push(CurveSpec::prime(p0, s, n, &[a0, a1]).with_r(r));
        }
    }
    out
}

/// Twists of `2x^p + x` by one `ζ` per Frobenius orbit of `F_{p0^d}^×`.
pub fn twist_specs(p0: u64, d: u32, exact_degree: bool) -> Result<Vec<CurveSpec>, CliError> {
    let ctx = FieldCtx::new(p0, d as usize).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for i in 1..ctx.size() {
        let z = ctx.from_index(i);
        if exact_degree && ctx.element_degree(&z) != d as usize {
            continue;
        }
        let (mp, which) = criteria::prime_minpoly(&ctx, &z);
        // ζ resolves in the field of degree lcm(n, deg ζ) = d, which is `ctx` itself.
        if seen.insert(mp.clone()) {
            let n = if exact_degree { 1 } else { d };
            out.push(CurveSpec::prime(p0, 1, n, &[1, 2]).with_zeta(&mp, which));
        }
    }
    Ok(out)
}

pub fn run(args: &VerifyArgs, cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let mut cache = cfg.open_cache()?;
    let mut ev = Evaluator::new(cfg.oracle(&mut cache), cfg.max_ext);
    let mut run = Runner { ev: &mut ev, cells: Vec::new() };
    let id = args.theorem;
    let sa = &args.spec;
    let p0 = sa.p0.unwrap_or(3);
    let s = sa.s.unwrap_or(1);
    let mut excluded = 0;
    let given = if sa.is_given() { Some(sa.to_spec()?) } else { None };
    match id {
        CriterionId::Cpq | CriterionId::Ttbb | CriterionId::Ttb3 | CriterionId::Ttb4 | CriterionId::Split | CriterionId::Conj => {
            let r = sa.r.unwrap_or(if id == CriterionId::Conj { 2 } else { 1 });
            let specs = match &given {
                Some(sp) => vec![sp.clone()],
                None => default_grid(p0, s, sa.n.unwrap_or(2), r),
            };
            let kmax = args.kmax.unwrap_or(4);
            for sp in specs {
                let params = sp.canonical_json();
                let res = match id {
                    CriterionId::Cpq => one(criteria::thm_cpq(run.ev, &sp)),
                    CriterionId::Split => one(criteria::prop_split(run.ev, &sp)),
                    CriterionId::Conj => one(criteria::conjecture_check(run.ev, &sp, kmax)),
                    _ => criteria::thm_ast_family(run.ev, &sp).map(|v| v.into_iter().filter(|r| r.id == id).collect()),
                };
                run.push(params, res);
            }
        }
        CriterionId::Ccc => {
            let specs = match &given {
                Some(sp) => vec![sp.clone()],
                None => twist_specs(p0, args.d, false)?,
            };
            for sp in specs {
                let params = sp.canonical_json();
                let res = one(criteria::cor_ccc(run.ev, &sp));
                run.push(params, res);
            }
        }
        CriterionId::T214 => {
            let n = sa.n.ok_or_else(|| CliError::Usage("t214 needs --n".into()))?;
            let e = args.e.unwrap_or(1);
            let grids: Vec<Vec<i64>> = match &args.c {
                Some(c) => vec![parse_int_list(c)?],
                None => (0..(p0 as usize).pow(e)).map(|mut i| (0..e).map(|_| { let d = (i % p0 as usize) as i64; i /= p0 as usize; d }).collect()).collect(),
            };
            if args.c.as_ref().is_some_and(|_| grids[0].len() != e as usize) && args.e.is_some() {
                return Err(CliError::Usage(format!("--c has {} entries but --e = {e}", grids[0].len())));
            }
            for c in grids {
                let params = format!("p0={p0} s={s} n={n} c={c:?}");
                match Family214::build(p0, s, n, &c) {
                    Ok((sp, fam)) => {
                        let res = one(criteria::thm_214(run.ev, &sp, &fam));
                        run.push(params, res);
                    }
                    Err(CriteriaError::NotDividing(_)) if args.c.is_none() => excluded += 1,
                    Err(e) => run.push(params, Err(e)),
                }
            }
        }
        CriterionId::Pp | CriterionId::C1 => {
            let specs: Vec<CurveSpec> = match &given {
                Some(sp) => vec![sp.clone()],
                None => {
                    let f = args.f;
                    let q = p0.checked_pow(s * 2 * f).ok_or_else(|| CliError::Resource("field too large".into()))?;
                    let rs: Vec<u32> = match (id, sa.r) {
                        (_, Some(r)) => vec![r],
                        (CriterionId::C1, None) => vec![1, 2],
                        _ => vec![1],
                    };
                    let mut v = Vec::new();
                    for r in rs {
                        for i in 0..q - 1 {
                            let mut coeffs = vec![CoeffSpec::Int(0); f as usize];
                            coeffs.push(CoeffSpec::Power(format!("g^{i}")));
                            v.push(CurveSpec { p0, s, n: 2 * f, coeffs, r, zeta: None });
                        }
                    }
                    v
                }
            };
            for sp in specs {
                let params = sp.canonical_json();
                let res = one(if id == CriterionId::Pp { criteria::prop_pp(run.ev, &sp) } else { criteria::prop_c1(run.ev, &sp) });
                run.push(params, res);
            }
        }
        CriterionId::Mp => {
            let alphas: Vec<i64> = match args.alpha {
                Some(a) => vec![a],
                None => (1..p0 as i64 - 1).collect(),
            };
            for a in alphas {
                let res = one(criteria::thm_mp(run.ev, p0, s, a));
                run.push(format!("p0={p0} s={s} alpha={a}"), res);
            }
        }
        CriterionId::Minus2 => {
            let res = one(criteria::cor_minus2(run.ev, p0, s));
            run.push(format!("p0={p0} s={s}"), res);
        }
        CriterionId::Lc => {
            let kmax = args.kmax.unwrap_or(12);
            let res = one(criteria::thm_lc(run.ev, p0, s, kmax));
            run.push(format!("p0={p0} s={s} kmax={kmax}"), res);
        }
        CriterionId::Lcc | CriterionId::Lcc2 => {
            let alpha = if id == CriterionId::Lcc { args.alpha.unwrap_or(1) } else { 1 };
            let s = if id == CriterionId::Lcc { s } else { 1 };
            let kmax = args.kmax.unwrap_or(8);
            let r = match sa.r {
                Some(r) => r,
                None => TwistFamily::build(p0, s, alpha).map(|f| f.d as u32).map_err(CliError::from)?,
            };
            let params = format!("p0={p0} s={s} alpha={alpha} r={r} kmax={kmax}");
            let res = one(if id == CriterionId::Lcc { criteria::thm_lcc(run.ev, p0, s, alpha, r, kmax) } else { criteria::cor_lcc2(run.ev, p0, r, kmax) });
            run.push(params, res);
        }
        CriterionId::Char3 => {
            let kmax = args.kmax.unwrap_or(3);
            let res = criteria::char3(run.ev, kmax, sa.r, kmax);
            run.push(format!("kmax={kmax} r={:?}", sa.r), res);
        }
    }
    let cells = run.cells;
    let mut summary = Summary { cells: cells.len(), excluded, ..Summary::default() };
    for c in &cells {
        match (&c.report, &c.skipped, &c.error) {
            (Some(r), _, _) if r.hypotheses_met => {
                summary.hypotheses_met += 1;
                if r.consistent() {
                    summary.consistent += 1;
                } else {
                    summary.inconsistent += 1;
                }
            }
            (_, Some(_), _) => summary.skipped += 1,
            (_, _, Some(_)) => summary.inconsistent += 1,
            _ => {}
        }
    }
    let pass = summary.inconsistent == 0;
    Ok(VerifyReport { theorem: id, statement: id.statement(), cells, summary, pass })
}
