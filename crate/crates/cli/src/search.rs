use std::io::Write;

use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use vgv_core::arith;
use vgv_core::criteria::{self, CriteriaError, Evaluator, Family214};
use vgv_core::lfunction::{weil_bounds, CoeffSpec, Curve, CurveSpec, FormulaPath, LError, Verdict};
use vgv_core::oracle::{spec_hash, Oracle};

use crate::config::{RunConfig, TOOL, VERSION};
use crate::errors::CliError;
use crate::verify::twist_specs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Self-reciprocal divisors g of x^n - 1 with p = 1 mod n.
    T214,
    /// Twists of 2x^p + x by zeta of exact degree d over F_p0.
    Twists,
    /// R = a x^{p^e}, one a per class modulo (p^e + 1)-th powers.
    Monomial,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Restrict to this characteristic.
    #[arg(long)]
    pub p0: Option<u64>,
    #[arg(long, default_value_t = 3)]
    pub p_min: u64,
    #[arg(long, default_value_t = 13)]
    pub p_max: u64,
    /// `p = p0^s`.
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    /// Largest n (t214, monomial).
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
    /// Largest twist degree (twists).
    #[arg(long, default_value_t = 4)]
    pub d_max: u32,
    /// Certify verdicts over F_{q^k} for k up to this bound.
    #[arg(long, default_value_t = 2)]
    pub kmax: u32,
    /// Confirm formula verdicts by counting where the field is within the cap.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub tool: &'static str,
    pub version: &'static str,
    pub family: Family,
    pub params: String,
    pub spec: CurveSpec,
    pub spec_hash: String,
    pub k: u32,
    pub field: String,
    pub verdict: Verdict,
    pub evidence: &'static str,
    #[serde(with = "vgv_core::bigfmt::opt_bigint")]
    pub count: Option<BigInt>,
    #[serde(with = "vgv_core::bigfmt::bigint")]
    pub bound_hi: BigInt,
    #[serde(with = "vgv_core::bigfmt::bigint")]
    pub bound_lo: BigInt,
    /// Criterion whose hypotheses this curve meets and whose prediction the verdict matches.
    pub criterion: Option<&'static str>,
}

struct Cell {
    params: String,
    spec: CurveSpec,
    fam: Option<Family214>,
}

fn primes(args: &SearchArgs) -> Vec<u64> {
    match args.p0 {
        Some(p) => vec![p],
        None => (args.p_min.max(3)..=args.p_max).filter(|&p| arith::is_prime(p)).collect(),
    }
}

/// Parameter cells in canonical order, after the cheap congruence and divisibility gates.
fn cells(args: &SearchArgs) -> Result<Vec<Cell>, CliError> {
    let mut out = Vec::new();
    for p0 in primes(args) {
        let Some(p) = p0.checked_pow(args.s) else { continue };
        match args.family {
            Family::T214 => {
                for n in 2..=args.n_max {
                    if (p - 1) % n as u64 != 0 {
                        continue;
                    }
                    for e in 1..=(n - 1) / 2 {
                        let total = p0.checked_pow(e).unwrap_or(u64::MAX);
                        for mut i in 0..total {
                            let c: Vec<i64> = (0..e).map(|_| { let d = (i % p0) as i64; i /= p0; d }).collect();
                            match Family214::build(p0, args.s, n, &c) {
                                Ok((spec, fam)) => out.push(Cell { params: format!("p0={p0} s={} n={n} e={e} c={c:?}", args.s), spec, fam: Some(fam) }),
                                Err(CriteriaError::NotDividing(_)) => {}
                                Err(e) => return Err(e.into()),
                            }
                        }
                    }
                }
            }
            Family::Twists => {
                for d in 1..=args.d_max {
                    if p0.checked_pow(d).map_or(true, |q| q > 1 << 24) {
                        continue;
                    }
                    for spec in twist_specs(p0, d, true)? {
                        let z = spec.zeta.as_ref().unwrap();
                        out.push(Cell { params: format!("p0={p0} d={d} zeta_minpoly={:?} root={}", z.minpoly, z.which_root), spec, fam: None });
                    }
                }
            }
            Family::Monomial => {
                for n in 1..=args.n_max {
                    let Some(q) = p.checked_pow(n) else { continue };
                    for e in 1..=args.n_max {
                        // x -> cx scales a by c^{p^e + 1}: the classes of F_q^× modulo those powers.
                        let Some(pe) = p.checked_pow(e) else { continue };
                        let classes = arith::gcd(q - 1, pe + 1);
                        for i in 0..classes {
                            let mut coeffs = vec![CoeffSpec::Int(0); e as usize];
                            coeffs.push(CoeffSpec::Power(format!("g^{i}")));
                            let spec = CurveSpec { p0, s: args.s, n, coeffs, r: 1, zeta: None };
                            out.push(Cell { params: format!("p0={p0} s={} n={n} e={e} a=g^{i}", args.s), spec, fam: None });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn certify(cell: &Cell, ev: &mut Evaluator<'_>, cfg: &RunConfig, kmax: u32, family: Family) -> Result<Vec<Certificate>, CliError> {
    let curve = Curve::resolve(&cell.spec)?;
    let formula = match FormulaPath::build(&curve, cfg.max_ext) {
        Ok(f) => Some(f),
        Err(LError::FormulaPathUnavailable(_)) | Err(LError::TooLarge(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let report = match &cell.fam {
        Some(fam) => Some(criteria::thm_214(ev, &cell.spec, fam)?),
        None if cell.spec.zeta.is_some() => Some(criteria::cor_ccc(ev, &cell.spec)?),
        None => None,
    };
    let rows = crate::classify::verdict_table(&curve, &cell.spec, formula.as_ref(), &mut ev.oracle, 1..=kmax)?;
    let hash = spec_hash(&cell.spec);
    let mut out = Vec::new();
    for row in rows {
        let Some(v) = row.verdict.filter(|v| *v != Verdict::Neither) else { continue };
        let criterion = report.as_ref().filter(|r| r.hypotheses_met && r.predictions.iter().any(|p| p.k == row.k && p.claim.matches(v))).map(|r| r.id.as_str());
        let (bound_lo, bound_hi) = weil_bounds(curve.p0(), curve.field_degree(row.k), &curve.genus());
        out.push(Certificate {
            tool: TOOL,
            version: VERSION,
            family,
            params: cell.params.clone(),
            spec: cell.spec.clone(),
            spec_hash: hash.clone(),
            k: row.k,
            field: row.field,
            verdict: v,
            evidence: row.evidence,
            count: row.count,
            bound_hi,
            bound_lo,
            criterion,
        });
    }
    Ok(out)
}

const CHUNK: usize = 64;

/// Streams certificates to `out` in canonical parameter order. Returns the number written.
pub fn run(args: &SearchArgs, cfg: &RunConfig, out: &mut dyn FnMut(&Certificate) -> std::io::Result<()>) -> Result<usize, CliError> {
    if args.kmax == 0 {
        return Err(CliError::Usage("--kmax must be at least 1".into()));
    }
    let all = cells(args)?;
    let within = all.len().min(cfg.budget as usize);
    let mut written = 0;
    if args.oracle {
        let mut cache = cfg.open_cache()?;
        let mut ev = Evaluator::new(cfg.oracle(&mut cache), cfg.max_ext);
        for cell in &all[..within] {
            for c in certify(cell, &mut ev, cfg, args.kmax, args.family)? {
                out(&c).map_err(|e| CliError::Resource(e.to_string()))?;
                written += 1;
            }
        }
    } else {
        for chunk in all[..within].chunks(CHUNK) {
            let batch: Vec<Result<Vec<Certificate>, CliError>> = chunk
                .par_iter()
                .map(|cell| {
                    let mut ev = Evaluator::new(Oracle { cap: 0, cache: None }, cfg.max_ext);
                    certify(cell, &mut ev, cfg, args.kmax, args.family)
                })
                .collect();
            for res in batch {
                for c in res? {
                    out(&c).map_err(|e| CliError::Resource(e.to_string()))?;
                    written += 1;
                }
            }
        }
    }
    if all.len() > within {
        return Err(CliError::Resource(format!(
            "search budget of {} cells exhausted ({} cells in range); {written} certificates flushed",
            cfg.budget,
            all.len()
        )));
    }
    Ok(written)
}

pub fn write_jsonl(w: &mut impl Write, c: &Certificate) -> std::io::Result<()> {
    serde_json::to_writer(&mut *w, c)?;
    writeln!(w)
}
