use std::io::{self, Write};

use num_bigint::BigInt;
use serde::Serialize;

use vgv_core::lfunction::{weil_bounds, Curve, Verdict};
use vgv_core::oracle::CountResult;

use crate::classify::{ClassifyReport, Row};
use crate::config::{Envelope, Format};
use crate::search::Certificate;
use crate::verify::VerifyReport;

pub const TSV_HEADER: [&str; 6] = ["k", "verdict", "evidence", "count", "bound_hi", "bound_lo"];

fn json<T: Serialize>(w: &mut impl Write, env: &Envelope<'_, T>) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, env)?;
    writeln!(w)
}

fn verdict_str(v: Option<Verdict>) -> String {
    v.map_or_else(|| "unknown".to_string(), |v| v.to_string())
}

fn opt(x: &Option<BigInt>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), |c| c.to_string())
}

/// Provenance comment lines, then the column header; `extra` adds a trailing spec column.
pub fn tsv_header(w: &mut impl Write, extra: bool) -> io::Result<()> {
    write!(w, "{}", TSV_HEADER.join("\t"))?;
    if extra {
        write!(w, "\tspec")?;
    }
    writeln!(w)
}

fn tsv_preamble<T: Serialize>(w: &mut impl Write, env: &Envelope<'_, T>) -> io::Result<()> {
    writeln!(w, "# {} {} {}", env.tool, env.version, env.command)?;
    writeln!(w, "# config {}", serde_json::to_string(env.config)?)
}

fn tsv_row(w: &mut impl Write, r: &Row) -> io::Result<()> {
    writeln!(w, "{}\t{}\t{}\t{}\t{}\t{}", r.k, verdict_str(r.verdict), r.evidence, opt(&r.count), r.bound_hi, r.bound_lo)
}

pub fn classify(w: &mut impl Write, env: &Envelope<'_, &ClassifyReport>, f: Format) -> io::Result<()> {
    let rep = env.result;
    match f {
        Format::Json => json(w, env),
        Format::Tsv => {
            tsv_preamble(w, env)?;
            writeln!(w, "# spec {}", rep.spec.canonical_json())?;
            tsv_header(w, false)?;
            rep.table.iter().try_for_each(|r| tsv_row(w, r))
        }
        Format::Pretty => {
            writeln!(w, "{} {}", env.tool, env.version)?;
            writeln!(w, "curve    {}", rep.spec.canonical_json())?;
            writeln!(w, "field    F_{}^{}  modulus {:?}", rep.field.p0, rep.field.m, rep.field.modulus)?;
            writeln!(w, "q        {}", rep.q)?;
            writeln!(w, "genus    {}", rep.genus)?;
            if let Some(d) = rep.splitting_degree {
                writeln!(w, "V_R splits over F_q^{d}")?;
            }
            match &rep.abelian {
                Some(a) => writeln!(w, "abelian  dim Abar = {}, path {:?}, A in F_q^2: {}", a.abar_basis.len(), a.path, a.flags.a_in_fq2)?,
                None => writeln!(w, "abelian  unavailable over F_q")?,
            }
            if let Some(fs) = &rep.formula {
                writeln!(w, "eigenvalues over F_(q^{}):", fs.extension)?;
                for e in &fs.eigenvalues {
                    writeln!(w, "  {} (x{})", e.display, e.multiplicity)?;
                }
                if let Some(l) = &fs.l_polynomial {
                    let terms: Vec<String> = l.iter().enumerate().filter(|(_, c)| **c != BigInt::from(0)).map(|(i, c)| format!("{c} T^{i}")).collect();
                    writeln!(w, "L(T) = {}", terms.join(" + "))?;
                }
            }
            writeln!(w, "{:>4} {:>9} {:>15} {:>24}", "k", "verdict", "evidence", "count")?;
            for r in &rep.table {
                writeln!(w, "{:>4} {:>9} {:>15} {:>24}", r.k, verdict_str(r.verdict), r.evidence, opt(&r.count))?;
            }
            for c in &rep.criteria {
                writeln!(w, "criterion {}: consistent with formula {:?}, oracle {:?}", c.id, c.consistent_with_formula, c.consistent_with_oracle)?;
            }
            rep.notes.iter().try_for_each(|n| writeln!(w, "note: {n}"))
        }
    }
}

pub fn verify(w: &mut impl Write, env: &Envelope<'_, &VerifyReport>, f: Format) -> io::Result<()> {
    let rep = env.result;
    match f {
        Format::Json => json(w, env),
        Format::Tsv => {
            tsv_preamble(w, env)?;
            for cell in &rep.cells {
                writeln!(w, "# {} {}", rep.theorem, cell.params)?;
                let Some(r) = &cell.report else {
                    writeln!(w, "# {}", cell.skipped.as_deref().or(cell.error.as_deref()).unwrap_or(""))?;
                    continue;
                };
                tsv_header(w, false)?;
                let curve = r.curve.as_ref().and_then(|s| Curve::resolve(s).ok());
                for p in &r.predictions {
                    let (lo, hi) = match &curve {
                        Some(c) => weil_bounds(c.p0(), p.field_degree, &c.genus()),
                        None => (BigInt::from(0), BigInt::from(0)),
                    };
                    let evidence = match (p.formula, p.oracle) {
                        (Some(_), Some(_)) => "formula+oracle",
                        (Some(_), None) => "formula",
                        (None, Some(_)) => "oracle",
                        (None, None) => "none",
                    };
                    writeln!(w, "{}\t{}\t{}\t{}\t{}\t{}", p.k, verdict_str(p.formula.or(p.oracle)), evidence, opt(&p.count), hi, lo)?;
                }
            }
            Ok(())
        }
        Format::Pretty => {
            writeln!(w, "{} {}  verify {}", env.tool, env.version, rep.theorem)?;
            writeln!(w, "{}", rep.statement)?;
            for cell in &rep.cells {
                match (&cell.report, &cell.skipped, &cell.error) {
                    (Some(r), _, _) => {
                        let status = if !r.hypotheses_met {
                            "hypotheses not met"
                        } else if r.consistent() {
                            "consistent"
                        } else {
                            "INCONSISTENT"
                        };
                        writeln!(w, "[{status}] {}", cell.params)?;
                        for h in r.checklist.iter().filter(|h| !h.pass) {
                            writeln!(w, "    fails: {} {}", h.name, h.witness.as_deref().unwrap_or(""))?;
                        }
                        for p in &r.predictions {
                            writeln!(w, "    {:>14} claim {:?}, formula {}, oracle {}, count {}", p.field, p.claim, verdict_str(p.formula), verdict_str(p.oracle), opt(&p.count))?;
                        }
                    }
                    (_, Some(s), _) => writeln!(w, "[skipped] {}: {s}", cell.params)?,
                    (_, _, Some(e)) => writeln!(w, "[ERROR] {}: {e}", cell.params)?,
                    _ => {}
                }
            }
            let s = &rep.summary;
            writeln!(w, "cells {}, hypotheses met {}, consistent {}, inconsistent {}, skipped {}, excluded {}: {}", s.cells, s.hypotheses_met, s.consistent, s.inconsistent, s.skipped, s.excluded, if rep.pass { "PASS" } else { "FAIL" })
        }
    }
}

pub fn count(w: &mut impl Write, env: &Envelope<'_, &CountResult>, f: Format) -> io::Result<()> {
    let r = env.result;
    match f {
        Format::Json => json(w, env),
        Format::Tsv => {
            tsv_preamble(w, env)?;
            tsv_header(w, false)?;
            writeln!(w, "{}\t{}\toracle\t{}\t{}\t{}", r.k, r.verdict, r.projective, r.bound_hi, r.bound_lo)
        }
        Format::Pretty => {
            writeln!(w, "{} {}", env.tool, env.version)?;
            writeln!(w, "F_{}^{}: {} points ({} affine), genus {}, Weil interval [{}, {}], {}", r.p0, r.field_degree, r.projective, r.affine, r.genus, r.bound_lo, r.bound_hi, r.verdict)
        }
    }
}

pub fn certificate_tsv(w: &mut impl Write, c: &Certificate) -> io::Result<()> {
    writeln!(w, "{}\t{}\t{}\t{}\t{}\t{}\t{}", c.k, c.verdict, c.evidence, opt(&c.count), c.bound_hi, c.bound_lo, c.spec.canonical_json())
}

pub fn certificate_pretty(w: &mut impl Write, c: &Certificate) -> io::Result<()> {
    writeln!(w, "{:<40} {:>14} {:>8} {:>15} {}", c.params, c.field, c.verdict.to_string(), c.evidence, c.criterion.unwrap_or("-"))
}
