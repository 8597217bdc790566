//! Named maximality criteria as executable predicates. Each returns a hypothesis checklist,
//! its predictions, and whether the formula path and the point-count oracle agree with them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cyclotomic::CycInt;
use crate::field::{FFElem, FieldCtx, FieldError};
use crate::fpoly::{self, Poly};
use crate::heisenberg::{find_abelian, AbelianData, CharacterSolver, ConstructionPath, HeisError};
use crate::lfunction::{gauss_data, Curve, CurveSpec, FormulaPath, LError, Verdict};
use crate::linalg::FpMatrix;
use crate::linearized::{e_r, kernel, KernelSpace, LinPoly};
use crate::oracle::{Oracle, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CriteriaError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("g(x) does not divide x^n - 1: {0}")]
    NotDividing(String),
    #[error("congruence requirement fails: {0}")]
    BadCongruence(String),
    #[error("alpha must lie in F_p outside {{0, -1}}: {0}")]
    BadAlpha(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("conjectured divisibility fails (counterexample candidate): {0}")]
    ConjectureCounterexample(String),
    #[error(transparent)]
    L(#[from] LError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Heis(#[from] HeisError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl From<crate::linearized::LinError> for CriteriaError {
    fn from(e: crate::linearized::LinError) -> Self {
        CriteriaError::L(LError::Lin(e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionId {
    Cpq,
    Ttbb,
    Ttb3,
    Ttb4,
    T214,
    Split,
    Pp,
    C1,
    Conj,
    Mp,
    Lc,
    Ccc,
    Minus2,
    Lcc,
    Lcc2,
    Char3,
}

impl CriterionId {
    pub const ALL: [CriterionId; 16] = [
        CriterionId::Cpq,
        CriterionId::Ttbb,
        CriterionId::Ttb3,
        CriterionId::Ttb4,
        CriterionId::T214,
        CriterionId::Split,
        CriterionId::Pp,
        CriterionId::C1,
        CriterionId::Conj,
        CriterionId::Mp,
        CriterionId::Lc,
        CriterionId::Ccc,
        CriterionId::Minus2,
        CriterionId::Lcc,
        CriterionId::Lcc2,
        CriterionId::Char3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CriterionId::Cpq => "cpq",
            CriterionId::Ttbb => "ttbb",
            CriterionId::Ttb3 => "ttb3",
            CriterionId::Ttb4 => "ttb4",
            CriterionId::T214 => "t214",
            CriterionId::Split => "split",
            CriterionId::Pp => "pp",
            CriterionId::C1 => "c1",
            CriterionId::Conj => "conj",
            CriterionId::Mp => "mp",
            CriterionId::Lc => "lc",
            CriterionId::Ccc => "ccc",
            CriterionId::Minus2 => "minus2",
            CriterionId::Lcc => "lcc",
            CriterionId::Lcc2 => "lcc2",
            CriterionId::Char3 => "char3",
        }
    }

    /// What the criterion asserts, in words.
    pub fn statement(self) -> &'static str {
        match self {
            CriterionId::Cpq => "p0 odd, e >= 1, A in F_q^2: for n even the curve is maximal or minimal over F_{q^p0} according to the quadratic character of a_e; for n odd it is neither over F_{q^k}",
            CriterionId::Ttbb => "if the trace condition on the annihilator of Ker a fails, the curve is neither maximal nor minimal over F_{q^k} for every k prime to p0",
            CriterionId::Ttb3 => "under the trace condition the curve is F_{q^4}-minimal, and F_{q^2}-minimal or maximal as q is 1 or 3 mod 4",
            CriterionId::Ttb4 => "under the trace condition the F_q verdict follows the quadratic character of a_e (n even) and is neither for n odd",
            CriterionId::T214 => "for R built from a self-reciprocal divisor g of x^n - 1 with p = 1 mod n, the F_{q^2} and F_q verdicts depend only on q mod 4, n, p0 mod 4 and f0 mod 4",
            CriterionId::Split => "for p0 odd and n even, the curve is F_q-maximal or F_q-minimal exactly when V_R lies in F_q",
            CriterionId::Pp => "for e = f and q = p^{2f}: F_q-maximal iff Tr(xR(x)) vanishes on F_q iff a_0..a_{f-1} = 0 and a_f^{p^f} + a_f = 0",
            CriterionId::C1 => "for e = f and q = p^{2f}: the generalized curve is F_q-maximal iff r | f, a_0..a_{f-1} = 0 and a_f^{p^f} + a_f = 0",
            CriterionId::Conj => "F_{p^{2f}}-maximality of the generalized curve forces r | gcd(e_R, f), e_R = gcd{i >= 1 : a_i != 0}",
            CriterionId::Mp => "for R = 2x^p + x and zeta^{p-1} = beta = -(alpha(alpha+1))^{-1}: d odd and p = 3 mod 4 gives F_{p^{2 p0 d}}-maximality of the twist; d even with beta^{d/2} = -1 gives F_{p^{p0 d}}-maximality",
            CriterionId::Lc => "for R = 2x^p + x over F_p: p = 1 mod 4 gives F_{p^k}-minimality for 6 | k; p = 3 mod 4 gives F_{p^k}-maximality iff 6 | k with k/6 odd",
            CriterionId::Ccc => "for R = 2x^p + x and a twist zeta with a nonzero xi in V_{zeta R}, all in F_{p^d}: p^d = 3 mod 4 gives F_{p^{2 p0 d}}-maximality; d even with (zeta/p^d)(-1/p)^{d/2} = -1 gives F_{p^{p0 d}}-maximality",
            CriterionId::Minus2 => "alpha = 1, beta = -1/2, d the order of -2: d odd with p = 3 mod 4 gives F_{p^{2 p0 d}}-maximality, d even gives F_{p^{p0 d}}-maximality; p0 = 3 mod 8 forces d odd, p0 = 5, 7 mod 8 forces d even",
            CriterionId::Lcc => "if d = 0 mod 4 and beta^{d/2} = -1, the generalized curve with d | r is never maximal over any F_{p0^k}",
            CriterionId::Lcc2 => "for p0 = 5 mod 8 with d the order of -2, or a Fermat prime p0 = 2^{2^m} + 1 with d = 2^{m+1}, the generalized curve with d | r is never maximal",
            CriterionId::Char3 => "in characteristic 3 with zeta^4 + zeta^2 - 1 = 0 the twist is F_{3^{4k}}-maximal iff k is odd, and the generalized curve with 4 | r is never maximal",
        }
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CriterionId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        CriterionId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown criterion {s:?}; known: {}", CriterionId::ALL.map(|c| c.as_str()).join(", ")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Hypothesis {
    fn new(name: impl Into<String>, pass: bool, witness: impl Into<String>) -> Self {
        let w: String = witness.into();
        Hypothesis { name: name.into(), pass, witness: (!w.is_empty()).then_some(w) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Maximal,
    Minimal,
    Neither,
    MaximalOrMinimal,
    NotMaximal,
}

impl Claim {
    pub fn matches(self, v: Verdict) -> bool {
        match self {
            Claim::Maximal => v == Verdict::Maximal,
            Claim::Minimal => v == Verdict::Minimal,
            Claim::Neither => v == Verdict::Neither,
            Claim::MaximalOrMinimal => v != Verdict::Neither,
            Claim::NotMaximal => v != Verdict::Maximal,
        }
    }

    fn from_verdict(v: Verdict) -> Claim {
        match v {
            Verdict::Maximal => Claim::Maximal,
            Verdict::Minimal => Claim::Minimal,
            Verdict::Neither => Claim::Neither,
        }
    }
}

/// A claim about the curve over `F_{q^k}`, with what the two routes observed.
#[derive(Clone, Debug, Serialize)]
pub struct Prediction {
    pub k: u32,
    pub field: String,
    pub field_degree: u64,
    pub claim: Claim,
    pub formula: Option<Verdict>,
    pub oracle: Option<Verdict>,
    #[serde(with = "crate::bigfmt::opt_bigint")]
    pub count: Option<BigInt>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: CriterionId,
    pub statement: &'static str,
    pub curve: Option<CurveSpec>,
    pub checklist: Vec<Hypothesis>,
    pub hypotheses_met: bool,
    pub predictions: Vec<Prediction>,
    /// `None` when the formula path produced no verdict for any prediction.
    pub consistent_with_formula: Option<bool>,
    /// `None` when no prediction was within the oracle's enumeration cap.
    pub consistent_with_oracle: Option<bool>,
    pub notes: Vec<String>,
}

impl CriterionReport {
    fn new(id: CriterionId, curve: Option<CurveSpec>) -> Self {
        CriterionReport {
            id,
            statement: id.statement(),
            curve,
            checklist: Vec::new(),
            hypotheses_met: false,
            predictions: Vec::new(),
            consistent_with_formula: None,
            consistent_with_oracle: None,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, witness: impl Into<String>) -> bool {
        self.checklist.push(Hypothesis::new(name, pass, witness));
        pass
    }

    fn settle(&mut self) -> bool {
        self.hypotheses_met = self.checklist.iter().all(|h| h.pass);
        self.hypotheses_met
    }

    fn predict(&mut self, curve: &Curve, k: u32, claim: Claim) {
        let deg = curve.field_degree(k);
        self.predictions.push(Prediction {
            k,
            field: format!("F_{{{}^{}}}", curve.p0(), deg),
            field_degree: deg,
            claim,
            formula: None,
            oracle: None,
            count: None,
        });
    }

    /// True when no observation contradicts a prediction.
    pub fn consistent(&self) -> bool {
        self.consistent_with_formula != Some(false) && self.consistent_with_oracle != Some(false)
    }
}

/// Shared machinery for evaluating predictions: the oracle with its cap and cache, and how far
/// the formula path may extend the base field.
pub struct Evaluator<'a> {
    pub oracle: Oracle<'a>,
    pub max_ext: u32,
}

impl<'a> Evaluator<'a> {
    pub fn new(oracle: Oracle<'a>, max_ext: u32) -> Self {
        Evaluator { oracle, max_ext }
    }

    /// The formula path, or `None` with the reason noted when it does not apply.
    pub fn formula(&self, curve: &Curve, notes: &mut Vec<String>) -> Result<Option<FormulaPath>, CriteriaError> {
        match FormulaPath::build(curve, self.max_ext) {
            Ok(f) => Ok(Some(f)),
            Err(LError::FormulaPathUnavailable(m)) | Err(LError::TooLarge(m)) => {
                notes.push(format!("formula path unavailable: {m}"));
                Ok(None)
            }
            Err(e) => Err(e.into()),
        }
    }

    /// Fills in formula and oracle verdicts for every prediction. Formula and oracle must agree
    /// on counts and verdicts wherever both apply.
    pub fn observe(&mut self, report: &mut CriterionReport, spec: &CurveSpec, curve: &Curve, formula: Option<&FormulaPath>) -> Result<(), CriteriaError> {
        let mut fcons: Option<bool> = None;
        let mut ocons: Option<bool> = None;
        for pred in &mut report.predictions {
            if let Some(f) = formula {
                pred.formula = f.verdict(pred.k);
            }
            if self.oracle.feasible(curve, pred.k) {
                let row = self.oracle.count(spec, curve, pred.k)?;
                if let Some(f) = formula {
                    if let Some(c) = f.predicted_count(pred.k)? {
                        if c != row.projective {
                            return Err(CriteriaError::Inconsistent(format!(
                                "formula count {c} differs from oracle count {} over {}",
                                row.projective, pred.field
                            )));
                        }
                    }
                }
                pred.oracle = Some(row.verdict);
                pred.count = Some(row.projective);
            }
            if let (Some(a), Some(b)) = (pred.formula, pred.oracle) {
                if a != b {
                    return Err(CriteriaError::Inconsistent(format!("formula verdict {a} differs from oracle verdict {b} over {}", pred.field)));
                }
            }
            if let Some(v) = pred.formula {
                fcons = Some(fcons.unwrap_or(true) && pred.claim.matches(v));
            }
            if let Some(v) = pred.oracle {
                ocons = Some(ocons.unwrap_or(true) && pred.claim.matches(v));
            }
        }
        report.consistent_with_formula = fcons;
        report.consistent_with_oracle = ocons;
        Ok(())
    }

    /// Verdict over `F_{q^k}` from whichever route applies, formula first.
    fn verdict_at(&mut self, spec: &CurveSpec, curve: &Curve, formula: Option<&FormulaPath>, k: u32) -> Result<Option<Verdict>, CriteriaError> {
        if let Some(v) = formula.and_then(|f| f.verdict(k)) {
            return Ok(Some(v));
        }
        if self.oracle.feasible(curve, k) {
            return Ok(Some(self.oracle.count(spec, curve, k)?.verdict));
        }
        Ok(None)
    }
}

fn p_of(curve: &Curve) -> u64 {
    curve.p0().pow(curve.s)
}

fn q_mod4(curve: &Curve) -> u64 {
    arith::powmod(curve.p0() % 4, curve.m() as u64, 4)
}

fn coords(x: &FFElem) -> String {
    format!("{:?}", x.coeffs())
}

/// Outcome of the trace condition on the annihilator of `Ker a`, computed two ways.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionAst {
    pub holds: bool,
    /// `Tr_{q/p}(c_A^{-1} λ^2) = 0` for every `λ` with `Tr_{q/p}(λ t) = 0` on `Ker a`.
    pub direct: bool,
    /// `ψ_q(-4^{-1} c_A^{-1} η^2) = 1` for every character.
    pub character_form: bool,
    /// For eigenvector-built `A` with `a_e ∈ F_p`: whether `{k_i + k_j}` avoids `{0, n}`.
    pub exponent_sums: Option<bool>,
    pub annihilator_dim: usize,
    pub witness: Option<FFElem>,
}

/// `λ ∈ F_q` with `Tr_{q/p}(λ t) = 0` for all `t ∈ Ker a`, as an F_p0-basis.
fn trace_annihilator(ctx: &FieldCtx, s: u32, ker_a: &[FFElem]) -> Result<Vec<FFElem>, CriteriaError> {
    let m = ctx.degree();
    let mus = ctx.subfield_basis(s as usize)?;
    let powers: Vec<FFElem> = (0..m)
        .map(|i| {
            let mut v = vec![0; m];
            v[i] = 1;
            ctx.from_coeffs(v).unwrap()
        })
        .collect();
    let mut rows = Vec::new();
    for t in ker_a {
        for mu in &mus {
            let tm = ctx.mul(t, mu);
            rows.push(powers.iter().map(|x| ctx.trace_to_prime(&ctx.mul(x, &tm))).collect::<Vec<u64>>());
        }
    }
    if rows.is_empty() {
        return Ok(powers);
    }
    Ok(FpMatrix::from_rows(ctx.p0(), m, &rows).nullspace().into_iter().map(|c| ctx.from_coeffs(c).unwrap()).collect())
}

/// The trace condition for `(R, A)`, checked directly on the annihilator of `Ker a` and through
/// the characters; for eigenvector-built `A` also through the exponent sums. All forms must agree.
pub fn condition_ast(ctx: &FieldCtx, poly: &LinPoly, data: &AbelianData) -> Result<ConditionAst, CriteriaError> {
    if ctx.p0() == 2 {
        return Err(CriteriaError::HypothesisViolated("p0 = 2".into()));
    }
    if !data.flags.a_in_fq2 {
        return Err(CriteriaError::HypothesisViolated("A is not contained in F_q^2".into()));
    }
    let s = data.s as usize;
    let ann = trace_annihilator(ctx, data.s, &data.ker_a_basis)?;
    let c_inv = ctx.inv(&data.c_a).ok_or_else(|| CriteriaError::Inconsistent("c_A = 0".into()))?;
    let qform = |l: &FFElem| -> Result<bool, CriteriaError> { Ok(ctx.trace_to(&ctx.mul(&c_inv, &ctx.square(l)), s)?.is_zero()) };
    // A quadratic form over F_p0 (p0 odd) vanishes on a subspace iff it vanishes on a basis
    // and on all pairwise sums.
    let mut candidates = Vec::new();
    let span = KernelSpace { basis: ann.clone() };
    if span.contains(ctx, &ctx.one()) {
        candidates.push(ctx.one());
    }
    candidates.extend(ann.iter().cloned());
    for i in 0..ann.len() {
        for j in i + 1..ann.len() {
            candidates.push(ctx.add(&ann[i], &ann[j]));
        }
    }
    let mut witness = None;
    for l in &candidates {
        if !qform(l)? {
            witness = Some(l.clone());
            break;
        }
    }
    let direct = witness.is_none();

    let solver = CharacterSolver::new(ctx, data)?;
    let idx = solver.indices(ctx)?;
    let four_c = ctx.mul(&ctx.from_int(4), &data.c_a);
    let character_form = idx
        .par_iter()
        .map(|i| -> Result<bool, CriteriaError> {
            let eta = solver.eta(ctx, i)?;
            let arg = ctx.neg(&ctx.div(&ctx.square(&eta), &four_c).unwrap());
            Ok(ctx.trace_to_prime(&ctx.mul(&i.lambda, &arg)) == 0)
        })
        .collect::<Result<Vec<bool>, _>>()?
        .into_iter()
        .all(|b| b);
    if direct != character_form {
        return Err(CriteriaError::Inconsistent(format!("trace condition: direct form {direct}, character form {character_form}")));
    }
    let exponent_sums = match &data.path {
        ConstructionPath::Eigenvector { exponents } if poly.leading().is_some_and(|a| ctx.in_subfield(a, s)) => {
            let n = (ctx.degree() / s) as u32;
            let hit = exponents.iter().any(|&a| exponents.iter().any(|&b| a + b == 0 || a + b == n));
            Some(!hit)
        }
        _ => None,
    };
    if let Some(m) = exponent_sums {
        if m != direct {
            return Err(CriteriaError::Inconsistent(format!("exponent-sum criterion {m} disagrees with the trace condition {direct}")));
        }
    }
    Ok(ConditionAst { holds: direct, direct, character_form, exponent_sums, annihilator_dim: ann.len(), witness })
}

struct BaseChecks {
    spec: CurveSpec,
    curve: Curve,
    data: Option<AbelianData>,
}

/// Checklist shared by the F_{q^k} criteria: p0 odd, e ≥ 1, r = 1, A ⊂ F_q^2.
fn base_checks(report: &mut CriterionReport, spec: &CurveSpec) -> Result<BaseChecks, CriteriaError> {
    let curve = Curve::resolve(spec)?;
    report.check("p0 odd", curve.p0() != 2, format!("p0 = {}", curve.p0()));
    report.check("e >= 1", curve.e() >= 1, format!("e = {}", curve.e()));
    report.check("r = 1", curve.r == 1, format!("r = {}", curve.r));
    let mut data = None;
    if curve.p0() != 2 && curve.e() >= 1 {
        match find_abelian(&curve.ctx, &curve.poly) {
            Ok(d) => {
                let ok = d.flags.a_in_fq2;
                report.check("A in F_q^2", ok, if ok { String::new() } else { "Tr(xR(x)) does not vanish on the chosen Lagrangian".into() });
                if ok {
                    data = Some(d);
                }
            }
            Err(HeisError::NoFrobeniusStableLagrangian(m)) => {
                report.check("A in F_q^2", false, m);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(BaseChecks { spec: spec.clone(), curve, data })
}

/// Verdict over `F_{q^k}` from the table indexed by `(p0 mod 4, f0, (a_e/q))` for `n` even.
fn ae_table(p0: u64, f0: u64, ae_symbol: i8) -> Claim {
    let sign = if p0 % 4 == 1 { 1 } else if (f0 / 2) % 2 == 0 { 1 } else { -1 };
    if ae_symbol == -sign {
        Claim::Maximal
    } else {
        Claim::Minimal
    }
}

/// Maximal/minimal over `F_{q^{p0}}` by the quadratic character of `a_e`; neither when `n` is odd.
pub fn thm_cpq(ev: &mut Evaluator<'_>, spec: &CurveSpec) -> Result<CriterionReport, CriteriaError> {
    let mut rep = CriterionReport::new(CriterionId::Cpq, Some(spec.clone()));
    let b = base_checks(&mut rep, spec)?;
    if !rep.settle() {
        return Ok(rep);
    }
    let c = &b.curve;
    let p0 = c.p0();
    if c.n % 2 == 0 {
        let ae = c.ctx.legendre(c.poly.leading().unwrap())?;
        rep.notes.push(format!("(a_e/q) = {ae}, f0 = {}", c.m()));
        rep.predict(c, p0 as u32, ae_table(p0, c.m() as u64, ae));
    } else {
        // The odd-n statement is exercised at odd k: for even k the ψ-independence of G^k
        // that it rests on no longer fails (2x^3 + x over F_3 is F_{3^6}-maximal).
        rep.notes.push("n odd: neither asserted at odd k only".into());
        rep.predict(c, 1, Claim::Neither);
        rep.predict(c, p0 as u32, Claim::Neither);
    }
    let f = ev.formula(c, &mut rep.notes)?;
    ev.observe(&mut rep, &b.spec, c, f.as_ref())?;
    Ok(rep)
}

/// The three trace-condition criteria: `ttbb` when the condition fails, `ttb3` and `ttb4` when it holds.
pub fn thm_ast_family(ev: &mut Evaluator<'_>, spec: &CurveSpec) -> Result<Vec<CriterionReport>, CriteriaError> {
    let mut reps: Vec<CriterionReport> = [CriterionId::Ttbb, CriterionId::Ttb3, CriterionId::Ttb4].iter().map(|&id| CriterionReport::new(id, Some(spec.clone()))).collect();
    let mut base = None;
    for r in reps.iter_mut() {
        base = Some(base_checks(r, spec)?);
    }
    let b = base.unwrap();
    let cond = match &b.data {
        Some(d) if reps[0].checklist.iter().all(|h| h.pass) => Some(condition_ast(&b.curve.ctx, &b.curve.poly, d)?),
        _ => None,
    };
    let c = &b.curve;
    let p0 = c.p0();
    let mut f_notes = Vec::new();
    let f = if cond.is_some() { ev.formula(c, &mut f_notes)? } else { None };
    for r in reps.iter_mut() {
        r.notes.extend(f_notes.iter().cloned());
        let Some(cond) = &cond else {
            r.settle();
            continue;
        };
        let w = cond.witness.as_ref().map(|x| format!("lambda = {}", coords(x))).unwrap_or_default();
        match r.id {
            CriterionId::Ttbb => {
                r.check("trace condition fails", !cond.holds, w);
                if r.settle() {
                    for k in (1..=4u32).filter(|k| arith::gcd(*k as u64, p0) == 1) {
                        r.predict(c, k, Claim::Neither);
                    }
                }
            }
            CriterionId::Ttb3 => {
                r.check("trace condition holds", cond.holds, w);
                if r.settle() {
                    r.predict(c, 4, Claim::Minimal);
                    r.predict(c, 2, if q_mod4(c) == 3 { Claim::Maximal } else { Claim::Minimal });
                }
            }
            _ => {
                r.check("trace condition holds", cond.holds, w);
                if r.settle() {
                    if c.n % 2 == 0 {
                        let ae = c.ctx.legendre(c.poly.leading().unwrap())?;
                        r.predict(c, 1, ae_table(p0, c.m() as u64, ae));
                    } else {
                        r.predict(c, 1, Claim::Neither);
                    }
                }
            }
        }
        if r.hypotheses_met {
            ev.observe(r, &b.spec, c, f.as_ref())?;
        }
    }
    Ok(reps)
}

/// The self-reciprocal family: `g(x) = x^{2e} + c_{e-1} x^{2e-1} + … + c_0 x^e + … + c_{e-1} x + 1`
/// dividing `x^n - 1` over F_p with `p ≡ 1 (mod n)`, and `R = 2x^{p^e} + 2c_{e-1}x^{p^{e-1}} + … + 2c_1 x^p + c_0 x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family214 {
    pub p0: u64,
    pub s: u32,
    pub n: u32,
    pub e: u32,
    /// `c_0, …, c_{e-1}` reduced into F_p0.
    pub c: Vec<u64>,
    /// Coefficients of `g`, lowest degree first.
    pub g: Vec<u64>,
    /// Coefficients of `R` on `x^{p^i}`.
    pub r: Vec<u64>,
    /// `0 < k_1 < … < k_e < n/2` with the roots of `g` equal to `ζ^{k_i}` and `ζ^{n - k_i}`, for the
    /// primitive `n`-th root of unity `ζ = α^{p-1}` of the eigenvector basis.
    pub exponents: Vec<u32>,
}

impl Family214 {
    /// Builds the family member; the coefficients `c_i` are taken in the prime field.
    pub fn build(p0: u64, s: u32, n: u32, c: &[i64]) -> Result<(CurveSpec, Family214), CriteriaError> {
        if !arith::is_prime(p0) || s == 0 || n == 0 {
            return Err(CriteriaError::BadParams(format!("p0 = {p0}, s = {s}, n = {n}")));
        }
        let e = c.len() as u32;
        if e == 0 {
            return Err(CriteriaError::BadParams("e = 0: at least c_0 is required".into()));
        }
        let p = arith::checked_pow(p0, s).ok_or_else(|| CriteriaError::BadParams("p overflows".into()))?;
        if (p - 1) % n as u64 != 0 {
            return Err(CriteriaError::BadCongruence(format!("p = {p} is not 1 mod n = {n}")));
        }
        let cs: Vec<u64> = c.iter().map(|&a| a.rem_euclid(p0 as i64) as u64).collect();
        let eu = e as usize;
        let mut g = vec![0u64; 2 * eu + 1];
        g[0] = 1;
        g[2 * eu] = 1;
        g[eu] = cs[0];
        for j in 1..eu {
            g[j] = cs[eu - j];
            g[eu + j] = cs[j];
        }
        let fp = FieldCtx::new(p0, 1)?;
        let gpoly: Poly = g.iter().map(|&a| fp.from_int(a as i64)).collect();
        let mut xn: Poly = vec![fp.zero(); n as usize + 1];
        xn[0] = fp.from_int(-1);
        xn[n as usize] = fp.one();
        let (_, rem) = fpoly::divrem(&fp, &xn, &gpoly);
        if fpoly::degree(&fpoly::trim(rem)).is_some() {
            return Err(CriteriaError::NotDividing(format!("g = {g:?} over F_{p0}, n = {n}")));
        }
        let mut r = vec![0u64; eu + 1];
        r[0] = cs[0];
        for i in 1..eu {
            r[i] = 2 * cs[i] % p0;
        }
        r[eu] = 2 % p0;
        let spec = CurveSpec::prime(p0, s, n, &r.iter().map(|&a| a as i64).collect::<Vec<_>>());
        let curve = Curve::resolve(&spec)?;
        let ctx = &curve.ctx;
        let (zeta, _) = crate::heisenberg::eigenvector_setting(ctx, &curve.poly)
            .ok_or_else(|| CriteriaError::BadCongruence("no eigenvector basis".into()))?;
        let gq: Poly = g.iter().map(|&a| ctx.from_int(a as i64)).collect();
        let roots: Vec<u32> = (0..n).filter(|&k| fpoly::eval(ctx, &gq, &ctx.pow(&zeta, k as u128)).is_zero()).collect();
        if roots.len() != 2 * eu {
            return Err(CriteriaError::Inconsistent(format!("g has {} roots among the n-th roots of unity, expected {}", roots.len(), 2 * e)));
        }
        let exponents: Vec<u32> = roots.iter().copied().filter(|&k| 0 < k && 2 * k < n).collect();
        if exponents.len() != eu || exponents.iter().any(|&k| !roots.contains(&(n - k))) {
            return Err(CriteriaError::Inconsistent(format!("roots {roots:?} do not pair as k, n - k with 0 < k < n/2")));
        }
        Ok((spec, Family214 { p0, s, n, e, c: cs, g, r, exponents }))
    }
}

/// Verdicts over `F_{q^2}` and `F_q` for a member of the self-reciprocal family, with the trace
/// condition checked via the exponent sums.
pub fn thm_214(ev: &mut Evaluator<'_>, spec: &CurveSpec, fam: &Family214) -> Result<CriterionReport, CriteriaError> {
    let mut rep = CriterionReport::new(CriterionId::T214, Some(spec.clone()));
    let c = Curve::resolve(spec)?;
    let p0 = c.p0();
    rep.check("p0 odd", p0 != 2, format!("p0 = {p0}"));
    rep.check("p = 1 mod n", (p_of(&c) - 1) % fam.n as u64 == 0, format!("p = {}, n = {}", p_of(&c), fam.n));
    rep.check("g divides x^n - 1", true, format!("g = {:?}", fam.g));
    rep.check("roots of g are zeta^{k_i}, zeta^{n-k_i} with 0 < k_i < n/2", true, format!("k = {:?}", fam.exponents));
    if !rep.settle() {
        return Ok(rep);
    }
    let data = find_abelian(&c.ctx, &c.poly)?;
    let cond = condition_ast(&c.ctx, &c.poly, &data)?;
    let sums_ok = cond.exponent_sums == Some(true);
    rep.check(
        "exponent sums k_i + k_j avoid {0, n}",
        sums_ok,
        format!("path = {:?}, trace condition = {}", data.path, cond.holds),
    );
    if !rep.settle() {
        return Ok(rep);
    }
    rep.predict(&c, 2, if q_mod4(&c) == 3 { Claim::Maximal } else { Claim::Minimal });
    let f0 = c.m() as u64;
    let k1 = if c.n % 2 == 1 {
        Claim::Neither
    } else if p0 % 4 == 1 || f0 % 4 == 0 {
        Claim::Minimal
    } else {
        Claim::Maximal
    };
    rep.predict(&c, 1, k1);
    let f = ev.formula(&c, &mut rep.notes)?;
    ev.observe(&mut rep, spec, &c, f.as_ref())?;
    // Both directions of the F_q statement: the observed verdict must single out the parameter
    // case that predicts it.
    if let Some(v) = rep.predictions[1].formula.or(rep.predictions[1].oracle) {
        let back = Claim::from_verdict(v) == k1;
        rep.notes.push(format!("F_q verdict observed {v}; forward direction {}, converse direction {}", if k1.matches(v) { "holds" } else { "fails" }, if back { "holds" } else { "fails" }));
    }
    Ok(rep)
}

/// Affine counts of `C_{R+}` and `C_{R-}` over `F_{p^{2k}}`, where `R± = 2 Σ (±1)^i x^{p^i} + x`.
pub fn isomorphic_pair_counts(ev: &mut Evaluator<'_>, p0: u64, s: u32, e: usize, ks: &[u32]) -> Result<Vec<(u32, BigInt, BigInt)>, CriteriaError> {
    let plus: Vec<i64> = (0..=e).map(|i| if i == 0 { 1 } else { 2 }).collect();
    let minus: Vec<i64> = (0..=e).map(|i| if i == 0 { 1 } else if i % 2 == 0 { 2 } else { -2 }).collect();
    let sp = CurveSpec::prime(p0, s, 2, &plus);
    let sm = CurveSpec::prime(p0, s, 2, &minus);
    let (cp, cm) = (Curve::resolve(&sp)?, Curve::resolve(&sm)?);
    let mut out = Vec::new();
    for &k in ks {
        if !ev.oracle.feasible(&cp, k) {
            continue;
        }
        let a = ev.oracle.count(&sp, &cp, k)?.projective;
        let b = ev.oracle.count(&sm, &cm, k)?.projective;
        if a != b {
            return Err(CriteriaError::Inconsistent(format!("R+ and R- counts differ over F_(p^{}): {a} vs {b}", 2 * k)));
        }
        out.push((k, a, b));
    }
    Ok(out)
}

/// For `n` even: maximal-or-minimal over F_q exactly when `V_R ⊂ F_q`.
pub fn prop_split(ev: &mut Evaluator<'_>, spec: &CurveSpec) -> Result<CriterionReport, CriteriaError> {
    let mut rep = CriterionReport::new(CriterionId::Split, Some(spec.clone()));
    let c = Curve::resolve(spec)?;
    rep.check("p0 odd", c.p0() != 2, format!("p0 = {}", c.p0()));
    rep.check("n even", c.n % 2 == 0, format!("n = {}", c.n));
    rep.check("r = 1", c.r == 1, format!("r = {}", c.r));
    if !rep.settle() {
        return Ok(rep);
    }
    let sd = c.splitting_degree()?;
    rep.notes.push(format!("V_R splits over F_q^{sd}; V_R in F_q: {}", sd == 1));
    rep.predict(&c, 1, if sd == 1 { Claim::MaximalOrMinimal } else { Claim::Neither });
    let f = ev.formula(&c, &mut rep.notes)?;
    ev.observe(&mut rep, spec, &c, f.as_ref())?;
    Ok(rep)
}

/// The three sides of the `e = f` equivalence for a curve over `F_{p^{2f}}`.
#[derive(Clone, Debug, Serialize)]
pub struct EqualDegreeSides {
    pub f: u32,
    pub coefficient_condition: bool,
    pub trace_identity: Option<bool>,
    pub r_divides_f: bool,
}

fn equal_degree_sides(ev: &Evaluator<'_>, rep: &mut CriterionReport, c: &Curve) -> Result<Option<EqualDegreeSides>, CriteriaError> {
    let ok = rep.check("n even", c.n % 2 == 0, format!("n = {}", c.n));
    let f = c.n / 2;
    let ok = ok && rep.check("e = f", c.e() as u32 == f && f >= 1, format!("e = {}, f = {}", c.e(), f));
    if !ok {
        return Ok(None);
    }
    let ctx = &c.ctx;
    let fu = f as usize;
    let low_zero = (0..fu).all(|i| c.poly.coeff(ctx, i).is_zero());
    let af = c.poly.coeff(ctx, fu);
    let twisted = ctx.add(&ctx.frobenius(&af, (c.s as usize * fu) as i64), &af);
    let coefficient_condition = low_zero && twisted.is_zero();
    let trace_identity = if ctx.size() <= ev.oracle.cap {
        let s = c.s as usize;
        let bad = (0..ctx.size()).into_par_iter().find_any(|&i| {
            let x = ctx.from_index(i);
            let y = ctx.mul(&x, &c.poly.eval(ctx, &x));
            !ctx.trace_to(&y, s).map(|t| t.is_zero()).unwrap_or(false)
        });
        Some(bad.is_none())
    } else {
        None
    };
    if let Some(t) = trace_identity {
        if c.r == 1 && t != coefficient_condition {
            return Err(CriteriaError::Inconsistent(format!("trace identity {t} but coefficient condition {coefficient_condition}")));
        }
    }
    Ok(Some(EqualDegreeSides { f, coefficient_condition, trace_identity, r_divides_f: f % c.r == 0 }))
}

/// `e = f`, `r = 1`: maximality over `F_{p^{2f}}`, the trace identity and the coefficient condition coincide.
pub fn prop_pp(ev: &mut Evaluator<'_>, spec: &CurveSpec) -> Result<CriterionReport, CriteriaError> {
    let mut rep = CriterionReport::new(CriterionId::Pp, Some(spec.clone()));
    let c = Curve::resolve(spec)?;
    rep.check("r = 1", c.r == 1, format!("r = {}", c.r));
    let sides = equal_degree_sides(ev, &mut rep, &c)?;
    if !rep.settle() {
        return Ok(rep);
    }
    let sides = sides.unwrap();
    rep.notes.push(format!("coefficient condition {}, trace identity {:?}", sides.coefficient_condition, sides.trace_identity));
    rep.predict(&c, 1, if sides.coefficient_condition { Claim::Maximal } else { Claim::NotMaximal });
    let f = if c.p0() == 2 { None } else { ev.formula(&c, &mut rep.notes)? };
    ev.observe(&mut rep, spec, &c, f.as_ref())?;
    if sides.coefficient_condition {
        if let Some(n) = &rep.predictions[0].count {
            let expect = BigInt::from(p_of(&c)).pow(2 * sides.f + 1) + 1u32;
            if *n != expect {
                return Err(CriteriaError::Inconsistent(format!("maximal count {n} differs from p^(2f+1) + 1 = {expect}")));
            }
        }
    }
    Ok(rep)
}

/// `e = f`, any `r`: maximal over `F_{p^{2f}}` iff `r | f` and the coefficient condition holds.
pub fn prop_c1(ev: &mut Evaluator<'_>, spec: &CurveSpec) -> Result<CriterionReport, CriteriaError> {
    let mut rep = CriterionReport::new(CriterionId::C1, Some(spec.clone()));
    let c = Curve::resolve(spec)?;
    rep.check("p0 odd", c.p0() != 2, format!("p0 = {}", c.p0()));
    let sides = equal_degree_sides(ev, &mut rep, &c)?;
    if !rep.settle() {
        return Ok(rep);
    }
    let sides = sides.unwrap();
    let maximal = sides.r_divides_f && sides.coefficient_condition;
    rep.notes.push(format!("r | f: {}, coefficient condition: {}", sides.r_divides_f, sides.coefficient_condition));
    rep.predict(&c, 1, if maximal { Claim::Maximal } else { Claim::NotMaximal });
    let f = if c.r == 1 { ev.formula(&c, &mut rep.notes)? } else { None };
    ev.observe(&mut rep, spec, &c, f.as_ref())?;
    Ok(rep)
}

/// `e_R = gcd{i ≥ 1 : a_i ≠ 0}`.
pub fn e_r_gcd(ctx: &FieldCtx, poly: &LinPoly) -> u64 {
    let _ = ctx;
    poly.coeffs.iter().enumerate().skip(1).filter(|(_, a)| !a.is_zero()).fold(0, |g, (i, _)| arith::gcd(g, i as u64))
}

/// Evidence for the divisibility `r | gcd(e_R, f)` whenever the curve is `F_{p^{2f}}`-maximal,
/// over `F_{q^k}` for `k ≤ kmax`. A maximal field violating it is reported as an error.
pub fn conjecture_check(ev: &mut Evaluator<'_>, spec: &CurveSpec, kmax: u32) -> Result<CriterionReport, CriteriaError> {
    let mut rep = CriterionReport::new(CriterionId::Conj, Some(spec.clone()));
    let c = Curve::resolve(spec)?;
    rep.check("e >= 1", c.e() >= 1, format!("e = {}", c.e()));
    if !rep.settle() {
        return Ok(rep);
    }
    let er = e_r_gcd(&c.ctx, &c.poly);
    let monomial = c.poly.coeffs.iter().filter(|a| !a.is_zero()).count() == 1;
    rep.notes.push(format!("e_R = {er}; monomial R: {monomial}"));
    for k in 1..=kmax {
        let deg = c.n as u64 * k as u64;
        if deg % 2 == 1 {
            continue;
        }
        let f = deg / 2;
        if arith::gcd(er, f) % c.r as u64 != 0 {
            rep.predict(&c, k, Claim::NotMaximal);
        }
    }
    let f = if c.r == 1 { ev.formula(&c, &mut rep.notes)? } else { None };
    ev.observe(&mut rep, spec, &c, f.as_ref())?;
    if !rep.consistent() {
        let bad: Vec<String> = rep.predictions.iter().filter(|p| p.formula == Some(Verdict::Maximal) || p.oracle == Some(Verdict::Maximal)).map(|p| p.field.clone()).collect();
        return Err(CriteriaError::ConjectureCounterexample(format!("{} is maximal over {} with e_R = {er}, r = {}", spec.canonical_json(), bad.join(", "), c.r)));
    }
    let mut maximal_at = Vec::new();
    for k in 1..=kmax {
        if (c.n as u64 * k as u64) % 2 == 0 && ev.verdict_at(spec, &c, f.as_ref(), k)? == Some(Verdict::Maximal) {
            maximal_at.push(k);
        }
    }
    rep.notes.push(format!("maximal over F_(q^k) for k in {maximal_at:?}; each satisfies the divisibility"));
    Ok(rep)
}

/// The twist family of `R = 2x^p + x`: `ξ^{p-1} = α`, `ζ^{p-1} = β = -(α(α+1))^{-1}`, both in
/// `F_{p^d}`, `d = lcm(ord α, ord β)`.
#[derive(Clone, Debug)]
pub struct TwistFamily {
    pub p0: u64,
    pub s: u32,
    pub alpha: u64,
    pub beta: u64,
    pub d1: u64,
    pub d2: u64,
    pub d: u64,
    /// `ζR` over `F_{p^d}`.
    pub spec: CurveSpec,
    pub curve: Curve,
    pub xi: FFElem,
    pub zeta: FFElem,
}

/// Minimal polynomial over F_p0 (lowest degree first, integers in `[0, p0)`) and root position.
pub fn prime_minpoly(ctx: &FieldCtx, z: &FFElem) -> (Vec<i64>, usize) {
    let mut conj = vec![z.clone()];
    let mut c = ctx.frobenius(z, 1);
    while c != *z {
        conj.push(c.clone());
        c = ctx.frobenius(&c, 1);
    }
    let mut poly: Poly = vec![ctx.one()];
    for c in &conj {
        poly = fpoly::mul(ctx, &poly, &vec![ctx.neg(c), ctx.one()]);
    }
    let roots = fpoly::roots(ctx, &poly);
    let idx = roots.iter().position(|r| r == z).unwrap();
    (poly.iter().map(|a| a.coeffs()[0] as i64).collect(), idx)
}

impl TwistFamily {
    pub fn build(p0: u64, s: u32, alpha: i64) -> Result<TwistFamily, CriteriaError> {
        if !arith::is_prime(p0) || p0 == 2 || s == 0 {
            return Err(CriteriaError::BadParams(format!("need an odd prime p0 and s >= 1, got p0 = {p0}, s = {s}")));
        }
        let a = alpha.rem_euclid(p0 as i64) as u64;
        if a == 0 || a == p0 - 1 {
            return Err(CriteriaError::BadAlpha(format!("alpha = {alpha} is {} in F_{p0}", if a == 0 { "0" } else { "-1" })));
        }
        let beta = (p0 - arith::invmod(arith::mulmod(a, a + 1, p0), p0).unwrap()) % p0;
        let d1 = arith::order_mod_prime(a, p0).unwrap();
        let d2 = arith::order_mod_prime(beta, p0).unwrap();
        let d = arith::lcm(d1, d2);
        let m = s as usize * d as usize;
        if arith::checked_pow(p0, m as u32).map_or(true, |q| q > crate::field::MAX_FIELD_SIZE) {
            return Err(CriteriaError::L(LError::TooLarge(format!("F_{p0}^{m} exceeds the supported field size"))));
        }
        let ctx = FieldCtx::new(p0, m)?;
        let p = p0.pow(s);
        let xi = ctx.nth_roots(&ctx.from_int(a as i64), p - 1).into_iter().next().ok_or_else(|| CriteriaError::Inconsistent("no (p-1)-th root of alpha".into()))?;
        let zeta = ctx.nth_roots(&ctx.from_int(beta as i64), p - 1).into_iter().next().ok_or_else(|| CriteriaError::Inconsistent("no (p-1)-th root of beta".into()))?;
        let (mp, which) = prime_minpoly(&ctx, &zeta);
        let spec = CurveSpec::prime(p0, s, d as u32, &[1, 2]).with_zeta(&mp, which);
        let curve = Curve::resolve(&spec)?;
        if curve.zeta.as_ref() != Some(&zeta) || curve.m() != m {
            return Err(CriteriaError::Inconsistent("resolved twist differs from the constructed zeta".into()));
        }
        Ok(TwistFamily { p0, s, alpha: a, beta, d1, d2, d, spec, curve, xi, zeta })
    }

    fn p(&self) -> u64 {
        self.p0.pow(self.s)
    }

    /// `ζ^p ξ^{p^2} + ζ^p ξ^p + ζ ξ = 0`, `F_p(ξ) = F_{p^{d1}}`, `F_p(ζ) = F_{p^{d2}}`, and `ξ ∈ V_{ζR}`.
    pub fn check_relations(&self) -> Result<Vec<Hypothesis>, CriteriaError> {
        let ctx = &self.curve.ctx;
        let s = self.s as i64;
        let zp = ctx.frobenius(&self.zeta, s);
        let xp = ctx.frobenius(&self.xi, s);
        let xpp = ctx.frobenius(&self.xi, 2 * s);
        let rel = ctx.add(&ctx.add(&ctx.mul(&zp, &xpp), &ctx.mul(&zp, &xp)), &ctx.mul(&self.zeta, &self.xi));
        let er = e_r(ctx, &self.curve.poly)?;
        let deg = |x: &FFElem| ctx.element_degree(x) as u64 / self.s as u64;
        let mut out = vec![
            Hypothesis::new("zeta^p xi^{p^2} + zeta^p xi^p + zeta xi = 0", rel.is_zero(), coords(&rel)),
            Hypothesis::new("xi in V_{zeta R}", er.eval(ctx, &self.xi).is_zero(), ""),
            Hypothesis::new("[F_p(xi) : F_p] = ord(alpha)", deg(&self.xi) == self.d1, format!("{} vs {}", deg(&self.xi), self.d1)),
        ];
        // ζ generates F_{p^{d2}} over F_p when s = 1; with s > 1 its degree divides d2.
        let dz = deg(&self.zeta);
        let zeta_ok = if self.s == 1 { dz == self.d2 } else { self.d2 % dz.max(1) == 0 };
        out.push(Hypothesis::new("[F_p(zeta) : F_p] = ord(beta)", zeta_ok, format!("{} vs {}", dz, self.d2)));
        Ok(out)
    }

    /// For `d` even: `(ζ/p^d) = (β^{d/2})^{(p+1)/2}`.
    pub fn quadratic_character_identity(&self) -> Result<Option<(i8, i8)>, CriteriaError> {
        if self.d % 2 == 1 {
            return Ok(None);
        }
        let lhs = self.curve.ctx.legendre(&self.zeta)?;
        let b = arith::powmod(self.beta, self.d / 2, self.p0);
        let b_sign: i8 = if b == 1 { 1 } else if b == self.p0 - 1 { -1 } else { 0 };
        let rhs = if ((self.p() + 1) / 2) % 2 == 0 { 1 } else { b_sign };
        Ok(Some((lhs, rhs)))
    }

    /// Frobenius eigenvalues over `F_{p^d}` as `ψ_{p^d}(4^{-1} ζ^{-1} ξ^{-(p+1)} a^2)(-ζ/p^d) G(ψ_{p^d})`,
    /// one per `a ∈ F_p` and nontrivial `ψ`.
    pub fn eigenvalues_from_quadratic_model(&self) -> Result<Vec<CycInt>, CriteriaError> {
        let ctx = &self.curve.ctx;
        let g = gauss_data(ctx)?;
        let p = self.p();
        let xi_p1 = ctx.pow(&self.xi, p as u128 + 1);
        let base = ctx.inv(&ctx.mul(&ctx.mul(&ctx.from_int(4), &self.zeta), &xi_p1)).unwrap();
        let sign = ctx.legendre(&ctx.neg(&self.zeta))?;
        let fp = ctx.subfield_elements(self.s as usize)?;
        let mut out = Vec::new();
        for lambda in fp.iter().filter(|l| !l.is_zero()) {
            let g_l = if ctx.legendre(lambda)? == 1 { g.g1.clone() } else { -&g.g1 };
            let g_l = if sign == 1 { g_l } else { -&g_l };
            for a in &fp {
                let t = ctx.trace_to_prime(&ctx.mul(lambda, &ctx.mul(&base, &ctx.square(a))));
                out.push(&CycInt::zeta_pow(self.p0, t as i64) * &g_l);
            }
        }
        Ok(out)
    }

    /// Affine count of `y^p - y = -ζ ξ^{p+1}(x^p - x)^2` over `F_{p^{dk}}`.
    pub fn quadratic_model_affine_count(&self, k: u32, cap: u64) -> Result<Option<BigInt>, CriteriaError> {
        let m = self.curve.m() * k as usize;
        let Some(size) = arith::checked_pow(self.p0, m as u32).filter(|&q| q <= cap) else { return Ok(None) };
        let base = &self.curve.ctx;
        let big = FieldCtx::new(self.p0, m)?;
        let emb = crate::field::SubfieldEmbed::new(base, &big)?;
        let p = self.p();
        let cst = base.neg(&base.mul(&self.zeta, &base.pow(&self.xi, p as u128 + 1)));
        let c = emb.map(&big, &cst);
        let s = self.s as usize;
        let hits: u64 = (0..size)
            .into_par_iter()
            .filter(|&i| {
                let x = big.from_index(i);
                let u = big.sub(&big.frobenius(&x, s as i64), &x);
                big.trace_to(&big.mul(&c, &big.square(&u)), s).map(|t| t.is_zero()).unwrap_or(false)
            })
            .count() as u64;
        Ok(Some(BigInt::from(hits) * BigInt::from(p)))
    }
}

/// Multiset equality of two eigenvalue lists.
fn same_multiset(a: &[CycInt], b: &[CycInt]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut da = crate::lfunction::distinct_with_multiplicity(a.iter().cloned());
    let db = crate::lfunction::distinct_with_multiplicity(b.iter().cloned());
    da.retain(|(t, m)| !db.iter().any(|(u, n)| u == t && n == m));
    da.is_empty() && db.len() == crate::lfunction::distinct_with_multiplicity(b.iter().cloned()).len()
}

fn twist_checks(ev: &mut Evaluator<'_>, rep: &mut CriterionReport, fam: &TwistFamily, f: Option<&FormulaPath>) -> Result<(), CriteriaError> {
    for h in fam.check_relations()? {
        rep.checklist.push(h);
    }
    if let Some((l, r)) = fam.quadratic_character_identity()? {
        if l != r {
            return Err(CriteriaError::Inconsistent(format!("(zeta/p^d) = {l} but (beta^(d/2))^((p+1)/2) = {r}")));
        }
        rep.notes.push(format!("(zeta/p^d) = {l} = (beta^(d/2))^((p+1)/2)"));
    }
    if let Some(f) = f.filter(|f| f.extension == 1) {
        let model = fam.eigenvalues_from_quadratic_model()?;
        let taus: Vec<CycInt> = f.eigen.records.iter().map(|r| r.tau.clone()).collect();
        if !same_multiset(&model, &taus) {
            return Err(CriteriaError::Inconsistent("quadratic-model eigenvalues differ from the character-sum eigenvalues".into()));
        }
        rep.notes.push(format!("{} quadratic-model eigenvalues match the character-sum eigenvalues as a multiset", model.len()));
    }
    if let Some(n) = fam.quadratic_model_affine_count(1, ev.oracle.cap)? {
        let row = ev.oracle.count(&fam.spec, &fam.curve, 1)?;
        if row.affine != n {
            return Err(CriteriaError::Inconsistent(format!("quadratic model counts {n} affine points, the curve {}", row.affine)));
        }
        rep.notes.push(format!("quadratic model and curve both have {n} affine points over F_(p^d)"));
    }
    Ok(())
}

fn twist_report(ev: &mut Evaluator<'_>, id: CriterionId, fam: &TwistFamily) -> Result<CriterionReport, CriteriaError> {
    let mut rep = CriterionReport::new(id, Some(fam.spec.clone()));
    let p = fam.p();
    let c = &fam.curve;
    rep.notes.push(format!("alpha = {}, beta = {}, d1 = {}, d2 = {}, d = {}", fam.alpha, fam.beta, fam.d1, fam.d2, fam.d));
    let f = ev.formula(c, &mut rep.notes)?;
    twist_checks(ev, &mut rep, fam, f.as_ref())?;
    if id == CriterionId::Minus2 {
        rep.check("alpha = 1", fam.alpha == 1, format!("alpha = {}", fam.alpha));
        let r8 = fam.p0 % 8;
        rep.check("p0 = 3 mod 8 implies d odd", r8 != 3 || fam.d % 2 == 1, format!("p0 mod 8 = {r8}, d = {}", fam.d));
        rep.check("p0 = 5, 7 mod 8 implies d even", !(r8 == 5 || r8 == 7) || fam.d % 2 == 0, format!("p0 mod 8 = {r8}, d = {}", fam.d));
    }
    let case1 = fam.d % 2 == 1 && p % 4 == 3;
    let case2 = fam.d % 2 == 0 && arith::powmod(fam.beta, fam.d / 2, fam.p0) == fam.p0 - 1;
    rep.check(
        "d odd and p = 3 mod 4, or d even and beta^{d/2} = -1",
        case1 || case2,
        format!("d = {}, p mod 4 = {}, beta^(d/2) = {}", fam.d, p % 4, arith::powmod(fam.beta, fam.d / 2, fam.p0)),
    );
    if !rep.settle() {
        return Ok(rep);
    }
    let k = if case1 { 2 * fam.p0 } else { fam.p0 } as u32;
    rep.predict(c, k, Claim::Maximal);
    ev.observe(&mut rep, &fam.spec, c, f.as_ref())?;
    Ok(rep)
}

/// Maximality of the twist `ζR` built from `α`.
pub fn thm_mp(ev: &mut Evaluator<'_>, p0: u64, s: u32, alpha: i64) -> Result<CriterionReport, CriteriaError> {
    let fam = TwistFamily::build(p0, s, alpha)?;
    twist_report(ev, CriterionId::Mp, &fam)
}

/// The `α = 1` case, governed by the order of `-2`.
pub fn cor_minus2(ev: &mut Evaluator<'_>, p0: u64, s: u32) -> Result<CriterionReport, CriteriaError> {
    let fam = TwistFamily::build(p0, s, 1)?;
    twist_report(ev, CriterionId::Minus2, &fam)
}

/// A general twist `ζR`, `R = 2x^p + x`, over its own field `F_{p^d}`.
pub fn cor_ccc(ev: &mut Evaluator<'_>, spec: &CurveSpec) -> Result<CriterionReport, CriteriaError> {
    let mut rep = CriterionReport::new(CriterionId::Ccc, Some(spec.clone()));
    let c = Curve::resolve(spec)?;
    let ctx = &c.ctx;
    let zeta = c.zeta.clone().unwrap_or_else(|| ctx.one());
    let expected = LinPoly::new(c.s, vec![ctx.one(), ctx.from_int(2)]).scale(ctx, &zeta);
    rep.check("p0 odd", c.p0() != 2, format!("p0 = {}", c.p0()));
    rep.check("R = 2x^p + x", c.poly == expected, "");
    rep.check("r = 1", c.r == 1, format!("r = {}", c.r));
    if !rep.settle() {
        return Ok(rep);
    }
    let v = kernel(ctx, &e_r(ctx, &c.poly)?);
    let xi = v.basis.first().cloned();
    rep.check("V_{zeta R} has a nonzero point in F_{p^d}", xi.is_some(), format!("dim = {}", v.dim()));
    if !rep.settle() {
        return Ok(rep);
    }
    let p = p_of(&c);
    let d = (c.m() / c.s as usize) as u64;
    let pd4 = arith::powmod(p % 4, d, 4);
    let leg_zeta = ctx.legendre(&zeta)?;
    let minus_one_p: i8 = if p % 4 == 1 { 1 } else { -1 };
    let case2_val = if d % 2 == 0 { Some(leg_zeta * if (d / 2) % 2 == 0 { 1 } else { minus_one_p }) } else { None };
    rep.notes.push(format!("d = {d}, p^d mod 4 = {pd4}, (zeta/p^d)(-1/p)^(d/2) = {case2_val:?}, xi = {}", coords(xi.as_ref().unwrap())));
    let case1 = pd4 == 3;
    let case2 = case2_val == Some(-1);
    rep.check("p^d = 3 mod 4, or d even and (zeta/p^d)(-1/p)^{d/2} = -1", case1 || case2, "");
    if !rep.settle() {
        return Ok(rep);
    }
    if case1 {
        rep.predict(&c, 2 * c.p0() as u32, Claim::Maximal);
    }
    if case2 {
        rep.predict(&c, c.p0() as u32, Claim::Maximal);
    }
    let f = ev.formula(&c, &mut rep.notes)?;
    ev.observe(&mut rep, spec, &c, f.as_ref())?;
    Ok(rep)
}

/// `R = 2x^p + x` over F_p, `k = 1..=kmax`.
pub fn thm_lc(ev: &mut Evaluator<'_>, p0: u64, s: u32, kmax: u32) -> Result<CriterionReport, CriteriaError> {
    let spec = CurveSpec::prime(p0, s, 1, &[1, 2]);
    let mut rep = CriterionReport::new(CriterionId::Lc, Some(spec.clone()));
    let c = Curve::resolve(&spec)?;
    rep.check("p0 odd", p0 != 2, format!("p0 = {p0}"));
    if !rep.settle() {
        return Ok(rep);
    }
    let p = p_of(&c);
    for k in 1..=kmax {
        if p % 4 == 1 {
            if k % 6 == 0 {
                rep.predict(&c, k, Claim::Minimal);
            }
        } else if k % 6 == 0 && (k / 6) % 2 == 1 {
            rep.predict(&c, k, Claim::Maximal);
        } else {
            rep.predict(&c, k, Claim::NotMaximal);
        }
    }
    let f = ev.formula(&c, &mut rep.notes)?;
    ev.observe(&mut rep, &spec, &c, f.as_ref())?;
    Ok(rep)
}

/// Constraint on the 2-adic valuation of the order of a normalized `Fr_p` eigenvalue `ω` with
/// `ω^n = ε`, derived from `ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TwoAdic {
    Exact(u32),
    AtMost(u32),
}

/// A normalized eigenvalue `ε = ±ζ_{p0}^t` of `Fr_{p^n}` on a quotient curve.
#[derive(Clone, Debug, Serialize)]
pub struct OrderWitness {
    pub component: String,
    /// `n`, the degree over F_p of the Frobenius.
    pub degree: u64,
    pub sign: i8,
    pub zeta_exponent: u64,
    pub order: u64,
    pub two_adic: TwoAdic,
}

/// Normalized eigenvalues `τ^t / p0^{mt/2}` for the smallest `t` making the degree even.
pub fn order_witnesses(name: &str, f: &FormulaPath, s: u32) -> Result<Vec<OrderWitness>, CriteriaError> {
    let ext = f.ext_degree();
    let t = if ext % 2 == 0 { 1 } else { 2 };
    let root = BigInt::from(f.p0()).pow((ext * t / 2) as u32);
    let n = ext * t / s as u64;
    let mut out: Vec<OrderWitness> = Vec::new();
    for (tau, _) in &f.distinct {
        let pw = tau.pow(t);
        let c: Vec<BigInt> = pw.coeffs().iter().map(|x| x / &root).collect();
        let eps = CycInt::from_coeffs(f.p0(), &c);
        if eps.coeffs().iter().zip(pw.coeffs()).any(|(a, b)| a * &root != *b) {
            return Err(CriteriaError::Inconsistent(format!("{name}: {pw} is not divisible by {root}")));
        }
        let (sign, z) = eps.as_signed_root_of_unity().ok_or_else(|| CriteriaError::Inconsistent(format!("{name}: {eps} is not a signed root of unity")))?;
        let order = crate::lfunction::signed_root_order(f.p0(), sign, z);
        let two_adic = if order % 2 == 0 { TwoAdic::Exact(1 + arith::v2(n)) } else { TwoAdic::AtMost(arith::v2(n)) };
        if !out.iter().any(|w| w.sign == sign && w.zeta_exponent == z) {
            out.push(OrderWitness { component: name.into(), degree: n, sign, zeta_exponent: z, order, two_adic });
        }
    }
    Ok(out)
}

/// A pair of eigenvalue constraints that no `k` can satisfy simultaneously with `ω^k = -1`.
pub fn two_adic_obstruction(ws: &[OrderWitness]) -> Option<(OrderWitness, OrderWitness)> {
    for a in ws {
        if let TwoAdic::AtMost(0) = a.two_adic {
            return Some((a.clone(), a.clone()));
        }
    }
    for a in ws {
        let TwoAdic::Exact(va) = a.two_adic else { continue };
        for b in ws {
            let clash = match b.two_adic {
                TwoAdic::Exact(vb) => vb != va,
                TwoAdic::AtMost(vb) => vb < va,
            };
            if clash {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

fn describe(w: &OrderWitness) -> String {
    let tw = match w.two_adic {
        TwoAdic::Exact(v) => format!("2-power order exactly {}", 1u64 << v),
        TwoAdic::AtMost(v) => format!("2-power order at most {}", 1u64 << v),
    };
    format!(
        "{}: Fr_(p^{}) eigenvalue {}zeta_{}^{} of order {} over sqrt(p^{}), so some Fr_p eigenvalue has {}",
        w.component,
        w.degree,
        if w.sign < 0 { "-" } else { "+" },
        "p0",
        w.zeta_exponent,
        w.order,
        w.degree,
        tw
    )
}

/// Never-maximal verdict for `C_{R,r}` from two quotients: `C_R` over F_p and `C_{ζR}` over `F_{p^d}`.
fn never_maximal(ev: &mut Evaluator<'_>, id: CriterionId, fam: &TwistFamily, r: u32, kmax: u32, extra: Vec<Hypothesis>) -> Result<CriterionReport, CriteriaError> {
    let spec = CurveSpec::prime(fam.p0, fam.s, 1, &[1, 2]).with_r(r);
    let mut rep = CriterionReport::new(id, Some(spec.clone()));
    rep.checklist.extend(extra);
    let c = Curve::resolve(&spec)?;
    rep.check("d = 0 mod 4", fam.d % 4 == 0, format!("d = {}", fam.d));
    rep.check("beta^{d/2} = -1", arith::powmod(fam.beta, fam.d / 2, fam.p0) == fam.p0 - 1, format!("beta = {}", fam.beta));
    rep.check("d divides r", r as u64 % fam.d == 0, format!("r = {r}, d = {}", fam.d));
    for h in fam.check_relations()? {
        rep.checklist.push(h);
    }
    if !rep.settle() {
        return Ok(rep);
    }
    obstruction_from_quotients(ev, &mut rep, fam.p0, fam.s, &fam.spec)?;
    for k in 1..=kmax {
        rep.predict(&c, k, Claim::NotMaximal);
    }
    ev.observe(&mut rep, &spec, &c, None)?;
    Ok(rep)
}

/// Adds the eigenvalue-order obstruction built from `C_R` (R = 2x^p + x over F_p) and the twist
/// `twist_spec` to the report; the formula flag records whether it was found.
fn obstruction_from_quotients(ev: &mut Evaluator<'_>, rep: &mut CriterionReport, p0: u64, s: u32, twist_spec: &CurveSpec) -> Result<(), CriteriaError> {
    let base = Curve::resolve(&CurveSpec::prime(p0, s, 1, &[1, 2]))?;
    let twist = Curve::resolve(twist_spec)?;
    let mut ws = Vec::new();
    let mut notes = Vec::new();
    if let Some(f) = ev.formula(&base, &mut notes)? {
        ws.extend(order_witnesses("C_R over F_p", &f, s)?);
    }
    if let Some(f) = ev.formula(&twist, &mut notes)? {
        ws.extend(order_witnesses("C_(zeta R) over F_(p^d)", &f, s)?);
    }
    rep.notes.extend(notes);
    for w in &ws {
        rep.notes.push(describe(w));
    }
    match two_adic_obstruction(&ws) {
        Some((a, b)) => {
            rep.check("eigenvalue-order obstruction", true, format!("{} | {}", describe(&a), describe(&b)));
        }
        None => {
            rep.check("eigenvalue-order obstruction", false, "no incompatible pair among the quotient eigenvalues");
        }
    }
    rep.settle();
    Ok(())
}

/// Never-maximal generalized curve from `α` with `4 | d` and `β^{d/2} = -1`.
pub fn thm_lcc(ev: &mut Evaluator<'_>, p0: u64, s: u32, alpha: i64, r: u32, kmax: u32) -> Result<CriterionReport, CriteriaError> {
    let fam = TwistFamily::build(p0, s, alpha)?;
    never_maximal(ev, CriterionId::Lcc, &fam, r, kmax, Vec::new())
}

/// `p0 ≡ 5 (mod 8)` or a Fermat prime: `α = 1` gives `4 | d`.
pub fn cor_lcc2(ev: &mut Evaluator<'_>, p0: u64, r: u32, kmax: u32) -> Result<CriterionReport, CriteriaError> {
    let fam = TwistFamily::build(p0, 1, 1)?;
    let five_mod_8 = p0 % 8 == 5;
    let fermat = (p0 - 1).is_power_of_two() && (p0 - 1).trailing_zeros().is_power_of_two() && p0 > 3;
    let mut extra = vec![Hypothesis::new("p0 = 5 mod 8 or a Fermat prime 2^{2^m} + 1, m >= 1", five_mod_8 || fermat, format!("p0 = {p0}"))];
    if fermat {
        let m = (p0 - 1).trailing_zeros().trailing_zeros();
        extra.push(Hypothesis::new("order of -2 is 2^{m+1}", fam.d == 1u64 << (m + 1), format!("d = {}, m = {m}", fam.d)));
    }
    never_maximal(ev, CriterionId::Lcc2, &fam, r, kmax, extra)
}

/// The characteristic-3 twist `ζ^4 + ζ^2 - 1 = 0` over F_81, `k = 1..=kmax`; with `r` given, also
/// the never-maximal generalized curve for `4 | r`.
pub fn char3(ev: &mut Evaluator<'_>, kmax: u32, r: Option<u32>, r_kmax: u32) -> Result<Vec<CriterionReport>, CriteriaError> {
    let spec = char3_spec();
    let mut rep = CriterionReport::new(CriterionId::Char3, Some(spec.clone()));
    let c = Curve::resolve(&spec)?;
    let ctx = &c.ctx;
    let z = c.zeta.clone().unwrap();
    let xi = ctx.square(&z);
    let rel = ctx.add(
        &ctx.add(&ctx.mul(&ctx.pow(&z, 3), &ctx.pow(&xi, 9)), &ctx.mul(&ctx.pow(&z, 3), &ctx.pow(&xi, 3))),
        &ctx.mul(&z, &xi),
    );
    rep.check("zeta^3 xi^9 + zeta^3 xi^3 + zeta xi = 0 for xi = zeta^2", rel.is_zero(), coords(&rel));
    rep.check("zeta^8 = -1", ctx.pow(&z, 8) == ctx.from_int(-1), "");
    if rep.settle() {
        for k in 1..=kmax {
            rep.predict(&c, k, if k % 2 == 1 { Claim::Maximal } else { Claim::NotMaximal });
        }
        let f = ev.formula(&c, &mut rep.notes)?;
        ev.observe(&mut rep, &spec, &c, f.as_ref())?;
    }
    let mut out = vec![rep];
    if let Some(r) = r {
        let gspec = CurveSpec::prime(3, 1, 1, &[1, 2]).with_r(r);
        let mut g = CriterionReport::new(CriterionId::Char3, Some(gspec.clone()));
        let gc = Curve::resolve(&gspec)?;
        g.check("r = 0 mod 4", r % 4 == 0, format!("r = {r}"));
        if g.settle() {
            obstruction_from_quotients(ev, &mut g, 3, 1, &spec)?;
            if g.hypotheses_met {
                for k in 1..=r_kmax {
                    g.predict(&gc, k, Claim::NotMaximal);
                }
                ev.observe(&mut g, &gspec, &gc, None)?;
            }
        }
        out.push(g);
    }
    Ok(out)
}

/// `R = 2x^3 + x` twisted by a root of `ζ^4 + ζ^2 - 1`, over F_81.
pub fn char3_spec() -> CurveSpec {
    CurveSpec::prime(3, 1, 1, &[1, 2]).with_zeta(&[-1, 0, 1, 0, 1], 0)
}
