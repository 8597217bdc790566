//! Curve specifications, Frobenius eigenvalues `τ_ξ`, L-polynomials and exact
//! maximal/minimal verdicts from the eigenvalue formula.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cyclotomic::{gauss_square, gauss_sum, gauss_sum_lifted, CharSpec, CycError, CycInt, GAUSS_DIRECT_CAP};
use crate::field::{is_irreducible, FFElem, FieldCtx, FieldDescriptor, FieldError, SubfieldEmbed, MAX_FIELD_SIZE};
use crate::heisenberg::{find_abelian, AbelianData, CharacterIndex, CharacterSolver, HeisError};
use crate::linearized::{e_r, splitting_degree, LinError, LinPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LError {
    #[error("invalid curve spec: {0}")]
    Spec(String),
    #[error("formula path unavailable: {0}")]
    FormulaPathUnavailable(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("refused: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error(transparent)]
    Heis(#[from] HeisError),
    #[error(transparent)]
    Cyc(#[from] CycError),
}

/// One coefficient of `R`: an integer of the prime field, `"g^k"` for a power of the fixed
/// generator of F_q, or an explicit coordinate vector in the power basis of the F_q modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Int(i64),
    Power(String),
    Vector(Vec<i64>),
}

/// A twist scalar given by its minimal polynomial over F_p0 (lowest degree first) and the
/// position of the chosen root among all roots sorted by codec index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaSpec {
    pub minpoly: Vec<i64>,
    pub which_root: usize,
}

fn default_r() -> u32 {
    1
}

/// `y^{p^r} - y = x ζ R(x)` over F_q, `p = p0^s`, `q = p^n`, `R = Σ a_i x^{p^i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub p0: u64,
    pub s: u32,
    pub n: u32,
    #[serde(rename = "R")]
    pub coeffs: Vec<CoeffSpec>,
    #[serde(default = "default_r")]
    pub r: u32,
    #[serde(default)]
    pub zeta: Option<ZetaSpec>,
}

impl CurveSpec {
    /// Spec with integer coefficients in the prime field.
    pub fn prime(p0: u64, s: u32, n: u32, coeffs: &[i64]) -> Self {
        CurveSpec { p0, s, n, coeffs: coeffs.iter().map(|&c| CoeffSpec::Int(c)).collect(), r: 1, zeta: None }
    }

    pub fn with_r(mut self, r: u32) -> Self {
        self.r = r;
        self
    }

    pub fn with_zeta(mut self, minpoly: &[i64], which_root: usize) -> Self {
        self.zeta = Some(ZetaSpec { minpoly: minpoly.to_vec(), which_root });
        self
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

fn resolve_coeff(ctx: &FieldCtx, c: &CoeffSpec) -> Result<FFElem, LError> {
    match c {
        CoeffSpec::Int(a) => Ok(ctx.from_int(*a)),
        CoeffSpec::Power(sx) => {
            let t = sx.trim();
            if let Ok(a) = t.parse::<i64>() {
                return Ok(ctx.from_int(a));
            }
            let k = t
                .strip_prefix("g^")
                .and_then(|k| k.trim().parse::<u64>().ok())
                .ok_or_else(|| LError::Spec(format!("coefficient {sx:?} is neither an integer nor of the form g^k")))?;
            Ok(ctx.gen_pow(k % (ctx.size() - 1)))
        }
        CoeffSpec::Vector(v) => {
            if v.len() > ctx.degree() {
                return Err(LError::Spec(format!("coefficient vector {:?} longer than the field degree {}", v, ctx.degree())));
            }
            let mut c: Vec<u64> = v.iter().map(|&a| a.rem_euclid(ctx.p0() as i64) as u64).collect();
            c.resize(ctx.degree(), 0);
            Ok(ctx.from_coeffs(c)?)
        }
    }
}

/// A resolved curve: the field it is defined over and the linearized polynomial `ζR`.
#[derive(Clone, Debug)]
pub struct Curve {
    pub ctx: FieldCtx,
    pub s: u32,
    /// Degree of the curve's field over F_p.
    pub n: u32,
    pub r: u32,
    pub poly: LinPoly,
    /// The twist scalar, when the spec has one.
    pub zeta: Option<FFElem>,
}

impl Curve {
    pub fn resolve(spec: &CurveSpec) -> Result<Curve, LError> {
        let CurveSpec { p0, s, n, .. } = *spec;
        if !arith::is_prime(p0) {
            return Err(LError::Spec(format!("p0 = {p0} is not prime")));
        }
        if s == 0 || n == 0 || spec.r == 0 {
            return Err(LError::Spec("s, n and r must be positive".into()));
        }
        if spec.coeffs.is_empty() {
            return Err(LError::Spec("R has no coefficients".into()));
        }
        let m = (s as usize).checked_mul(n as usize).ok_or_else(|| LError::Spec("s n overflows".into()))?;
        if arith::checked_pow(p0, m as u32).map_or(true, |q| q > MAX_FIELD_SIZE) {
            return Err(LError::TooLarge(format!("F_{p0}^{m} exceeds the supported field size")));
        }
        let fq = FieldCtx::new(p0, m)?;
        let coeffs: Vec<FFElem> = spec.coeffs.iter().map(|c| resolve_coeff(&fq, c)).collect::<Result<_, _>>()?;
        if coeffs.last().unwrap().is_zero() {
            return Err(LError::Spec("leading coefficient a_e is zero".into()));
        }
        let base = Curve { ctx: fq.clone(), s, n, r: spec.r, poly: LinPoly::new(s, coeffs), zeta: None };
        let Some(z) = &spec.zeta else { return Ok(base) };
        let mp: Vec<u64> = z.minpoly.iter().map(|&a| a.rem_euclid(p0 as i64) as u64).collect();
        let Some(&lead) = mp.last().filter(|&&c| c != 0) else {
            return Err(LError::Spec("zeta minpoly has zero leading coefficient".into()));
        };
        if mp.len() < 2 {
            return Err(LError::Spec("zeta minpoly must have degree at least 1".into()));
        }
        let inv = arith::invmod(lead, p0).unwrap();
        let monic: Vec<u64> = mp.iter().map(|&c| arith::mulmod(c, inv, p0)).collect();
        if !is_irreducible(&monic, p0) {
            return Err(LError::Spec(format!("zeta minpoly {:?} is not irreducible over F_{p0}", z.minpoly)));
        }
        let dz = monic.len() - 1;
        let big_m = arith::lcm(m as u64, dz as u64) as usize;
        if arith::checked_pow(p0, big_m as u32).map_or(true, |q| q > MAX_FIELD_SIZE) {
            return Err(LError::TooLarge(format!("F_{p0}^{big_m} exceeds the supported field size")));
        }
        let big = FieldCtx::new(p0, big_m)?;
        let poly: Vec<FFElem> = monic.iter().map(|&c| big.from_int(c as i64)).collect();
        let roots = crate::fpoly::roots(&big, &poly);
        let zeta = roots
            .get(z.which_root)
            .cloned()
            .ok_or_else(|| LError::Spec(format!("which_root {} out of range ({} roots)", z.which_root, roots.len())))?;
        if zeta.is_zero() {
            return Err(LError::Spec("zeta is zero".into()));
        }
        let ext = base.extend_to(&big)?;
        let poly = ext.poly.scale(&big, &zeta);
        Ok(Curve { ctx: big, s, n: (big_m / s as usize) as u32, r: spec.r, poly, zeta: Some(zeta) })
    }

    fn extend_to(&self, big: &FieldCtx) -> Result<Curve, LError> {
        let emb = SubfieldEmbed::new(&self.ctx, big)?;
        let coeffs = self.poly.coeffs.iter().map(|a| emb.map(big, a)).collect();
        let zeta = self.zeta.as_ref().map(|z| emb.map(big, z));
        let n = (big.degree() / self.s as usize) as u32;
        Ok(Curve { ctx: big.clone(), s: self.s, n, r: self.r, poly: LinPoly::new(self.s, coeffs), zeta })
    }

    /// The same curve over `F_{q^j}`.
    pub fn extend(&self, j: u32) -> Result<Curve, LError> {
        if j == 1 {
            return Ok(self.clone());
        }
        let m = self.m() * j as usize;
        if arith::checked_pow(self.p0(), m as u32).map_or(true, |q| q > MAX_FIELD_SIZE) {
            return Err(LError::TooLarge(format!("F_{}^{} exceeds the supported field size", self.p0(), m)));
        }
        self.extend_to(&FieldCtx::new(self.p0(), m)?)
    }

    /// `C_{cR}` over the same field.
    pub fn twist(&self, c: &FFElem) -> Curve {
        let mut out = self.clone();
        out.poly = self.poly.scale(&self.ctx, c);
        out
    }

    pub fn p0(&self) -> u64 {
        self.ctx.p0()
    }

    /// Degree of the curve's field over F_p0.
    pub fn m(&self) -> usize {
        self.ctx.degree()
    }

    pub fn e(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn q(&self) -> BigInt {
        BigInt::from(self.p0()).pow(self.m() as u32)
    }

    /// `p^e (p^r - 1) / 2`.
    pub fn genus(&self) -> BigInt {
        let p = BigInt::from(self.p0()).pow(self.s);
        (p.pow(self.e() as u32) * (p.pow(self.r) - 1u32)) / 2u32
    }

    /// Degree over F_q of the splitting field of `E_R`.
    pub fn splitting_degree(&self) -> Result<usize, LError> {
        let er = e_r(&self.ctx, &self.poly)?;
        let bound = 4 * self.s as usize * (2 * self.e() + 1) * self.m();
        let d = splitting_degree(&self.ctx, &er, bound)?;
        let step = arith::lcm(d as u64, self.m() as u64) / self.m() as u64;
        Ok(step as usize)
    }

    /// Degree of the curve's field over F_p0 extended `k` times.
    pub fn field_degree(&self, k: u32) -> u64 {
        self.m() as u64 * k as u64
    }
}

/// `p0^{exp/2}` when `exp` is even.
pub fn sqrt_field_size(p0: u64, exp: u64) -> Option<BigInt> {
    (exp % 2 == 0).then(|| BigInt::from(p0).pow((exp / 2) as u32))
}

/// Hasse-Weil interval `(q^k + 1 - ⌊2g√(q^k)⌋, q^k + 1 + ⌊2g√(q^k)⌋)` for a field of size
/// `p0^exp`.
pub fn weil_bounds(p0: u64, exp: u64, genus: &BigInt) -> (BigInt, BigInt) {
    let qk = BigInt::from(p0).pow(exp as u32);
    let slack = (BigInt::from(4u32) * genus * genus * &qk).sqrt();
    let mid = &qk + 1u32;
    (&mid - &slack, &mid + &slack)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Maximal,
    Minimal,
    Neither,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Maximal => "maximal",
            Verdict::Minimal => "minimal",
            Verdict::Neither => "neither",
        })
    }
}

/// Maximal/minimal/neither from a projective count over a field of size `p0^exp`.
pub fn verdict_from_count(p0: u64, exp: u64, genus: &BigInt, count: &BigInt) -> Verdict {
    let Some(root) = sqrt_field_size(p0, exp) else { return Verdict::Neither };
    let mid = BigInt::from(p0).pow(exp as u32) + 1u32;
    let d = BigInt::from(2u32) * genus * root;
    if *count == &mid + &d {
        Verdict::Maximal
    } else if *count == &mid - &d {
        Verdict::Minimal
    } else {
        Verdict::Neither
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussPath {
    /// Summed over the field and cross-checked against the lifted value.
    Direct,
    /// `G(ψ_{p0})^{f0}` without enumeration.
    Lifted,
}

/// `G(ψ_q)` for `λ = 1`, how it was obtained, and its checked square.
#[derive(Clone, Debug, Serialize)]
pub struct GaussData {
    pub g1: CycInt,
    pub path: GaussPath,
}

pub fn gauss_data(ctx: &FieldCtx) -> Result<GaussData, LError> {
    let m = ctx.degree();
    let ch = CharSpec::new(ctx, ctx.one(), m)?;
    let lifted = gauss_sum_lifted(ctx, &ch)?;
    let (g1, path) = if ctx.size() <= GAUSS_DIRECT_CAP {
        let direct = gauss_sum(ctx, &ch, GAUSS_DIRECT_CAP)?;
        if direct != lifted {
            return Err(LError::Inconsistent(format!("direct Gauss sum {direct} differs from lifted {lifted}")));
        }
        (direct, GaussPath::Direct)
    } else {
        (lifted, GaussPath::Lifted)
    };
    let sq = &g1 * &g1;
    if sq != CycInt::from_int(ctx.p0(), gauss_square(ctx.p0(), m as u32)) {
        return Err(LError::Inconsistent(format!("G(ψ_q)^2 = {sq} is not ±q")));
    }
    Ok(GaussData { g1, path })
}

/// One Frobenius eigenvalue with the character that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct EigenRecord {
    pub lambda: FFElem,
    /// The twist `ζ' ∈ F_{p^r}^×` for the generalized curve.
    pub twist: Option<FFElem>,
    pub ell: Vec<u64>,
    pub eta: FFElem,
    pub tau: CycInt,
}

/// `τ_ξ = ψ_q(-4^{-1} c_A^{-1} η^2) (2 a_e / q) G(ψ_q)`, also assembled with `(c_A/q)` in place of
/// `(2 a_e / q)`; the two routes must agree.
pub fn tau_eigenvalue(
    ctx: &FieldCtx,
    poly: &LinPoly,
    data: &AbelianData,
    solver: &CharacterSolver,
    idx: &CharacterIndex,
    gauss: &GaussData,
) -> Result<(FFElem, CycInt), LError> {
    if ctx.p0() == 2 {
        return Err(LError::HypothesisViolated("p0 = 2".into()));
    }
    if !data.flags.a_in_fq2 {
        return Err(LError::HypothesisViolated("A is not contained in F_q^2".into()));
    }
    let a_e = poly.leading().ok_or_else(|| LError::HypothesisViolated("e = 0".into()))?;
    let eta = solver.eta(ctx, idx)?;
    let four_c = ctx.mul(&ctx.from_int(4), &data.c_a);
    let arg = ctx.neg(&ctx.div(&ctx.square(&eta), &four_c).unwrap());
    let t = ctx.trace_to_prime(&ctx.mul(&idx.lambda, &arg));
    let g_lambda = if ctx.legendre(&idx.lambda)? == 1 { gauss.g1.clone() } else { -&gauss.g1 };
    let unit = CycInt::zeta_pow(ctx.p0(), t as i64);
    let via_ae = ctx.legendre(&ctx.mul(&ctx.from_int(2), a_e))?;
    let via_ca = ctx.legendre(&data.c_a)?;
    let tau_ae = &unit * &g_lambda.scale(&BigInt::from(via_ae));
    let tau_ca = &unit * &g_lambda.scale(&BigInt::from(via_ca));
    if tau_ae != tau_ca {
        return Err(LError::Inconsistent(format!("(c_A/q) = {via_ca} but (2a_e/q) = {via_ae}")));
    }
    Ok((eta, tau_ae))
}

/// All Frobenius eigenvalues of a curve over its own field, with provenance.
#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueSet {
    pub field: FieldDescriptor,
    #[serde(with = "crate::bigfmt::bigint")]
    pub genus: BigInt,
    pub gauss: GaussData,
    pub records: Vec<EigenRecord>,
}

fn eigen_records(curve: &Curve, twist: Option<&FFElem>, only_lambda_one: bool, gauss: &GaussData) -> Result<(AbelianData, Vec<EigenRecord>), LError> {
    let ctx = &curve.ctx;
    let poly = match twist {
        Some(z) => curve.poly.scale(ctx, z),
        None => curve.poly.clone(),
    };
    let data = find_abelian(ctx, &poly)?;
    if !data.flags.a_in_fq2 {
        return Err(LError::FormulaPathUnavailable("A is not contained in F_q^2".into()));
    }
    let solver = CharacterSolver::new(ctx, &data)?;
    let mut idx = solver.indices(ctx)?;
    if only_lambda_one {
        idx.retain(|i| i.lambda == ctx.one());
    }
    let recs: Vec<EigenRecord> = idx
        .par_iter()
        .map(|i| {
            let (eta, tau) = tau_eigenvalue(ctx, &poly, &data, &solver, i, gauss)?;
            Ok(EigenRecord { lambda: i.lambda.clone(), twist: twist.cloned(), ell: i.ell.clone(), eta, tau })
        })
        .collect::<Result<_, LError>>()?;
    Ok((data, recs))
}

/// Eigenvalues of the curve over its own field; for `r > 1` the union over `ζ' ∈ F_{p^r}^×` of
/// the `λ = 1` eigenvalues of `C_{ζ'R}`.
pub fn eigenvalues(curve: &Curve) -> Result<(EigenvalueSet, Vec<AbelianData>), LError> {
    let ctx = &curve.ctx;
    if curve.p0() == 2 {
        return Err(LError::FormulaPathUnavailable("characteristic 2".into()));
    }
    if curve.e() == 0 {
        return Err(LError::FormulaPathUnavailable("e = 0".into()));
    }
    if curve.n % curve.r != 0 {
        return Err(LError::FormulaPathUnavailable(format!("F_{{p^{}}} is not contained in F_q", curve.r)));
    }
    let gauss = gauss_data(ctx)?;
    let mut all = Vec::new();
    let mut datas = Vec::new();
    let wrap = |e: LError| match e {
        LError::Heis(HeisError::NoFrobeniusStableLagrangian(m)) => LError::FormulaPathUnavailable(m),
        other => other,
    };
    if curve.r == 1 {
        let (d, recs) = eigen_records(curve, None, false, &gauss).map_err(wrap)?;
        datas.push(d);
        all = recs;
    } else {
        let twists = ctx.subfield_elements(curve.s as usize * curve.r as usize)?;
        for z in twists.iter().filter(|z| !z.is_zero()) {
            let (d, recs) = eigen_records(curve, Some(z), true, &gauss).map_err(wrap)?;
            datas.push(d);
            all.extend(recs);
        }
    }
    let genus = curve.genus();
    if BigInt::from(all.len()) != &genus * 2u32 {
        return Err(LError::Inconsistent(format!("{} eigenvalues for genus {}", all.len(), genus)));
    }
    let q = CycInt::from_int(curve.p0(), curve.q());
    for rec in &all {
        if &rec.tau * &rec.tau.conj() != q {
            return Err(LError::Inconsistent(format!("|τ|^2 ≠ q for τ = {}", rec.tau)));
        }
    }
    Ok((EigenvalueSet { field: ctx.descriptor(), genus, gauss, records: all }, datas))
}

/// Distinct values with multiplicity, in first-occurrence order.
pub fn distinct_with_multiplicity(taus: impl IntoIterator<Item = CycInt>) -> Vec<(CycInt, usize)> {
    let mut out: Vec<(CycInt, usize)> = Vec::new();
    for t in taus {
        match out.iter_mut().find(|(u, _)| *u == t) {
            Some(slot) => slot.1 += 1,
            None => out.push((t, 1)),
        }
    }
    out
}

/// Largest L-polynomial degree expanded on request.
pub const L_POLY_MAX_DEGREE: usize = 2000;

/// The formula path for a curve: eigenvalues over `F_{q^j}` for the smallest usable `j`.
#[derive(Clone, Debug, Serialize)]
pub struct FormulaPath {
    /// The curve's own field.
    pub base_field: FieldDescriptor,
    /// Degree over the curve's field of the field the eigenvalues live over.
    pub extension: u32,
    pub eigen: EigenvalueSet,
    pub abelian: Vec<AbelianData>,
    #[serde(skip)]
    pub distinct: Vec<(CycInt, usize)>,
    #[serde(skip)]
    base_m: usize,
    #[serde(skip)]
    p0: u64,
}

impl FormulaPath {
    /// Uses the formula over `F_{q^j}` for the smallest `j ≤ max_ext` where it applies.
    pub fn build(curve: &Curve, max_ext: u32) -> Result<FormulaPath, LError> {
        let mut reasons = Vec::new();
        for j in 1..=max_ext.max(1) {
            if (curve.n * j) % curve.r != 0 {
                continue;
            }
            let ext = match curve.extend(j) {
                Ok(c) => c,
                Err(LError::TooLarge(m)) => {
                    reasons.push(format!("j = {j}: {m}"));
                    break;
                }
                Err(e) => return Err(e),
            };
            match eigenvalues(&ext) {
                Ok((eigen, abelian)) => {
                    let distinct = distinct_with_multiplicity(eigen.records.iter().map(|r| r.tau.clone()));
                    return Ok(FormulaPath {
                        base_field: curve.ctx.descriptor(),
                        extension: j,
                        eigen,
                        abelian,
                        distinct,
                        base_m: curve.m(),
                        p0: curve.p0(),
                    });
                }
                Err(LError::FormulaPathUnavailable(m)) => {
                    let fatal = curve.p0() == 2 || curve.e() == 0;
                    reasons.push(format!("j = {j}: {m}"));
                    if fatal {
                        break;
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Err(LError::FormulaPathUnavailable(reasons.join("; ")))
    }

    pub fn p0(&self) -> u64 {
        self.p0
    }

    /// Exponent of `p0` in the size of the field the eigenvalues live over.
    pub fn ext_degree(&self) -> u64 {
        (self.base_m * self.extension as usize) as u64
    }

    /// `Σ τ^t` over the eigenvalue field, a rational integer.
    pub fn power_sum_ext(&self, t: u64) -> Result<BigInt, LError> {
        let mut acc = CycInt::zero(self.p0);
        for (tau, mult) in &self.distinct {
            acc = &acc + &tau.pow(t).scale(&BigInt::from(*mult));
        }
        acc.as_integer().ok_or_else(|| LError::Inconsistent(format!("power sum Σ τ^{t} is not rational: {acc}")))
    }

    /// `Σ τ^k` for the Frobenius of `F_{q^k}`, available when `j | k`.
    pub fn power_sum(&self, k: u32) -> Result<Option<BigInt>, LError> {
        if k % self.extension != 0 {
            return Ok(None);
        }
        self.power_sum_ext((k / self.extension) as u64).map(Some)
    }

    /// Projective point count over `F_{q^k}` predicted by `q^k + 1 - Σ τ^k`.
    pub fn predicted_count(&self, k: u32) -> Result<Option<BigInt>, LError> {
        let exp = self.base_m as u64 * k as u64;
        Ok(self.power_sum(k)?.map(|s| BigInt::from(self.p0).pow(exp as u32) + 1u32 - s))
    }

    /// Verdict over `F_{q^k}` from `τ^k = ∓ q^{k/2}` for every eigenvalue; `None` when `j ∤ k`.
    pub fn verdict(&self, k: u32) -> Option<Verdict> {
        if k % self.extension != 0 {
            return None;
        }
        let exp = self.base_m as u64 * k as u64;
        let Some(root) = sqrt_field_size(self.p0, exp) else { return Some(Verdict::Neither) };
        let t = (k / self.extension) as u64;
        let plus = CycInt::from_int(self.p0, root.clone());
        let minus = CycInt::from_int(self.p0, -root);
        let powers: Vec<CycInt> = self.distinct.iter().map(|(tau, _)| tau.pow(t)).collect();
        if powers.iter().all(|x| *x == minus) {
            Some(Verdict::Maximal)
        } else if powers.iter().all(|x| *x == plus) {
            Some(Verdict::Minimal)
        } else {
            Some(Verdict::Neither)
        }
    }

    /// `Π (1 - τ T)` over the eigenvalue field, integer coefficients lowest degree first,
    /// from Newton's identities on the integer power sums; checked against the functional equation.
    pub fn l_polynomial(&self) -> Result<Vec<BigInt>, LError> {
        let deg = self.eigen.records.len();
        if deg > L_POLY_MAX_DEGREE {
            return Err(LError::TooLarge(format!("L-polynomial of degree {deg} exceeds {L_POLY_MAX_DEGREE}")));
        }
        let mut sums = Vec::with_capacity(deg + 1);
        sums.push(BigInt::from(deg));
        let mut pows: Vec<CycInt> = self.distinct.iter().map(|_| CycInt::one(self.p0)).collect();
        for _ in 1..=deg {
            let mut acc = CycInt::zero(self.p0);
            for (pw, (tau, mult)) in pows.iter_mut().zip(&self.distinct) {
                *pw = &*pw * tau;
                acc = &acc + &pw.scale(&BigInt::from(*mult));
            }
            sums.push(acc.as_integer().ok_or_else(|| LError::Inconsistent("non-rational power sum".into()))?);
        }
        // e_k = (1/k) Σ_{i=1}^k (-1)^{i-1} e_{k-i} S_i; L(T) = Σ (-1)^k e_k T^k.
        let mut e = vec![BigInt::one()];
        for k in 1..=deg {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                let term = &e[k - i] * &sums[i];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            if !(&acc % BigInt::from(k)).is_zero() {
                return Err(LError::Inconsistent(format!("Newton identity not integral at degree {k}")));
            }
            e.push(acc / BigInt::from(k));
        }
        let coeffs: Vec<BigInt> = e.into_iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c }).collect();
        let q = BigInt::from(self.p0).pow(self.ext_degree() as u32);
        let g = deg / 2;
        for i in 0..=g {
            if coeffs[deg - i] != &coeffs[i] * q.pow((g - i) as u32) {
                return Err(LError::Inconsistent(format!("functional equation fails at degree {i}")));
            }
        }
        Ok(coeffs)
    }

    /// `(τ / q^{1/2})` written as `±ζ_{p0}^t` when the eigenvalue field has even degree.
    pub fn normalized(&self, tau: &CycInt) -> Option<(i8, u64)> {
        let root = sqrt_field_size(self.p0, self.ext_degree())?;
        let coeffs: Vec<BigInt> = tau.coeffs().iter().map(|c| c / &root).collect();
        if coeffs.iter().zip(tau.coeffs()).any(|(c, o)| c * &root != *o) {
            return None;
        }
        CycInt::from_coeffs(self.p0, &coeffs).as_signed_root_of_unity()
    }
}

/// Multiplicative order of `±ζ_{p0}^t` in the group of roots of unity.
pub fn signed_root_order(p0: u64, sign: i8, t: u64) -> u64 {
    let zeta_ord = if t % p0 == 0 { 1 } else { p0 };
    if sign == 1 {
        zeta_ord
    } else {
        2 * zeta_ord
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(spec: CurveSpec) -> FormulaPath {
        FormulaPath::build(&Curve::resolve(&spec).unwrap(), 12).unwrap()
    }

    #[test]
    fn genus_values() {
        let c = Curve::resolve(&CurveSpec::prime(3, 1, 1, &[1, 2])).unwrap();
        assert_eq!(c.genus(), BigInt::from(3));
        let c = Curve::resolve(&CurveSpec::prime(3, 1, 2, &[1, 2]).with_r(2)).unwrap();
        assert_eq!(c.genus(), BigInt::from(12));
        let c = Curve::resolve(&CurveSpec::prime(7, 1, 1, &[3])).unwrap();
        assert_eq!(c.genus(), BigInt::from(3));
    }

    #[test]
    fn two_x5_over_625_is_minimal() {
        let f = fp(CurveSpec::prime(5, 1, 4, &[0, 2]));
        assert_eq!(f.extension, 1);
        assert!(f.distinct.len() == 1 && f.distinct[0].0 == CycInt::from_int(5, 25));
        assert_eq!(f.verdict(1), Some(Verdict::Minimal));
        assert_eq!(f.predicted_count(1).unwrap(), Some(BigInt::from(126)));
    }

    #[test]
    fn two_x3_plus_x_over_f3() {
        let f = fp(CurveSpec::prime(3, 1, 1, &[1, 2]));
        assert_eq!(f.extension, 1);
        assert_eq!(f.power_sum(1).unwrap(), Some(BigInt::from(-6)));
        assert_eq!(f.verdict(6), Some(Verdict::Maximal));
        assert_eq!(f.verdict(12), Some(Verdict::Minimal));
        assert_eq!(f.verdict(18), Some(Verdict::Maximal));
        for k in 1..6 {
            assert_eq!(f.verdict(k), Some(Verdict::Neither));
        }
        let big = fp(CurveSpec::prime(3, 1, 6, &[1, 2]));
        let l = big.l_polynomial().unwrap();
        let expect: Vec<BigInt> = (0..=6u32).map(|i| BigInt::from(num_integer::binomial(6u64, i as u64)) * BigInt::from(27).pow(i)).collect();
        assert_eq!(l, expect);
    }

    #[test]
    fn extension_search_for_2x5_plus_x() {
        let f = fp(CurveSpec::prime(5, 1, 1, &[1, 2]));
        assert_eq!(f.extension, 3);
        assert_eq!(f.verdict(6), Some(Verdict::Minimal));
        assert_eq!(f.predicted_count(6).unwrap(), Some(BigInt::from(13126)));
        assert_eq!(f.verdict(1), None);
    }

    #[test]
    fn weil_interval() {
        let (lo, hi) = weil_bounds(3, 6, &BigInt::from(3));
        assert_eq!(hi, BigInt::from(892));
        assert_eq!(lo, BigInt::from(730 - 162));
        let (lo, hi) = weil_bounds(3, 1, &BigInt::from(3));
        assert_eq!((lo, hi), (BigInt::from(4 - 10), BigInt::from(4 + 10)));
    }

    #[test]
    fn spec_coefficients() {
        let spec: CurveSpec = serde_json::from_str(r#"{"p0":3,"s":1,"n":2,"R":[1,"g^2",[0,1]],"r":1,"zeta":null}"#).unwrap();
        let c = Curve::resolve(&spec).unwrap();
        assert_eq!(c.poly.coeffs[1], c.ctx.gen_pow(2));
        assert_eq!(c.poly.coeffs[2], c.ctx.x_elem());
        let bad: CurveSpec = serde_json::from_str(r#"{"p0":3,"s":1,"n":1,"R":[1,"h^2"]}"#).unwrap();
        assert!(matches!(Curve::resolve(&bad), Err(LError::Spec(_))));
        let zero_lead = CurveSpec::prime(3, 1, 1, &[1, 3]);
        assert!(matches!(Curve::resolve(&zero_lead), Err(LError::Spec(_))));
    }

    #[test]
    fn char3_twist_field() {
        let c = Curve::resolve(&CurveSpec::prime(3, 1, 1, &[1, 2]).with_zeta(&[-1, 0, 1, 0, 1], 0)).unwrap();
        assert_eq!(c.m(), 4);
        assert_eq!(c.n, 4);
        let z = c.zeta.clone().unwrap();
        let z2 = c.ctx.square(&z);
        assert_eq!(c.ctx.sub(&c.ctx.add(&c.ctx.square(&z2), &z2), &c.ctx.one()), c.ctx.zero());
    }
}
