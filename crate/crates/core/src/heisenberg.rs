//! Heisenberg group data attached to `R`: the commutator pairing on `V_R`, a Lagrangian
//! `Ā` with its subspace polynomial `F_A`, the constant `c_A`, the complement `a(x)`,
//! and the element `η` attached to each character.
//!
//! Everything here runs inside the field `F_q` (a [`FieldCtx`] of degree `s n`) the curve
//! is defined over, except the optional search for a Frobenius-stable Lagrangian outside
//! `F_q`, which builds its own larger field.

use serde::Serialize;

use crate::arith;
use crate::field::{FFElem, FieldCtx, FieldDescriptor, FieldError, SubfieldEmbed};
use crate::linalg::{FpMatrix, SpanBuilder};
use crate::linearized::{self, e_r, f_r, fp_span, kernel, ore_compose, ore_right_divide, KernelSpace, LinError, LinPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeisError {
    #[error("characteristic 2 is not supported by the closed-form path")]
    EvenCharacteristic,
    #[error("R has degree zero (e = 0)")]
    DegreeZero,
    #[error("element is not in V_R")]
    NotInKernel,
    #[error("F_A has zero constant term")]
    ZeroConstantTerm,
    #[error("x^q - x is not right-divisible by F_A")]
    NonzeroRemainder,
    #[error("no Frobenius-stable Lagrangian found: {0}")]
    NoFrobeniusStableLagrangian(String),
    #[error("trace pairing system is singular")]
    SingularTraceSystem,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// `ω(α, α') = f_R(α, α') - f_R(α', α)`, which lies in F_p for `α, α' ∈ V_R`.
pub fn symplectic_form(ctx: &FieldCtx, r: &LinPoly, a: &FFElem, b: &FFElem) -> Result<FFElem, HeisError> {
    let e = e_r(ctx, r)?;
    if !e.eval(ctx, a).is_zero() || !e.eval(ctx, b).is_zero() {
        return Err(HeisError::NotInKernel);
    }
    omega(ctx, r, a, b)
}

fn omega(ctx: &FieldCtx, r: &LinPoly, a: &FFElem, b: &FFElem) -> Result<FFElem, HeisError> {
    Ok(ctx.sub(&f_r(ctx, r, a, b)?, &f_r(ctx, r, b, a)?))
}

/// `Tr_{q/p}(x R(x))`; it vanishes exactly when `y^p - y = x R(x)` has a solution in F_q.
pub fn quadratic_trace(ctx: &FieldCtx, r: &LinPoly, x: &FFElem) -> Result<FFElem, HeisError> {
    Ok(ctx.trace_to(&ctx.mul(x, &r.eval(ctx, x)), r.s as usize)?)
}

/// Some `β` in the field with `β^p - β = c`, if one exists.
pub fn artin_schreier_root(ctx: &FieldCtx, s: u32, c: &FFElem) -> Option<FFElem> {
    let m = LinPoly::frobenius_minus_x(ctx, s, 1).matrix(ctx);
    m.solve(c.coeffs()).map(|v| ctx.from_coeffs(v).unwrap())
}

/// An element `(α, β)` of `H_R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeisenbergElem {
    pub alpha: FFElem,
    pub beta: FFElem,
}

impl HeisenbergElem {
    pub fn new(ctx: &FieldCtx, r: &LinPoly, alpha: FFElem, beta: FFElem) -> Result<Self, HeisError> {
        let h = HeisenbergElem { alpha, beta };
        if !h.is_member(ctx, r)? {
            return Err(HeisError::NotInKernel);
        }
        Ok(h)
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        HeisenbergElem { alpha: ctx.zero(), beta: ctx.zero() }
    }

    pub fn is_member(&self, ctx: &FieldCtx, r: &LinPoly) -> Result<bool, HeisError> {
        if !e_r(ctx, r)?.eval(ctx, &self.alpha).is_zero() {
            return Ok(false);
        }
        let p_pow = ctx.frobenius(&self.beta, r.s as i64);
        let lhs = ctx.sub(&p_pow, &self.beta);
        Ok(lhs == ctx.mul(&self.alpha, &r.eval(ctx, &self.alpha)))
    }

    pub fn mul(&self, ctx: &FieldCtx, r: &LinPoly, o: &HeisenbergElem) -> Result<Self, HeisError> {
        let f = f_r(ctx, r, &self.alpha, &o.alpha)?;
        Ok(HeisenbergElem {
            alpha: ctx.add(&self.alpha, &o.alpha),
            beta: ctx.add(&ctx.add(&self.beta, &o.beta), &f),
        })
    }

    pub fn inverse(&self, ctx: &FieldCtx, r: &LinPoly) -> Result<Self, HeisError> {
        let f = f_r(ctx, r, &self.alpha, &self.alpha)?;
        Ok(HeisenbergElem { alpha: ctx.neg(&self.alpha), beta: ctx.sub(&f, &self.beta) })
    }
}

/// The embedding `Ā -> A`, `x -> (x, f_R(x, x)/2)`.
pub fn phi_abar(ctx: &FieldCtx, r: &LinPoly, x: &FFElem) -> Result<HeisenbergElem, HeisError> {
    let half = ctx.inv(&ctx.from_int(2)).ok_or(HeisError::EvenCharacteristic)?;
    Ok(HeisenbergElem { alpha: x.clone(), beta: ctx.mul(&f_r(ctx, r, x, x)?, &half) })
}

/// `c_A = (-1)^e a_e / (2 b_0)`, cross-checked against the product over `Ā \ {0}` when `Ā`
/// is small enough to enumerate.
pub fn c_a(ctx: &FieldCtx, r: &LinPoly, f_a: &LinPoly, abar: Option<&KernelSpace>) -> Result<FFElem, HeisError> {
    let e = r.degree().ok_or(HeisError::DegreeZero)?;
    let a_e = r.leading().unwrap();
    let b0 = f_a.coeff(ctx, 0);
    if b0.is_zero() {
        return Err(HeisError::ZeroConstantTerm);
    }
    let sign = if e % 2 == 0 { ctx.one() } else { ctx.from_int(-1) };
    let two = ctx.from_int(2);
    let c = ctx.mul(&sign, &ctx.div(a_e, &ctx.mul(&two, &b0)).ok_or(HeisError::EvenCharacteristic)?);
    if let Some(ab) = abar {
        if (ctx.p0() as f64).powi(ab.dim() as i32) <= 1e6 {
            let prod = ab.elements(ctx).iter().filter(|x| !x.is_zero()).fold(ctx.one(), |acc, x| ctx.mul(&acc, x));
            let alt = ctx.mul(&sign, &ctx.div(a_e, &ctx.mul(&two, &prod)).unwrap());
            if alt != c {
                return Err(HeisError::Inconsistent("c_A product form differs from b_0 form".into()));
            }
        }
    }
    Ok(c)
}

/// `a(x)` with `a ∘ F_A = F_A ∘ a = x^q - x`, for `q = p^n` and `n = m / s`.
pub fn complement_poly(ctx: &FieldCtx, f_a: &LinPoly) -> Result<LinPoly, HeisError> {
    let s = f_a.s;
    let n = ctx.degree() / s as usize;
    let xq = LinPoly::frobenius_minus_x(ctx, s, n);
    let (a, rem) = ore_right_divide(ctx, &xq, f_a)?;
    if !rem.is_zero() {
        return Err(HeisError::NonzeroRemainder);
    }
    if ore_compose(ctx, f_a, &a)? != xq {
        return Err(HeisError::NonzeroRemainder);
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionPath {
    /// `Ā = ⊕ F_p α^{k_i}` with `α^{p-1}` a primitive `n`-th root of unity in F_p.
    Eigenvector { exponents: Vec<u32> },
    /// Greedy isotropic extension inside `V_R ∩ F_q`.
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianFlags {
    pub abar_in_fq: bool,
    pub a_in_fq2: bool,
}

/// A maximal abelian subgroup `A = π^{-1}(Ā)` of `H_R` with `Ā ⊂ F_q`, and the data derived from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianData {
    pub field: FieldDescriptor,
    pub s: u32,
    /// F_p-basis of `Ā`.
    pub abar_basis: Vec<FFElem>,
    /// F_p0-basis of `Ā`; characters are indexed by dual coordinates on this basis.
    pub abar_fp0_basis: Vec<FFElem>,
    pub f_a: LinPoly,
    pub c_a: FFElem,
    pub a_poly: LinPoly,
    /// F_p0-basis of `Ker a ∩ F_q`.
    pub ker_a_basis: Vec<FFElem>,
    pub flags: AbelianFlags,
    pub path: ConstructionPath,
}

impl AbelianData {
    /// Assembles the data for a given F_p-basis of a Lagrangian `Ā ⊂ V_R ∩ F_q`.
    pub fn build(ctx: &FieldCtx, r: &LinPoly, abar_fp: Vec<FFElem>, path: ConstructionPath, f_a_hint: Option<LinPoly>) -> Result<Self, HeisError> {
        let s = r.s;
        let e = r.degree().ok_or(HeisError::DegreeZero)?;
        if ctx.p0() == 2 {
            return Err(HeisError::EvenCharacteristic);
        }
        if e == 0 {
            return Err(HeisError::DegreeZero);
        }
        let span = fp_span(ctx, s, &abar_fp)?;
        if span.dim() != e * s as usize {
            return Err(HeisError::Inconsistent(format!("Ā has F_p0-dimension {} instead of {}", span.dim(), e * s as usize)));
        }
        let er = e_r(ctx, r)?;
        for b in &abar_fp {
            if !er.eval(ctx, b).is_zero() {
                return Err(HeisError::NotInKernel);
            }
        }
        for (i, x) in span.basis.iter().enumerate() {
            for y in &span.basis[i + 1..] {
                if !omega(ctx, r, x, y)?.is_zero() {
                    return Err(HeisError::Inconsistent("Ā is not isotropic".into()));
                }
            }
        }
        let f_a = linearized::subspace_poly(ctx, &span, s)?;
        if let Some(h) = f_a_hint {
            if h != f_a {
                return Err(HeisError::Inconsistent("composed F_A differs from the subspace polynomial".into()));
            }
        }
        let c = c_a(ctx, r, &f_a, Some(&span))?;
        let a_poly = complement_poly(ctx, &f_a)?;
        let ker_a = kernel(ctx, &a_poly);
        if ker_a.dim() != ctx.degree() - e * s as usize {
            return Err(HeisError::Inconsistent("Ker a has the wrong dimension".into()));
        }
        // Q(x) = Tr_{q/p}(x R(x)) is quadratic, so vanishing on basis vectors and their pairwise
        // sums makes it vanish on all of Ā.
        let mut a_in_fq2 = true;
        'outer: for (i, x) in span.basis.iter().enumerate() {
            if !quadratic_trace(ctx, r, x)?.is_zero() {
                a_in_fq2 = false;
                break;
            }
            for y in &span.basis[i + 1..] {
                if !quadratic_trace(ctx, r, &ctx.add(x, y))?.is_zero() {
                    a_in_fq2 = false;
                    break 'outer;
                }
            }
        }
        Ok(AbelianData {
            field: ctx.descriptor(),
            s,
            abar_basis: abar_fp,
            abar_fp0_basis: span.basis,
            f_a,
            c_a: c,
            a_poly,
            ker_a_basis: ker_a.basis,
            flags: AbelianFlags { abar_in_fq: true, a_in_fq2 },
            path,
        })
    }

    pub fn e(&self) -> usize {
        self.f_a.degree().unwrap()
    }

    pub fn abar(&self) -> KernelSpace {
        KernelSpace { basis: self.abar_fp0_basis.clone() }
    }

    pub fn ker_a(&self) -> KernelSpace {
        KernelSpace { basis: self.ker_a_basis.clone() }
    }
}

/// `(p, n)` with `p ≡ 1 (mod n)` and all coefficients of `R` in F_p: the eigenvector basis
/// `α^i` of F_q over F_p is available.
pub fn eigenvector_setting(ctx: &FieldCtx, r: &LinPoly) -> Option<(FFElem, FFElem)> {
    let s = r.s as usize;
    let n = (ctx.degree() / s) as u64;
    let p = ctx.p0().checked_pow(s as u32)?;
    if (p - 1) % n != 0 || !r.coeffs.iter().all(|a| ctx.in_subfield(a, s)) {
        return None;
    }
    let q = ctx.size();
    let alpha = ctx.gen_pow(((q - 1) / (p - 1)) / n);
    let zeta = ctx.pow(&alpha, (p - 1) as u128);
    Some((zeta, alpha))
}

fn eigenvector_path(ctx: &FieldCtx, r: &LinPoly) -> Result<Option<AbelianData>, HeisError> {
    let Some((zeta, alpha)) = eigenvector_setting(ctx, r) else { return Ok(None) };
    let s = r.s;
    let n = (ctx.degree() / s as usize) as u32;
    let e = r.degree().unwrap();
    let er = e_r(ctx, r)?;
    let mut chosen: Vec<u32> = Vec::new();
    for k in 0..n {
        if chosen.len() == e {
            break;
        }
        if (2 * k) % n == 0 || chosen.contains(&((n - k) % n)) {
            continue;
        }
        if er.eval(ctx, &ctx.pow(&alpha, k as u128)).is_zero() {
            chosen.push(k);
        }
    }
    if chosen.len() < e {
        return Ok(None);
    }
    let mut f_a = LinPoly::x(ctx, s);
    for &k in chosen.iter().rev() {
        let fk = LinPoly::new(s, vec![ctx.neg(&ctx.pow(&zeta, k as u128)), ctx.one()]);
        f_a = ore_compose(ctx, &fk, &f_a)?;
    }
    let basis = chosen.iter().map(|&k| ctx.pow(&alpha, k as u128)).collect();
    AbelianData::build(ctx, r, basis, ConstructionPath::Eigenvector { exponents: chosen }, Some(f_a)).map(Some)
}

/// A maximal isotropic F_p-subspace of `W` (F_p0-basis `w`), grown greedily. All maximal
/// isotropic subspaces of a fixed alternating form have the same dimension, so a greedy
/// extension that stops early has found the maximum.
fn greedy_isotropic(ctx: &FieldCtx, r: &LinPoly, w: &KernelSpace, target: usize) -> Result<Vec<FFElem>, HeisError> {
    let s = r.s;
    let gamma = linearized::prime_subfield_generator(ctx, s)?;
    let cs: Vec<FFElem> = (0..s).map(|j| ctx.pow(&gamma, j as u128)).collect();
    let mut chosen: Vec<FFElem> = Vec::new();
    let mut span = SpanBuilder::new(ctx.p0(), ctx.degree());
    while chosen.len() < target {
        let mut rows = Vec::new();
        for b in &chosen {
            let vals: Vec<FFElem> = w.basis.iter().map(|wi| omega(ctx, r, b, wi)).collect::<Result<_, _>>()?;
            for c in &cs {
                let row = vals.iter().map(|v| ctx.subfield_trace_to_prime(&ctx.mul(c, v), s as usize)).collect::<Result<Vec<_>, _>>()?;
                rows.push(row);
            }
        }
        let null = if rows.is_empty() {
            (0..w.dim()).map(|i| {
                let mut v = vec![0; w.dim()];
                v[i] = 1;
                v
            }).collect()
        } else {
            FpMatrix::from_rows(ctx.p0(), w.dim(), &rows).nullspace()
        };
        let next = null.into_iter().map(|c| {
            c.iter().zip(&w.basis).fold(ctx.zero(), |acc, (&k, b)| ctx.add(&acc, &ctx.scale(b, k)))
        }).find(|v| !span.contains(v.coeffs()));
        let Some(v) = next else { break };
        let mut cur = v.clone();
        for _ in 0..s {
            span.insert(cur.coeffs());
            cur = ctx.mul(&cur, &gamma);
        }
        chosen.push(v);
    }
    Ok(chosen)
}

/// Finds a Lagrangian `Ā ⊂ V_R ∩ F_q`: the eigenvector construction when it applies,
/// otherwise greedy isotropic extension. Errors when `V_R ∩ F_q` holds no Lagrangian.
pub fn find_abelian(ctx: &FieldCtx, r: &LinPoly) -> Result<AbelianData, HeisError> {
    if ctx.p0() == 2 {
        return Err(HeisError::EvenCharacteristic);
    }
    let e = r.degree().ok_or(HeisError::DegreeZero)?;
    if e == 0 {
        return Err(HeisError::DegreeZero);
    }
    if let Some(d) = eigenvector_path(ctx, r)? {
        return Ok(d);
    }
    let w = kernel(ctx, &e_r(ctx, r)?);
    let chosen = greedy_isotropic(ctx, r, &w, e)?;
    if chosen.len() < e {
        return Err(HeisError::NoFrobeniusStableLagrangian(format!(
            "V_R ∩ F_q has F_p0-dimension {} and its maximal isotropic subspaces have F_p-dimension {} < e = {}",
            w.dim(),
            chosen.len(),
            e
        )));
    }
    AbelianData::build(ctx, r, chosen, ConstructionPath::Greedy, None)
}

/// A Lagrangian of `V_R` stable under `x -> x^q` but not contained in F_q, found in a larger field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableLagrangian {
    pub ambient: FieldDescriptor,
    pub abar_basis: Vec<FFElem>,
    pub f_a: LinPoly,
    pub candidates_tried: u64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LagrangianSearch {
    InFq(Box<AbelianData>),
    OutsideFq(StableLagrangian),
}

/// Searches for a q-Frobenius-stable Lagrangian in the splitting field of `E_R`, by depth-first
/// isotropic extension over Frobenius orbits, within `budget` candidate vectors.
pub fn stable_lagrangian(ctx: &FieldCtx, r: &LinPoly, cap: u64, budget: u64) -> Result<StableLagrangian, HeisError> {
    let s = r.s;
    let e = r.degree().ok_or(HeisError::DegreeZero)?;
    let er = e_r(ctx, r)?;
    let split = linearized::splitting_degree(ctx, &er, 64 * s as usize * e.max(1))?;
    let m = ctx.degree();
    let big_m = arith::lcm(split as u64, m as u64) as usize;
    let big = FieldCtx::with_cap(ctx.p0(), big_m, cap)
        .map_err(|err| HeisError::NoFrobeniusStableLagrangian(format!("ambient F_{}^{} unavailable: {}", ctx.p0(), big_m, err)))?;
    let emb = SubfieldEmbed::new(ctx, &big)?;
    let rb = LinPoly::new(s, r.coeffs.iter().map(|a| emb.map(&big, a)).collect());
    let v = kernel(&big, &e_r(&big, &rb)?);
    let gamma = linearized::prime_subfield_generator(&big, s)?;
    let mut tried = 0u64;

    fn orbit_span(big: &FieldCtx, gamma: &FFElem, s: u32, m: usize, base: &[FFElem], v: &FFElem) -> (SpanBuilder, Vec<FFElem>) {
        let mut sb = SpanBuilder::new(big.p0(), big.degree());
        let mut basis = Vec::new();
        for b in base {
            sb.insert(b.coeffs());
            basis.push(b.clone());
        }
        let mut orb = v.clone();
        loop {
            let mut cur = orb.clone();
            for _ in 0..s {
                if sb.insert(cur.coeffs()) {
                    basis.push(cur.clone());
                }
                cur = big.mul(&cur, gamma);
            }
            orb = big.frobenius(&orb, m as i64);
            if orb == *v {
                break;
            }
        }
        (sb, basis)
    }

    fn dfs(
        big: &FieldCtx,
        rb: &LinPoly,
        gamma: &FFElem,
        s: u32,
        m: usize,
        v: &KernelSpace,
        target: usize,
        cur: Vec<FFElem>,
        tried: &mut u64,
        budget: u64,
    ) -> Result<Option<Vec<FFElem>>, HeisError> {
        if cur.len() == target {
            return Ok(Some(cur));
        }
        let sb_cur = {
            let mut sb = SpanBuilder::new(big.p0(), big.degree());
            for b in &cur {
                sb.insert(b.coeffs());
            }
            sb
        };
        let total = (big.p0() as u128).pow(v.dim() as u32);
        let mut idx: u128 = 1;
        while idx < total {
            if *tried >= budget {
                return Ok(None);
            }
            let mut k = idx;
            let mut cand = big.zero();
            for b in &v.basis {
                let c = (k % big.p0() as u128) as u64;
                k /= big.p0() as u128;
                if c != 0 {
                    cand = big.add(&cand, &big.scale(b, c));
                }
            }
            idx += 1;
            if sb_cur.contains(cand.coeffs()) {
                continue;
            }
            *tried += 1;
            let (_, basis) = orbit_span(big, gamma, s, m, &cur, &cand);
            if basis.len() > target {
                continue;
            }
            let mut iso = true;
            'chk: for (i, x) in basis.iter().enumerate() {
                for y in &basis[i + 1..] {
                    if !omega(big, rb, x, y)?.is_zero() {
                        iso = false;
                        break 'chk;
                    }
                }
            }
            if !iso {
                continue;
            }
            if let Some(found) = dfs(big, rb, gamma, s, m, v, target, basis, tried, budget)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    let target = e * s as usize;
    let found = dfs(&big, &rb, &gamma, s, m, &v, target, Vec::new(), &mut tried, budget)?;
    let Some(basis) = found else {
        return Err(HeisError::NoFrobeniusStableLagrangian(format!("none within budget {budget} ({tried} candidates tried)")));
    };
    let ks = KernelSpace { basis };
    let fp = ks.fp_basis(&big, s)?;
    let f_a = linearized::subspace_poly(&big, &ks, s)?;
    Ok(StableLagrangian { ambient: big.descriptor(), abar_basis: fp, f_a, candidates_tried: tried })
}

/// [`find_abelian`], falling back to [`stable_lagrangian`] when `V_R ∩ F_q` has no Lagrangian.
pub fn search_lagrangian(ctx: &FieldCtx, r: &LinPoly, cap: u64, budget: u64) -> Result<LagrangianSearch, HeisError> {
    match find_abelian(ctx, r) {
        Ok(d) => Ok(LagrangianSearch::InFq(Box::new(d))),
        Err(HeisError::NoFrobeniusStableLagrangian(_)) => stable_lagrangian(ctx, r, cap, budget).map(LagrangianSearch::OutsideFq),
        Err(err) => Err(err),
    }
}

/// Indexes a character `ξ ∈ A_ψ^∨`: `ψ(x) = ζ^{Tr_{p/p0}(λ x)}` and `ξ ∘ φ_Ā = ζ^{ℓ(·)}` with `ℓ`
/// given by dual coordinates on the F_p0-basis of `Ā`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterIndex {
    pub lambda: FFElem,
    pub ell: Vec<u64>,
}

/// Precomputed linear algebra for turning characters into `η`.
pub struct CharacterSolver {
    /// `coords[j]`: coordinates of `a(x^j)` on the F_p0-basis of `Ā`.
    coords: Vec<Vec<u64>>,
    gram_inv: FpMatrix,
    s: u32,
    dim: usize,
}

impl CharacterSolver {
    pub fn new(ctx: &FieldCtx, data: &AbelianData) -> Result<Self, HeisError> {
        let m = ctx.degree();
        let p = ctx.p0();
        let cols: Vec<Vec<u64>> = data.abar_fp0_basis.iter().map(|b| b.coeffs().to_vec()).collect();
        let bmat = FpMatrix::from_columns(p, m, &cols);
        let mut coords = Vec::with_capacity(m);
        for j in 0..m {
            let mut ej = vec![0; m];
            ej[j] = 1;
            let img = data.a_poly.eval(ctx, &ctx.from_coeffs(ej).unwrap());
            let c = bmat.solve(img.coeffs()).ok_or_else(|| HeisError::Inconsistent("a(x) leaves Ā".into()))?;
            coords.push(c);
        }
        let mut gram = FpMatrix::zeros(p, m, m);
        let xs: Vec<FFElem> = (0..m).map(|j| {
            let mut v = vec![0; m];
            v[j] = 1;
            ctx.from_coeffs(v).unwrap()
        }).collect();
        for i in 0..m {
            for j in 0..m {
                gram.set(i, j, ctx.trace_to_prime(&ctx.mul(&xs[i], &xs[j])));
            }
        }
        let gram_inv = gram.inverse().ok_or(HeisError::SingularTraceSystem)?;
        Ok(CharacterSolver { coords, gram_inv, s: data.s, dim: data.abar_fp0_basis.len() })
    }

    /// All character indices in canonical order: `λ` by subfield enumeration order, then `ℓ`
    /// in little-endian odometer order.
    pub fn indices(&self, ctx: &FieldCtx) -> Result<Vec<CharacterIndex>, HeisError> {
        let mut lambdas = ctx.subfield_elements(self.s as usize)?;
        lambdas.retain(|x| !x.is_zero());
        let ells = self.ells(ctx.p0());
        let mut out = Vec::with_capacity(lambdas.len() * ells.len());
        for l in &lambdas {
            for ell in &ells {
                out.push(CharacterIndex { lambda: l.clone(), ell: ell.clone() });
            }
        }
        Ok(out)
    }

    pub fn ells(&self, p0: u64) -> Vec<Vec<u64>> {
        let total = p0.pow(self.dim as u32);
        (0..total)
            .map(|mut k| {
                (0..self.dim).map(|_| {
                    let c = k % p0;
                    k /= p0;
                    c
                }).collect()
            })
            .collect()
    }

    /// The F_p0-linear exponent `t -> ℓ(a(t))` on the power basis of F_q.
    fn exponent_functional(&self, p: u64, ell: &[u64]) -> Vec<u64> {
        self.coords
            .iter()
            .map(|c| c.iter().zip(ell).fold(0u64, |acc, (&a, &b)| (acc + arith::mulmod(a, b, p)) % p))
            .collect()
    }

    /// `η` with `ψ_q(η x) = ξ'(x)` for all `x ∈ F_q`; zero exactly for the trivial `ℓ`.
    pub fn eta(&self, ctx: &FieldCtx, idx: &CharacterIndex) -> Result<FFElem, HeisError> {
        if idx.lambda.is_zero() {
            return Err(HeisError::HypothesisViolated("λ = 0".into()));
        }
        let c = self.exponent_functional(ctx.p0(), &idx.ell);
        let mu = ctx.from_coeffs(self.gram_inv.mul_vec(&c)).unwrap();
        Ok(ctx.div(&mu, &idx.lambda).unwrap())
    }

    /// Checks `Tr_{q/p0}(λ η x) = ℓ(a(x))` on the given elements.
    pub fn verify_eta(&self, ctx: &FieldCtx, data: &AbelianData, idx: &CharacterIndex, eta: &FFElem, xs: &[FFElem]) -> Result<bool, HeisError> {
        let le = ctx.mul(&idx.lambda, eta);
        let p = ctx.p0();
        let cols: Vec<Vec<u64>> = data.abar_fp0_basis.iter().map(|b| b.coeffs().to_vec()).collect();
        let bmat = FpMatrix::from_columns(p, ctx.degree(), &cols);
        for x in xs {
            let lhs = ctx.trace_to_prime(&ctx.mul(&le, x));
            let c = bmat.solve(data.a_poly.eval(ctx, x).coeffs()).ok_or_else(|| HeisError::Inconsistent("a(x) leaves Ā".into()))?;
            let rhs = c.iter().zip(&idx.ell).fold(0u64, |acc, (&a, &b)| (acc + arith::mulmod(a, b, p)) % p);
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rpoly(ctx: &FieldCtx, s: u32, v: &[i64]) -> LinPoly {
        LinPoly::new(s, v.iter().map(|&c| ctx.from_int(c)).collect())
    }

    #[test]
    fn omega_nondegenerate_on_v_r() {
        let f27 = FieldCtx::new(3, 3).unwrap();
        let r = rpoly(&f27, 1, &[1, 2]);
        let v = kernel(&f27, &e_r(&f27, &r).unwrap());
        assert_eq!(v.dim(), 2);
        let w = symplectic_form(&f27, &r, &v.basis[0], &v.basis[1]).unwrap();
        assert!(!w.is_zero());
        assert!(f27.in_subfield(&w, 1));
        assert!(symplectic_form(&f27, &r, &v.basis[0], &v.basis[0]).unwrap().is_zero());
    }

    #[test]
    fn c_a_small_cases() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let r = rpoly(&f5, 1, &[0, 2]);
        let fa = rpoly(&f5, 1, &[-1, 1]);
        assert_eq!(c_a(&f5, &r, &fa, None).unwrap(), f5.one());
        let fa2 = rpoly(&f5, 1, &[-2, 1]);
        assert_eq!(c_a(&f5, &r, &fa2, None).unwrap(), f5.from_int(3));
    }

    #[test]
    fn family_p5_n4_uses_eigenvectors() {
        let f = FieldCtx::new(5, 4).unwrap();
        let r = rpoly(&f, 1, &[0, 2]);
        let d = find_abelian(&f, &r).unwrap();
        assert_eq!(d.path, ConstructionPath::Eigenvector { exponents: vec![1] });
        assert!(d.flags.a_in_fq2);
        let (zeta, _) = eigenvector_setting(&f, &r).unwrap();
        assert_eq!(d.f_a, LinPoly::new(1, vec![f.neg(&zeta), f.one()]));
        let xq = LinPoly::frobenius_minus_x(&f, 1, 4);
        assert_eq!(ore_compose(&f, &d.a_poly, &d.f_a).unwrap(), xq);
        assert_eq!(d.ker_a_basis.len(), 3);
    }

    #[test]
    fn greedy_over_f3_for_2x3_plus_x() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let r = rpoly(&f3, 1, &[1, 2]);
        let d = find_abelian(&f3, &r).unwrap();
        assert_eq!(d.f_a, LinPoly::frobenius_minus_x(&f3, 1, 1));
        assert_eq!(d.a_poly, LinPoly::x(&f3, 1));
        assert_eq!(d.c_a, f3.one());
        assert!(d.flags.a_in_fq2);
    }

    #[test]
    fn no_lagrangian_in_small_field() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let r = rpoly(&f5, 1, &[1, 2]);
        assert!(matches!(find_abelian(&f5, &r), Err(HeisError::NoFrobeniusStableLagrangian(_))));
        // Frobenius acts on the 2-dimensional V_R with order 3; its only eigenvalue in F_5 is 1
        // and V_R ∩ F_5 = 0, so no Frobenius-stable line exists anywhere.
        match search_lagrangian(&f5, &r, 1 << 40, 100_000) {
            Err(HeisError::NoFrobeniusStableLagrangian(msg)) => assert!(msg.contains("candidates")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eta_reproduces_characters() {
        let f = FieldCtx::new(5, 4).unwrap();
        let r = rpoly(&f, 1, &[0, 2]);
        let d = find_abelian(&f, &r).unwrap();
        let cs = CharacterSolver::new(&f, &d).unwrap();
        let idx = cs.indices(&f).unwrap();
        assert_eq!(idx.len(), 4 * 5);
        let xs: Vec<FFElem> = (0..f.size()).step_by(7).map(|i| f.from_index(i)).collect();
        let mut etas = std::collections::HashSet::new();
        for i in &idx {
            let eta = cs.eta(&f, i).unwrap();
            assert_eq!(eta.is_zero(), i.ell.iter().all(|&c| c == 0));
            assert!(cs.verify_eta(&f, &d, i, &eta, &xs).unwrap());
            if i.lambda == f.one() {
                etas.insert(eta);
            }
        }
        assert_eq!(etas.len(), 5);
    }

    #[test]
    fn heisenberg_products_stay_in_group() {
        let f = FieldCtx::new(3, 3).unwrap();
        let r = rpoly(&f, 1, &[1, 2]);
        let v = kernel(&f, &e_r(&f, &r).unwrap());
        let mut elems = Vec::new();
        for a in v.elements(&f) {
            let c = f.mul(&a, &r.eval(&f, &a));
            if let Some(b) = artin_schreier_root(&f, 1, &c) {
                elems.push(HeisenbergElem::new(&f, &r, a, b).unwrap());
            }
        }
        assert_eq!(elems.len(), 9);
        for x in &elems {
            for y in &elems {
                let xy = x.mul(&f, &r, y).unwrap();
                assert!(xy.is_member(&f, &r).unwrap());
            }
            let inv = x.inverse(&f, &r).unwrap();
            assert_eq!(x.mul(&f, &r, &inv).unwrap(), HeisenbergElem::identity(&f));
        }
    }
}
