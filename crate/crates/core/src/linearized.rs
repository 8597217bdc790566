//! Additive polynomials `sum a_i x^{p^i}` with `p = p0^s`, their Ore algebra and kernels.

use serde::{Deserialize, Serialize};

use crate::field::{FFElem, FieldCtx, FieldError};
use crate::linalg::{FpMatrix, SpanBuilder};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("R has degree zero (e = 0)")]
    DegreeZero,
    #[error("step mismatch: {0} vs {1}")]
    StepMismatch(u32, u32),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("splitting degree exceeds the bound {bound}")]
    BoundExceeded { bound: usize },
    #[error("subspace is not closed under multiplication by F_p")]
    NotFpStable,
    #[error("polynomial is not separable (zero linear coefficient)")]
    NotSeparable,
    #[error("F_p (degree {s}) is not a subfield of the ambient field (degree {m})")]
    NoPrimeSubfield { s: u32, m: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `sum coeffs[i] x^{p^i}` with `p = p0^s`; trailing zero coefficients are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinPoly {
    pub s: u32,
    pub coeffs: Vec<FFElem>,
}

impl LinPoly {
    pub fn new(s: u32, coeffs: Vec<FFElem>) -> Self {
        let mut c = coeffs;
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        LinPoly { s, coeffs: c }
    }

    pub fn zero(s: u32) -> Self {
        LinPoly { s, coeffs: Vec::new() }
    }

    /// The identity polynomial `x`.
    pub fn x(ctx: &FieldCtx, s: u32) -> Self {
        LinPoly { s, coeffs: vec![ctx.one()] }
    }

    /// `c x^{p^i}`.
    pub fn monomial(ctx: &FieldCtx, s: u32, i: usize, c: FFElem) -> Self {
        let mut v = vec![ctx.zero(); i + 1];
        v[i] = c;
        Self::new(s, v)
    }

    /// `x^{p^n} - x`.
    pub fn frobenius_minus_x(ctx: &FieldCtx, s: u32, n: usize) -> Self {
        let mut v = vec![ctx.zero(); n + 1];
        v[0] = ctx.from_int(-1);
        v[n] = ctx.one();
        if n == 0 {
            v[0] = ctx.zero();
        }
        Self::new(s, v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the leading term (`e` in `x^{p^e}`).
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, ctx: &FieldCtx, i: usize) -> FFElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn leading(&self) -> Option<&FFElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, ctx: &FieldCtx) -> bool {
        self.leading() == Some(&ctx.one())
    }

    pub fn is_separable(&self) -> bool {
        self.coeffs.first().map_or(false, |c| !c.is_zero())
    }

    pub fn eval(&self, ctx: &FieldCtx, x: &FFElem) -> FFElem {
        let mut acc = ctx.zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let xi = ctx.frobenius(x, (self.s as usize * i) as i64);
            acc = ctx.add(&acc, &ctx.mul(a, &xi));
        }
        acc
    }

    pub fn add(&self, ctx: &FieldCtx, o: &LinPoly) -> LinPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.s, (0..n).map(|i| ctx.add(&self.coeff(ctx, i), &o.coeff(ctx, i))).collect())
    }

    pub fn sub(&self, ctx: &FieldCtx, o: &LinPoly) -> LinPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.s, (0..n).map(|i| ctx.sub(&self.coeff(ctx, i), &o.coeff(ctx, i))).collect())
    }

    pub fn scale(&self, ctx: &FieldCtx, c: &FFElem) -> LinPoly {
        Self::new(self.s, self.coeffs.iter().map(|a| ctx.mul(a, c)).collect())
    }

    /// Matrix of the F_p0-linear map `x -> L(x)` on the whole field.
    pub fn matrix(&self, ctx: &FieldCtx) -> FpMatrix {
        let m = ctx.degree();
        let cols: Vec<Vec<u64>> = (0..m)
            .map(|j| {
                let mut e = vec![0u64; m];
                e[j] = 1;
                self.eval(ctx, &ctx.from_coeffs(e).unwrap()).into_coeffs()
            })
            .collect();
        FpMatrix::from_columns(ctx.p0(), m, &cols)
    }

    /// Rewrites over the step `1`, i.e. as a polynomial in `x^{p0^i}`.
    pub fn to_prime_step(&self, ctx: &FieldCtx) -> LinPoly {
        let s = self.s as usize;
        let mut v = vec![ctx.zero(); s * self.coeffs.len().saturating_sub(1) + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            v[s * i] = a.clone();
        }
        LinPoly::new(1, v)
    }
}

/// `E_R(x) = R(x)^{p^e} + sum_{i<=e} (a_i x)^{p^{e-i}}`.
pub fn e_r(ctx: &FieldCtx, r: &LinPoly) -> Result<LinPoly, LinError> {
    let e = r.degree().ok_or(LinError::ZeroPolynomial)?;
    let s = r.s as i64;
    let mut c = vec![ctx.zero(); 2 * e + 1];
    for (i, a) in r.coeffs.iter().enumerate() {
        // R^{p^e}: a_i^{p^e} x^{p^{i+e}}
        c[i + e] = ctx.add(&c[i + e], &ctx.frobenius(a, s * e as i64));
        // (a_i x)^{p^{e-i}}
        let j = e - i;
        c[j] = ctx.add(&c[j], &ctx.frobenius(a, s * j as i64));
    }
    Ok(LinPoly::new(r.s, c))
}

/// `f_R(x, y) = -sum_{i<e} ( sum_{j<e-i} (a_i x^{p^i} y)^{p^j} + (x R(y))^{p^i} )`, evaluated termwise.
pub fn f_r(ctx: &FieldCtx, r: &LinPoly, x: &FFElem, y: &FFElem) -> Result<FFElem, LinError> {
    let e = r.degree().ok_or(LinError::ZeroPolynomial)?;
    if e == 0 {
        return Err(LinError::DegreeZero);
    }
    let s = r.s as i64;
    let xry = ctx.mul(x, &r.eval(ctx, y));
    let mut acc = ctx.zero();
    for i in 0..e {
        let base = ctx.mul(&ctx.mul(&r.coeffs[i], &ctx.frobenius(x, s * i as i64)), y);
        for j in 0..e - i {
            acc = ctx.add(&acc, &ctx.frobenius(&base, s * j as i64));
        }
        acc = ctx.add(&acc, &ctx.frobenius(&xry, s * i as i64));
    }
    Ok(ctx.neg(&acc))
}

/// `L1 ∘ L2`.
pub fn ore_compose(ctx: &FieldCtx, l1: &LinPoly, l2: &LinPoly) -> Result<LinPoly, LinError> {
    if l1.s != l2.s {
        return Err(LinError::StepMismatch(l1.s, l2.s));
    }
    if l1.is_zero() || l2.is_zero() {
        return Ok(LinPoly::zero(l1.s));
    }
    let s = l1.s as i64;
    let mut c = vec![ctx.zero(); l1.coeffs.len() + l2.coeffs.len() - 1];
    for (i, a) in l1.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in l2.coeffs.iter().enumerate() {
            let t = ctx.mul(a, &ctx.frobenius(b, s * i as i64));
            c[i + j] = ctx.add(&c[i + j], &t);
        }
    }
    Ok(LinPoly::new(l1.s, c))
}

/// Right division `N = Q ∘ D + Rm` with `deg Rm < deg D`.
pub fn ore_right_divide(ctx: &FieldCtx, n: &LinPoly, d: &LinPoly) -> Result<(LinPoly, LinPoly), LinError> {
    if n.s != d.s {
        return Err(LinError::StepMismatch(n.s, d.s));
    }
    let dd = d.degree().ok_or(LinError::DivisionByZero)?;
    let s = d.s as i64;
    let lead = d.leading().unwrap();
    let mut rem = n.clone();
    let mut q = vec![ctx.zero(); n.coeffs.len().saturating_sub(dd).max(1)];
    while let Some(k) = rem.degree() {
        if k < dd {
            break;
        }
        let shift = k - dd;
        let c = ctx.div(&rem.coeffs[k], &ctx.frobenius(lead, s * shift as i64)).unwrap();
        let t = LinPoly::monomial(ctx, d.s, shift, c.clone());
        let td = ore_compose(ctx, &t, d)?;
        rem = rem.sub(ctx, &td);
        q[shift] = ctx.add(&q[shift], &c);
    }
    Ok((LinPoly::new(n.s, q), rem))
}

/// An F_p0-subspace of a field, given by a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSpace {
    pub basis: Vec<FFElem>,
}

impl KernelSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn span_builder(&self, ctx: &FieldCtx) -> SpanBuilder {
        let mut sb = SpanBuilder::new(ctx.p0(), ctx.degree());
        for b in &self.basis {
            sb.insert(b.coeffs());
        }
        sb
    }

    pub fn contains(&self, ctx: &FieldCtx, x: &FFElem) -> bool {
        self.span_builder(ctx).contains(x.coeffs())
    }

    /// All elements, enumerated by coefficient tuples.
    pub fn elements(&self, ctx: &FieldCtx) -> Vec<FFElem> {
        let mut out = vec![ctx.zero()];
        for b in &self.basis {
            let mut next = Vec::with_capacity(out.len() * ctx.p0() as usize);
            for c in 0..ctx.p0() {
                let cb = ctx.scale(b, c);
                next.extend(out.iter().map(|x| ctx.add(x, &cb)));
            }
            out = next;
        }
        out
    }

    pub fn is_fp_stable(&self, ctx: &FieldCtx, s: u32) -> Result<bool, LinError> {
        let gamma = prime_subfield_generator(ctx, s)?;
        let sb = self.span_builder(ctx);
        Ok(self.basis.iter().all(|b| sb.contains(ctx.mul(&gamma, b).coeffs())))
    }

    /// A basis over F_p (`p = p0^s`), greedily chosen from the stored F_p0-basis.
    pub fn fp_basis(&self, ctx: &FieldCtx, s: u32) -> Result<Vec<FFElem>, LinError> {
        if !self.is_fp_stable(ctx, s)? {
            return Err(LinError::NotFpStable);
        }
        let gamma = prime_subfield_generator(ctx, s)?;
        let mut sb = SpanBuilder::new(ctx.p0(), ctx.degree());
        let mut out = Vec::new();
        for b in &self.basis {
            if sb.contains(b.coeffs()) {
                continue;
            }
            out.push(b.clone());
            let mut cur = b.clone();
            for _ in 0..s {
                sb.insert(cur.coeffs());
                cur = ctx.mul(&cur, &gamma);
            }
        }
        Ok(out)
    }
}

/// A primitive element of F_p inside the ambient field; `{1, γ, ..., γ^{s-1}}` spans F_p over F_p0.
pub fn prime_subfield_generator(ctx: &FieldCtx, s: u32) -> Result<FFElem, LinError> {
    if ctx.degree() % s as usize != 0 {
        return Err(LinError::NoPrimeSubfield { s, m: ctx.degree() });
    }
    Ok(ctx.subfield_generator(s as usize)?)
}

/// F_p0-span of the F_p-multiples of the given vectors.
pub fn fp_span(ctx: &FieldCtx, s: u32, vs: &[FFElem]) -> Result<KernelSpace, LinError> {
    let gamma = prime_subfield_generator(ctx, s)?;
    let mut sb = SpanBuilder::new(ctx.p0(), ctx.degree());
    let mut basis = Vec::new();
    for v in vs {
        let mut cur = v.clone();
        for _ in 0..s {
            if sb.insert(cur.coeffs()) {
                basis.push(cur.clone());
            }
            cur = ctx.mul(&cur, &gamma);
        }
    }
    Ok(KernelSpace { basis })
}

/// Kernel of `L` on the whole field.
pub fn kernel(ctx: &FieldCtx, l: &LinPoly) -> KernelSpace {
    let ns = l.matrix(ctx).nullspace();
    KernelSpace { basis: ns.into_iter().map(|v| ctx.from_coeffs(v).unwrap()).collect() }
}

/// Kernel of `L` restricted to the subfield of degree `d`.
pub fn kernel_in_subfield(ctx: &FieldCtx, l: &LinPoly, d: usize) -> Result<KernelSpace, LinError> {
    let sub = ctx.subfield_basis(d)?;
    let cols: Vec<Vec<u64>> = sub.iter().map(|b| l.eval(ctx, b).into_coeffs()).collect();
    let mat = FpMatrix::from_columns(ctx.p0(), ctx.degree(), &cols);
    let basis = mat
        .nullspace()
        .into_iter()
        .map(|c| {
            c.iter().zip(&sub).fold(ctx.zero(), |acc, (&k, b)| ctx.add(&acc, &ctx.scale(b, k)))
        })
        .collect();
    Ok(KernelSpace { basis })
}

/// Smallest `m` (a multiple of the coefficient-field degree) such that all roots of `L`
/// lie in F_{p0^m}. Works in the coefficient field only: the roots are fixed by
/// `x -> x^{p0^m}` exactly when the right remainder of `x^{p0^m}` modulo `L` is `x`.
pub fn splitting_degree(ctx: &FieldCtx, l: &LinPoly, bound: usize) -> Result<usize, LinError> {
    if l.is_zero() {
        return Err(LinError::ZeroPolynomial);
    }
    if !l.is_separable() {
        return Err(LinError::NotSeparable);
    }
    let c = l.coeffs.iter().map(|a| ctx.element_degree(a)).fold(1usize, |acc, d| crate::arith::lcm(acc as u64, d as u64) as usize);
    let lp = l.to_prime_step(ctx);
    let dd = lp.degree().unwrap();
    if dd == 0 {
        return Ok(c);
    }
    let lead_inv = ctx.inv(lp.leading().unwrap()).unwrap();
    // rem holds the remainder of x^{p0^k}, as a coefficient vector of length dd
    let mut rem = vec![ctx.zero(); dd];
    rem[0] = ctx.one();
    let mut target = vec![ctx.zero(); dd];
    target[0] = ctx.one();
    for k in 1..=bound {
        // multiply by x^{p0} on the left: coefficients go to the p0-th power and shift up
        let mut next = vec![ctx.zero(); dd + 1];
        for (i, a) in rem.iter().enumerate() {
            next[i + 1] = ctx.frobenius(a, 1);
        }
        let top = next.pop().unwrap();
        if !top.is_zero() {
            let t = ctx.mul(&top, &lead_inv);
            for i in 0..dd {
                next[i] = ctx.sub(&next[i], &ctx.mul(&t, &lp.coeffs[i]));
            }
        }
        rem = next;
        if k % c == 0 && rem == target {
            return Ok(k);
        }
    }
    Err(LinError::BoundExceeded { bound })
}

/// The monic additive polynomial whose kernel is the F_p-stable subspace `w`.
pub fn subspace_poly(ctx: &FieldCtx, w: &KernelSpace, s: u32) -> Result<LinPoly, LinError> {
    let fp = w.fp_basis(ctx, s)?;
    let p = (ctx.p0() as u128).pow(s);
    let mut poly = LinPoly::x(ctx, s);
    for b in &fp {
        let v = poly.eval(ctx, b);
        let c = ctx.neg(&ctx.pow(&v, p - 1));
        let step = LinPoly::new(s, vec![c, ctx.one()]);
        poly = ore_compose(ctx, &step, &poly)?;
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(ctx: &FieldCtx, v: &[i64]) -> Vec<FFElem> {
        v.iter().map(|&c| ctx.from_int(c)).collect()
    }

    #[test]
    fn e_r_of_2x3_plus_x() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let r = LinPoly::new(1, f(&ctx, &[1, 2]));
        assert!(r.eval(&ctx, &ctx.one()).is_zero());
        let e = e_r(&ctx, &r).unwrap();
        assert_eq!(e, LinPoly::new(1, f(&ctx, &[2, 2, 2])));
        let r0 = LinPoly::new(1, f(&ctx, &[1]));
        assert_eq!(e_r(&ctx, &r0).unwrap(), LinPoly::new(1, f(&ctx, &[2])));
    }

    #[test]
    fn splitting_degrees() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let e = e_r(&f3, &LinPoly::new(1, f(&f3, &[1, 2]))).unwrap();
        assert_eq!(splitting_degree(&f3, &e, 64).unwrap(), 3);
        let f7 = FieldCtx::new(7, 1).unwrap();
        let e7 = e_r(&f7, &LinPoly::new(1, f(&f7, &[1, 2]))).unwrap();
        assert_eq!(splitting_degree(&f7, &e7, 64).unwrap(), 3);
        let f9 = FieldCtx::new(3, 2).unwrap();
        let xq = LinPoly::frobenius_minus_x(&f9, 1, 2);
        assert_eq!(splitting_degree(&f9, &xq, 64).unwrap(), 2);
    }

    #[test]
    fn kernels_of_e_r() {
        let f27 = FieldCtx::new(3, 3).unwrap();
        let e = e_r(&f27, &LinPoly::new(1, f(&f27, &[1, 2]))).unwrap();
        assert_eq!(kernel(&f27, &e).dim(), 2);
        let f3 = FieldCtx::new(3, 1).unwrap();
        let e3 = e_r(&f3, &LinPoly::new(1, f(&f3, &[1, 2]))).unwrap();
        // E_R = 2(x^9 + x^3 + x) is 6x = 0 on F_3
        assert_eq!(kernel(&f3, &e3).dim(), 1);
        assert_eq!(kernel_in_subfield(&f27, &e, 1).unwrap().dim(), 1);
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert_eq!(kernel(&f9, &LinPoly::frobenius_minus_x(&f9, 1, 2)).dim(), 2);
    }

    #[test]
    fn subspace_polynomials() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        let w = KernelSpace { basis: vec![f9.one()] };
        assert_eq!(subspace_poly(&f9, &w, 1).unwrap(), LinPoly::frobenius_minus_x(&f9, 1, 1));
        let f625 = FieldCtx::new(5, 4).unwrap();
        let alpha = f625.nth_roots(&f625.from_int(-1), 4)[0].clone();
        let w = KernelSpace { basis: vec![alpha.clone()] };
        let sp = subspace_poly(&f625, &w, 1).unwrap();
        assert_eq!(sp, LinPoly::new(1, vec![f625.neg(&f625.pow(&alpha, 4)), f625.one()]));
        assert_eq!(sp, LinPoly::new(1, vec![f625.one(), f625.one()]));
    }

    #[test]
    fn ore_division_roundtrip() {
        let f = FieldCtx::new(5, 4).unwrap();
        let zeta = f.from_int(2);
        let fk = |k: u32| LinPoly::new(1, vec![f.neg(&f.pow(&zeta, k as u128)), f.one()]);
        let a = ore_compose(&f, &fk(1), &fk(2)).unwrap();
        let b = ore_compose(&f, &fk(2), &fk(1)).unwrap();
        assert_eq!(a, b);
        let n = LinPoly::frobenius_minus_x(&f, 1, 4);
        let (q, r) = ore_right_divide(&f, &n, &fk(1)).unwrap();
        assert!(r.is_zero());
        assert_eq!(ore_compose(&f, &q, &fk(1)).unwrap(), n);
        assert_eq!(ore_compose(&f, &fk(3), &LinPoly::x(&f, 1)).unwrap(), fk(3));
    }
}
