//! Exact arithmetic in Z[ζ_{p0}], additive characters and quadratic Gauss sums.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::field::{FFElem, FieldCtx, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycError {
    #[error("element does not lie in F_{{p0^{d}}}")]
    FieldMismatch { d: usize },
    #[error("field of size {q} exceeds the summation cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("f0 = {0} is odd")]
    OddF0(u32),
    #[error("mixed cyclotomic orders {0} and {1}")]
    MixedP0(u64, u64),
    #[error("the trivial character is not allowed")]
    ZeroLambda,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `sum c_i ζ^i` with `0 <= i < p0 - 1`, reduced modulo the p0-th cyclotomic polynomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p0: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p0: u64) -> Self {
        CycInt { p0, coeffs: vec![BigInt::zero(); (p0 - 1) as usize] }
    }

    pub fn one(p0: u64) -> Self {
        Self::from_int(p0, BigInt::one())
    }

    pub fn from_int(p0: u64, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p0);
        z.coeffs[0] = n.into();
        z
    }

    /// ζ^t for any integer exponent.
    pub fn zeta_pow(p0: u64, t: i64) -> Self {
        Self::from_full(p0, {
            let mut v = vec![BigInt::zero(); p0 as usize];
            v[t.rem_euclid(p0 as i64) as usize] = BigInt::one();
            v
        })
    }

    /// Reduces a length-p0 vector (coefficients of 1..ζ^{p0-1}) using ζ^{p0-1} = -(1 + ... + ζ^{p0-2}).
    fn from_full(p0: u64, mut v: Vec<BigInt>) -> Self {
        let top = v.pop().unwrap();
        if !top.is_zero() {
            for c in v.iter_mut() {
                *c -= &top;
            }
        }
        CycInt { p0, coeffs: v }
    }

    /// Builds from raw coefficients of 1, ζ, ..., reducing any length.
    pub fn from_coeffs(p0: u64, raw: &[BigInt]) -> Self {
        let mut full = vec![BigInt::zero(); p0 as usize];
        for (i, c) in raw.iter().enumerate() {
            full[i % p0 as usize] += c;
        }
        Self::from_full(p0, full)
    }

    pub fn p0(&self) -> u64 {
        self.p0
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Whether this element is a rational integer.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    fn full(&self) -> Vec<BigInt> {
        let mut v = self.coeffs.clone();
        v.push(BigInt::zero());
        v
    }

    /// Multiplication by ζ^t (a rotation before reduction).
    pub fn mul_zeta_pow(&self, t: i64) -> Self {
        let p = self.p0 as usize;
        let t = t.rem_euclid(self.p0 as i64) as usize;
        let src = self.full();
        let mut out = vec![BigInt::zero(); p];
        for (i, c) in src.into_iter().enumerate() {
            out[(i + t) % p] = c;
        }
        Self::from_full(self.p0, out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt { p0: self.p0, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut r = Self::one(self.p0);
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = &r * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        r
    }

    /// Image under the Galois automorphism ζ -> ζ^a (a prime to p0).
    pub fn galois(&self, a: i64) -> Self {
        let p = self.p0 as usize;
        let mut out = vec![BigInt::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = ((i as i64 * a).rem_euclid(self.p0 as i64)) as usize;
            out[j] += c;
        }
        Self::from_full(self.p0, out)
    }

    /// Complex conjugate, ζ -> ζ^{-1}.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// If this element equals ±ζ^t, returns `(sign, t)`.
    pub fn as_signed_root_of_unity(&self) -> Option<(i8, u64)> {
        for t in 0..self.p0 {
            let z = Self::zeta_pow(self.p0, t as i64);
            if *self == z {
                return Some((1, t));
            }
            if *self == -&z {
                return Some((-1, t));
            }
        }
        None
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.p0, other.p0, "mixed cyclotomic orders");
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "z".to_string(),
                (_, true) => format!("z^{}", i),
                (1, false) => format!("{}*z", mag),
                _ => format!("{}*z^{}", mag, i),
            };
            write!(f, "{}{}", sign, body)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, o: &CycInt) -> CycInt {
        self.check_same(o);
        CycInt { p0: self.p0, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, o: &CycInt) -> CycInt {
        self.check_same(o);
        CycInt { p0: self.p0, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { p0: self.p0, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, o: &CycInt) -> CycInt {
        self.check_same(o);
        let p = self.p0 as usize;
        let mut out = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[(i + j) % p] += a * b;
            }
        }
        CycInt::from_full(self.p0, out)
    }
}

#[derive(Serialize, Deserialize)]
struct CycIntRepr {
    p0: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycIntRepr { p0: self.p0, coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CycIntRepr::deserialize(d)?;
        let coeffs: Result<Vec<BigInt>, _> = r.coeffs.iter().map(|c| c.parse::<BigInt>()).collect();
        let coeffs = coeffs.map_err(serde::de::Error::custom)?;
        if r.p0 < 2 || coeffs.len() != (r.p0 - 1) as usize {
            return Err(serde::de::Error::custom("coefficient count must be p0 - 1"));
        }
        Ok(CycInt { p0: r.p0, coeffs })
    }
}

/// Nontrivial additive character ψ(x) = ζ^{Tr_{p/p0}(λx)} of F_p, composed up to the
/// subfield F_q of degree `q_degree` (over F_p0) via the trace.
#[derive(Clone, Debug)]
pub struct CharSpec {
    pub lambda: FFElem,
    pub q_degree: usize,
}

impl CharSpec {
    pub fn new(ctx: &FieldCtx, lambda: FFElem, q_degree: usize) -> Result<Self, CycError> {
        if lambda.is_zero() {
            return Err(CycError::ZeroLambda);
        }
        ctx.divides_degree(q_degree)?;
        if !ctx.in_subfield(&lambda, q_degree) {
            return Err(CycError::FieldMismatch { d: q_degree });
        }
        Ok(CharSpec { lambda, q_degree })
    }

    /// Exponent `t` with ψ_q(x) = ζ^t.
    pub fn exponent(&self, ctx: &FieldCtx, x: &FFElem) -> Result<u64, CycError> {
        if !ctx.in_subfield(x, self.q_degree) {
            return Err(CycError::FieldMismatch { d: self.q_degree });
        }
        Ok(ctx.subfield_trace_to_prime(&ctx.mul(&self.lambda, x), self.q_degree)?)
    }
}

pub fn psi_q_eval(ctx: &FieldCtx, ch: &CharSpec, x: &FFElem) -> Result<CycInt, CycError> {
    Ok(CycInt::zeta_pow(ctx.p0(), ch.exponent(ctx, x)? as i64))
}

/// Default bound on |F_q| for direct Gauss-sum summation.
pub const GAUSS_DIRECT_CAP: u64 = 2_000_000;

/// G(ψ_q) = -sum_{x in F_q} ψ_q(x^2) by direct summation.
pub fn gauss_sum(ctx: &FieldCtx, ch: &CharSpec, cap: u64) -> Result<CycInt, CycError> {
    let p0 = ctx.p0();
    let q = p0.pow(ch.q_degree as u32);
    if q > cap {
        return Err(CycError::FieldTooLarge { q, cap });
    }
    let mut counts = vec![0u64; p0 as usize];
    let mut err = None;
    ctx.for_each_in_subfield(ch.q_degree, |x| match ch.exponent(ctx, &ctx.square(x)) {
        Ok(t) => counts[t as usize] += 1,
        Err(e) => err = Some(e),
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let raw: Vec<BigInt> = counts.iter().map(|&c| -BigInt::from(c)).collect();
    Ok(CycInt::from_coeffs(p0, &raw))
}

/// Gauss sum over the prime field with λ = 1: -sum_{x in F_p0} ζ^{x^2}.
pub fn prime_gauss_sum(p0: u64) -> CycInt {
    let mut counts = vec![BigInt::zero(); p0 as usize];
    for x in 0..p0 {
        counts[(x * x % p0) as usize] -= 1;
    }
    CycInt::from_coeffs(p0, &counts)
}

/// G(ψ_q) through the lifting relation G(ψ_q) = (λ/q) · G(ψ_{p0})^{f0}; no enumeration of F_q.
pub fn gauss_sum_lifted(ctx: &FieldCtx, ch: &CharSpec) -> Result<CycInt, CycError> {
    let sign = ctx.legendre_in(&ch.lambda, ch.q_degree)?;
    let g = prime_gauss_sum(ctx.p0()).pow(ch.q_degree as u64);
    Ok(if sign == 1 { g } else { -&g })
}

/// (-1/q)·q with q = p0^f0; the square of every quadratic Gauss sum over F_q.
pub fn gauss_square(p0: u64, f0: u32) -> BigInt {
    let q = BigInt::from(p0).pow(f0);
    let sign_odd = (f0 as u64 * (p0 - 1) / 2) % 2 == 1;
    if sign_odd {
        -q
    } else {
        q
    }
}

/// (-1)^{f0 (p0-1)/4} p0^{f0/2} for even f0.
pub fn hasse_davenport_value(p0: u64, f0: u32) -> Result<BigInt, CycError> {
    if f0 % 2 == 1 {
        return Err(CycError::OddF0(f0));
    }
    let root = BigInt::from(p0).pow(f0 / 2);
    let e = f0 as u64 * (p0 - 1) / 4;
    Ok(if e % 2 == 1 { -root } else { root })
}

/// Power sum Σ τ^k over a list sharing the cyclotomic order `p0`.
pub fn cyc_pow_sum(p0: u64, taus: &[CycInt], k: u64) -> Result<CycInt, CycError> {
    let mut acc = CycInt::zero(p0);
    for t in taus {
        if t.p0() != p0 {
            return Err(CycError::MixedP0(p0, t.p0()));
        }
        acc = &acc + &t.pow(k);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_roots_of_unity() {
        let z = CycInt::zeta_pow(3, 1);
        let z2 = CycInt::zeta_pow(3, 2);
        let s = &(&z + &z2) + &CycInt::one(3);
        assert!(s.is_zero());
        assert_eq!(z.pow(3), CycInt::one(3));
        assert_eq!(cyc_pow_sum(3, &[z.clone(), z2, CycInt::one(3)], 1).unwrap(), CycInt::zero(3));
        assert_eq!(cyc_pow_sum(5, &[], 4).unwrap(), CycInt::zero(5));
        assert_eq!(z.mul_zeta_pow(1), CycInt::zeta_pow(3, 2));
        assert_eq!(z.as_signed_root_of_unity(), Some((1, 1)));
        assert!(matches!(cyc_pow_sum(3, &[CycInt::one(5)], 1), Err(CycError::MixedP0(3, 5))));
    }

    #[test]
    fn gauss_sum_over_f3() {
        let f = FieldCtx::new(3, 1).unwrap();
        let ch = CharSpec::new(&f, f.one(), 1).unwrap();
        let g = gauss_sum(&f, &ch, GAUSS_DIRECT_CAP).unwrap();
        // -(1 + 2ζ)
        assert_eq!(g, CycInt::from_coeffs(3, &[BigInt::from(-1), BigInt::from(-2)]));
        assert_eq!((&g * &g).as_integer(), Some(BigInt::from(-3)));
        assert_eq!(psi_q_eval(&f, &ch, &f.one()).unwrap(), CycInt::zeta_pow(3, 1));
        assert_eq!(psi_q_eval(&f, &ch, &f.zero()).unwrap(), CycInt::one(3));
    }

    #[test]
    fn gauss_sum_over_f9() {
        let f = FieldCtx::new(3, 2).unwrap();
        let ch = CharSpec::new(&f, f.one(), 2).unwrap();
        assert_eq!(psi_q_eval(&f, &ch, &f.one()).unwrap(), CycInt::zeta_pow(3, 2));
        let g = gauss_sum(&f, &ch, GAUSS_DIRECT_CAP).unwrap();
        assert_eq!(g.as_integer(), Some(BigInt::from(-3)));
        assert_eq!(gauss_sum_lifted(&f, &ch).unwrap(), g);
    }

    #[test]
    fn lifted_values() {
        assert_eq!(hasse_davenport_value(5, 2).unwrap(), BigInt::from(5));
        assert_eq!(hasse_davenport_value(3, 2).unwrap(), BigInt::from(-3));
        assert_eq!(hasse_davenport_value(7, 4).unwrap(), BigInt::from(49));
        assert_eq!(hasse_davenport_value(3, 3), Err(CycError::OddF0(3)));
        assert_eq!(gauss_square(5, 1), BigInt::from(5));
        assert_eq!(gauss_square(3, 1), BigInt::from(-3));
        assert_eq!(gauss_square(7, 2), BigInt::from(49));
    }

    #[test]
    fn serde_roundtrip() {
        let g = prime_gauss_sum(7).pow(5);
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains("\"p0\":7"));
        let back: CycInt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
