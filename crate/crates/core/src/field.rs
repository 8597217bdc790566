//! Finite fields F_{p0^m} with dense coefficient-vector elements.
//!
//! Elements are plain values; every operation goes through the owning [`FieldCtx`].

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::linalg::FpMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("p0 = {0} is not prime")]
    NonPrimeP0(u64),
    #[error("field of size {p0}^{m} exceeds the configured cap")]
    DegreeTooLarge { p0: u64, m: usize },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("{d} does not divide the field degree {m}")]
    NotADivisor { d: usize, m: usize },
    #[error("zero input")]
    ZeroInput,
    #[error("quadratic symbol requires odd characteristic")]
    EvenCharacteristic,
    #[error("element does not lie in the subfield of degree {d}")]
    NotInSubfield { d: usize },
    #[error("element does not belong to this field (expected {expected} coordinates, got {got})")]
    FieldMismatch { expected: usize, got: usize },
    #[error("no embedding of F_{p0}^{d} into F_{p0}^{m}")]
    NoEmbedding { p0: u64, d: usize, m: usize },
}

/// Field elements as coordinate vectors in the power basis of the modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FFElem(Vec<u64>);

impl FFElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
    pub fn into_coeffs(self) -> Vec<u64> {
        self.0
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// Serializable description of a field: `{p0, m, modulus: [c0..cm]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p0: u64,
    pub m: usize,
    pub modulus: Vec<u64>,
}

/// Largest field size accepted for arithmetic.
pub const MAX_FIELD_SIZE: u64 = 1 << 62;

#[derive(Clone, Debug)]
pub struct FieldCtx {
    p0: u64,
    m: usize,
    size: u64,
    modulus: Vec<u64>,
    // x^{m+i} mod modulus for i < m-1
    red: Vec<Vec<u64>>,
    frob: Vec<FpMatrix>,
    trace_vec: Vec<u64>,
    generator: FFElem,
    order_factors: Vec<(u64, u32)>,
}

// ---- polynomials over F_p0 as coefficient vectors, low degree first ----

fn ptrim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + arith::mulmod(x, y, p)) % p;
        }
    }
    ptrim(out)
}

fn prem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = ptrim(a.to_vec());
    let df = f.len() - 1;
    let inv = arith::invmod(f[df], p).unwrap();
    while r.len() > df {
        let k = r.len() - 1;
        let c = arith::mulmod(r[k], inv, p);
        for j in 0..=df {
            let idx = k - df + j;
            r[idx] = (r[idx] + p - arith::mulmod(c, f[j], p)) % p;
        }
        r = ptrim(r);
    }
    r
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = ptrim(a.to_vec());
    let mut b = ptrim(b.to_vec());
    while !b.is_empty() {
        let r = prem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn ppowmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = prem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            r = prem(&pmul(&r, &b, p), f, p);
        }
        b = prem(&pmul(&b, &b, p), f, p);
        e >>= 1;
    }
    r
}

fn psub_x(a: &[u64], p: u64) -> Vec<u64> {
    let mut v = a.to_vec();
    if v.len() < 2 {
        v.resize(2, 0);
    }
    v[1] = (v[1] + p - 1) % p;
    ptrim(v)
}

/// Rabin irreducibility test for a monic polynomial of degree m over F_p.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    // h[k] = x^{p^k} mod f
    let mut h = vec![vec![0u64, 1]];
    for k in 1..=m {
        let next = ppowmod(&h[k - 1], p, f, p);
        h.push(next);
    }
    if ptrim(psub_x(&h[m], p)).iter().any(|&c| c != 0) {
        return false;
    }
    for (l, _) in arith::factor(m as u64) {
        let d = m / l as usize;
        let g = pgcd(f, &psub_x(&h[d], p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FieldCtx {
    /// Builds F_{p0^m} with the lexicographically smallest monic irreducible modulus,
    /// comparing coefficient lists `[c0, c1, ..., c_{m-1}]` from `c0` on.
    pub fn new(p0: u64, m: usize) -> Result<Self, FieldError> {
        Self::with_cap(p0, m, MAX_FIELD_SIZE)
    }

    pub fn with_cap(p0: u64, m: usize, cap: u64) -> Result<Self, FieldError> {
        if !arith::is_prime(p0) || p0 >= 1 << 32 {
            return Err(FieldError::NonPrimeP0(p0));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let size = match p0.checked_pow(m as u32) {
            Some(s) if s <= cap.min(MAX_FIELD_SIZE) => s,
            _ => return Err(FieldError::DegreeTooLarge { p0, m }),
        };
        let modulus = Self::find_modulus(p0, m);
        let mut ctx = FieldCtx {
            p0,
            m,
            size,
            modulus,
            red: Vec::new(),
            frob: Vec::new(),
            trace_vec: Vec::new(),
            generator: FFElem(vec![0; m]),
            order_factors: arith::factor(size - 1),
        };
        ctx.red = (0..m.saturating_sub(1))
            .map(|i| {
                let mut mono = vec![0u64; m + i + 1];
                mono[m + i] = 1;
                let mut r = prem(&mono, &ctx.modulus, p0);
                r.resize(m, 0);
                r
            })
            .collect();
        ctx.build_frobenius();
        ctx.trace_vec = (0..m)
            .map(|j| {
                let mut e = vec![0u64; m];
                e[j] = 1;
                let t = ctx.trace_to(&FFElem(e), 1).expect("1 divides m");
                debug_assert!(t.0[1..].iter().all(|&c| c == 0));
                t.0[0]
            })
            .collect();
        ctx.generator = ctx.find_generator();
        Ok(ctx)
    }

    fn find_modulus(p0: u64, m: usize) -> Vec<u64> {
        let total = p0.pow(m as u32);
        // a zero constant term means x divides the candidate
        let start = if m > 1 { total / p0 } else { 0 };
        for idx in start..total {
            // c0 is the most significant digit of idx
            let mut digits = vec![0u64; m];
            let mut t = idx;
            for j in (0..m).rev() {
                digits[j] = t % p0;
                t /= p0;
            }
            let mut f = digits;
            f.push(1);
            if is_irreducible(&f, p0) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn build_frobenius(&mut self) {
        let m = self.m;
        let p = self.p0;
        let xp = self.pow(&self.x_elem(), p as u128);
        let mut cols = Vec::with_capacity(m);
        let mut cur = self.one();
        for _ in 0..m {
            cols.push(cur.0.clone());
            cur = self.mul(&cur, &xp);
        }
        let f1 = FpMatrix::from_columns(p, m, &cols);
        let mut frob = vec![FpMatrix::identity(p, m)];
        for k in 1..m {
            let next = f1.mul(&frob[k - 1]);
            frob.push(next);
        }
        self.frob = frob;
    }

    fn find_generator(&self) -> FFElem {
        if self.size == 2 {
            return self.one();
        }
        for idx in 1..self.size {
            let g = self.from_index(idx);
            if self.has_full_order(&g) {
                return g;
            }
        }
        unreachable!("multiplicative group is cyclic")
    }

    fn has_full_order(&self, g: &FFElem) -> bool {
        let n = self.size - 1;
        let one = self.one();
        self.order_factors.iter().all(|(l, _)| self.pow(g, (n / l) as u128) != one)
    }

    pub fn p0(&self) -> u64 {
        self.p0
    }
    pub fn degree(&self) -> usize {
        self.m
    }
    pub fn size(&self) -> u64 {
        self.size
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn generator(&self) -> &FFElem {
        &self.generator
    }
    pub fn order_factors(&self) -> &[(u64, u32)] {
        &self.order_factors
    }
    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p0: self.p0, m: self.m, modulus: self.modulus.clone() }
    }
    pub fn same_field(&self, other: &FieldCtx) -> bool {
        self.p0 == other.p0 && self.modulus == other.modulus
    }

    // ---- construction of elements ----

    pub fn zero(&self) -> FFElem {
        FFElem(vec![0; self.m])
    }
    pub fn one(&self) -> FFElem {
        self.from_int(1)
    }
    /// The class of the polynomial variable (the modulus root).
    pub fn x_elem(&self) -> FFElem {
        if self.m == 1 {
            // x reduces to -c0
            return self.from_int(-(self.modulus[0] as i64));
        }
        let mut v = vec![0; self.m];
        v[1] = 1;
        FFElem(v)
    }
    pub fn from_int(&self, a: i64) -> FFElem {
        let mut v = vec![0u64; self.m];
        v[0] = a.rem_euclid(self.p0 as i64) as u64;
        FFElem(v)
    }
    pub fn from_coeffs(&self, c: Vec<u64>) -> Result<FFElem, FieldError> {
        if c.len() > self.m {
            if c[self.m..].iter().any(|&x| x % self.p0 != 0) {
                return Err(FieldError::FieldMismatch { expected: self.m, got: c.len() });
            }
        }
        let mut v: Vec<u64> = c.into_iter().take(self.m).map(|x| x % self.p0).collect();
        v.resize(self.m, 0);
        Ok(FFElem(v))
    }
    pub fn check(&self, x: &FFElem) -> Result<(), FieldError> {
        if x.0.len() != self.m || x.0.iter().any(|&c| c >= self.p0) {
            return Err(FieldError::FieldMismatch { expected: self.m, got: x.0.len() });
        }
        Ok(())
    }
    /// Codec: `index = sum c_i p0^i`.
    pub fn from_index(&self, mut idx: u64) -> FFElem {
        let mut v = vec![0u64; self.m];
        for c in v.iter_mut() {
            *c = idx % self.p0;
            idx /= self.p0;
        }
        FFElem(v)
    }
    pub fn to_index(&self, x: &FFElem) -> u64 {
        x.0.iter().rev().fold(0u64, |acc, &c| acc * self.p0 + c)
    }
    /// `g^k` for the fixed generator.
    pub fn gen_pow(&self, k: u64) -> FFElem {
        self.pow(&self.generator, k as u128)
    }

    // ---- arithmetic ----

    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let p = self.p0;
        FFElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % p).collect())
    }
    pub fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let p = self.p0;
        FFElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + p - y) % p).collect())
    }
    pub fn neg(&self, a: &FFElem) -> FFElem {
        let p = self.p0;
        FFElem(a.0.iter().map(|&x| (p - x) % p).collect())
    }
    pub fn scale(&self, a: &FFElem, c: u64) -> FFElem {
        let p = self.p0;
        let c = c % p;
        FFElem(a.0.iter().map(|&x| arith::mulmod(x, c, p)).collect())
    }
    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let mut out = vec![0u64; self.m];
        let mut scratch = Vec::new();
        self.mul_slices(&a.0, &b.0, &mut out, &mut scratch);
        FFElem(out)
    }
    pub fn square(&self, a: &FFElem) -> FFElem {
        self.mul(a, a)
    }

    /// Allocation-free product for hot loops; `scratch` is resized as needed.
    pub fn mul_slices(&self, a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut Vec<u64>) {
        let m = self.m;
        let p = self.p0;
        scratch.clear();
        scratch.resize(2 * m - 1, 0);
        if p < (1 << 20) {
            for i in 0..m {
                let x = a[i];
                if x == 0 {
                    continue;
                }
                for j in 0..m {
                    scratch[i + j] += x * b[j];
                }
            }
            for v in scratch.iter_mut() {
                *v %= p;
            }
            for i in (m..2 * m - 1).rev() {
                let c = scratch[i];
                if c == 0 {
                    continue;
                }
                let row = &self.red[i - m];
                for j in 0..m {
                    scratch[j] += c * row[j];
                }
            }
            for j in 0..m {
                out[j] = scratch[j] % p;
            }
        } else {
            let mut acc = vec![0u128; 2 * m - 1];
            for i in 0..m {
                for j in 0..m {
                    acc[i + j] += a[i] as u128 * b[j] as u128;
                }
            }
            let mut red: Vec<u64> = acc.iter().map(|&v| (v % p as u128) as u64).collect();
            for i in (m..2 * m - 1).rev() {
                let c = red[i];
                for j in 0..m {
                    red[j] = (red[j] + arith::mulmod(c, self.red[i - m][j], p)) % p;
                }
            }
            out.copy_from_slice(&red[..m]);
        }
    }

    pub fn pow(&self, a: &FFElem, mut e: u128) -> FFElem {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    pub fn inv(&self, a: &FFElem) -> Option<FFElem> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, (self.size - 2) as u128))
    }

    pub fn div(&self, a: &FFElem, b: &FFElem) -> Option<FFElem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &FFElem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let one = self.one();
        let mut ord = self.size - 1;
        for &(l, _) in &self.order_factors {
            while ord % l == 0 && self.pow(a, (ord / l) as u128) == one {
                ord /= l;
            }
        }
        Some(ord)
    }

    /// `x^{p0^k}`, with `k` reduced mod m.
    pub fn frobenius(&self, x: &FFElem, k: i64) -> FFElem {
        let k = k.rem_euclid(self.m as i64) as usize;
        if k == 0 {
            return x.clone();
        }
        FFElem(self.frob[k].mul_vec(&x.0))
    }

    /// Matrix of `x -> x^{p0^k}` in the power basis.
    pub fn frobenius_matrix(&self, k: i64) -> &FpMatrix {
        &self.frob[k.rem_euclid(self.m as i64) as usize]
    }

    pub fn divides_degree(&self, d: usize) -> Result<(), FieldError> {
        if d == 0 || self.m % d != 0 {
            return Err(FieldError::NotADivisor { d, m: self.m });
        }
        Ok(())
    }

    /// Relative trace to the subfield of degree `d`: `sum_{i < m/d} x^{p0^{d i}}`.
    pub fn trace_to(&self, x: &FFElem, d: usize) -> Result<FFElem, FieldError> {
        self.divides_degree(d)?;
        let mut acc = self.zero();
        for i in 0..self.m / d {
            acc = self.add(&acc, &self.frobenius(x, (d * i) as i64));
        }
        Ok(acc)
    }

    /// Absolute trace to F_p0 as an integer in `[0, p0)`.
    pub fn trace_to_prime(&self, x: &FFElem) -> u64 {
        let p = self.p0;
        let mut acc: u128 = 0;
        for (c, t) in x.0.iter().zip(&self.trace_vec) {
            acc += *c as u128 * *t as u128;
        }
        (acc % p as u128) as u64
    }

    /// Linear functional coefficients of the absolute trace.
    pub fn trace_vector(&self) -> &[u64] {
        &self.trace_vec
    }

    /// Trace from the subfield of degree `d` (containing `x`) down to F_p0.
    pub fn subfield_trace_to_prime(&self, x: &FFElem, d: usize) -> Result<u64, FieldError> {
        self.divides_degree(d)?;
        if d == self.m {
            return Ok(self.trace_to_prime(x));
        }
        if !self.in_subfield(x, d) {
            return Err(FieldError::NotInSubfield { d });
        }
        let mut acc = self.zero();
        for i in 0..d {
            acc = self.add(&acc, &self.frobenius(x, i as i64));
        }
        debug_assert!(acc.0[1..].iter().all(|&c| c == 0));
        Ok(acc.0[0])
    }

    pub fn in_subfield(&self, x: &FFElem, d: usize) -> bool {
        self.m % d == 0 && self.frobenius(x, d as i64) == *x
    }

    /// Smallest subfield degree containing `x`.
    pub fn element_degree(&self, x: &FFElem) -> usize {
        (1..=self.m).find(|&d| self.m % d == 0 && self.in_subfield(x, d)).unwrap()
    }

    /// Quadratic symbol of `x` over the whole field.
    pub fn legendre(&self, x: &FFElem) -> Result<i8, FieldError> {
        self.legendre_in(x, self.m)
    }

    /// `x^{(p0^d - 1)/2}` as a sign, for `x` in the subfield of degree `d`.
    pub fn legendre_in(&self, x: &FFElem, d: usize) -> Result<i8, FieldError> {
        self.divides_degree(d)?;
        if self.p0 == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if x.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        if !self.in_subfield(x, d) {
            return Err(FieldError::NotInSubfield { d });
        }
        let e = (self.p0 as u128).pow(d as u32);
        let r = self.pow(x, (e - 1) / 2);
        if r == self.one() {
            Ok(1)
        } else {
            debug_assert_eq!(r, self.from_int(-1));
            Ok(-1)
        }
    }

    /// F_p0-basis of the subfield of degree `d`, from the fixed space of Frobenius^d.
    pub fn subfield_basis(&self, d: usize) -> Result<Vec<FFElem>, FieldError> {
        self.divides_degree(d)?;
        if d == self.m {
            return Ok((0..self.m)
                .map(|j| {
                    let mut v = vec![0; self.m];
                    v[j] = 1;
                    FFElem(v)
                })
                .collect());
        }
        let p = self.p0;
        let mut a = self.frob[d].clone();
        for i in 0..self.m {
            let v = (a.get(i, i) + p - 1) % p;
            a.set(i, i, v);
        }
        let ns = a.nullspace();
        debug_assert_eq!(ns.len(), d);
        Ok(ns.into_iter().map(FFElem).collect())
    }

    /// Calls `f` on every element of the subfield of degree `d`, in coordinate order.
    pub fn for_each_in_subfield<F: FnMut(&FFElem)>(&self, d: usize, mut f: F) -> Result<(), FieldError> {
        let basis = self.subfield_basis(d)?;
        let count = self.p0.pow(d as u32);
        let mut digits = vec![0u64; d];
        let mut cur = self.zero();
        for idx in 0..count {
            if idx > 0 {
                // odometer increment, updating `cur` incrementally
                let mut j = 0;
                loop {
                    digits[j] += 1;
                    cur = self.add(&cur, &basis[j]);
                    if digits[j] < self.p0 {
                        break;
                    }
                    digits[j] = 0;
                    j += 1;
                }
            }
            f(&cur);
        }
        Ok(())
    }

    /// Elements of the subfield of degree `d` as a vector.
    pub fn subfield_elements(&self, d: usize) -> Result<Vec<FFElem>, FieldError> {
        let mut out = Vec::new();
        self.for_each_in_subfield(d, |x| out.push(x.clone()))?;
        Ok(out)
    }

    /// Generator of the multiplicative group of the subfield of degree `d`.
    pub fn subfield_generator(&self, d: usize) -> Result<FFElem, FieldError> {
        self.divides_degree(d)?;
        let sub = self.p0.pow(d as u32) - 1;
        Ok(self.pow(&self.generator, ((self.size - 1) / sub) as u128))
    }

    /// Discrete logarithm base the generator, by baby-step giant-step.
    pub fn dlog(&self, x: &FFElem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let n = self.size - 1;
        let mstep = (n as f64).sqrt().ceil() as u64 + 1;
        let mut table = std::collections::HashMap::new();
        let mut cur = self.one();
        for j in 0..mstep {
            table.entry(cur.clone()).or_insert(j);
            cur = self.mul(&cur, &self.generator);
        }
        let ginv_m = self.inv(&self.pow(&self.generator, mstep as u128)).unwrap();
        let mut y = x.clone();
        for i in 0..=mstep {
            if let Some(&j) = table.get(&y) {
                return Some((i * mstep + j) % n);
            }
            y = self.mul(&y, &ginv_m);
        }
        None
    }

    /// All `y` with `y^k = x`, sorted by codec index.
    pub fn nth_roots(&self, x: &FFElem, k: u64) -> Vec<FFElem> {
        if x.is_zero() {
            return vec![self.zero()];
        }
        let n = self.size - 1;
        let t = match self.dlog(x) {
            Some(t) => t,
            None => return Vec::new(),
        };
        let g = arith::gcd(k % n, n);
        let g = if k % n == 0 { n } else { g };
        if t % g != 0 {
            return Vec::new();
        }
        let n_red = n / g;
        let k_red = (k / g) % n_red.max(1);
        let j0 = if n_red == 1 {
            0
        } else {
            arith::mulmod(t / g, arith::invmod(k_red, n_red).unwrap(), n_red)
        };
        let mut roots: Vec<FFElem> = (0..g).map(|i| self.gen_pow(j0 + i * n_red)).collect();
        roots.sort_by_key(|r| self.to_index(r));
        roots
    }
}

/// Realization of F_{p0^d} inside F_{p0^m} (d | m).
#[derive(Clone, Debug)]
pub struct SubfieldEmbed {
    pub d: usize,
    pub m: usize,
    /// Image of the source field's polynomial variable.
    pub root: FFElem,
    /// Image of the source field's fixed generator.
    pub generator_image: FFElem,
    powers: Vec<FFElem>,
}

impl SubfieldEmbed {
    /// Embedding sending the source variable to the smallest-index root of the source modulus.
    pub fn new(small: &FieldCtx, big: &FieldCtx) -> Result<Self, FieldError> {
        let (d, m) = (small.degree(), big.degree());
        if small.p0() != big.p0() || m % d != 0 {
            return Err(FieldError::NoEmbedding { p0: small.p0(), d, m });
        }
        let poly: Vec<FFElem> = small.modulus().iter().map(|&c| big.from_int(c as i64)).collect();
        let roots = crate::fpoly::roots(big, &poly);
        let root = roots.into_iter().next().ok_or(FieldError::NoEmbedding { p0: small.p0(), d, m })?;
        let mut powers = Vec::with_capacity(d);
        let mut cur = big.one();
        for _ in 0..d {
            powers.push(cur.clone());
            cur = big.mul(&cur, &root);
        }
        let mut emb = SubfieldEmbed { d, m, root, generator_image: big.zero(), powers };
        emb.generator_image = emb.map(big, small.generator());
        // spot-check the homomorphism property on a few products
        let mut a = small.one();
        for k in 1..6u64 {
            let b = small.from_index((k * 7 + 3) % small.size());
            let lhs = emb.map(big, &small.mul(&a, &b));
            let rhs = big.mul(&emb.map(big, &a), &emb.map(big, &b));
            assert_eq!(lhs, rhs, "embedding is not multiplicative");
            a = small.add(&a, small.generator());
        }
        Ok(emb)
    }

    pub fn map(&self, big: &FieldCtx, x: &FFElem) -> FFElem {
        let mut acc = big.zero();
        for (c, pw) in x.coeffs().iter().zip(&self.powers) {
            if *c != 0 {
                acc = big.add(&acc, &big.scale(pw, *c));
            }
        }
        acc
    }

    /// Inverse of [`map`](Self::map) on its image.
    pub fn pull_back(&self, small: &FieldCtx, big: &FieldCtx, y: &FFElem) -> Option<FFElem> {
        let cols: Vec<Vec<u64>> = self.powers.iter().map(|v| v.coeffs().to_vec()).collect();
        let mat = FpMatrix::from_columns(big.p0(), big.degree(), &cols);
        mat.solve(y.coeffs()).map(|c| small.from_coeffs(c).unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_convention() {
        let f = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.size(), 3);
        assert_eq!(f.generator(), &f.from_int(2));
    }

    #[test]
    fn generator_of_f81_has_order_80() {
        let f = FieldCtx::new(3, 4).unwrap();
        let g = f.generator().clone();
        assert_eq!(f.pow(&g, 80), f.one());
        for d in [1u128, 2, 4, 5, 8, 10, 16, 20, 40] {
            assert_ne!(f.pow(&g, d), f.one());
        }
        assert_eq!(f.order(&g), Some(80));
    }

    #[test]
    fn construction_is_deterministic() {
        let a = FieldCtx::new(5, 6).unwrap();
        let b = FieldCtx::new(5, 6).unwrap();
        assert_eq!(a.descriptor(), b.descriptor());
        assert_eq!(a.generator(), b.generator());
        assert_eq!(a.size(), 15625);
    }

    #[test]
    fn small_traces() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f9.trace_to(&f9.one(), 1).unwrap(), f9.from_int(2));
        let f81 = FieldCtx::new(3, 4).unwrap();
        assert_eq!(f81.trace_to(&f81.one(), 1).unwrap(), f81.one());
        assert!(matches!(f81.trace_to(&f81.one(), 3), Err(FieldError::NotADivisor { .. })));
    }

    #[test]
    fn absolute_trace_is_linear_and_onto() {
        let f = FieldCtx::new(3, 6).unwrap();
        let mut hits = [0usize; 3];
        for i in 0..f.size() {
            let x = f.from_index(i);
            let t = f.trace_to(&x, 1).unwrap();
            assert!(t.coeffs()[1..].iter().all(|&c| c == 0));
            assert_eq!(t.coeffs()[0], f.trace_to_prime(&x));
            hits[t.coeffs()[0] as usize] += 1;
        }
        assert_eq!(hits, [243, 243, 243]);
    }

    #[test]
    fn legendre_values() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f3.legendre(&f3.from_int(2)).unwrap(), -1);
        assert_eq!(f3.legendre(&f3.one()).unwrap(), 1);
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f9.legendre(&f9.from_int(2)).unwrap(), 1);
        assert_eq!(f9.legendre_in(&f9.from_int(2), 1).unwrap(), -1);
        assert_eq!(f9.legendre(&f9.zero()), Err(FieldError::ZeroInput));
        let f2 = FieldCtx::new(2, 3).unwrap();
        assert_eq!(f2.legendre(&f2.one()), Err(FieldError::EvenCharacteristic));
    }

    #[test]
    fn frobenius_composition() {
        let f = FieldCtx::new(3, 4).unwrap();
        let a = f.from_index(47);
        assert_eq!(f.frobenius(&a, 0), a);
        assert_eq!(f.frobenius(&a, 4), a);
        let thrice = f.frobenius(&f.frobenius(&f.frobenius(&a, 1), 1), 1);
        assert_eq!(thrice, f.frobenius(&a, 3));
        assert_eq!(f.frobenius(&a, 1), f.pow(&a, 3));
        assert_eq!(f.frobenius(&a, -1), f.frobenius(&a, 3));
    }

    #[test]
    fn subfields_and_embeddings() {
        let big = FieldCtx::new(3, 6).unwrap();
        for d in [1, 2, 3, 6] {
            let els = big.subfield_elements(d).unwrap();
            assert_eq!(els.len() as u64, 3u64.pow(d as u32));
            assert!(els.iter().all(|x| big.in_subfield(x, d)));
        }
        let small = FieldCtx::new(3, 2).unwrap();
        let emb = SubfieldEmbed::new(&small, &big).unwrap();
        let r = &emb.root;
        let val = small.modulus().iter().rev().fold(big.zero(), |acc, &c| {
            big.add(&big.mul(&acc, r), &big.from_int(c as i64))
        });
        assert!(val.is_zero());
        assert_eq!(big.order(&emb.generator_image), Some(8));
        for i in 0..9 {
            let x = small.from_index(i);
            let y = emb.map(&big, &x);
            assert_eq!(emb.pull_back(&small, &big, &y), Some(x));
        }
    }

    #[test]
    fn nth_roots_and_dlog() {
        let f = FieldCtx::new(5, 2).unwrap();
        let two = f.from_int(2);
        assert!(f.nth_roots(&two, 4).is_empty());
        let four = f.from_int(4);
        let roots = f.nth_roots(&four, 4);
        assert_eq!(roots.len(), 4);
        for r in &roots {
            assert_eq!(f.pow(r, 4), four);
        }
        assert_eq!(f.nth_roots(&two, 2).len(), 2);
        let g7 = f.gen_pow(7);
        assert_eq!(f.dlog(&g7), Some(7));
    }

    #[test]
    fn composite_trace_tower() {
        let f = FieldCtx::new(3, 6).unwrap();
        for i in [5u64, 77, 400, 728] {
            let x = f.from_index(i);
            let mid = f.trace_to(&x, 2).unwrap();
            // trace from F_9 to F_3 computed inside the big field
            let via_sub = f.add(&mid, &f.frobenius(&mid, 1));
            assert_eq!(via_sub, f.trace_to(&x, 1).unwrap());
            assert_eq!(f.subfield_trace_to_prime(&mid, 2).unwrap(), f.trace_to_prime(&x));
        }
    }
}
