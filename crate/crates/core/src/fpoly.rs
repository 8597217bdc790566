//! Dense univariate polynomials with coefficients in a [`FieldCtx`], low degree first.
//! Only what root finding needs.

use crate::field::{FFElem, FieldCtx};

pub type Poly = Vec<FFElem>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last().map_or(false, |c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn degree(a: &Poly) -> Option<usize> {
    let t = a.iter().rposition(|c| !c.is_zero())?;
    Some(t)
}

pub fn mul(f: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(out)
}

pub fn sub(f: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = f.zero();
    trim((0..n).map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(f: &FieldCtx, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    let db = b.len() - 1;
    let inv = f.inv(&b[db]).expect("nonzero divisor");
    let mut r = trim(a.clone());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1;
        let c = f.mul(&r[k], &inv);
        for j in 0..=db {
            r[k - db + j] = f.sub(&r[k - db + j], &f.mul(&c, &b[j]));
        }
        q[k - db] = c;
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(f: &FieldCtx, a: &Poly) -> Poly {
    let a = trim(a.clone());
    match a.last() {
        None => a,
        Some(lc) => {
            let inv = f.inv(lc).unwrap();
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

pub fn gcd(f: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let mut a = trim(a.clone());
    let mut b = trim(b.clone());
    while !b.is_empty() {
        let (_, r) = divrem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn powmod(f: &FieldCtx, base: &Poly, mut e: u128, m: &Poly) -> Poly {
    let mut r = vec![f.one()];
    let mut b = divrem(f, base, m).1;
    while e > 0 {
        if e & 1 == 1 {
            r = divrem(f, &mul(f, &r, &b), m).1;
        }
        e >>= 1;
        if e > 0 {
            b = divrem(f, &mul(f, &b, &b), m).1;
        }
    }
    r
}

pub fn eval(f: &FieldCtx, a: &Poly, x: &FFElem) -> FFElem {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

/// `x^{|F|}` modulo `m`, by m-fold p0-th powering.
fn x_pow_field_size(f: &FieldCtx, m: &Poly) -> Poly {
    let mut h = vec![f.zero(), f.one()];
    for _ in 0..f.degree() {
        h = powmod(f, &h, f.p0() as u128, m);
    }
    h
}

fn split(f: &FieldCtx, g: &Poly, out: &mut Vec<FFElem>) {
    let g = monic(f, g);
    let d = match degree(&g) {
        None | Some(0) => return,
        Some(d) => d,
    };
    if d == 1 {
        out.push(f.neg(&g[0]));
        return;
    }
    let mut k = 0u64;
    loop {
        let delta = f.from_index(k % f.size());
        k += 1;
        let h = if f.p0() == 2 {
            // trace polynomial sum_i (delta x)^{2^i}
            let lin = vec![f.zero(), delta];
            let mut acc: Poly = Vec::new();
            let mut cur = divrem(f, &lin, &g).1;
            for _ in 0..f.degree() {
                acc = trim(add(f, &acc, &cur));
                cur = divrem(f, &mul(f, &cur, &cur), &g).1;
            }
            acc
        } else {
            let lin = vec![delta, f.one()];
            let e = (f.size() as u128 - 1) / 2;
            sub(f, &powmod(f, &lin, e, &g), &vec![f.one()])
        };
        let c = gcd(f, &g, &h);
        let dc = degree(&c).unwrap_or(0);
        if dc > 0 && dc < d {
            let (q, _) = divrem(f, &g, &c);
            split(f, &c, out);
            split(f, &q, out);
            return;
        }
    }
}

fn add(f: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = f.zero();
    (0..n).map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect()
}

/// Distinct roots of `a` in the field, sorted by codec index.
pub fn roots(f: &FieldCtx, a: &Poly) -> Vec<FFElem> {
    let a = trim(a.clone());
    if degree(&a).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let xq = x_pow_field_size(f, &a);
    let g = gcd(f, &a, &sub(f, &xq, &vec![f.zero(), f.one()]));
    let mut out = Vec::new();
    split(f, &g, &mut out);
    out.sort_by_key(|r| f.to_index(r));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_cyclotomic_factor() {
        let f = FieldCtx::new(3, 4).unwrap();
        // z^4 + z^2 - 1 splits over F_81
        let p: Poly = vec![f.from_int(-1), f.zero(), f.one(), f.zero(), f.one()];
        let r = roots(&f, &p);
        assert_eq!(r.len(), 4);
        for z in &r {
            assert!(eval(&f, &p, z).is_zero());
            assert_eq!(f.pow(z, 8), f.from_int(-1));
        }
    }

    #[test]
    fn roots_in_characteristic_two() {
        let f = FieldCtx::new(2, 4).unwrap();
        let p: Poly = vec![f.zero(), f.one(), f.zero(), f.zero(), f.zero(), f.zero(), f.zero(), f.zero(), f.zero(), f.zero(), f.zero(), f.zero(), f.zero(), f.zero(), f.zero(), f.zero(), f.one()];
        // x^16 + x vanishes on all of F_16
        assert_eq!(roots(&f, &p).len(), 16);
    }
}
