//! Machine-integer number theory: primality, factoring, orders.

use num_integer::Integer;

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Modular inverse for coprime `a`, `m`.
pub fn invmod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for p in 2..1000u64 {
        if p * p > n {
            break;
        }
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

pub fn checked_pow(b: u64, e: u32) -> Option<u64> {
    b.checked_pow(e)
}

/// Splits a prime power `q = p0^s`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = factor(q);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// Multiplicative order of `a` modulo the prime `p`.
pub fn order_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let n = p - 1;
    let mut ord = n;
    for (q, _) in factor(n) {
        while ord % q == 0 && powmod(a, ord / q, p) == 1 {
            ord /= q;
        }
    }
    Some(ord)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// 2-adic valuation, with `v2(0) = 0`.
pub fn v2(n: u64) -> u32 {
    if n == 0 {
        0
    } else {
        n.trailing_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_reassemble() {
        for n in [2u64, 80, 728, 15624, 3u64.pow(40) - 1, 5u64.pow(24) - 1] {
            let f = factor(n);
            let back: u64 = f.iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(back, n);
            assert!(f.iter().all(|(p, _)| is_prime(*p)));
        }
    }

    #[test]
    fn orders() {
        assert_eq!(order_mod_prime(3, 5), Some(4));
        assert_eq!(order_mod_prime(5 - 2, 5), Some(4));
        assert_eq!(order_mod_prime(2, 7), Some(3));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }
}
