//! Polynomial arithmetic over prime fields `Z/p` with `p < 2^31`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

pub(crate) type Fp = Vec<u64>;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mulmod_u128(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod_u128(r, b, m);
        }
        b = mulmod_u128(b, b, m);
        e >>= 1;
    }
    r
}

/// Primes descending from just below `2^31`.
pub(crate) fn large_primes() -> impl Iterator<Item = u64> {
    (1u64..).map(|k| (1u64 << 31) - 2 * k + 1).filter(|&n| is_prime(n))
}

/// Odd primes ascending from `start`.
pub(crate) fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(3)..).filter(|&n| is_prime(n))
}

/// Division-free reduction modulo a fixed `p`.
#[derive(Clone, Copy)]
pub(crate) struct Barrett {
    pub p: u64,
    m: u64,
}

impl Barrett {
    pub fn new(p: u64) -> Self {
        Self { p, m: u64::MAX / p }
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }
}

pub(crate) fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_u64(a, p - 2, p)
}

pub(crate) fn trim(a: &mut Fp) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn reduce(a: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    let mut out: Fp = a
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn deg(a: &Fp) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut out: Fp = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut out: Fp = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &Fp, c: u64, p: u64) -> Fp {
    let mut out: Fp = a.iter().map(|x| x * c % p).collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = deg(b).expect("division by zero polynomial mod p");
    let Some(da) = deg(a) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), a.clone());
    }
    let il = inv(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; da - db + 1];
    for k in (0..=da - db).rev() {
        let c = r[k + db] * il % p;
        q[k] = c;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * bj % p) % p;
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &Fp, b: &Fp, p: u64) -> Fp {
    divrem(a, b, p).1
}

pub(crate) fn monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => scale(a, inv(lc, p), p),
    }
}

pub(crate) fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// Returns `(g, s, t)` with `s·a + t·b = g` monic.
pub(crate) fn ext_gcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let il = inv(*r0.last().expect("nonzero gcd"), p);
    (scale(&r0, il, p), scale(&s0, il, p), scale(&t0, il, p))
}

pub(crate) fn derivative(a: &Fp, p: u64) -> Fp {
    let mut out: Fp = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| (i as u64 % p) * c % p)
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn is_squarefree(a: &Fp, p: u64) -> bool {
    deg(&gcd(a, &derivative(a, p), p)) == Some(0)
}

fn powmod_poly(base: &Fp, mut e: num_bigint::BigUint, m: &Fp, p: u64) -> Fp {
    use num_traits::{One, Zero};
    let mut result: Fp = vec![1];
    let mut b = rem(base, m, p);
    while !e.is_zero() {
        if e.is_odd() {
            result = rem(&mul(&result, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1u32;
        if e.is_one() {
            result = rem(&mul(&result, &b, p), m, p);
            break;
        }
    }
    result
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs (product of all irreducible factors of degree `i`, `i`).
pub(crate) fn ddf(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut i = 0;
    while deg(&rest).unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = powmod_poly(&h, p.into(), &rest, p);
        let g = gcd(&rest, &sub(&h, &x, p), p);
        if deg(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), i));
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
        }
    }
    if deg(&rest).unwrap_or(0) > 0 {
        let d = deg(&rest).unwrap();
        out.push((rest, d));
    }
    out
}

/// Equal-degree splitting (Cantor–Zassenhaus) into monic irreducibles of degree `d`.
pub(crate) fn edf<R: Rng>(f: &Fp, d: usize, p: u64, rng: &mut R) -> Vec<Fp> {
    let n = deg(f).unwrap_or(0);
    if n <= d {
        return vec![monic(f, p)];
    }
    let e = (num_bigint::BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Fp = {
            let mut a: Fp = (0..n).map(|_| rng.gen_range(0..p)).collect();
            trim(&mut a);
            a
        };
        if deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let g0 = gcd(&a, f, p);
        let g = if deg(&g0).unwrap_or(0) > 0 {
            g0
        } else {
            let b = powmod_poly(&a, e.clone(), f, p);
            gcd(&sub(&b, &vec![1], p), f, p)
        };
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, &g, p).0;
            let mut out = edf(&g, d, p, rng);
            out.extend(edf(&h, d, p, rng));
            return out;
        }
    }
}

/// Complete factorization of a monic squarefree polynomial into monic irreducibles.
pub(crate) fn factor_squarefree<R: Rng>(f: &Fp, p: u64, rng: &mut R) -> Vec<Fp> {
    let mut out = Vec::new();
    for (g, d) in ddf(f, p) {
        out.extend(edf(&g, d, p, rng));
    }
    out
}
