//! Dense integer polynomials as coefficient vectors, lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::modp;

pub(crate) fn trim(a: &mut Vec<BigInt>) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub(crate) fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Splits `a` as `c · prim` where `prim` has positive leading coefficient.
/// The zero polynomial yields `(0, [])`.
pub(crate) fn primitive_part(a: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut v = a.to_vec();
    trim(&mut v);
    let Some(lc) = v.last() else {
        return (BigInt::zero(), v);
    };
    let mut c = content(&v);
    if lc.is_negative() {
        c = -c;
    }
    let prim = v.iter().map(|x| x / &c).collect();
    (c, prim)
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn derivative(a: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    trim(&mut out);
    out
}

/// Exact quotient `a / b` over `Z`, or `None` when `b` does not divide `a`.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut b = b.to_vec();
    trim(&mut b);
    let lb = b.last()?.clone();
    let mut r = a.to_vec();
    trim(&mut r);
    if r.is_empty() {
        return Some(Vec::new());
    }
    if r.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let top = &r[k + db];
        if top.is_zero() {
            continue;
        }
        let (c, rr) = top.div_rem(&lb);
        if !rr.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim(&mut q);
    Some(q)
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Greatest common divisor over `Z`, primitive with positive leading coefficient
/// (content gcd included). Uses modular images and Chinese remaindering,
/// certified by trial division.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (ca, pa) = primitive_part(a);
    let (cb, pb) = primitive_part(b);
    if pa.is_empty() {
        return scale_abs(&pb, &cb);
    }
    if pb.is_empty() {
        return scale_abs(&pa, &ca);
    }
    let c = ca.gcd(&cb);
    if pa.len() == 1 || pb.len() == 1 {
        return vec![c];
    }
    let gamma = pa.last().unwrap().gcd(pb.last().unwrap());

    let mut acc: Option<(Vec<BigInt>, BigInt, usize)> = None;
    let mut prev_candidate: Option<Vec<BigInt>> = None;
    for p in modp::large_primes() {
        let pbig = BigInt::from(p);
        if (&gamma % &pbig).is_zero() {
            continue;
        }
        let ap = modp::reduce(&pa, p);
        let bp = modp::reduce(&pb, p);
        let g = modp::gcd(&ap, &bp, p);
        let dg = g.len() - 1;
        if dg == 0 {
            return vec![c];
        }
        let gm = modp::reduce(&[gamma.clone()], p)[0];
        let g: Vec<BigInt> = modp::scale(&g, gm, p).into_iter().map(BigInt::from).collect();
        acc = match acc.take() {
            Some((h, m, d)) if d == dg => {
                // CRT: h mod m, g mod p
                let minv = BigInt::from(modp::inv((&m % &pbig).try_into().unwrap(), p));
                let combined: Vec<BigInt> = h
                    .iter()
                    .zip(&g)
                    .map(|(hi, gi)| {
                        let t = ((gi - hi) * &minv).mod_floor(&pbig);
                        hi + &m * t
                    })
                    .collect();
                Some((combined, &m * &pbig, d))
            }
            Some((h, m, d)) if d < dg => Some((h, m, d)),
            _ => Some((g, pbig.clone(), dg)),
        };
        let (h, m, _) = acc.as_ref().unwrap();
        let cand: Vec<BigInt> = h.iter().map(|x| symmetric(x, m)).collect();
        let (_, cand) = primitive_part(&cand);
        if prev_candidate.as_ref() == Some(&cand)
            && div_exact(&pa, &cand).is_some()
            && div_exact(&pb, &cand).is_some()
        {
            return scale_abs(&cand, &c);
        }
        prev_candidate = Some(cand);
    }
    unreachable!("prime supply exhausted")
}

fn scale_abs(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    let c = c.abs();
    a.iter().map(|x| x * &c).collect()
}

/// Yun's squarefree decomposition of a primitive polynomial with positive
/// leading coefficient: `a = Π s_i^i` with each `s_i` primitive and squarefree.
pub(crate) fn squarefree(a: &[BigInt]) -> Vec<(Vec<BigInt>, usize)> {
    let (_, a) = primitive_part(a);
    if a.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let da = derivative(&a);
    let g = gcd(&a, &da);
    let mut b = div_exact(&a, &g).expect("gcd divides");
    let mut c = div_exact(&da, &g).expect("gcd divides");
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1;
    loop {
        let s = gcd(&b, &d);
        if s.len() > 1 {
            out.push((s.clone(), i));
        }
        b = div_exact(&b, &s).expect("gcd divides");
        if b.len() <= 1 {
            break;
        }
        c = div_exact(&d, &s).expect("gcd divides");
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    let mut out: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
        .collect();
    trim(&mut out);
    out
}

/// Bound on the coefficients of any factor of `a` (Mignotte), times `|lc(a)|`.
pub(crate) fn factor_coeff_bound(a: &[BigInt]) -> BigInt {
    let n = a.len().saturating_sub(1);
    let norm_sq: BigInt = a.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + BigInt::one();
    let binom_max = BigInt::one() << n;
    binom_max * norm * a.last().map(|c| c.abs()).unwrap_or_else(BigInt::one)
}
