//! Reduced column echelon form by modular images and rational reconstruction.
//!
//! Vectors are inserted in order; a vector enters when its residual is
//! nonzero and its pivot is the first nonzero row of that residual. The
//! result is returned only when every prime agrees on the pivot profile and
//! a fresh prime confirms the reconstruction; otherwise `None`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::mod_u64;
use crate::modp;
use crate::rat::content;

const MAX_PRIMES: usize = 64;

struct Image {
    p: u64,
    pivots: Vec<usize>,
    accepted: Vec<usize>,
    /// Columns with pivot entry 1 and zeros at the other pivots.
    cols: Vec<Vec<u64>>,
}

fn rref_mod_p(vs: &[&[BigInt]], n: usize, p: u64) -> Image {
    let br = modp::Barrett::new(p);
    let mut img = Image { p, pivots: Vec::new(), accepted: Vec::new(), cols: Vec::new() };
    for (k, v) in vs.iter().enumerate() {
        let mut r: Vec<u64> = v.iter().map(|x| mod_u64(x, p)).collect();
        let coeffs: Vec<u64> = img.pivots.iter().map(|&q| r[q]).collect();
        for (c, f) in img.cols.iter().zip(coeffs) {
            if f != 0 {
                let f = p - f;
                for (ri, ci) in r.iter_mut().zip(c) {
                    *ri = br.reduce(*ri + f * ci);
                }
            }
        }
        let Some(q) = r.iter().position(|&x| x != 0) else {
            continue;
        };
        let inv = modp::inv(r[q], p);
        for x in r.iter_mut() {
            *x = br.reduce(*x * inv);
        }
        for c in img.cols.iter_mut() {
            let f = c[q];
            if f != 0 {
                let f = p - f;
                for (ci, ri) in c.iter_mut().zip(&r) {
                    *ci = br.reduce(*ci + f * ri);
                }
            }
        }
        debug_assert_eq!(r.len(), n);
        img.cols.push(r);
        img.pivots.push(q);
        img.accepted.push(k);
    }
    img
}

/// `a/b ≡ u (mod m)` with `|a|, b ≤ √(m/2)`.
fn rational_reconstruct(u: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    if u.is_zero() {
        return Some((BigInt::zero(), BigInt::one()));
    }
    let sym = if u * 2 > *m { u - m } else { u.clone() };
    if sym.abs() <= *bound {
        return Some((sym, BigInt::one()));
    }
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > *bound {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
    }
    if s1.is_zero() || s1.abs() > *bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(if s1.is_negative() { (-r1, -s1) } else { (r1, s1) })
}

/// Primitive integer column with positive pivot entry, from residues
/// combined modulo `m`.
fn reconstruct_column(x: &[BigInt], m: &BigInt, bound: &BigInt) -> Option<Vec<BigInt>> {
    let mut den = BigInt::one();
    let mut parts = Vec::with_capacity(x.len());
    for u in x {
        let y = (u * &den).mod_floor(m);
        let (a, b) = rational_reconstruct(&y, m, bound)?;
        den *= &b;
        parts.push((a, den.clone()));
    }
    let mut out: Vec<BigInt> = parts.into_iter().map(|(a, d)| a * (&den / d)).collect();
    let g = content(&out);
    if g.is_zero() {
        return None;
    }
    for v in out.iter_mut() {
        *v /= &g;
    }
    Some(out)
}

fn matches(cols: &[Vec<BigInt>], img: &Image) -> bool {
    cols.iter().zip(&img.cols).zip(&img.pivots).all(|((c, r), &q)| {
        let s = mod_u64(&c[q], img.p);
        s != 0 && c.iter().zip(r).all(|(x, &y)| mod_u64(x, img.p) == y * s % img.p)
    })
}

/// Reduced echelon columns of the span of `vs`, each as a primitive integer
/// vector with positive pivot entry, in insertion order, with the index of
/// the input that introduced each.
pub(crate) fn rref_columns(vs: &[&[BigInt]], n: usize) -> Option<(Vec<Vec<BigInt>>, Vec<usize>)> {
    let mut primes = modp::large_primes();
    let first = rref_mod_p(vs, n, primes.next()?);
    let (pivots, accepted) = (first.pivots.clone(), first.accepted.clone());
    let mut m = BigInt::from(first.p);
    let mut acc: Vec<Vec<BigInt>> = first.cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
    for _ in 1..MAX_PRIMES {
        let img = rref_mod_p(vs, n, primes.next()?);
        if img.pivots != pivots || img.accepted != accepted {
            return None;
        }
        let bound = (&m / 2u32).sqrt();
        let cand: Option<Vec<Vec<BigInt>>> = acc.iter().map(|x| reconstruct_column(x, &m, &bound)).collect();
        if let Some(cols) = cand {
            if matches(&cols, &img) {
                return Some((cols, accepted));
            }
        }
        // Fold the new image in: x ← x + m·((r − x)·m⁻¹ mod p).
        let p = img.p;
        let minv = modp::inv(mod_u64(&m, p), p);
        for (xs, rs) in acc.iter_mut().zip(&img.cols) {
            for (x, &r) in xs.iter_mut().zip(rs) {
                let t = (r + p - mod_u64(x, p)) % p * minv % p;
                if t != 0 {
                    *x += &m * t;
                }
            }
        }
        m *= p;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::echelon::{normalize_residual, FfEchelon};
    use proptest::prelude::*;

    fn exact(vs: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
        let mut ech = FfEchelon::new(n);
        for v in vs {
            let r = ech.reduce(v);
            if r.iter().any(|x| !x.is_zero()) {
                ech.push(r, Vec::new());
            }
        }
        ech.columns()
            .iter()
            .map(|c| {
                let mut c = c.clone();
                normalize_residual(&mut c, ech.delta());
                c
            })
            .collect()
    }

    #[test]
    fn reconstructs_small_fractions() {
        let m = BigInt::from(1_000_003u64);
        let bound = (&m / 2u32).sqrt();
        let inv3 = BigInt::from(modp::inv(3, 1_000_003));
        let u = (BigInt::from(-2) * inv3).mod_floor(&m);
        assert_eq!(rational_reconstruct(&u, &m, &bound), Some((BigInt::from(-2), BigInt::from(3))));
    }

    #[test]
    fn large_entries_need_several_primes() {
        let big: BigInt = BigInt::from(3).pow(200u32);
        let vs = vec![
            vec![BigInt::from(7), big.clone(), BigInt::from(1)],
            vec![BigInt::from(5), BigInt::from(2), &big + 1],
        ];
        let refs: Vec<&[BigInt]> = vs.iter().map(Vec::as_slice).collect();
        assert_eq!(rref_columns(&refs, 3).unwrap().0, exact(&vs, 3));
    }

    proptest! {
        #[test]
        fn agrees_with_fraction_free(rows in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 5), 1..8)) {
            let vs: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let refs: Vec<&[BigInt]> = vs.iter().map(Vec::as_slice).collect();
            prop_assert_eq!(rref_columns(&refs, 5).unwrap().0, exact(&vs, 5));
        }
    }
}
