//! Characteristic polynomial by multimodular Hessenberg reduction.
//!
//! Each image is exact modulo a word-size prime; enough primes are combined
//! to exceed a Hadamard-type bound on the coefficients, so the reconstructed
//! polynomial is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::MatQ;
use crate::modp;
use crate::poly::PolyQ;
use crate::rat::Rat;

fn hessenberg_charpoly_mod(mut h: Vec<u64>, n: usize, p: u64) -> Vec<u64> {
    let at = |i: usize, j: usize| i * n + j;
    for c in 0..n.saturating_sub(2) {
        let Some(piv) = (c + 1..n).find(|&i| h[at(i, c)] != 0) else {
            continue;
        };
        if piv != c + 1 {
            for j in 0..n {
                h.swap(at(piv, j), at(c + 1, j));
            }
            for i in 0..n {
                h.swap(at(i, piv), at(i, c + 1));
            }
        }
        let inv = modp::inv(h[at(c + 1, c)], p);
        for i in c + 2..n {
            let u = h[at(i, c)] * inv % p;
            if u == 0 {
                continue;
            }
            let nu = p - u;
            for j in c..n {
                h[at(i, j)] = (h[at(i, j)] + nu * h[at(c + 1, j)]) % p;
            }
            for r in 0..n {
                h[at(r, c + 1)] = (h[at(r, c + 1)] + u * h[at(r, i)]) % p;
            }
        }
    }
    // p_k = (λ − h_kk) p_{k−1} − Σ_{i<k} h_ik (Π_{j=i+1..k} h_{j,j−1}) p_{i−1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + (p - h[at(k, k)]) * c) % p;
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = prod * h[at(i + 1, i)] % p;
            if prod == 0 {
                break;
            }
            let coef = h[at(i, k)] * prod % p;
            if coef == 0 {
                continue;
            }
            for (t, &c) in polys[i].iter().enumerate() {
                next[t] = (next[t] + (p - coef) * c % p) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Bit bound on the coefficients of `det(λI − N)`: `2^n Π max(1, ‖row_i‖₂)`.
fn coefficient_bits(num: &[BigInt], n: usize) -> u64 {
    let mut bits = n as u64 + 1;
    for i in 0..n {
        let sq: BigInt = num[i * n..(i + 1) * n].iter().map(|x| x * x).sum();
        bits += sq.bits().div_ceil(2);
    }
    bits
}

/// Monic characteristic polynomial `det(λI − A)`.
pub fn char_poly(a: &MatQ) -> Result<PolyQ> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(PolyQ::one());
    }
    let num = a.numerators();
    let bits = coefficient_bits(num, n) + 1;
    let mut modulus = BigInt::one();
    let mut acc = vec![BigInt::zero(); n + 1];
    for p in modp::large_primes() {
        if modulus.bits() > bits {
            break;
        }
        let h: Vec<u64> = num.iter().map(|x| crate::matrix::mod_u64(x, p)).collect();
        let img = hessenberg_charpoly_mod(h, n, p);
        let pb = BigInt::from(p);
        let minv = BigInt::from(modp::inv(crate::matrix::mod_u64(&modulus, p), p));
        for (c, &r) in acc.iter_mut().zip(&img) {
            let t = ((BigInt::from(r) - &*c) * &minv).mod_floor(&pb);
            *c += &modulus * t;
        }
        modulus *= pb;
    }
    let half = &modulus >> 1u32;
    let chi_n: Vec<BigInt> = acc.into_iter().map(|c| if c > half { c - &modulus } else { c }).collect();
    // χ_A(λ) = δ^{-n} χ_N(δλ)
    let delta = a.denominator();
    let mut scale = BigInt::one();
    let mut coeffs = vec![Rat::zero(); n + 1];
    for i in (0..=n).rev() {
        coeffs[i] = Rat::new(chi_n[i].clone(), scale.clone());
        scale *= delta;
    }
    Ok(PolyQ::new(coeffs))
}
