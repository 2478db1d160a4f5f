//! Squarefree decomposition and complete factorization over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::modp::{self, Fp};
use crate::poly::PolyQ;
use crate::rat::Rat;
use crate::zpoly;

/// `unit · Π factor^multiplicity`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rat,
    pub factors: Vec<(PolyQ, usize)>,
}

impl Factorization {
    /// Re-multiplies the factorization.
    pub fn expand(&self) -> PolyQ {
        self.factors
            .iter()
            .fold(PolyQ::constant(self.unit.clone()), |acc, (f, k)| acc * f.pow(*k))
    }

    pub fn multiplicity(&self, f: &PolyQ) -> Option<usize> {
        self.factors.iter().find(|(g, _)| g == f).map(|(_, k)| *k)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.unit.is_one() || self.factors.is_empty() {
            parts.push(format!("{}", self.unit));
        }
        for (f, k) in &self.factors {
            let base = if f.deg() == 0 { format!("{f}") } else { format!("({f})") };
            parts.push(if *k == 1 { base } else { format!("{base}^{k}") });
        }
        write!(out, "{}", parts.join(" · "))
    }
}

fn to_monic_q(a: &[BigInt]) -> PolyQ {
    PolyQ::from_bigints(a).monic()
}

fn sort_factors(fs: &mut [(PolyQ, usize)]) {
    fs.sort_by(|(a, _), (b, _)| a.sort_key().cmp(&b.sort_key()));
}

/// Yun decomposition into monic, squarefree, pairwise coprime parts, sorted
/// by multiplicity.
pub fn squarefree_decomposition(p: &PolyQ) -> Result<Vec<(PolyQ, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("squarefree decomposition"));
    }
    let (_, prim) = p.to_primitive();
    Ok(zpoly::squarefree(&prim)
        .into_iter()
        .map(|(s, i)| (to_monic_q(&s), i))
        .collect())
}

/// Complete factorization over ℚ, certified by re-multiplication.
pub fn factor_rationals(p: &PolyQ) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("factorization"));
    }
    let unit = p.lead().cloned().expect("nonzero");
    let (_, prim) = p.to_primitive();
    let mut factors = Vec::new();
    for (s, i) in zpoly::squarefree(&prim) {
        for g in factor_squarefree_z(&s) {
            factors.push((to_monic_q(&g), i));
        }
    }
    sort_factors(&mut factors);
    let out = Factorization { unit, factors };
    if out.expand() != *p {
        return Err(Error::Inconsistent("factorization does not reconstruct its input".into()));
    }
    Ok(out)
}

/// Checks irreducibility over ℚ.
pub fn is_irreducible(p: &PolyQ) -> bool {
    match factor_rationals(p) {
        Ok(fz) => fz.factors.len() == 1 && fz.factors[0].1 == 1 && p.deg() >= 1,
        Err(_) => false,
    }
}

/// Factors a primitive squarefree integer polynomial with positive leading
/// coefficient into primitive irreducibles.
fn factor_squarefree_z(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // A power of x splits off trivially.
    if f[0].is_zero() {
        let k = f.iter().position(|c| !c.is_zero()).unwrap();
        let mut out = vec![vec![BigInt::zero(), BigInt::one()]; k];
        let rest = f[k..].to_vec();
        if rest.len() > 1 {
            out.extend(factor_squarefree_z(&rest));
        }
        return out;
    }
    let lc = f.last().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);

    // Pick, among a handful of admissible primes, the one with fewest modular factors.
    let mut best: Option<(usize, u64)> = None;
    let mut tried = 0;
    for p in modp::primes_from(11) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = modp::monic(&modp::reduce(f, p), p);
        if !modp::is_squarefree(&fp, p) {
            continue;
        }
        let count: usize = modp::ddf(&fp, p)
            .iter()
            .map(|(g, d)| (g.len() - 1) / d)
            .sum();
        if count == 1 {
            return vec![f.to_vec()];
        }
        if best.is_none_or(|(c, _)| count < c) {
            best = Some((count, p));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let p = best.unwrap().1;
    let fp = modp::monic(&modp::reduce(f, p), p);
    let mut locals = modp::factor_squarefree(&fp, p, &mut rng);
    locals.sort();

    let bound = zpoly::factor_coeff_bound(f) * 2u32 + 1u32;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_lift(f, &locals, p, k);
    recombine(f, lifted, &modulus)
}

fn lift_to_z(a: &Fp) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn reduce_mod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    zpoly::trim(&mut out);
    out
}

/// Lifts `f ≡ lc(f) · Π locals (mod p)` to a factorization modulo `p^k`
/// with monic factors.
fn hensel_lift(f: &[BigInt], locals: &[Fp], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    if locals.len() == 1 {
        let m = BigInt::from(p).pow(k);
        let lc = f.last().unwrap();
        let inv = lc.extended_gcd(&m).x.mod_floor(&m);
        return vec![reduce_mod(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), &m)];
    }
    let (left, right) = locals.split_at(locals.len() / 2);
    let g0 = left.iter().fold(vec![1u64], |acc, u| modp::mul(&acc, u, p));
    let h0 = right.iter().fold(vec![1u64], |acc, u| modp::mul(&acc, u, p));
    let (g, h) = lift_pair(f, &g0, &h0, p, k);
    // f ≡ lc·g·h with g, h monic; each side is lifted as its own product.
    let mut out = hensel_lift(&g, left, p, k);
    out.extend(hensel_lift(&h, right, p, k));
    out
}

/// Linear Hensel lifting of `f ≡ lc · g · h (mod p)`, `g`, `h` monic and coprime mod p.
fn lift_pair(f: &[BigInt], g0: &Fp, h0: &Fp, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let lc = f.last().unwrap().clone();
    let lc_p = modp::reduce(&[lc.clone()], p)[0];
    let lc_inv = modp::inv(lc_p, p);
    let (one, s, t) = modp::ext_gcd(g0, h0, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut g = lift_to_z(g0);
    let mut h = lift_to_z(h0);
    let mut m = pb.clone();
    for _ in 1..k {
        let prod: Vec<BigInt> = zpoly::mul(&g, &h).iter().map(|c| c * &lc).collect();
        let err = zpoly::sub(f, &prod);
        let e: Vec<BigInt> = err.iter().map(|c| c / &m).collect();
        let ep = modp::scale(&modp::reduce(&e, p), lc_inv, p);
        let (q, dh) = modp::divrem(&modp::mul(&s, &ep, p), h0, p);
        let dg = modp::add(&modp::mul(&t, &ep, p), &modp::mul(&q, g0, p), p);
        for (i, c) in dg.iter().enumerate() {
            g[i] += &m * c;
        }
        for (i, c) in dh.iter().enumerate() {
            h[i] += &m * c;
        }
        m *= &pb;
    }
    (g, h)
}

fn symmetric_poly(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m >> 1u32;
    let mut out: Vec<BigInt> = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    zpoly::trim(&mut out);
    out
}

/// Zassenhaus subset recombination of lifted monic factors.
fn recombine(f: &[BigInt], mut lifted: Vec<Vec<BigInt>>, m: &BigInt) -> Vec<Vec<BigInt>> {
    let mut f = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        let r = lifted.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = f.last().unwrap().clone();
            // Cheap filter on constant terms before full product.
            let c0 = idx
                .iter()
                .fold(lc.clone(), |acc, &i| (acc * &lifted[i][0]).mod_floor(m));
            let c0 = symmetric_poly(&[c0], m).pop().unwrap_or_default();
            let passes = c0.is_zero() || (&lc * &f[0]).is_multiple_of(&c0);
            if passes {
                let prod = idx.iter().fold(vec![lc.clone()], |acc, &i| {
                    reduce_mod(&zpoly::mul(&acc, &lifted[i]), m)
                });
                let (_, cand) = zpoly::primitive_part(&symmetric_poly(&prod, m));
                if let Some(q) = zpoly::div_exact(&f, &cand) {
                    out.push(cand);
                    f = q;
                    for &i in idx.iter().rev() {
                        lifted.remove(i);
                    }
                    found = true;
                    break;
                }
            }
            if !next_combination(&mut idx, r) {
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.len() > 1 {
        let (_, f) = zpoly::primitive_part(&f);
        out.push(f);
    }
    out
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Largest bit length of any numerator or denominator among the coefficients.
pub fn coeff_bits(p: &PolyQ) -> u64 {
    p.coeffs()
        .iter()
        .map(|c| c.numer().bits().max(c.denom().bits()))
        .max()
        .unwrap_or(0)
}

/// Whether any rational `a/b` with `|a|, b ≤ bound` is a root.
pub fn has_small_rational_root(p: &PolyQ, bound: i64) -> bool {
    for b in 1..=bound {
        for a in -bound..=bound {
            if a.gcd(&b) != 1 && a != 0 {
                continue;
            }
            if p.eval(&Rat::new(a.into(), b.into())).is_zero() {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> PolyQ {
        PolyQ::from_ints(c)
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn factors_multiply_back(
            parts in proptest::collection::vec((proptest::collection::vec(-5i64..=5, 1..4), 1usize..3), 1..4),
            unit in -3i64..=3,
        ) {
            proptest::prop_assume!(unit != 0);
            let mut prod = PolyQ::constant(crate::rat::rat(unit));
            for (c, e) in &parts {
                let mut c = c.clone();
                c.push(1);
                prod = &prod * &p(&c).pow(*e);
            }
            let fz = factor_rationals(&prod).unwrap();
            proptest::prop_assert_eq!(fz.expand(), prod.clone());
            for (i, (f, m)) in fz.factors.iter().enumerate() {
                proptest::prop_assert!(f.is_monic() && *m >= 1);
                proptest::prop_assert!(f.deg() == 1 || !has_small_rational_root(f, 10));
                proptest::prop_assert!(fz.factors[..i].iter().all(|(g, _)| g != f));
            }
            let sqf = squarefree_decomposition(&prod).unwrap();
            let back = sqf.iter().fold(PolyQ::one(), |acc, (g, k)| &acc * &g.pow(*k));
            proptest::prop_assert_eq!(back, prod.monic());
        }
    }

    #[test]
    fn squarefree_examples() {
        let f = p(&[5, 1, 1]);
        assert_eq!(squarefree_decomposition(&f.pow(3)).unwrap(), vec![(f, 3)]);
        assert_eq!(squarefree_decomposition(&p(&[-1, 0, 1])).unwrap(), vec![(p(&[-1, 0, 1]), 1)]);
        let g = p(&[-2, 1]).pow(2) * p(&[3, 1]);
        assert_eq!(
            squarefree_decomposition(&g).unwrap(),
            vec![(p(&[3, 1]), 1), (p(&[-2, 1]), 2)]
        );
        assert!(squarefree_decomposition(&PolyQ::zero()).is_err());
    }

    #[test]
    fn factor_examples() {
        let f1 = p(&[5, 1, 1]);
        let f2 = p(&[4, 1, 1]);
        let fz = factor_rationals(&(f1.pow(4) * f2.clone())).unwrap();
        assert_eq!(fz.factors, vec![(f2, 1), (f1.clone(), 4)]);
        assert_eq!(factor_rationals(&f1).unwrap().factors, vec![(f1, 1)]);
        let fz = factor_rationals(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(fz.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
        assert!(factor_rationals(&PolyQ::zero()).is_err());
    }

    #[test]
    fn factor_with_unit_and_rational_coefficients() {
        let g = (p(&[1, 2]) * p(&[0, 0, 3]) * p(&[7, 0, 0, 1])).scale(&Rat::new(3.into(), 4.into()));
        let fz = factor_rationals(&g).unwrap();
        assert_eq!(fz.expand(), g);
        assert_eq!(fz.unit, Rat::new(9.into(), 2.into()));
        assert_eq!(fz.factors[0], (p(&[0, 1]), 2));
    }

    #[test]
    fn swinnerton_dyer_like_recombination() {
        // x^4 - 10x^2 + 1 is irreducible but splits into quadratics or linears mod every prime.
        let f = p(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_rationals(&f).unwrap().factors, vec![(f, 1)]);
        let g = p(&[-2, 0, 1]) * p(&[-3, 0, 1]);
        assert_eq!(factor_rationals(&g).unwrap().factors.len(), 2);
    }

    #[test]
    fn cyclotomic_product() {
        // x^12 - 1 = Φ1 Φ2 Φ3 Φ4 Φ6 Φ12
        let f = p(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let fz = factor_rationals(&f).unwrap();
        assert_eq!(fz.factors.len(), 6);
        assert_eq!(fz.expand(), f);
    }
}
