//! Minimal annihilating polynomials of vectors and per-factor bookkeeping.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::charpoly::char_poly;
use crate::echelon::FfEchelon;
use crate::error::{Error, Result};
use crate::factor::{factor_rationals, Factorization};
use crate::matrix::{mat_poly_apply_vec, MatQ, VecQ};
use crate::modp;
use crate::poly::{poly_lcm, PolyQ};
use crate::rat::Rat;

/// Minimal annihilating polynomial of `v` with respect to `A`, found by
/// inserting `v, Av, A²v, …` into a fresh echelon form until the first
/// dependence. A `cap` known to annihilate `v` bounds the search.
pub fn min_annih_vector(a: &MatQ, v: &VecQ, cap: Option<&PolyQ>) -> Result<PolyQ> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if v.dim() != a.rows() {
        return Err(Error::Dimension(format!("matrix order {} vs vector length {}", a.rows(), v.dim())));
    }
    if let Some(cap) = cap {
        if cap.is_zero() || !mat_poly_apply_vec(cap, a, v)?.is_zero() {
            return Err(Error::InvalidCap);
        }
    }
    if v.is_zero() {
        return Ok(PolyQ::one());
    }
    let limit = cap.map_or(a.rows(), PolyQ::deg);
    let mut ech = FfEchelon::new(a.rows());
    let mut x = v.numerators().to_vec();
    for k in 0..=limit {
        let mut unit = vec![BigInt::zero(); k + 1];
        unit[k] = BigInt::one();
        let (r, t) = ech.reduce_tagged(&x, Some(&unit));
        if r.iter().all(Zero::is_zero) {
            // Σ t_g N^g v = 0 with N = δ_A·A, so Σ t_g δ_A^g A^g v = 0.
            let delta_a = a.denominator();
            let mut pw = BigInt::one();
            let mut coeffs = vec![Rat::zero(); k + 1];
            for g in 0..=k {
                coeffs[g] = Rat::from_integer(t.get(g).cloned().unwrap_or_default() * &pw);
                pw *= delta_a;
            }
            return Ok(PolyQ::new(coeffs).monic());
        }
        ech.push(r, t);
        x = a.int_mat_vec(&x);
    }
    Err(Error::InvalidCap)
}

/// Per-factor data: multiplicities `ℓ_e` and cofactors `g_e` with
/// `π_{A,e} = f^{ℓ_e}·g_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorEntry {
    pub factor: PolyQ,
    /// Multiplicity in the characteristic polynomial.
    pub m: usize,
    /// Multiplicity in the minimal polynomial.
    pub lbar: usize,
    pub ell: Vec<usize>,
    pub cofactors: Vec<PolyQ>,
}

#[derive(Clone, Debug)]
pub struct AnnihilatorTable {
    pub basis: Vec<VecQ>,
    /// `π_{A,e}` for each basis vector, monic.
    pub pis: Vec<PolyQ>,
    pub min_poly: PolyQ,
    pub char_poly: PolyQ,
    pub factorization: Factorization,
    pub factors: Vec<FactorEntry>,
}

impl AnnihilatorTable {
    pub fn entry(&self, f: &PolyQ) -> Option<&FactorEntry> {
        self.factors.iter().find(|e| &e.factor == f)
    }

    /// Multiplicity exponents of `π_{A,e}` in the order of `factorization`.
    pub fn exponents(&self, e: usize) -> Vec<usize> {
        self.factors.iter().map(|fe| fe.ell[e]).collect()
    }
}

/// Modular image of `A` in which the irreducible factors stay squarefree
/// and pairwise coprime.
struct GoodPrime {
    p: u64,
    a: Vec<u64>,
    factors: Vec<Vec<u64>>,
}

fn poly_mod_p(f: &PolyQ, p: u64) -> Option<Vec<u64>> {
    let mut out = Vec::with_capacity(f.coeffs().len());
    for c in f.coeffs() {
        let d = crate::matrix::mod_u64(c.denom(), p);
        if d == 0 {
            return None;
        }
        out.push(crate::matrix::mod_u64(c.numer(), p) * modp::inv(d, p) % p);
    }
    modp::trim(&mut out);
    Some(out)
}

fn good_primes<'a>(a: &'a MatQ, fz: &'a Factorization) -> impl Iterator<Item = GoodPrime> + 'a {
    modp::large_primes().filter_map(move |p| {
        let am = a.mod_p(p)?;
        let factors: Vec<Vec<u64>> = fz
            .factors
            .iter()
            .map(|(f, _)| poly_mod_p(f, p))
            .collect::<Option<_>>()?;
        for (i, f) in factors.iter().enumerate() {
            if f.len() != fz.factors[i].0.deg() + 1 || !modp::is_squarefree(f, p) {
                return None;
            }
            for g in &factors[..i] {
                if modp::deg(&modp::gcd(f, g, p)) != Some(0) {
                    return None;
                }
            }
        }
        Some(GoodPrime { p, a: am, factors })
    })
}

/// Monic minimal polynomial of `v` modulo `p` by Krylov elimination.
fn min_poly_mod(a: &[u64], n: usize, v: &[u64], p: u64) -> Vec<u64> {
    let mut rows: Vec<(Vec<u64>, usize, Vec<u64>)> = Vec::new();
    let mut x = v.to_vec();
    for k in 0..=n {
        let mut tag = vec![0u64; k + 1];
        tag[k] = 1;
        let mut r = x.clone();
        for (row, piv, t) in &rows {
            let c = r[*piv];
            if c == 0 {
                continue;
            }
            let nc = p - c;
            for (ri, &wi) in r.iter_mut().zip(row) {
                *ri = (*ri + nc * wi) % p;
            }
            for (ti, &si) in tag.iter_mut().zip(t) {
                *ti = (*ti + nc * si) % p;
            }
        }
        match r.iter().position(|&c| c != 0) {
            None => return tag,
            Some(q) => {
                let inv = modp::inv(r[q], p);
                for c in r.iter_mut() {
                    *c = *c * inv % p;
                }
                for c in tag.iter_mut() {
                    *c = *c * inv % p;
                }
                rows.push((r, q, tag));
            }
        }
        x = (0..n)
            .map(|i| {
                a[i * n..(i + 1) * n]
                    .iter()
                    .zip(&x)
                    .fold(0u64, |acc, (&m, &y)| (acc + m * y) % p)
            })
            .collect();
    }
    unreachable!("Krylov sequence exceeds the matrix order")
}

fn valuation(mut g: Vec<u64>, f: &[u64], p: u64) -> usize {
    let mut k = 0;
    loop {
        let (q, r) = modp::divrem(&g, &f.to_vec(), p);
        if !r.is_empty() {
            return k;
        }
        g = q;
        k += 1;
    }
}

/// Minimal annihilating polynomial of `v` as a product of the known
/// irreducible factors: exponents are read off a modular image and the
/// candidate is certified by exact evaluation. A prime whose image has the
/// same degree as a certified annihilator forces minimality, because the true
/// polynomial reduces to a multiple of the modular one.
fn annih_from_factors(a: &MatQ, v: &VecQ, fz: &Factorization, primes: &mut Vec<GoodPrime>) -> Result<Vec<usize>> {
    let n = a.rows();
    let mut idx = 0;
    loop {
        if idx == primes.len() {
            let used: Vec<u64> = primes.iter().map(|g| g.p).collect();
            let next = good_primes(a, fz)
                .find(|g| !used.contains(&g.p))
                .expect("unbounded prime supply");
            primes.push(next);
        }
        let gp = &primes[idx];
        idx += 1;
        let Some(vm) = v.mod_p(gp.p) else { continue };
        let mu = min_poly_mod(&gp.a, n, &vm, gp.p);
        let exps: Vec<usize> = gp.factors.iter().map(|f| valuation(mu.clone(), f, gp.p)).collect();
        let cand = fz
            .factors
            .iter()
            .zip(&exps)
            .fold(PolyQ::one(), |acc, ((f, _), &k)| acc * f.pow(k));
        if cand.deg() + 1 != mu.len() {
            continue;
        }
        if mat_poly_apply_vec(&cand, a, v)?.is_zero() {
            return Ok(exps);
        }
        if idx > 64 {
            return Err(Error::Inconsistent("no modular image certifies the annihilator".into()));
        }
    }
}

/// Table over the standard basis.
pub fn build_annihilator_table_std(a: &MatQ) -> Result<AnnihilatorTable> {
    let basis: Vec<VecQ> = (0..a.rows()).map(|i| VecQ::unit(a.rows(), i)).collect();
    build_annihilator_table(a, &basis)
}

pub fn build_annihilator_table(a: &MatQ, basis: &[VecQ]) -> Result<AnnihilatorTable> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let chi = char_poly(a)?;
    let fz = factor_rationals(&chi)?;
    build_annihilator_table_with(a, basis, chi, fz)
}

/// Builds the table from a known characteristic polynomial and its factorization.
pub fn build_annihilator_table_with(
    a: &MatQ,
    basis: &[VecQ],
    chi: PolyQ,
    fz: Factorization,
) -> Result<AnnihilatorTable> {
    let n = a.rows();
    if basis.iter().any(|v| v.dim() != n) {
        return Err(Error::Dimension("basis vector length differs from matrix order".into()));
    }
    let seed: Vec<GoodPrime> = good_primes(a, &fz).take(1).collect();
    let exps: Vec<Vec<usize>> = basis
        .par_iter()
        .map(|v| {
            let mut primes: Vec<GoodPrime> = seed
                .iter()
                .map(|g| GoodPrime { p: g.p, a: g.a.clone(), factors: g.factors.clone() })
                .collect();
            annih_from_factors(a, v, &fz, &mut primes)
        })
        .collect::<Result<_>>()?;

    let pis: Vec<PolyQ> = exps
        .iter()
        .map(|ks| {
            fz.factors
                .iter()
                .zip(ks)
                .fold(PolyQ::one(), |acc, ((f, _), &k)| acc * f.pow(k))
        })
        .collect();
    let mut min_poly = PolyQ::one();
    for pi in &pis {
        min_poly = poly_lcm(&min_poly, pi)?;
    }
    let factors = fz
        .factors
        .iter()
        .enumerate()
        .map(|(i, (f, m))| {
            let ell: Vec<usize> = exps.iter().map(|ks| ks[i]).collect();
            let cofactors = pis
                .iter()
                .zip(&ell)
                .map(|(pi, &k)| pi.div_exact(&f.pow(k)).expect("factor power divides"))
                .collect();
            FactorEntry {
                factor: f.clone(),
                m: *m,
                lbar: ell.iter().copied().max().unwrap_or(0),
                ell,
                cofactors,
            }
        })
        .collect();
    Ok(AnnihilatorTable { basis: basis.to_vec(), pis, min_poly, char_poly: chi, factorization: fz, factors })
}
