//! Symbolic Jordan chains: the `ψ_f^(k)` tower and its application to a
//! Jordan–Krylov basis.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jk::JKBasis;
use crate::matrix::{mat_vec, MatQ, VecQ};
use crate::poly::PolyQ;
use crate::rat::lcm_denoms;

/// `ψ^(k)(μ, λ)` for `k = 1..ℓ̄`, as polynomials in `μ` whose coefficients are
/// reduced polynomials in `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiTower {
    pub f: PolyQ,
    pub d: usize,
    levels: Vec<Vec<PolyQ>>,
}

impl PsiTower {
    /// μ-coefficients of `ψ^(k)`, lowest power first.
    pub fn level(&self, k: usize) -> &[PolyQ] {
        &self.levels[k - 1]
    }

    pub fn lbar(&self) -> usize {
        self.levels.len()
    }
}

fn mul_mod(a: &PolyQ, b: &PolyQ, f: &PolyQ) -> PolyQ {
    (a * b).rem(f).expect("nonzero modulus")
}

/// Builds `ψ^(1) = (f(μ) − f(λ))/(μ − λ)` and its reduced powers.
pub fn psi_tower(f: &PolyQ, lbar: usize) -> Result<PsiTower> {
    if !f.is_monic() || f.deg() == 0 {
        return Err(Error::NotMonic(f.to_string()));
    }
    let d = f.deg();
    // coefficient of μ^j: Σ_{i>j} f_i λ^{i−1−j}
    let psi1: Vec<PolyQ> = (0..d)
        .map(|j| PolyQ::new((j + 1..=d).map(|i| f.coeff(i)).collect()))
        .collect();
    let mut levels = vec![psi1.clone()];
    for _ in 1..lbar.max(1) {
        let prev = levels.last().unwrap();
        let mut next = vec![PolyQ::zero(); prev.len() + psi1.len() - 1];
        for (i, a) in prev.iter().enumerate() {
            for (j, b) in psi1.iter().enumerate() {
                next[i + j] = &next[i + j] + &mul_mod(a, b, f);
            }
        }
        levels.push(next);
    }
    levels.truncate(lbar.max(1));
    Ok(PsiTower { f: f.clone(), d, levels })
}

/// Vector of polynomials in `λ` stored by coefficient: `Σ_i coeffs[i]·λ^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyVec {
    coeffs: Vec<VecQ>,
}

impl PolyVec {
    pub fn new(coeffs: Vec<VecQ>) -> Self {
        Self { coeffs }
    }

    pub fn zero(n: usize, d: usize) -> Self {
        Self { coeffs: vec![VecQ::zeros(n); d] }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.first().map_or(0, VecQ::dim)
    }

    /// Number of stored λ-coefficients (`deg f`).
    pub fn d(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient vector of `λ^i`.
    pub fn coeff(&self, i: usize) -> &VecQ {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[VecQ] {
        &self.coeffs
    }

    /// Entry `i` as a polynomial in `λ`.
    pub fn entry(&self, i: usize) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|c| c.get(i)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(VecQ::is_zero)
    }

    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(VecQ::max_bits).max().unwrap_or(0)
    }
}

impl fmt::Debug for PolyVec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{self}")
    }
}

impl fmt::Display for PolyVec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}λ"),
                _ => format!("{c}λ^{i}"),
            });
        }
        if terms.is_empty() {
            write!(out, "0")
        } else {
            write!(out, "{}", terms.join(" + "))
        }
    }
}

/// `p^(ℓ), …, p^(1)` in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanChain {
    pub length: usize,
    pub vectors: Vec<PolyVec>,
}

impl JordanChain {
    /// `p^(k)`.
    pub fn p(&self, k: usize) -> &PolyVec {
        &self.vectors[self.length - k]
    }
}

/// `Σ_j ψ_j(λ)·A^j·u` for μ-coefficients `ψ_j`, using `len(ψ) − 1` products
/// with `A` and integer arithmetic throughout.
fn apply_psi(a: &MatQ, psi: &[PolyQ], u: &VecQ, d: usize) -> PolyVec {
    let big_j = psi.len() - 1;
    let delta = a.denominator();
    let lcm = lcm_denoms(psi.iter().flat_map(|p| p.coeffs()));
    let mut krylov = vec![u.numerators().to_vec()];
    for _ in 0..big_j {
        let next = a.int_mat_vec(krylov.last().unwrap());
        krylov.push(next);
    }
    // δ^{J−j} scales A^j u = N^j u_num / (δ^j u_den) to the common δ^J.
    let mut dpow = vec![BigInt::one(); big_j + 1];
    for j in (0..big_j).rev() {
        dpow[j] = &dpow[j + 1] * delta;
    }
    let den = &dpow[0] * &lcm * u.denominator();
    let n = u.dim();
    let coeffs = (0..d)
        .map(|i| {
            let mut acc = vec![BigInt::zero(); n];
            for (j, pj) in psi.iter().enumerate() {
                let c = pj.coeff(i);
                if c.is_zero() {
                    continue;
                }
                let s = c.numer() * (&lcm / c.denom()) * &dpow[j];
                for (x, k) in acc.iter_mut().zip(&krylov[j]) {
                    if !k.is_zero() {
                        *x += &s * k;
                    }
                }
            }
            VecQ::from_scaled(acc, den.clone())
        })
        .collect();
    PolyVec { coeffs }
}

/// Chain `p^(k) = ψ^(k)(A, λE)·f(A)^{ℓ−k}·b` for `k = ℓ..1`.
pub fn chain_from_basis_vector(a: &MatQ, fa: &MatQ, tower: &PsiTower, b: &VecQ, l: usize) -> Result<JordanChain> {
    if l == 0 || l > tower.lbar() {
        return Err(Error::RankMismatch { expected: l, found: tower.lbar() });
    }
    let mut u = b.clone();
    let mut vectors = Vec::with_capacity(l);
    for k in (1..=l).rev() {
        if u.is_zero() {
            return Err(Error::RankMismatch { expected: l, found: l - k });
        }
        vectors.push(apply_psi(a, tower.level(k), &u, tower.d));
        u = mat_vec(fa, &u)?;
    }
    if !u.is_zero() {
        return Err(Error::RankMismatch { expected: l, found: l + 1 });
    }
    Ok(JordanChain { length: l, vectors })
}

/// One chain per basis vector, by descending rank then insertion order.
pub fn jordan_chains(a: &MatQ, fa: &MatQ, f: &PolyQ, basis: &JKBasis) -> Result<Vec<JordanChain>> {
    let items: Vec<(usize, &VecQ)> = basis.iter().collect();
    if items.is_empty() {
        return Ok(Vec::new());
    }
    let tower = psi_tower(f, basis.lbar())?;
    items
        .par_iter()
        .map(|(l, b)| chain_from_basis_vector(a, fa, &tower, b, *l))
        .collect()
}

/// `(A − λE)·p` reduced modulo `f(λ)`.
pub fn apply_a_minus_lambda(a: &MatQ, f: &PolyQ, p: &PolyVec) -> Result<PolyVec> {
    let d = f.deg();
    if p.d() != d {
        return Err(Error::Dimension(format!("{} λ-coefficients for a degree-{d} factor", p.d())));
    }
    let top = p.coeff(d - 1);
    let coeffs = (0..d)
        .map(|i| {
            let mut c = mat_vec(a, p.coeff(i))?;
            if i > 0 {
                c = c.sub(p.coeff(i - 1))?;
            }
            let fi = f.coeff(i);
            if !fi.is_zero() {
                c = c.add(&top.scale(&fi))?;
            }
            Ok(c)
        })
        .collect::<Result<_>>()?;
    Ok(PolyVec { coeffs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCheck {
    pub identity: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChainReport {
    pub checks: Vec<ChainCheck>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks every chain identity in `ℚ[λ]/(f)`; failures are reported, not raised.
pub fn verify_chain(a: &MatQ, f: &PolyQ, chain: &JordanChain) -> ChainReport {
    let mut checks = Vec::new();
    let l = chain.length;
    let shape_ok = chain.vectors.len() == l
        && l > 0
        && chain.vectors.iter().all(|p| p.d() == f.deg() && p.dim() == a.rows());
    checks.push(ChainCheck { identity: format!("shape: {l} vectors of degree < {}", f.deg()), passed: shape_ok });
    if !shape_ok {
        return ChainReport { checks };
    }
    for k in (1..=l).rev() {
        let image = apply_a_minus_lambda(a, f, chain.p(k));
        let (identity, passed) = if k > 1 {
            (
                format!("(A-λE)p^({k}) ≡ p^({})", k - 1),
                image.is_ok_and(|v| &v == chain.p(k - 1)),
            )
        } else {
            ("(A-λE)p^(1) ≡ 0".to_string(), image.is_ok_and(|v| v.is_zero()))
        };
        checks.push(ChainCheck { identity, passed });
    }
    checks.push(ChainCheck { identity: "p^(1) ≠ 0".into(), passed: !chain.p(1).is_zero() });
    ChainReport { checks }
}
