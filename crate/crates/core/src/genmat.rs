//! Test matrices with a prescribed Jordan structure: block companion
//! matrices scrambled by random elementary similarities.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64`, so a seed fully
//! determines the generated matrix on every platform.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::MatQ;
use crate::poly::PolyQ;
use crate::rat::{ratio, Rat};

/// Monic factors with the lengths of their Jordan chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    pub blocks: Vec<(PolyQ, Vec<usize>)>,
}

impl BlockSpec {
    pub fn new(blocks: Vec<(PolyQ, Vec<usize>)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Spec("empty spec".into()));
        }
        for (f, lengths) in &blocks {
            if !f.is_monic() || f.deg() == 0 {
                return Err(Error::Spec(format!("factor {f} must be monic of degree ≥ 1")));
            }
            if lengths.is_empty() || lengths.contains(&0) {
                return Err(Error::Spec(format!("chain lengths for {f} must be positive")));
            }
        }
        Ok(Self { blocks })
    }

    /// Matrix order `Σ deg f · Σ lengths`.
    pub fn order(&self) -> usize {
        self.blocks.iter().map(|(f, ls)| f.deg() * ls.iter().sum::<usize>()).sum()
    }

    /// `(f, m, ℓ̄)` per block.
    pub fn multiplicities(&self) -> Vec<(PolyQ, usize, usize)> {
        self.blocks
            .iter()
            .map(|(f, ls)| (f.clone(), ls.iter().sum(), *ls.iter().max().unwrap()))
            .collect()
    }

    /// Chain lengths of `f`, longest first.
    pub fn chain_lengths(&self, f: &PolyQ) -> Option<Vec<usize>> {
        self.blocks.iter().find(|(g, _)| g == f).map(|(_, ls)| {
            let mut ls = ls.clone();
            ls.sort_unstable_by(|a, b| b.cmp(a));
            ls
        })
    }
}

impl FromStr for BlockSpec {
    type Err = Error;

    /// `"<coeffs>:<l1,l2,…>[;<coeffs>:<…>]"`, e.g. `"5,1,1:3,2;-1,1:1"`.
    fn from_str(s: &str) -> Result<Self> {
        let blocks = s
            .split(';')
            .filter(|b| !b.trim().is_empty())
            .map(|b| {
                let (poly, lengths) = b
                    .split_once(':')
                    .ok_or_else(|| Error::Spec(format!("missing `:` in `{b}`")))?;
                let f = PolyQ::parse(poly)?;
                let ls = lengths
                    .split(',')
                    .map(|l| {
                        l.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Spec(format!("bad chain length `{l}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((f, ls))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks)
    }
}

impl fmt::Display for BlockSpec {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|(f, ls)| {
                let ls: Vec<String> = ls.iter().map(ToString::to_string).collect();
                format!("{}:{}", f.to_coeff_string(), ls.join(","))
            })
            .collect();
        fm.write_str(&parts.join(";"))
    }
}

/// Block diagonal matrix; a chain of length `c` for `f` contributes a `c×c`
/// grid with `C(f)` on the diagonal and `E_d` on the superdiagonal.
pub fn build_block_matrix(spec: &BlockSpec) -> Result<MatQ> {
    let n = spec.order();
    if n == 0 {
        return Err(Error::Spec("empty spec".into()));
    }
    let mut e = vec![Rat::zero(); n * n];
    let mut base = 0;
    for (f, lengths) in &spec.blocks {
        let d = f.deg();
        for &c in lengths {
            for blk in 0..c {
                let o = base + blk * d;
                for i in 1..d {
                    e[(o + i) * n + o + i - 1] = Rat::one();
                }
                for i in 0..d {
                    e[(o + i) * n + o + d - 1] = -f.coeff(i);
                }
                if blk + 1 < c {
                    for i in 0..d {
                        e[(o + i) * n + o + d + i] = Rat::one();
                    }
                }
            }
            base += c * d;
        }
    }
    MatQ::new(n, n, e)
}

/// `T A T⁻¹` for a product `T` of `steps` random elementary matrices
/// `T_ij(m)` (row `j` += `m`·row `i`), `0 < |m| ≤ coeff_bound`.
pub fn scramble(a: &MatQ, seed: u64, steps: usize, coeff_bound: u32) -> MatQ {
    let n = a.rows();
    if n < 2 || coeff_bound == 0 || steps == 0 {
        return a.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut num = a.numerators().to_vec();
    let b = coeff_bound as i64;
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let mut m = rng.gen_range(-b..b);
        if m >= 0 {
            m += 1;
        }
        let m = BigInt::from(m);
        // Left by T_ij(m): row_j += m·row_i.
        for k in 0..n {
            let t = &num[i * n + k] * &m;
            num[j * n + k] += t;
        }
        // Right by T_ij(−m): col_i −= m·col_j.
        for k in 0..n {
            let t = &num[k * n + j] * &m;
            num[k * n + i] -= t;
        }
    }
    MatQ::from_scaled(n, n, num, a.denominator().clone())
}

/// Default step count for [`scramble`].
pub fn default_steps(n: usize) -> usize {
    4 * n
}

pub const DEFAULT_COEFF_BOUND: u32 = 2;

/// Random Eisenstein polynomial `λ^d + p·(k_{d−1}λ^{d−1} + … + k_1λ) + p`,
/// `k_i ∈ {−1, 0, 1}`; irreducible over ℚ for prime `p`.
pub fn eisenstein(rng: &mut ChaCha8Rng, d: usize, p: i64) -> PolyQ {
    let mut c = vec![p];
    c.extend((1..d).map(|_| p * rng.gen_range(-1..=1)));
    c.push(1);
    PolyQ::from_ints(&c)
}

/// `[(f, [3,2,2,1,1,1])]` with `deg f = d`; `n = 10d`.
pub fn paper71_spec(d: usize, seed: u64) -> Result<BlockSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BlockSpec::new(vec![(eisenstein(&mut rng, d, 2), vec![3, 2, 2, 1, 1, 1])])
}

/// `[(f,[5]), (g₁,[2]), (g₂,[1]), (g₃,[1])]` with degrees `d, d, 2d, d`;
/// `n = 10d`. Distinct constant terms keep the factors distinct.
pub fn paper72_spec(d: usize, seed: u64) -> Result<BlockSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = eisenstein(&mut rng, d, 2);
    let g1 = eisenstein(&mut rng, d, 3);
    let g2 = eisenstein(&mut rng, 2 * d, 5);
    let g3 = eisenstein(&mut rng, d, 7);
    BlockSpec::new(vec![(f, vec![5]), (g1, vec![2]), (g2, vec![1]), (g3, vec![1])])
}

const PRIMES: [i64; 6] = [2, 3, 5, 7, 11, 13];

/// Random spec with irreducible, pairwise distinct factors: up to
/// `max_factors` factors of degree `1..=max_deg`, each with `1..=max_chains`
/// chains of length `1..=max_len`, total order at most `max_n`.
pub fn random_spec(
    rng: &mut ChaCha8Rng,
    max_factors: usize,
    max_deg: usize,
    max_chains: usize,
    max_len: usize,
    max_n: usize,
) -> BlockSpec {
    loop {
        let k = rng.gen_range(1..=max_factors.min(PRIMES.len()));
        let mut primes = PRIMES.to_vec();
        primes.shuffle(rng);
        let blocks: Vec<(PolyQ, Vec<usize>)> = primes[..k]
            .iter()
            .map(|&p| {
                let d = rng.gen_range(1..=max_deg);
                let p = if rng.gen_bool(0.5) { p } else { -p };
                let f = eisenstein(rng, d, p);
                let chains = rng.gen_range(1..=max_chains);
                (f, (0..chains).map(|_| rng.gen_range(1..=max_len)).collect())
            })
            .collect();
        let spec = BlockSpec { blocks };
        if spec.order() <= max_n {
            return spec;
        }
    }
}

/// Random spec with linear factors `λ − α`, `α` drawn from distinct small
/// integers and halves/thirds, total order at most `max_n`.
pub fn random_rational_spec(rng: &mut ChaCha8Rng, max_eigs: usize, max_n: usize) -> BlockSpec {
    let mut alphas: Vec<Rat> = (-3..=3).map(|k| ratio(k, 1)).collect();
    alphas.extend([ratio(1, 2), ratio(-1, 2), ratio(2, 3)]);
    loop {
        alphas.shuffle(rng);
        let k = rng.gen_range(1..=max_eigs);
        let blocks: Vec<(PolyQ, Vec<usize>)> = alphas[..k]
            .iter()
            .map(|alpha| {
                let chains = rng.gen_range(1..=3);
                let f = PolyQ::new(vec![-alpha.clone(), Rat::one()]);
                (f, (0..chains).map(|_| rng.gen_range(1..=4)).collect())
            })
            .collect();
        let spec = BlockSpec { blocks };
        if spec.order() <= max_n {
            return spec;
        }
    }
}

/// Generated matrix for `spec` with the default scramble.
pub fn generate(spec: &BlockSpec, seed: u64) -> Result<MatQ> {
    let a = build_block_matrix(spec)?;
    let n = a.rows();
    Ok(scramble(&a, seed, default_steps(n), DEFAULT_COEFF_BOUND))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::char_poly;
    use crate::factor::is_irreducible;

    #[test]
    fn parse_and_display() {
        let s: BlockSpec = "5,1,1:3,2;-1/2,1:1".parse().unwrap();
        assert_eq!(s.order(), 2 * 5 + 1);
        assert_eq!(s.to_string(), "5,1,1:3,2;-1/2,1:1");
        assert!("".parse::<BlockSpec>().is_err());
        assert!("5,1,1".parse::<BlockSpec>().is_err());
        assert!("5,1,2:1".parse::<BlockSpec>().is_err());
        assert!("5,1,1:0".parse::<BlockSpec>().is_err());
        assert!("5,1,1:x".parse::<BlockSpec>().is_err());
    }

    #[test]
    fn single_chain_block_is_companion_like() {
        let f = PolyQ::from_ints(&[5, 1, 1]);
        let a = build_block_matrix(&BlockSpec::new(vec![(f.clone(), vec![3])]).unwrap()).unwrap();
        assert_eq!(a.rows(), 6);
        assert_eq!(char_poly(&a).unwrap(), f.pow(3));
        // E_2 on the superdiagonal block.
        assert_eq!(a.get(0, 2), Rat::one());
        assert_eq!(a.get(1, 3), Rat::one());
        assert_eq!(a.get(0, 1), ratio(-5, 1));
    }

    #[test]
    fn scramble_is_a_similarity() {
        let spec: BlockSpec = "2,0,1:2,1;-3,1:2".parse().unwrap();
        let a = build_block_matrix(&spec).unwrap();
        assert_eq!(scramble(&a, 9, 0, 2), a);
        let b = scramble(&a, 9, 40, 2);
        assert_ne!(a, b);
        assert_eq!(char_poly(&a).unwrap(), char_poly(&b).unwrap());
        assert_eq!(b, scramble(&a, 9, 40, 2));
    }

    #[test]
    fn suite_specs() {
        for d in 1..=5 {
            let s = paper71_spec(d, 3).unwrap();
            assert_eq!(s.order(), 10 * d);
            assert!(is_irreducible(&s.blocks[0].0));
            let s = paper72_spec(d, 3).unwrap();
            assert_eq!(s.order(), 10 * d);
            assert_eq!(s.multiplicities().iter().map(|x| x.1).collect::<Vec<_>>(), vec![5, 2, 1, 1]);
        }
    }

    #[test]
    fn random_specs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let s = random_spec(&mut rng, 3, 4, 5, 4, 40);
            assert!(s.order() <= 40);
            for (i, (f, _)) in s.blocks.iter().enumerate() {
                assert!(is_irreducible(f));
                assert!(s.blocks[..i].iter().all(|(g, _)| g != f));
            }
            let r = random_rational_spec(&mut rng, 3, 10);
            assert!(r.order() <= 10 && r.blocks.iter().all(|(f, _)| f.deg() == 1));
        }
    }
}
