//! Jordan–Krylov elimination: extracts a Jordan–Krylov basis of
//! `ker f(A)^ℓ̄` from a Krylov generating set, highest rank first.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::echelon::{normalize_residual, FfEchelon};
use crate::error::{Error, Result};
use crate::krylov::{rank_f_int, reduce_level_in_place, KrylovGenSet};
use crate::matrix::{MatQ, VecQ};
use crate::rat::content;

/// Basis vectors partitioned by rank; `level(ℓ)` holds `B^(ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JKBasis {
    levels: Vec<Vec<VecQ>>,
}

impl JKBasis {
    pub fn new(lbar: usize) -> Self {
        Self { levels: vec![Vec::new(); lbar] }
    }

    pub fn lbar(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, l: usize) -> &[VecQ] {
        &self.levels[l - 1]
    }

    /// `#B^(ℓ)` for `ℓ = 1..ℓ̄`.
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// `Σ ℓ·#B^(ℓ)`.
    pub fn weighted_size(&self) -> usize {
        self.levels.iter().enumerate().map(|(i, b)| (i + 1) * b.len()).sum()
    }

    /// `(ℓ, b)` by descending rank, then insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &VecQ)> {
        self.levels
            .iter()
            .enumerate()
            .rev()
            .flat_map(|(i, lv)| lv.iter().map(move |v| (i + 1, v)))
    }

    /// Chain-length multiset in descending order.
    pub fn chain_lengths(&self) -> Vec<usize> {
        self.iter().map(|(l, _)| l).collect()
    }
}

/// Bookkeeping of one elimination run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JkTrace {
    /// `(from, to)` rank of every demoted residual.
    pub demotions: Vec<(usize, usize)>,
    /// `(from, to)` moves made by generating-set reduction.
    pub reductions: Vec<(usize, usize)>,
    pub candidates: usize,
    pub proc4_calls: usize,
    pub proc4_time: Duration,
    /// Time spent extending `W` and `S` by accepted Krylov blocks.
    pub push_time: Duration,
}

/// Runs the elimination; `use_proc4` toggles generating-set reduction before
/// the first level and on entry to each lower nonempty level.
pub fn jk_eliminate(fa: &MatQ, a: &MatQ, genset: &KrylovGenSet, m: usize, d: usize, use_proc4: bool) -> Result<JKBasis> {
    jk_eliminate_traced(fa, a, genset, m, d, use_proc4).map(|(b, _)| b)
}

pub fn jk_eliminate_traced(
    fa: &MatQ,
    a: &MatQ,
    genset: &KrylovGenSet,
    m: usize,
    d: usize,
    use_proc4: bool,
) -> Result<(JKBasis, JkTrace)> {
    match eliminate(fa, a, genset, m, d, use_proc4, false) {
        // A modular reduction that lost part of the span shows up as
        // exhaustion; redo it with exact reductions.
        Err(Error::Inconsistent(_)) if use_proc4 => eliminate(fa, a, genset, m, d, true, true),
        r => r,
    }
}

fn eliminate(
    fa: &MatQ,
    a: &MatQ,
    genset: &KrylovGenSet,
    m: usize,
    d: usize,
    use_proc4: bool,
    exact_proc4: bool,
) -> Result<(JKBasis, JkTrace)> {
    let lbar = genset.lbar;
    let mut trace = JkTrace::default();
    if lbar == 0 || genset.is_empty() {
        return Err(Error::Inconsistent("empty Krylov generating set".into()));
    }
    let mut gs = genset.clone();
    let mut basis = JKBasis::new(lbar);
    let mut m = m as isize;

    let proc4 = |gs: &mut KrylovGenSet, l: usize, trace: &mut JkTrace| -> Result<()> {
        let t = Instant::now();
        let moves = reduce_level_in_place(fa, gs, l, exact_proc4)?;
        trace.reductions.extend(moves);
        trace.proc4_calls += 1;
        trace.proc4_time += t.elapsed();
        Ok(())
    };

    if use_proc4 {
        proc4(&mut gs, lbar, &mut trace)?;
    }
    let first = gs
        .level_mut(lbar)
        .pop_front()
        .ok_or_else(|| Error::Inconsistent(format!("no generator of rank {lbar}")))?;
    m -= lbar as isize;
    basis.levels[lbar - 1].push(first.clone());
    if m == 0 {
        return Ok((basis, trace));
    }

    // W holds f(A)^{ℓ−1}·S column-reduced; its companions are the S columns.
    let mut w = FfEchelon::content_reduced(a.rows());
    let top = pow_apply(fa, first.numerators(), lbar - 1);
    let t = Instant::now();
    add_krylov_pair(&mut w, a, top, first.numerators().to_vec(), d)?;
    trace.push_time += t.elapsed();

    for l in (1..=lbar).rev() {
        if use_proc4 && l < lbar && !gs.level(l).is_empty() {
            proc4(&mut gs, l, &mut trace)?;
        }
        while let Some(v) = gs.level_mut(l).pop_front() {
            trace.candidates += 1;
            let vi = v.numerators();
            let vp = pow_apply(fa, vi, l - 1);
            let (mut rp, mut r) = w.reduce_tagged(&vp, Some(vi));
            if rp.iter().any(|x| !x.is_zero()) {
                // Common content, so `r′` stays the image of `r`.
                let mut g = content(&r).gcd(&content(&rp));
                if w.delta() < &BigInt::zero() {
                    g = -g;
                }
                for x in r.iter_mut().chain(rp.iter_mut()) {
                    *x = &*x / &g;
                }
                m -= l as isize;
                basis.levels[l - 1].push(VecQ::from_int_vec(r.clone()));
                if m == 0 {
                    return Ok((basis, trace));
                }
                if m < 0 {
                    return Err(Error::Inconsistent("basis exceeds the multiplicity".into()));
                }
                let t = Instant::now();
                add_krylov_pair(&mut w, a, rp, r, d)?;
                trace.push_time += t.elapsed();
            } else if l > 1 && r.iter().any(|x| !x.is_zero()) {
                normalize_residual(&mut r, w.delta());
                let rank = rank_f_int(fa, &r, l)?;
                if rank >= l {
                    return Err(Error::Inconsistent("demoted residual did not lose rank".into()));
                }
                trace.demotions.push((l, rank));
                if rank > 0 {
                    gs.level_mut(rank).push_back(VecQ::from_int_vec(r));
                }
            }
        }
        if l > 1 {
            w.map_tags(|t| fa.int_mat_vec(t));
        }
    }
    Err(Error::Inconsistent(format!(
        "generating set exhausted with multiplicity {m} left"
    )))
}

fn pow_apply(fa: &MatQ, v: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut x = v.to_vec();
    for _ in 0..k {
        x = fa.int_mat_vec(&x);
    }
    x
}

/// Inserts `A^j w` with companion `A^j s` for `j < d` as one block.
fn add_krylov_pair(w: &mut FfEchelon, a: &MatQ, top: Vec<BigInt>, s: Vec<BigInt>, d: usize) -> Result<()> {
    let mut block = Vec::with_capacity(d);
    let (mut x, mut t) = (top, s);
    for j in 0..d {
        if j > 0 {
            x = a.int_mat_vec(&x);
            t = a.int_mat_vec(&t);
        }
        block.push((x.clone(), t.clone()));
    }
    if !w.push_block(block) {
        return Err(Error::Inconsistent("Krylov space of an accepted vector meets W".into()));
    }
    Ok(())
}
