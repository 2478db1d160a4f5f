//! Krylov generating sets of `ker f(A)^ℓ̄` and their reduction.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::annihilator::AnnihilatorTable;
use crate::echelon::{normalize_residual, FfEchelon};
use crate::error::{Error, Result};
use crate::multimod;
use crate::matrix::{mat_poly_apply_vec, MatQ, VecQ};
use crate::poly::PolyQ;
use crate::rat::content;

/// Generators partitioned by `f`-rank; `level(ℓ)` holds `V^(ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrylovGenSet {
    pub d: usize,
    pub lbar: usize,
    levels: Vec<VecDeque<VecQ>>,
}

impl KrylovGenSet {
    pub fn new(d: usize, lbar: usize) -> Self {
        Self { d, lbar, levels: vec![VecDeque::new(); lbar] }
    }

    pub fn level(&self, l: usize) -> &VecDeque<VecQ> {
        &self.levels[l - 1]
    }

    pub fn level_mut(&mut self, l: usize) -> &mut VecDeque<VecQ> {
        &mut self.levels[l - 1]
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(VecDeque::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `#V^(ℓ)` for `ℓ = 1..ℓ̄`.
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(VecDeque::len).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &VecQ)> {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(i, lv)| lv.iter().map(move |v| (i + 1, v)))
    }
}

/// Iterates `N_f` on integer numerators until zero; returns the count.
pub(crate) fn rank_f_int(fa: &MatQ, v: &[BigInt], lbar: usize) -> Result<usize> {
    let mut x = v.to_vec();
    for l in 0..=lbar {
        if x.iter().all(Zero::is_zero) {
            return Ok(l);
        }
        if l < lbar {
            x = fa.int_mat_vec(&x);
        }
    }
    Err(Error::NotInKernelTower(lbar))
}

/// Smallest `ℓ` with `f(A)^ℓ v = 0`, given `v ∈ ker f(A)^ℓ̄`.
pub fn rank_f(fa: &MatQ, v: &VecQ, lbar: usize) -> Result<usize> {
    if v.dim() != fa.cols() {
        return Err(Error::Dimension(format!("vector length {} vs order {}", v.dim(), fa.cols())));
    }
    rank_f_int(fa, v.numerators(), lbar)
}

/// `V^(ℓ) = { g_e(A)e : ℓ_e = ℓ }` in basis order.
pub fn krylov_generating_set(a: &MatQ, f: &PolyQ, table: &AnnihilatorTable) -> Result<KrylovGenSet> {
    let entry = table.entry(f).ok_or(Error::FactorNotDividing)?;
    let mut gs = KrylovGenSet::new(f.deg(), entry.lbar);
    for (i, e) in table.basis.iter().enumerate() {
        let l = entry.ell[i];
        if l == 0 {
            continue;
        }
        let v = mat_poly_apply_vec(&entry.cofactors[i], a, e)?;
        gs.level_mut(l).push_back(v);
    }
    Ok(gs)
}

/// Column-reduces `V^(ℓ)` and re-files each nonzero reduced column under its
/// own rank; zero columns disappear.
pub fn reduce_gen_set(fa: &MatQ, genset: &KrylovGenSet, l: usize) -> Result<KrylovGenSet> {
    let mut out = genset.clone();
    reduce_level_in_place(fa, &mut out, l, true)?;
    Ok(out)
}

fn rref_exact(vs: &[&[BigInt]], n: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut ech = FfEchelon::new(n);
    let mut accepted = Vec::new();
    for (k, v) in vs.iter().enumerate() {
        let r = ech.reduce(v);
        if r.iter().any(|x| !x.is_zero()) {
            ech.push(r, Vec::new());
            accepted.push(k);
        }
    }
    let cols = ech
        .columns()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            normalize_residual(&mut c, ech.delta());
            c
        })
        .collect();
    (cols, accepted)
}

/// `c = s·v` for some positive rational `s`.
fn positive_multiple(c: &[BigInt], v: &[BigInt]) -> bool {
    let Some(q) = c.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if v[q].is_zero() || v[q].is_negative() != c[q].is_negative() {
        return false;
    }
    c.iter().zip(v).all(|(x, y)| x.is_zero() == y.is_zero())
        && c.iter().zip(v).all(|(x, y)| x * &v[q] == y * &c[q])
}

/// Ranks of reduced columns. A column that is just a rescaled version of the
/// input that introduced it keeps the level's rank; the others are ranked
/// exactly.
fn ranked(
    fa: &MatQ,
    (cols, accepted): (Vec<Vec<BigInt>>, Vec<usize>),
    vs: &[&[BigInt]],
    l: usize,
) -> Result<Vec<(Vec<BigInt>, usize)>> {
    cols.into_iter()
        .zip(accepted)
        .map(|(c, k)| {
            let rank = if positive_multiple(&c, vs[k]) { l } else { rank_f_int(fa, &c, l)? };
            Ok((c, rank))
        })
        .collect()
}

/// Primitive copies with positive pivots when the inputs already form a
/// reduced echelon set: distinct leading rows, each zero in the others'.
fn already_reduced(vs: &[&[BigInt]]) -> Option<Vec<Vec<BigInt>>> {
    let leads: Vec<usize> = vs.iter().map(|v| v.iter().position(|x| !x.is_zero())).collect::<Option<_>>()?;
    let mut seen = HashSet::with_capacity(leads.len());
    if !leads.iter().all(|q| seen.insert(*q)) {
        return None;
    }
    for (i, v) in vs.iter().enumerate() {
        if leads.iter().enumerate().any(|(j, &q)| j != i && !v[q].is_zero()) {
            return None;
        }
    }
    Some(
        vs.iter()
            .zip(&leads)
            .map(|(v, &q)| {
                let mut g = content(v);
                if v[q].is_negative() {
                    g = -g;
                }
                v.iter().map(|x| x / &g).collect()
            })
            .collect(),
    )
}

/// With `exact` unset the echelon form is first tried modularly; a result
/// that fails the exact rank test falls back to the fraction-free one.
pub(crate) fn reduce_level_in_place(
    fa: &MatQ,
    gs: &mut KrylovGenSet,
    l: usize,
    exact: bool,
) -> Result<Vec<(usize, usize)>> {
    let n = fa.rows();
    let vs: Vec<VecQ> = gs.level_mut(l).drain(..).collect();
    let refs: Vec<&[BigInt]> = vs.iter().map(VecQ::numerators).collect();
    if let Some(cols) = already_reduced(&refs) {
        gs.level_mut(l).extend(cols.into_iter().map(VecQ::from_int_vec));
        return Ok(Vec::new());
    }
    let modular = if exact {
        None
    } else {
        multimod::rref_columns(&refs, n).and_then(|r| ranked(fa, r, &refs, l).ok())
    };
    let cols = match modular {
        Some(c) => c,
        None => ranked(fa, rref_exact(&refs, n), &refs, l)?,
    };
    let mut moves = Vec::new();
    for (c, rank) in cols {
        if rank != l {
            moves.push((l, rank));
        }
        gs.level_mut(rank).push_back(VecQ::from_int_vec(c));
    }
    Ok(moves)
}
