//! Incremental reduced column echelon forms.
//!
//! The engine is fraction-free: all columns share one signed pivot value `δ`
//! and every entry is an integer minor of the inserted vectors, so updates
//! divide exactly. Each column may carry a companion vector that undergoes
//! the same column operations; this realizes simultaneous reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{MatQ, VecQ};
use crate::ops;
use crate::rat::{content, div_exact_in_place, max_bits, Rat};

#[derive(Clone, Debug)]
pub(crate) struct FfEchelon {
    n: usize,
    delta: BigInt,
    cols: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    tags: Vec<Vec<BigInt>>,
    /// Keep `δ` and all entries free of common content. Updates are then
    /// no longer Bareiss steps, so each push ends with a gcd pass.
    reduced: bool,
}

/// `a ← s·a − c·b` over the common prefix, treating missing entries as zero.
fn axpy_scaled(a: &mut Vec<BigInt>, s: &BigInt, c: &BigInt, b: &[BigInt]) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    let s_one = s.is_one();
    for (i, x) in a.iter_mut().enumerate() {
        let mut y = if s_one || x.is_zero() { std::mem::take(x) } else { &*x * s };
        if let Some(bi) = b.get(i) {
            if !c.is_zero() && !bi.is_zero() {
                y -= c * bi;
            }
        }
        *x = y;
    }
}

impl FfEchelon {
    pub(crate) fn new(n: usize) -> Self {
        Self { n, delta: BigInt::one(), cols: Vec::new(), pivots: Vec::new(), tags: Vec::new(), reduced: false }
    }

    /// Content-reduced variant. Pays off when the spanned subspace has a
    /// small integral basis although the inserted vectors are large.
    pub(crate) fn content_reduced(n: usize) -> Self {
        Self { reduced: true, ..Self::new(n) }
    }

    pub(crate) fn len(&self) -> usize {
        self.cols.len()
    }

    pub(crate) fn delta(&self) -> &BigInt {
        &self.delta
    }

    #[cfg(test)]
    pub(crate) fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub(crate) fn columns(&self) -> &[Vec<BigInt>] {
        &self.cols
    }

    #[cfg(test)]
    pub(crate) fn tags(&self) -> &[Vec<BigInt>] {
        &self.tags
    }

    /// Raw residual `δ·v − Σ v[p_j]·C_j`.
    pub(crate) fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.reduce_tagged(v, None).0
    }

    /// Raw residuals of `v` and of its companion under the same combination.
    pub(crate) fn reduce_tagged(&self, v: &[BigInt], tag: Option<&[BigInt]>) -> (Vec<BigInt>, Vec<BigInt>) {
        debug_assert_eq!(v.len(), self.n);
        let mut r = v.to_vec();
        let mut t = tag.map(<[BigInt]>::to_vec).unwrap_or_default();
        if !self.delta.is_one() {
            for x in r.iter_mut().chain(t.iter_mut()) {
                if !x.is_zero() {
                    *x *= &self.delta;
                }
            }
        }
        for (j, &p) in self.pivots.iter().enumerate() {
            let c = &v[p];
            if c.is_zero() {
                continue;
            }
            axpy_scaled(&mut r, &BigInt::one(), c, &self.cols[j]);
            if tag.is_some() || !self.tags[j].is_empty() {
                axpy_scaled(&mut t, &BigInt::one(), c, &self.tags[j]);
            }
        }
        ops::observe_bits(max_bits(&r));
        (r, t)
    }

    /// Appends a nonzero raw residual (and its companion residual).
    pub(crate) fn push(&mut self, r: Vec<BigInt>, t: Vec<BigInt>) {
        if self.reduced {
            return self.push_reduced(r, t);
        }
        let q = r.iter().position(|x| !x.is_zero()).expect("pushing a zero residual");
        let rq = r[q].clone();
        for (col, tag) in self.cols.iter_mut().zip(self.tags.iter_mut()) {
            let c = col[q].clone();
            axpy_scaled(col, &rq, &c, &r);
            div_exact_in_place(col, &self.delta);
            if !tag.is_empty() || !t.is_empty() {
                axpy_scaled(tag, &rq, &c, &t);
                div_exact_in_place(tag, &self.delta);
            }
        }
        self.cols.push(r);
        self.tags.push(t);
        self.pivots.push(q);
        self.delta = rq;
    }

    /// `R_j ← R_j − R_j[q]·r/r_q` over the common denominator `δ·r_q`, then
    /// content removal.
    fn push_reduced(&mut self, mut r: Vec<BigInt>, mut t: Vec<BigInt>) {
        let q = r.iter().position(|x| !x.is_zero()).expect("pushing a zero residual");
        // Only the direction of the pair matters here.
        let g = content(&r).gcd(&content(&t));
        if !g.is_one() {
            div_exact_in_place(&mut r, &g);
            div_exact_in_place(&mut t, &g);
        }
        let rq = r[q].clone();
        for (col, tag) in self.cols.iter_mut().zip(self.tags.iter_mut()) {
            let c = col[q].clone();
            if c.is_zero() {
                scale_in_place(col, &rq);
                scale_in_place(tag, &rq);
                continue;
            }
            axpy_scaled(col, &rq, &c, &r);
            if !tag.is_empty() || !t.is_empty() {
                axpy_scaled(tag, &rq, &c, &t);
            }
        }
        scale_in_place(&mut r, &self.delta);
        scale_in_place(&mut t, &self.delta);
        self.cols.push(r);
        self.tags.push(t);
        self.pivots.push(q);
        self.delta *= rq;
        self.remove_content();
    }

    fn remove_content(&mut self) {
        let mut g = self.delta.abs();
        for x in self.cols.iter().chain(&self.tags).flatten() {
            if g.is_one() {
                break;
            }
            // Most entries are already multiples of the running gcd.
            if !x.is_zero() && !(x % &g).is_zero() {
                g = g.gcd(x);
            }
        }
        if self.delta.is_negative() {
            g = -g;
        }
        if g.is_one() {
            return;
        }
        self.delta /= &g;
        for v in self.cols.iter_mut().chain(self.tags.iter_mut()) {
            div_exact_in_place(v, &g);
        }
    }

    /// Pushes several vectors (with companions) at once. Equivalent to
    /// reducing and pushing them one by one, but the existing columns are
    /// rewritten once instead of once per vector. Returns `false`, leaving
    /// the state untouched, if the block is dependent on the current span.
    pub(crate) fn push_block(&mut self, block: Vec<(Vec<BigInt>, Vec<BigInt>)>) -> bool {
        if self.reduced {
            let mut next = self.clone();
            for (x, s) in block {
                let (r, t) = next.reduce_tagged(&x, Some(&s));
                if r.iter().all(Zero::is_zero) {
                    return false;
                }
                next.push(r, t);
            }
            *self = next;
            return true;
        }
        let d0 = self.delta.clone();
        // The new columns form their own echelon, seeded with δ₀: with `y`
        // already reduced against the old columns, the full-system residual
        // is `(δ·y − Σ y[q]·Z_q) / δ₀`.
        let mut sub = FfEchelon { delta: d0.clone(), ..FfEchelon::new(self.n) };
        for (x, s) in block {
            let (y, ty) = self.reduce_tagged(&x, Some(&s));
            let (r, t) = if sub.cols.is_empty() {
                (y, ty)
            } else {
                let (mut r, mut t) = sub.reduce_tagged(&y, Some(&ty));
                div_exact_in_place(&mut r, &d0);
                div_exact_in_place(&mut t, &d0);
                (r, t)
            };
            if r.iter().all(Zero::is_zero) {
                return false;
            }
            sub.push(r, t);
        }
        let df = &sub.delta;
        let update = |v: &mut Vec<BigInt>, coeffs: &[BigInt], zs: &[Vec<BigInt>]| {
            if v.is_empty() {
                return;
            }
            for (i, x) in v.iter_mut().enumerate() {
                let mut acc = if x.is_zero() { BigInt::zero() } else { &*x * df };
                for (c, z) in coeffs.iter().zip(zs) {
                    if !c.is_zero() && !z[i].is_zero() {
                        acc -= c * &z[i];
                    }
                }
                *x = if acc.is_zero() { acc } else { acc / &d0 };
            }
        };
        for (col, tag) in self.cols.iter_mut().zip(self.tags.iter_mut()) {
            let coeffs: Vec<BigInt> = sub.pivots.iter().map(|&q| col[q].clone()).collect();
            update(col, &coeffs, &sub.cols);
            if !sub.tags.iter().all(Vec::is_empty) {
                update(tag, &coeffs, &sub.tags);
            }
        }
        self.cols.append(&mut sub.cols);
        self.tags.append(&mut sub.tags);
        self.pivots.append(&mut sub.pivots);
        self.delta = sub.delta;
        true
    }

    /// Applies `f` to every companion vector (used when the companion space is
    /// mapped by a linear operator).
    pub(crate) fn map_tags(&mut self, f: impl Fn(&[BigInt]) -> Vec<BigInt>) {
        for t in self.tags.iter_mut() {
            *t = f(t);
        }
        if self.reduced {
            self.remove_content();
        }
    }
}

fn scale_in_place(v: &mut [BigInt], s: &BigInt) {
    if !s.is_one() {
        for x in v.iter_mut().filter(|x| !x.is_zero()) {
            *x *= s;
        }
    }
}

/// Multiplies by `sign(δ)` and divides by the positive content, so the
/// result points the same way as `residual / δ`.
pub(crate) fn normalize_residual(r: &mut [BigInt], delta: &BigInt) {
    let g = content(r);
    if g.is_zero() {
        return;
    }
    let g = if delta.is_negative() { -g } else { g };
    div_exact_in_place(r, &g);
}

/// Reduced column echelon form of a growing set of generator vectors.
///
/// The exposed basis columns have pivot entry 1 and vanish at every other
/// pivot row; each pivot row is the first nonzero row of its column.
#[derive(Clone, Debug)]
pub struct EchelonState {
    ff: FfEchelon,
    gen_dens: Vec<BigInt>,
    generators: Vec<VecQ>,
}

/// Outcome of inserting one vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Insertion {
    /// Normalized residual; zero exactly when the vector was already in the span.
    pub residual: VecQ,
    /// `v − Σ coeffs_g · generator_g` is a positive multiple of `residual`.
    pub coeffs: Vec<Rat>,
}

impl EchelonState {
    pub fn new(n: usize) -> Self {
        Self { ff: FfEchelon::new(n), gen_dens: Vec::new(), generators: Vec::new() }
    }

    pub fn from_vectors<'a>(n: usize, vs: impl IntoIterator<Item = &'a VecQ>) -> Result<Self> {
        let mut s = Self::new(n);
        for v in vs {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.ff.n
    }

    pub fn rank(&self) -> usize {
        self.ff.len()
    }

    /// Vectors that enlarged the span, in insertion order.
    pub fn generators(&self) -> &[VecQ] {
        &self.generators
    }

    fn sorted_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.rank()).collect();
        idx.sort_by_key(|&j| self.ff.pivots[j]);
        idx
    }

    /// Pivot rows, strictly increasing.
    pub fn pivot_rows(&self) -> Vec<usize> {
        self.sorted_order().into_iter().map(|j| self.ff.pivots[j]).collect()
    }

    /// Basis columns ordered by pivot row, each with pivot entry 1.
    pub fn basis_columns(&self) -> Vec<VecQ> {
        self.sorted_order()
            .into_iter()
            .map(|j| VecQ::from_scaled(self.ff.cols[j].clone(), self.ff.delta.clone()))
            .collect()
    }

    pub fn basis_matrix(&self) -> MatQ {
        MatQ::from_columns(&self.basis_columns()).unwrap_or_else(|_| MatQ::zeros(self.dim(), 0))
    }

    fn check_dim(&self, v: &VecQ) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "vector of length {} against echelon of {} rows",
                v.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Reduces `v` without changing the state.
    pub fn reduce(&self, v: &VecQ) -> Result<Insertion> {
        self.check_dim(v)?;
        let (r, t) = self.ff.reduce_tagged(v.numerators(), Some(&[]));
        Ok(self.finish(v, r, &t))
    }

    fn finish(&self, v: &VecQ, mut r: Vec<BigInt>, t: &[BigInt]) -> Insertion {
        // δ·v_num − Σ_g (−t_g)·gen_num_g = r, gen_num_g = den_g·gen_g, v = v_num/v_den
        let scale = &self.ff.delta * v.denominator();
        let coeffs = (0..self.generators.len())
            .map(|g| {
                let tg = t.get(g).cloned().unwrap_or_default();
                Rat::new(-tg * &self.gen_dens[g], scale.clone())
            })
            .collect();
        normalize_residual(&mut r, &self.ff.delta);
        Insertion { residual: VecQ::from_int_vec(r), coeffs }
    }

    pub fn contains(&self, v: &VecQ) -> Result<bool> {
        self.check_dim(v)?;
        Ok(self.ff.reduce(v.numerators()).iter().all(Zero::is_zero))
    }

    /// Inserts `v`; the span grows exactly when the residual is nonzero.
    pub fn insert(&mut self, v: &VecQ) -> Result<Insertion> {
        self.check_dim(v)?;
        let k = self.generators.len();
        let mut unit = vec![BigInt::zero(); k + 1];
        unit[k] = BigInt::one();
        let (r, t) = self.ff.reduce_tagged(v.numerators(), Some(&unit));
        let out = self.finish(v, r.clone(), &t);
        if !out.residual.is_zero() {
            self.ff.push(r, t);
            self.gen_dens.push(v.denominator().clone());
            self.generators.push(v.clone());
        }
        Ok(out)
    }
}

/// Functional form of [`EchelonState::insert`].
pub fn echelon_insert(mut state: EchelonState, v: &VecQ) -> Result<(EchelonState, VecQ, Vec<Rat>)> {
    let ins = state.insert(v)?;
    Ok((state, ins.residual, ins.coeffs))
}

/// Residuals of a simultaneous column reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimultaneousReduction {
    /// `v′ − W·c`.
    pub r_prime: VecQ,
    /// `v − S·c`.
    pub r: VecQ,
    /// The elimination coefficients, one per generator of `W`.
    pub coeffs: Vec<Rat>,
}

/// Computes the combination `c` that reduces `v′` against the generators of
/// `w` and applies the same combination to `v` against the columns of `s`.
pub fn simultaneous_reduce(w: &EchelonState, s: &MatQ, v_prime: &VecQ, v: &VecQ) -> Result<SimultaneousReduction> {
    if s.cols() != w.generators().len() {
        return Err(Error::Dimension(format!(
            "{} companion columns for {} elimination columns",
            s.cols(),
            w.generators().len()
        )));
    }
    if s.rows() != v.dim() {
        return Err(Error::Dimension("companion rows differ from vector length".into()));
    }
    let red = w.reduce(v_prime)?;
    let mut r_prime = v_prime.clone();
    let mut r = v.clone();
    for (g, c) in red.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        r_prime = r_prime.sub(&w.generators()[g].scale(c))?;
        r = r.sub(&s.column(g).scale(c))?;
    }
    Ok(SimultaneousReduction { r_prime, r, coeffs: red.coeffs })
}
