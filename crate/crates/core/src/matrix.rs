//! Dense exact-rational vectors and matrices.
//!
//! Both are stored as an integer numerator array over one positive common
//! denominator, kept in lowest terms. Kernels work on the numerators and only
//! touch the denominator once per call.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modp;
use crate::ops;
use crate::poly::PolyQ;
use crate::rat::{content, lcm_denoms, make_primitive, max_bits, Rat};

fn canonicalize(num: &mut [BigInt], den: &mut BigInt) {
    assert!(!den.is_zero(), "zero denominator");
    if den.is_negative() {
        *den = -&*den;
        for x in num.iter_mut() {
            *x = -&*x;
        }
    }
    let g = content(num).gcd(den);
    if g.is_zero() {
        *den = BigInt::one();
        return;
    }
    if !g.is_one() {
        for x in num.iter_mut() {
            *x = &*x / &g;
        }
        *den = &*den / &g;
    }
}

fn rats_to_scaled(entries: &[Rat]) -> (Vec<BigInt>, BigInt) {
    let den = lcm_denoms(entries);
    let num = entries
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    (num, den)
}

/// Column vector over ℚ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VecQ {
    num: Vec<BigInt>,
    den: BigInt,
}

impl VecQ {
    pub fn new(entries: Vec<Rat>) -> Self {
        let (num, den) = rats_to_scaled(&entries);
        Self::from_scaled(num, den)
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Self::from_int_vec(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn from_int_vec(num: Vec<BigInt>) -> Self {
        Self { num, den: BigInt::one() }
    }

    /// `num / den`, brought to lowest terms.
    pub fn from_scaled(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        canonicalize(&mut num, &mut den);
        Self { num, den }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_int_vec(vec![BigInt::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut num = vec![BigInt::zero(); n];
        num[i] = BigInt::one();
        Self::from_int_vec(num)
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn get(&self, i: usize) -> Rat {
        Rat::new(self.num[i].clone(), self.den.clone())
    }

    pub fn entries(&self) -> Vec<Rat> {
        (0..self.dim()).map(|i| self.get(i)).collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.num.iter().position(|x| !x.is_zero())
    }

    /// Positive multiple with coprime integer entries (signs kept).
    pub fn primitive(&self) -> VecQ {
        let mut num = self.num.clone();
        make_primitive(&mut num);
        Self::from_int_vec(num)
    }

    pub fn scale(&self, c: &Rat) -> VecQ {
        let num = self.num.iter().map(|x| x * c.numer()).collect();
        Self::from_scaled(num, &self.den * c.denom())
    }

    pub fn add(&self, other: &VecQ) -> Result<VecQ> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &VecQ) -> Result<VecQ> {
        self.combine(other, true)
    }

    fn combine(&self, other: &VecQ, negate: bool) -> Result<VecQ> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "vector lengths {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let l = self.den.lcm(&other.den);
        let (sa, sb) = (&l / &self.den, &l / &other.den);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| if negate { a * &sa - b * &sb } else { a * &sa + b * &sb })
            .collect();
        Ok(Self::from_scaled(num, l))
    }

    pub fn max_bits(&self) -> u64 {
        max_bits(&self.num).max(self.den.bits())
    }

    /// Residues modulo `p`, or `None` when `p` divides the denominator.
    pub(crate) fn mod_p(&self, p: u64) -> Option<Vec<u64>> {
        let inv = den_inverse(&self.den, p)?;
        Some(self.num.iter().map(|x| mod_u64(x, p) * inv % p).collect())
    }
}

impl fmt::Debug for VecQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VecQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub(crate) fn mod_u64(x: &BigInt, p: u64) -> u64 {
    if let Some(v) = x.to_i64() {
        return v.rem_euclid(p as i64) as u64;
    }
    let r = x
        .magnitude()
        .iter_u64_digits()
        .rev()
        .fold(0u128, |r, d| ((r << 64) | d as u128) % p as u128) as u64;
    if x.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

fn den_inverse(den: &BigInt, p: u64) -> Option<u64> {
    let d = mod_u64(den, p);
    (d != 0).then(|| modp::inv(d, p))
}

/// Dense row-major matrix over ℚ.
#[derive(Clone)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    num: Vec<BigInt>,
    den: BigInt,
    /// Numerators as `i64` with their maximal bit length, if they fit.
    small: OnceLock<Option<(Vec<i64>, u64)>>,
}

impl PartialEq for MatQ {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.den == other.den
            && self.num == other.num
    }
}

impl Eq for MatQ {}

impl MatQ {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let (num, den) = rats_to_scaled(&entries);
        Ok(Self::from_scaled(rows, cols, num, den))
    }

    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Self::from_scaled(
            rows,
            cols,
            entries.iter().map(|&x| BigInt::from(x)).collect(),
            BigInt::one(),
        )
    }

    pub fn from_rows(rows: &[Vec<Rat>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn from_columns(cols: &[VecQ]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, VecQ::dim);
        if cols.iter().any(|v| v.dim() != r) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        let den = cols.iter().fold(BigInt::one(), |acc, v| acc.lcm(&v.den));
        let scales: Vec<BigInt> = cols.iter().map(|v| &den / &v.den).collect();
        let mut num = Vec::with_capacity(r * c);
        for i in 0..r {
            for (v, s) in cols.iter().zip(&scales) {
                num.push(&v.num[i] * s);
            }
        }
        Ok(Self::from_scaled(r, c, num, den))
    }

    pub fn from_scaled(rows: usize, cols: usize, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        canonicalize(&mut num, &mut den);
        Self { rows, cols, num, den, small: OnceLock::new() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_scaled(rows, cols, vec![BigInt::zero(); rows * cols], BigInt::one())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = vec![BigInt::zero(); n * n];
        for i in 0..n {
            m[i * n + i] = BigInt::one();
        }
        Self::from_scaled(n, n, m, BigInt::one())
    }

    /// Companion matrix of a monic polynomial: ones on the subdiagonal and
    /// `-f_0, …, -f_{d-1}` in the last column.
    pub fn companion(f: &PolyQ) -> Result<Self> {
        if !f.is_monic() || f.deg() == 0 {
            return Err(Error::NotMonic(f.to_string()));
        }
        let d = f.deg();
        let mut e = vec![Rat::zero(); d * d];
        for i in 1..d {
            e[i * d + i - 1] = Rat::one();
        }
        for i in 0..d {
            e[i * d + d - 1] = -f.coeff(i);
        }
        Self::new(d, d, e)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        Rat::new(self.num[i * self.cols + j].clone(), self.den.clone())
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> VecQ {
        let num = (0..self.rows).map(|i| self.num[i * self.cols + j].clone()).collect();
        VecQ::from_scaled(num, self.den.clone())
    }

    pub fn columns(&self) -> Vec<VecQ> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> VecQ {
        let num = self.num[i * self.cols..(i + 1) * self.cols].to_vec();
        VecQ::from_scaled(num, self.den.clone())
    }

    pub fn transpose(&self) -> MatQ {
        let mut num = Vec::with_capacity(self.num.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                num.push(self.num[i * self.cols + j].clone());
            }
        }
        Self::from_scaled(self.cols, self.rows, num, self.den.clone())
    }

    pub fn scale(&self, c: &Rat) -> MatQ {
        let num = self.num.iter().map(|x| x * c.numer()).collect();
        Self::from_scaled(self.rows, self.cols, num, &self.den * c.denom())
    }

    pub fn add(&self, other: &MatQ) -> Result<MatQ> {
        self.same_shape(other)?;
        let l = self.den.lcm(&other.den);
        let (sa, sb) = (&l / &self.den, &l / &other.den);
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &sa + b * &sb).collect();
        Ok(Self::from_scaled(self.rows, self.cols, num, l))
    }

    pub fn sub(&self, other: &MatQ) -> Result<MatQ> {
        self.add(&other.scale(&-Rat::one()))
    }

    fn same_shape(&self, other: &MatQ) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &MatQ) -> Result<MatQ> {
        mat_mul(self, other)
    }

    pub fn max_abs_entry(&self) -> Rat {
        self.num
            .iter()
            .map(|x| x.abs())
            .max()
            .map_or_else(Rat::zero, |m| Rat::new(m, self.den.clone()))
    }

    pub fn max_bits(&self) -> u64 {
        max_bits(&self.num).max(self.den.bits())
    }

    fn small(&self) -> Option<(&[i64], u64)> {
        self.small
            .get_or_init(|| {
                let a: Vec<i64> = self.num.iter().map(|x| x.to_i64()).collect::<Option<_>>()?;
                let bits = a.iter().map(|v| 64 - v.unsigned_abs().leading_zeros() as u64).max().unwrap_or(0);
                Some((a, bits))
            })
            .as_ref()
            .map(|(a, b)| (a.as_slice(), *b))
    }

    /// Numerator product `N·x` for an integer vector `x`.
    pub(crate) fn int_mat_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        debug_assert_eq!(x.len(), self.cols);
        ops::count_mat_vec();
        let (r, c) = (self.rows, self.cols);
        let out: Vec<BigInt> = match self.small() {
            Some((a, ab)) => {
                let xb = max_bits(x);
                let lb = 64 - (c as u64).leading_zeros() as u64;
                if xb + ab + lb < 126 {
                    let xs: Vec<i128> = x.iter().map(|v| v.to_i128().unwrap()).collect();
                    (0..r)
                        .map(|i| {
                            let row = &a[i * c..(i + 1) * c];
                            let s: i128 = row.iter().zip(&xs).map(|(&p, &q)| p as i128 * q).sum();
                            BigInt::from(s)
                        })
                        .collect()
                } else if ab + lb < 63 {
                    // Split x into signed 64-bit limbs; each limb product
                    // then fits an i128 accumulator.
                    let digits: Vec<(bool, Vec<u64>)> = x
                        .iter()
                        .map(|v| {
                            let (sign, d) = v.to_u64_digits();
                            (sign == Sign::Minus, d)
                        })
                        .collect();
                    let limbs = digits.iter().map(|(_, d)| d.len()).max().unwrap_or(0);
                    let planes: Vec<Vec<i128>> = (0..limbs)
                        .map(|k| {
                            digits
                                .iter()
                                .map(|(neg, d)| {
                                    let v = d.get(k).copied().unwrap_or(0) as i128;
                                    if *neg { -v } else { v }
                                })
                                .collect()
                        })
                        .collect();
                    (0..r)
                        .map(|i| {
                            let row = &a[i * c..(i + 1) * c];
                            let mut acc = BigInt::zero();
                            for (k, plane) in planes.iter().enumerate().rev() {
                                let s: i128 = row.iter().zip(plane).map(|(&p, &q)| p as i128 * q).sum();
                                if k + 1 < limbs {
                                    acc <<= 64;
                                }
                                acc += s;
                            }
                            acc
                        })
                        .collect()
                } else {
                    (0..r)
                        .map(|i| {
                            let row = &a[i * c..(i + 1) * c];
                            let mut acc = BigInt::zero();
                            for (&p, q) in row.iter().zip(x) {
                                if p != 0 && !q.is_zero() {
                                    acc += q * p;
                                }
                            }
                            acc
                        })
                        .collect()
                }
            }
            None => (0..r)
                .map(|i| {
                    let row = &self.num[i * c..(i + 1) * c];
                    let mut acc = BigInt::zero();
                    for (p, q) in row.iter().zip(x) {
                        if !p.is_zero() && !q.is_zero() {
                            acc += p * q;
                        }
                    }
                    acc
                })
                .collect(),
        };
        ops::observe_bits(max_bits(&out));
        out
    }

    /// Residues modulo `p`, or `None` when `p` divides the denominator.
    pub(crate) fn mod_p(&self, p: u64) -> Option<Vec<u64>> {
        let inv = den_inverse(&self.den, p)?;
        Some(self.num.iter().map(|x| mod_u64(x, p) * inv % p).collect())
    }
}

impl fmt::Debug for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn mat_vec(a: &MatQ, v: &VecQ) -> Result<VecQ> {
    if a.cols != v.dim() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix times vector of length {}",
            a.rows,
            a.cols,
            v.dim()
        )));
    }
    Ok(VecQ::from_scaled(a.int_mat_vec(&v.num), &a.den * &v.den))
}

fn int_mat_mul(a: &[BigInt], b: &[BigInt], r: usize, k: usize, c: usize) -> Vec<BigInt> {
    ops::count_mat_mat();
    let bits = |m: &[BigInt]| max_bits(m);
    let lb = 64 - (k as u64).leading_zeros() as u64;
    if bits(a) + bits(b) + lb < 126 {
        let a: Vec<i128> = a.iter().map(|x| x.to_i128().unwrap()).collect();
        let b: Vec<i128> = b.iter().map(|x| x.to_i128().unwrap()).collect();
        return (0..r)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut row = vec![0i128; c];
                for t in 0..k {
                    let x = a[i * k + t];
                    if x == 0 {
                        continue;
                    }
                    for (j, y) in b[t * c..(t + 1) * c].iter().enumerate() {
                        row[j] += x * y;
                    }
                }
                row.into_iter().map(BigInt::from)
            })
            .collect();
    }
    let out: Vec<BigInt> = (0..r)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut row = vec![BigInt::zero(); c];
            for t in 0..k {
                let x = &a[i * k + t];
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b[t * c..(t + 1) * c].iter().enumerate() {
                    if !y.is_zero() {
                        row[j] += x * y;
                    }
                }
            }
            row
        })
        .collect();
    ops::observe_bits(max_bits(&out));
    out
}

pub fn mat_mul(a: &MatQ, b: &MatQ) -> Result<MatQ> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let num = int_mat_mul(&a.num, &b.num, a.rows, a.cols, b.cols);
    Ok(MatQ::from_scaled(a.rows, b.cols, num, &a.den * &b.den))
}

/// Integer coefficients `H` and denominator `L` with `g(A) = H(N) / L`,
/// where `A = N / δ`.
fn scaled_poly(g: &PolyQ, delta: &BigInt) -> (Vec<BigInt>, BigInt) {
    let k = g.deg();
    // c_i δ^{-i} = c_i δ^{k-i} / δ^k
    let mut pw = BigInt::one();
    let mut scaled = vec![Rat::zero(); k + 1];
    for i in (0..=k).rev() {
        scaled[i] = g.coeff(i) * Rat::from_integer(pw.clone());
        pw *= delta;
    }
    let dk = Rat::from_integer(delta.pow(k as u32));
    let scaled: Vec<Rat> = scaled.into_iter().map(|c| c / &dk).collect();
    rats_to_scaled(&scaled)
}

/// `g(A)·v` by Horner's rule, `deg g` matrix–vector products.
pub fn mat_poly_apply_vec(g: &PolyQ, a: &MatQ, v: &VecQ) -> Result<VecQ> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    if a.cols != v.dim() {
        return Err(Error::Dimension(format!("matrix order {} vs vector length {}", a.cols, v.dim())));
    }
    if g.is_zero() {
        return Ok(VecQ::zeros(v.dim()));
    }
    let (h, l) = scaled_poly(g, &a.den);
    let x = int_poly_apply(a, &h, &v.num);
    Ok(VecQ::from_scaled(x, l * &v.den))
}

/// `H(N)·x` for integer coefficients `H` and integer vector `x`.
pub(crate) fn int_poly_apply(a: &MatQ, h: &[BigInt], x: &[BigInt]) -> Vec<BigInt> {
    let Some((top, rest)) = h.split_last() else {
        return vec![BigInt::zero(); x.len()];
    };
    let mut acc: Vec<BigInt> = x.iter().map(|c| c * top).collect();
    for c in rest.iter().rev() {
        acc = a.int_mat_vec(&acc);
        if !c.is_zero() {
            for (y, xi) in acc.iter_mut().zip(x) {
                *y += xi * c;
            }
        }
    }
    acc
}

/// `g(A)` by Paterson–Stockmeyer: about `2√deg g` matrix products.
pub fn mat_poly_eval(g: &PolyQ, a: &MatQ) -> Result<MatQ> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if g.is_zero() {
        return Ok(MatQ::zeros(n, n));
    }
    let (h, l) = scaled_poly(g, &a.den);
    let k = h.len() - 1;
    let s = ((k + 1) as f64).sqrt().ceil().max(1.0) as usize;
    let ident = MatQ::identity(n).num;
    // powers N^0..N^s
    let mut pows: Vec<Vec<BigInt>> = vec![ident];
    for i in 1..=s.min(k) {
        let next = if i == 1 {
            a.num.clone()
        } else {
            int_mat_mul(&pows[i - 1], &a.num, n, n, n)
        };
        pows.push(next);
    }
    let block = |b: usize| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..s {
            let idx = b * s + i;
            if idx > k || h[idx].is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&pows[i]) {
                if !p.is_zero() {
                    *o += p * &h[idx];
                }
            }
        }
        out
    };
    let nblocks = k / s + 1;
    let mut acc = block(nblocks - 1);
    if nblocks > 1 {
        let step = pows[s].clone();
        for b in (0..nblocks - 1).rev() {
            acc = int_mat_mul(&acc, &step, n, n, n);
            for (o, x) in acc.iter_mut().zip(block(b)) {
                *o += x;
            }
        }
    }
    Ok(MatQ::from_scaled(n, n, acc, l))
}

/// Exact rank. A modular image certifies full rank cheaply; otherwise a
/// fraction-free elimination decides.
pub fn rank(a: &MatQ) -> usize {
    let full = a.rows.min(a.cols);
    if full == 0 {
        return 0;
    }
    for p in modp::large_primes().take(2) {
        if let Some(m) = a.mod_p(p) {
            if rank_mod_p(m, a.rows, a.cols, p) == full {
                return full;
            }
        }
    }
    rank_exact(a)
}

pub(crate) fn rank_mod_p(mut m: Vec<u64>, rows: usize, cols: usize, p: u64) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        for j in 0..cols {
            m.swap(rank * cols + j, piv * cols + j);
        }
        let inv = modp::inv(m[rank * cols + c], p);
        for i in rank + 1..rows {
            let f = m[i * cols + c] * inv % p;
            if f == 0 {
                continue;
            }
            for j in c..cols {
                m[i * cols + j] = (m[i * cols + j] + p - f * m[rank * cols + j] % p) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn rank_exact(a: &MatQ) -> usize {
    let (rows, cols) = (a.rows, a.cols);
    let mut m = a.num.clone();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        for j in 0..cols {
            m.swap(rank * cols + j, piv * cols + j);
        }
        let pv = m[rank * cols + c].clone();
        for i in rank + 1..rows {
            let f = m[i * cols + c].clone();
            for j in c..cols {
                let v = (&pv * &m[i * cols + j] - &f * &m[rank * cols + j]) / &prev;
                m[i * cols + j] = v;
            }
        }
        prev = pv;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn mod_u64_is_the_floor_residue(hi in any::<i64>(), lo in any::<u64>(), k in 0u32..4) {
            let x = (BigInt::from(hi) << (64 * k)) + BigInt::from(lo);
            for p in [2u64, 3, 2147483647, 2147483629] {
                let want = x.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                prop_assert_eq!(mod_u64(&x, p), want);
                prop_assert_eq!(mod_u64(&-&x, p), (p - want) % p);
            }
        }

        #[test]
        fn poly_eval_agrees_with_apply_and_horner(
            n in 1usize..5,
            entries in proptest::collection::vec((-5i64..=5, 1i64..3), 16),
            g in proptest::collection::vec(-4i64..=4, 0..9),
            v in proptest::collection::vec(-5i64..=5, 4),
        ) {
            let a = MatQ::new(n, n, entries[..n * n].iter().map(|&(x, d)| ratio(x, d)).collect()).unwrap();
            let g = PolyQ::from_ints(&g);
            let v = VecQ::from_ints(&v[..n]);
            let ga = mat_poly_eval(&g, &a).unwrap();
            let mut horner = MatQ::zeros(n, n);
            for c in g.coeffs().iter().rev() {
                horner = mat_mul(&horner, &a).unwrap().add(&MatQ::identity(n).scale(c)).unwrap();
            }
            prop_assert_eq!(&ga, &horner);
            prop_assert_eq!(mat_vec(&ga, &v).unwrap(), mat_poly_apply_vec(&g, &a, &v).unwrap());
        }

        #[test]
        fn int_mat_vec_limb_path_matches_bigint_sum(
            a in proptest::collection::vec(-(1i64 << 40)..(1i64 << 40), 9),
            x in proptest::collection::vec((any::<i64>(), 0u32..300), 3),
        ) {
            let m = MatQ::from_ints(3, 3, &a);
            let x: Vec<BigInt> = x.iter().map(|&(v, s)| BigInt::from(v) << s).collect();
            let expect: Vec<BigInt> = (0..3)
                .map(|i| (0..3).map(|j| BigInt::from(a[i * 3 + j]) * &x[j]).sum())
                .collect();
            prop_assert_eq!(m.int_mat_vec(&x), expect);
        }
    }

    pub(crate) fn example31() -> MatQ {
        let f = PolyQ::from_ints(&[5, 1, 1]);
        MatQ::companion(&f.pow(3)).unwrap()
    }

    #[test]
    fn vector_canonical_form() {
        let v = VecQ::new(vec![ratio(1, 2), ratio(-3, 4), Rat::zero()]);
        assert_eq!(v.numerators(), &[BigInt::from(2), BigInt::from(-3), BigInt::zero()]);
        assert_eq!(v.denominator(), &BigInt::from(4));
        assert_eq!(v.get(0), ratio(1, 2));
        assert_eq!(VecQ::from_scaled(vec![2.into(), 4.into()], BigInt::from(-2)), VecQ::from_ints(&[-1, -2]));
        assert_eq!(VecQ::zeros(2).denominator(), &BigInt::one());
    }

    #[test]
    fn mat_vec_examples() {
        let v = VecQ::from_ints(&[1, -2, 3]);
        assert_eq!(mat_vec(&MatQ::identity(3), &v).unwrap(), v);
        assert_eq!(mat_vec(&MatQ::zeros(3, 3), &v).unwrap(), VecQ::zeros(3));
        assert_eq!(mat_vec(&example31(), &VecQ::unit(6, 0)).unwrap(), VecQ::unit(6, 1));
        assert!(mat_vec(&MatQ::identity(2), &v).is_err());
    }

    #[test]
    fn poly_apply_examples() {
        let a = example31();
        let v = VecQ::from_ints(&[1, 2, 3, 4, 5, 6]);
        assert_eq!(mat_poly_apply_vec(&PolyQ::one(), &a, &v).unwrap(), v);
        assert_eq!(mat_poly_apply_vec(&PolyQ::x(), &a, &v).unwrap(), mat_vec(&a, &v).unwrap());
    }

    #[test]
    fn paterson_stockmeyer_examples() {
        let f = PolyQ::from_ints(&[5, 1, 1]);
        let c = MatQ::companion(&f).unwrap();
        assert!(mat_poly_eval(&f, &c).unwrap().is_zero());
        let a = example31();
        let fa = mat_poly_eval(&f, &a).unwrap();
        let fa2 = mat_mul(&fa, &fa).unwrap();
        assert!(!fa2.is_zero());
        assert!(mat_mul(&fa2, &fa).unwrap().is_zero());
        let seven = PolyQ::constant(Rat::from_integer(7.into()));
        assert_eq!(mat_poly_eval(&seven, &a).unwrap(), MatQ::identity(6).scale(&Rat::from_integer(7.into())));
    }

    #[test]
    fn poly_eval_with_rational_matrix() {
        let a = MatQ::new(2, 2, vec![ratio(1, 2), ratio(1, 3), Rat::zero(), ratio(-2, 5)]).unwrap();
        let g = PolyQ::new(vec![ratio(1, 7), Rat::one(), ratio(-3, 2), Rat::one(), ratio(2, 9)]);
        let direct = (0..=g.deg()).fold(MatQ::zeros(2, 2), |acc, i| {
            let mut p = MatQ::identity(2);
            for _ in 0..i {
                p = mat_mul(&p, &a).unwrap();
            }
            acc.add(&p.scale(&g.coeff(i))).unwrap()
        });
        assert_eq!(mat_poly_eval(&g, &a).unwrap(), direct);
        let v = VecQ::new(vec![ratio(3, 4), Rat::one()]);
        assert_eq!(
            mat_poly_apply_vec(&g, &a, &v).unwrap(),
            mat_vec(&direct, &v).unwrap()
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&MatQ::identity(4)), 4);
        assert_eq!(rank(&MatQ::from_ints(2, 3, &[1, 2, 3, 2, 4, 6])), 1);
        assert_eq!(rank_exact(&MatQ::from_ints(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9])), 2);
        assert_eq!(rank(&MatQ::zeros(3, 2)), 0);
    }
}
