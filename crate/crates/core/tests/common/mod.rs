#![allow(dead_code)]

use geneig::{MatQ, PolyQ, PolyVec, VecQ};

pub const SECTION6: [[i64; 10]; 10] = [
    [5, -5, 6, -9, 5, 0, 0, -4, 5, -6],
    [-14, 11, -9, 39, -2, -2, 6, 16, -10, 12],
    [-5, 5, -6, 9, -5, 1, 0, 5, -5, 5],
    [5, 2, 1, 7, 7, -4, 6, 3, 5, 2],
    [-5, -9, 9, -9, -1, 3, -5, -7, -5, -9],
    [5, 2, -4, -2, 5, -5, 5, -1, 5, 2],
    [5, 9, -14, 0, -3, -4, 3, 4, 5, 9],
    [-5, -9, 4, -23, -8, 7, -11, -11, -5, -9],
    [0, 8, -6, 16, 2, -4, 6, 7, 0, 9],
    [4, -7, 4, -25, -3, 3, -6, -11, 0, -8],
];

pub fn section6() -> MatQ {
    MatQ::from_ints(10, 10, &SECTION6.concat())
}

/// λ² + λ + 5
pub fn f1() -> PolyQ {
    PolyQ::from_ints(&[5, 1, 1])
}

/// λ² + λ + 4
pub fn f2() -> PolyQ {
    PolyQ::from_ints(&[4, 1, 1])
}

/// Companion matrix of (λ²+λ+5)³.
pub fn example31() -> MatQ {
    MatQ::companion(&f1().pow(3)).unwrap()
}

/// `λ·hi + lo`, scaled by `k`.
pub fn linear(k: i64, hi: &[i64], lo: &[i64]) -> PolyVec {
    let s = |v: &[i64]| VecQ::from_ints(&v.iter().map(|x| x * k).collect::<Vec<_>>());
    PolyVec::new(vec![s(lo), s(hi)])
}

pub fn multiset(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}
