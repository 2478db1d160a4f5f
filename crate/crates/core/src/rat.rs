//! Rational scalars and small integer-vector helpers shared by the kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an integer or `p/q` literal.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub(crate) fn lcm_denoms<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Nonnegative gcd of all entries (zero for the zero vector).
pub(crate) fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in v {
        if x.is_zero() {
            continue;
        }
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}


pub(crate) fn div_exact_in_place(v: &mut [BigInt], g: &BigInt) {
    if g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        if !x.is_zero() {
            *x = &*x / g;
        }
    }
}

/// Divides by the positive content; the sign of every entry is kept.
pub(crate) fn make_primitive(v: &mut [BigInt]) {
    let g = content(v);
    if !g.is_zero() {
        div_exact_in_place(v, &g);
    }
}

pub(crate) fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.bits()).max().unwrap_or(0)
}
