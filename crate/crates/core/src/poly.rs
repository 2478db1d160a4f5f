//! Dense univariate polynomials with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{lcm_denoms, parse_rat, Rat};
use crate::zpoly;

/// Polynomial in one variable over the rationals, coefficients in ascending degree.
///
/// The coefficient list never has a trailing zero, so the zero polynomial is the
/// empty list and `degree() == coeffs.len() - 1` otherwise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    coeffs: Vec<Rat>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(Rat::from_integer).collect())
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `λ`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; callers handle zero separately.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(One::is_one)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Long division: `self = q·b + r` with `deg r < deg b`.
    pub fn divrem(&self, b: &PolyQ) -> Result<(PolyQ, PolyQ)> {
        let db = b.degree().ok_or(Error::ZeroDivisor)?;
        let Some(da) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if da < db {
            return Ok((Self::zero(), self.clone()));
        }
        let inv_lc = b.coeffs[db].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let c = &rem[k + db] * &inv_lc;
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                if !bj.is_zero() {
                    rem[k + j] -= &c * bj;
                }
            }
            quot[k] = c;
        }
        rem.truncate(db);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, b: &PolyQ) -> Result<PolyQ> {
        Ok(self.divrem(b)?.1)
    }

    /// Quotient when `b` divides `self` exactly.
    pub fn div_exact(&self, b: &PolyQ) -> Option<PolyQ> {
        let (q, r) = self.divrem(b).ok()?;
        r.is_zero().then_some(q)
    }

    /// Multiplicity of `f` as a factor of `self`, and the cofactor.
    pub fn split_power(&self, f: &PolyQ) -> (usize, PolyQ) {
        let mut k = 0;
        let mut g = self.clone();
        if f.deg() == 0 || self.is_zero() {
            return (0, g);
        }
        while let Some(q) = g.div_exact(f) {
            g = q;
            k += 1;
        }
        (k, g)
    }

    /// Writes `self = scale · p` with `p` a primitive integer polynomial, positive leading coefficient.
    pub fn to_primitive(&self) -> (Rat, Vec<BigInt>) {
        if self.is_zero() {
            return (Rat::zero(), Vec::new());
        }
        let den = lcm_denoms(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let (cont, prim) = zpoly::primitive_part(&ints);
        (Rat::new(cont, den), prim)
    }

    /// Parses a comma-separated ascending coefficient list such as `5,1,1`.
    pub fn parse(s: &str) -> Result<PolyQ> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let coeffs = s.split(',').map(parse_rat).collect::<Result<Vec<_>>>()?;
        Ok(PolyQ::new(coeffs))
    }

    /// Inverse of [`PolyQ::parse`].
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// Ordering key used wherever factor lists must be deterministic.
    pub fn sort_key(&self) -> (usize, &[Rat]) {
        (self.coeffs.len(), &self.coeffs)
    }
}

pub fn poly_divrem(a: &PolyQ, b: &PolyQ) -> Result<(PolyQ, PolyQ)> {
    a.divrem(b)
}

/// Monic greatest common divisor.
pub fn poly_gcd(a: &PolyQ, b: &PolyQ) -> Result<PolyQ> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Err(Error::ZeroPolynomial("gcd")),
        (true, false) => Ok(b.monic()),
        (false, true) => Ok(a.monic()),
        (false, false) => {
            let (_, pa) = a.to_primitive();
            let (_, pb) = b.to_primitive();
            Ok(PolyQ::from_bigints(&zpoly::gcd(&pa, &pb)).monic())
        }
    }
}

/// Monic least common multiple.
pub fn poly_lcm(a: &PolyQ, b: &PolyQ) -> Result<PolyQ> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroPolynomial("lcm"));
    }
    let g = poly_gcd(a, b)?;
    let q = a.div_exact(&g).expect("gcd divides its argument");
    Ok((&q * b).monic())
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyQ[{}]", self.to_coeff_string())
    }
}

/// Human-readable form in the variable `λ`, highest degree first.
impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "λ")?,
                _ => write!(f, "λ^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: &PolyQ) -> PolyQ {
        if self.is_zero() || rhs.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PolyQ::new(out)
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: PolyQ) -> PolyQ {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> PolyQ {
        PolyQ::from_ints(c)
    }

    fn small_poly() -> impl proptest::strategy::Strategy<Value = PolyQ> {
        use proptest::prelude::*;
        (proptest::collection::vec(-6i64..=6, 0..6), 1i64..4)
            .prop_map(|(c, den)| PolyQ::new(c.iter().map(|&x| crate::rat::ratio(x, den)).collect()))
    }

    proptest::proptest! {
        #[test]
        fn divrem_reconstructs_the_dividend(a in small_poly(), b in small_poly()) {
            proptest::prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            proptest::prop_assert_eq!(&(&q * &b) + &r, a);
            proptest::prop_assert!(r.is_zero() || r.deg() < b.deg());
        }

        #[test]
        fn gcd_and_lcm_divide_and_multiply(a in small_poly(), b in small_poly(), c in small_poly()) {
            proptest::prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
            let (ac, bc) = (&a * &c, &b * &c);
            let g = poly_gcd(&ac, &bc).unwrap();
            proptest::prop_assert!(g.is_monic());
            proptest::prop_assert!(ac.rem(&g).unwrap().is_zero() && bc.rem(&g).unwrap().is_zero());
            proptest::prop_assert!(g.rem(&c.monic()).unwrap().is_zero());
            let l = poly_lcm(&ac, &bc).unwrap();
            proptest::prop_assert!(l.rem(&ac).unwrap().is_zero() && l.rem(&bc).unwrap().is_zero());
            proptest::prop_assert_eq!(&l * &g, (&ac * &bc).monic());
        }
    }

    #[test]
    fn divrem_examples() {
        let f = p(&[5, 1, 1]);
        assert_eq!(f.divrem(&f).unwrap(), (PolyQ::one(), PolyQ::zero()));
        // (λ+1)² = 1·(λ²+λ+5) + (λ−4)
        let sq = p(&[1, 2, 1]);
        assert_eq!(sq.divrem(&f).unwrap(), (PolyQ::one(), p(&[-4, 1])));
        assert_eq!(
            PolyQ::zero().divrem(&PolyQ::x()).unwrap(),
            (PolyQ::zero(), PolyQ::zero())
        );
        assert_eq!(f.divrem(&PolyQ::zero()), Err(Error::ZeroDivisor));
    }

    #[test]
    fn gcd_examples() {
        let f1 = p(&[5, 1, 1]);
        let f2 = p(&[4, 1, 1]);
        assert!(poly_gcd(&f1, &f2).unwrap().is_one());
        let l = p(&[-1, 1]);
        assert_eq!(poly_gcd(&(&l * &l), &l).unwrap(), l);
        let q = p(&[6, 0, 3]);
        assert_eq!(poly_gcd(&q, &PolyQ::zero()).unwrap(), q.monic());
        assert!(poly_gcd(&PolyQ::zero(), &PolyQ::zero()).is_err());
    }

    #[test]
    fn gcd_rational_coefficients() {
        let a = PolyQ::new(vec![Rat::new(1.into(), 2.into()), Rat::one()]);
        let b = &a * &p(&[3, 7]);
        assert_eq!(poly_gcd(&b, &(&a * &p(&[1, 1]))).unwrap(), a.monic());
    }

    #[test]
    fn lcm_examples() {
        let f1 = p(&[5, 1, 1]);
        let f2 = p(&[4, 1, 1]);
        let big = &f1.pow(3) * &f2;
        assert_eq!(poly_lcm(&f1, &big).unwrap(), big);
        assert_eq!(poly_lcm(&f1, &f1).unwrap(), f1);
        assert_eq!(poly_lcm(&p(&[-1, 1]), &p(&[1, 1])).unwrap(), p(&[-1, 0, 1]));
        assert!(poly_lcm(&f1, &PolyQ::zero()).is_err());
    }

    #[test]
    fn parse_and_display() {
        let f = PolyQ::parse("5,1,1").unwrap();
        assert_eq!(f, p(&[5, 1, 1]));
        assert_eq!(f.to_string(), "λ^2 + λ + 5");
        let g = PolyQ::parse("-1/2, 0, -3").unwrap();
        assert_eq!(g.to_string(), "-3λ^2 - (1/2)");
        assert_eq!(g.to_coeff_string(), "-1/2,0,-3");
        assert!(PolyQ::parse("1,a").is_err());
        assert!(PolyQ::parse("1/0").is_err());
    }

    #[test]
    fn split_power_counts_multiplicity() {
        let f = p(&[5, 1, 1]);
        let g = p(&[4, 1, 1]);
        let (k, co) = (&f.pow(3) * &g).split_power(&f);
        assert_eq!((k, co), (3, g));
    }
}
