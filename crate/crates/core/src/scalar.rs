//! Exact scalar arithmetic: arbitrary-precision rationals, Bernoulli numbers
//! (first-Bernoulli convention, `B1 = -1/2`), factorials and binomials, and
//! the dimension count for classical cusp forms of level one.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("cannot invert zero")]
    ZeroInverse,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("weight {0} is odd; cusp forms of level one have even weight")]
    OddWeight(u64),
    #[error("weight {0} is below 4; rejected to avoid convention pitfalls at low weight")]
    WeightTooSmall(u64),
}

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator. Serialized as `"p/q"` (or `"p"` when the denominator is 1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int<N: Into<BigInt>>(n: N) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn new<N: Into<BigInt>, D: Into<BigInt>>(numer: N, denom: D) -> Result<Self, ScalarError> {
        let d: BigInt = denom.into();
        if d.is_zero() {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(Rat(BigRational::new(numer.into(), d)))
    }

    /// `p/q` for a denominator known to be nonzero; panics otherwise.
    pub fn frac<N: Into<BigInt>, D: Into<BigInt>>(numer: N, denom: D) -> Self {
        Self::new(numer, denom).expect("nonzero denominator")
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroInverse);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn pow(&self, k: u32) -> Self {
        Rat(self.0.pow(k as i32))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScalarError::Parse(s.to_owned());
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s.trim()).map_err(|_| bad())?;
                Ok(Rat::from_int(n))
            }
            Some((p, q)) => {
                let n = BigInt::from_str(p.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(q.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(ScalarError::ZeroDenominator);
                }
                Ok(Rat(BigRational::new(n, d)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl<'a, 'b> $trait<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                self.$method(&rhs)
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
// Division panics on a zero divisor, like the underlying crate; use
// `Rat::recip` when the divisor is not statically known to be nonzero.
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl<'a> Neg for &'a Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn bernoulli_cache() -> &'static Mutex<Vec<Rat>> {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rat::one()]))
}

/// Bernoulli number `B_n` for the generating function `T / (e^T - 1)`,
/// so `B_1 = -1/2`. Values are cached incrementally.
pub fn bernoulli(n: u64) -> Rat {
    let n = n as usize;
    let mut cache = bernoulli_cache().lock().expect("bernoulli cache poisoned");
    while cache.len() <= n {
        let m = cache.len() as u64; // compute B_m from the recurrence
        let mut acc = Rat::zero();
        for (k, b) in cache.iter().enumerate() {
            acc += &(Rat::from_int(binomial(m + 1, k as u64)) * b);
        }
        let b_m = -acc * Rat::frac(1, BigInt::from(m + 1));
        cache.push(b_m);
    }
    cache[n].clone()
}

/// Dimension of the space of level-one cusp forms of even weight `k >= 4`.
pub fn dim_cusp_forms(k: u64) -> Result<u64, ScalarError> {
    if k % 2 != 0 {
        return Err(ScalarError::OddWeight(k));
    }
    if k < 4 {
        return Err(ScalarError::WeightTooSmall(k));
    }
    Ok(if k % 12 == 2 { k / 12 - 1 } else { k / 12 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bernoulli_matches_published_table() {
        let expect = [
            (0, "1"),
            (1, "-1/2"),
            (2, "1/6"),
            (4, "-1/30"),
            (6, "1/42"),
            (8, "-1/30"),
            (10, "5/66"),
            (12, "-691/2730"),
            (14, "7/6"),
            (16, "-3617/510"),
            (18, "43867/798"),
            (20, "-174611/330"),
        ];
        for (n, s) in expect {
            assert_eq!(bernoulli(n), s.parse().unwrap(), "B_{n}");
        }
        for n in (3..=21).step_by(2) {
            assert!(bernoulli(n).is_zero(), "odd B_{n} vanishes");
        }
    }

    /// Multiply two truncated power series with rational coefficients.
    fn series_mul(a: &[Rat], b: &[Rat], k: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); k + 1];
        for (i, ai) in a.iter().enumerate().take(k + 1) {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate().take(k + 1 - i) {
                out[i + j] += &(ai * bj);
            }
        }
        out
    }

    #[test]
    fn bernoulli_generating_function_identity() {
        // (sum B_n T^n / n!) * (e^T - 1) = T, checked through degree 20.
        let k = 20;
        let gen: Vec<Rat> = (0..=k)
            .map(|n| bernoulli(n as u64) / Rat::from_int(factorial(n as u64)))
            .collect();
        let expm1: Vec<Rat> = (0..=k)
            .map(|n| {
                if n == 0 {
                    Rat::zero()
                } else {
                    Rat::frac(1, factorial(n as u64))
                }
            })
            .collect();
        let prod = series_mul(&gen, &expm1, k);
        for (n, c) in prod.iter().enumerate() {
            if n == 1 {
                assert!(c.is_one());
            } else {
                assert!(c.is_zero(), "coefficient of T^{n} should vanish");
            }
        }
    }

    #[test]
    fn cusp_form_dimensions() {
        let table = [
            (4, 0),
            (6, 0),
            (8, 0),
            (10, 0),
            (12, 1),
            (14, 0),
            (16, 1),
            (18, 1),
            (20, 1),
            (22, 1),
            (24, 2),
            (26, 1),
            (28, 2),
        ];
        for (k, d) in table {
            assert_eq!(dim_cusp_forms(k).unwrap(), d, "weight {k}");
        }
        assert!(matches!(
            dim_cusp_forms(13),
            Err(ScalarError::OddWeight(13))
        ));
        assert!(matches!(
            dim_cusp_forms(2),
            Err(ScalarError::WeightTooSmall(2))
        ));
        assert!(matches!(
            dim_cusp_forms(0),
            Err(ScalarError::WeightTooSmall(0))
        ));
    }

    #[test]
    fn factorial_and_binomial_basics() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(12), BigInt::from(479001600u64));
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(10, 0), BigInt::from(1));
        assert_eq!(binomial(3, 7), BigInt::from(0));
        assert_eq!(binomial(24, 12), BigInt::from(2704156u64));
    }

    #[test]
    fn rational_display_and_parse() {
        assert_eq!(Rat::frac(2, 4).to_string(), "1/2");
        assert_eq!(Rat::frac(1, -2).to_string(), "-1/2");
        assert_eq!(Rat::frac(-6, -3).to_string(), "2");
        assert_eq!("-691/2730".parse::<Rat>().unwrap(), Rat::frac(-691, 2730));
        assert_eq!("42".parse::<Rat>().unwrap(), Rat::from_int(42));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        let json = serde_json::to_string(&Rat::frac(-691, 2730)).unwrap();
        assert_eq!(json, "\"-691/2730\"");
        let back: Rat = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Rat::frac(-691, 2730));
    }

    #[test]
    fn rational_errors() {
        assert!(Rat::new(1, 0).is_err());
        assert!(Rat::zero().recip().is_err());
        assert_eq!(Rat::frac(3, 7).recip().unwrap(), Rat::frac(7, 3));
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-200i64..200, 1i64..50).prop_map(|(p, q)| Rat::frac(p, q))
    }

    proptest! {
        #[test]
        fn field_laws(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, Rat::zero());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn parse_roundtrip(a in arb_rat()) {
            let s = a.to_string();
            prop_assert_eq!(s.parse::<Rat>().unwrap(), a);
        }

        #[test]
        fn pascal_rule(n in 1u64..30, k in 1u64..30) {
            prop_assert_eq!(
                binomial(n, k),
                binomial(n - 1, k - 1) + binomial(n - 1, k)
            );
        }
    }
}
