//! Exact scalar arithmetic: rationals, squares and square classes, and the
//! quadratic extension Q(√q).

mod factor;
mod field;
mod quadext;

pub use factor::{factorize, is_probable_prime, squarefree_kernel};
pub use field::Field;
pub use quadext::{quadext_arith, QuadExtElem, QuadOp};

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"n"` or `"n/d"` (optional leading sign, no whitespace, nonzero `d`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::Parse(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_int(num).ok_or_else(err)?;
    let den = match den {
        Some(d) => parse_int(d).ok_or_else(err)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

/// Lowest-terms `"num/den"`, or just `"num"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Naive height max(|num|, den).
pub fn height(r: &Rational) -> BigInt {
    let n = r.numer().abs();
    if &n > r.denom() {
        n
    } else {
        r.denom().clone()
    }
}

fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// True iff `r = s²` for a rational `s` (zero included).
pub fn is_square(r: &Rational) -> bool {
    !r.is_negative() && isqrt_exact(r.numer()).is_some() && isqrt_exact(r.denom()).is_some()
}

/// Nonnegative square root of a rational square.
pub fn sqrt_exact(r: &Rational) -> Result<Rational> {
    match (isqrt_exact(r.numer()), isqrt_exact(r.denom())) {
        (Some(n), Some(d)) => Ok(Rational::new(n, d)),
        _ => Err(Error::NotASquare(format_rational(r))),
    }
}

/// Class of a nonzero rational in Q*/(Q*)², represented by a squarefree integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass(BigInt);

impl SquareClass {
    pub fn one() -> Self {
        SquareClass(BigInt::one())
    }

    /// The squarefree representative `d`.
    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Class of the product. For squarefree d1, d2 this is d1·d2/gcd(d1,d2)², so
    /// no factoring is needed.
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        let g = self.0.gcd(&other.0);
        SquareClass(&self.0 * &other.0 / (&g * &g))
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Squarefree `d` with `r = d·s²`. Uses n·d for `r = n/d`, which lies in the
/// same class.
pub fn squarefree_part(r: &Rational) -> Result<SquareClass> {
    if r.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = (r.numer() * r.denom()).magnitude().clone();
    let kernel: BigUint = squarefree_kernel(&n);
    let sign = if r.is_negative() {
        Sign::Minus
    } else {
        Sign::Plus
    };
    Ok(SquareClass(BigInt::from_biguint(sign, kernel)))
}

/// Whether two nonzero rationals share a square class; no factoring involved.
pub fn same_square_class(r: &Rational, s: &Rational) -> Result<bool> {
    if r.is_zero() || s.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(is_square(&(r * s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn class(n: i64) -> SquareClass {
        SquareClass(BigInt::from(n))
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&int(1)).unwrap(), class(1));
        assert_eq!(squarefree_part(&int(18)).unwrap(), class(2));
        assert_eq!(squarefree_part(&rat(-49, 4)).unwrap(), class(-1));
        assert_eq!(squarefree_part(&int(2880)).unwrap(), class(5));
        assert_eq!(squarefree_part(&rat(3, 8)).unwrap(), class(6));
        assert_eq!(squarefree_part(&int(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn squares_and_roots() {
        assert!(is_square(&rat(49, 4)));
        assert!(!is_square(&int(3)));
        assert!(is_square(&int(0)));
        assert!(!is_square(&int(-4)));
        assert_eq!(sqrt_exact(&rat(49, 4)).unwrap(), rat(7, 2));
        assert_eq!(sqrt_exact(&int(0)).unwrap(), int(0));
        assert!(matches!(sqrt_exact(&int(2880)), Err(Error::NotASquare(_))));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("7/2").unwrap(), rat(7, 2));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("3/-2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("+5").unwrap(), int(5));
        for bad in ["", "1/0", "1.5", "a", "1/", " 1", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad:?}");
        }
        assert_eq!(format_rational(&rat(7, 2)), "7/2");
        assert_eq!(format_rational(&rat(-6, 2)), "-3");
        assert_eq!(height(&rat(-7, 3)), BigInt::from(7));
        assert_eq!(height(&rat(2, 9)), BigInt::from(9));
    }

    #[test]
    fn class_product_matches_factoring() {
        for (a, b) in [(6, 10), (-3, 3), (5, 7), (-2, -2), (30, 42)] {
            let direct = squarefree_part(&int(a * b)).unwrap();
            assert_eq!(class(a).mul(&class(b)), direct);
        }
    }

    #[test]
    fn large_composite_kernel() {
        // (2^61-1)^2 * (2^31-1) * 3
        let p = BigInt::from((1u64 << 61) - 1);
        let r = BigInt::from((1u64 << 31) - 1);
        let n = &p * &p * &r * 3;
        let sq = squarefree_part(&Rational::from_integer(n)).unwrap();
        assert_eq!(sq.value(), &(r * 3));
    }

    fn nonzero_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..10_000)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn class_ignores_square_factors(r in nonzero_rational(), s in nonzero_rational()) {
            let scaled = &r * &s * &s;
            prop_assert_eq!(squarefree_part(&scaled).unwrap(), squarefree_part(&r).unwrap());
        }

        #[test]
        fn square_iff_trivial_class(r in nonzero_rational()) {
            prop_assert_eq!(is_square(&r), squarefree_part(&r).unwrap().is_one());
        }

        #[test]
        fn sqrt_of_square_round_trips(r in nonzero_rational()) {
            let sq = &r * &r;
            prop_assert_eq!(sqrt_exact(&sq).unwrap(), r.abs());
        }
    }
}
