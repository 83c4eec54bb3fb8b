use std::fmt;

use num_traits::{One, Zero};

use super::{format_rational, is_square, Field, Rational};
use crate::error::{Error, Result};

/// Element `a + b√q` of Q(√q), with `q` not a rational square.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExtElem {
    a: Rational,
    b: Rational,
    q: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QuadExtElem {
    pub fn new(a: Rational, b: Rational, q: Rational) -> Result<Self> {
        if is_square(&q) {
            return Err(Error::SquareRadicand(format_rational(&q)));
        }
        Ok(QuadExtElem { a, b, q })
    }

    /// √q itself.
    pub fn sqrt_of(q: Rational) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), q)
    }

    pub fn from_rational(a: Rational, q: Rational) -> Result<Self> {
        Self::new(a, Rational::zero(), q)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &Rational {
        &self.q
    }

    /// Some(a) when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn conjugate(&self) -> Self {
        QuadExtElem {
            a: self.a.clone(),
            b: -&self.b,
            q: self.q.clone(),
        }
    }

    /// a² − q·b²
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.q * &self.b * &self.b
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self.add_el(rhs))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self.sub_el(rhs))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self.mul_el(rhs))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        self.div_el(rhs)
    }

    fn assert_same(&self, rhs: &Self) {
        assert!(
            self.q == rhs.q,
            "mixed quadratic fields Q(√{}) and Q(√{})",
            self.q,
            rhs.q
        );
    }
}

/// Field arithmetic in Q(√q) with explicit error reporting.
pub fn quadext_arith(x: &QuadExtElem, y: &QuadExtElem, op: QuadOp) -> Result<QuadExtElem> {
    match op {
        QuadOp::Add => x.checked_add(y),
        QuadOp::Sub => x.checked_sub(y),
        QuadOp::Mul => x.checked_mul(y),
        QuadOp::Div => x.checked_div(y),
    }
}

/// The trait methods panic when operands come from different fields; use the
/// `checked_*` methods or [`quadext_arith`] for untrusted operands.
impl Field for QuadExtElem {
    fn add_el(&self, rhs: &Self) -> Self {
        self.assert_same(rhs);
        QuadExtElem {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            q: self.q.clone(),
        }
    }

    fn sub_el(&self, rhs: &Self) -> Self {
        self.assert_same(rhs);
        QuadExtElem {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            q: self.q.clone(),
        }
    }

    fn mul_el(&self, rhs: &Self) -> Self {
        self.assert_same(rhs);
        QuadExtElem {
            a: &self.a * &rhs.a + &self.q * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            q: self.q.clone(),
        }
    }

    fn neg_el(&self) -> Self {
        QuadExtElem {
            a: -&self.a,
            b: -&self.b,
            q: self.q.clone(),
        }
    }

    fn inv_el(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QuadExtElem {
            a: &self.a / &n,
            b: -&self.b / &n,
            q: self.q.clone(),
        })
    }

    fn is_zero_el(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn embed(&self, r: &Rational) -> Self {
        QuadExtElem {
            a: r.clone(),
            b: Rational::zero(),
            q: self.q.clone(),
        }
    }
}

impl fmt::Display for QuadExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{}", self.a, self.b, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use proptest::prelude::*;

    fn el(a: Rational, b: Rational, q: i64) -> QuadExtElem {
        QuadExtElem::new(a, b, int(q)).unwrap()
    }

    #[test]
    fn worked_examples() {
        let x = el(int(1), int(1), 2);
        let y = el(int(1), int(-1), 2);
        assert_eq!(
            quadext_arith(&x, &y, QuadOp::Mul).unwrap().as_rational(),
            Some(&int(-1))
        );

        let r3 = QuadExtElem::sqrt_of(int(3)).unwrap();
        assert_eq!(r3.square().as_rational(), Some(&int(3)));

        let one = el(int(1), int(0), 2);
        let inv = quadext_arith(&one, &x, QuadOp::Div).unwrap();
        assert_eq!(inv, el(int(-1), int(1), 2));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            QuadExtElem::sqrt_of(int(4)),
            Err(Error::SquareRadicand(_))
        ));
        assert!(matches!(
            QuadExtElem::sqrt_of(rat(9, 4)),
            Err(Error::SquareRadicand(_))
        ));
        let x = el(int(1), int(1), 2);
        let z = el(int(1), int(1), 3);
        assert_eq!(quadext_arith(&x, &z, QuadOp::Add), Err(Error::MixedFields));
        let zero = el(int(0), int(0), 2);
        assert_eq!(
            quadext_arith(&x, &zero, QuadOp::Div),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn conjugate_and_norm() {
        let x = el(rat(3, 2), int(5), -7);
        assert_eq!(x.mul_el(&x.conjugate()).as_rational(), Some(&x.norm()));
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
    }

    fn elem() -> impl Strategy<Value = QuadExtElem> {
        (small(), small()).prop_map(|(a, b)| el(a, b, 5))
    }

    proptest! {
        #[test]
        fn ring_axioms(x in elem(), y in elem(), z in elem()) {
            prop_assert_eq!(x.mul_el(&y), y.mul_el(&x));
            prop_assert_eq!(x.mul_el(&y).mul_el(&z), x.mul_el(&y.mul_el(&z)));
            prop_assert_eq!(x.mul_el(&y.add_el(&z)), x.mul_el(&y).add_el(&x.mul_el(&z)));
        }

        #[test]
        fn inverse(x in elem()) {
            prop_assume!(!x.norm().is_zero());
            let one = x.embed(&Rational::one());
            prop_assert_eq!(x.mul_el(&x.inv_el().unwrap()), one);
        }
    }
}
