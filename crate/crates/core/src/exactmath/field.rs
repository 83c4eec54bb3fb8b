use std::fmt::Debug;

use num_traits::Zero;

use super::Rational;
use crate::error::{Error, Result};

/// Exact field arithmetic needed by the elliptic group law.
///
/// `embed` maps a rational into the same field as `self`, which lets generic
/// code build constants without a separate field context.
pub trait Field: Clone + PartialEq + Debug {
    fn add_el(&self, rhs: &Self) -> Self;
    fn sub_el(&self, rhs: &Self) -> Self;
    fn mul_el(&self, rhs: &Self) -> Self;
    fn neg_el(&self) -> Self;
    fn inv_el(&self) -> Result<Self>;
    fn is_zero_el(&self) -> bool;
    fn embed(&self, r: &Rational) -> Self;

    fn div_el(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul_el(&rhs.inv_el()?))
    }

    fn square(&self) -> Self {
        self.mul_el(self)
    }
}

impl Field for Rational {
    fn add_el(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_el(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_el(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_el(&self) -> Self {
        -self
    }
    fn inv_el(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn is_zero_el(&self) -> bool {
        self.is_zero()
    }
    fn embed(&self, r: &Rational) -> Self {
        r.clone()
    }
}
