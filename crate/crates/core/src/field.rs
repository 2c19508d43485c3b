//! Coefficient fields.
//!
//! Every computation runs over one field chosen up front: ℚ for the Lambert
//! curve and for specialized framings, ℚ(f) for symbolic framing. The field
//! is a type parameter, so two fields can never meet in one expression.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::rational::Rational;
use crate::ratfunc::RationalFunction;

/// Runtime label of a coefficient field, used in serialized headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rational,
    RationalFunction,
}

pub trait Field:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + Serialize + DeserializeOwned + 'static
{
    const TAG: FieldTag;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &Rational) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// The value viewed inside ℚ(f).
    fn to_rational_function(&self) -> RationalFunction;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        *self = self.sub_ref(other);
    }

    /// `self += a * b`.
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        self.add_assign_ref(&a.mul_ref(b));
    }

    fn div_ref(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul_ref(&i))
    }

    fn scale_int(&self, n: i64) -> Self {
        self.mul_ref(&Self::from_int(n))
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

impl Field for Rational {
    const TAG: FieldTag = FieldTag::Rational;

    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
    fn to_rational_function(&self) -> RationalFunction {
        RationalFunction::constant(self.clone())
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn is_one(&self) -> bool {
        Rational::is_one(self)
    }
}

impl Field for RationalFunction {
    const TAG: FieldTag = FieldTag::RationalFunction;

    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        RationalFunction::constant(q.clone())
    }
    fn add_ref(&self, other: &Self) -> Self {
        RationalFunction::add_ref(self, other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        RationalFunction::add_ref(self, &other.neg_ref())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        RationalFunction::mul_ref(self, other)
    }
    fn neg_ref(&self) -> Self {
        RationalFunction::neg_ref(self)
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
    fn to_rational_function(&self) -> RationalFunction {
        self.clone()
    }
}

/// A field homomorphism from ℚ(f) to ℚ: evaluation at a rational framing.
pub fn specialize(value: &RationalFunction, f: &Rational) -> Option<Rational> {
    value.eval(f)
}
