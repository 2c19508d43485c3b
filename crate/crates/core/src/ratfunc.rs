//! The field ℚ(f) of rational functions in the framing parameter.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{fmt_int_poly, Poly};
use crate::rational::Rational;

/// `num/den` in lowest terms with a monic denominator, so structural
/// equality is equality of rational functions.
///
/// The denominator is kept factored as `f^fa (1+f)^fb rest`. Almost every
/// value met in practice has `rest = 1`, and those take a gcd-free path.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
    fa: u32,
    fb: u32,
    plain: bool,
}

/// Splits a monic polynomial as `f^a (1+f)^b rest`.
fn split_special(p: &Poly) -> (u32, u32, Poly) {
    let mut rest = p.clone();
    let mut a = 0;
    while let Some(q) = rest.div_f() {
        rest = q;
        a += 1;
    }
    let mut b = 0;
    while let Some(q) = rest.div_one_plus_f() {
        rest = q;
        b += 1;
    }
    (a, b, rest)
}

fn special_power(a: u32, b: u32) -> Poly {
    Poly::one().shift_up(a as usize).mul_one_plus_f_pow(b as usize)
}

impl RationalFunction {
    /// Reduces `num/den` to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        Ok(Self::monic_den(num, den))
    }

    /// `num/den`, already coprime.
    fn monic_den(num: Poly, den: Poly) -> Self {
        let lead = den.leading().unwrap().clone();
        let (num, den) = if lead.is_one() {
            (num, den)
        } else {
            let inv = lead.recip().unwrap();
            (num.scale(&inv), den.scale(&inv))
        };
        let (fa, fb, rest) = split_special(&den);
        RationalFunction {
            num,
            den,
            fa,
            fb,
            plain: rest.is_one(),
        }
    }

    /// `num / (f^fa (1+f)^fb)`, cancelling common factors.
    fn from_special(num: Poly, mut fa: u32, mut fb: u32) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut num = num;
        while fa > 0 {
            match num.div_f() {
                Some(q) => {
                    num = q;
                    fa -= 1;
                }
                None => break,
            }
        }
        while fb > 0 {
            match num.div_one_plus_f() {
                Some(q) => {
                    num = q;
                    fb -= 1;
                }
                None => break,
            }
        }
        RationalFunction {
            num,
            den: special_power(fa, fb),
            fa,
            fb,
            plain: true,
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The framing indeterminate `f`.
    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
            fa: 0,
            fb: 0,
            plain: true,
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Evaluates at `f = x`; `None` when `x` is a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.plain {
            let (a, b, rest) = split_special(&self.num);
            if rest.is_constant() {
                let c = rest.coeff(0);
                let num = special_power(self.fa, self.fb).scale(&c.recip().unwrap());
                return Some(RationalFunction {
                    num,
                    den: special_power(a, b),
                    fa: a,
                    fb: b,
                    plain: true,
                });
            }
        }
        Some(Self::monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.plain && other.plain {
            let fa = self.fa.max(other.fa);
            let fb = self.fb.max(other.fb);
            let lift = |x: &Self| {
                x.num
                    .shift_up((fa - x.fa) as usize)
                    .mul_one_plus_f_pow((fb - x.fb) as usize)
            };
            return Self::from_special(lift(self).add(&lift(other)), fa, fb);
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return Self::from_poly(num);
            }
            return Self::new(num, self.den.clone()).unwrap();
        }
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            // gcd(ad + cb, bd) = 1 when both inputs are reduced and gcd(b, d) = 1
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            if num.is_zero() {
                return Self::zero();
            }
            return Self::monic_den(num, self.den.mul(&other.den));
        }
        let b1 = self.den.div_exact(&g);
        let d1 = other.den.div_exact(&g);
        let t = self.num.mul(&d1).add(&other.num.mul(&b1));
        if t.is_zero() {
            return Self::zero();
        }
        let g2 = t.gcd(&g);
        let (t, gg) = if g2.is_one() {
            (t, g)
        } else {
            (t.div_exact(&g2), g.div_exact(&g2))
        };
        Self::monic_den(t, b1.mul(&d1).mul(&gg))
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        if self.plain && other.plain {
            return Self::from_special(self.num.mul(&other.num), self.fa + other.fa, self.fb + other.fb);
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            (self.num.div_exact(&g1), other.den.div_exact(&g1))
        };
        let (c, b) = if g2.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            (other.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        Self::monic_den(a.mul(&c), b.mul(&d))
    }

    pub fn neg_ref(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
            fa: self.fa,
            fb: self.fb,
            plain: self.plain,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
            fa: self.fa,
            fb: self.fb,
            plain: self.plain,
        }
    }

    /// Degree of a polynomial value; `None` for zero or non-polynomials.
    pub fn poly_degree(&self) -> Option<usize> {
        if self.is_polynomial() {
            self.num.degree()
        } else {
            None
        }
    }

    /// `(N, D)` integer-coefficient polynomials with `self = N / D`,
    /// jointly primitive and `D` with positive leading coefficient.
    fn integer_form(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let (cn, mut pn) = self.num.integer_content();
        let (cd, pd) = self.den.integer_content();
        let ratio = cn / cd;
        let (rn, rd) = (ratio.numer().clone(), ratio.denom().clone());
        for c in pn.iter_mut() {
            *c *= &rn;
        }
        let pd = pd.into_iter().map(|c| c * &rd).collect();
        (pn, pd)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (n, d) = self.integer_form();
        let num = fmt_int_poly(&n, "f");
        if d.len() == 1 && d[0].is_one() {
            return if n.len() == 1 { write!(f, "{num}") } else { write!(f, "({num})") };
        }
        let den = fmt_int_poly(&d, "f");
        if d.len() == 1 {
            write!(f, "({num})/{den}")
        } else {
            write!(f, "({num})/({den})")
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct RatFuncRepr {
    num: Vec<Rational>,
    den: Vec<Rational>,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFuncRepr {
            num: self.num.coeffs().to_vec(),
            den: self.den.coeffs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RatFuncRepr::deserialize(d)?;
        RationalFunction::new(Poly::new(r.num), Poly::new(r.den)).map_err(serde::de::Error::custom)
    }
}

impl Add<&RationalFunction> for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.add_ref(rhs)
    }
}

impl Sub<&RationalFunction> for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.add_ref(&rhs.neg_ref())
    }
}

impl Mul<&RationalFunction> for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        self.mul_ref(rhs)
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.neg_ref()
    }
}

impl AddAssign<&RationalFunction> for RationalFunction {
    fn add_assign(&mut self, rhs: &RationalFunction) {
        *self = self.add_ref(rhs);
    }
}

impl SubAssign<&RationalFunction> for RationalFunction {
    fn sub_assign(&mut self, rhs: &RationalFunction) {
        *self = self.add_ref(&rhs.neg_ref());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    #[test]
    fn normalize_examples() {
        // (f^2 - 1)/(f - 1) = f + 1
        assert_eq!(rf(&[-1, 0, 1], &[-1, 1]), rf(&[1, 1], &[1]));
        // 2f / 2 = f
        assert_eq!(rf(&[0, 2], &[2]), RationalFunction::var());
        assert!(RationalFunction::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn involution_coefficient_shape() {
        // -2(f^2 - 1)/(3f), built from its factors
        let f = RationalFunction::var();
        let one = RationalFunction::one();
        let num = (f.clone() * &f - &one).scale(&Rational::from(-2));
        let den = f.scale(&Rational::from(3));
        let q = num * &den.recip().unwrap();
        assert_eq!(q, rf(&[2, 0, -2], &[0, 3]));
        assert_eq!(q.denom(), &Poly::var());
        assert_eq!(q.to_string(), "(-2*f^2+2)/(3*f)");
    }

    #[test]
    fn display_forms() {
        assert_eq!(rf(&[1, 1, 1], &[24]).to_string(), "(f^2+f+1)/24");
        assert_eq!(rf(&[0, 1], &[1]).to_string(), "(f)");
        assert_eq!(rf(&[5], &[1]).to_string(), "5");
        assert_eq!(rf(&[1], &[0, 0, 1, 1]).to_string(), "(1)/(f^3+f^2)");
    }

    #[test]
    fn serde_roundtrip() {
        let q = rf(&[1, 1, 1], &[0, 24]);
        let js = serde_json::to_string(&q).unwrap();
        assert_eq!(js, r#"{"num":["1/24","1/24","1/24"],"den":["0","1"]}"#);
        let back: RationalFunction = serde_json::from_str(&js).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn add_with_shared_factor() {
        // 1/(f(f+1)) + 1/f = (f+2)/(f(f+1))
        let a = rf(&[1], &[0, 1, 1]);
        let b = rf(&[1], &[0, 1]);
        assert_eq!(a.add_ref(&b), rf(&[2, 1], &[0, 1, 1]));
        // 1/(f+1) - 1/(f+1) = 0
        let c = rf(&[1], &[1, 1]);
        assert!((c.clone() - &c).is_zero());
    }
}
