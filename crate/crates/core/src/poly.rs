//! Dense univariate polynomials in `f` over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Polynomial with ascending coefficients; trailing zeros are always trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The indeterminate `f`.
    pub fn var() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dl = divisor.leading().expect("polynomial division by zero");
        let dl_inv = dl.recip().unwrap();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &dl_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact quotient when `divisor` is known to divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        if divisor.is_constant() {
            return self.scale(&divisor.coeffs[0].recip().expect("division by zero"));
        }
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.recip().unwrap()),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_constant() && !self.is_zero() || other.is_constant() && !other.is_zero() {
            return Poly::one();
        }
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// `self * f^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// `self * (1 + f)^k`.
    pub fn mul_one_plus_f_pow(&self, k: usize) -> Poly {
        let mut c = self.coeffs.clone();
        for _ in 0..k {
            c.push(Rational::zero());
            for i in (1..c.len()).rev() {
                let prev = c[i - 1].clone();
                c[i] += &prev;
            }
        }
        Poly::new(c)
    }

    /// `self / f` when `f` divides `self`.
    pub fn div_f(&self) -> Option<Poly> {
        match self.coeffs.first() {
            Some(c) if c.is_zero() => Some(Poly { coeffs: self.coeffs[1..].to_vec() }),
            _ => None,
        }
    }

    /// `self / (1 + f)` when `1 + f` divides `self` (synthetic division at -1).
    pub fn div_one_plus_f(&self) -> Option<Poly> {
        if self.coeffs.len() < 2 {
            return None;
        }
        let n = self.coeffs.len();
        let mut q = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for k in (1..n).rev() {
            carry = &self.coeffs[k] - &carry;
            q[k - 1] = carry.clone();
        }
        // remainder is coeffs[0] - q[0]
        if self.coeffs[0] != q[0] {
            return None;
        }
        Some(Poly::new(q))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `(content, primitive)` with `self = content * primitive`, the primitive
    /// part having coprime integer coefficients and positive leading term.
    pub fn integer_content(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (Rational::zero(), Vec::new());
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        let content = Rational::new(g, lcm).unwrap();
        (content, prim)
    }
}

/// Renders integer coefficients in descending order, e.g. `f^2+f+1`.
pub(crate) fn fmt_int_poly(coeffs: &[BigInt], var: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (content, prim) = self.integer_content();
        write!(f, "({})*({})", content, fmt_int_poly(&prim, "f"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        // f^2 - 1 = (f - 1)(f + 1)
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, Poly::from_ints(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&b), b);
        let c = Poly::from_ints(&[2, 0, 2]);
        assert_eq!(a.gcd(&c), Poly::one());
    }

    #[test]
    fn content_split() {
        let p = Poly::new(vec![
            Rational::new(1, 24).unwrap(),
            Rational::new(1, 24).unwrap(),
            Rational::new(1, 24).unwrap(),
        ]);
        let (c, prim) = p.integer_content();
        assert_eq!(c, Rational::new(1, 24).unwrap());
        assert_eq!(fmt_int_poly(&prim, "f"), "f^2+f+1");
        let q = Poly::from_ints(&[0, 3, -6]);
        let (c, prim) = q.integer_content();
        assert_eq!(c, Rational::from(-3));
        assert_eq!(fmt_int_poly(&prim, "f"), "2*f^2-f");
    }

    #[test]
    fn special_factors() {
        let p = Poly::from_ints(&[2, 3, 1]); // (1+f)(2+f)
        assert_eq!(p.div_one_plus_f(), Some(Poly::from_ints(&[2, 1])));
        assert_eq!(Poly::from_ints(&[1, 2]).div_one_plus_f(), None);
        assert_eq!(p.shift_up(2).div_f().unwrap().div_f(), Some(p.clone()));
        assert_eq!(p.div_f(), None);
        assert_eq!(Poly::from_ints(&[2, 1]).mul_one_plus_f_pow(1), p);
        assert_eq!(Poly::one().mul_one_plus_f_pow(3), Poly::from_ints(&[1, 3, 3, 1]));
    }

    #[test]
    fn eval_horner() {
        let p = Poly::from_ints(&[1, 1, 1]);
        assert_eq!(p.eval(&Rational::from(2)), Rational::from(7));
    }
}
