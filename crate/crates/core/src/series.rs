//! Truncated Laurent series with dense coefficient storage.
//!
//! A series is `Σ c_k z^k` for `k ≥ lowest`, known exactly for all exponents
//! strictly below `trunc`. A series with `trunc = None` is an exact Laurent
//! polynomial. Every operation returns the largest truncation it can
//! guarantee from its inputs; asking for a coefficient outside that window
//! yields [`Error::InsufficientTruncation`].

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::rational::Rational;

#[derive(Clone, PartialEq)]
pub struct LaurentSeries<F> {
    lowest: i64,
    coeffs: Vec<F>,
    trunc: Option<i64>,
}

fn min_trunc(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_trunc(t: Option<i64>, k: i64) -> Option<i64> {
    t.map(|t| t + k)
}

impl<F: Field> LaurentSeries<F> {
    /// Builds `Σ coeffs[k] z^(lowest + k)` known below `trunc`, dropping any
    /// coefficient at or beyond `trunc` and normalizing leading zeros.
    pub fn new(lowest: i64, coeffs: Vec<F>, trunc: Option<i64>) -> Self {
        let mut s = LaurentSeries { lowest, coeffs, trunc };
        s.normalize();
        s
    }

    pub fn exact(lowest: i64, coeffs: Vec<F>) -> Self {
        Self::new(lowest, coeffs, None)
    }

    pub fn truncated(lowest: i64, coeffs: Vec<F>, trunc: i64) -> Self {
        Self::new(lowest, coeffs, Some(trunc))
    }

    /// Power series `Σ_{k<trunc} coeffs[k] z^k`.
    pub fn power_series(coeffs: Vec<F>, trunc: i64) -> Self {
        Self::truncated(0, coeffs, trunc)
    }

    pub fn zero() -> Self {
        Self::exact(0, Vec::new())
    }

    /// The unknown series `O(z^trunc)`.
    pub fn zero_to(trunc: i64) -> Self {
        Self::truncated(trunc, Vec::new(), trunc)
    }

    pub fn one() -> Self {
        Self::monomial(F::one(), 0)
    }

    /// The coordinate `z`.
    pub fn var() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(c: F, e: i64) -> Self {
        Self::exact(e, vec![c])
    }

    fn normalize(&mut self) {
        if let Some(t) = self.trunc {
            let keep = (t - self.lowest).max(0) as usize;
            if self.coeffs.len() > keep {
                self.coeffs.truncate(keep);
            }
        }
        while self.coeffs.last().is_some_and(F::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.lowest = self.trunc.unwrap_or(0);
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.lowest += lead as i64;
        }
    }

    /// Valuation: exponent of the first nonzero coefficient (equals `trunc`
    /// for a truncated zero series, and 0 for the exact zero).
    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn trunc(&self) -> Option<i64> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_known(&self, e: i64) -> bool {
        self.trunc.is_none_or(|t| e < t)
    }

    /// Coefficient of `z^e`.
    pub fn coeff(&self, e: i64) -> Result<F> {
        if !self.is_known(e) {
            return Err(Error::InsufficientTruncation {
                needed: e,
                available: self.trunc.unwrap(),
            });
        }
        Ok(self.coeff_or_zero(e))
    }

    fn coeff_or_zero(&self, e: i64) -> F {
        if e < self.lowest {
            return F::zero();
        }
        self.coeffs
            .get((e - self.lowest) as usize)
            .cloned()
            .unwrap_or_else(F::zero)
    }

    /// Borrowing access for exponents inside the stored range.
    fn coeff_ref(&self, e: i64) -> Option<&F> {
        if e < self.lowest {
            return None;
        }
        self.coeffs.get((e - self.lowest) as usize)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.first()
    }

    /// `(exponent, coefficient)` pairs of the stored nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.lowest + k as i64, c))
    }

    /// Highest stored exponent, if any.
    pub fn highest(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lowest + self.coeffs.len() as i64 - 1)
        }
    }

    /// Coefficients from `z^from` up to (excluding) `z^to`, zero-filled;
    /// fails if any of them is unknown.
    pub fn coeff_range(&self, from: i64, to: i64) -> Result<Vec<F>> {
        (from..to).map(|e| self.coeff(e)).collect()
    }

    /// Forgets everything at or beyond `z^t`.
    pub fn truncate(&self, t: i64) -> Self {
        Self::new(self.lowest, self.coeffs.clone(), min_trunc(self.trunc, Some(t)))
    }

    /// Treats the stored coefficients as an exact Laurent polynomial.
    pub fn as_exact(&self) -> Self {
        Self::exact(self.lowest, self.coeffs.clone())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> LaurentSeries<G> {
        LaurentSeries::new(self.lowest, self.coeffs.iter().map(f).collect(), self.trunc)
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> std::result::Result<G, E>) -> std::result::Result<LaurentSeries<G>, E> {
        let coeffs = self.coeffs.iter().map(f).collect::<std::result::Result<Vec<_>, E>>()?;
        Ok(LaurentSeries::new(self.lowest, coeffs, self.trunc))
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = min_trunc(self.trunc, other.trunc);
        if self.is_zero() {
            return Self::new(other.lowest, other.coeffs.clone(), trunc);
        }
        if other.is_zero() {
            return Self::new(self.lowest, self.coeffs.clone(), trunc);
        }
        let lo = self.lowest.min(other.lowest);
        let mut hi = self.highest().unwrap().max(other.highest().unwrap());
        if let Some(t) = trunc {
            hi = hi.min(t - 1);
        }
        if hi < lo {
            return Self::new(lo, Vec::new(), trunc);
        }
        let coeffs = (lo..=hi)
            .map(|e| match (self.coeff_ref(e), other.coeff_ref(e)) {
                (Some(a), Some(b)) => a.add_ref(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => F::zero(),
            })
            .collect();
        Self::new(lo, coeffs, trunc)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(F::neg_ref).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(
            self.lowest,
            self.coeffs.iter().map(|a| a.mul_ref(c)).collect(),
            self.trunc,
        )
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            lowest: self.lowest + k,
            coeffs: self.coeffs.clone(),
            trunc: add_trunc(self.trunc, k),
        }
    }

    /// Product, known below `min(a.trunc + b.lowest, b.trunc + a.lowest)`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact() && self.is_zero() || other.is_exact() && other.is_zero() {
            return Self::zero();
        }
        let trunc = min_trunc(
            add_trunc(self.trunc, other.lowest),
            add_trunc(other.trunc, self.lowest),
        );
        let lo = self.lowest + other.lowest;
        if self.is_zero() || other.is_zero() {
            return Self::new(lo, Vec::new(), trunc);
        }
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(t) = trunc {
            len = len.min((t - lo).max(0) as usize);
        }
        let mut out = vec![F::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(len - i).enumerate() {
                out[i + j].add_mul(a, b);
            }
        }
        Self::new(lo, out, trunc)
    }

    /// Multiplicative inverse. A truncated input with valuation `v` known
    /// below `t` yields a result with valuation `-v` known below `t - 2v`.
    pub fn invert(&self) -> Result<Self> {
        let a0 = self.leading().ok_or(Error::ZeroSeries)?;
        let a0_inv = a0.inv().ok_or(Error::DivisionByZero)?;
        let v = self.lowest;
        let Some(t) = self.trunc else {
            if self.coeffs.len() == 1 {
                return Ok(Self::monomial(a0_inv, -v));
            }
            return Err(Error::NeedsTruncation("inverse"));
        };
        let n = (t - v) as usize;
        let mut out: Vec<F> = Vec::with_capacity(n);
        out.push(a0_inv.clone());
        for k in 1..n {
            let mut acc = F::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc.add_mul(&self.coeffs[j], &out[k - j]);
            }
            out.push(acc.neg_ref().mul_ref(&a0_inv));
        }
        Ok(Self::truncated(-v, out, t - 2 * v))
    }

    /// Integer power; negative exponents go through [`Self::invert`].
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.invert()?.pow(-n);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale_int(self.lowest + k as i64))
            .collect();
        Self::new(self.lowest - 1, coeffs, add_trunc(self.trunc, -1))
    }

    /// The primitive with constant term `constant`.
    pub fn primitive(&self, constant: &F) -> Result<Self> {
        if !self.coeff(-1)?.is_zero() {
            return Err(Error::LogarithmicPrimitive);
        }
        let coeffs: Vec<F> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let e = self.lowest + k as i64 + 1;
                if e == 0 {
                    F::zero()
                } else {
                    c.mul_ref(&F::from_rational(&Rational::new(1, e).unwrap()))
                }
            })
            .collect();
        let body = Self::new(self.lowest + 1, coeffs, add_trunc(self.trunc, 1));
        Ok(body.add(&Self::monomial(constant.clone(), 0)))
    }

    /// Coefficient of `z^-1`.
    pub fn residue(&self) -> Result<F> {
        self.coeff(-1)
    }

    /// Formal composition `outer(inner)`.
    ///
    /// An exact outer polynomial accepts any inner series (invertible when
    /// outer has negative exponents). A truncated outer series needs an
    /// inner series of positive valuation, or an inner series that is
    /// exactly zero.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.is_zero() {
            return Ok(Self::new(0, Vec::new(), outer.trunc.map(|_| {
                if inner.lowest >= 1 { outer.trunc.unwrap() * inner.lowest } else { 0 }
            })));
        }
        if inner.is_zero() {
            if outer.lowest < 0 {
                return Err(Error::BadComposition("negative powers of a zero series"));
            }
            let c0 = outer.coeff(0)?;
            return Ok(match inner.trunc {
                None => Self::monomial(c0, 0),
                Some(t) => {
                    let known = if outer.trunc.is_some_and(|to| to <= 1) { 0 } else { t.max(0) };
                    Self::new(0, vec![c0], Some(known))
                }
            });
        }
        let v = inner.lowest;
        let cap = match outer.trunc {
            None => None,
            Some(to) => {
                if v < 1 {
                    return Err(Error::BadComposition(
                        "inner series must vanish at z = 0 for an infinite outer series",
                    ));
                }
                Some(to * v)
            }
        };
        let inner_t = match cap {
            Some(c) => inner.truncate(c),
            None => inner.clone(),
        };
        // outer = z^lo * P(z) with P a polynomial; Horner on P
        let lo = outer.lowest;
        let mut acc = Self::zero();
        for c in outer.coeffs.iter().rev() {
            acc = acc.mul(&inner_t).add(&Self::monomial(c.clone(), 0));
        }
        let mut out = if lo != 0 { acc.mul(&inner_t.pow(lo)?) } else { acc };
        if let Some(c) = cap {
            out = out.truncate(c);
        }
        Ok(out)
    }

    /// Compositional inverse by Newton iteration, doubling the precision at
    /// every step: returns `b` with `self(b(x)) = x + O(x^order)`.
    pub fn reversion(&self, order: i64) -> Result<Self> {
        if self.lowest != 1 || self.is_zero() {
            return Err(Error::VanishingLinearTerm);
        }
        if let Some(t) = self.trunc {
            if t < order {
                return Err(Error::InsufficientTruncation { needed: order - 1, available: t });
            }
        }
        let c1_inv = self.leading().unwrap().inv().ok_or(Error::VanishingLinearTerm)?;
        let mut b = Self::truncated(1, vec![c1_inv], 2.min(order));
        let mut prec = 2;
        let x = Self::var();
        while prec < order {
            let next = (2 * prec).min(order);
            let a = self.truncate(next);
            let bb = b.as_exact().truncate(next);
            let residual = Self::compose(&a, &bb)?.sub(&x);
            let slope = Self::compose(&a.derivative(), &bb)?;
            let step = residual.mul(&slope.invert()?);
            b = bb.sub(&step).truncate(next);
            prec = next;
        }
        Ok(b.truncate(order))
    }

    /// Square root of a series `1 + O(z)`.
    pub fn sqrt_unit(&self) -> Result<Self> {
        if self.lowest != 0 || !self.leading().is_some_and(F::is_one) {
            return Err(Error::NonUnitSquareRoot);
        }
        let t = self.trunc.ok_or(Error::NeedsTruncation("square root"))?;
        let half = F::from_rational(&Rational::new(1, 2).unwrap());
        let n = t.max(0) as usize;
        let mut r: Vec<F> = Vec::with_capacity(n);
        r.push(F::one());
        for k in 1..n {
            let mut acc = self.coeff_or_zero(k as i64);
            for i in 1..k {
                acc.sub_assign_ref(&r[i].mul_ref(&r[k - i]));
            }
            r.push(acc.mul_ref(&half));
        }
        Ok(Self::power_series(r, t))
    }
}

impl<F: Field> fmt::Debug for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})z^{e}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(t) = self.trunc {
            write!(f, " + O(z^{t})")?;
        }
        Ok(())
    }
}

/// `Σ_{n<trunc} z^n / n!`.
pub fn exp_series<F: Field>(trunc: i64) -> LaurentSeries<F> {
    let mut c = Vec::new();
    let mut fact = Rational::one();
    for n in 0..trunc.max(0) {
        if n > 0 {
            fact = fact * Rational::from(n);
        }
        c.push(F::from_rational(&fact.recip().unwrap()));
    }
    LaurentSeries::power_series(c, trunc)
}

/// `log(1 + z) = Σ_{n≥1} (-1)^(n+1) z^n / n`.
pub fn log1p_series<F: Field>(trunc: i64) -> LaurentSeries<F> {
    let c = (0..trunc.max(0))
        .map(|n| {
            if n == 0 {
                F::zero()
            } else {
                let s = if n % 2 == 1 { 1 } else { -1 };
                F::from_rational(&Rational::new(s, n).unwrap())
            }
        })
        .collect();
    LaurentSeries::power_series(c, trunc)
}

/// `1 / (1 - z)` to the given truncation.
pub fn geometric_series<F: Field>(trunc: i64) -> LaurentSeries<F> {
    LaurentSeries::power_series(vec![F::one(); trunc.max(0) as usize], trunc)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Rational;
    type S = LaurentSeries<Q>;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&c| Q::from(c)).collect()
    }

    #[test]
    fn mul_identity_cases() {
        let z = S::var();
        let zi = S::monomial(Q::one(), -1);
        assert_eq!(z.mul(&zi), S::one());
        let a = S::power_series(ints(&[1, 1]), 3);
        let b = S::power_series(ints(&[1, -1]), 3);
        let p = a.mul(&b);
        assert_eq!(p.trunc(), Some(3));
        assert_eq!(p.coeff_range(0, 3).unwrap(), ints(&[1, 0, -1]));
    }

    #[test]
    fn mul_truncation_rule() {
        // (z^-2 + O(z^3)) * (z + O(z^4)) is known below min(3+1, 4-2) = 2
        let a = S::truncated(-2, ints(&[1]), 3);
        let b = S::truncated(1, ints(&[1]), 4);
        assert_eq!(a.mul(&b).trunc(), Some(2));
    }

    #[test]
    fn invert_examples() {
        let a = S::power_series(ints(&[1, -1]), 6);
        let inv = a.invert().unwrap();
        assert_eq!(inv.coeff_range(0, 6).unwrap(), ints(&[1, 1, 1, 1, 1, 1]));
        let z2 = S::monomial(Q::one(), 2);
        assert_eq!(z2.invert().unwrap(), S::monomial(Q::one(), -2));
        assert_eq!(S::zero().invert(), Err(Error::ZeroSeries));
        // lowest exponent flips sign, truncation drops by 2v
        let w = S::truncated(2, ints(&[-2, 3, 5]), 8);
        let wi = w.invert().unwrap();
        assert_eq!(wi.lowest(), -2);
        assert_eq!(wi.trunc(), Some(4));
        let back = w.mul(&wi);
        assert_eq!(back.trunc(), Some(6));
        assert_eq!(back.coeff_range(0, 6).unwrap(), ints(&[1, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn compose_examples() {
        // exp(-z)
        let e = exp_series::<Q>(8);
        let r = S::compose(&e, &S::monomial(Q::from(-1), 1)).unwrap();
        let mut fact = 1i64;
        for n in 0..8 {
            if n > 0 {
                fact *= n;
            }
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(r.coeff(n).unwrap(), q(sign, fact));
        }
        // geometric series at an exactly-zero argument is 1
        let g = geometric_series::<Q>(10);
        assert_eq!(S::compose(&g, &S::zero()).unwrap(), S::one());
        // z^2 composed with an exact polynomial
        let sq = S::monomial(Q::one(), 2);
        let inner = S::exact(1, ints(&[1, 1]));
        assert_eq!(S::compose(&sq, &inner).unwrap(), S::exact(2, ints(&[1, 2, 1])));
    }

    #[test]
    fn compose_rejects_constant_inner_for_infinite_outer() {
        let g = geometric_series::<Q>(5);
        let inner = S::power_series(ints(&[1, 1]), 5);
        assert!(matches!(S::compose(&g, &inner), Err(Error::BadComposition(_))));
    }

    /// Coefficients of the series b with b - b^2 = x, from the quadratic
    /// recursion b_n = Σ_{i+j=n} b_i b_j; these are shifted Catalan numbers.
    fn catalan_oracle(n: usize) -> Vec<i64> {
        let mut b = vec![0i64; n];
        b[1] = 1;
        for k in 2..n {
            b[k] = (1..k).map(|i| b[i] * b[k - i]).sum();
        }
        b
    }

    #[test]
    fn reversion_examples() {
        let z = S::var().truncate(10);
        assert_eq!(z.reversion(10).unwrap().coeff_range(0, 10).unwrap(), ints(&[0, 1, 0, 0, 0, 0, 0, 0, 0, 0]));
        let a = S::exact(1, ints(&[1, -1]));
        let b = a.reversion(12).unwrap();
        assert_eq!(b.coeff_range(0, 12).unwrap(), ints(&catalan_oracle(12)));
        assert_eq!(b.coeff_range(1, 5).unwrap(), ints(&[1, 1, 2, 5]));
        let bad = S::exact(2, ints(&[1]));
        assert_eq!(bad.reversion(5), Err(Error::VanishingLinearTerm));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(S::monomial(Q::one(), -1).residue().unwrap(), Q::one());
        let a = S::exact(-2, ints(&[1, 3, 5]));
        assert_eq!(a.residue().unwrap(), Q::from(3));
        let short = S::truncated(-3, ints(&[1]), -1);
        assert!(matches!(short.residue(), Err(Error::InsufficientTruncation { .. })));
    }

    #[test]
    fn sqrt_and_primitive() {
        // sqrt(1 + z)^2 = 1 + z
        let a = S::power_series(ints(&[1, 1]), 9);
        let r = a.sqrt_unit().unwrap();
        assert_eq!(r.coeff(2).unwrap(), q(-1, 8));
        let back = r.mul(&r);
        assert_eq!(back.coeff_range(0, 9).unwrap(), ints(&[1, 1, 0, 0, 0, 0, 0, 0, 0]));
        let d = S::exact(-2, ints(&[1, 0, 2]));
        let p = d.primitive(&Q::from(7)).unwrap();
        assert_eq!(p, S::exact(-1, ints(&[-1, 7, 2])));
        assert_eq!(S::monomial(Q::one(), -1).primitive(&Q::zero()), Err(Error::LogarithmicPrimitive));
    }
}
