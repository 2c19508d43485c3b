//! Truncated power series in two variables, graded by total degree.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::series::LaurentSeries;

/// `Σ c_{ij} x_1^i x_2^j` known for total degree `i + j < trunc`.
/// Component `d` holds the coefficients of `x_1^i x_2^{d-i}` for `i = 0..=d`.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateSeries<F> {
    comps: Vec<Vec<F>>,
}

impl<F: Field> BivariateSeries<F> {
    pub fn zero(trunc: usize) -> Self {
        BivariateSeries {
            comps: (0..trunc).map(|d| vec![F::zero(); d + 1]).collect(),
        }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if trunc > 0 {
            s.comps[0][0] = F::one();
        }
        s
    }

    /// `a(x_1)` or `a(x_2)` for a power series `a`.
    pub fn from_univariate(a: &LaurentSeries<F>, second: bool, trunc: usize) -> Result<Self> {
        let mut s = Self::zero(trunc);
        for d in 0..trunc {
            let c = a.coeff(d as i64)?;
            let i = if second { 0 } else { d };
            s.comps[d][i] = c;
        }
        Ok(s)
    }

    /// `(a(x_1) - a(x_2)) / (x_1 - x_2)`.
    pub fn divided_difference(a: &LaurentSeries<F>, trunc: usize) -> Result<Self> {
        let mut s = Self::zero(trunc);
        for d in 0..trunc {
            let c = a.coeff(d as i64 + 1)?;
            for slot in s.comps[d].iter_mut() {
                *slot = c.clone();
            }
        }
        Ok(s)
    }

    pub fn truncate(&self, t: usize) -> Self {
        BivariateSeries { comps: self.comps.iter().take(t).cloned().collect() }
    }

    pub fn trunc(&self) -> usize {
        self.comps.len()
    }

    /// Coefficient of `x_1^i x_2^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Result<F> {
        self.comps.get(i + j).map(|c| c[i].clone()).ok_or(Error::InsufficientTruncation {
            needed: (i + j) as i64,
            available: self.comps.len() as i64,
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        let t = self.trunc().min(other.trunc());
        BivariateSeries {
            comps: (0..t)
                .map(|d| self.comps[d].iter().zip(&other.comps[d]).map(|(a, b)| a.sub_ref(b)).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let t = self.trunc().min(other.trunc());
        let mut out = Self::zero(t);
        for d1 in 0..t {
            for d2 in 0..t - d1 {
                for (i1, a) in self.comps[d1].iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (i2, b) in other.comps[d2].iter().enumerate() {
                        out.comps[d1 + d2][i1 + i2].add_mul(a, b);
                    }
                }
            }
        }
        out
    }

    /// Inverse of a series with invertible constant term.
    pub fn invert(&self) -> Result<Self> {
        let t = self.trunc();
        let c0 = self.comps.first().ok_or(Error::ZeroSeries)?[0].inv().ok_or(Error::DivisionByZero)?;
        let mut out = Self::zero(t);
        if t == 0 {
            return Ok(out);
        }
        out.comps[0][0] = c0.clone();
        for d in 1..t {
            let mut acc = vec![F::zero(); d + 1];
            for d1 in 1..=d {
                for (i1, a) in self.comps[d1].iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (i2, b) in out.comps[d - d1].iter().enumerate() {
                        acc[i1 + i2].add_mul(a, b);
                    }
                }
            }
            out.comps[d] = acc.into_iter().map(|v| v.neg_ref().mul_ref(&c0)).collect();
        }
        Ok(out)
    }

    /// Exact quotient by `x_1 - x_2`; fails if the division leaves a remainder.
    /// The result is known one degree lower.
    pub fn div_diagonal(&self) -> Result<Self> {
        let t = self.trunc();
        if t == 0 {
            return Ok(self.clone());
        }
        if !self.comps[0][0].is_zero() {
            return Err(Error::ResidueObstruction("constant term is not divisible by x1 - x2".into()));
        }
        let mut out = Self::zero(t - 1);
        for d in 1..t {
            let p = &self.comps[d];
            let q = &mut out.comps[d - 1];
            // (x1 - x2) Σ q_i x1^i x2^{d-1-i} has x1^i x2^{d-i} coefficient q_{i-1} - q_i
            q[0] = p[0].neg_ref();
            for i in 1..d {
                q[i] = q[i - 1].sub_ref(&p[i]);
            }
            if q[d - 1] != p[d] {
                return Err(Error::ResidueObstruction(format!(
                    "degree {d} component is not divisible by x1 - x2"
                )));
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.comps.iter().all(|c| c.iter().eq(c.iter().rev()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    type Q = Rational;

    #[test]
    fn divided_difference_of_square() {
        let a = LaurentSeries::<Q>::exact(0, vec![Q::zero(), Q::zero(), Q::one()]);
        let s = BivariateSeries::divided_difference(&a, 4).unwrap();
        assert_eq!(s.coeff(1, 0).unwrap(), Q::one());
        assert_eq!(s.coeff(0, 1).unwrap(), Q::one());
        assert_eq!(s.coeff(0, 0).unwrap(), Q::zero());
    }

    #[test]
    fn diagonal_division_round_trip() {
        let a = LaurentSeries::<Q>::power_series((1..8).map(Q::from).collect(), 7);
        let a1 = BivariateSeries::from_univariate(&a, false, 6).unwrap();
        let a2 = BivariateSeries::from_univariate(&a, true, 6).unwrap();
        let q = a1.sub(&a2).div_diagonal().unwrap();
        assert_eq!(q, BivariateSeries::divided_difference(&a, 5).unwrap());
        assert!(a1.div_diagonal().is_err());
    }

    #[test]
    fn inverse() {
        let a = LaurentSeries::<Q>::power_series((1..8).map(Q::from).collect(), 7);
        let s = BivariateSeries::divided_difference(&a, 6).unwrap();
        let p = s.mul(&s.invert().unwrap());
        assert_eq!(p, BivariateSeries::one(6));
    }
}
