//! Hurwitz numbers from symmetric-group character theory.
//!
//! Disconnected counts come from the character sum over Young diagrams and
//! connected counts from a formal logarithm in the algebra spanned by
//! `g_s^{b - |μ|} p_μ`. Multiplication concatenates partitions and adds the
//! branch-point grade `b`; the power of `g_s` is fixed by `b` and `μ`, so it
//! never has to be tracked separately.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition, Tableau};
use crate::rational::{factorial, Rational};

/// `|R|! / ∏ hooks`.
pub fn hook_dimension(r: &Tableau) -> BigInt {
    let cols = r.conjugate();
    let mut hooks = BigInt::one();
    for (i, &row) in r.parts().iter().enumerate() {
        for j in 0..row as usize {
            let arm = row as usize - j - 1;
            let leg = cols.parts()[j] as usize - i - 1;
            hooks *= BigInt::from(arm + leg + 1);
        }
    }
    factorial(r.size()) / hooks
}

fn char_memo() -> &'static Mutex<HashMap<(Tableau, Partition), BigInt>> {
    static MEMO: OnceLock<Mutex<HashMap<(Tableau, Partition), BigInt>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `χ_R(μ)` by the Murnaghan–Nakayama rule, removing border strips of
/// length `μ_1, μ_2, …` in turn. Strips are removed on the beta-set
/// `β_i = l_i + k - i`, where a strip of length `r` moves one bead down by
/// `r` and its height is the number of beads jumped over.
pub fn mn_character(r: &Tableau, mu: &Partition) -> Result<BigInt> {
    if r.size() != mu.size() {
        return Err(Error::SizeMismatch { tableau: r.size(), partition: mu.size() });
    }
    Ok(character(r, mu))
}

fn character(r: &Tableau, mu: &Partition) -> BigInt {
    if mu.is_empty() {
        return BigInt::one();
    }
    let key = (r.clone(), mu.clone());
    if let Some(v) = char_memo().lock().unwrap().get(&key) {
        return v.clone();
    }
    let k = r.len();
    let beta: Vec<i64> = r.parts().iter().enumerate().map(|(i, &l)| l as i64 + (k - i - 1) as i64).collect();
    let strip = mu.parts()[0] as i64;
    let rest = Partition::new(mu.parts()[1..].to_vec()).unwrap();
    let mut total = BigInt::zero();
    for (i, &b) in beta.iter().enumerate() {
        let nb = b - strip;
        if nb < 0 || beta.contains(&nb) {
            continue;
        }
        let jumped = beta.iter().filter(|&&x| x > nb && x < b).count();
        let mut moved = beta.clone();
        moved[i] = nb;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let len = moved.len();
        let rows: Vec<u32> = moved
            .iter()
            .enumerate()
            .map(|(j, &x)| (x - (len - j - 1) as i64) as u32)
            .filter(|&l| l > 0)
            .collect();
        let smaller = Partition::new(rows).unwrap();
        let c = character(&smaller, &rest);
        if jumped % 2 == 0 {
            total += c;
        } else {
            total -= c;
        }
    }
    char_memo().lock().unwrap().insert(key, total.clone());
    total
}

/// `κ_R = Σ l_i (l_i - 2i + 1)`, rows counted from 1.
pub fn kappa(r: &Tableau) -> i64 {
    r.parts()
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let l = l as i64;
            l * (l - 2 * (i as i64 + 1) + 1)
        })
        .sum()
}

/// `f_R(μ) = |μ|!/z_μ · χ_R(μ)/dim R`, and 0 when the sizes differ.
pub fn f_r(r: &Tableau, mu: &Partition) -> Rational {
    if r.size() != mu.size() {
        return Rational::zero();
    }
    let num = factorial(mu.size()) * character(r, mu);
    let den = mu.z() * hook_dimension(r);
    Rational::new(num, den).unwrap()
}

/// `H•_{b,μ} = Σ_R (dim R/|μ|!)² f_R(μ) (κ_R/2)^b` with `0^0 = 1`.
pub fn disconnected_hurwitz(b: u32, mu: &Partition) -> Rational {
    let n = mu.size();
    let nf = Rational::from(factorial(n));
    let mut acc = Rational::zero();
    for r in partitions_of(n) {
        let k = kappa(&r);
        if k == 0 && b > 0 {
            continue;
        }
        let d = Rational::from(hook_dimension(&r)) / &nf;
        let pw = Rational::new(k, 2).unwrap().pow(b as i32);
        acc += &(&(&d * &d) * &(&f_r(&r, mu) * &pw));
    }
    acc
}

/// Truncated series in the monomials `g_s^{b - |μ|} p_μ`, with `b ≤ max_b`
/// and `|μ| ≤ max_size`.
#[derive(Clone, PartialEq, Eq)]
pub struct HurwitzSeries {
    max_b: u32,
    max_size: u32,
    coeffs: BTreeMap<(u32, Partition), Rational>,
}

impl HurwitzSeries {
    pub fn new(max_b: u32, max_size: u32) -> Self {
        HurwitzSeries { max_b, max_size, coeffs: BTreeMap::new() }
    }

    /// `Z = 1 + Σ H•_{b,μ}/b! g_s^{b-|μ|} p_μ` from the character sum.
    pub fn partition_function(max_b: u32, max_size: u32) -> Self {
        let mut z = Self::new(max_b, max_size);
        z.coeffs.insert((0, Partition::empty()), Rational::one());
        for n in 1..=max_size {
            for mu in partitions_of(n) {
                for b in 0..=max_b {
                    let h = disconnected_hurwitz(b, &mu);
                    if !h.is_zero() {
                        z.coeffs.insert((b, mu.clone()), h / &Rational::from(factorial(b)));
                    }
                }
            }
        }
        z
    }

    /// `Z` from the Schur expansion `Σ_R (dim R/|R|!) e^{-g_s κ_R/2} s_R`
    /// with `s_R = Σ_μ χ_R(μ)/z_μ p_μ`.
    pub fn schur_partition_function(max_b: u32, max_size: u32) -> Self {
        let mut z = Self::new(max_b, max_size);
        z.coeffs.insert((0, Partition::empty()), Rational::one());
        for n in 1..=max_size {
            let nf = Rational::from(factorial(n));
            for r in partitions_of(n) {
                let d = Rational::from(hook_dimension(&r)) / &nf;
                let half = Rational::new(-kappa(&r), 2).unwrap();
                for mu in partitions_of(n) {
                    let s = Rational::new(character(&r, &mu), mu.z()).unwrap();
                    for b in 0..=max_b {
                        if half.is_zero() && b > 0 {
                            break;
                        }
                        let e = &half.pow(b as i32) / &Rational::from(factorial(b));
                        let term = &(&d * &s) * &e;
                        z.add_term(b, &mu, &term);
                    }
                }
            }
        }
        z.coeffs.retain(|_, v| !v.is_zero());
        z
    }

    pub fn max_b(&self) -> u32 {
        self.max_b
    }

    pub fn max_size(&self) -> u32 {
        self.max_size
    }

    /// Coefficient of `g_s^{b-|μ|} p_μ`.
    pub fn coeff(&self, b: u32, mu: &Partition) -> Result<Rational> {
        if b > self.max_b || mu.size() > self.max_size {
            return Err(Error::BoundOverflow(format!(
                "(b={b}, mu={mu}) outside b <= {}, |mu| <= {}",
                self.max_b, self.max_size
            )));
        }
        Ok(self.coeffs.get(&(b, mu.clone())).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, Partition), &Rational)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, b: u32, mu: &Partition, v: &Rational) {
        if v.is_zero() || b > self.max_b || mu.size() > self.max_size {
            return;
        }
        let e = self.coeffs.entry((b, mu.clone())).or_insert_with(Rational::zero);
        *e += v;
    }

    fn constant(&self) -> Rational {
        self.coeffs.get(&(0, Partition::empty())).cloned().unwrap_or_else(Rational::zero)
    }

    fn without_constant(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.remove(&(0, Partition::empty()));
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new(self.max_b.min(other.max_b), self.max_size.min(other.max_size));
        for ((b1, m1), v1) in &self.coeffs {
            for ((b2, m2), v2) in &other.coeffs {
                if b1 + b2 > out.max_b || m1.size() + m2.size() > out.max_size {
                    continue;
                }
                out.add_term(b1 + b2, &m1.concat(m2), &(v1 * v2));
            }
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        out
    }

    fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = &*v * c;
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        out
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((b, m), v) in &other.coeffs {
            out.add_term(*b, m, v);
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        out
    }

    /// Formal logarithm; needs constant term 1. Every non-constant monomial
    /// has `|μ| ≥ 1`, so `log(1 + X) = Σ_{k ≤ N} (-1)^{k+1} X^k / k`.
    pub fn log(&self) -> Result<Self> {
        if !self.constant().is_one() {
            return Err(Error::Parse("log needs a series with constant term 1".into()));
        }
        let x = self.without_constant();
        let mut out = Self::new(self.max_b, self.max_size);
        let mut power = x.clone();
        for k in 1..=self.max_size as i64 {
            let c = Rational::new(if k % 2 == 1 { 1 } else { -1 }, k).unwrap();
            out = out.add(&power.scale(&c));
            power = power.mul(&x);
        }
        Ok(out)
    }

    /// Formal exponential; needs zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant().is_zero() {
            return Err(Error::Parse("exp needs a series with zero constant term".into()));
        }
        let mut out = Self::new(self.max_b, self.max_size);
        out.coeffs.insert((0, Partition::empty()), Rational::one());
        let mut power = self.clone();
        for k in 1..=self.max_size {
            out = out.add(&power.scale(&Rational::new(1, factorial(k)).unwrap()));
            power = power.mul(self);
        }
        Ok(out)
    }
}

impl fmt::Debug for HurwitzSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HurwitzSeries")
            .field("max_b", &self.max_b)
            .field("max_size", &self.max_size)
            .field("terms", &self.coeffs.len())
            .finish()
    }
}

/// `b = 2g - 2 + ℓ(μ) + |μ|`, or an error when negative.
pub fn branch_count(g: u32, mu: &Partition) -> Result<u32> {
    let b = 2 * g as i64 - 2 + mu.len() as i64 + mu.size() as i64;
    u32::try_from(b).map_err(|_| Error::NegativeBranchCount)
}

/// Connected Hurwitz number read off `log Z` built to the given bounds.
pub fn connected_hurwitz_in(f: &HurwitzSeries, g: u32, mu: &Partition) -> Result<Rational> {
    let b = branch_count(g, mu)?;
    Ok(f.coeff(b, mu)? * &Rational::from(factorial(b)))
}

/// Connected Hurwitz number `H_{g,μ}`.
pub fn connected_hurwitz(g: u32, mu: &Partition) -> Result<Rational> {
    let b = branch_count(g, mu)?;
    let f = HurwitzSeries::partition_function(b, mu.size()).log()?;
    connected_hurwitz_in(&f, g, mu)
}

/// One line of the Schur comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurMismatch {
    pub b: u32,
    pub mu: Partition,
    pub character_sum: Rational,
    pub schur: Rational,
}

/// Compares the character-sum and Schur-form partition functions for all
/// `b ≤ max_b`, `|μ| ≤ max_size`; returns the disagreeing coefficients.
///
/// With `e^{-g_s κ_R/2}` the Schur form equals the character sum evaluated
/// at `(-g_s, -v)`, which multiplies the `(b, μ)` coefficient by `(-1)^b`.
/// The comparison applies that substitution; `literal = true` skips it.
pub fn schur_partition_function_check(max_b: u32, max_size: u32, literal: bool) -> Result<Vec<SchurMismatch>> {
    let a = HurwitzSeries::partition_function(max_b, max_size);
    let s = HurwitzSeries::schur_partition_function(max_b, max_size);
    let mut out = Vec::new();
    for n in 0..=max_size {
        for mu in partitions_of(n) {
            for b in 0..=max_b {
                let mut x = a.coeff(b, &mu)?;
                if !literal && b % 2 == 1 {
                    x = -x;
                }
                let y = s.coeff(b, &mu)?;
                if x != y {
                    out.push(SchurMismatch { b, mu: mu.clone(), character_sum: x, schur: y });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn hook_dimensions() {
        assert_eq!(hook_dimension(&p(&[4])), BigInt::from(1));
        assert_eq!(hook_dimension(&p(&[2, 1])), BigInt::from(2));
        assert_eq!(hook_dimension(&p(&[3, 2])), BigInt::from(5));
        for n in 1..=8 {
            let ones = Partition::new(vec![1; n as usize]).unwrap();
            for r in partitions_of(n) {
                assert_eq!(mn_character(&r, &ones).unwrap(), hook_dimension(&r), "{r}");
            }
        }
    }

    #[test]
    fn character_examples() {
        assert_eq!(mn_character(&p(&[3]), &p(&[2, 1])).unwrap(), BigInt::from(1));
        assert_eq!(mn_character(&p(&[1, 1]), &p(&[2])).unwrap(), BigInt::from(-1));
        assert_eq!(mn_character(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), BigInt::from(2));
        assert_eq!(mn_character(&p(&[2, 1]), &p(&[3])).unwrap(), BigInt::from(-1));
        assert!(mn_character(&p(&[2]), &p(&[1])).is_err());
    }

    #[test]
    fn column_orthogonality() {
        for n in 1..=6 {
            let ps = partitions_of(n);
            for mu in &ps {
                for nu in &ps {
                    let s: BigInt = ps.iter().map(|r| character(r, mu) * character(r, nu)).sum();
                    let expected = if mu == nu { mu.z() } else { BigInt::zero() };
                    assert_eq!(s, expected, "{mu} {nu}");
                }
            }
        }
    }

    #[test]
    fn kappa_and_f_r() {
        assert_eq!(kappa(&p(&[2])), 2);
        assert_eq!(kappa(&p(&[1, 1])), -2);
        assert_eq!(kappa(&p(&[2, 1])), 0);
        for n in 1..=6 {
            for r in partitions_of(n) {
                assert_eq!(kappa(&r) % 2, 0);
            }
        }
        assert_eq!(f_r(&p(&[2]), &p(&[2])), q(1, 1));
        assert_eq!(f_r(&p(&[1, 1]), &p(&[2])), q(-1, 1));
        assert_eq!(f_r(&p(&[2]), &p(&[1])), q(0, 1));
    }

    #[test]
    fn disconnected_examples() {
        assert_eq!(disconnected_hurwitz(0, &p(&[1])), q(1, 1));
        assert_eq!(disconnected_hurwitz(1, &p(&[2])), q(1, 2));
        assert_eq!(disconnected_hurwitz(2, &p(&[1, 1])), q(1, 2));
        assert_eq!(disconnected_hurwitz(1, &p(&[1])), q(0, 1));
    }

    #[test]
    fn parity_vanishing() {
        for n in 1..=5 {
            for mu in partitions_of(n) {
                for b in 0..8 {
                    if (b + n + mu.len() as u32) % 2 == 1 {
                        assert!(disconnected_hurwitz(b, &mu).is_zero(), "b={b} mu={mu}");
                    }
                }
            }
        }
    }

    #[test]
    fn connected_examples() {
        assert_eq!(connected_hurwitz(0, &p(&[1])).unwrap(), q(1, 1));
        assert_eq!(connected_hurwitz(0, &p(&[2])).unwrap(), q(1, 2));
        assert_eq!(connected_hurwitz(0, &p(&[1, 1])).unwrap(), q(1, 2));
        assert_eq!(connected_hurwitz(1, &p(&[2])).unwrap(), q(1, 2));
        assert_eq!(connected_hurwitz(1, &p(&[1])).unwrap(), q(0, 1));
        assert_eq!(connected_hurwitz(0, &p(&[3])).unwrap(), q(1, 1));
        // genus zero, one part: d^{d-3}
        assert_eq!(connected_hurwitz(0, &p(&[4])).unwrap(), q(4, 1));
        assert_eq!(connected_hurwitz(0, &p(&[5])).unwrap(), q(25, 1));
    }

    #[test]
    fn bound_overflow() {
        let f = HurwitzSeries::partition_function(2, 2).log().unwrap();
        assert!(matches!(connected_hurwitz_in(&f, 1, &p(&[2])), Err(Error::BoundOverflow(_))));
        assert!(matches!(connected_hurwitz(0, &Partition::empty()), Err(Error::NegativeBranchCount)));
    }

    #[test]
    fn log_exp_round_trip() {
        let z = HurwitzSeries::partition_function(5, 4);
        assert_eq!(z.log().unwrap().exp().unwrap(), z);
    }

    #[test]
    fn schur_form_agrees() {
        assert!(schur_partition_function_check(4, 4, false).unwrap().is_empty());
        // taken literally the two forms differ in sign at every odd b
        let lit = schur_partition_function_check(4, 4, true).unwrap();
        assert!(!lit.is_empty());
        assert!(lit.iter().all(|m| m.b % 2 == 1 && m.schur == -m.character_sum.clone()));
        let s = HurwitzSeries::schur_partition_function(4, 2);
        // only R = [1,1] and [2] contribute at (b, (1,1)); the b-parity pattern survives
        assert_eq!(s.coeff(1, &p(&[1, 1])).unwrap(), q(0, 1));
        assert_eq!(s.coeff(2, &p(&[1, 1])).unwrap(), q(1, 4));
    }
}
