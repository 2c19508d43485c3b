//! Hodge brackets, Hurwitz numbers and the infinite-framing limit.
//!
//! The Lambert tensor entry at `(n_1, …, n_h)` is the bracket
//! `⟨τ_{n_1} … τ_{n_h} Λ_g^∨(1)⟩`. The framed tensor is
//! `(-1)^{g+h} (f(f+1))^{h-1}` times the triple-Hodge bracket
//! `⟨τ … Λ_g^∨(1) Λ_g^∨(-f-1) Λ_g^∨(f)⟩`.
//!
//! # The limit f → ∞
//!
//! The framed x-weight of `ζ_n` at `x^{μ-1}` is
//! `μ^{n+2} ∏_{j=1}^{μ-1}(μf + j) / μ!`, a polynomial of degree `μ - 1`
//! whose top coefficient is the Lambert weight `μ^{μ+1+n}/μ!`. So rescaling
//! `x ↦ x/f` sends every framed weight to its Lambert value as `f → ∞`,
//! independently of `n`. The triple bracket has degree at most `2g` with top
//! coefficient `(-1)^g` times the single bracket, and `(f(f+1))^{h-1}` grows
//! like `f^{2h-2}`. Multiplying out, the framed tensor entry grows like
//! `(-1)^{g+h} (-1)^g f^{2g+2h-2} = (-1)^h f^{2g+2h-2}` times the Lambert
//! entry, which is the stated limit `(-1)^h f^{-(2g+2h-2)} W_g(x/f) → H_g`.
//! Only the monomials `x^{μ-1}` are rescaled; `dx` is left alone.

use std::fmt;

use serde::Serialize;

use crate::curve::{zeta_weight, CurveKind};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::oracle::branch_count;
use crate::partition::Partition;
use crate::rational::{factorial, Rational};
use crate::ratfunc::RationalFunction;
use crate::recursion::{w_unstable_annulus, w_unstable_disk, Engine, WAmplitude};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BracketKind {
    /// `⟨τ … Λ_g^∨(1)⟩`
    SingleLambda,
    /// `⟨τ … Λ_g^∨(1) Λ_g^∨(-f-1) Λ_g^∨(f)⟩`
    TripleLambda,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HodgeBracket<F: Field> {
    pub g: u32,
    pub indices: Vec<u32>,
    pub kind: BracketKind,
    pub value: F,
}

fn check_stable(g: u32, h: usize) -> Result<()> {
    if h == 0 || 2 * g as i64 - 2 + h as i64 <= 0 {
        return Err(Error::Unstable { g, h: h as u32 });
    }
    Ok(())
}

fn sorted(indices: &[u32]) -> Vec<u32> {
    let mut v = indices.to_vec();
    v.sort_unstable();
    v
}

/// `⟨τ_{n_1} … τ_{n_h} Λ_g^∨(1)⟩`, read from the Lambert tensor.
pub fn hodge_bracket(engine: &mut Engine<Rational>, g: u32, indices: &[u32]) -> Result<HodgeBracket<Rational>> {
    check_stable(g, indices.len())?;
    if engine.curve().kind() != CurveKind::Lambert {
        return Err(Error::OutOfScope("single-Hodge brackets come from the Lambert curve".into()));
    }
    let amp = engine.w_amplitude(g, indices.len() as u32)?;
    let indices = sorted(indices);
    let value = amp.coeff(&indices);
    Ok(HodgeBracket { g, indices, kind: BracketKind::SingleLambda, value })
}

/// `(-1)^{g+h} (f(f+1))^{h-1}`.
pub fn framed_prefactor<F: Field>(f: &F, g: u32, h: u32) -> F {
    let ff = f.mul_ref(&f.add_ref(&F::one()));
    let p = ff.pow(h - 1);
    if (g + h) % 2 == 1 {
        p.neg_ref()
    } else {
        p
    }
}

/// The framed tensor divided by [`framed_prefactor`], entry by entry.
pub fn triple_brackets<F: Field>(amp: &WAmplitude<F>, f: &F) -> Result<Vec<HodgeBracket<F>>> {
    let inv = framed_prefactor(f, amp.g(), amp.h()).inv().ok_or(Error::DegenerateFraming)?;
    Ok(amp
        .entries()
        .map(|(n, v)| HodgeBracket { g: amp.g(), indices: n.clone(), kind: BracketKind::TripleLambda, value: v.mul_ref(&inv) })
        .collect())
}

/// `⟨τ_{n_1} … τ_{n_h} Λ_g^∨(1) Λ_g^∨(-f-1) Λ_g^∨(f)⟩` from the framed tensor.
pub fn framed_bracket<F: Field>(engine: &mut Engine<F>, g: u32, indices: &[u32]) -> Result<HodgeBracket<F>> {
    check_stable(g, indices.len())?;
    let Some(f) = engine.curve().framing().cloned() else {
        return Err(Error::OutOfScope("triple-Hodge brackets come from the framed curve".into()));
    };
    let h = indices.len() as u32;
    let amp = engine.w_amplitude(g, h)?;
    let indices = sorted(indices);
    let inv = framed_prefactor(&f, g, h).inv().ok_or(Error::DegenerateFraming)?;
    let value = amp.coeff(&indices).mul_ref(&inv);
    Ok(HodgeBracket { g, indices, kind: BracketKind::TripleLambda, value })
}

/// A connected Hurwitz number with its branch-point count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HurwitzValue {
    pub g: u32,
    pub mu: Partition,
    pub b: u32,
    pub value: Rational,
}

impl HurwitzValue {
    pub fn csv_header() -> &'static str {
        "g,mu,b,value"
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.g, self.mu, self.b, self.value)
    }
}

impl fmt::Display for HurwitzValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H_{{{},({})}} = {}", self.g, self.mu, self.value)
    }
}

/// CSV table with header.
pub fn hurwitz_csv(values: &[HurwitzValue]) -> String {
    let mut out = String::from(HurwitzValue::csv_header());
    out.push('\n');
    for v in values {
        out.push_str(&v.csv_row());
        out.push('\n');
    }
    out
}

/// `H_{g,μ}` from the Lambert amplitudes.
///
/// The generating function is `Σ_μ z_μ/b! · H_{g,μ} · m_μ(x)` with
/// `m_μ = 1/|Aut μ| Σ_{σ ∈ S_h} ∏ x_{σ(i)}^{μ_i - 1}`, so each distinct
/// monomial of `m_μ` has coefficient 1. For `μ = (2,1)`, `m_μ = x_1 + x_2`
/// and the coefficient of `x_1 x_2^0` is `z_μ/b! · H` with `z_μ = 2`,
/// `b = 2g + 3`. The ordered coefficient from
/// [`w_as_x_coefficients`](crate::recursion::w_as_x_coefficients) is
/// therefore multiplied by `b!/z_μ`. The unstable cases `(0,1)` and `(0,2)`
/// are read from the disk and annulus series.
pub fn hurwitz_from_recursion(engine: &mut Engine<Rational>, g: u32, mu: &Partition) -> Result<HurwitzValue> {
    if engine.curve().kind() != CurveKind::Lambert {
        return Err(Error::OutOfScope("Hurwitz numbers come from the Lambert curve".into()));
    }
    if mu.is_empty() {
        return Err(Error::NegativeBranchCount);
    }
    let b = branch_count(g, mu)?;
    let h = mu.len() as u32;
    let parts = mu.parts();
    let coeff = match (g, h) {
        (0, 1) => {
            let disk = w_unstable_disk(engine.curve(), parts[0] as i64)?;
            disk.coeff(parts[0] as i64 - 1)?
        }
        (0, 2) => {
            let order = (parts[0] + parts[1] - 1) as usize;
            let ann = w_unstable_annulus(engine.curve(), order)?;
            ann.coeff(parts[0] as usize - 1, parts[1] as usize - 1)?
        }
        _ => {
            let amp = engine.w_amplitude(g, h)?;
            engine.w_as_x_coefficients(&amp, mu)?
        }
    };
    let norm = Rational::new(factorial(b), mu.z()).unwrap();
    Ok(HurwitzValue { g, mu: mu.clone(), b, value: coeff * &norm })
}

/// One index tuple of the framing-limit comparison.
#[derive(Debug, Clone, Serialize)]
pub struct LimitRow {
    pub indices: Vec<u32>,
    pub triple: RationalFunction,
    pub single: Rational,
    /// f-degree of the triple bracket; `None` when it is zero or not a polynomial.
    pub degree: Option<usize>,
    pub polynomial: bool,
    /// Coefficient of `f^{2g}` in the triple bracket.
    pub leading: Rational,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub g: u32,
    pub h: u32,
    pub rows: Vec<LimitRow>,
}

impl LimitReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }
}

fn require_symbolic(engine: &Engine<RationalFunction>) -> Result<()> {
    match engine.curve().framing() {
        Some(f) if *f == RationalFunction::var() => Ok(()),
        _ => Err(Error::OutOfScope("the framing limit needs the framed curve with symbolic f".into())),
    }
}

/// Compares triple brackets at `f → ∞` with single brackets: every triple
/// bracket must be a polynomial of degree at most `2g` whose `f^{2g}`
/// coefficient is `(-1)^g` times the single bracket.
pub fn framing_limit_check(
    lambert: &mut Engine<Rational>,
    framed: &mut Engine<RationalFunction>,
    g: u32,
    h: u32,
) -> Result<LimitReport> {
    check_stable(g, h as usize)?;
    require_symbolic(framed)?;
    let single = lambert.w_amplitude(g, h)?;
    let triple = framed.w_amplitude(g, h)?;
    let f = RationalFunction::var();
    let tb = triple_brackets(&triple, &f)?;
    let mut keys: Vec<Vec<u32>> = single.entries().map(|(k, _)| k.clone()).collect();
    keys.extend(tb.iter().map(|b| b.indices.clone()));
    keys.sort();
    keys.dedup();
    let top = 2 * g as usize;
    let rows = keys
        .into_iter()
        .map(|indices| {
            let t = tb
                .iter()
                .find(|b| b.indices == indices)
                .map(|b| b.value.clone())
                .unwrap_or_else(RationalFunction::zero);
            let s = single.coeff(&indices);
            let polynomial = t.is_polynomial();
            let degree = t.poly_degree();
            let leading = if polynomial { t.numer().coeff(top) } else { Rational::zero() };
            let expected = if g % 2 == 1 { -s.clone() } else { s.clone() };
            let ok = polynomial && degree.map_or(true, |d| d <= top) && leading == expected;
            LimitRow { indices, triple: t, single: s, degree, polynomial, leading, ok }
        })
        .collect();
    Ok(LimitReport { g, h, rows })
}

/// One `(n, μ)` pair of the ζ-weight limit.
#[derive(Debug, Clone, Serialize)]
pub struct WeightLimitRow {
    pub n: u32,
    pub mu: u32,
    pub framed: RationalFunction,
    pub lambert: Rational,
    pub ok: bool,
}

/// `f^{-(μ-1)} · zeta_weight(framed, n, μ) → zeta_weight(Lambert, n, μ)`:
/// the framed weight is a polynomial of degree `μ - 1` with the Lambert
/// weight as its top coefficient.
pub fn weight_limit_check(n_max: u32, mu_max: u32) -> Vec<WeightLimitRow> {
    let f = RationalFunction::var();
    let mut out = Vec::new();
    for n in 0..=n_max {
        for mu in 1..=mu_max {
            let w = zeta_weight(Some(&f), n, mu);
            let l: Rational = zeta_weight(None, n, mu);
            let d = (mu - 1) as usize;
            let ok = w.is_polynomial() && w.poly_degree() == Some(d) && w.numer().coeff(d) == l;
            out.push(WeightLimitRow { n, mu, framed: w, lambert: l, ok });
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct MumfordReport {
    pub g: u32,
    /// `(h, indices, degree)` for every cached triple bracket of genus `g`.
    pub tuples: Vec<(u32, Vec<u32>, Option<usize>)>,
    pub max_degree: Option<usize>,
    pub ok: bool,
}

/// The Mumford relation `Λ_g^∨(t) Λ_g^∨(-t) = (-1)^g t^{2g}` bounds the
/// f-degree of every triple bracket by `2g`; checks this over all genus-`g`
/// amplitudes already in the framed engine's cache.
pub fn mumford_consistency(framed: &Engine<RationalFunction>, g: u32) -> Result<MumfordReport> {
    require_symbolic(framed)?;
    let f = RationalFunction::var();
    let slug = framed.slug();
    let mut tuples = Vec::new();
    let mut ok = true;
    for (curve, g1, h) in framed.cache().keys() {
        if curve != slug || g1 != g {
            continue;
        }
        let amp = framed.cache().get(&curve, g, h).unwrap();
        for b in triple_brackets(&amp, &f)? {
            let degree = b.value.poly_degree();
            if !b.value.is_polynomial() || degree.is_some_and(|d| d > 2 * g as usize) {
                ok = false;
            }
            tuples.push((h, b.indices, degree));
        }
    }
    let max_degree = tuples.iter().filter_map(|t| t.2).max();
    Ok(MumfordReport { g, tuples, max_degree, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::connected_hurwitz;
    use crate::poly::Poly;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    #[test]
    fn single_brackets() {
        let mut e = Engine::<Rational>::lambert().unwrap();
        assert_eq!(hodge_bracket(&mut e, 1, &[0]).unwrap().value, q(-1, 24));
        assert_eq!(hodge_bracket(&mut e, 1, &[1]).unwrap().value, q(1, 24));
        assert_eq!(hodge_bracket(&mut e, 0, &[0, 0, 0]).unwrap().value, q(1, 1));
        assert_eq!(hodge_bracket(&mut e, 1, &[2]).unwrap().value, q(0, 1));
        assert!(matches!(hodge_bracket(&mut e, 0, &[0, 0]), Err(Error::Unstable { .. })));
    }

    #[test]
    fn triple_brackets_low_genus() {
        let mut e = Engine::framed(RationalFunction::var()).unwrap();
        assert_eq!(framed_bracket(&mut e, 1, &[0]).unwrap().value, rf(&[1, 1, 1], &[24]));
        assert_eq!(framed_bracket(&mut e, 1, &[1]).unwrap().value, rf(&[0, -1, -1], &[24]));
        assert_eq!(framed_bracket(&mut e, 0, &[0, 0, 0]).unwrap().value, RationalFunction::one());
        let m = mumford_consistency(&e, 1).unwrap();
        assert!(m.ok);
        assert_eq!(m.max_degree, Some(2));
        assert_eq!(mumford_consistency(&e, 0).unwrap().max_degree, Some(0));
    }

    #[test]
    fn specialized_bracket() {
        let mut e = Engine::framed(q(2, 1)).unwrap();
        // (1 + f + f^2)/24 at f = 2
        assert_eq!(framed_bracket(&mut e, 1, &[0]).unwrap().value, q(7, 24));
    }

    #[test]
    fn hurwitz_small() {
        let mut e = Engine::<Rational>::lambert().unwrap();
        let h = |e: &mut Engine<Rational>, g, mu: &[u32]| hurwitz_from_recursion(e, g, &p(mu)).unwrap().value;
        assert_eq!(h(&mut e, 1, &[2]), q(1, 2));
        assert_eq!(h(&mut e, 1, &[1]), q(0, 1));
        assert_eq!(h(&mut e, 0, &[3]), q(1, 1));
        assert_eq!(h(&mut e, 0, &[1]), q(1, 1));
        assert_eq!(h(&mut e, 0, &[1, 1]), q(1, 2));
        for mu in [&[2, 1][..], &[2, 2], &[3, 1], &[1, 1, 1], &[2, 1, 1]] {
            for g in 0..=1 {
                assert_eq!(h(&mut e, g, mu), connected_hurwitz(g, &p(mu)).unwrap(), "g={g} mu={mu:?}");
            }
        }
    }

    #[test]
    fn csv_rows() {
        let v = HurwitzValue { g: 1, mu: p(&[2, 1]), b: 5, value: q(9, 2) };
        assert_eq!(hurwitz_csv(&[v]), "g,mu,b,value\n1,2-1,5,9/2\n");
    }

    #[test]
    fn limit_low_genus() {
        let mut l = Engine::<Rational>::lambert().unwrap();
        let mut fr = Engine::framed(RationalFunction::var()).unwrap();
        for (g, h) in [(1, 1), (0, 3), (0, 4)] {
            let r = framing_limit_check(&mut l, &mut fr, g, h).unwrap();
            assert!(r.ok(), "{r:?}");
        }
        let r = framing_limit_check(&mut l, &mut fr, 1, 1).unwrap();
        assert_eq!(r.rows[0].leading, q(1, 24));
        assert_eq!(r.rows[0].degree, Some(2));
    }

    #[test]
    fn weight_limit() {
        let rows = weight_limit_check(4, 8);
        assert_eq!(rows.len(), 40);
        assert!(rows.iter().all(|r| r.ok));
    }
}
