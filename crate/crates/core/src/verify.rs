//! Reference values and the checks behind `hurwitz-tr verify`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::curve::{tree_series, CurveModel};
use crate::error::{Error, Result};
use crate::field::{specialize, Field};
use crate::hodge::{framing_limit_check, hurwitz_from_recursion, weight_limit_check, LimitReport};
use crate::oracle::{connected_hurwitz_in, schur_partition_function_check, HurwitzSeries};
use crate::partition::{partitions_of, Partition};
use crate::poly::Poly;
use crate::rational::{factorial, Rational};
use crate::ratfunc::RationalFunction;
use crate::recursion::{Engine, TruncPolicy};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), ok, detail: detail.into() }
    }

    fn equal<T: PartialEq + fmt::Display>(name: impl Into<String>, got: &T, want: &T) -> Self {
        let ok = got == want;
        let detail = if ok { format!("{got}") } else { format!("got {got}, expected {want}") };
        Check::new(name, ok, detail)
    }
}

/// A titled list of checks.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.ok).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let tag = if c.ok { "ok  " } else { "FAIL" };
            writeln!(f, "{tag} {:width$}  {}", c.name, c.detail)?;
        }
        write!(f, "{} checks, {} failed", self.checks.len(), self.failures())
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
    RationalFunction::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
}

fn poly_rf(p: Poly) -> RationalFunction {
    RationalFunction::from_poly(p)
}

/// `S(z)` coefficients of `z^1 … z^7`.
pub fn lambert_involution_reference() -> Vec<Rational> {
    vec![q(-1, 1), q(2, 3), q(-4, 9), q(44, 135), q(-104, 405), q(40, 189), q(-7648, 42525)]
}

/// `P(z)` coefficients of `z^1 … z^4`.
pub fn framed_involution_reference() -> Vec<RationalFunction> {
    let f2m1 = Poly::from_ints(&[-1, 0, 1]);
    let one_plus_f = Poly::from_ints(&[1, 1]);
    let c2 = RationalFunction::new(f2m1.scale(&q(-2, 1)), Poly::from_ints(&[0, 3])).unwrap();
    let c3 = RationalFunction::new(f2m1.mul(&f2m1).scale(&q(-4, 1)), Poly::from_ints(&[0, 0, 9])).unwrap();
    let cube = one_plus_f.mul(&one_plus_f).mul(&one_plus_f);
    let c4 = RationalFunction::new(
        cube.mul(&Poly::from_ints(&[-22, 57, -57, 22])).scale(&q(-2, 1)),
        Poly::from_ints(&[0, 0, 0, 135]),
    )
    .unwrap();
    vec![rf(&[-1], &[1]), c2, c3, c4]
}

/// Published Lambert tensors: `(g, h, [(indices, value)])`.
pub fn lambert_reference() -> Vec<(u32, u32, Vec<(Vec<u32>, Rational)>)> {
    vec![
        (1, 1, vec![(vec![0], q(-1, 24)), (vec![1], q(1, 24))]),
        (0, 3, vec![(vec![0, 0, 0], q(1, 1))]),
        (0, 4, vec![(vec![0, 0, 0, 1], q(1, 1))]),
        (1, 2, vec![(vec![0, 1], q(-1, 24)), (vec![0, 2], q(1, 24)), (vec![1, 1], q(1, 24))]),
        (2, 1, vec![(vec![2], q(7, 5760)), (vec![3], q(-12, 5760)), (vec![4], q(5, 5760))]),
        (
            2,
            2,
            vec![
                (vec![0, 3], q(7, 5760)),
                (vec![0, 4], q(-12, 5760)),
                (vec![0, 5], q(5, 5760)),
                (vec![1, 2], q(21, 5760)),
                (vec![1, 3], q(-36, 5760)),
                (vec![1, 4], q(15, 5760)),
                (vec![2, 2], q(-50, 5760)),
                (vec![2, 3], q(29, 5760)),
            ],
        ),
        (
            3,
            1,
            vec![
                (vec![4], q(-93, 2903040)),
                (vec![5], q(205, 2903040)),
                (vec![6], q(-147, 2903040)),
                (vec![7], q(35, 2903040)),
            ],
        ),
    ]
}

/// Published framed tensors over ℚ(f).
pub fn framed_reference() -> Vec<(u32, u32, Vec<(Vec<u32>, RationalFunction)>)> {
    let ff = Poly::from_ints(&[0, 1, 1]); // f(f+1)
    let tri = Poly::from_ints(&[1, 1, 1]); // 1+f+f^2
    let c = |p: Poly, den: i64| poly_rf(p).scale(&q(1, den));
    vec![
        (0, 3, vec![(vec![0, 0, 0], c(ff.mul(&ff), -1))]),
        (0, 4, vec![(vec![0, 0, 0, 1], c(ff.mul(&ff).mul(&ff), 1))]),
        (1, 1, vec![(vec![0], c(tri.clone(), 24)), (vec![1], c(ff.clone(), -24))]),
        (
            1,
            2,
            vec![
                (vec![0, 1], c(ff.mul(&tri), -24)),
                (vec![0, 2], c(ff.mul(&ff), 24)),
                (vec![1, 1], c(ff.mul(&ff), 24)),
            ],
        ),
        (
            2,
            1,
            vec![
                (vec![1], c(ff.scale(&q(2, 1)), 5760)),
                (vec![2], c(tri.mul(&tri).scale(&q(-7, 1)), 5760)),
                (vec![3], c(Poly::from_ints(&[0, 1, 2, 2, 1]).scale(&q(12, 1)), 5760)),
                (vec![4], c(ff.mul(&ff).scale(&q(-5, 1)), 5760)),
            ],
        ),
    ]
}

fn tensor_checks<F: Field>(
    engine: &mut Engine<F>,
    label: &str,
    table: Vec<(u32, u32, Vec<(Vec<u32>, F)>)>,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (g, h, entries) in table {
        let amp = engine.w_amplitude(g, h)?;
        let mut bad = Vec::new();
        for (n, v) in &entries {
            let got = amp.coeff(n);
            if &got != v {
                bad.push(format!("{n:?}: got {got}, expected {v}"));
            }
        }
        if amp.len() != entries.len() {
            bad.push(format!("{} nonzero entries, expected {}", amp.len(), entries.len()));
        }
        let detail = if bad.is_empty() { amp.pretty() } else { bad.join("; ") };
        out.push(Check::new(format!("{label} W_{g} ({h} pt)"), bad.is_empty(), detail));
    }
    Ok(out)
}

/// The involution series, the tree function and every reference tensor.
pub fn reference_checks(lambert: &mut Engine<Rational>, framed: &mut Engine<RationalFunction>) -> Result<Report> {
    let mut r = Report::default();
    let s = CurveModel::<Rational>::lambert(8)?;
    for (k, want) in lambert_involution_reference().iter().enumerate() {
        r.push(Check::equal(format!("S(z) z^{}", k + 1), &s.involution().coeff(k as i64 + 1)?, want));
    }
    let p = CurveModel::framed(RationalFunction::var(), 5)?;
    for (k, want) in framed_involution_reference().iter().enumerate() {
        r.push(Check::equal(format!("P(z) z^{}", k + 1), &p.involution().coeff(k as i64 + 1)?, want));
    }
    let t = tree_series::<Rational>(21);
    let tree_ok = (1..=20u32).all(|m| {
        t.coeff(m as i64).ok() == Some(Rational::new(num_bigint::BigInt::from(m).pow(m - 1), factorial(m)).unwrap())
    });
    r.push(Check::new("tree function mu^(mu-1)/mu!, mu <= 20", tree_ok, ""));
    r.extend(tensor_checks(lambert, "lambert", lambert_reference())?);
    r.extend(tensor_checks(framed, "framed", framed_reference())?);
    Ok(r)
}

/// Bounds for the oracle sweep, written `g<=2,|mu|<=5,l<=3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepBounds {
    pub max_g: u32,
    pub max_size: u32,
    pub max_len: u32,
}

impl Default for SweepBounds {
    fn default() -> Self {
        SweepBounds { max_g: 2, max_size: 5, max_len: 3 }
    }
}

impl FromStr for SweepBounds {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut b = SweepBounds::default();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, val) = item
                .split_once("<=")
                .ok_or_else(|| Error::Parse(format!("expected key<=value, got {item:?}")))?;
            let v: u32 = val.trim().parse().map_err(|_| Error::Parse(format!("bad bound in {item:?}")))?;
            match key.trim() {
                "g" => b.max_g = v,
                "|mu|" | "mu" | "n" => b.max_size = v,
                "l" | "len" | "h" => b.max_len = v,
                k => return Err(Error::Parse(format!("unknown sweep key {k:?}"))),
            }
        }
        Ok(b)
    }
}

impl fmt::Display for SweepBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g<={},|mu|<={},l<={}", self.max_g, self.max_size, self.max_len)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub g: u32,
    pub mu: Partition,
    pub recursion: Rational,
    pub oracle: Rational,
    pub ok: bool,
}

/// Every `(g, μ)` within the bounds, plus `extra`.
pub fn sweep_cases(bounds: SweepBounds, extra: &[(u32, Partition)]) -> Vec<(u32, Partition)> {
    let mut out = Vec::new();
    for g in 0..=bounds.max_g {
        for n in 1..=bounds.max_size {
            for mu in partitions_of(n) {
                if mu.len() as u32 <= bounds.max_len {
                    out.push((g, mu));
                }
            }
        }
    }
    for e in extra {
        if !out.contains(e) {
            out.push(e.clone());
        }
    }
    out
}

/// Compares `hurwitz_from_recursion` with the character oracle on `cases`.
pub fn oracle_sweep(engine: &mut Engine<Rational>, cases: &[(u32, Partition)]) -> Result<Vec<SweepRow>> {
    let max_b = cases
        .iter()
        .map(|(g, mu)| 2 * g + mu.len() as u32 + mu.size() - 2)
        .max()
        .unwrap_or(0);
    let max_size = cases.iter().map(|(_, mu)| mu.size()).max().unwrap_or(0);
    let free = HurwitzSeries::partition_function(max_b, max_size).log()?;
    let mut out = Vec::new();
    for (g, mu) in cases {
        let r = hurwitz_from_recursion(engine, *g, mu)?.value;
        let o = connected_hurwitz_in(&free, *g, mu)?;
        let ok = r == o;
        out.push(SweepRow { g: *g, mu: mu.clone(), recursion: r, oracle: o, ok });
    }
    Ok(out)
}

/// Framing-limit reports for each `(g, h)`, plus the ζ-weight limit.
pub fn limit_checks(
    lambert: &mut Engine<Rational>,
    framed: &mut Engine<RationalFunction>,
    pairs: &[(u32, u32)],
) -> Result<(Vec<LimitReport>, Report)> {
    let mut reports = Vec::new();
    let mut r = Report::default();
    for &(g, h) in pairs {
        let rep = framing_limit_check(lambert, framed, g, h)?;
        let detail = rep
            .rows
            .iter()
            .map(|row| format!("{:?}: deg {} lead {} vs {}", row.indices, fmt_deg(row.degree), row.leading, row.single))
            .collect::<Vec<_>>()
            .join("; ");
        r.push(Check::new(format!("framing limit W_{g} ({h} pt)"), rep.ok(), detail));
        reports.push(rep);
    }
    let w = weight_limit_check(4, 8);
    let bad: Vec<String> = w.iter().filter(|x| !x.ok).map(|x| format!("(n={}, mu={})", x.n, x.mu)).collect();
    r.push(Check::new(
        "zeta weight limit n<=4, mu<=8",
        bad.is_empty(),
        if bad.is_empty() { format!("{} weights", w.len()) } else { bad.join(" ") },
    ));
    Ok((reports, r))
}

fn fmt_deg(d: Option<usize>) -> String {
    d.map_or("-".into(), |d| d.to_string())
}

/// Cheap structural checks: ℚ(f) → ℚ specialization, truncation stability
/// and the Schur form of the partition function.
pub fn invariant_checks(lambert: &mut Engine<Rational>, framed: &mut Engine<RationalFunction>) -> Result<Report> {
    let mut r = Report::default();
    for fv in [q(3, 1), q(-1, 2), q(2, 5)] {
        let mut spec = Engine::framed(fv.clone())?;
        let mut bad = Vec::new();
        for (g, h) in [(1, 1), (0, 3), (1, 2)] {
            let sym = framed.w_amplitude(g, h)?;
            let num = spec.w_amplitude(g, h)?;
            let mapped = sym.map(num.curve(), |v| specialize(v, &fv).unwrap());
            if mapped != *num {
                bad.push(format!("W_{g} ({h} pt)"));
            }
        }
        r.push(Check::new(format!("specialization at f = {fv}"), bad.is_empty(), bad.join(" ")));
    }
    let mut deeper = Engine::<Rational>::lambert()?.with_trunc_policy(TruncPolicy::Extra(4))?;
    for (g, h) in [(2, 1), (1, 2)] {
        let a = lambert.w_amplitude(g, h)?;
        let b = deeper.w_amplitude(g, h)?;
        r.push(Check::new(format!("truncation +4 stability W_{g} ({h} pt)"), a == b, ""));
    }
    let mism = schur_partition_function_check(4, 4, false)?;
    r.push(Check::new("Schur form of Z, |R| <= 4", mism.is_empty(), format!("{} mismatches", mism.len())));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_bounds_parse() {
        let b: SweepBounds = "g<=1,|mu|<=4".parse().unwrap();
        assert_eq!(b, SweepBounds { max_g: 1, max_size: 4, max_len: 3 });
        assert_eq!(b.to_string().parse::<SweepBounds>().unwrap(), b);
        assert!("g=1".parse::<SweepBounds>().is_err());
        assert!("q<=1".parse::<SweepBounds>().is_err());
    }

    #[test]
    fn sweep_cases_count() {
        let b = SweepBounds { max_g: 0, max_size: 3, max_len: 2 };
        // (1) (2) (1,1) (3) (2,1)
        assert_eq!(sweep_cases(b, &[]).len(), 5);
        let extra = [(3, "1".parse().unwrap())];
        assert_eq!(sweep_cases(b, &extra).len(), 6);
    }

    #[test]
    fn small_sweep_agrees() {
        let mut e = Engine::<Rational>::lambert().unwrap();
        let cases = sweep_cases(SweepBounds { max_g: 1, max_size: 4, max_len: 3 }, &[]);
        let rows = oracle_sweep(&mut e, &cases).unwrap();
        assert!(rows.iter().all(|r| r.ok), "{rows:?}");
    }

    #[test]
    fn reference_shapes() {
        let p = framed_involution_reference();
        assert_eq!(p[1].to_string(), "(-2*f^2+2)/(3*f)");
        assert_eq!(lambert_reference().len(), 7);
        assert_eq!(framed_reference().len(), 5);
    }
}
