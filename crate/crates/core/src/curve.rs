//! Local data of the two spectral curves at their single ramification point.
//!
//! Both curves are handled in the local coordinate `u = y - b`, where `b` is
//! the branch value (`1` for the Lambert curve `x = y e^{-y}`, `f/(f+1)` for
//! the framed curve `x = y^f (1 - y)`). The ramification point sits at
//! `z = 0` with `y(q) = b + z` and `y(q̄) = b + σ(z)`.
//!
//! Convention for one-forms with poles at the branch value: a [`PoleForm`]
//! stores the coefficients `c_k` of `Σ_k c_k dy / (y - b)^k`. The ζ-forms are
//! taken literally from their defining differential operators, so for the
//! Lambert curve `ζ_0 = dy/(1-y)^2 = dy/(y-1)^2` (stored as `{2: 1}`) while
//! for the framed curve `ζ_0 = -dy/((1+f)y - f)^2` (stored as
//! `{2: -1/(1+f)^2}`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::rational::{factorial, Rational};
use crate::ratfunc::RationalFunction;
use crate::series::{log1p_series, LaurentSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Lambert,
    Framed,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveKind::Lambert => write!(f, "lambert"),
            CurveKind::Framed => write!(f, "framed"),
        }
    }
}

/// A one-form `Σ_k c_k dy/(y - b)^k` with finitely many nonzero terms.
#[derive(Clone, PartialEq, Default)]
pub struct PoleForm<F> {
    coeffs: BTreeMap<u32, F>,
}

impl<F: Field> PoleForm<F> {
    pub fn new() -> Self {
        PoleForm { coeffs: BTreeMap::new() }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, F)>) -> Self {
        let mut p = Self::new();
        for (k, c) in pairs {
            p.add_at(k, &c);
        }
        p
    }

    pub fn get(&self, k: u32) -> F {
        self.coeffs.get(&k).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_at(&mut self, k: u32, c: &F) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(F::zero);
        slot.add_assign_ref(c);
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_order(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &F)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        for (k, v) in other.iter() {
            self.add_at(k, &v.mul_ref(c));
        }
    }

    /// The coefficient function as an exact Laurent polynomial in `u = y - b`.
    pub fn to_series(&self) -> LaurentSeries<F> {
        let Some(top) = self.max_order() else {
            return LaurentSeries::zero();
        };
        let coeffs = (0..top).map(|i| self.get(top - i)).collect();
        LaurentSeries::exact(-(top as i64), coeffs)
    }

    /// Reads an exact Laurent polynomial in `u` with only negative exponents.
    pub fn from_series(s: &LaurentSeries<F>) -> Result<Self> {
        if !s.is_exact() {
            return Err(Error::NeedsTruncation("pole form"));
        }
        let mut p = Self::new();
        for (e, c) in s.terms() {
            if e >= 0 {
                return Err(Error::OutsideZetaSpan(format!("holomorphic term u^{e}")));
            }
            p.add_at((-e) as u32, c);
        }
        Ok(p)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> PoleForm<G> {
        PoleForm::from_pairs(self.iter().map(|(k, c)| (k, f(c))))
    }
}

impl<F: fmt::Debug> fmt::Debug for PoleForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

/// All local data of a spectral curve at its ramification point.
#[derive(Clone)]
pub struct CurveModel<F> {
    kind: CurveKind,
    framing: Option<F>,
    branch: F,
    involution: LaurentSeries<F>,
    omega: LaurentSeries<F>,
    /// `A(u)` with `x d/dx = A(u) d/du`.
    euler: LaurentSeries<F>,
    /// `ψ_0` with `ζ_n = d((x d/dx)^n ψ_0)`.
    zeta_seed: LaurentSeries<F>,
    /// `log(y / b)` expanded in `u`.
    log_y: LaurentSeries<F>,
    trunc: i64,
}

impl<F: Field> fmt::Debug for CurveModel<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveModel")
            .field("kind", &self.kind)
            .field("framing", &self.framing)
            .field("trunc", &self.trunc)
            .finish_non_exhaustive()
    }
}

/// Solves `φ(σ(z)) = φ(z)` for the nontrivial branch `σ = -z + O(z^2)`,
/// given `φ = c u^2 (1 + O(u))` known below `trunc + 1`.
///
/// Writing `φ = c ψ^2` with `ψ = u sqrt(φ / (c u^2))`, the involution is
/// `σ = ψ^{-1}(-ψ(z))`.
fn involution_from_phase<F: Field>(phase: &LaurentSeries<F>, trunc: i64) -> Result<LaurentSeries<F>> {
    if phase.lowest() != 2 {
        return Err(Error::BadComposition("curve phase must start at u^2"));
    }
    let c2 = phase.leading().unwrap().clone();
    let unit = phase.shift(-2).scale(&c2.inv().ok_or(Error::DivisionByZero)?);
    let psi = unit.sqrt_unit()?.shift(1);
    let psi_inv = psi.reversion(trunc)?;
    let sigma = LaurentSeries::compose(&psi_inv, &psi.neg())?;
    Ok(sigma.truncate(trunc))
}

fn rat<F: Field>(n: i64, d: i64) -> F {
    F::from_rational(&Rational::new(n, d).unwrap())
}

impl<F: Field> CurveModel<F> {
    /// The Lambert curve `x = y e^{-y}` with involution known below `z^trunc`.
    pub fn lambert(trunc: i64) -> Result<Self> {
        if trunc < 3 {
            return Err(Error::TruncationTooSmall { min: 3, got: trunc });
        }
        let t1 = trunc + 1;
        let log_y = log1p_series::<F>(t1);
        // log(1 + u) - u is invariant under the involution
        let phase = log_y.sub(&LaurentSeries::var());
        let sigma = involution_from_phase(&phase, trunc)?;
        // ω/dz = (S(z) - z) z / (1 + z)
        let one_plus_z = LaurentSeries::exact(0, vec![F::one(), F::one()]).truncate(t1);
        let omega = sigma
            .sub(&LaurentSeries::var())
            .mul(&LaurentSeries::var())
            .mul(&one_plus_z.invert()?);
        let minus_one = F::one().neg_ref();
        let euler = LaurentSeries::exact(-1, vec![minus_one.clone(), minus_one]);
        let model = CurveModel {
            kind: CurveKind::Lambert,
            framing: None,
            branch: F::one(),
            involution: sigma,
            omega,
            zeta_seed: euler.clone(),
            euler,
            log_y,
            trunc,
        };
        model.check_omega()?;
        Ok(model)
    }

    /// The framed curve `-y^{f+1} + y^f - x = 0` at framing `f`.
    pub fn framed(f: F, trunc: i64) -> Result<Self> {
        if trunc < 3 {
            return Err(Error::TruncationTooSmall { min: 3, got: trunc });
        }
        let f1 = f.add_ref(&F::one());
        if f.is_zero() || f1.is_zero() {
            return Err(Error::DegenerateFraming);
        }
        let f1_inv = f1.inv().unwrap();
        let branch = f.mul_ref(&f1_inv);
        let t1 = trunc + 1;
        // log(y/b) = log(1 + u/b) and log((1-y)/(1-b)) = log(1 - (f+1)u)
        let log_y = LaurentSeries::compose(
            &log1p_series::<F>(t1),
            &LaurentSeries::monomial(branch.inv().unwrap(), 1),
        )?;
        let log_1my = LaurentSeries::compose(
            &log1p_series::<F>(t1),
            &LaurentSeries::monomial(f1.neg_ref(), 1),
        )?;
        // log x = f log y + log(1 - y) up to a constant
        let phase = log_y.scale(&f).add(&log_1my);
        let sigma = involution_from_phase(&phase, trunc)?;
        // ω/dz = (log y(q) - log y(q̄)) (f+1)^3 z / ((f + (f+1)z)(-1 + (f+1)z))
        let dlog = log_y.sub(&LaurentSeries::compose(&log_y, &sigma)?);
        let numer = LaurentSeries::monomial(f1.pow(3), 1);
        let den = LaurentSeries::exact(0, vec![f.clone(), f1.clone()])
            .mul(&LaurentSeries::exact(0, vec![F::one().neg_ref(), f1.clone()]))
            .truncate(t1);
        let omega = dlog.mul(&numer).mul(&den.invert()?);
        // x d/dx = (u^2 + (b - c)u - bc) / ((1+f)u) d/du with c = 1/(1+f)
        let c = f1_inv.clone();
        let euler = LaurentSeries::exact(
            -1,
            vec![
                branch.mul_ref(&c).neg_ref().mul_ref(&f1_inv),
                branch.sub_ref(&c).mul_ref(&f1_inv),
                f1_inv.clone(),
            ],
        );
        let zeta_seed = LaurentSeries::monomial(f1_inv.mul_ref(&f1_inv), -1);
        let model = CurveModel {
            kind: CurveKind::Framed,
            framing: Some(f),
            branch,
            involution: sigma,
            omega,
            euler,
            zeta_seed,
            log_y,
            trunc,
        };
        model.check_omega()?;
        Ok(model)
    }

    fn check_omega(&self) -> Result<()> {
        if self.omega.lowest() != 2 {
            return Err(Error::ResidueObstruction(format!(
                "omega must vanish to order exactly 2, found order {}",
                self.omega.lowest()
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn framing(&self) -> Option<&F> {
        self.framing.as_ref()
    }

    pub fn branch_value(&self) -> &F {
        &self.branch
    }

    /// `σ(z)`: `S(z)` for Lambert, `P(z)` for the framed curve.
    pub fn involution(&self) -> &LaurentSeries<F> {
        &self.involution
    }

    /// `ω(z)/dz`.
    pub fn omega(&self) -> &LaurentSeries<F> {
        &self.omega
    }

    pub fn euler_operator(&self) -> &LaurentSeries<F> {
        &self.euler
    }

    pub fn log_y(&self) -> &LaurentSeries<F> {
        &self.log_y
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// `(dx/x)/du = 1/A(u)` as a power series.
    pub fn dlog_x(&self) -> Result<LaurentSeries<F>> {
        self.euler.truncate(self.trunc).invert()
    }

    /// Stable identifier used for cache keys and file names: `lambert`,
    /// `framed` (symbolic f) or `framed-f<value>` with `/` written `_` and a
    /// leading minus written `m`.
    pub fn slug(&self) -> String {
        match (&self.kind, &self.framing) {
            (CurveKind::Lambert, _) => "lambert".into(),
            (CurveKind::Framed, Some(f)) => {
                if F::TAG == FieldTag::RationalFunction && f.to_rational_function() == RationalFunction::var() {
                    "framed".into()
                } else {
                    let s = f.to_string().replace(['(', ')'], "").replace('/', "_").replace('-', "m");
                    format!("framed-f{s}")
                }
            }
            (CurveKind::Framed, None) => unreachable!("framed curve without framing"),
        }
    }

    /// `y(x)` near `x = 0`: the tree function, or the framed series.
    pub fn y_of_x(&self, trunc: i64) -> LaurentSeries<F> {
        match &self.framing {
            None => tree_series(trunc),
            Some(f) => framed_y_series(f, trunc),
        }
    }

    /// Coefficient of `x^{μ-1} dx` in the x-expansion of `ζ_n`.
    pub fn zeta_weight(&self, n: u32, mu: u32) -> F {
        zeta_weight(self.framing.as_ref(), n, mu)
    }

    /// `K_m(z) = (z^m - σ(z)^m) / (2 ω(z)/dz)`, the coefficient of
    /// `dy/(y-b)^{m+1}` in `dE_z(y)/ω(z)`.
    pub fn kernel_channel(&self, m: u32) -> Result<LaurentSeries<F>> {
        if m == 0 {
            return Ok(LaurentSeries::zero());
        }
        let zm = LaurentSeries::monomial(F::one(), m as i64);
        let sm = self.involution.pow(m as i64)?;
        let half = rat::<F>(1, 2);
        Ok(zm.sub(&sm).mul(&self.omega.invert()?).scale(&half))
    }

    /// The z-expansion of `dE_z(y)`: entry `m` is the pole form multiplying
    /// `z^m`, from `1/(y-b-w) = Σ_j w^j/(y-b)^{j+1}` with `w ∈ {z, σ(z)}`.
    pub fn kernel_coefficients(&self, z_order: u32) -> Result<Vec<PoleForm<F>>> {
        if z_order as i64 >= self.trunc {
            return Err(Error::InsufficientTruncation {
                needed: z_order as i64,
                available: self.trunc,
            });
        }
        let half = rat::<F>(1, 2);
        let mut out = vec![PoleForm::new(); z_order as usize + 1];
        let mut sigma_pow = LaurentSeries::one();
        for j in 1..=z_order {
            sigma_pow = sigma_pow.mul(&self.involution);
            for (m, entry) in out.iter_mut().enumerate().skip(j as usize) {
                let zj = if m as u32 == j { F::one() } else { F::zero() };
                let c = zj.sub_ref(&sigma_pow.coeff(m as i64)?).mul_ref(&half);
                entry.add_at(j + 1, &c);
            }
        }
        Ok(out)
    }

    /// x-expansion of a pole form: `Σ c_k u(x)^{-k} u'(x)` with
    /// `u(x) = y(x) - b`, known below `x^order`.
    pub fn pole_form_in_x(&self, form: &PoleForm<F>, order: i64) -> Result<LaurentSeries<F>> {
        let top = form.max_order().unwrap_or(0) as i64;
        let y = self.y_of_x(order + 1);
        let u = y.sub(&LaurentSeries::monomial(self.branch.clone(), 0));
        let du = u.derivative();
        let inv = u.invert()?;
        let mut acc = LaurentSeries::zero();
        let mut p = LaurentSeries::one();
        for k in 1..=top {
            p = p.mul(&inv);
            let c = form.get(k as u32);
            if !c.is_zero() {
                acc = acc.add(&p.scale(&c));
            }
        }
        Ok(acc.mul(&du).truncate(order))
    }

    pub fn header(&self) -> CurveHeader<F> {
        CurveHeader {
            curve: self.kind,
            framing: self.framing.as_ref().map(F::to_rational_function),
            trunc: self.trunc,
            involution: (1..self.trunc)
                .map(|e| self.involution.coeff(e).expect("involution known below trunc"))
                .collect(),
            omega: OmegaRecord {
                lowest: self.omega.lowest(),
                coeffs: (self.omega.lowest()..self.omega.trunc().unwrap())
                    .map(|e| self.omega.coeff(e).unwrap())
                    .collect(),
            },
        }
    }
}

/// Serialized form of a [`CurveModel`]; `involution` lists the coefficients
/// of `z^1, z^2, …` and `omega` the coefficients of `ω/dz` from `z^lowest`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Field")]
pub struct CurveHeader<F> {
    pub curve: CurveKind,
    pub framing: Option<RationalFunction>,
    pub trunc: i64,
    pub involution: Vec<F>,
    pub omega: OmegaRecord<F>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Field")]
pub struct OmegaRecord<F> {
    pub lowest: i64,
    pub coeffs: Vec<F>,
}

impl<F: Field> CurveHeader<F> {
    /// Two headers describe the same curve when kind and framing agree and
    /// their involution series agree on the common window.
    pub fn same_curve(&self, other: &Self) -> bool {
        self.curve == other.curve
            && self.framing == other.framing
            && self.involution.iter().zip(&other.involution).all(|(a, b)| a == b)
    }
}

/// The ζ-forms `ζ_0 … ζ_N` as pole forms, with the triangular change of
/// basis to `{dy/(y-b)^k : k ≥ 2}`.
#[derive(Clone, Debug)]
pub struct ZetaBasis<F> {
    forms: Vec<PoleForm<F>>,
}

impl<F: Field> ZetaBasis<F> {
    /// Generates `ζ_n = d(D^n ψ_0)` for `n ≤ n_max`, with `D = A(u) d/du`.
    pub fn new(curve: &CurveModel<F>, n_max: u32) -> Result<Self> {
        let mut forms = Vec::with_capacity(n_max as usize + 1);
        let mut potential = curve.zeta_seed.clone();
        for n in 0..=n_max {
            let dpot = potential.derivative();
            let form = PoleForm::from_series(&dpot)?;
            let top = 2 * n + 2;
            if form.max_order() != Some(top) || form.get(top).is_zero() {
                return Err(Error::OutsideZetaSpan(format!(
                    "zeta_{n} lacks its diagonal pivot at pole order {top}"
                )));
            }
            if !form.get(1).is_zero() {
                return Err(Error::ResidueObstruction(format!("zeta_{n} has a simple pole")));
            }
            forms.push(form);
            potential = curve.euler.mul(&dpot);
        }
        Ok(ZetaBasis { forms })
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn zeta_form(&self, n: u32) -> Result<&PoleForm<F>> {
        self.forms
            .get(n as usize)
            .ok_or_else(|| Error::OutsideZetaSpan(format!("zeta_{n} beyond the cached basis")))
    }

    /// Expresses a pole form as `Σ c_n ζ_n`; the conversion must be exact.
    pub fn pole_to_zeta(&self, form: &PoleForm<F>) -> Result<BTreeMap<u32, F>> {
        if !form.get(1).is_zero() {
            return Err(Error::ResidueObstruction(format!("{form:?}")));
        }
        let mut rem = form.clone();
        let mut out = BTreeMap::new();
        while let Some(top) = rem.max_order() {
            if top % 2 == 1 || top < 2 {
                return Err(Error::OutsideZetaSpan(format!("remainder {rem:?} from {form:?}")));
            }
            let n = (top - 2) / 2;
            let zeta = self.zeta_form(n)?;
            let c = rem.get(top).div_ref(&zeta.get(top)).ok_or(Error::DivisionByZero)?;
            rem.add_scaled(zeta, &c.neg_ref());
            out.insert(n, c);
        }
        Ok(out)
    }

    pub fn zeta_to_pole(&self, coeffs: &BTreeMap<u32, F>) -> Result<PoleForm<F>> {
        let mut out = PoleForm::new();
        for (n, c) in coeffs {
            out.add_scaled(self.zeta_form(*n)?, c);
        }
        Ok(out)
    }
}

/// `T(x) = Σ_{μ≥1} μ^{μ-1}/μ! x^μ`, the inverse of `y e^{-y}`.
pub fn tree_series<F: Field>(trunc: i64) -> LaurentSeries<F> {
    let coeffs = (0..trunc.max(0))
        .map(|mu| {
            if mu == 0 {
                return F::zero();
            }
            let mu = mu as u32;
            let num = num_bigint::BigInt::from(mu).pow(mu - 1);
            F::from_rational(&Rational::new(num, factorial(mu)).unwrap())
        })
        .collect();
    LaurentSeries::power_series(coeffs, trunc)
}

/// `y(x) = 1 - Σ_{n≥1} x^n ∏_{j=0}^{n-2}(nf + j) / n!` on the framed curve.
pub fn framed_y_series<F: Field>(f: &F, trunc: i64) -> LaurentSeries<F> {
    let coeffs = (0..trunc.max(0))
        .map(|n| {
            if n == 0 {
                return F::one();
            }
            let nf = f.scale_int(n);
            let prod = (0..n - 1).fold(F::one(), |acc, j| acc.mul_ref(&nf.add_ref(&F::from_int(j))));
            let inv_fact = F::from_rational(&Rational::new(1, factorial(n as u32)).unwrap());
            prod.mul_ref(&inv_fact).neg_ref()
        })
        .collect();
    LaurentSeries::power_series(coeffs, trunc)
}

/// ELSV-type weight: `μ^{μ+1+n}/μ!` (Lambert, `framing = None`) or
/// `μ^{n+2} ∏_{j=1}^{μ-1}(μf + j)/μ!` (framed).
pub fn zeta_weight<F: Field>(framing: Option<&F>, n: u32, mu: u32) -> F {
    assert!(mu >= 1, "weights are indexed by μ ≥ 1");
    let inv_fact = F::from_rational(&Rational::new(1, factorial(mu)).unwrap());
    let m = F::from_int(mu as i64);
    match framing {
        None => m.pow(mu + 1 + n).mul_ref(&inv_fact),
        Some(f) => {
            let mf = f.mul_ref(&m);
            let prod = (1..mu as i64).fold(F::one(), |acc, j| acc.mul_ref(&mf.add_ref(&F::from_int(j))));
            m.pow(n + 2).mul_ref(&prod).mul_ref(&inv_fact)
        }
    }
}
