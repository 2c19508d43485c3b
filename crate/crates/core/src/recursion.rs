//! The residue recursion at a single ramification point.
//!
//! Amplitudes are produced in the pole basis `∏ dy_i/(y_i - b)^{k_i}` and
//! converted to the ζ-basis at the end. Every term of the bracket factors as
//! a function of `q` times a function of `q̄`:
//!
//! * a stable amplitude contributes `dy/(y-b)^a` at `q`, i.e. `z^{-a} dz`,
//!   and `σ^{-c} σ' dz` at `q̄`;
//! * a two-point genus-zero factor pairing `q` with a spectator of pole
//!   order `k` is the Bergman expansion `(k-1) z^{k-2} dz`, which is the
//!   same shape with `a = 2 - k` (and `c = 2 - k` at `q̄`).
//!
//! The output coefficient at pole order `m + 1` of such a term is therefore
//! `R(m, a, c) = [z^{a-1}] K_m(z) σ^{-c}σ'(z)`, where `K_m` is the kernel
//! channel of [`CurveModel::kernel_channel`]. The engine collects the
//! needed triples, evaluates them (in parallel when asked to) and sums in a
//! fixed order, so results do not depend on the number of threads.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bivariate::BivariateSeries;
use crate::curve::{zeta_weight, CurveModel, PoleForm, ZetaBasis};
use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::partition::Partition;
use crate::rational::Rational;
use crate::series::{log1p_series, LaurentSeries};
use crate::store::Store;

/// Marker for the Bergman self-pairing `B(q, q̄)` in the residue table.
const SELF_PAIRING: i64 = i64::MAX;

/// Retry budget for insufficient truncation.
const MAX_RETRIES: usize = 8;

/// `W_g(y_1, …, y_h)` as a symmetric tensor over the ζ-basis, keyed by
/// sorted index tuples. Only nonzero entries are stored.
#[derive(Clone, PartialEq)]
pub struct WAmplitude<F> {
    g: u32,
    h: u32,
    curve: String,
    coeffs: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> WAmplitude<F> {
    pub fn new(g: u32, h: u32, curve: impl Into<String>, entries: impl IntoIterator<Item = (Vec<u32>, F)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (mut n, v) in entries {
            assert_eq!(n.len(), h as usize, "index tuple length must equal h");
            n.sort_unstable();
            if !v.is_zero() {
                coeffs.insert(n, v);
            }
        }
        WAmplitude { g, h, curve: curve.into(), coeffs }
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn curve(&self) -> &str {
        &self.curve
    }

    /// Entry at any ordering of the indices.
    pub fn coeff(&self, n: &[u32]) -> F {
        let mut key = n.to_vec();
        key.sort_unstable();
        self.coeffs.get(&key).cloned().unwrap_or_else(F::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn map<G: Field>(&self, curve: impl Into<String>, f: impl Fn(&F) -> G) -> WAmplitude<G> {
        WAmplitude::new(self.g, self.h, curve, self.coeffs.iter().map(|(k, v)| (k.clone(), f(v))))
    }

    /// Human-readable ζ-combination: `1/24(-z0+z1)` over ℚ, a plain sum of
    /// `(coefficient)*z..` terms over ℚ(f).
    pub fn pretty(&self) -> String {
        let mono = |n: &[u32]| n.iter().map(|i| format!("z{i}")).collect::<Vec<_>>().join("*");
        if self.coeffs.is_empty() {
            return "0".into();
        }
        if F::TAG == FieldTag::Rational {
            let vals: Vec<Rational> = self
                .coeffs
                .values()
                .map(|v| crate::field::specialize(&v.to_rational_function(), &Rational::zero()).unwrap())
                .collect();
            let den = vals.iter().fold(num_bigint::BigInt::from(1), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
            let mut body = String::new();
            for ((n, _), v) in self.coeffs.iter().zip(&vals) {
                let c = v.clone() * Rational::from(den.clone());
                let c = c.numer().clone();
                let sign = if c < 0.into() { "-" } else if body.is_empty() { "" } else { "+" };
                let mag = num_traits::Signed::abs(&c);
                if mag == 1.into() {
                    body.push_str(&format!("{sign}{}", mono(n)));
                } else {
                    body.push_str(&format!("{sign}{mag}*{}", mono(n)));
                }
            }
            if den == 1.into() {
                body
            } else {
                format!("1/{den}({body})")
            }
        } else {
            let terms: Vec<String> = self.coeffs.iter().map(|(n, v)| format!("({v})*{}", mono(n))).collect();
            terms.join(" + ")
        }
    }
}

impl<F: Field> fmt::Debug for WAmplitude<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}[{} pts, {}]{:?}", self.g, self.h, self.curve, self.coeffs)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "F: Field")]
struct AmplitudeRecord<F> {
    curve: String,
    g: u32,
    h: u32,
    basis: String,
    coeffs: Vec<EntryRecord<F>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "F: Field")]
struct EntryRecord<F> {
    n: Vec<u32>,
    value: F,
}

impl<F: Field> Serialize for WAmplitude<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AmplitudeRecord {
            curve: self.curve.clone(),
            g: self.g,
            h: self.h,
            basis: "zeta".into(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, v)| EntryRecord { n: n.clone(), value: v.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, F: Field> Deserialize<'de> for WAmplitude<F> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = AmplitudeRecord::<F>::deserialize(d)?;
        if r.basis != "zeta" {
            return Err(D::Error::custom(format!("unsupported basis {:?}", r.basis)));
        }
        if let Some(e) = r.coeffs.iter().find(|e| e.n.len() != r.h as usize) {
            return Err(D::Error::custom(format!("index {:?} does not have {} entries", e.n, r.h)));
        }
        Ok(WAmplitude::new(r.g, r.h, r.curve, r.coeffs.into_iter().map(|e| (e.n, e.value))))
    }
}

/// Memo table of computed amplitudes keyed by `(curve, g, h)`.
#[derive(Clone)]
pub struct AmplitudeCache<F> {
    map: HashMap<(String, u32, u32), Arc<WAmplitude<F>>>,
}

impl<F> Default for AmplitudeCache<F> {
    fn default() -> Self {
        AmplitudeCache { map: HashMap::new() }
    }
}

impl<F: Field> AmplitudeCache<F> {
    pub fn get(&self, curve: &str, g: u32, h: u32) -> Option<Arc<WAmplitude<F>>> {
        self.map.get(&(curve.to_string(), g, h)).cloned()
    }

    /// Inserts unless an entry already exists; returns the stored value.
    pub fn insert(&mut self, amp: WAmplitude<F>) -> Arc<WAmplitude<F>> {
        let key = (amp.curve.clone(), amp.g, amp.h);
        self.map.entry(key).or_insert_with(|| Arc::new(amp)).clone()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Cached `(g, h)` pairs, sorted.
    pub fn keys(&self) -> Vec<(String, u32, u32)> {
        let mut k: Vec<_> = self.map.keys().cloned().collect();
        k.sort();
        k
    }
}

/// Symmetric tensor in the pole basis, keyed by sorted pole orders.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleTensor<F> {
    h: u32,
    map: HashMap<Vec<u32>, F>,
}

impl<F: Field> PoleTensor<F> {
    pub fn get(&self, k: &[u32]) -> Option<&F> {
        let mut key = k.to_vec();
        key.sort_unstable();
        self.map.get(&key)
    }

    fn get_sorted(&self, key: &[u32]) -> Option<&F> {
        self.map.get(key)
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.map.iter()
    }

    /// Largest pole order in any slot.
    pub fn max_order(&self) -> u32 {
        self.map.keys().flat_map(|k| k.iter().copied()).max().unwrap_or(0)
    }
}

/// Which spectral curve an engine works on.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveSpec<F> {
    Lambert,
    Framed(F),
}

impl<F: Field> CurveSpec<F> {
    pub fn build(&self, trunc: i64) -> Result<CurveModel<F>> {
        match self {
            CurveSpec::Lambert => CurveModel::lambert(trunc),
            CurveSpec::Framed(f) => CurveModel::framed(f.clone(), trunc),
        }
    }
}

/// How deep the curve series are expanded for an amplitude `(g, h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncPolicy {
    /// [`default_trunc`].
    Default,
    /// [`default_trunc`] plus a fixed excess.
    Extra(i64),
    /// A fixed starting truncation for every amplitude.
    Fixed(i64),
}

/// `6g + 2h + 6`.
pub fn default_trunc(g: u32, h: u32) -> i64 {
    6 * g as i64 + 2 * h as i64 + 6
}

fn is_stable(g: u32, h: u32) -> bool {
    2 * g as i64 - 2 + h as i64 > 0
}

/// Bound on `Σ k_i` in the pole basis: `2(3g - 3 + h) + 2h`.
fn pole_sum_bound(g: u32, h: u32) -> i64 {
    6 * g as i64 - 6 + 4 * h as i64
}

/// Recursion engine for one curve: owns the curve data, the ζ-basis and the
/// amplitude memo table.
pub struct Engine<F: Field> {
    spec: CurveSpec<F>,
    curve: CurveModel<F>,
    basis: ZetaBasis<F>,
    policy: TruncPolicy,
    pool: rayon::ThreadPool,
    jobs: usize,
    cache: AmplitudeCache<F>,
    poles: HashMap<(u32, u32), Arc<PoleTensor<F>>>,
    store: Option<Store>,
    retries: usize,
}

impl<F: Field> fmt::Debug for Engine<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("curve", &self.curve.slug())
            .field("trunc", &self.curve.trunc())
            .field("jobs", &self.jobs)
            .field("cached", &self.cache.len())
            .finish()
    }
}

fn build_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))
}

impl<F: Field> Engine<F> {
    pub fn new(spec: CurveSpec<F>) -> Result<Self> {
        let curve = spec.build(default_trunc(1, 1))?;
        let basis = ZetaBasis::new(&curve, 2)?;
        Ok(Engine {
            spec,
            curve,
            basis,
            policy: TruncPolicy::Default,
            pool: build_pool(1)?,
            jobs: 1,
            cache: AmplitudeCache::default(),
            poles: HashMap::new(),
            store: None,
            retries: 0,
        })
    }

    pub fn lambert() -> Result<Self> {
        Self::new(CurveSpec::Lambert)
    }

    pub fn framed(f: F) -> Result<Self> {
        Self::new(CurveSpec::Framed(f))
    }

    /// Number of worker threads used for residue evaluation.
    pub fn with_jobs(mut self, jobs: usize) -> Result<Self> {
        self.pool = build_pool(jobs)?;
        self.jobs = jobs.max(1);
        Ok(self)
    }

    pub fn with_trunc_policy(mut self, policy: TruncPolicy) -> Result<Self> {
        self.policy = policy;
        if let TruncPolicy::Fixed(t) = policy {
            self.curve = self.spec.build(t)?;
        }
        Ok(self)
    }

    /// Reads and writes amplitudes through an on-disk cache.
    pub fn with_store(mut self, store: Store) -> Self {
        self.store = Some(store);
        self
    }

    pub fn spec(&self) -> &CurveSpec<F> {
        &self.spec
    }

    pub fn curve(&self) -> &CurveModel<F> {
        &self.curve
    }

    pub fn basis(&self) -> &ZetaBasis<F> {
        &self.basis
    }

    pub fn cache(&self) -> &AmplitudeCache<F> {
        &self.cache
    }

    pub fn slug(&self) -> String {
        self.curve.slug()
    }

    /// How many times a computation was restarted with deeper series.
    pub fn retries(&self) -> usize {
        self.retries
    }

    fn trunc_for(&self, g: u32, h: u32) -> i64 {
        match self.policy {
            TruncPolicy::Default => default_trunc(g, h),
            TruncPolicy::Extra(e) => default_trunc(g, h) + e,
            TruncPolicy::Fixed(t) => t,
        }
    }

    fn ensure_trunc(&mut self, t: i64) -> Result<()> {
        if self.curve.trunc() < t {
            self.curve = self.spec.build(t)?;
        }
        Ok(())
    }

    fn ensure_basis(&mut self, n_max: u32) -> Result<()> {
        if self.basis.len() <= n_max as usize {
            self.basis = ZetaBasis::new(&self.curve, n_max)?;
        }
        Ok(())
    }

    /// The ζ-tensor of `W_g` with `h` points.
    pub fn w_amplitude(&mut self, g: u32, h: u32) -> Result<Arc<WAmplitude<F>>> {
        if h == 0 || !is_stable(g, h) {
            return Err(Error::Unstable { g, h });
        }
        let slug = self.slug();
        if let Some(a) = self.cache.get(&slug, g, h) {
            return Ok(a);
        }
        if let Some(store) = &self.store {
            if let Some(a) = store.load(&self.curve, g, h)? {
                return Ok(self.cache.insert(a));
            }
        }
        for (g1, h1) in dependencies(g, h) {
            self.pole_tensor(g1, h1)?;
        }
        self.ensure_trunc(self.trunc_for(g, h))?;
        self.ensure_basis(3 * g + h - 2)?;
        let (amp, poles) = loop {
            match self.compute(g, h) {
                Ok(r) => break r,
                Err(Error::InsufficientTruncation { .. }) if self.retries < MAX_RETRIES => {
                    self.retries += 1;
                    let t = self.curve.trunc();
                    self.curve = self.spec.build(3 + 2 * (t - 3))?;
                }
                Err(e) => return Err(e),
            }
        };
        self.poles.insert((g, h), Arc::new(poles));
        if let Some(store) = &self.store {
            store.save(&self.curve, &amp)?;
        }
        Ok(self.cache.insert(amp))
    }

    /// The pole-basis form of a stable amplitude.
    pub fn pole_tensor(&mut self, g: u32, h: u32) -> Result<Arc<PoleTensor<F>>> {
        if let Some(p) = self.poles.get(&(g, h)) {
            return Ok(p.clone());
        }
        let amp = self.w_amplitude(g, h)?;
        if let Some(p) = self.poles.get(&(g, h)) {
            return Ok(p.clone());
        }
        // loaded from a cache: expand through the ζ-forms
        self.ensure_basis(3 * g + h - 2)?;
        let ordered = expand_sorted(&amp.coeffs);
        let mut t = ordered;
        for slot in 0..h as usize {
            t = zeta_to_pole_slot(&self.basis, &t, slot)?;
        }
        let p = Arc::new(PoleTensor { h, map: restrict_symmetric(&t, g, h)? });
        self.poles.insert((g, h), p.clone());
        Ok(p)
    }

    fn compute(&self, g: u32, h: u32) -> Result<(WAmplitude<F>, PoleTensor<F>)> {
        let bound = pole_sum_bound(g, h);
        let s_max = bound + 2;
        let mut subs: HashMap<(u32, u32), Arc<PoleTensor<F>>> = HashMap::new();
        for d in dependencies(g, h) {
            subs.insert(d, self.poles[&d].clone());
        }
        let spectators = sorted_tuples(h as usize - 1, 2, s_max - 2);
        let self_pairing = g == 1 && h == 1;

        // phase 1: bracket weights per spectator tuple
        let weights: Vec<BTreeMap<(i64, i64), F>> = self.pool.install(|| {
            spectators
                .par_iter()
                .map(|k| bracket_weights(g, k, &subs, self_pairing))
                .collect()
        });
        let mut triples: BTreeSet<(u32, i64, i64)> = BTreeSet::new();
        for (k, w) in spectators.iter().zip(&weights) {
            let m_max = (s_max - k.iter().map(|&x| x as i64).sum::<i64>() - 1) as u32;
            for &(a, c) in w.keys() {
                for m in 0..=m_max {
                    triples.insert((m, a, c));
                }
            }
        }

        // phase 2: residue table
        let ms: BTreeSet<u32> = triples.iter().map(|t| t.0).collect();
        let cs: BTreeSet<i64> = triples.iter().map(|t| t.2).collect();
        let curve = &self.curve;
        let (channels, spect) = self.pool.install(|| {
            let ch: Result<HashMap<u32, LaurentSeries<F>>> =
                ms.par_iter().map(|&m| Ok((m, curve.kernel_channel(m)?))).collect();
            let vs: Result<HashMap<i64, LaurentSeries<F>>> =
                cs.par_iter().map(|&c| Ok((c, q_bar_factor(curve, c)?))).collect();
            (ch, vs)
        });
        let (channels, spect) = (channels?, spect?);
        let triple_list: Vec<(u32, i64, i64)> = triples.into_iter().collect();
        let values: Vec<F> = self.pool.install(|| {
            triple_list
                .par_iter()
                .map(|&(m, a, c)| product_coeff(&channels[&m], &spect[&c], a - 1))
                .collect::<Result<Vec<F>>>()
        })?;
        let table: HashMap<(u32, i64, i64), F> = triple_list.into_iter().zip(values).collect();

        // phase 3: assemble entries (k_0, K) in a fixed order
        let rows: Vec<Vec<(u32, F)>> = self.pool.install(|| {
            spectators
                .par_iter()
                .zip(weights.par_iter())
                .map(|(k, w)| {
                    let m_max = (s_max - k.iter().map(|&x| x as i64).sum::<i64>() - 1) as u32;
                    (0..=m_max)
                        .map(|m| {
                            let mut acc = F::zero();
                            for (&(a, c), wv) in w {
                                acc.add_mul(wv, &table[&(m, a, c)]);
                            }
                            (m + 1, acc)
                        })
                        .collect()
                })
                .collect()
        });

        // symmetry, residuelessness and dimension checks
        let mut full: BTreeMap<Vec<u32>, (u32, F)> = BTreeMap::new();
        for (k, row) in spectators.iter().zip(rows) {
            for (k0, v) in row {
                if k0 == 1 {
                    if !v.is_zero() {
                        return Err(Error::ResidueObstruction(format!(
                            "W_{g} with {h} points has a simple pole at spectators {k:?}"
                        )));
                    }
                    continue;
                }
                let mut key = k.clone();
                key.push(k0);
                key.sort_unstable();
                match full.get(&key) {
                    None => {
                        full.insert(key, (k0, v));
                    }
                    Some((first, w)) if *w != v => {
                        return Err(Error::SymmetryViolation {
                            g,
                            h,
                            detail: format!("pole orders {key:?}: resolving {first} gives {w}, resolving {k0} gives {v}"),
                        });
                    }
                    _ => {}
                }
            }
        }
        let mut poles = HashMap::new();
        for (key, (_, v)) in full {
            if v.is_zero() {
                continue;
            }
            if key.iter().map(|&x| x as i64).sum::<i64>() > bound {
                return Err(Error::DimensionBound { g, h, detail: format!("pole orders {key:?} carry {v}") });
            }
            poles.insert(key, v);
        }
        let poles = PoleTensor { h, map: poles };

        let mut t: BTreeMap<Vec<u32>, F> = expand_sorted_map(&poles.map);
        for slot in 0..h as usize {
            t = pole_to_zeta_slot(&self.basis, &t, slot)?;
        }
        let zeta: BTreeMap<Vec<u32>, F> = restrict_symmetric(&t, g, h)?;
        let dim = 3 * g as i64 - 3 + h as i64;
        if let Some(n) = zeta.keys().find(|n| n.iter().map(|&x| x as i64).sum::<i64>() > dim) {
            return Err(Error::DimensionBound { g, h, detail: format!("zeta indices {n:?}") });
        }
        Ok((WAmplitude::new(g, h, self.slug(), zeta), poles))
    }

    /// Coefficient of `∏ x_i^{μ_i - 1}` in `W_g(x_1, …, x_h)`, the parts of
    /// `μ` assigned to the variables in order.
    pub fn w_as_x_coefficients(&self, amp: &WAmplitude<F>, mu: &Partition) -> Result<F> {
        w_as_x_coefficients(amp, self.curve.framing(), mu)
    }

    /// `Σ_k c_k [z^{k-1}] Φ` for the one-point amplitude `Σ_k c_k dy/(y-b)^k`,
    /// where `Φ` is the primitive of `log(y/b) dx/x` in `z` with constant
    /// term `constant`.
    pub fn closed_amplitude(&mut self, g: u32, constant: &F) -> Result<F> {
        if g < 2 {
            return Err(Error::OutOfScope(format!("closed amplitudes need g >= 2, got {g}")));
        }
        let poles = self.pole_tensor(g, 1)?;
        let top = poles.max_order() as i64;
        loop {
            let phi = self.curve.log_y().mul(&self.curve.dlog_x()?).primitive(constant)?;
            let mut acc = F::zero();
            let mut short = None;
            for (k, v) in poles.entries() {
                match phi.coeff(k[0] as i64 - 1) {
                    Ok(c) => acc.add_mul(v, &c),
                    Err(e) => {
                        short = Some(e);
                        break;
                    }
                }
            }
            match short {
                None => return Ok(acc),
                Some(_) if self.retries < MAX_RETRIES => {
                    self.retries += 1;
                    let t = self.curve.trunc().max(top + 2);
                    self.curve = self.spec.build(3 + 2 * (t - 3))?;
                }
                Some(e) => return Err(e),
            }
        }
    }
}

/// Stable amplitudes feeding the recursion for `(g, h)`.
fn dependencies(g: u32, h: u32) -> Vec<(u32, u32)> {
    let mut out = BTreeSet::new();
    if g >= 1 && is_stable(g - 1, h + 1) {
        out.insert((g - 1, h + 1));
    }
    for g1 in 0..=g {
        for j in 0..h {
            if is_stable(g1, j + 1) && (g1, j + 1) != (g, h) {
                out.insert((g1, j + 1));
            }
        }
    }
    out.into_iter().collect()
}

/// Weights of `z^{-a} dz ⊗ σ^{-c}σ' dz` in the bracket for spectator pole
/// orders `k`.
fn bracket_weights<F: Field>(
    g: u32,
    k: &[u32],
    subs: &HashMap<(u32, u32), Arc<PoleTensor<F>>>,
    self_pairing: bool,
) -> BTreeMap<(i64, i64), F> {
    let mut w: BTreeMap<(i64, i64), F> = BTreeMap::new();
    let mut add = |a: i64, c: i64, v: F| {
        if !v.is_zero() {
            w.entry((a, c)).or_insert_with(F::zero).add_assign_ref(&v);
        }
    };
    let h1 = k.len() as u32;
    if self_pairing {
        add(0, SELF_PAIRING, F::one());
    } else if g >= 1 {
        let t = &subs[&(g - 1, h1 + 2)];
        let room = pole_sum_bound(g - 1, h1 + 2) - k.iter().map(|&x| x as i64).sum::<i64>();
        let mut key = Vec::with_capacity(k.len() + 2);
        for a in 2..=room - 2 {
            for c in 2..=room - a {
                key.clear();
                key.extend_from_slice(k);
                key.push(a as u32);
                key.push(c as u32);
                key.sort_unstable();
                if let Some(v) = t.get_sorted(&key) {
                    add(a, c, v.clone());
                }
            }
        }
    }
    let n = k.len();
    for mask in 0u32..(1 << n) {
        let j1: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| k[i]).collect();
        let j2: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| k[i]).collect();
        for g1 in 0..=g {
            let g2 = g - g1;
            if (g1 == 0 && j1.is_empty()) || (g2 == 0 && j2.is_empty()) {
                continue;
            }
            let left = side_factor(g1, &j1, subs);
            if left.is_empty() {
                continue;
            }
            let right = side_factor(g2, &j2, subs);
            for (a, va) in &left {
                for (c, vc) in &right {
                    add(*a, *c, va.mul_ref(vc));
                }
            }
        }
    }
    w
}

/// `W_{g}(p, y_J)` at `p ∈ {q, q̄}` as a list of `(a, coefficient)` for the
/// factor `(local coordinate)^{-a}`.
fn side_factor<F: Field>(g: u32, j: &[u32], subs: &HashMap<(u32, u32), Arc<PoleTensor<F>>>) -> Vec<(i64, F)> {
    if g == 0 && j.len() == 1 {
        let k = j[0] as i64;
        return vec![(2 - k, F::from_int(k - 1))];
    }
    let h = j.len() as u32 + 1;
    let t = &subs[&(g, h)];
    let room = pole_sum_bound(g, h) - j.iter().map(|&x| x as i64).sum::<i64>();
    let mut out = Vec::new();
    let mut key = Vec::with_capacity(j.len() + 1);
    for a in 2..=room {
        key.clear();
        key.extend_from_slice(j);
        key.push(a as u32);
        key.sort_unstable();
        if let Some(v) = t.get_sorted(&key) {
            out.push((a, v.clone()));
        }
    }
    out
}

/// `σ^{-c} σ'`, or the self-pairing `σ'/(z - σ)^2`.
fn q_bar_factor<F: Field>(curve: &CurveModel<F>, c: i64) -> Result<LaurentSeries<F>> {
    if c == SELF_PAIRING {
        return bergman_self(curve);
    }
    let sigma = curve.involution();
    Ok(sigma.pow(-c)?.mul(&sigma.derivative()))
}

/// `[z^e](a b)` without forming the product.
fn product_coeff<F: Field>(a: &LaurentSeries<F>, b: &LaurentSeries<F>, e: i64) -> Result<F> {
    let mut acc = F::zero();
    if a.is_exact() && a.is_zero() || b.is_exact() && b.is_zero() {
        return Ok(acc);
    }
    for i in a.lowest()..=e - b.lowest() {
        let x = a.coeff(i)?;
        if x.is_zero() {
            continue;
        }
        acc.add_mul(&x, &b.coeff(e - i)?);
    }
    Ok(acc)
}

/// `B(y(q), y(q̄)) / dz^2 = σ'(z) / (z - σ(z))^2`.
pub fn bergman_self<F: Field>(curve: &CurveModel<F>) -> Result<LaurentSeries<F>> {
    let sigma = curve.involution();
    let diff = LaurentSeries::var().sub(sigma);
    Ok(sigma.derivative().mul(&diff.mul(&diff).invert()?))
}

/// The one-point genus-zero amplitude divided by `dx`: `y(x)/x` for the
/// Lambert curve and `log y(x) / x` for the framed curve, known below
/// `x^order`.
pub fn w_unstable_disk<F: Field>(curve: &CurveModel<F>, order: i64) -> Result<LaurentSeries<F>> {
    let y = curve.y_of_x(order + 1);
    let num = match curve.framing() {
        None => y,
        Some(_) => LaurentSeries::compose(&log1p_series(order + 1), &y.sub(&LaurentSeries::one()))?,
    };
    Ok(num.shift(-1).truncate(order))
}

/// `B(y_1, y_2) - dx_1 dx_2/(x_1 - x_2)^2` divided by `dx_1 dx_2`, known in
/// total degree below `order`.
///
/// With `Q = (y_1 - y_2)/(x_1 - x_2)` the difference equals
/// `(y_1' y_2' - Q^2) / (Q^2 (x_1 - x_2)^2)`; the numerator is divided by
/// `x_1 - x_2` twice, exactly.
pub fn w_unstable_annulus<F: Field>(curve: &CurveModel<F>, order: usize) -> Result<BivariateSeries<F>> {
    let t = order + 2;
    let y = curve.y_of_x(t as i64 + 1);
    let dy = y.derivative();
    let q = BivariateSeries::divided_difference(&y, t)?;
    let d1 = BivariateSeries::from_univariate(&dy, false, t)?;
    let d2 = BivariateSeries::from_univariate(&dy, true, t)?;
    let q2 = q.mul(&q);
    let num = d1.mul(&d2).sub(&q2).div_diagonal()?.div_diagonal()?;
    let inv = q2.truncate(order).invert()?;
    Ok(num.mul(&inv))
}

/// Coefficient of `∏ x_i^{μ_i - 1}` in `W_g(x_1, …, x_h)`: the sum over
/// ordered index tuples of the tensor entry times `∏ zeta_weight(n_i, μ_i)`.
///
/// Example: for `μ = (2, 1)` this is the coefficient of `x_1 x_2^0`. The
/// monomial function `m_{(2,1)} = x_1 + x_2` carries it with coefficient 1,
/// so the Hurwitz number follows by multiplying with `b!/z_μ`.
pub fn w_as_x_coefficients<F: Field>(amp: &WAmplitude<F>, framing: Option<&F>, mu: &Partition) -> Result<F> {
    if mu.len() != amp.h as usize {
        return Err(Error::LengthMismatch { expected: amp.h as usize, got: mu.len() });
    }
    let mut weights: HashMap<(u32, u32), F> = HashMap::new();
    let mut acc = F::zero();
    for (n, v) in amp.entries() {
        for perm in distinct_permutations(n) {
            let mut term = v.clone();
            for (&ni, &mi) in perm.iter().zip(mu.parts()) {
                let w = weights.entry((ni, mi)).or_insert_with(|| zeta_weight(framing, ni, mi));
                term = term.mul_ref(w);
            }
            acc.add_assign_ref(&term);
        }
    }
    Ok(acc)
}

/// Sorted tuples of `len` integers `≥ min` with sum `≤ max_sum`.
fn sorted_tuples(len: usize, min: u32, max_sum: i64) -> Vec<Vec<u32>> {
    fn go(len: usize, lo: u32, room: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let left = (len - cur.len()) as i64;
        let mut v = lo;
        while (v as i64) * left <= room {
            cur.push(v);
            go(len, v, room - v as i64, cur, out);
            cur.pop();
            v += 1;
        }
    }
    let mut out = Vec::new();
    go(len, min, max_sum, &mut Vec::new(), &mut out);
    out
}

/// All distinct orderings of a multiset, starting from the sorted one.
pub(crate) fn distinct_permutations(sorted: &[u32]) -> Vec<Vec<u32>> {
    let mut cur = sorted.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

fn expand_sorted<F: Field>(t: &BTreeMap<Vec<u32>, F>) -> BTreeMap<Vec<u32>, F> {
    let mut out = BTreeMap::new();
    for (k, v) in t {
        for p in distinct_permutations(k) {
            out.insert(p, v.clone());
        }
    }
    out
}

fn expand_sorted_map<F: Field>(t: &HashMap<Vec<u32>, F>) -> BTreeMap<Vec<u32>, F> {
    let mut out = BTreeMap::new();
    for (k, v) in t {
        for p in distinct_permutations(k) {
            out.insert(p, v.clone());
        }
    }
    out
}

/// Reads a fully ordered tensor back into sorted keys, checking that every
/// ordering of each key carries the same value.
fn restrict_symmetric<F: Field, M: FromIterator<(Vec<u32>, F)>>(
    t: &BTreeMap<Vec<u32>, F>,
    g: u32,
    h: u32,
) -> Result<M> {
    let mut groups: BTreeMap<Vec<u32>, (usize, &F)> = BTreeMap::new();
    for (k, v) in t {
        let mut s = k.clone();
        s.sort_unstable();
        match groups.get_mut(&s) {
            None => {
                groups.insert(s, (1, v));
            }
            Some((count, w)) => {
                if *w != v {
                    return Err(Error::SymmetryViolation { g, h, detail: format!("{k:?}: {w} vs {v}") });
                }
                *count += 1;
            }
        }
    }
    for (s, (count, _)) in &groups {
        let orbit = distinct_permutations(s).len();
        if *count != orbit {
            return Err(Error::SymmetryViolation {
                g,
                h,
                detail: format!("{s:?}: only {count} of {orbit} orderings are nonzero"),
            });
        }
    }
    Ok(groups.into_iter().map(|(k, (_, v))| (k, v.clone())).collect())
}

fn pole_to_zeta_slot<F: Field>(
    basis: &ZetaBasis<F>,
    t: &BTreeMap<Vec<u32>, F>,
    slot: usize,
) -> Result<BTreeMap<Vec<u32>, F>> {
    let mut groups: BTreeMap<Vec<u32>, PoleForm<F>> = BTreeMap::new();
    for (k, v) in t {
        let mut rest = k.clone();
        rest[slot] = u32::MAX;
        groups.entry(rest).or_insert_with(PoleForm::new).add_at(k[slot], v);
    }
    let mut out = BTreeMap::new();
    for (rest, form) in groups {
        for (n, c) in basis.pole_to_zeta(&form)? {
            let mut key = rest.clone();
            key[slot] = n;
            if !c.is_zero() {
                out.insert(key, c);
            }
        }
    }
    Ok(out)
}

fn zeta_to_pole_slot<F: Field>(
    basis: &ZetaBasis<F>,
    t: &BTreeMap<Vec<u32>, F>,
    slot: usize,
) -> Result<BTreeMap<Vec<u32>, F>> {
    let mut out: BTreeMap<Vec<u32>, F> = BTreeMap::new();
    for (n, v) in t {
        for (k, c) in basis.zeta_form(n[slot])?.iter() {
            let mut key = n.clone();
            key[slot] = k;
            out.entry(key).or_insert_with(F::zero).add_mul(v, c);
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::RationalFunction;

    type Q = Rational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d).unwrap()
    }

    #[test]
    fn tuples_and_permutations() {
        assert_eq!(sorted_tuples(2, 2, 5), vec![vec![2, 2], vec![2, 3]]);
        assert_eq!(sorted_tuples(0, 2, 5), vec![Vec::<u32>::new()]);
        assert_eq!(distinct_permutations(&[1, 1, 2]).len(), 3);
        assert_eq!(distinct_permutations(&[0, 1, 2]).len(), 6);
        assert_eq!(dependencies(2, 1), vec![(1, 1), (1, 2)]);
        assert_eq!(dependencies(0, 4), vec![(0, 3)]);
    }

    #[test]
    fn bergman_self_leading_terms() {
        let c = CurveModel::<Q>::lambert(8).unwrap();
        let b = bergman_self(&c).unwrap();
        assert_eq!(b.lowest(), -2);
        assert_eq!(b.coeff(-2).unwrap(), q(-1, 4));
        // S' = -1 + 4z/3, (z - S)^2 = 4z^2 (1 - z/3 + …)^2 → -1/4 z^-2 (1 - 4z/3)(1 + 2z/3)
        assert_eq!(b.coeff(-1).unwrap(), q(1, 6));
    }

    #[test]
    fn bergman_self_specializes() {
        let sym = CurveModel::framed(RationalFunction::var(), 8).unwrap();
        let num = CurveModel::framed(Q::from(3), 8).unwrap();
        let bs = bergman_self(&sym).unwrap();
        let bn = bergman_self(&num).unwrap();
        for e in -2..4 {
            assert_eq!(bs.coeff(e).unwrap().eval(&Q::from(3)).unwrap(), bn.coeff(e).unwrap());
        }
    }

    #[test]
    fn genus_one_one_point() {
        let mut e = Engine::<Q>::lambert().unwrap();
        let w = e.w_amplitude(1, 1).unwrap();
        assert_eq!(w.coeff(&[0]), q(-1, 24));
        assert_eq!(w.coeff(&[1]), q(1, 24));
        assert_eq!(w.len(), 2);
        assert_eq!(w.pretty(), "1/24(-z0+z1)");
    }

    #[test]
    fn genus_zero_three_point() {
        let mut e = Engine::<Q>::lambert().unwrap();
        let w = e.w_amplitude(0, 3).unwrap();
        assert_eq!(w.coeff(&[0, 0, 0]), Q::one());
        assert_eq!(w.len(), 1);
        assert!(matches!(e.w_amplitude(0, 2), Err(Error::Unstable { .. })));
    }

    #[test]
    fn x_coefficients() {
        let mut e = Engine::<Q>::lambert().unwrap();
        let w = e.w_amplitude(1, 1).unwrap();
        let one: Partition = "1".parse().unwrap();
        let two: Partition = "2".parse().unwrap();
        assert_eq!(e.w_as_x_coefficients(&w, &one).unwrap(), Q::zero());
        assert_eq!(e.w_as_x_coefficients(&w, &two).unwrap(), q(1, 6));
        let bad: Partition = "1,1".parse().unwrap();
        assert!(matches!(e.w_as_x_coefficients(&w, &bad), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn disk_and_annulus() {
        let c = CurveModel::<Q>::lambert(4).unwrap();
        let d = w_unstable_disk(&c, 8).unwrap();
        assert_eq!(d.coeff(2).unwrap(), q(3, 2));
        let a = w_unstable_annulus(&c, 5).unwrap();
        assert_eq!(a.coeff(0, 0).unwrap(), q(1, 2));
        assert!(a.is_symmetric());
        let f1 = CurveModel::framed(Q::one(), 4).unwrap();
        assert_eq!(w_unstable_disk(&f1, 4).unwrap().coeff(0).unwrap(), Q::from(-1));
    }

    #[test]
    fn json_round_trip() {
        let w = WAmplitude::new(2, 1, "lambert", [(vec![2], q(7, 5760)), (vec![3], q(-1, 480))]);
        let js = serde_json::to_string(&w).unwrap();
        assert_eq!(
            js,
            r#"{"curve":"lambert","g":2,"h":1,"basis":"zeta","coeffs":[{"n":[2],"value":"7/5760"},{"n":[3],"value":"-1/480"}]}"#
        );
        let back: WAmplitude<Q> = serde_json::from_str(&js).unwrap();
        assert_eq!(back, w);
        assert!(serde_json::from_str::<WAmplitude<Q>>(&js.replace("zeta", "pole")).is_err());
    }
}
