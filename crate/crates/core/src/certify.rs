//! The Morse-theoretic counting argument, run on a concrete finite system of
//! closed orbits.
//!
//! Index-negative systems over negative monotone bases are handled in a
//! mirrored frame: every path is inverted and the homology is read with the
//! grading reversed, which turns them into the index-positive situation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::homology::{self, BaseManifold, MonotoneSign};
use crate::index::{self, FastPath, PathModel};
use crate::jump::{self, JumpCertificate, JumpParams, Strategy};
use crate::rational::{self, parity_sign, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexSign {
    Positive,
    Negative,
}

impl fmt::Display for IndexSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexSign::Positive => "positive",
            IndexSign::Negative => "negative",
        })
    }
}

impl FromStr for IndexSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "positive" => Ok(IndexSign::Positive),
            "negative" => Ok(IndexSign::Negative),
            other => Err(Error::Parse(format!("expected positive|negative, got {other:?}"))),
        }
    }
}

/// Declared hypotheses. Index conditions are checked; fillability is trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    NoIndex0,
    NoIndex0Pm1,
    IndexPositive,
    IndexNegative,
    FillableF,
    NonFillableNF,
}

impl Flag {
    pub const ALL: [Flag; 6] = [
        Flag::NoIndex0,
        Flag::NoIndex0Pm1,
        Flag::IndexPositive,
        Flag::IndexNegative,
        Flag::FillableF,
        Flag::NonFillableNF,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Flag::NoIndex0 => "no-index-0",
            Flag::NoIndex0Pm1 => "no-index-0-pm1",
            Flag::IndexPositive => "index-positive",
            Flag::IndexNegative => "index-negative",
            Flag::FillableF => "fillable-F",
            Flag::NonFillableNF => "non-fillable-NF",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Flag::ALL
            .into_iter()
            .find(|f| f.as_str() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown hypothesis flag {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitModel {
    pub label: String,
    pub path: PathModel,
    pub period: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemModel {
    pub orbits: Vec<OrbitModel>,
    pub base: BaseManifold,
    pub index_sign: IndexSign,
    pub flags: BTreeSet<Flag>,
}

impl SystemModel {
    pub fn new(orbits: Vec<OrbitModel>, base: BaseManifold, index_sign: IndexSign, flags: BTreeSet<Flag>) -> Result<Self> {
        let system = Self {
            orbits,
            base,
            index_sign,
            flags,
        };
        system.validate()?;
        Ok(system)
    }

    /// Labels distinct, periods positive, paths certified, mean indices of the
    /// declared sign and declared flags not contradictory.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for orbit in &self.orbits {
            if !seen.insert(orbit.label.as_str()) {
                return Err(Error::Validation(format!("duplicate orbit label {:?}", orbit.label)));
            }
            if !orbit.period.is_positive() {
                return Err(Error::Validation(format!("orbit {} has non-positive period", orbit.label)));
            }
            if orbit.path.nondeg_bound() == 0 {
                return Err(Error::Validation(format!("orbit {} has an uncertified path", orbit.label)));
            }
            if orbit.path.half_dim() != self.base.n() {
                return Err(Error::Validation(format!(
                    "orbit {} has half-dimension {} but the base has n = {}",
                    orbit.label,
                    orbit.path.half_dim(),
                    self.base.n()
                )));
            }
            let mean = index::mean_index_per_iterate(&orbit.path);
            if mean.is_zero() {
                return Err(Error::ZeroMeanIndex(orbit.label.clone()));
            }
            let wrong_sign = match self.index_sign {
                IndexSign::Positive => mean.is_negative(),
                IndexSign::Negative => mean.is_positive(),
            };
            if wrong_sign {
                return Err(Error::Validation(format!(
                    "orbit {} has mean index {} against the declared {} index sign",
                    orbit.label,
                    rational::fmt_rational(&mean),
                    self.index_sign
                )));
            }
        }
        let declared = match self.index_sign {
            IndexSign::Positive => Flag::IndexNegative,
            IndexSign::Negative => Flag::IndexPositive,
        };
        if self.flags.contains(&declared) {
            return Err(Error::Validation(format!(
                "flag {declared} contradicts the {} index sign",
                self.index_sign
            )));
        }
        if self.flags.contains(&Flag::FillableF) && self.flags.contains(&Flag::NonFillableNF) {
            return Err(Error::Validation("fillable-F and non-fillable-NF are exclusive".into()));
        }
        Ok(())
    }

    pub fn paths(&self) -> Vec<PathModel> {
        self.orbits.iter().map(|o| o.path.clone()).collect()
    }

    /// The same system without orbit `i`.
    pub fn without(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.orbits.remove(i);
        out
    }
}

/// Index-positive view of a system.
struct Frame<'a> {
    system: &'a SystemModel,
    paths: Vec<PathModel>,
    mirrored: bool,
}

impl<'a> Frame<'a> {
    fn new(system: &'a SystemModel) -> Result<Self> {
        system.validate()?;
        let mirrored = match (system.index_sign, system.base.monotone_sign()) {
            (IndexSign::Positive, MonotoneSign::Positive) => false,
            (IndexSign::Negative, MonotoneSign::Negative) => true,
            (sign, mono) => {
                return Err(Error::Validation(format!(
                    "index-{sign} orbits over a {mono} monotone base: the homology is not bounded on the side the orbits grow"
                )))
            }
        };
        let paths = system
            .orbits
            .iter()
            .map(|o| if mirrored { index::invert(&o.path) } else { o.path.clone() })
            .collect();
        Ok(Self {
            system,
            paths,
            mirrored,
        })
    }

    fn n(&self) -> i64 {
        self.system.base.n() as i64
    }

    fn homology(&self, m: i64) -> u64 {
        homology::hc_rank(&self.system.base, if self.mirrored { -m } else { m })
    }

    /// `Σ_{m ≤ top} (-1)^m b_m`.
    fn homology_sum(&self, top: i64) -> i64 {
        let base = &self.system.base;
        let n = self.n();
        let c = base.chern_min() as i64;
        if self.mirrored {
            // Negative monotone ranks vanish above 3n - 2c.
            homology::alternating_sum(base, -top, 3 * n - 2 * c)
        } else {
            // Positive monotone ranks vanish below 2c - n.
            homology::alternating_sum(base, 2 * c - n, top)
        }
    }
}

/// `χ(γ^k) = (-1)^{μ(γ^k)}` for good iterates, `0` for bad ones.
pub fn local_euler(orbit: &OrbitModel, k: u64) -> Result<i64> {
    let mu = index::cz_index(&orbit.path, k)?;
    Ok(if index::is_good(&orbit.path, k)? { parity_sign(mu) } else { 0 })
}

/// `χ̂(γ) = (-1)^{μ(γ)}` if `γ²` is good, `(-1)^{μ(γ)}/2` otherwise.
pub fn mean_local_euler(orbit: &OrbitModel) -> Result<Rational> {
    path_mean_local_euler(&orbit.path)
}

fn path_mean_local_euler(path: &PathModel) -> Result<Rational> {
    let sign = parity_sign(index::cz_index(path, 1)?);
    Ok(if index::is_good_fast(path.hyperbolic_sum() as i128, 2) {
        rational::int(sign)
    } else {
        rational::ratio(sign, 2)
    })
}

/// `Σ_{ℓ ≤ k} χ(γ^ℓ)` from the parity pattern of the path alone.
fn euler_prefix(path: &PathModel, k: u64) -> i64 {
    let ell = path.elliptic().len() as i64;
    if path.hyperbolic_sum() % 2 == 0 {
        k as i64 * parity_sign(ell)
    } else {
        k.div_ceil(2) as i64 * parity_sign(ell + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resonance {
    pub lhs: Rational,
    pub rhs: Rational,
    pub residual: Rational,
    /// Whether the right-hand side is the derived negative-monotone value.
    pub rhs_derived: bool,
}

impl Resonance {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

/// `Σ_i χ̂(γ_i)/|μ̂(γ_i)|` against `χ_±(M)`.
pub fn resonance_check(system: &SystemModel) -> Result<Resonance> {
    let mut lhs = Rational::zero();
    for orbit in &system.orbits {
        let mean = index::mean_index_per_iterate(&orbit.path);
        if mean.is_zero() {
            return Err(Error::ZeroMeanIndex(orbit.label.clone()));
        }
        lhs += mean_local_euler(orbit)? / mean.abs();
    }
    let rhs = homology::mean_euler_char(&system.base);
    Ok(Resonance {
        residual: &lhs - &rhs,
        lhs,
        rhs,
        rhs_derived: homology::mean_euler_char_is_derived(&system.base),
    })
}

/// `max_i ⌈(4n+1)/|μ̂(γ_i)|⌉`, at least 1.
pub fn ell0(system: &SystemModel) -> Result<u64> {
    let top = rational::int(4 * system.base.n() as i64 + 1);
    let mut best = 1u64;
    for orbit in &system.orbits {
        let mean = index::mean_index_per_iterate(&orbit.path);
        if mean.is_zero() {
            return Err(Error::ZeroMeanIndex(orbit.label.clone()));
        }
        let bound = rational::ceil(&(&top / mean.abs()));
        best = best.max(bound.to_u64().ok_or_else(|| Error::Overflow("ell0".into()))?);
    }
    Ok(best)
}

/// Sizes of the iterate classes of one orbit over `1..=k+2ℓ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IterateClasses {
    pub a: u64,
    pub b1: u64,
    pub b2: u64,
    pub c1: u64,
    pub c2: u64,
    pub d: u64,
}

impl IterateClasses {
    pub fn total(&self) -> u64 {
        self.a + self.b1 + self.b2 + self.c1 + self.c2 + self.d
    }
}

/// The counts `c^{e,o}_±` and `r^{e,o}_±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct JumpCounts {
    pub c_e_plus: u64,
    pub c_e_minus: u64,
    pub c_o_plus: u64,
    pub c_o_minus: u64,
    pub r_e_plus: u64,
    pub r_e_minus: u64,
    pub r_o_plus: u64,
    pub r_o_minus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseWindow {
    pub d: i64,
    /// `D = d` for odd `n`, `d + 1` for even `n`.
    pub top: i64,
    pub k: Vec<u64>,
    pub ell0: u64,
    pub classes: Vec<IterateClasses>,
    pub counts: JumpCounts,
    /// `μ(γ_i^{k_i}) - d`.
    pub offsets: Vec<i64>,
    pub good_at_k: Vec<bool>,
    /// Method (a): direct enumeration of good iterates with index `≤ D`.
    pub enumerated: i64,
    /// Method (b): `Σ_i Σ_{ℓ≤k_i} χ(γ_i^ℓ) - (r^e_+ - r^o_+)`.
    pub closed_form: i64,
    /// `Σ_{ℓ≤k_i} χ(γ_i^ℓ)` per orbit, from the enumeration.
    pub prefix_sums: Vec<i64>,
    /// Good iterates other than `γ_i^{k_i}` with index `d` (odd `n`) or in
    /// `{d-1, d, d+1}` (even `n`).
    pub coincidences: u64,
}

impl MorseWindow {
    pub fn agrees(&self) -> bool {
        self.enumerated == self.closed_form
    }

    /// `r^o_±` for odd `n`, `r^e_±` for even `n`.
    pub fn jump_pair(&self, n: usize) -> (u64, u64) {
        if n % 2 == 1 {
            (self.counts.r_o_plus, self.counts.r_o_minus)
        } else {
            (self.counts.r_e_plus, self.counts.r_e_minus)
        }
    }

    /// Orbit indices counted by [`jump_pair`](Self::jump_pair) on the `+` and `-` sides.
    pub fn jump_members(&self, n: usize) -> (Vec<usize>, Vec<usize>) {
        let threshold = if n % 2 == 1 { 0 } else { 1 };
        let want_odd = n % 2 == 1;
        let pick = |sign: i64| {
            self.offsets
                .iter()
                .zip(&self.good_at_k)
                .enumerate()
                .filter(|(_, (&off, &good))| {
                    good && sign * off > threshold && ((self.d + off).rem_euclid(2) == 1) == want_odd
                })
                .map(|(i, _)| i)
                .collect::<Vec<_>>()
        };
        (pick(1), pick(-1))
    }
}

/// Both computations of the truncated alternating sum of Morse type numbers,
/// plus the classification of the iterates near each `k_i`.
pub fn morse_window(system: &SystemModel, d: i64, k: &[u64], ell0: u64) -> Result<MorseWindow> {
    let frame = Frame::new(system)?;
    window_in_frame(&frame, d, k, ell0)
}

fn window_in_frame(frame: &Frame<'_>, d: i64, ks: &[u64], ell0: u64) -> Result<MorseWindow> {
    if ks.len() != frame.paths.len() {
        return Err(Error::Validation(format!(
            "{} iterates for {} orbits",
            ks.len(),
            frame.paths.len()
        )));
    }
    let n = frame.n();
    let odd = n % 2 == 1;
    let top = if odd { d } else { d + 1 };
    let breakpoint = if odd { 0 } else { -1 };
    let threshold = if odd { 0 } else { 1 };
    let band = if odd { d..=d } else { d - 1..=d + 1 };

    let mut out = MorseWindow {
        d,
        top,
        k: ks.to_vec(),
        ell0,
        classes: Vec::with_capacity(ks.len()),
        counts: JumpCounts::default(),
        offsets: Vec::with_capacity(ks.len()),
        good_at_k: Vec::with_capacity(ks.len()),
        enumerated: 0,
        closed_form: 0,
        prefix_sums: Vec::with_capacity(ks.len()),
        coincidences: 0,
    };
    let mut lemma_total = 0;

    for (i, (path, &k)) in frame.paths.iter().zip(ks).enumerate() {
        if k <= ell0 {
            return Err(Error::Validation(format!("iterate k_{i} = {k} does not exceed ell0 = {ell0}")));
        }
        let slope = index::mean_index_per_iterate(path);
        // μ > μ̂ - n, so iterates with μ̂ > D + n cannot reach the window.
        let horizon = rational::floor(&(rational::int(top + n) / &slope))
            .to_u64()
            .unwrap_or(0);
        let reach = horizon.max(k + 2 * ell0);
        let path = index::validate_path(path, reach.max(path.nondeg_bound()))?;
        let fast = FastPath::new(&path)?;
        let hsum = fast.hyperbolic_sum();

        let mu_k = fast.cz(k as i64);
        if (mu_k - d).abs() > n {
            return Err(Error::CertificateMismatch(format!(
                "orbit {i}: |mu(gamma^k) - d| = {} exceeds n = {n}",
                (mu_k - d).abs()
            )));
        }
        let mut classes = IterateClasses {
            a: k - ell0 - 1,
            d: ell0,
            ..IterateClasses::default()
        };
        for ell in 1..=ell0 {
            let mu_l = fast.cz(ell as i64);
            let below = fast.cz((k - ell) as i64);
            let above = fast.cz((k + ell) as i64);
            if below != d - mu_l || above != d + mu_l {
                return Err(Error::CertificateMismatch(format!(
                    "orbit {i}, ell = {ell}: mu(k-ell) = {below}, mu(k+ell) = {above}, d -/+ mu(ell) = {}/{}",
                    d - mu_l,
                    d + mu_l
                )));
            }
            let low = mu_l < breakpoint;
            if low {
                classes.b2 += 1;
                classes.c2 += 1;
                let even = mu_l.rem_euclid(2) == 0;
                for (good, slot) in [
                    (index::is_good_fast(hsum, k + ell), if even { &mut out.counts.c_e_plus } else { &mut out.counts.c_o_plus }),
                    (index::is_good_fast(hsum, k - ell), if even { &mut out.counts.c_e_minus } else { &mut out.counts.c_o_minus }),
                ] {
                    if good {
                        *slot += 1;
                    }
                }
            } else {
                classes.b1 += 1;
                classes.c1 += 1;
            }
        }
        out.classes.push(classes);

        let good_k = index::is_good_fast(hsum, k);
        let offset = mu_k - d;
        if good_k {
            let even = mu_k.rem_euclid(2) == 0;
            let counts = &mut out.counts;
            let slot = match (offset > threshold, -offset > threshold, even) {
                (true, _, true) => Some(&mut counts.r_e_plus),
                (true, _, false) => Some(&mut counts.r_o_plus),
                (_, true, true) => Some(&mut counts.r_e_minus),
                (_, true, false) => Some(&mut counts.r_o_minus),
                _ => None,
            };
            if let Some(slot) = slot {
                *slot += 1;
            }
        }
        out.offsets.push(offset);
        out.good_at_k.push(good_k);

        let mut prefix = 0;
        let mut enumerated = 0;
        for (ell, mu) in fast.sequence(horizon.max(k)) {
            if !index::is_good_fast(hsum, ell) {
                continue;
            }
            let chi = parity_sign(mu);
            if ell <= k {
                prefix += chi;
            }
            if mu <= top {
                enumerated += chi;
            }
            if ell != k && band.contains(&mu) {
                out.coincidences += 1;
            }
        }
        out.prefix_sums.push(prefix);
        out.enumerated += enumerated;
        lemma_total += euler_prefix(&path, k);
    }

    let c = out.counts;
    out.closed_form = lemma_total - (c.r_e_plus as i64 - c.r_o_plus as i64);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Refuted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::Refuted => "REFUTED",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "CONSISTENT" => Ok(Verdict::Consistent),
            "REFUTED" => Ok(Verdict::Refuted),
            other => Err(Error::Parse(format!("unknown verdict {other:?}"))),
        }
    }
}

/// `Σ_{ℓ≤k_i}χ = Σ k_iχ̂(γ_i) = dχ_± = (-1)^n sχ(B)` with `d = 2sc_B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCheck {
    pub s: Option<i64>,
    pub enumerated: i64,
    pub weighted: Rational,
    pub mean_euler: Rational,
    pub closed: Option<i64>,
}

impl LemmaCheck {
    pub fn holds(&self) -> bool {
        let Some(closed) = self.closed else {
            return false;
        };
        let e = rational::int(self.enumerated);
        e == self.weighted && e == self.mean_euler && self.enumerated == closed
    }
}

/// Everything computed at one of the two paired certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateAnalysis {
    pub window: MorseWindow,
    pub lemma: LemmaCheck,
    /// `Σ_{m ≤ D} (-1)^m b_m`.
    pub homology_sum: i64,
    /// `(-1)^D (Σ(-1)^m c_m - Σ(-1)^m b_m)`, nonnegative by the Morse inequalities.
    pub morse_slack: i64,
    /// The lower estimate for `r^o_+` (odd `n`) or `r^e_+` (even `n`).
    pub lower_estimate: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub orbit_count: usize,
    pub n: usize,
    pub mirrored: bool,
    pub resonance: Resonance,
    pub eta: Rational,
    pub divisor: u64,
    pub ell0: u64,
    /// The `k⁺` and `k⁻` analyses; absent when the run stopped before the solver.
    pub plus: Option<CertificateAnalysis>,
    pub minus: Option<CertificateAnalysis>,
    pub certificate: Option<JumpCertificate>,
    pub lower_estimate: i64,
    pub homology_term: u64,
    pub implied_bound: i64,
    pub nonhyperbolic_witnesses: usize,
    /// Named checks in evaluation order.
    pub checks: Vec<(&'static str, bool)>,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn first_violation(&self) -> Option<&'static str> {
        self.checks.iter().find(|(_, ok)| !ok).map(|(name, _)| *name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundOptions {
    /// Defaults to `2/5`, reduced until `η|χ_±| < 1`.
    pub eta: Option<Rational>,
    /// `N = 2c_B · multiplier`.
    pub multiplier: u64,
    pub search_bound: u64,
    pub min_k1: u64,
    pub strategy: Strategy,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            eta: None,
            multiplier: 1,
            search_bound: 1_000_000_000,
            min_k1: 0,
            strategy: Strategy::Direct,
        }
    }
}

/// Rejects good iterates of index `0` (odd `n`) or `0, ±1` (even `n`).
///
/// Only iterates with `|μ̂| < n + 1` can have such an index.
fn check_index_flags(frame: &Frame<'_>) -> Result<()> {
    let n = frame.n();
    let forbidden = if n % 2 == 1 { 0..=0 } else { -1..=1 };
    for (orbit, path) in frame.system.orbits.iter().zip(&frame.paths) {
        let slope = index::mean_index_per_iterate(path);
        let last = rational::ceil(&(rational::int(n + 1) / &slope)).to_u64().unwrap_or(0);
        let path = index::validate_path(path, last.max(1).max(path.nondeg_bound()))?;
        for k in 1..=last {
            if (&slope * BigInt::from(k)) >= rational::int(n + 1) {
                break;
            }
            let mu = index::cz_index(&path, k)?;
            if forbidden.contains(&mu) && index::is_good(&path, k)? {
                return Err(Error::Validation(format!(
                    "orbit {}: good iterate {k} has index {} (n = {n})",
                    orbit.label,
                    if frame.mirrored { -mu } else { mu }
                )));
            }
        }
    }
    Ok(())
}

fn analyse(frame: &Frame<'_>, d: i64, ks: &[u64], ell0: u64) -> Result<CertificateAnalysis> {
    let base = &frame.system.base;
    let n = frame.n();
    let window = window_in_frame(frame, d, ks, ell0)?;
    let two_c = 2 * base.chern_min() as i64;
    let s = (d % two_c == 0).then_some(d / two_c);
    let mut weighted = Rational::zero();
    for (path, &k) in frame.paths.iter().zip(ks) {
        weighted += path_mean_local_euler(path)? * BigInt::from(k);
    }
    let lemma = LemmaCheck {
        s,
        enumerated: window.prefix_sums.iter().sum(),
        weighted,
        mean_euler: homology::mean_euler_char(base) * BigInt::from(d),
        closed: s.map(|s| parity_sign(n) * s * base.euler_characteristic()),
    };
    let homology_sum = frame.homology_sum(window.top);
    let morse_slack = parity_sign(window.top) * (window.enumerated - homology_sum);
    let lower_estimate = if n % 2 == 1 {
        homology_sum - lemma.enumerated
    } else {
        lemma.enumerated - homology_sum
    };
    Ok(CertificateAnalysis {
        window,
        lemma,
        homology_sum,
        morse_slack,
        lower_estimate,
    })
}

/// Runs the full counting argument and reports whether the orbit count is
/// consistent with the implied multiplicity bound.
pub fn verify_theorem_bound(system: &SystemModel, options: &BoundOptions) -> Result<BoundReport> {
    let frame = Frame::new(system)?;
    check_index_flags(&frame)?;
    let base = &system.base;
    let n = base.n();
    let resonance = resonance_check(system)?;
    let chi = homology::mean_euler_char(base);
    let mut eta = options.eta.clone().unwrap_or_else(|| rational::ratio(2, 5));
    while &eta * chi.abs() >= rational::int(1) {
        eta /= BigInt::from(2);
    }
    let divisor = 2 * base.chern_min() * options.multiplier.max(1);
    let ell0 = ell0(system)?;

    let mut report = BoundReport {
        orbit_count: system.orbits.len(),
        n,
        mirrored: frame.mirrored,
        resonance,
        eta: eta.clone(),
        divisor,
        ell0,
        plus: None,
        minus: None,
        certificate: None,
        lower_estimate: 0,
        homology_term: 0,
        implied_bound: 0,
        nonhyperbolic_witnesses: 0,
        checks: Vec::new(),
        verdict: Verdict::Refuted,
    };
    let resonance_ok = report.resonance.passed();
    report.checks.push(("resonance", resonance_ok));
    if !resonance_ok || system.orbits.is_empty() {
        report.checks.push(("nonempty", !system.orbits.is_empty()));
        return Ok(report);
    }

    let params = JumpParams {
        strategy: options.strategy,
        ..JumpParams::new(eta, ell0, divisor, options.search_bound)
    };
    let cert = jump::find_common_jump(&frame.paths, &params, options.min_k1)?;
    let verified = jump::verify_jump(&frame.paths, &cert, &params).passed();
    let plus = analyse(&frame, cert.d_plus, &cert.k_plus, ell0)?;
    let minus = analyse(&frame, cert.d_minus, &cert.k_minus, ell0)?;

    let (plus_p, plus_m) = plus.window.jump_pair(n);
    let (minus_p, _) = minus.window.jump_pair(n);
    let lower = plus.lower_estimate.max(minus.lower_estimate);
    let homology_term: u64 = if n % 2 == 1 {
        frame.homology(cert.d_plus)
    } else {
        (cert.d_plus - 1..=cert.d_plus + 1).map(|m| frame.homology(m)).sum()
    };
    let implied = 2 * lower + homology_term as i64;

    let (members_p, members_m) = plus.window.jump_members(n);
    let witnesses: BTreeSet<usize> = members_p.iter().chain(&members_m).copied().collect();
    let nonhyp = witnesses.iter().filter(|&&i| !frame.paths[i].is_hyperbolic()).count();

    report.checks.extend([
        ("jump certificate", verified),
        ("morse window (a) = (b)", plus.window.agrees() && minus.window.agrees()),
        ("lemma identity", plus.lemma.holds() && minus.lemma.holds()),
        ("morse inequality", plus.morse_slack >= 0 && minus.morse_slack >= 0),
        ("reflected counts", minus_p == plus_m),
        ("jump count +", plus_p as i64 >= plus.lower_estimate),
        ("jump count -", plus_m as i64 >= minus.lower_estimate),
        ("exclusion", plus.window.coincidences == 0),
        ("non-hyperbolic witnesses", nonhyp == witnesses.len()),
        ("orbit count", system.orbits.len() as i64 >= implied),
    ]);
    report.lower_estimate = lower;
    report.homology_term = homology_term;
    report.implied_bound = implied;
    report.nonhyperbolic_witnesses = nonhyp;
    report.plus = Some(plus);
    report.minus = Some(minus);
    report.certificate = Some(cert);
    if report.first_violation().is_none() {
        report.verdict = Verdict::Consistent;
    }
    Ok(report)
}

/// The largest `L` for which no rotation number `a_j/a_i` of the ellipsoid is
/// degenerate up to `L`: one less than the smallest reduced denominator.
pub fn ellipsoid_nondeg_bound(weights: &[Rational]) -> u64 {
    let mut best = u64::MAX;
    for a in weights {
        for b in weights {
            if a != b && b.is_positive() {
                let q = (a / b).denom().to_u64().unwrap_or(u64::MAX);
                best = best.min(q.saturating_sub(1));
            }
        }
    }
    best
}

/// The irrational ellipsoid with semi-axis weights `a_1, …, a_{n+1}`:
/// orbit `γ_j` rotates by `a_j/a_i` in the `i`-th complex direction.
pub fn ellipsoid_system(weights: &[Rational], l_max: u64) -> Result<SystemModel> {
    if weights.len() < 2 {
        return Err(Error::Validation("an ellipsoid needs at least two weights".into()));
    }
    if weights.iter().any(|a| !a.is_positive()) {
        return Err(Error::Validation("weights must be positive".into()));
    }
    for (i, a) in weights.iter().enumerate() {
        if weights[..i].contains(a) {
            return Err(Error::Validation(format!(
                "weights must be pairwise distinct, {} repeats",
                rational::fmt_rational(a)
            )));
        }
    }
    let n = weights.len() - 1;
    let mut orbits = Vec::with_capacity(weights.len());
    for (j, a_j) in weights.iter().enumerate() {
        let elliptic = weights
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, a_i)| a_j / a_i)
            .collect();
        orbits.push(OrbitModel {
            label: format!("gamma_{}", j + 1),
            path: PathModel::certified(1, elliptic, vec![], l_max)?,
            period: a_j.clone(),
        });
    }
    let flags = [
        Flag::IndexPositive,
        if n % 2 == 1 { Flag::NoIndex0 } else { Flag::NoIndex0Pm1 },
        Flag::FillableF,
    ]
    .into_iter()
    .collect();
    SystemModel::new(orbits, BaseManifold::complex_projective(n), IndexSign::Positive, flags)
}
