//! Common index jumps for finite families of strongly nondegenerate paths.
//!
//! Given paths `Φ_1, …, Φ_r` with positive mean index, the solver finds
//! iterates `k⁺`, `k⁻` and integers `d⁺`, `d⁻`, all divisible by `N`, such that
//!
//! * (i)   `|μ̂(Φ_i^{k_i^±}) - d^±| < η`, with `μ̂ = μ = d^±` for hyperbolic paths,
//! * (ii)  `μ(Φ_i^{k_i^± + ℓ}) = d^± + μ(Φ_i^ℓ)` for `1 ≤ |ℓ| ≤ ℓ₀`,
//! * (iii) `μ(Φ_i^{k_i^-}) - d^- = -(μ(Φ_i^{k_i^+}) - d^+)`.
//!
//! Writing `kλ = c + e` with `c` the nearest integer, every elliptic block
//! contributes `2c` to `d` and `sign(e)` to `μ(Φ^k) - d`. The search keeps
//! `0 < |e| < ε ≤ ε₀`, which forces (ii) block by block, and asks all paths
//! to share the integer `d`. Verification is done separately, through the
//! index calculus only.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::index::{self, FastPath, PathModel, WORD_LIMIT};
use crate::rational::{self, Rational};

/// How the `k⁺`/`k⁻` constraint system is posed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Scan directly for vectors meeting the elliptic tolerance, a shared
    /// nearest integer and, for `k⁻`, the reflected sign pattern.
    #[default]
    Direct,
    /// The textbook system: `ε` also bounded by `1/(4Σ#elliptic)`, pairwise
    /// `|k_1Δ_1 - k_iΔ_i| < 1/16`, and `k⁻ = k′ - k⁺` with `‖k′λ‖ < δ`.
    Minkowski,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Direct => "direct",
            Strategy::Minkowski => "minkowski",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Strategy::Direct),
            "minkowski" => Ok(Strategy::Minkowski),
            other => Err(Error::Parse(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpParams {
    pub eta: Rational,
    pub ell0: u64,
    pub divisor: u64,
    pub search_bound: u64,
    /// Tolerance for `k′` under [`Strategy::Minkowski`]; derived from `k⁺` when absent.
    pub delta: Option<Rational>,
    pub strategy: Strategy,
}

impl JumpParams {
    pub fn new(eta: Rational, ell0: u64, divisor: u64, search_bound: u64) -> Self {
        Self {
            eta,
            ell0,
            divisor,
            search_bound,
            delta: None,
            strategy: Strategy::Direct,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let half = rational::ratio(1, 2);
        if !self.eta.is_positive() || self.eta >= half {
            return Err(Error::Validation(format!(
                "eta must lie in (0, 1/2), got {}",
                rational::fmt_rational(&self.eta)
            )));
        }
        if self.ell0 == 0 || self.divisor == 0 || self.search_bound == 0 {
            return Err(Error::Validation("ell0, divisor and search bound must be positive".into()));
        }
        if let Some(delta) = &self.delta {
            if !delta.is_positive() {
                return Err(Error::Validation("delta must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpCertificate {
    pub d_plus: i64,
    pub k_plus: Vec<u64>,
    pub d_minus: i64,
    pub k_minus: Vec<u64>,
    pub params: JumpParams,
}

/// `ε₀ = min_{0<ℓ≤ℓ₀} min_q ‖ℓλ_q‖` over every elliptic block of every path.
///
/// `Ok(None)` means there is no elliptic block, so nothing constrains `ε`.
pub fn epsilon0(paths: &[PathModel], ell0: u64) -> Result<Option<Rational>> {
    let mut best: Option<Rational> = None;
    for path in paths {
        for (block, lambda) in path.elliptic().iter().enumerate() {
            for ell in 1..=ell0 {
                let dist = rational::dist_to_int(&(lambda * BigInt::from(ell)));
                if dist.is_zero() {
                    return Err(Error::DegenerateIterate { block, iterate: ell });
                }
                if best.as_ref().is_none_or(|b| dist < *b) {
                    best = Some(dist);
                }
            }
        }
    }
    Ok(best)
}

/// The elliptic tolerance used by the search.
///
/// `ε = min(ε₀, η/(2·max half_dim))`, and additionally `≤ 1/(4Σ#elliptic)`
/// under [`Strategy::Minkowski`]. `None` when no path has an elliptic block.
pub fn search_epsilon(paths: &[PathModel], params: &JumpParams) -> Result<Option<Rational>> {
    let Some(eps0) = epsilon0(paths, params.ell0)? else {
        return Ok(None);
    };
    let max_dim = paths.iter().map(PathModel::half_dim).max().unwrap_or(1).max(1);
    let mut eps = eps0.min(&params.eta / BigInt::from(2 * max_dim as u64));
    if params.strategy == Strategy::Minkowski {
        let total: usize = paths.iter().map(|p| p.elliptic().len()).sum();
        eps = eps.min(rational::ratio(1, 4 * total as i64));
    }
    Ok(Some(eps))
}

/// Re-certifies every path up to `max(k_i^±) + ℓ₀`.
pub fn certified_paths(paths: &[PathModel], cert: &JumpCertificate) -> Result<Vec<PathModel>> {
    paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let reach = cert.k_plus.get(i).copied().unwrap_or(0).max(cert.k_minus.get(i).copied().unwrap_or(0))
                + cert.params.ell0;
            index::validate_path(p, reach.max(p.nondeg_bound()))
        })
        .collect()
}

/// A tolerance `num/den` with both parts below `2^62`.
#[derive(Debug, Clone, Copy)]
struct Tol {
    num: i128,
    den: i128,
}

impl Tol {
    fn from_rational(x: &Rational) -> Result<Self> {
        let num = rational::to_i128(x.numer(), "tolerance numerator")?;
        let den = rational::to_i128(x.denom(), "tolerance denominator")?;
        if num >= WORD_LIMIT || den >= WORD_LIMIT {
            return Err(Error::Overflow("tolerance exceeds the 62-bit word range".into()));
        }
        Ok(Self { num, den })
    }

    /// `|s|/q < num/den`.
    fn admits(&self, s: i128, q: i128) -> bool {
        s.abs() * self.den < self.num * q
    }
}

/// Per-path data for the scan.
struct ScanPath {
    fast: FastPath,
    slope: Rational,
    slope_f64: f64,
    /// Largest iterate that can be certified with room for `ℓ₀` more.
    cap: u64,
}

/// Outcome of evaluating one path at one iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Landing {
    d: i128,
    sign_sum: i64,
}

impl ScanPath {
    /// `(d, Σ sign e)` when every elliptic residue satisfies `0 < |e| < tol`.
    fn land(&self, k: u64, tol: Option<Tol>) -> Option<Landing> {
        let k = k as i128;
        let mut d = 2 * self.fast.loop_maslov() * k + self.fast.hyperbolic_sum() * k;
        let mut sign_sum = 0;
        for &(p, q) in self.fast.blocks() {
            let kp = k * p;
            let r = kp.rem_euclid(q);
            let s = if 2 * r < q { r } else { r - q };
            if s == 0 || 2 * s.abs() == q || !tol.expect("elliptic blocks carry a tolerance").admits(s, q) {
                return None;
            }
            d += 2 * ((kp - s) / q);
            sign_sum += s.signum() as i64;
        }
        Some(Landing { d, sign_sum })
    }

    /// Multiples of `n` whose nearest-integer landing could equal `d`.
    fn candidates(&self, d: i128, n: u64, ell0: u64) -> impl Iterator<Item = u64> {
        let span = n as f64 * self.slope_f64;
        let lo = (((d as f64) - 1.0) / span).floor() as i64 - 1;
        let hi = (((d as f64) + 1.0) / span).ceil() as i64 + 1;
        let cap = self.cap;
        (lo.max(1)..=hi.max(0))
            .map(move |m| m as u64 * n)
            .filter(move |&k| k > ell0 && k <= cap)
    }
}

struct Scan<'a> {
    paths: Vec<ScanPath>,
    params: &'a JumpParams,
    eps: Option<Tol>,
    eps_rational: Option<Rational>,
}

impl<'a> Scan<'a> {
    fn new(paths: &[PathModel], params: &'a JumpParams) -> Result<Self> {
        let eps_rational = search_epsilon(paths, params)?;
        let eps = eps_rational.as_ref().map(Tol::from_rational).transpose()?;
        let mut scan_paths = Vec::with_capacity(paths.len());
        for p in paths {
            let slope = index::mean_index_per_iterate(p);
            let slope_f64 = slope.to_f64().unwrap_or(f64::NAN);
            let cap = p.max_certifiable().saturating_sub(params.ell0);
            scan_paths.push(ScanPath {
                fast: FastPath::new(p)?,
                slope,
                slope_f64,
                cap,
            });
        }
        Ok(Self {
            paths: scan_paths,
            params,
            eps,
            eps_rational,
        })
    }

    fn n(&self) -> u64 {
        self.params.divisor
    }

    /// All completions `(k_2, …, k_r)` of `k_1` landing on `d`, in lexicographic
    /// order, with their sign sums.
    fn completions(&self, k1: u64, first: Landing, tol: Option<Tol>, want: Option<&[i64]>) -> Vec<(Vec<u64>, Vec<i64>)> {
        let mut per_path: Vec<Vec<(u64, i64)>> = Vec::with_capacity(self.paths.len());
        per_path.push(vec![(k1, first.sign_sum)]);
        for (i, sp) in self.paths.iter().enumerate().skip(1) {
            let options: Vec<(u64, i64)> = sp
                .candidates(first.d, self.n(), self.params.ell0)
                .filter_map(|k| sp.land(k, tol).map(|l| (k, l)))
                .filter(|(_, l)| l.d == first.d)
                .filter(|(_, l)| want.is_none_or(|w| w[i] == l.sign_sum))
                .map(|(k, l)| (k, l.sign_sum))
                .collect();
            if options.is_empty() {
                return Vec::new();
            }
            per_path.push(options);
        }
        let mut out = vec![(Vec::new(), Vec::new())];
        for options in per_path {
            out = out
                .into_iter()
                .flat_map(|(ks, ss)| {
                    options.iter().map(move |&(k, s)| {
                        let mut ks = ks.clone();
                        let mut ss = ss.clone();
                        ks.push(k);
                        ss.push(s);
                        (ks, ss)
                    })
                })
                .collect();
        }
        out
    }

    /// `|k_1Δ_1 - k_iΔ_i| < bound` for all `i`.
    fn slopes_agree(&self, ks: &[u64], bound: &Rational) -> bool {
        let first = &self.paths[0].slope * BigInt::from(ks[0]);
        self.paths
            .iter()
            .zip(ks)
            .skip(1)
            .all(|(sp, &k)| (&first - &sp.slope * BigInt::from(k)).abs() < *bound)
    }

    /// Ascending scan over `k_1 ∈ NZ`, `lower < k_1 ≤ search_bound`.
    fn scan_first(
        &self,
        lower: u64,
        tol: Option<Tol>,
        want: Option<&[i64]>,
        mut accept: impl FnMut(u64, i128, Vec<u64>) -> bool,
    ) -> bool {
        let n = self.n();
        let first = &self.paths[0];
        let limit = self.params.search_bound.min(first.cap);
        let mut m = lower / n + 1;
        while m.saturating_mul(n) <= limit {
            let k1 = m * n;
            m += 1;
            if k1 <= self.params.ell0 {
                continue;
            }
            let Some(landing) = first.land(k1, tol) else {
                continue;
            };
            if landing.d.rem_euclid(n as i128) != 0 || landing.d <= 0 {
                continue;
            }
            if want.is_some_and(|w| w[0] != landing.sign_sum) {
                continue;
            }
            for (ks, _) in self.completions(k1, landing, tol, want) {
                if accept(k1, landing.d, ks) {
                    return true;
                }
            }
        }
        false
    }

    fn sign_sums(&self, ks: &[u64]) -> Vec<i64> {
        self.paths
            .iter()
            .zip(ks)
            .map(|(sp, &k)| sp.land(k, self.eps).map_or(0, |l| l.sign_sum))
            .collect()
    }

    /// Smallest `k⁻` whose sign pattern is `want` (direct construction).
    fn find_minus_direct(&self, want: &[i64]) -> Option<(i128, Vec<u64>)> {
        let mut found = None;
        self.scan_first(0, self.eps, Some(want), |_, d, ks| {
            found = Some((d, ks));
            true
        });
        found
    }

    /// `k⁻ = k′ - k⁺` with `‖k′λ‖ < δ` and `|k′_1Δ_1 - k′_iΔ_i| < 1/16`.
    fn find_minus_minkowski(&self, k_plus: &[u64], d_plus: i128) -> Result<Option<(i128, Vec<u64>)>> {
        let want: Vec<i64> = self.sign_sums(k_plus).iter().map(|s| -s).collect();
        let delta = match (&self.params.delta, &self.eps_rational) {
            (Some(d), _) => Some(d.clone()),
            (None, None) => None,
            (None, Some(eps)) => Some(self.auto_delta(k_plus, eps)),
        };
        let delta_tol = delta.as_ref().map(Tol::from_rational).transpose()?;
        let sixteenth = rational::ratio(1, 16);
        let mut found = None;
        self.scan_first(k_plus[0] + self.params.ell0, delta_tol, None, |_, d_prime, ks_prime| {
            if !self.slopes_agree(&ks_prime, &sixteenth) {
                return false;
            }
            let Some(k_minus) = ks_prime
                .iter()
                .zip(k_plus)
                .map(|(&a, &b)| a.checked_sub(b).filter(|&k| k > self.params.ell0))
                .collect::<Option<Vec<u64>>>()
            else {
                return false;
            };
            let d_minus = d_prime - d_plus;
            let lands = self.paths.iter().zip(&k_minus).enumerate().all(|(i, (sp, &k))| {
                sp.land(k, self.eps)
                    .is_some_and(|l| l.d == d_minus && l.sign_sum == want[i])
            });
            if lands && d_minus > 0 {
                found = Some((d_minus, k_minus));
                true
            } else {
                false
            }
        });
        Ok(found)
    }

    /// `δ = min_{i,q} min(‖k_i⁺λ_iq‖, ε - ‖k_i⁺λ_iq‖)`.
    fn auto_delta(&self, k_plus: &[u64], eps: &Rational) -> Rational {
        let mut best = eps.clone();
        for (sp, &k) in self.paths.iter().zip(k_plus) {
            for &(p, q) in sp.fast.blocks() {
                let r = (k as i128 * p).rem_euclid(q);
                let s = r.min(q - r);
                let dist = Rational::new(BigInt::from(s), BigInt::from(q));
                let room = eps - &dist;
                best = best.min(dist).min(room);
            }
        }
        best
    }
}

/// Finds the certificate with the smallest `k_1⁺ > min_k1`, then the
/// lexicographically smallest `k⁺`, then the smallest `k_1⁻`.
pub fn find_common_jump(paths: &[PathModel], params: &JumpParams, min_k1: u64) -> Result<JumpCertificate> {
    params.validate()?;
    if paths.is_empty() {
        return Err(Error::Validation("at least one path is required".into()));
    }
    for (i, p) in paths.iter().enumerate() {
        if !index::mean_index_per_iterate(p).is_positive() {
            return Err(Error::HypothesisViolated(format!(
                "path {i} has mean index {} <= 0",
                rational::fmt_rational(&index::mean_index_per_iterate(p))
            )));
        }
    }
    let scan = Scan::new(paths, params)?;
    let sixteenth = rational::ratio(1, 16);
    let mut minus_cache: HashMap<Vec<i64>, Option<(i128, Vec<u64>)>> = HashMap::new();
    let mut result: Option<Result<JumpCertificate>> = None;

    scan.scan_first(min_k1, scan.eps, None, |_, d_plus, k_plus| {
        if params.strategy == Strategy::Minkowski && !scan.slopes_agree(&k_plus, &sixteenth) {
            return false;
        }
        let minus = match params.strategy {
            Strategy::Direct => {
                let want: Vec<i64> = scan.sign_sums(&k_plus).iter().map(|s| -s).collect();
                minus_cache
                    .entry(want.clone())
                    .or_insert_with(|| scan.find_minus_direct(&want))
                    .clone()
            }
            Strategy::Minkowski => match scan.find_minus_minkowski(&k_plus, d_plus) {
                Ok(m) => m,
                Err(e) => {
                    result = Some(Err(e));
                    return true;
                }
            },
        };
        let Some((d_minus, k_minus)) = minus else {
            return false;
        };
        result = Some(Ok(JumpCertificate {
            d_plus: d_plus as i64,
            k_plus,
            d_minus: d_minus as i64,
            k_minus,
            params: params.clone(),
        }));
        true
    });

    result.unwrap_or(Err(Error::SearchExhausted {
        bound: params.search_bound,
    }))
}

/// One named check of [`verify_jump`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn record(checks: &mut Vec<CheckOutcome>, name: &'static str, msg: Option<String>) {
    checks.push(CheckOutcome {
        name,
        passed: msg.is_none(),
        counterexample: msg,
    });
}

/// Offset `ℓ` visiting order: `1, -1, 2, -2, …`.
fn offsets(ell0: u64) -> impl Iterator<Item = i64> {
    (1..=ell0 as i64).flat_map(|l| [l, -l])
}

/// Checks conclusions (i)–(iii) and divisibility using the index calculus only.
pub fn verify_jump(paths: &[PathModel], cert: &JumpCertificate, params: &JumpParams) -> VerifyReport {
    let mut checks = Vec::new();
    let n = params.divisor.max(1);

    let shape_ok = cert.k_plus.len() == paths.len() && cert.k_minus.len() == paths.len();
    record(
        &mut checks,
        "shape",
        (!shape_ok).then(|| {
            format!(
                "{} paths but {} k+ and {} k- entries",
                paths.len(),
                cert.k_plus.len(),
                cert.k_minus.len()
            )
        }),
    );
    if !shape_ok {
        return VerifyReport { checks };
    }

    let divisible = {
        let mut bad = None;
        for (label, v) in [("d+", cert.d_plus), ("d-", cert.d_minus)] {
            if v <= 0 || v % n as i64 != 0 {
                bad.get_or_insert(format!("{label} = {v}"));
            }
        }
        for (label, ks) in [("k+", &cert.k_plus), ("k-", &cert.k_minus)] {
            for (i, &k) in ks.iter().enumerate() {
                if k == 0 || k % n != 0 {
                    bad.get_or_insert(format!("{label}[{i}] = {k}"));
                }
            }
        }
        bad
    };
    record(&mut checks, "divisibility", divisible);

    let low = cert
        .k_plus
        .iter()
        .chain(&cert.k_minus)
        .position(|&k| k <= params.ell0)
        .map(|pos| format!("iterate entry {pos} is not above ell0 = {}", params.ell0));
    record(&mut checks, "window", low);
    if checks.iter().any(|c| !c.passed) {
        return VerifyReport { checks };
    }

    let certified = match certified_paths(paths, cert) {
        Ok(p) => p,
        Err(e) => {
            record(&mut checks, "nondegeneracy", Some(e.to_string()));
            return VerifyReport { checks };
        }
    };
    record(&mut checks, "nondegeneracy", None);

    let sides = [("+", cert.d_plus, &cert.k_plus), ("-", cert.d_minus, &cert.k_minus)];

    let mut rounding = None;
    let mut cond_i = None;
    for (side, d, ks) in sides {
        for (i, (p, &k)) in certified.iter().zip(ks).enumerate() {
            let mean = index::mean_index(p, k);
            if rational::nearest_int(&mean).is_none() {
                rounding.get_or_insert(format!(
                    "AmbiguousRounding: path {i}, side {side}: mean index {} is a half-integer",
                    rational::fmt_rational(&mean)
                ));
            }
            let gap = (&mean - rational::int(d)).abs();
            let ok = if p.is_hyperbolic() {
                let mu = index::cz_index(p, k).ok();
                gap.is_zero() && mu == Some(d)
            } else {
                gap < params.eta
            };
            if !ok {
                cond_i.get_or_insert(format!(
                    "path {i}, side {side}: mean index {} vs d = {d}",
                    rational::fmt_rational(&mean)
                ));
            }
        }
    }
    record(&mut checks, "rounding", rounding);
    record(&mut checks, "(i)", cond_i);

    let mut cond_ii = None;
    'outer: for (side, d, ks) in sides {
        for (i, (p, &k)) in certified.iter().zip(ks).enumerate() {
            for ell in offsets(params.ell0) {
                let lhs = index::cz_index(p, (k as i64 + ell) as u64);
                let rhs = index::cz_index_signed(p, ell).map(|m| d + m);
                match (lhs, rhs) {
                    (Ok(a), Ok(b)) if a == b => {}
                    (a, b) => {
                        cond_ii = Some(format!(
                            "path {i}, side {side}, ell = {ell}: mu(k+ell) = {a:?}, d + mu(ell) = {b:?}"
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    record(&mut checks, "(ii)", cond_ii);

    let mut cond_iii = None;
    for (i, ((p, &kp), &km)) in certified.iter().zip(&cert.k_plus).zip(&cert.k_minus).enumerate() {
        let plus = index::cz_index(p, kp).map(|m| m - cert.d_plus);
        let minus = index::cz_index(p, km).map(|m| m - cert.d_minus);
        match (plus, minus) {
            (Ok(a), Ok(b)) if a == -b => {}
            (a, b) => {
                cond_iii = Some(format!(
                    "path {i}: mu(k-) - d- = {b:?} but mu(k+) - d+ = {a:?}"
                ));
                break;
            }
        }
    }
    record(&mut checks, "(iii)", cond_iii);

    VerifyReport { checks }
}

/// `‖λ(k⁻ + k⁺)‖` over all blocks, for the reflection property.
pub fn reflection_defect(paths: &[PathModel], cert: &JumpCertificate) -> Rational {
    let mut worst = Rational::zero();
    for (p, (&kp, &km)) in paths.iter().zip(cert.k_plus.iter().zip(&cert.k_minus)) {
        for lambda in p.elliptic() {
            let d = rational::dist_to_int(&(lambda * BigInt::from(kp + km)));
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// `max ‖k_i^±λ_iq‖` over the certificate; below `ε` for solver output.
pub fn max_residue(paths: &[PathModel], ks: &[u64]) -> Rational {
    let mut worst = Rational::zero();
    for (p, &k) in paths.iter().zip(ks) {
        for lambda in p.elliptic() {
            worst = worst.max(rational::dist_to_int(&(lambda * BigInt::from(k))));
        }
    }
    worst
}

/// `‖x‖ < 1` helper used by tests of the divisor-restart sequence.
pub fn is_unit_interval(x: &Rational) -> bool {
    !x.is_negative() && *x < Rational::one()
}
