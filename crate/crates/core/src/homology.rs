//! Ranks of the positive equivariant symplectic homology of prequantization
//! bundles, read off from the rational Betti numbers of the base.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rational::{parity_sign, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonotoneSign {
    Positive,
    Negative,
}

impl fmt::Display for MonotoneSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonotoneSign::Positive => "positive",
            MonotoneSign::Negative => "negative",
        })
    }
}

impl FromStr for MonotoneSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "positive" => Ok(MonotoneSign::Positive),
            "negative" => Ok(MonotoneSign::Negative),
            other => Err(Error::Parse(format!("expected positive|negative, got {other:?}"))),
        }
    }
}

/// A closed symplectic base `B^{2n}` described by its rational Betti numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseManifold {
    n: usize,
    betti: Vec<u64>,
    chern_min: u64,
    monotone_sign: MonotoneSign,
}

impl BaseManifold {
    pub fn new(n: usize, betti: Vec<u64>, chern_min: u64, monotone_sign: MonotoneSign) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("base half-dimension n must be positive".into()));
        }
        if betti.len() != 2 * n + 1 {
            return Err(Error::Validation(format!(
                "expected {} Betti numbers b_0..b_{}, got {}",
                2 * n + 1,
                2 * n,
                betti.len()
            )));
        }
        if betti[0] == 0 {
            return Err(Error::Validation("b_0 must be at least 1".into()));
        }
        if let Some(i) = (0..=2 * n).find(|&i| betti[i] != betti[2 * n - i]) {
            return Err(Error::Validation(format!(
                "Poincaré duality fails: b_{i} = {} but b_{} = {}",
                betti[i],
                2 * n - i,
                betti[2 * n - i]
            )));
        }
        if chern_min == 0 {
            return Err(Error::Validation("minimal Chern number must be positive".into()));
        }
        Ok(Self {
            n,
            betti,
            chern_min,
            monotone_sign,
        })
    }

    /// `ℂP^n` with `c_B = n + 1`.
    pub fn complex_projective(n: usize) -> Self {
        let betti = (0..=2 * n).map(|i| u64::from(i % 2 == 0)).collect();
        Self::new(n, betti, n as u64 + 1, MonotoneSign::Positive).expect("ℂP^n data is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn betti(&self) -> &[u64] {
        &self.betti
    }

    /// `dim H_i(B; ℚ)`, zero outside `[0, 2n]`.
    pub fn betti_at(&self, i: i64) -> u64 {
        if i < 0 || i > 2 * self.n as i64 {
            0
        } else {
            self.betti[i as usize]
        }
    }

    pub fn chern_min(&self) -> u64 {
        self.chern_min
    }

    pub fn monotone_sign(&self) -> MonotoneSign {
        self.monotone_sign
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(i, &b)| parity_sign(i as i64) * b as i64)
            .sum()
    }

    pub fn total_rank(&self) -> u64 {
        self.betti.iter().sum()
    }

    pub fn odd_betti_vanish(&self) -> bool {
        self.betti.iter().skip(1).step_by(2).all(|&b| b == 0)
    }

    /// Topological hypotheses that can be checked from the data alone:
    /// `c_B > n/2`, and `H_odd = 0` or `c_B > n`. Returns the violated ones.
    pub fn hypothesis_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if 2 * self.chern_min <= self.n as u64 {
            out.push(format!("c_B = {} does not exceed n/2", self.chern_min));
        }
        if !self.odd_betti_vanish() && self.chern_min <= self.n as u64 {
            out.push("odd Betti numbers do not vanish and c_B <= n".to_string());
        }
        out
    }
}

/// `dim HC^0_m(M)`: a copy of `H_*(B)` shifted by `2jc_B - n` for every
/// `j ≥ 1` (positive monotone), or by `n - 2jc_B` (negative monotone).
pub fn hc_rank(base: &BaseManifold, m: i64) -> u64 {
    let n = base.n as i64;
    let period = 2 * base.chern_min as i64;
    // Only indices in [0, 2n] contribute, so j ranges over a finite window.
    let (lo, hi) = match base.monotone_sign {
        // i = m - j·period + n ∈ [0, 2n]  ⇔  j ∈ [(m - n)/period, (m + n)/period]
        MonotoneSign::Positive => (div_ceil(m - n, period), (m + n).div_euclid(period)),
        // i = m + j·period - n ∈ [0, 2n]  ⇔  j ∈ [(n - m)/period, (3n - m)/period]
        MonotoneSign::Negative => (div_ceil(n - m, period), (3 * n - m).div_euclid(period)),
    };
    (lo.max(1)..=hi)
        .map(|j| match base.monotone_sign {
            MonotoneSign::Positive => base.betti_at(m - j * period + n),
            MonotoneSign::Negative => base.betti_at(m + j * period - n),
        })
        .sum()
}

/// `Σ_{m=lo}^{hi} (-1)^m dim HC^0_m(M)`.
///
/// Every shifted copy of `H_*(B)` lying inside the range contributes
/// `(-1)^n χ(B)`; only copies straddling an endpoint are summed term by term.
pub fn alternating_sum(base: &BaseManifold, lo: i64, hi: i64) -> i64 {
    if lo > hi {
        return 0;
    }
    let n = base.n as i64;
    let period = 2 * base.chern_min as i64;
    // Copy j ≥ 1 occupies degrees [s_j, s_j + 2n].
    let start = |j: i64| match base.monotone_sign {
        MonotoneSign::Positive => j * period - n,
        MonotoneSign::Negative => n - j * period,
    };
    // The j with s_j in [a, b].
    let copies = |a: i64, b: i64| -> (i64, i64) {
        let (lo_j, hi_j) = match base.monotone_sign {
            MonotoneSign::Positive => (div_ceil(a + n, period), (b + n).div_euclid(period)),
            MonotoneSign::Negative => (div_ceil(n - b, period), (n - a).div_euclid(period)),
        };
        (lo_j.max(1), hi_j)
    };
    let (touch_lo, touch_hi) = copies(lo - 2 * n, hi);
    let (full_lo, full_hi) = copies(lo, hi - 2 * n);
    let full = (full_hi - full_lo + 1).max(0);
    let mut total = full * parity_sign(n) * base.euler_characteristic();
    for j in touch_lo..=touch_hi {
        if full > 0 && (full_lo..=full_hi).contains(&j) {
            continue;
        }
        let s = start(j);
        total += (0..=2 * n)
            .filter(|i| (lo..=hi).contains(&(s + i)))
            .map(|i| parity_sign(s + i) * base.betti_at(i) as i64)
            .sum::<i64>();
    }
    total
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// `χ_±(M) = (-1)^n χ(B) / (2c_B)`.
///
/// Only the positive-monotone value appears in closed form in the
/// literature; for negative-monotone bases the same expression follows from
/// the shifted-copy description of the homology by the same window average,
/// and [`mean_euler_char_is_derived`] reports this.
pub fn mean_euler_char(base: &BaseManifold) -> Rational {
    let sign = parity_sign(base.n as i64);
    Rational::new(
        BigInt::from(sign * base.euler_characteristic()),
        BigInt::from(2 * base.chern_min),
    )
}

pub fn mean_euler_char_is_derived(base: &BaseManifold) -> bool {
    base.monotone_sign == MonotoneSign::Negative
}

/// `(1/2c_B) Σ_{m=start}^{start+2c_B-1} (-1)^m b_m`, the average over one
/// period of the homology ranks.
pub fn windowed_mean_euler(base: &BaseManifold, start: i64) -> Rational {
    let period = 2 * base.chern_min as i64;
    let sum: i64 = (start..start + period)
        .map(|m| parity_sign(m) * hc_rank(base, m) as i64)
        .sum();
    Rational::new(BigInt::from(sum), BigInt::from(period))
}

/// Lower bound on the number of closed orbits:
/// `χ(B) + 2 b_n` for odd `n`, `χ(B) + 4 b_{n-1}` for even `n`.
pub fn r_bound(base: &BaseManifold) -> i64 {
    let n = base.n as i64;
    if n % 2 == 1 {
        base.euler_characteristic() + 2 * base.betti_at(n) as i64
    } else {
        base.euler_characteristic() + 4 * base.betti_at(n - 1) as i64
    }
}

/// Lower bound on the number of non-hyperbolic orbits: `r_B - b_n`.
pub fn r_nonhyp_bound(base: &BaseManifold) -> i64 {
    r_bound(base) - base.betti_at(base.n as i64) as i64
}

/// Orbit count for degenerate forms with `μ_- ≥ q`, clipped at zero.
pub fn deg_lower_bound(n: u64, q: i64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Validation("n must be at least 1".into()));
    }
    let half = (n as i64 + 2) / 2; // ⌈(n+1)/2⌉
    let r = if n % 2 == 0 && q.rem_euclid(2) == 1 {
        q - half
    } else {
        q + 1 - half
    };
    Ok(r.max(0) as u64)
}
