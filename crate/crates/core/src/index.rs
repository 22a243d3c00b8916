//! Conley–Zehnder and mean indices of iterated symplectic paths in normal form.
//!
//! A path is modelled up to homotopy as a loop of Maslov winding `ν`, a
//! direct sum of elliptic rotations `exp(2πiλt)` and hyperbolic blocks whose
//! index grows linearly with slope `h`. Irrational rotation numbers are
//! replaced by exact rationals together with a certified iterate bound up to
//! which no `ℓλ` is an integer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathModel {
    loop_maslov: i64,
    elliptic: Vec<Rational>,
    hyperbolic: Vec<i64>,
    nondeg_bound: u64,
}

impl PathModel {
    /// An uncertified model. Index evaluation needs [`validate_path`] first.
    pub fn new(loop_maslov: i64, elliptic: Vec<Rational>, hyperbolic: Vec<i64>) -> Self {
        Self {
            loop_maslov,
            elliptic,
            hyperbolic,
            nondeg_bound: 0,
        }
    }

    /// Builds and certifies in one step.
    pub fn certified(
        loop_maslov: i64,
        elliptic: Vec<Rational>,
        hyperbolic: Vec<i64>,
        l_max: u64,
    ) -> Result<Self> {
        validate_path(&Self::new(loop_maslov, elliptic, hyperbolic), l_max)
    }

    pub fn loop_maslov(&self) -> i64 {
        self.loop_maslov
    }

    pub fn elliptic(&self) -> &[Rational] {
        &self.elliptic
    }

    pub fn hyperbolic(&self) -> &[i64] {
        &self.hyperbolic
    }

    pub fn half_dim(&self) -> usize {
        self.elliptic.len() + self.hyperbolic.len()
    }

    pub fn nondeg_bound(&self) -> u64 {
        self.nondeg_bound
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.elliptic.is_empty()
    }

    pub fn hyperbolic_sum(&self) -> i64 {
        self.hyperbolic.iter().sum()
    }

    /// The largest `L` for which this path could be certified: one less than
    /// the smallest elliptic denominator.
    pub fn max_certifiable(&self) -> u64 {
        self.elliptic
            .iter()
            .map(|l| l.denom().to_u64().unwrap_or(u64::MAX).saturating_sub(1))
            .min()
            .unwrap_or(u64::MAX)
    }

    fn check_iterate(&self, k: u64) -> Result<()> {
        if k == 0 {
            return Err(Error::Validation("iterates are numbered from 1".into()));
        }
        if k > self.nondeg_bound {
            return Err(Error::IterateOutOfCertifiedRange {
                iterate: k,
                bound: self.nondeg_bound,
            });
        }
        Ok(())
    }
}

/// Certifies `ℓλ ∉ ℤ` for every elliptic block and every `1 ≤ ℓ ≤ l_max`.
///
/// For `λ = p/q` in lowest terms, `ℓλ` is integral exactly when `q | ℓ`, so the
/// first degenerate iterate is `ℓ = q`.
pub fn validate_path(path: &PathModel, l_max: u64) -> Result<PathModel> {
    if l_max == 0 {
        return Err(Error::Validation("nondegeneracy bound must be at least 1".into()));
    }
    for (block, lambda) in path.elliptic.iter().enumerate() {
        let q = lambda.denom();
        if *q <= BigInt::from(l_max) {
            let iterate = q.to_u64().expect("denominator bounded by l_max");
            return Err(Error::DegenerateIterate { block, iterate });
        }
    }
    let mut out = path.clone();
    out.nondeg_bound = l_max;
    Ok(out)
}

/// `μ(Φ^k)` for `1 ≤ k ≤ nondeg_bound`.
pub fn cz_index(path: &PathModel, k: u64) -> Result<i64> {
    path.check_iterate(k)?;
    let kk = BigInt::from(k);
    let mut total = BigInt::from(2 * path.loop_maslov) * &kk;
    for (block, lambda) in path.elliptic.iter().enumerate() {
        let x = lambda * &kk;
        if x.is_integer() {
            return Err(Error::DegenerateIterate { block, iterate: k });
        }
        let odd = rational::floor(&x.abs()) * 2 + 1;
        if x.is_negative() {
            total -= odd;
        } else {
            total += odd;
        }
    }
    total += BigInt::from(path.hyperbolic_sum()) * kk;
    rational::to_i64(&total, "Conley-Zehnder index")
}

/// `μ(Φ^k)` for a signed iterate, using `μ(Φ^{-k}) = -μ(Φ^k)`.
pub fn cz_index_signed(path: &PathModel, k: i64) -> Result<i64> {
    if k < 0 {
        Ok(-cz_index(path, k.unsigned_abs())?)
    } else {
        cz_index(path, k as u64)
    }
}

/// `μ̂(Φ^k) = k(2ν + Σ 2λ_q + Σ h_p)`.
pub fn mean_index(path: &PathModel, k: u64) -> Rational {
    mean_index_per_iterate(path) * BigInt::from(k)
}

/// `μ̂(Φ)`.
pub fn mean_index_per_iterate(path: &PathModel) -> Rational {
    let mut total = rational::int(2 * path.loop_maslov + path.hyperbolic_sum());
    for lambda in &path.elliptic {
        total += lambda * BigInt::from(2);
    }
    total
}

/// Whether `Φ^k` has the index parity of `Φ`.
pub fn is_good(path: &PathModel, k: u64) -> Result<bool> {
    let first = cz_index(path, 1)?;
    let kth = cz_index(path, k)?;
    Ok((kth - first).is_even())
}

/// `Φ^{-1}`: negates the loop, every rotation number and every slope.
pub fn invert(path: &PathModel) -> PathModel {
    PathModel {
        loop_maslov: -path.loop_maslov,
        elliptic: path.elliptic.iter().map(|l| -l).collect(),
        hyperbolic: path.hyperbolic.iter().map(|h| -h).collect(),
        nondeg_bound: path.nondeg_bound,
    }
}

/// `Φ ⊕ Ψ`, certified up to the smaller of the two bounds.
pub fn direct_sum(a: &PathModel, b: &PathModel) -> PathModel {
    PathModel {
        loop_maslov: a.loop_maslov + b.loop_maslov,
        elliptic: a.elliptic.iter().chain(&b.elliptic).cloned().collect(),
        hyperbolic: a.hyperbolic.iter().chain(&b.hyperbolic).copied().collect(),
        nondeg_bound: a.nondeg_bound.min(b.nondeg_bound),
    }
}

/// `Φ^m` as a path in its own right.
pub fn iterate_path(path: &PathModel, m: u64) -> PathModel {
    let mm = BigInt::from(m);
    PathModel {
        loop_maslov: path.loop_maslov * m as i64,
        elliptic: path.elliptic.iter().map(|l| l * &mm).collect(),
        hyperbolic: path.hyperbolic.iter().map(|h| h * m as i64).collect(),
        nondeg_bound: path.nondeg_bound / m.max(1),
    }
}

/// Machine-word form of a validated path for evaluating many iterates.
///
/// Rotation numbers are held as `p/q` with `0 < q < 2^62`; every index is
/// `2νk + Σ(2⌊kλ⌋ + 1) + k·Σh`, which agrees with the sign form of the
/// elliptic index whenever `kλ ∉ ℤ`.
#[derive(Debug, Clone)]
pub struct FastPath {
    loop_maslov: i128,
    hyperbolic_sum: i128,
    blocks: Vec<(i128, i128)>,
    nondeg_bound: u64,
}

pub(crate) const WORD_LIMIT: i128 = 1 << 62;

impl FastPath {
    pub fn new(path: &PathModel) -> Result<Self> {
        let mut blocks = Vec::with_capacity(path.elliptic.len());
        for lambda in &path.elliptic {
            let p = rational::to_i128(lambda.numer(), "rotation numerator")?;
            let q = rational::to_i128(lambda.denom(), "rotation denominator")?;
            if q >= WORD_LIMIT || p.abs() >= WORD_LIMIT {
                return Err(Error::Overflow(format!(
                    "rotation number {} exceeds the 62-bit word range",
                    rational::fmt_rational(lambda)
                )));
            }
            blocks.push((p, q));
        }
        Ok(Self {
            loop_maslov: path.loop_maslov as i128,
            hyperbolic_sum: path.hyperbolic_sum() as i128,
            blocks,
            nondeg_bound: path.nondeg_bound,
        })
    }

    pub fn blocks(&self) -> &[(i128, i128)] {
        &self.blocks
    }

    pub fn loop_maslov(&self) -> i128 {
        self.loop_maslov
    }

    pub fn hyperbolic_sum(&self) -> i128 {
        self.hyperbolic_sum
    }

    pub fn nondeg_bound(&self) -> u64 {
        self.nondeg_bound
    }

    /// `μ(Φ^k)` for a signed iterate with `1 ≤ |k| ≤ nondeg_bound`.
    pub fn cz(&self, k: i64) -> i64 {
        debug_assert!(k != 0 && k.unsigned_abs() <= self.nondeg_bound);
        let k = k as i128;
        let mut total = 2 * self.loop_maslov * k + self.hyperbolic_sum * k;
        for &(p, q) in &self.blocks {
            total += 2 * Integer::div_floor(&(k * p), &q) + 1;
        }
        total as i64
    }

    /// Iterates `1, 2, …, last` with their indices, computed incrementally.
    pub fn sequence(&self, last: u64) -> IndexSequence {
        let mut step = 2 * self.loop_maslov + self.hyperbolic_sum;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for &(p, q) in &self.blocks {
            let (floor, rem) = p.div_mod_floor(&q);
            step += 2 * floor;
            blocks.push(SequenceBlock {
                rem: 0,
                step: rem as i64,
                q: q as i64,
            });
        }
        IndexSequence {
            k: 0,
            last: last.min(self.nondeg_bound),
            blocks,
            step,
            cz: self.blocks.len() as i128,
        }
    }
}

struct SequenceBlock {
    rem: i64,
    step: i64,
    q: i64,
}

/// Incremental `(k, μ(Φ^k))` iterator; see [`FastPath::sequence`].
///
/// Each step adds `2ν + Σh + 2Σ⌊λ⌋` plus `2` for every block whose fractional
/// part wraps past an integer.
pub struct IndexSequence {
    k: u64,
    last: u64,
    blocks: Vec<SequenceBlock>,
    step: i128,
    cz: i128,
}

impl Iterator for IndexSequence {
    type Item = (u64, i64);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        if self.k >= self.last {
            return None;
        }
        self.k += 1;
        let mut carries = 0i128;
        for b in &mut self.blocks {
            b.rem += b.step;
            if b.rem >= b.q {
                b.rem -= b.q;
                carries += 1;
            }
        }
        self.cz += self.step + 2 * carries;
        Some((self.k, self.cz as i64))
    }
}

/// Parity class of iterate `k`: whether `Φ^k` is good, computed from the
/// structure alone (`μ(Φ^k) ≡ #elliptic + k·Σh (mod 2)`).
pub fn is_good_fast(hyperbolic_sum: i128, k: u64) -> bool {
    k % 2 == 1 || hyperbolic_sum.is_even()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn path(nu: i64, ell: &[(i64, i64)], hyp: &[i64], bound: u64) -> PathModel {
        PathModel::certified(
            nu,
            ell.iter().map(|&(p, q)| ratio(p, q)).collect(),
            hyp.to_vec(),
            bound,
        )
        .unwrap()
    }

    #[test]
    fn single_blocks() {
        assert_eq!(cz_index(&path(0, &[(5, 2)], &[], 1), 1).unwrap(), 5);
        assert_eq!(cz_index(&path(0, &[(-3, 10)], &[], 9), 1).unwrap(), -1);
        assert_eq!(cz_index(&path(0, &[], &[2], 10), 3).unwrap(), 6);
        assert_eq!(cz_index(&path(1, &[(47, 100)], &[], 99), 1).unwrap(), 3);
    }

    #[test]
    fn mean_index_values() {
        assert_eq!(mean_index(&path(0, &[(3, 10)], &[], 9), 10), int(6));
        assert_eq!(mean_index(&path(2, &[(1, 7)], &[3], 6), 0), int(0));
        assert_eq!(mean_index(&path(1, &[(47, 100)], &[], 99), 1), ratio(147, 50));
    }

    #[test]
    fn goodness() {
        let h1 = path(0, &[], &[1], 10);
        assert!(!is_good(&h1, 2).unwrap());
        assert!(is_good(&h1, 3).unwrap());
        assert!(is_good(&path(0, &[(2, 7)], &[], 6), 5).unwrap());
    }

    #[test]
    fn inversion_and_sum() {
        let p = path(0, &[(5, 2)], &[], 1);
        assert_eq!(cz_index(&invert(&p), 1).unwrap(), -5);
        let s = direct_sum(&path(0, &[(3, 10)], &[], 9), &path(0, &[], &[2], 50));
        assert_eq!(s.nondeg_bound(), 9);
        assert_eq!(cz_index(&s, 1).unwrap(), 3);
    }

    #[test]
    fn validation_names_offending_iterate() {
        let raw = PathModel::new(0, vec![ratio(1, 3)], vec![]);
        assert_eq!(
            validate_path(&raw, 3),
            Err(Error::DegenerateIterate { block: 0, iterate: 3 })
        );
        assert!(validate_path(&raw, 2).is_ok());
        let integral = PathModel::new(0, vec![ratio(5, 7), int(2)], vec![]);
        assert_eq!(
            validate_path(&integral, 1),
            Err(Error::DegenerateIterate { block: 1, iterate: 1 })
        );
        assert!(validate_path(&raw, 0).is_err());
    }

    #[test]
    fn range_errors() {
        let p = path(0, &[(1, 3)], &[], 2);
        assert_eq!(
            cz_index(&p, 3),
            Err(Error::IterateOutOfCertifiedRange { iterate: 3, bound: 2 })
        );
        let unchecked = PathModel::new(0, vec![], vec![1]);
        assert!(cz_index(&unchecked, 1).is_err());
    }

    #[test]
    fn sequence_matches_direct_evaluation() {
        let p = path(-1, &[(7, 3001), (-2900, 1013)], &[3, -1], 1000);
        let fast = FastPath::new(&p).unwrap();
        for (k, mu) in fast.sequence(1000) {
            assert_eq!(mu, cz_index(&p, k).unwrap(), "k = {k}");
            assert_eq!(fast.cz(k as i64), mu);
            assert_eq!(fast.cz(-(k as i64)), -mu);
        }
    }

    fn arb_path() -> impl Strategy<Value = PathModel> {
        let block = (-30_000i64..30_000, 211i64..10_000);
        (
            -3i64..=3,
            prop::collection::vec(block, 0..=3),
            prop::collection::vec(-4i64..=4, 0..=2),
        )
            .prop_filter_map("needs a block and a coprime denominator > 200", |(nu, ell, hyp)| {
                let ell: Vec<Rational> = ell.into_iter().map(|(p, q)| ratio(p, q)).collect();
                if ell.is_empty() && hyp.is_empty() {
                    return None;
                }
                PathModel::certified(nu, ell, hyp, 200).ok()
            })
    }

    proptest! {
        #[test]
        fn mean_index_gap_and_parity(p in arb_path(), k in 1u64..=198) {
            let n = p.half_dim() as i64;
            let mu = cz_index(&p, k).unwrap();
            let gap = (mean_index(&p, k) - int(mu)).abs();
            prop_assert!(gap < int(n));
            prop_assert_eq!((mu - cz_index(&p, k + 2).unwrap()).rem_euclid(2), 0);
            prop_assert_eq!(cz_index(&invert(&p), k).unwrap(), -mu);
        }

        #[test]
        fn fast_route_agrees(p in arb_path(), k in 1i64..=200) {
            let fast = FastPath::new(&p).unwrap();
            prop_assert_eq!(fast.cz(k), cz_index(&p, k as u64).unwrap());
            prop_assert_eq!(is_good_fast(fast.hyperbolic_sum(), k as u64), is_good(&p, k as u64).unwrap());
        }
    }
}
