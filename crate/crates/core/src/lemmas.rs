//! Exact probabilities over a uniform `u ∈ {0,…,p-1}^n` and the balanced-vector
//! search.
//!
//! Every probability here is a ratio of solution counts of small linear
//! systems, so the results are exact rationals. The only irrational quantity
//! is the bucket bound `|S|/p + 2√|S|`, and [`within_bucket_bound`] compares
//! against it with integer arithmetic.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;

use crate::error::{usage, Error, Result};
use crate::field::{
    dot_unchecked, multiple_unchecked, projective_normal, solution_count, FieldMatrix, FieldVec,
    Params,
};
use crate::hypotheses::Label;

/// Exact fraction in lowest terms.
pub type Rational = BigRational;

/// Formats as `num/den`, always with a denominator.
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn big_ratio(num: BigUint, den: BigUint) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Largest `|S|` that [`CoeffSet::full`] will materialize.
pub const MAX_EXPLICIT_SET: u128 = 10_000_000;

/// Candidate count below which searches over `u` enumerate the whole space.
pub const EXHAUSTIVE_LIMIT: u128 = 100_000;

/// A finite set of coefficient vectors with every entry in `{1,…,p-1}`.
///
/// Members are kept sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffSet {
    params: Params,
    members: Vec<FieldVec>,
}

impl CoeffSet {
    pub fn new(params: Params, mut members: Vec<FieldVec>) -> Result<Self> {
        for m in &members {
            let m = params.vector(m.entries().to_vec())?;
            if !m.all_nonzero() {
                return Err(usage(format!("{m} has a zero entry")));
            }
        }
        members.sort();
        members.dedup();
        Ok(Self { params, members })
    }

    pub fn empty(params: Params) -> Self {
        Self {
            params,
            members: Vec::new(),
        }
    }

    /// All of `{1,…,p-1}^n`.
    pub fn full(params: Params) -> Result<Self> {
        let size = params.nonzero_cube_size().unwrap_or(u128::MAX);
        if size > MAX_EXPLICIT_SET {
            return Err(Error::BudgetExceeded {
                what: "explicit coefficient set",
                needed: size,
                budget: MAX_EXPLICIT_SET,
            });
        }
        Ok(Self {
            params,
            members: params.nonzero_cube().collect(),
        })
    }

    /// Each member of `{1,…,p-1}^n` kept independently with probability 1/2.
    pub fn random_subset(params: Params, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut full = Self::full(params)?;
        full.members.retain(|_| rng.gen_bool(0.5));
        Ok(full)
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn members(&self) -> &[FieldVec] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: &FieldVec) -> bool {
        self.members.binary_search(v).is_ok()
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&FieldVec) -> bool) {
        self.members.retain(|m| keep(m));
    }
}

/// `|{x ∈ S : x·u = z}|` for each `z ∈ {0,…,p-1}`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(transparent)]
pub struct BucketCounts(Vec<u64>);

impl BucketCounts {
    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, z: Label) -> u64 {
        self.0[z as usize]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn max(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Largest bucket; ties go to the smallest label.
    pub fn argmax(&self) -> Label {
        let max = self.max();
        self.0.iter().position(|&c| c == max).unwrap_or(0) as Label
    }

    /// Every bucket is within `total/p + 2√total`.
    pub fn balanced(&self) -> bool {
        let p = self.0.len() as u64;
        within_bucket_bound(self.max(), self.total(), p)
    }
}

fn check_label(z: Label, params: &Params) -> Result<()> {
    if z < params.p() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            value: z,
            p: params.p(),
        })
    }
}

fn count_solutions(rows: Vec<(FieldVec, u64)>, params: &Params) -> Result<BigUint> {
    let m = FieldMatrix::augmented(params.n(), rows)?;
    solution_count(&m, params)
}

fn space(params: &Params) -> BigUint {
    BigUint::from(params.p()).pow(params.n() as u32)
}

/// `Pr[x·u = y]` over uniform `u`.
pub fn marginal_probability(x: &FieldVec, y: Label, params: &Params) -> Result<Rational> {
    check_label(y, params)?;
    let count = count_solutions(vec![(x.clone(), y)], params)?;
    Ok(big_ratio(count, space(params)))
}

fn check_cube_member(v: &FieldVec, params: &Params) -> Result<()> {
    let v = params.vector(v.entries().to_vec())?;
    if v.all_nonzero() {
        Ok(())
    } else {
        Err(usage(format!(
            "{v} has a zero entry; expected a member of {{1,…,p-1}}^n"
        )))
    }
}

fn pair_counts(
    s: &FieldVec,
    t: &FieldVec,
    z: Label,
    params: &Params,
) -> Result<(BigUint, BigUint, BigUint)> {
    if params.n() < 2 {
        return Err(usage("pairwise quantities need n >= 2"));
    }
    check_cube_member(s, params)?;
    check_cube_member(t, params)?;
    check_label(z, params)?;
    let joint = count_solutions(vec![(s.clone(), z), (t.clone(), z)], params)?;
    let given_s = count_solutions(vec![(s.clone(), z)], params)?;
    let given_t = count_solutions(vec![(t.clone(), z)], params)?;
    Ok((joint, given_s, given_t))
}

/// `Pr[t·u = z | s·u = z]` for `s, t ∈ {1,…,p-1}^n`, `n >= 2`.
pub fn conditional_probability(
    s: &FieldVec,
    t: &FieldVec,
    z: Label,
    params: &Params,
) -> Result<Rational> {
    let (joint, given_s, _) = pair_counts(s, t, z, params)?;
    Ok(big_ratio(joint, given_s))
}

/// `Cov(X_s, X_t)` for the indicators `X_v = [v·u = z]`, `s ≠ t`.
pub fn exact_covariance(s: &FieldVec, t: &FieldVec, z: Label, params: &Params) -> Result<Rational> {
    if s == t {
        return Err(usage("covariance needs s != t; use the indicator variance"));
    }
    let (joint, given_s, given_t) = pair_counts(s, t, z, params)?;
    let total = space(params);
    let e_st = big_ratio(joint, total.clone());
    let e_s = big_ratio(given_s, total.clone());
    let e_t = big_ratio(given_t, total);
    Ok(e_st - e_s * e_t)
}

/// Variance of one indicator `[s·u = z]` with `s ≠ 0`: `1/p - 1/p²`.
pub fn indicator_variance(params: &Params) -> Rational {
    let p = params.p();
    ratio(1, p) - ratio(1, p * p)
}

/// Closed-form covariance of `[s·u = z]` and `[t·u = z]` for distinct
/// `s, t ∈ {1,…,p-1}^n` with `n >= 2`.
pub fn covariance_closed_form(multiples: bool, z: Label, params: &Params) -> Rational {
    let p = params.p();
    match (multiples, z) {
        (false, _) => Rational::zero(),
        (true, 0) => ratio(1, p) - ratio(1, p * p),
        (true, _) => -ratio(1, p * p),
    }
}

/// `Var(|T_z|)` summed from the closed forms over all members and ordered
/// pairs of `S`.
pub fn bucket_variance(set: &CoeffSet, z: Label) -> Rational {
    let params = set.params();
    let singles = indicator_variance(params) * BigInt::from(set.len());
    let pairs = count_multiple_pairs(set);
    singles + covariance_closed_form(true, z, params) * BigInt::from(pairs)
}

pub fn bucket_counts(set: &CoeffSet, u: &FieldVec) -> Result<BucketCounts> {
    let params = set.params();
    let u = params.vector(u.entries().to_vec())?;
    Ok(bucket_counts_unchecked(set.members(), &u, params.p()))
}

pub(crate) fn bucket_counts_unchecked(members: &[FieldVec], u: &FieldVec, p: u64) -> BucketCounts {
    let mut counts = vec![0u64; p as usize];
    for x in members {
        counts[dot_unchecked(x.entries(), u.entries(), p) as usize] += 1;
    }
    BucketCounts(counts)
}

/// `size/p + 2√size` in floating point, for display.
pub fn lemma4_bound(size: u64, p: u64) -> f64 {
    let s = size as f64;
    s / p as f64 + 2.0 * s.sqrt()
}

/// Exact test of `count <= size/p + 2√size`.
///
/// Equivalent to `p·count - size <= 0` or `(p·count - size)² <= 4p²·size`.
pub fn within_bucket_bound(count: u64, size: u64, p: u64) -> bool {
    let scaled = p as u128 * count as u128;
    let size = size as u128;
    if scaled <= size {
        return true;
    }
    let d = scaled - size;
    let p2 = p as u128 * p as u128;
    match (
        d.checked_mul(d),
        p2.checked_mul(4).and_then(|x| x.checked_mul(size)),
    ) {
        (Some(lhs), Some(rhs)) => lhs <= rhs,
        _ => {
            let d = BigUint::from(d);
            &d * &d <= BigUint::from(p) * BigUint::from(p) * 4u32 * BigUint::from(size)
        }
    }
}

/// Seeded generator used by every randomized routine.
///
/// ChaCha8 keyed by `seed` (expanded through `SeedableRng::seed_from_u64`),
/// with the stream id selecting an independent sequence. Per-trial streams make
/// results independent of evaluation order and thread count.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mixes a child index into a seed (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_vector<R: Rng>(rng: &mut R, params: &Params) -> FieldVec {
    let entries = (0..params.n())
        .map(|_| rng.gen_range(0..params.p()))
        .collect();
    params.vector(entries).expect("sampled in range")
}

/// The `u` examined by trial `index` of a search or frequency estimate.
pub fn trial_vector(seed: u64, index: u64, params: &Params) -> FieldVec {
    random_vector(&mut stream_rng(seed, index), params)
}

/// Options for [`find_balanced_u_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: u64,
    pub seed: u64,
    /// After the sampled trials fail, scan all of `{0,…,p-1}^n` when it has at
    /// most [`EXHAUSTIVE_LIMIT`] elements.
    pub exhaustive_fallback: bool,
}

/// Outcome of a balanced-vector search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedSearch {
    /// The first balanced `u` on success, otherwise the best seen (smallest
    /// maximum bucket, earliest on ties). `None` only when nothing was tried.
    pub u: Option<FieldVec>,
    pub buckets: Option<BucketCounts>,
    pub success: bool,
    /// Sampled trials used.
    pub trials: u64,
    /// Maximum bucket of each sampled trial.
    pub attempts: Vec<u64>,
    pub exhaustive: bool,
}

/// Samples `u` uniformly up to `budget` times and returns the first one whose
/// buckets are all within `|S|/p + 2√|S|`.
pub fn find_balanced_u(set: &CoeffSet, budget: u64, seed: u64) -> BalancedSearch {
    find_balanced_u_with(
        set,
        SearchConfig {
            budget,
            seed,
            exhaustive_fallback: false,
        },
    )
}

pub fn find_balanced_u_with(set: &CoeffSet, cfg: SearchConfig) -> BalancedSearch {
    let params = *set.params();
    if set.is_empty() {
        let u = params.zero();
        let buckets = bucket_counts_unchecked(set.members(), &u, params.p());
        return BalancedSearch {
            u: Some(u),
            buckets: Some(buckets),
            success: true,
            trials: 0,
            attempts: Vec::new(),
            exhaustive: false,
        };
    }
    let mut best: Option<(FieldVec, BucketCounts)> = None;
    let mut attempts = Vec::new();
    for trial in 0..cfg.budget {
        let u = trial_vector(cfg.seed, trial, &params);
        let buckets = bucket_counts_unchecked(set.members(), &u, params.p());
        attempts.push(buckets.max());
        if buckets.balanced() {
            return BalancedSearch {
                u: Some(u),
                buckets: Some(buckets),
                success: true,
                trials: trial + 1,
                attempts,
                exhaustive: false,
            };
        }
        if best.as_ref().is_none_or(|(_, b)| buckets.max() < b.max()) {
            best = Some((u, buckets));
        }
    }
    let trials = cfg.budget;
    let small = params.space_size().is_some_and(|s| s <= EXHAUSTIVE_LIMIT);
    if cfg.exhaustive_fallback && small {
        if let Some((u, buckets)) = exhaustive_balanced_u(set) {
            return BalancedSearch {
                u: Some(u),
                buckets: Some(buckets),
                success: true,
                trials,
                attempts,
                exhaustive: true,
            };
        }
    }
    let (u, buckets) = best.unzip();
    BalancedSearch {
        u,
        buckets,
        success: false,
        trials,
        attempts,
        exhaustive: false,
    }
}

/// First balanced `u` in lexicographic order, scanning all of `{0,…,p-1}^n`.
pub fn exhaustive_balanced_u(set: &CoeffSet) -> Option<(FieldVec, BucketCounts)> {
    let p = set.params().p();
    set.params().all_vectors().find_map(|u| {
        let buckets = bucket_counts_unchecked(set.members(), &u, p);
        buckets.balanced().then_some((u, buckets))
    })
}

/// Fraction of `trials` uniform draws of `u` that are balanced for `S`.
pub fn success_frequency(set: &CoeffSet, trials: u64, seed: u64) -> Result<Rational> {
    if trials == 0 {
        return Err(usage("success frequency needs at least one trial"));
    }
    if set.is_empty() {
        return Ok(Rational::one());
    }
    let params = *set.params();
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&i| {
            let u = trial_vector(seed, i, &params);
            bucket_counts_unchecked(set.members(), &u, params.p()).balanced()
        })
        .count() as u64;
    Ok(ratio(hits, trials))
}

/// Ordered pairs `(s, t)`, `s ≠ t`, of members that are multiples of each other.
pub fn count_multiple_pairs(set: &CoeffSet) -> u64 {
    let params = set.params();
    let mut classes: HashMap<Vec<u64>, u64> = HashMap::new();
    for m in set.members() {
        *classes
            .entry(projective_normal(m.entries(), params))
            .or_default() += 1;
    }
    classes.values().map(|&c| c * (c - 1)).sum()
}

/// Whether `s` and `t` are multiples; both must be nonzero.
pub(crate) fn multiples(s: &FieldVec, t: &FieldVec, params: &Params) -> bool {
    multiple_unchecked(s.entries(), t.entries(), params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, n: usize) -> Params {
        Params::new(p, n).unwrap()
    }

    fn v(p: &Params, e: &[u64]) -> FieldVec {
        p.vector(e.to_vec()).unwrap()
    }

    /// Brute force over every u.
    fn enumerate_conditional(s: &FieldVec, t: &FieldVec, z: u64, params: &Params) -> Rational {
        let (mut both, mut given) = (0u64, 0u64);
        for u in params.all_vectors() {
            if dot_unchecked(s.entries(), u.entries(), params.p()) == z {
                given += 1;
                if dot_unchecked(t.entries(), u.entries(), params.p()) == z {
                    both += 1;
                }
            }
        }
        ratio(both, given)
    }

    #[test]
    fn marginal_examples() {
        let p = params(5, 2);
        assert_eq!(
            marginal_probability(&v(&p, &[1, 1]), 3, &p).unwrap(),
            ratio(1, 5)
        );
        assert_eq!(marginal_probability(&p.zero(), 0, &p).unwrap(), ratio(1, 1));
        assert_eq!(marginal_probability(&p.zero(), 1, &p).unwrap(), ratio(0, 1));
        assert!(marginal_probability(&p.zero(), 5, &p).is_err());
    }

    #[test]
    fn conditional_examples() {
        let p = params(5, 2);
        let (a, b, c) = (v(&p, &[1, 1]), v(&p, &[2, 2]), v(&p, &[1, 2]));
        assert_eq!(conditional_probability(&a, &b, 0, &p).unwrap(), ratio(1, 1));
        assert_eq!(conditional_probability(&a, &b, 1, &p).unwrap(), ratio(0, 1));
        assert_eq!(conditional_probability(&a, &c, 3, &p).unwrap(), ratio(1, 5));
        assert_eq!(conditional_probability(&a, &a, 3, &p).unwrap(), ratio(1, 1));
    }

    #[test]
    fn conditional_preconditions() {
        let p = params(5, 2);
        let bad = v(&p, &[0, 1]);
        assert!(conditional_probability(&bad, &v(&p, &[1, 1]), 0, &p).is_err());
        let p1 = params(5, 1);
        assert!(conditional_probability(&v(&p1, &[1]), &v(&p1, &[2]), 0, &p1).is_err());
    }

    #[test]
    fn conditional_matches_enumeration() {
        for (pr, n) in [(2, 2), (3, 2), (3, 3), (5, 2), (5, 3)] {
            let p = params(pr, n);
            let cube: Vec<_> = p.nonzero_cube().collect();
            // sparse sample of pairs keeps the brute force cheap at (5,3)
            let step = (cube.len() / 12).max(1);
            for s in cube.iter().step_by(step) {
                for t in cube.iter().step_by(step / 2 + 1) {
                    for z in 0..pr {
                        assert_eq!(
                            conditional_probability(s, t, z, &p).unwrap(),
                            enumerate_conditional(s, t, z, &p),
                            "p={pr} n={n} s={s} t={t} z={z}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn covariance_examples() {
        let p = params(5, 2);
        let (a, b, c) = (v(&p, &[1, 1]), v(&p, &[2, 2]), v(&p, &[1, 2]));
        assert_eq!(exact_covariance(&a, &c, 2, &p).unwrap(), ratio(0, 1));
        assert_eq!(exact_covariance(&a, &b, 1, &p).unwrap(), -ratio(1, 25));
        assert_eq!(exact_covariance(&a, &b, 0, &p).unwrap(), ratio(4, 25));
        assert!(exact_covariance(&a, &a, 0, &p).is_err());
    }

    #[test]
    fn bucket_examples() {
        let p = params(5, 2);
        let full = CoeffSet::full(p).unwrap();
        assert_eq!(full.len(), 16);
        assert_eq!(
            bucket_counts(&full, &p.zero()).unwrap().counts(),
            &[16, 0, 0, 0, 0]
        );
        let single = CoeffSet::new(p, vec![v(&p, &[1, 1])]).unwrap();
        assert_eq!(
            bucket_counts(&single, &v(&p, &[1, 1])).unwrap().counts(),
            &[0, 0, 1, 0, 0]
        );
        // i + j mod 5 over i, j in 1..=4
        let mut oracle = [0u64; 5];
        for i in 1..=4 {
            for j in 1..=4 {
                oracle[(i + j) % 5] += 1;
            }
        }
        assert_eq!(oracle, [4, 3, 3, 3, 3]);
        assert_eq!(
            bucket_counts(&full, &v(&p, &[1, 1])).unwrap().counts(),
            &oracle
        );
    }

    #[test]
    fn bound_values() {
        assert!((lemma4_bound(16, 5) - 11.2).abs() < 1e-12);
        assert_eq!(lemma4_bound(0, 5), 0.0);
        let b = lemma4_bound(1000, 11);
        assert!((b - (1000.0 / 11.0 + 2.0 * 1000f64.sqrt())).abs() < 1e-9);
        assert!((b - 154.15).abs() < 0.01);
    }

    #[test]
    fn exact_bound_matches_float_away_from_boundary() {
        for p in [2u64, 3, 5, 7, 11] {
            for size in 0..300u64 {
                for count in 0..=size {
                    let f = lemma4_bound(size, p);
                    let exact = within_bucket_bound(count, size, p);
                    if (count as f64 - f).abs() > 1e-9 {
                        assert_eq!(
                            exact,
                            (count as f64) <= f,
                            "p={p} size={size} count={count}"
                        );
                    }
                }
            }
        }
        // 16/4 + 2·4 = 12 exactly
        assert!(within_bucket_bound(12, 16, 4));
        assert!(!within_bucket_bound(13, 16, 4));
        assert!(within_bucket_bound(0, 0, 5));
        assert!(!within_bucket_bound(1, 0, 5));
    }

    #[test]
    fn balanced_search_examples() {
        let p = params(5, 2);
        let r = find_balanced_u(&CoeffSet::empty(p), 0, 0);
        assert!(r.success);
        assert_eq!(r.u.unwrap(), p.zero());

        let single = CoeffSet::new(p, vec![v(&p, &[1, 1])]).unwrap();
        let r = find_balanced_u(&single, 1, 3);
        assert!(r.success);
        assert_eq!(r.trials, 1);

        let p3 = params(5, 3);
        let full = CoeffSet::full(p3).unwrap();
        let r = find_balanced_u(&full, 64, 0);
        assert!(r.success);
        let u = r.u.unwrap();
        let b = bucket_counts(&full, &u).unwrap();
        assert!(b.counts().iter().all(|&c| within_bucket_bound(c, 64, 5)));

        let r = find_balanced_u(&full, 0, 0);
        assert!(!r.success);
        assert!(r.u.is_none() && r.attempts.is_empty());
    }

    #[test]
    fn exhaustive_fallback_kicks_in() {
        // {(1,1),(2,2),(3,3),(4,4)} ∪ {(1,2)}: u = 0 puts all 5 in bucket 0 > 5/5 + 2√5
        let p = params(5, 2);
        let set = CoeffSet::new(
            p,
            vec![
                v(&p, &[1, 1]),
                v(&p, &[2, 2]),
                v(&p, &[3, 3]),
                v(&p, &[4, 4]),
            ],
        )
        .unwrap();
        let r = find_balanced_u_with(
            &set,
            SearchConfig {
                budget: 0,
                seed: 0,
                exhaustive_fallback: true,
            },
        );
        assert!(r.success && r.exhaustive);
    }

    #[test]
    fn search_is_reproducible() {
        let p = params(7, 3);
        let set = CoeffSet::random_subset(p, 11).unwrap();
        assert_eq!(find_balanced_u(&set, 64, 5), find_balanced_u(&set, 64, 5));
    }

    #[test]
    fn success_frequency_examples() {
        let p = params(5, 2);
        assert_eq!(
            success_frequency(&CoeffSet::empty(p), 10, 0).unwrap(),
            Rational::one()
        );
        let single = CoeffSet::new(p, vec![v(&p, &[3, 1])]).unwrap();
        assert_eq!(success_frequency(&single, 50, 0).unwrap(), Rational::one());
        let full = CoeffSet::full(p).unwrap();
        let f = success_frequency(&full, 2000, 1).unwrap();
        assert!(f >= ratio(45, 100), "{f}");
        assert!(success_frequency(&full, 0, 1).is_err());
    }

    #[test]
    fn multiple_pair_counts() {
        let p = params(5, 2);
        let s = CoeffSet::new(p, vec![v(&p, &[1, 1]), v(&p, &[2, 2])]).unwrap();
        assert_eq!(count_multiple_pairs(&s), 2);
        let s = CoeffSet::new(p, vec![v(&p, &[1, 1]), v(&p, &[1, 2])]).unwrap();
        assert_eq!(count_multiple_pairs(&s), 0);
        let full = CoeffSet::full(p).unwrap();
        let brute = full
            .members()
            .iter()
            .flat_map(|s| full.members().iter().map(move |t| (s, t)))
            .filter(|(s, t)| s != t && multiples(s, t, &p))
            .count();
        assert_eq!(brute, 48);
        assert_eq!(count_multiple_pairs(&full), 48);
    }

    #[test]
    fn variance_closed_form_matches_distribution() {
        // Var(|T_z|) computed directly from the distribution of |T_z| over all u.
        for (pr, n, seed) in [(5u64, 2usize, 0u64), (5, 2, 1), (3, 3, 2), (7, 2, 3)] {
            let p = params(pr, n);
            for set in [
                CoeffSet::full(p).unwrap(),
                CoeffSet::random_subset(p, seed).unwrap(),
            ] {
                let total = p.space_size().unwrap() as u64;
                for z in 0..pr {
                    let (mut sum, mut sum_sq) = (0u64, 0u64);
                    for u in p.all_vectors() {
                        let c = bucket_counts(&set, &u).unwrap().get(z);
                        sum += c;
                        sum_sq += c * c;
                    }
                    let mean = ratio(sum, total);
                    let direct = ratio(sum_sq, total) - mean.clone() * mean;
                    assert_eq!(bucket_variance(&set, z), direct, "p={pr} n={n} z={z}");
                }
            }
        }
    }
}
