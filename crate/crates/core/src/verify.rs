//! Sweeps that check the lemma identities case by case and collect every
//! disagreement into a [`LemmaReport`].

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{usage, Result};
use crate::field::{FieldMatrix, FieldVec, Params};
use crate::lemmas::{
    bucket_counts, bucket_variance, conditional_probability, count_multiple_pairs,
    covariance_closed_form, derive_seed, exact_covariance, exhaustive_balanced_u, find_balanced_u,
    marginal_probability, multiples, ratio, rational_string, stream_rng, within_bucket_bound,
    CoeffSet, Rational,
};

/// Largest number of cases an exhaustive sweep will run.
pub const SWEEP_BUDGET: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportParams {
    pub p: u64,
    pub n: usize,
}

/// One failed case. Rationals are written as `num/den`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub s: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<u64>>,
    pub z: u64,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub params: ReportParams,
    pub cases_checked: u64,
    pub violations: Vec<Violation>,
}

impl LemmaReport {
    fn new(lemma: &str, params: &Params) -> Self {
        Self {
            lemma: lemma.to_string(),
            params: ReportParams {
                p: params.p(),
                n: params.n(),
            },
            cases_checked: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(
        &mut self,
        s: &FieldVec,
        t: Option<&FieldVec>,
        z: u64,
        expected: &Rational,
        actual: &Rational,
    ) {
        self.cases_checked += 1;
        if expected != actual {
            self.violations.push(Violation {
                s: s.entries().to_vec(),
                t: t.map(|t| t.entries().to_vec()),
                z,
                expected: rational_string(expected),
                actual: rational_string(actual),
            });
        }
    }
}

fn pair_sweep_size(params: &Params) -> Result<()> {
    let cube = params.nonzero_cube_size().unwrap_or(u128::MAX);
    let cases = cube.saturating_mul(cube).saturating_mul(params.p() as u128);
    if cases > SWEEP_BUDGET {
        return Err(crate::Error::BudgetExceeded {
            what: "pairwise sweep",
            needed: cases,
            budget: SWEEP_BUDGET,
        });
    }
    if params.n() < 2 {
        return Err(usage("pairwise sweeps need n >= 2"));
    }
    Ok(())
}

/// Expected `Pr[t·u = z | s·u = z]` by case: `1/p` unless `s, t` are
/// multiples, in which case `1` for `s = t` or `z = 0` and `0` otherwise.
pub fn conditional_case_law(s: &FieldVec, t: &FieldVec, z: u64, params: &Params) -> Rational {
    if !multiples(s, t, params) {
        ratio(1, params.p())
    } else if s == t || z == 0 {
        ratio(1, 1)
    } else {
        ratio(0, 1)
    }
}

/// `Pr[x·u = y] = 1/p` for every nonzero `x` and every `y`.
pub fn verify_marginal(params: &Params) -> Result<LemmaReport> {
    let cases = params
        .space_size()
        .unwrap_or(u128::MAX)
        .saturating_mul(params.p() as u128);
    if cases > SWEEP_BUDGET {
        return Err(crate::Error::BudgetExceeded {
            what: "marginal sweep",
            needed: cases,
            budget: SWEEP_BUDGET,
        });
    }
    let mut report = LemmaReport::new("marginal", params);
    let expected = ratio(1, params.p());
    for x in params.all_vectors().filter(|x| !x.is_zero()) {
        for y in 0..params.p() {
            let actual = marginal_probability(&x, y, params)?;
            report.check(&x, None, y, &expected, &actual);
        }
    }
    Ok(report)
}

/// The corrected conditional-probability law over all ordered `s ≠ t` in
/// `{1,…,p-1}^n` and all `z`.
pub fn verify_conditional(params: &Params) -> Result<LemmaReport> {
    pair_sweep_size(params)?;
    let mut report = LemmaReport::new("conditional", params);
    let cube: Vec<FieldVec> = params.nonzero_cube().collect();
    for s in &cube {
        for t in cube.iter().filter(|t| *t != s) {
            for z in 0..params.p() {
                let expected = conditional_case_law(s, t, z, params);
                let actual = conditional_probability(s, t, z, params)?;
                report.check(s, Some(t), z, &expected, &actual);
            }
        }
    }
    Ok(report)
}

/// Tests the uncorrected claim `Pr[t·u = z | s·u = z] = 1/p` for every
/// `s ≠ t`; each violation is a counterexample.
pub fn refute_false_lemma(params: &Params) -> Result<LemmaReport> {
    pair_sweep_size(params)?;
    let mut report = LemmaReport::new("falselemma", params);
    let claimed = ratio(1, params.p());
    let cube: Vec<FieldVec> = params.nonzero_cube().collect();
    for s in &cube {
        for t in cube.iter().filter(|t| *t != s) {
            for z in 0..params.p() {
                let actual = conditional_probability(s, t, z, params)?;
                report.check(s, Some(t), z, &claimed, &actual);
            }
        }
    }
    Ok(report)
}

/// `Cov([s·u = z], [t·u = z])` against `{0, -1/p², 1/p - 1/p²}` by case.
pub fn verify_covariance(params: &Params) -> Result<LemmaReport> {
    pair_sweep_size(params)?;
    let mut report = LemmaReport::new("covariance", params);
    let cube: Vec<FieldVec> = params.nonzero_cube().collect();
    for s in &cube {
        for t in cube.iter().filter(|t| *t != s) {
            for z in 0..params.p() {
                let expected = covariance_closed_form(multiples(s, t, params), z, params);
                let actual = exact_covariance(s, t, z, params)?;
                report.check(s, Some(t), z, &expected, &actual);
            }
        }
    }
    Ok(report)
}

fn expected_joint_count(multiple: bool, same: bool, z: u64, params: &Params) -> BigUint {
    let p = BigUint::from(params.p());
    match (multiple, same || z == 0) {
        (false, _) => p.pow(params.n() as u32 - 2),
        (true, true) => p.pow(params.n() as u32 - 1),
        (true, false) => BigUint::zero(),
    }
}

/// Solution counts of `{s·u = z, t·u = z}` for `samples` random
/// non-multiple pairs and `samples` random multiple pairs `t = λs`, `λ ≠ 1`
/// (each multiple pair is checked at `z = 0` and at a random `z ≠ 0`).
pub fn verify_joint_counts(params: &Params, samples: u64, seed: u64) -> Result<LemmaReport> {
    if params.n() < 2 {
        return Err(usage("joint counts need n >= 2"));
    }
    let mut report = LemmaReport::new("joint-count", params);
    let mut rng = stream_rng(seed, 0);
    let p = params.p();
    let nonzero = |rng: &mut rand_chacha::ChaCha8Rng| {
        let e = (0..params.n()).map(|_| rng.gen_range(1..p)).collect();
        params.vector(e).expect("in range")
    };
    let check = |report: &mut LemmaReport, s: &FieldVec, t: &FieldVec, z: u64| -> Result<()> {
        let m = FieldMatrix::augmented(params.n(), vec![(s.clone(), z), (t.clone(), z)])?;
        let actual = crate::field::solution_count(&m, params)?;
        let expected = expected_joint_count(multiples(s, t, params), s == t, z, params);
        let (e, a) = (
            Rational::from_integer(expected.into()),
            Rational::from_integer(actual.into()),
        );
        report.check(s, Some(t), z, &e, &a);
        Ok(())
    };

    if p > 2 {
        let mut found = 0;
        let mut attempts = 0u64;
        while found < samples {
            attempts += 1;
            if attempts > samples.saturating_mul(1000).max(1000) {
                return Err(usage("could not sample enough non-multiple pairs"));
            }
            let (s, t) = (nonzero(&mut rng), nonzero(&mut rng));
            if s == t || multiples(&s, &t, params) {
                continue;
            }
            let z = rng.gen_range(0..p);
            check(&mut report, &s, &t, z)?;
            found += 1;
        }
    }
    if p > 2 {
        for _ in 0..samples {
            let s = nonzero(&mut rng);
            let lambda = rng.gen_range(2..p);
            let t = s.scale(lambda, params);
            check(&mut report, &s, &t, 0)?;
            check(&mut report, &s, &t, rng.gen_range(1..p))?;
        }
    }
    Ok(report)
}

/// `Var(|T_z|) < |S|/p` for `z ≠ 0` and `< |S|` for `z = 0`, on the full cube
/// and `subsets` random subsets. Empty sets are skipped.
pub fn verify_variance(params: &Params, subsets: u64, seed: u64) -> Result<LemmaReport> {
    let mut report = LemmaReport::new("variance", params);
    for set in sets_under_test(params, subsets, seed)? {
        if set.is_empty() {
            continue;
        }
        let size = set.len() as u64;
        for z in 0..params.p() {
            let var = bucket_variance(&set, z);
            let limit = if z == 0 {
                ratio(size, 1)
            } else {
                ratio(size, params.p())
            };
            report.cases_checked += 1;
            if var >= limit {
                report.violations.push(Violation {
                    s: vec![size],
                    t: None,
                    z,
                    expected: format!("< {}", rational_string(&limit)),
                    actual: rational_string(&var),
                });
            }
        }
    }
    Ok(report)
}

/// Multiple-pair count is at most `(p-2)|S|`, with equality on the full cube.
pub fn verify_multiple_pairs(params: &Params, subsets: u64, seed: u64) -> Result<LemmaReport> {
    let mut report = LemmaReport::new("multiple-pairs", params);
    let sets = sets_under_test(params, subsets, seed)?;
    for (i, set) in sets.iter().enumerate() {
        let size = set.len() as u64;
        let count = count_multiple_pairs(set);
        let cap = (params.p() - 2) * size;
        report.cases_checked += 1;
        let ok = if i == 0 { count == cap } else { count <= cap };
        if !ok {
            report.violations.push(Violation {
                s: vec![size],
                t: None,
                z: 0,
                expected: if i == 0 {
                    format!("{cap}")
                } else {
                    format!("<= {cap}")
                },
                actual: count.to_string(),
            });
        }
    }
    Ok(report)
}

/// Balanced-vector existence: for the full cube and `subsets` random subsets,
/// [`find_balanced_u`] with `budget` trials must succeed and its buckets must
/// pass the exact bound. With `exhaustive` set, existence is instead decided
/// by scanning every `u`.
pub fn verify_balanced(
    params: &Params,
    subsets: u64,
    budget: u64,
    seed: u64,
    exhaustive: bool,
) -> Result<LemmaReport> {
    let name = if exhaustive {
        "balanced-exhaustive"
    } else {
        "balanced"
    };
    let mut report = LemmaReport::new(name, params);
    for (i, set) in sets_under_test(params, subsets, seed)?.iter().enumerate() {
        let size = set.len() as u64;
        report.cases_checked += 1;
        let found = if exhaustive {
            exhaustive_balanced_u(set).map(|(u, _)| u)
        } else {
            let r = find_balanced_u(set, budget, derive_seed(seed, 1_000_000 + i as u64));
            r.success.then(|| r.u.expect("success carries u"))
        };
        let verified = found.as_ref().map(|u| {
            bucket_counts(set, u).map(|b| {
                b.counts()
                    .iter()
                    .all(|&c| within_bucket_bound(c, size, params.p()))
            })
        });
        match verified.transpose()? {
            Some(true) => {}
            other => report.violations.push(Violation {
                s: found.map(FieldVec::into_entries).unwrap_or_default(),
                t: None,
                z: i as u64,
                expected: "balanced u".into(),
                actual: match other {
                    Some(false) => "bound exceeded".into(),
                    _ => "no balanced u found".into(),
                },
            }),
        }
    }
    Ok(report)
}

/// The full cube followed by `subsets` random subsets.
pub fn sets_under_test(params: &Params, subsets: u64, seed: u64) -> Result<Vec<CoeffSet>> {
    let mut sets = vec![CoeffSet::full(*params)?];
    for i in 0..subsets {
        sets.push(CoeffSet::random_subset(*params, derive_seed(seed, i))?);
    }
    Ok(sets)
}
