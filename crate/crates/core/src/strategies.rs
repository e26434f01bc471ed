//! Learners and adversaries for the linear class, plus the explicit number of
//! forced mistakes guaranteed to the bucket-balancing bandit adversary.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::field::{dot_unchecked, rref_mod, FieldMatrix, FieldVec, Params};
use crate::game::{Adversary, Feedback, FeedbackMode, Learner, Round};
use crate::hypotheses::{HypothesisClass, Label, LinearClass};
use crate::lemmas::{
    bucket_counts_unchecked, stream_rng, within_bucket_bound, CoeffSet, EXHAUSTIVE_LIMIT,
};

/// Standard-model learner for `F_L(p,n)` that keeps the affine space of
/// coefficient vectors consistent with the answers so far and predicts with
/// its lexicographically least member.
#[derive(Debug, Clone)]
pub struct SubspaceLearner {
    params: Params,
    system: FieldMatrix,
    rank: usize,
    least: Option<FieldVec>,
    rounds: usize,
}

impl SubspaceLearner {
    pub fn new(params: Params) -> Self {
        Self {
            params,
            system: FieldMatrix::augmented(params.n(), Vec::new()).expect("empty system"),
            rank: 0,
            least: None,
            rounds: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn constraints(&self) -> &FieldMatrix {
        &self.system
    }

    /// Lexicographically least `a` with `a·x_t = y_t` for every recorded equation.
    pub fn least_consistent(&mut self) -> FieldVec {
        if let Some(a) = &self.least {
            return a.clone();
        }
        let params = self.params;
        let mut sys = self.system.clone();
        let mut rank = self.rank;
        // Fix coordinates left to right. Each one is either determined by the
        // equations so far or free, and a free coordinate takes the value 0.
        for i in 0..params.n() {
            let mut probe = sys.clone();
            probe.push(params.basis(i), 0).expect("width matches");
            let r = rref_mod(&probe, &params).expect("valid system");
            if r.rank > rank {
                sys = probe;
                rank = r.rank;
            }
        }
        let r = rref_mod(&sys, &params).expect("valid system");
        debug_assert!(r.consistent && r.rank == params.n());
        let rhs = r.matrix.rhs().expect("augmented");
        let mut a = vec![0; params.n()];
        for (row, &col) in r.pivots.iter().enumerate() {
            a[col] = rhs[row];
        }
        let a = params.vector(a).expect("in range");
        self.least = Some(a.clone());
        a
    }

    /// `a·x` for the least consistent `a`. When `x` lies in the row space of
    /// the equations every consistent `a` gives this same label.
    pub fn predict(&mut self, x: &FieldVec) -> Label {
        let a = self.least_consistent();
        dot_unchecked(a.entries(), x.entries(), self.params.p())
    }

    /// Records `a·x = y`.
    pub fn observe_label(&mut self, x: &FieldVec, y: Label) -> Result<()> {
        let mut next = self.system.clone();
        next.push(x.clone(), y)?;
        let r = rref_mod(&next, &self.params)?;
        if !r.consistent {
            return Err(Error::ProtocolViolation {
                round: self.rounds,
                reason: format!("label {y} at {x} contradicts earlier answers"),
            });
        }
        self.system = next;
        if r.rank != self.rank {
            self.rank = r.rank;
            self.least = None;
        }
        Ok(())
    }
}

impl Learner<LinearClass> for SubspaceLearner {
    fn start(&mut self, class: &LinearClass, _mode: FeedbackMode) -> Result<()> {
        *self = Self::new(class.params);
        Ok(())
    }

    fn act(&mut self, x: &FieldVec) -> Label {
        self.predict(x)
    }

    fn observe(&mut self, round: &Round<FieldVec>) -> Result<()> {
        self.rounds += 1;
        match round.feedback {
            Feedback::Label(y) => self.observe_label(&round.query, y),
            Feedback::Ok(true) => self.observe_label(&round.query, round.guess),
            // with two labels a "no" names the other one
            Feedback::Ok(false) if self.params.p() == 2 => {
                self.observe_label(&round.query, 1 - round.guess)
            }
            Feedback::Ok(false) => Ok(()),
        }
    }
}

/// Bandit learner over an explicit coefficient set: guesses the label shared
/// by the most remaining coefficient vectors, smallest label on ties.
#[derive(Debug, Clone)]
pub struct PluralityLearner {
    initial: CoeffSet,
    remaining: CoeffSet,
    rounds: usize,
}

impl PluralityLearner {
    pub fn new(set: CoeffSet) -> Self {
        Self {
            initial: set.clone(),
            remaining: set,
            rounds: 0,
        }
    }

    /// Starts from all of `{1,…,p-1}^n`.
    pub fn full(params: Params) -> Result<Self> {
        Ok(Self::new(CoeffSet::full(params)?))
    }

    pub fn remaining(&self) -> &CoeffSet {
        &self.remaining
    }

    pub fn guess(&self, x: &FieldVec) -> Label {
        let p = self.remaining.params().p();
        bucket_counts_unchecked(self.remaining.members(), x, p).argmax()
    }

    pub fn update(
        &mut self,
        x: &FieldVec,
        constraint: crate::hypotheses::Constraint,
    ) -> Result<()> {
        let p = self.remaining.params().p();
        self.remaining
            .retain(|a| constraint.admits(dot_unchecked(a.entries(), x.entries(), p)));
        if self.remaining.is_empty() {
            return Err(Error::ProtocolViolation {
                round: self.rounds,
                reason: "no coefficient vector in the learner's set is consistent".into(),
            });
        }
        Ok(())
    }
}

impl Learner<LinearClass> for PluralityLearner {
    fn start(&mut self, class: &LinearClass, _mode: FeedbackMode) -> Result<()> {
        if class.params != *self.initial.params() {
            return Err(usage("plurality learner built for different parameters"));
        }
        if self.initial.is_empty() {
            return Err(usage("plurality learner needs a nonempty initial set"));
        }
        self.remaining = self.initial.clone();
        self.rounds = 0;
        Ok(())
    }

    fn act(&mut self, x: &FieldVec) -> Label {
        self.guess(x)
    }

    fn observe(&mut self, round: &Round<FieldVec>) -> Result<()> {
        self.rounds += 1;
        self.update(&round.query, round.constraint())
    }
}

/// Guesses a uniform label each round.
#[derive(Debug, Clone)]
pub struct RandomLearner {
    seed: u64,
    rng: ChaCha8Rng,
    labels: u64,
}

impl RandomLearner {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: stream_rng(seed, 0),
            labels: 1,
        }
    }
}

impl<C: HypothesisClass> Learner<C> for RandomLearner {
    fn start(&mut self, class: &C, _mode: FeedbackMode) -> Result<()> {
        self.rng = stream_rng(self.seed, 0);
        self.labels = class.label_count();
        Ok(())
    }

    fn act(&mut self, _x: &C::Point) -> Label {
        self.rng.gen_range(0..self.labels)
    }

    fn observe(&mut self, _round: &Round<C::Point>) -> Result<()> {
        Ok(())
    }
}

/// Standard-model adversary: queries `e_1, …, e_n` in turn, answers one more
/// than the guess, then stops. Coordinates of `a` are independent, so every
/// answer sequence is realized by some `f_a`.
#[derive(Debug, Clone)]
pub struct BasisAdversary {
    params: Params,
    next: usize,
}

impl BasisAdversary {
    pub fn new(params: Params) -> Self {
        Self { params, next: 0 }
    }
}

impl Adversary<LinearClass> for BasisAdversary {
    fn start(&mut self, class: &LinearClass, mode: FeedbackMode) -> Result<()> {
        if mode != FeedbackMode::Standard {
            return Err(usage("basis adversary plays the standard model"));
        }
        self.params = class.params;
        self.next = 0;
        Ok(())
    }

    fn query(&mut self) -> Result<Option<FieldVec>> {
        if self.next == self.params.n() {
            return Ok(None);
        }
        self.next += 1;
        Ok(Some(self.params.basis(self.next - 1)))
    }

    fn answer(&mut self, _x: &FieldVec, guess: Label) -> Result<Feedback> {
        Ok(Feedback::Label((guess + 1) % self.params.p()))
    }
}

/// Standard-model adversary that queries uniform points and, whenever the
/// answers so far leave the label free, answers a uniform label other than
/// the guess. Forced labels are answered truthfully.
#[derive(Debug, Clone)]
pub struct RandomConsistentAdversary {
    seed: u64,
    rng: ChaCha8Rng,
    known: SubspaceLearner,
}

impl RandomConsistentAdversary {
    pub fn new(params: Params, seed: u64) -> Self {
        Self {
            seed,
            rng: stream_rng(seed, 0),
            known: SubspaceLearner::new(params),
        }
    }

    fn forced(&mut self, x: &FieldVec) -> Option<Label> {
        let params = self.known.params;
        let mut probe = self.known.system.clone();
        probe.push(x.clone(), 0).ok()?;
        let r = rref_mod(&probe, &params).ok()?;
        (r.rank == self.known.rank).then(|| self.known.predict(x))
    }
}

impl Adversary<LinearClass> for RandomConsistentAdversary {
    fn start(&mut self, class: &LinearClass, mode: FeedbackMode) -> Result<()> {
        if mode != FeedbackMode::Standard {
            return Err(usage(
                "random consistent adversary plays the standard model",
            ));
        }
        *self = Self::new(class.params, self.seed);
        Ok(())
    }

    fn query(&mut self) -> Result<Option<FieldVec>> {
        let params = self.known.params;
        Ok(Some(crate::lemmas::random_vector(&mut self.rng, &params)))
    }

    fn answer(&mut self, x: &FieldVec, guess: Label) -> Result<Feedback> {
        let p = self.known.params.p();
        if let Some(y) = self.forced(x) {
            return Ok(Feedback::Label(y));
        }
        let y = if p == 1 {
            guess
        } else {
            (guess + self.rng.gen_range(1..p)) % p
        };
        Ok(Feedback::Label(y))
    }

    fn observe(&mut self, round: &Round<FieldVec>) -> Result<()> {
        if let Feedback::Label(y) = round.feedback {
            self.known.observe_label(&round.query, y)?;
        }
        Ok(())
    }
}

/// How the bucket-balancing adversary searches for its query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuerySearch {
    /// Random candidates per round when the space is too big to scan.
    pub samples: u64,
    pub seed: u64,
    /// Scan all of `{0,…,p-1}^n` when it has at most this many elements.
    pub exhaustive_limit: u128,
}

impl QuerySearch {
    pub fn new(seed: u64) -> Self {
        Self {
            samples: 64,
            seed,
            exhaustive_limit: EXHAUSTIVE_LIMIT,
        }
    }
}

/// Bookkeeping for one round of [`BucketAdversary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BucketRound {
    pub size_before: u64,
    pub max_bucket: u64,
    pub size_after: u64,
}

/// Bandit adversary that forces a mistake every round.
///
/// It tracks `R`, the coefficient vectors in `{1,…,p-1}^n` consistent with
/// its answers; queries the point whose largest label bucket within `R` is
/// smallest; answers "no"; and drops the guessed bucket from `R`. It stops
/// once `|R| < p² ln p`.
#[derive(Debug, Clone)]
pub struct BucketAdversary {
    params: Params,
    search: QuerySearch,
    remaining: CoeffSet,
    log: Vec<BucketRound>,
    pending: Option<u64>,
    threshold_reached: bool,
}

impl BucketAdversary {
    pub fn new(params: Params, search: QuerySearch) -> Result<Self> {
        Ok(Self {
            params,
            search,
            remaining: CoeffSet::full(params)?,
            log: Vec::new(),
            pending: None,
            threshold_reached: false,
        })
    }

    pub fn remaining(&self) -> &CoeffSet {
        &self.remaining
    }

    pub fn log(&self) -> &[BucketRound] {
        &self.log
    }

    /// The adversary stopped because `|R|` fell below `p² ln p`.
    pub fn threshold_reached(&self) -> bool {
        self.threshold_reached
    }

    /// Query with the smallest maximum bucket over `R`; earliest candidate on ties.
    pub fn best_query(&self) -> (FieldVec, u64) {
        let params = self.params;
        let members = self.remaining.members();
        let score = |u: &FieldVec| bucket_counts_unchecked(members, u, params.p()).max();
        let small = params
            .space_size()
            .is_some_and(|s| s <= self.search.exhaustive_limit);
        if small {
            let size = params.space_size().expect("small") as u64;
            let (max, index) = (0..size)
                .into_par_iter()
                .map(|i| (score(&params.vector_at(i as u128)), i))
                .min()
                .expect("nonempty space");
            (params.vector_at(index as u128), max)
        } else {
            let round = self.log.len() as u64;
            let mut rng = stream_rng(self.search.seed, round);
            let mut best: Option<(FieldVec, u64)> = None;
            for _ in 0..self.search.samples.max(1) {
                let u = crate::lemmas::random_vector(&mut rng, &params);
                let s = score(&u);
                if best.as_ref().is_none_or(|(_, b)| s < *b) {
                    best = Some((u, s));
                }
            }
            best.expect("at least one sample")
        }
    }
}

/// `p² ln p`.
pub fn adversary_threshold(p: u64) -> f64 {
    let p = p as f64;
    p * p * p.ln()
}

/// `size < p² ln p`. Far from the boundary this compares directly; near it,
/// `size² < p⁴ (ln p)²` is used instead.
pub fn below_threshold(size: u64, p: u64) -> bool {
    let t = adversary_threshold(p);
    let s = size as f64;
    if (s - t).abs() > 1e-9 * t.max(1.0) {
        s < t
    } else {
        let pf = p as f64;
        let ln = pf.ln();
        s * s < pf.powi(4) * ln * ln
    }
}

impl Adversary<LinearClass> for BucketAdversary {
    fn start(&mut self, class: &LinearClass, mode: FeedbackMode) -> Result<()> {
        if mode != FeedbackMode::Bandit {
            return Err(usage("bucket adversary plays the bandit model"));
        }
        *self = Self::new(class.params, self.search)?;
        Ok(())
    }

    fn query(&mut self) -> Result<Option<FieldVec>> {
        let size = self.remaining.len() as u64;
        if size == 0 || below_threshold(size, self.params.p()) {
            self.threshold_reached = size > 0 || self.threshold_reached;
            return Ok(None);
        }
        let (x, max) = self.best_query();
        if !within_bucket_bound(max, size, self.params.p()) {
            return Err(Error::BoundViolated {
                round: self.log.len() + 1,
                detail: format!(
                    "best query {x} has a bucket of {max} > |R|/p + 2√|R| with |R| = {size}"
                ),
            });
        }
        self.pending = Some(max);
        Ok(Some(x))
    }

    fn answer(&mut self, _x: &FieldVec, _guess: Label) -> Result<Feedback> {
        Ok(Feedback::Ok(false))
    }

    fn observe(&mut self, round: &Round<FieldVec>) -> Result<()> {
        let p = self.params.p();
        let size_before = self.remaining.len() as u64;
        let x = &round.query;
        let guess = round.guess;
        self.remaining
            .retain(|a| dot_unchecked(a.entries(), x.entries(), p) != guess);
        self.log.push(BucketRound {
            size_before,
            max_bucket: self.pending.take().unwrap_or(0),
            size_after: self.remaining.len() as u64,
        });
        Ok(())
    }
}

/// Number of mistakes the bucket adversary is guaranteed to force.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundBound {
    pub p: u64,
    pub n: usize,
    /// Largest `b` with `(1 - (1 + 2/√ln p)/p)^(b-1) · (p-1)^n >= p² ln p`.
    pub b: u64,
}

impl RoundBound {
    /// `n·p·ln p`.
    pub fn asymptote(&self) -> f64 {
        let p = self.p as f64;
        self.n as f64 * p * p.ln()
    }

    pub fn ratio(&self) -> f64 {
        self.b as f64 / self.asymptote()
    }
}

/// Per-round shrink factor `1 - (1 + 2/√ln p)/p`.
pub fn shrink_factor(p: u64) -> f64 {
    let pf = p as f64;
    1.0 - (1.0 + 2.0 / pf.ln().sqrt()) / pf
}

/// Largest `b` for which `shrink^(b-1)·(p-1)^n >= p² ln p`, found by
/// increasing `b` until the inequality fails; `0` if it fails at `b = 1`.
/// Evaluated in log space so large `n` does not overflow.
pub fn lower_bound_rounds(params: &Params) -> Result<RoundBound> {
    let p = params.p();
    let log_start = params.n() as f64 * ((p - 1) as f64).ln();
    let log_target = adversary_threshold(p).ln();
    let shrink = shrink_factor(p);
    let mut b = 0;
    if shrink <= 0.0 {
        // p = 2: the factor is negative, so only b = 1 can hold.
        b = u64::from(log_start >= log_target);
    } else {
        let holds = |b: u64| (b - 1) as f64 * shrink.ln() + log_start >= log_target;
        while holds(b + 1) {
            b += 1;
        }
    }
    Ok(RoundBound {
        p,
        n: params.n(),
        b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{run_game, verify_transcript};

    fn params(p: u64, n: usize) -> Params {
        Params::new(p, n).unwrap()
    }

    fn v(p: &Params, e: &[u64]) -> FieldVec {
        p.vector(e.to_vec()).unwrap()
    }

    #[test]
    fn subspace_predictions() {
        let p = params(5, 2);
        let mut l = SubspaceLearner::new(p);
        assert_eq!(l.predict(&p.zero()), 0);
        l.observe_label(&v(&p, &[1, 0]), 2).unwrap();
        assert_eq!(l.predict(&v(&p, &[1, 0])), 2);
        assert_eq!(l.least_consistent(), v(&p, &[2, 0]));
        assert_eq!(l.predict(&v(&p, &[0, 1])), 0);
    }

    #[test]
    fn least_consistent_matches_enumeration() {
        let p = params(3, 3);
        let class = LinearClass::new(p);
        let mut l = SubspaceLearner::new(p);
        let eqs = [(v(&p, &[0, 1, 1]), 2), (v(&p, &[1, 0, 2]), 1)];
        for (x, y) in &eqs {
            l.observe_label(x, *y).unwrap();
        }
        let oracle = (0..class.len())
            .map(|i| class.coefficients(i))
            .find(|a| {
                eqs.iter()
                    .all(|(x, y)| dot_unchecked(a.entries(), x.entries(), 3) == *y)
            })
            .unwrap();
        assert_eq!(l.least_consistent(), oracle);
    }

    #[test]
    fn subspace_rank_growth() {
        let p = params(5, 3);
        let mut l = SubspaceLearner::new(p);
        l.observe_label(&v(&p, &[1, 2, 0]), 4).unwrap();
        assert_eq!(l.rank(), 1);
        // repeating a forced equation leaves the rank alone
        l.observe_label(&v(&p, &[2, 4, 0]), 3).unwrap();
        assert_eq!(l.rank(), 1);
        assert!(l.observe_label(&v(&p, &[2, 4, 0]), 0).is_err());
        l.observe_label(&v(&p, &[0, 0, 1]), 1).unwrap();
        l.observe_label(&v(&p, &[0, 1, 0]), 3).unwrap();
        assert_eq!(l.rank(), 3);
        // a = (3, 3, 1) is now pinned down
        assert_eq!(l.least_consistent(), v(&p, &[3, 3, 1]));
    }

    #[test]
    fn plurality_examples() {
        let p = params(5, 2);
        let single = CoeffSet::new(p, vec![v(&p, &[1, 1])]).unwrap();
        let l = PluralityLearner::new(single);
        assert_eq!(l.guess(&v(&p, &[2, 4])), 1);

        let mut l = PluralityLearner::full(p).unwrap();
        let x = v(&p, &[1, 1]);
        assert_eq!(l.guess(&x), 0);
        l.update(&x, crate::hypotheses::Constraint::NotEquals(0))
            .unwrap();
        assert_eq!(l.remaining().len(), 12);
    }

    #[test]
    fn basis_adversary_forces_n() {
        for n in 1..=4 {
            let p = params(5, n);
            let class = LinearClass::new(p);
            let mut learner = SubspaceLearner::new(p);
            let mut adv = BasisAdversary::new(p);
            let t = run_game(&class, &mut learner, &mut adv, FeedbackMode::Standard, 100).unwrap();
            assert_eq!(t.mistakes(), n);
            assert_eq!(t.len(), n);
            assert_eq!(learner.rank(), n);
            assert!(verify_transcript(&class, &t));
        }
        let p = params(7, 3);
        let class = LinearClass::new(p);
        let t = run_game(
            &class,
            &mut RandomLearner::new(9),
            &mut BasisAdversary::new(p),
            FeedbackMode::Standard,
            100,
        )
        .unwrap();
        assert_eq!(t.mistakes(), 3);
    }

    #[test]
    fn threshold_values() {
        assert!((adversary_threshold(5) - 40.236).abs() < 1e-3);
        assert!(!below_threshold(64, 5));
        assert!(below_threshold(40, 5));
        assert!(!below_threshold(41, 5));
    }

    /// Direct evaluation of the inequality by repeated multiplication.
    fn bound_oracle(p: u64, n: i32) -> u64 {
        let pf = p as f64;
        let shrink = 1.0 - (1.0 + 2.0 / pf.ln().sqrt()) / pf;
        let target = pf * pf * pf.ln();
        let mut lhs = (pf - 1.0).powi(n);
        let mut b = 0;
        while lhs >= target {
            b += 1;
            lhs *= shrink;
        }
        b
    }

    #[test]
    fn round_bound_values() {
        assert_eq!(bound_oracle(5, 3), 1);
        assert_eq!(bound_oracle(11, 3), 6);
        assert_eq!(lower_bound_rounds(&params(5, 3)).unwrap().b, 1);
        assert_eq!(lower_bound_rounds(&params(11, 3)).unwrap().b, 6);
        for p in [3u64, 5, 7, 11, 13, 101] {
            for n in 1..12 {
                assert_eq!(
                    lower_bound_rounds(&params(p, n)).unwrap().b,
                    bound_oracle(p, n as i32)
                );
            }
        }
        // (p-1)^n = 1 never reaches 4 ln 2
        assert_eq!(lower_bound_rounds(&params(2, 3)).unwrap().b, 0);
        let big = lower_bound_rounds(&params(101, 50)).unwrap();
        assert!(big.ratio() > 0.0 && big.ratio() < 1.0, "{}", big.ratio());
    }

    #[test]
    fn round_bound_monotone_in_n() {
        for p in [3u64, 5, 7, 11] {
            let bs: Vec<u64> = (1..30)
                .map(|n| lower_bound_rounds(&params(p, n)).unwrap().b)
                .collect();
            assert!(bs.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn bucket_adversary_small_run() {
        let p = params(5, 3);
        let class = LinearClass::new(p);
        let mut adv = BucketAdversary::new(p, QuerySearch::new(0)).unwrap();
        let mut learner = PluralityLearner::full(p).unwrap();
        let t = run_game(&class, &mut learner, &mut adv, FeedbackMode::Bandit, 1000).unwrap();
        assert!(adv.threshold_reached());
        assert!(t.mistakes() as u64 >= lower_bound_rounds(&p).unwrap().b);
        assert_eq!(t.mistakes(), t.len());
        assert!(verify_transcript(&class, &t));
        assert_eq!(adv.remaining(), learner.remaining());
    }

    #[test]
    fn bucket_adversary_sampled_search() {
        let p = params(7, 3);
        let class = LinearClass::new(p);
        let search = QuerySearch {
            samples: 64,
            seed: 3,
            exhaustive_limit: 0,
        };
        let mut adv = BucketAdversary::new(p, search).unwrap();
        let t = run_game(
            &class,
            &mut RandomLearner::new(1),
            &mut adv,
            FeedbackMode::Bandit,
            1000,
        )
        .unwrap();
        assert!(t.mistakes() as u64 >= lower_bound_rounds(&p).unwrap().b);
        assert!(verify_transcript(&class, &t));
    }

    #[test]
    fn wrong_modes_are_rejected() {
        let p = params(5, 2);
        let class = LinearClass::new(p);
        let mut adv = BucketAdversary::new(p, QuerySearch::new(0)).unwrap();
        let r = run_game(
            &class,
            &mut SubspaceLearner::new(p),
            &mut adv,
            FeedbackMode::Standard,
            5,
        );
        assert!(r.is_err());
        let r = run_game(
            &class,
            &mut SubspaceLearner::new(p),
            &mut BasisAdversary::new(p),
            FeedbackMode::Bandit,
            5,
        );
        assert!(r.is_err());
    }
}
