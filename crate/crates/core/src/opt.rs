//! Exact optimal mistake bounds for small explicit classes.
//!
//! A version space is a bitmask over the class's functions. Both values are
//! computed by memoized minimax against a fully adaptive adversary and a
//! deterministic learner. The adversary only queries points where the version
//! space disagrees, so every branch that counts strictly shrinks it.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::game::FeedbackMode;
use crate::hypotheses::{ExplicitClass, HypothesisClass};

/// Largest class the solver accepts.
pub const MAX_SOLVER_CLASS: usize = 20;

/// A set of function indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VersionSpace(pub u32);

impl VersionSpace {
    pub fn full(len: usize) -> Self {
        Self(if len == 32 {
            u32::MAX
        } else {
            (1u32 << len) - 1
        })
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Self(indices.into_iter().fold(0, |m, i| m | 1 << i))
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: &VersionSpace) -> bool {
        self.0 & !other.0 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OptValues {
    pub opt_s: u32,
    pub opt_b: u32,
}

/// Per-point label masks: `buckets[x][y]` holds the functions with `f(x) = y`.
struct Prepared {
    id: u64,
    label_count: usize,
    buckets: Vec<Vec<u32>>,
}

impl Prepared {
    fn new(class: &ExplicitClass) -> Result<Self> {
        if class.rows().len() > MAX_SOLVER_CLASS {
            return Err(Error::ClassTooLarge {
                size: class.rows().len(),
                cap: MAX_SOLVER_CLASS,
            });
        }
        let mut h = DefaultHasher::new();
        class.hash(&mut h);
        let k = class.label_count() as usize;
        let buckets = (0..class.domain_size())
            .map(|x| {
                let mut masks = vec![0u32; k];
                for (f, row) in class.rows().iter().enumerate() {
                    masks[row[x] as usize] |= 1 << f;
                }
                masks
            })
            .collect();
        Ok(Self {
            id: h.finish(),
            label_count: k,
            buckets,
        })
    }

    /// Nonempty label blocks of `v` at each point where `v` disagrees.
    fn splits(&self, v: u32) -> impl Iterator<Item = Vec<(usize, u32)>> + '_ {
        self.buckets.iter().filter_map(move |masks| {
            let parts: Vec<(usize, u32)> = masks
                .iter()
                .enumerate()
                .map(|(y, &m)| (y, m & v))
                .filter(|&(_, m)| m != 0)
                .collect();
            (parts.len() > 1).then_some(parts)
        })
    }
}

/// Memoized solver. One instance may serve many classes.
#[derive(Debug, Default)]
pub struct OptSolver {
    memo: HashMap<(u64, FeedbackMode, u32), u32>,
}

impl OptSolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cached_states(&self) -> usize {
        self.memo.len()
    }

    /// Worst-case mistakes with the true label revealed after each guess.
    pub fn opt_standard(&mut self, class: &ExplicitClass, v: VersionSpace) -> Result<u32> {
        let prep = Prepared::new(class)?;
        check_space(class, v)?;
        Ok(self.standard(&prep, v.0))
    }

    /// Worst-case mistakes with only yes/no revealed after each guess.
    pub fn opt_bandit(&mut self, class: &ExplicitClass, v: VersionSpace) -> Result<u32> {
        let prep = Prepared::new(class)?;
        check_space(class, v)?;
        Ok(self.bandit(&prep, v.0))
    }

    /// Both values on the full class.
    pub fn opt_values(&mut self, class: &ExplicitClass) -> Result<OptValues> {
        if class.rows().is_empty() {
            return Err(usage("class has no functions"));
        }
        Prepared::new(class)?;
        let full = VersionSpace::full(class.rows().len());
        Ok(OptValues {
            opt_s: self.opt_standard(class, full)?,
            opt_b: self.opt_bandit(class, full)?,
        })
    }

    fn standard(&mut self, c: &Prepared, v: u32) -> u32 {
        if v.count_ones() <= 1 {
            return 0;
        }
        let key = (c.id, FeedbackMode::Standard, v);
        if let Some(&val) = self.memo.get(&key) {
            return val;
        }
        let mut best = 0;
        for parts in c.splits(v).collect::<Vec<_>>() {
            let values: Vec<(usize, u32)> = parts
                .iter()
                .map(|&(y, m)| (y, self.standard(c, m)))
                .collect();
            // The learner may guess any label; the adversary picks the worst
            // realized true label for that guess.
            let learner = (0..c.label_count)
                .map(|guess| {
                    values
                        .iter()
                        .map(|&(y, val)| val + u32::from(y != guess))
                        .max()
                        .expect("at least two parts")
                })
                .min()
                .expect("at least one label");
            best = best.max(learner);
        }
        self.memo.insert(key, best);
        best
    }

    fn bandit(&mut self, c: &Prepared, v: u32) -> u32 {
        if v.count_ones() <= 1 {
            return 0;
        }
        let key = (c.id, FeedbackMode::Bandit, v);
        if let Some(&val) = self.memo.get(&key) {
            return val;
        }
        let mut best = 0;
        for parts in c.splits(v).collect::<Vec<_>>() {
            // Guessing a label nobody in v has just costs a mistake for free,
            // so the learner only guesses realized labels.
            let learner = parts
                .iter()
                .map(|&(_, hit)| {
                    let yes = self.bandit(c, hit);
                    let no = 1 + self.bandit(c, v & !hit);
                    yes.max(no)
                })
                .min()
                .expect("at least two parts");
            best = best.max(learner);
        }
        self.memo.insert(key, best);
        best
    }
}

fn check_space(class: &ExplicitClass, v: VersionSpace) -> Result<()> {
    if v.is_empty() {
        return Err(usage("version space is empty"));
    }
    if !v.is_subset(&VersionSpace::full(class.rows().len())) {
        return Err(usage("version space names functions outside the class"));
    }
    Ok(())
}

/// Convenience wrapper with a fresh solver.
pub fn opt_values(class: &ExplicitClass) -> Result<OptValues> {
    OptSolver::new().opt_values(class)
}
