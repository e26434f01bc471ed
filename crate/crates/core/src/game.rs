//! The online protocol for standard and bandit feedback.
//!
//! Each round the adversary names a point, the learner guesses a label, and
//! the adversary answers with the true label (standard) or yes/no (bandit).
//! The adversary is adaptive: it sees the guess before answering and may
//! switch target functions freely, provided some function in the class stays
//! consistent with every answer. [`run_game`] enforces that after each round.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypotheses::{consistent_subset, Constraint, HypothesisClass, Label};

/// Largest class the engine will track explicitly.
pub const ENGINE_CLASS_CAP: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackMode {
    Standard,
    Bandit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feedback {
    /// The true label (standard feedback).
    Label(Label),
    /// Whether the guess was right (bandit feedback).
    Ok(bool),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round<P> {
    pub query: P,
    pub guess: Label,
    pub feedback: Feedback,
}

impl<P> Round<P> {
    pub fn is_mistake(&self) -> bool {
        match self.feedback {
            Feedback::Label(y) => y != self.guess,
            Feedback::Ok(ok) => !ok,
        }
    }

    /// What the answer reveals about `f(query)`.
    pub fn constraint(&self) -> Constraint {
        match self.feedback {
            Feedback::Label(y) => Constraint::Equals(y),
            Feedback::Ok(true) => Constraint::Equals(self.guess),
            Feedback::Ok(false) => Constraint::NotEquals(self.guess),
        }
    }

    fn matches(&self, mode: FeedbackMode) -> bool {
        matches!(
            (mode, self.feedback),
            (FeedbackMode::Standard, Feedback::Label(_)) | (FeedbackMode::Bandit, Feedback::Ok(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript<P> {
    pub mode: FeedbackMode,
    pub rounds: Vec<Round<P>>,
}

impl<P: Clone> Transcript<P> {
    pub fn new(mode: FeedbackMode) -> Self {
        Self {
            mode,
            rounds: Vec::new(),
        }
    }

    pub fn mistakes(&self) -> usize {
        self.rounds.iter().filter(|r| r.is_mistake()).count()
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn constraints(&self) -> Vec<(P, Constraint)> {
        self.rounds
            .iter()
            .map(|r| (r.query.clone(), r.constraint()))
            .collect()
    }
}

/// A learner: `start` once, then `act` and `observe` once per round.
pub trait Learner<C: HypothesisClass> {
    fn start(&mut self, class: &C, mode: FeedbackMode) -> Result<()>;

    fn act(&mut self, x: &C::Point) -> Label;

    fn observe(&mut self, round: &Round<C::Point>) -> Result<()>;
}

/// An adversary: `start` once; per round `query` (or `None` to stop), then
/// `answer` the learner's guess, then `observe` the completed round.
pub trait Adversary<C: HypothesisClass> {
    fn start(&mut self, class: &C, mode: FeedbackMode) -> Result<()>;

    fn query(&mut self) -> Result<Option<C::Point>>;

    fn answer(&mut self, x: &C::Point, guess: Label) -> Result<Feedback>;

    fn observe(&mut self, _round: &Round<C::Point>) -> Result<()> {
        Ok(())
    }
}

/// Plays up to `max_rounds` rounds. Fails with a protocol violation if the
/// adversary names an invalid point, answers in the wrong feedback format, or
/// answers so that no function in the class remains consistent.
pub fn run_game<C, L, A>(
    class: &C,
    learner: &mut L,
    adversary: &mut A,
    mode: FeedbackMode,
    max_rounds: usize,
) -> Result<Transcript<C::Point>>
where
    C: HypothesisClass,
    L: Learner<C> + ?Sized,
    A: Adversary<C> + ?Sized,
{
    if class.len() > ENGINE_CLASS_CAP {
        return Err(Error::ClassTooLarge {
            size: class.len(),
            cap: ENGINE_CLASS_CAP,
        });
    }
    let mut transcript = Transcript::new(mode);
    if max_rounds == 0 {
        return Ok(transcript);
    }
    learner.start(class, mode)?;
    adversary.start(class, mode)?;

    let mut alive: Vec<usize> = (0..class.len()).collect();
    for t in 1..=max_rounds {
        let violation = |reason: String| Error::ProtocolViolation { round: t, reason };
        let Some(x) = adversary.query()? else {
            break;
        };
        class
            .check_point(&x)
            .map_err(|e| violation(format!("invalid query: {e}")))?;
        let guess = learner.act(&x);
        let feedback = adversary.answer(&x, guess)?;
        let round = Round {
            query: x,
            guess,
            feedback,
        };
        if !round.matches(mode) {
            return Err(violation(format!("{feedback:?} is not {mode:?} feedback")));
        }
        if let Feedback::Label(y) = feedback {
            if y >= class.label_count() {
                return Err(violation(format!("label {y} out of range")));
            }
        }
        let constraint = round.constraint();
        alive.retain(|&f| constraint.admits(class.eval(f, &round.query)));
        if alive.is_empty() {
            return Err(violation(format!(
                "answer {feedback:?} to guess {guess} leaves no consistent function"
            )));
        }
        learner.observe(&round)?;
        adversary.observe(&round)?;
        transcript.rounds.push(round);
    }
    Ok(transcript)
}

/// True iff every round's feedback has the transcript's format and some
/// function in the class agrees with all of it.
pub fn verify_transcript<C: HypothesisClass>(class: &C, transcript: &Transcript<C::Point>) -> bool {
    if !transcript.rounds.iter().all(|r| r.matches(transcript.mode)) {
        return false;
    }
    if transcript
        .rounds
        .iter()
        .any(|r| class.check_point(&r.query).is_err())
    {
        return false;
    }
    !consistent_subset(class, &transcript.constraints()).is_empty()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum FeedbackRecord {
    Label { label: Label },
    Ok { ok: bool },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RoundRecord {
    t: usize,
    x: Vec<u64>,
    guess: Label,
    feedback: FeedbackRecord,
}

/// One JSON object per round, rounds numbered from 1.
pub fn transcript_to_jsonl<C: HypothesisClass>(
    class: &C,
    transcript: &Transcript<C::Point>,
) -> String {
    let mut out = String::new();
    for (i, r) in transcript.rounds.iter().enumerate() {
        let record = RoundRecord {
            t: i + 1,
            x: class.point_coords(&r.query),
            guess: r.guess,
            feedback: match r.feedback {
                Feedback::Label(label) => FeedbackRecord::Label { label },
                Feedback::Ok(ok) => FeedbackRecord::Ok { ok },
            },
        };
        out.push_str(&serde_json::to_string(&record).expect("plain record"));
        out.push('\n');
    }
    out
}

/// Parses [`transcript_to_jsonl`] output. The mode is read off the feedback
/// records; an empty transcript falls back to `default_mode`.
pub fn transcript_from_jsonl<C: HypothesisClass>(
    class: &C,
    text: &str,
    default_mode: FeedbackMode,
) -> Result<Transcript<C::Point>> {
    let mut rounds = Vec::new();
    let mut mode = None;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: line_no, msg };
        let rec: RoundRecord = serde_json::from_str(line).map_err(|e| parse_err(e.to_string()))?;
        if rec.t != rounds.len() + 1 {
            return Err(parse_err(format!(
                "expected t = {}, found {}",
                rounds.len() + 1,
                rec.t
            )));
        }
        let (feedback, this_mode) = match rec.feedback {
            FeedbackRecord::Label { label } => (Feedback::Label(label), FeedbackMode::Standard),
            FeedbackRecord::Ok { ok } => (Feedback::Ok(ok), FeedbackMode::Bandit),
        };
        if *mode.get_or_insert(this_mode) != this_mode {
            return Err(parse_err("mixed standard and bandit feedback".into()));
        }
        let query = class
            .point_from_coords(&rec.x)
            .map_err(|e| parse_err(e.to_string()))?;
        rounds.push(Round {
            query,
            guess: rec.guess,
            feedback,
        });
    }
    Ok(Transcript {
        mode: mode.unwrap_or(default_mode),
        rounds,
    })
}
