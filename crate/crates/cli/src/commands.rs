use std::io::Write;
use std::path::Path;

use serde_json::json;

use bandit_lb::field::FieldVec;
use bandit_lb::game::{
    run_game, transcript_from_jsonl, transcript_to_jsonl, verify_transcript, Adversary,
    FeedbackMode, Learner, Transcript,
};
use bandit_lb::hypotheses::{HypothesisClass, LinearClass};
use bandit_lb::lemmas::{find_balanced_u_with, lemma4_bound, CoeffSet, SearchConfig};
use bandit_lb::opt::opt_values;
use bandit_lb::strategies::{
    lower_bound_rounds, BasisAdversary, BucketAdversary, PluralityLearner, QuerySearch,
    RandomConsistentAdversary, RandomLearner, SubspaceLearner,
};
use bandit_lb::verify::{self, LemmaReport};

use crate::inputs::{self, ClassSpec};
use crate::{
    BoundArgs, Failure, FinduArgs, Format, LemmaArgs, OptArgs, PlayArgs, ReplayArgs, Which,
};

type Outcome = Result<(), Failure>;

/// Writes `text` to `out`, or to stdout when no path is given.
fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_line(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Failure::Usage(e.to_string());
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

pub fn lemma(a: LemmaArgs) -> Outcome {
    let cells = inputs::grid(&a.p, &a.n)?;
    let sweeps: &[Which] = match a.which {
        Which::All => &[
            Which::Marginal,
            Which::Conditional,
            Which::Joint,
            Which::Covariance,
            Which::Variance,
            Which::Multiples,
            Which::Balanced,
        ],
        ref one => std::slice::from_ref(one),
    };
    let mut reports: Vec<LemmaReport> = Vec::new();
    for params in &cells {
        for which in sweeps {
            let r = match which {
                Which::Marginal => verify::verify_marginal(params),
                Which::Conditional => verify::verify_conditional(params),
                Which::Joint => verify::verify_joint_counts(params, a.trials, a.seed),
                Which::Covariance => verify::verify_covariance(params),
                Which::Variance => verify::verify_variance(params, a.trials, a.seed),
                Which::Multiples => verify::verify_multiple_pairs(params, a.trials, a.seed),
                Which::Falselemma => verify::refute_false_lemma(params),
                Which::Balanced => {
                    verify::verify_balanced(params, a.trials, a.budget, a.seed, a.exhaustive)
                }
                Which::All => unreachable!(),
            }?;
            reports.push(r);
        }
    }
    let text = match a.format {
        Format::Json => reports.iter().map(json_line).collect(),
        Format::Csv => csv_text(
            &["lemma", "p", "n", "cases_checked", "violations"],
            reports
                .iter()
                .map(|r| {
                    vec![
                        r.lemma.clone(),
                        r.params.p.to_string(),
                        r.params.n.to_string(),
                        r.cases_checked.to_string(),
                        r.violations.len().to_string(),
                    ]
                })
                .collect(),
        )?,
    };
    emit(a.out.as_deref(), &text)?;
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| {
            format!(
                "{} p={} n={}: {} violations",
                r.lemma,
                r.params.p,
                r.params.n,
                r.violations.len()
            )
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join("; ")))
    }
}

pub fn findu(a: FinduArgs) -> Outcome {
    let params = inputs::params(a.p, a.n)?;
    let set = match &a.set {
        Some(path) => inputs::coeff_set(params, path)?,
        None => CoeffSet::full(params)?,
    };
    let r = find_balanced_u_with(
        &set,
        SearchConfig {
            budget: a.budget,
            seed: a.seed,
            exhaustive_fallback: a.exhaustive,
        },
    );
    let report = json!({
        "p": params.p(),
        "n": params.n(),
        "size": set.len(),
        "success": r.success,
        "u": r.u.as_ref().map(FieldVec::entries),
        "buckets": r.buckets,
        "bound": lemma4_bound(set.len() as u64, params.p()),
        "trials": r.trials,
        "exhaustive": r.exhaustive,
        "attempts": r.attempts,
    });
    emit(a.out.as_deref(), &json_line(&report))?;
    if r.success {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "no balanced u within {} trials",
            r.trials
        )))
    }
}

fn learner(
    name: &str,
    params: bandit_lb::field::Params,
) -> Result<Box<dyn Learner<LinearClass>>, Failure> {
    Ok(match name {
        "subspace" => Box::new(SubspaceLearner::new(params)),
        "plurality" => Box::new(PluralityLearner::full(params)?),
        other => Box::new(RandomLearner::new(random_seed(other, "learner")?)),
    })
}

fn random_seed(name: &str, role: &str) -> Result<u64, Failure> {
    name.strip_prefix("random:")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Failure::Usage(format!("unknown {role} `{name}`")))
}

// Built once per process; variant size does not matter.
#[allow(clippy::large_enum_variant)]
enum AnyAdversary {
    Basis(BasisAdversary),
    Bucket(BucketAdversary),
    Random(RandomConsistentAdversary),
}

impl AnyAdversary {
    fn as_dyn(&mut self) -> &mut dyn Adversary<LinearClass> {
        match self {
            AnyAdversary::Basis(a) => a,
            AnyAdversary::Bucket(a) => a,
            AnyAdversary::Random(a) => a,
        }
    }
}

pub fn play(a: PlayArgs) -> Outcome {
    let params = inputs::params(a.p, a.n)?;
    let class = LinearClass::new(params);
    let mode = FeedbackMode::from(a.mode);
    let mut learner = learner(&a.learner, params)?;
    let mut adversary = match a.adversary.as_str() {
        "basis-adversary" => AnyAdversary::Basis(BasisAdversary::new(params)),
        "lemma4-adversary" => {
            AnyAdversary::Bucket(BucketAdversary::new(params, QuerySearch::new(a.seed))?)
        }
        other => AnyAdversary::Random(RandomConsistentAdversary::new(
            params,
            random_seed(other, "adversary")?,
        )),
    };
    let t = run_game(
        &class,
        learner.as_mut(),
        adversary.as_dyn(),
        mode,
        a.max_rounds,
    )?;
    if let Some(path) = &a.out {
        std::fs::write(path, transcript_to_jsonl(&class, &t))?;
    }
    let b = lower_bound_rounds(&params)?.b;
    let threshold_reached = match &adversary {
        AnyAdversary::Bucket(adv) => Some(adv.threshold_reached()),
        _ => None,
    };
    let summary = json!({
        "mistakes": t.mistakes(),
        "rounds": t.len(),
        "b_bound": b,
        "threshold_reached": threshold_reached,
    });
    emit(None, &json_line(&summary))?;
    if !verify_transcript(&class, &t) {
        return Err(Failure::Check(
            "transcript has no consistent function".into(),
        ));
    }
    // The bound is only promised for games played to the threshold.
    if threshold_reached == Some(true) && (t.mistakes() as u64) < b {
        return Err(Failure::Check(format!(
            "{} mistakes, bound promises {b}",
            t.mistakes()
        )));
    }
    Ok(())
}

fn replay_with<C: HypothesisClass>(class: &C, text: &str, mode: FeedbackMode) -> Outcome {
    let t: Transcript<C::Point> = transcript_from_jsonl(class, text, mode)?;
    let verified = verify_transcript(class, &t);
    let mode = match t.mode {
        FeedbackMode::Standard => "standard",
        FeedbackMode::Bandit => "bandit",
    };
    let summary = json!({
        "rounds": t.len(),
        "mistakes": t.mistakes(),
        "mode": mode,
        "verified": verified,
    });
    emit(None, &json_line(&summary))?;
    if verified {
        Ok(())
    } else {
        Err(Failure::Protocol(
            "no function is consistent with the transcript".into(),
        ))
    }
}

pub fn replay(a: ReplayArgs) -> Outcome {
    let text = std::fs::read_to_string(&a.transcript)?;
    let mode = FeedbackMode::from(a.mode);
    let spec = match (&a.class, a.p, a.n) {
        (Some(c), None, None) => ClassSpec::parse(c)?.1,
        (None, Some(p), Some(n)) => ClassSpec::Linear(LinearClass::new(inputs::params(p, n)?)),
        _ => {
            return Err(Failure::Usage(
                "give either --class or both --p and --n".into(),
            ))
        }
    };
    match spec {
        ClassSpec::Linear(c) => replay_with(&c, &text, mode),
        ClassSpec::Explicit(c) => replay_with(&c, &text, mode),
    }
}

pub fn opt(a: OptArgs) -> Outcome {
    let name = a.class.or(a.class_flag).expect("clap requires one");
    let (name, spec) = ClassSpec::parse(&name)?;
    let class = spec.explicit()?;
    let v = opt_values(&class)?;
    let report = json!({
        "class": name,
        "k": class.label_count(),
        "m": class.domain_size(),
        "opt_s": v.opt_s,
        "opt_b": v.opt_b,
    });
    emit(a.out.as_deref(), &json_line(&report))
}

pub fn bound(a: BoundArgs) -> Outcome {
    let cells = inputs::grid(&a.p, &a.n)?;
    let bounds = cells
        .iter()
        .map(lower_bound_rounds)
        .collect::<Result<Vec<_>, _>>()?;
    let text = match a.format {
        Format::Csv => csv_text(
            &["p", "n", "b", "n_p_ln_p", "ratio"],
            bounds
                .iter()
                .map(|r| {
                    vec![
                        r.p.to_string(),
                        r.n.to_string(),
                        r.b.to_string(),
                        r.asymptote().to_string(),
                        r.ratio().to_string(),
                    ]
                })
                .collect(),
        )?,
        Format::Json => bounds
            .iter()
            .map(|r| {
                json_line(&json!({
                    "p": r.p,
                    "n": r.n,
                    "b": r.b,
                    "n_p_ln_p": r.asymptote(),
                    "ratio": r.ratio(),
                }))
            })
            .collect(),
    };
    emit(a.out.as_deref(), &text)
}
