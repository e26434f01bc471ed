//! Finite multiclass function classes.
//!
//! [`LinearClass`] is `F_L(p,n) = {x ↦ a·x mod p}`; [`ExplicitClass`] is a
//! dense label table used by the exact solver and read from text files.

use std::collections::HashSet;
use std::fmt::{self, Debug};

use crate::error::{usage, Error, Result};
use crate::field::{dot_unchecked, FieldVec, Params};

/// A class label, `0..k`.
pub type Label = u64;

/// Default cap on `|F|·|X|` entries for [`LinearClass::tabulate`].
pub const DEFAULT_TABLE_BUDGET: u128 = 1_000_000;

/// Common view of a finite class for the game engine.
///
/// Functions are addressed by their index in the class's canonical enumeration.
pub trait HypothesisClass {
    type Point: Clone + Debug;

    fn label_count(&self) -> u64;

    /// Number of functions.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `f(x)` for the function at index `f`. The point must be valid.
    fn eval(&self, f: usize, x: &Self::Point) -> Label;

    fn check_point(&self, x: &Self::Point) -> Result<()>;

    /// Integer coordinates of a point, as written to transcripts.
    fn point_coords(&self, x: &Self::Point) -> Vec<u64>;

    fn point_from_coords(&self, coords: &[u64]) -> Result<Self::Point>;
}

/// The linear class over `{0,…,p-1}^n` with label set `{0,…,p-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearClass {
    pub params: Params,
}

impl LinearClass {
    pub fn new(params: Params) -> Self {
        Self { params }
    }

    /// Coefficient vector of the function at `index`.
    pub fn coefficients(&self, index: usize) -> FieldVec {
        self.params.vector_at(index as u128)
    }

    /// Dense table: functions and points both in lexicographic order.
    pub fn tabulate(&self, budget: u128) -> Result<ExplicitClass> {
        let size = self.params.space_size().ok_or(Error::BudgetExceeded {
            what: "tabulation",
            needed: u128::MAX,
            budget,
        })?;
        let needed = size.saturating_mul(size);
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: "tabulation",
                needed,
                budget,
            });
        }
        if self.params.p() > 256 {
            return Err(usage("table classes hold at most 256 labels"));
        }
        let points: Vec<FieldVec> = self.params.all_vectors().collect();
        let rows = self
            .params
            .all_vectors()
            .map(|a| {
                points
                    .iter()
                    .map(|x| dot_unchecked(a.entries(), x.entries(), self.params.p()) as u8)
                    .collect()
            })
            .collect();
        ExplicitClass::new(
            self.params.p() as usize,
            points.iter().map(ToString::to_string).collect(),
            rows,
        )
    }
}

/// `f_a(x) = a·x mod p`.
pub fn eval_linear(a: &FieldVec, x: &FieldVec, params: &Params) -> Result<Label> {
    crate::field::dot_mod(a, x, params)
}

impl HypothesisClass for LinearClass {
    type Point = FieldVec;

    fn label_count(&self) -> u64 {
        self.params.p()
    }

    fn len(&self) -> usize {
        self.params
            .space_size()
            .and_then(|s| usize::try_from(s).ok())
            .unwrap_or(usize::MAX)
    }

    fn eval(&self, f: usize, x: &FieldVec) -> Label {
        dot_unchecked(self.coefficients(f).entries(), x.entries(), self.params.p())
    }

    fn check_point(&self, x: &FieldVec) -> Result<()> {
        self.params.vector(x.entries().to_vec()).map(drop)
    }

    fn point_coords(&self, x: &FieldVec) -> Vec<u64> {
        x.entries().to_vec()
    }

    fn point_from_coords(&self, coords: &[u64]) -> Result<FieldVec> {
        self.params.vector(coords.to_vec())
    }
}

/// A class given by its full label table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExplicitClass {
    label_count: usize,
    domain: Vec<String>,
    rows: Vec<Vec<u8>>,
}

impl Debug for ExplicitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExplicitClass")
            .field("k", &self.label_count)
            .field("m", &self.domain.len())
            .field("functions", &self.rows.len())
            .finish()
    }
}

impl ExplicitClass {
    pub fn new(label_count: usize, domain: Vec<String>, rows: Vec<Vec<u8>>) -> Result<Self> {
        if label_count == 0 || label_count > 256 {
            return Err(usage(format!("label count {label_count} not in 1..=256")));
        }
        let mut seen = HashSet::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != domain.len() {
                return Err(Error::Shape {
                    expected: domain.len(),
                    actual: row.len(),
                });
            }
            if let Some(&l) = row.iter().find(|&&l| l as usize >= label_count) {
                return Err(usage(format!(
                    "function {i}: label {l} >= k = {label_count}"
                )));
            }
            if !seen.insert(row) {
                return Err(usage(format!(
                    "function {i} duplicates an earlier function"
                )));
            }
        }
        Ok(Self {
            label_count,
            domain,
            rows,
        })
    }

    /// `k` constant functions over a single point.
    pub fn constant(k: usize) -> Result<Self> {
        let rows = (0..k).map(|l| vec![l as u8]).collect();
        Self::new(k, vec!["0".into()], rows)
    }

    /// Parses the text format: a header line `k m`, then one line of `m`
    /// labels per function. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let header = parse_numbers(hline, header)?;
        let [k, m] = header[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `k m`".into(),
            });
        };
        let mut rows = Vec::new();
        for (line, body) in lines {
            let row = parse_numbers(line, body)?;
            if row.len() != m as usize {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {m} labels, found {}", row.len()),
                });
            }
            if let Some(&l) = row.iter().find(|&&l| l >= k) {
                return Err(Error::Parse {
                    line,
                    msg: format!("label {l} >= k = {k}"),
                });
            }
            rows.push(row.into_iter().map(|l| l as u8).collect());
        }
        Self::new(k as usize, (0..m).map(|i| i.to_string()).collect(), rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.label_count, self.domain.len());
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn label(&self, f: usize, point: usize) -> Label {
        self.rows[f][point] as Label
    }
}

fn parse_numbers(line: usize, body: &str) -> Result<Vec<u64>> {
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>().map_err(|e| Error::Parse {
                line,
                msg: format!("`{tok}`: {e}"),
            })
        })
        .collect()
}

impl HypothesisClass for ExplicitClass {
    type Point = usize;

    fn label_count(&self) -> u64 {
        self.label_count as u64
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    fn eval(&self, f: usize, x: &usize) -> Label {
        self.label(f, *x)
    }

    fn check_point(&self, x: &usize) -> Result<()> {
        if *x < self.domain.len() {
            Ok(())
        } else {
            Err(usage(format!(
                "point {x} outside domain of size {}",
                self.domain.len()
            )))
        }
    }

    fn point_coords(&self, x: &usize) -> Vec<u64> {
        vec![*x as u64]
    }

    fn point_from_coords(&self, coords: &[u64]) -> Result<usize> {
        match coords {
            [i] => {
                let i = *i as usize;
                self.check_point(&i)?;
                Ok(i)
            }
            _ => Err(usage("explicit-class points have one coordinate")),
        }
    }
}

/// What a round of feedback says about `f(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Equals(Label),
    NotEquals(Label),
}

impl Constraint {
    pub fn admits(&self, label: Label) -> bool {
        match *self {
            Constraint::Equals(l) => label == l,
            Constraint::NotEquals(l) => label != l,
        }
    }
}

/// Indices of the functions satisfying every `(point, constraint)` pair.
pub fn consistent_subset<C: HypothesisClass>(
    class: &C,
    history: &[(C::Point, Constraint)],
) -> Vec<usize> {
    (0..class.len())
        .filter(|&f| history.iter().all(|(x, c)| c.admits(class.eval(f, x))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fl(p: u64, n: usize) -> LinearClass {
        LinearClass::new(Params::new(p, n).unwrap())
    }

    #[test]
    fn eval_examples() {
        let params = Params::new(5, 2).unwrap();
        let v = |e: &[u64]| params.vector(e.to_vec()).unwrap();
        assert_eq!(eval_linear(&v(&[1, 1]), &v(&[2, 3]), &params).unwrap(), 0);
        assert_eq!(
            eval_linear(&params.zero(), &v(&[4, 3]), &params).unwrap(),
            0
        );
        assert_eq!(eval_linear(&v(&[1, 2]), &v(&[1, 1]), &params).unwrap(), 3);
    }

    #[test]
    fn tabulate_small() {
        let t = fl(2, 1).tabulate(DEFAULT_TABLE_BUDGET).unwrap();
        assert_eq!(t.rows(), &[vec![0, 0], vec![0, 1]]);
        let t = fl(3, 1).tabulate(DEFAULT_TABLE_BUDGET).unwrap();
        assert_eq!(t.rows(), &[vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]]);
        let t = fl(2, 2).tabulate(DEFAULT_TABLE_BUDGET).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.domain_size(), 4);
        assert_eq!(t.domain()[2], "(1,0)");
    }

    #[test]
    fn tabulation_is_injective() {
        // ExplicitClass::new rejects duplicate rows, so success implies injectivity.
        for (p, n) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 2), (2, 4), (7, 2)] {
            let t = fl(p, n).tabulate(DEFAULT_TABLE_BUDGET).unwrap();
            assert_eq!(t.len() as u128, fl(p, n).params.space_size().unwrap());
        }
    }

    #[test]
    fn tabulate_budget() {
        assert!(matches!(
            fl(11, 3).tabulate(DEFAULT_TABLE_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn consistent_subset_examples() {
        let t = fl(2, 2).tabulate(DEFAULT_TABLE_BUDGET).unwrap();
        assert_eq!(consistent_subset(&t, &[]), vec![0, 1, 2, 3]);
        // point (1,0) is index 2; a·(1,0) = a_1
        let got = consistent_subset(&t, &[(2, Constraint::Equals(1))]);
        assert_eq!(got, vec![2, 3]);
        let got = consistent_subset(
            &t,
            &[(2, Constraint::Equals(0)), (2, Constraint::NotEquals(0))],
        );
        assert!(got.is_empty());
    }

    #[test]
    fn text_format() {
        let c = ExplicitClass::parse("3 2\n0 1\n# comment\n2 2\n\n1 0\n").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.label_count(), 3);
        assert_eq!(ExplicitClass::parse(&c.to_text()).unwrap(), c);
        assert!(ExplicitClass::parse("2 2\n0 2\n").is_err());
        assert!(ExplicitClass::parse("2 2\n0 1\n0 1\n").is_err());
        assert!(ExplicitClass::parse("2 2\n0\n").is_err());
        assert!(ExplicitClass::parse("").is_err());
    }

    #[test]
    fn constant_class() {
        let c = ExplicitClass::constant(3).unwrap();
        assert_eq!(c.rows(), &[vec![0], vec![1], vec![2]]);
    }
}
