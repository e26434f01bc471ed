//! Flag and file parsing shared by the commands.

use std::path::Path;

use bandit_lb::field::{is_prime, Params};
use bandit_lb::hypotheses::{ExplicitClass, LinearClass, DEFAULT_TABLE_BUDGET};
use bandit_lb::lemmas::CoeffSet;

use crate::Failure;

/// Largest modulus the CLI accepts.
pub const MAX_P: u64 = 10_000;

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub fn params(p: u64, n: usize) -> Result<Params, Failure> {
    if p > MAX_P {
        return Err(bad(format!("p = {p} exceeds {MAX_P}")));
    }
    if n == 0 {
        return Err(bad("n must be at least 1"));
    }
    Ok(Params::new(p, n)?)
}

/// Parses `a,b,c` with items either numbers or inclusive ranges `a..b`.
pub fn number_list(text: &str) -> Result<Vec<u64>, Failure> {
    let num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|e| bad(format!("`{s}`: {e}")))
    };
    let mut out = Vec::new();
    for item in text.split(',') {
        match item.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
                if lo > hi {
                    return Err(bad(format!("empty range `{item}`")));
                }
                if hi - lo > 100_000 {
                    return Err(bad(format!("range `{item}` is too long")));
                }
                out.extend(lo..=hi);
            }
            None => out.push(num(item)?),
        }
    }
    Ok(out)
}

/// Every `(p, n)` cell of the two lists, p-major. Ranges of p skip composites;
/// a composite named on its own is an error.
pub fn grid(p_text: &str, n_text: &str) -> Result<Vec<Params>, Failure> {
    let mut primes = Vec::new();
    for item in p_text.split(',') {
        let values = number_list(item)?;
        if item.contains("..") {
            primes.extend(values.into_iter().filter(|&p| is_prime(p)));
        } else {
            primes.extend(values);
        }
    }
    if primes.is_empty() {
        return Err(bad(format!("no primes in `{p_text}`")));
    }
    let ns = number_list(n_text)?;
    let mut cells = Vec::new();
    for &p in &primes {
        for &n in &ns {
            cells.push(params(p, n as usize)?);
        }
    }
    Ok(cells)
}

/// Reads S: one vector per line, entries separated by spaces or commas.
pub fn coeff_set(params: Params, path: &Path) -> Result<CoeffSet, Failure> {
    let text = std::fs::read_to_string(path)?;
    let mut members = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let entries = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("{}:{}: {e}", path.display(), i + 1)))?;
        let v = params
            .vector(entries)
            .map_err(|e| bad(format!("{}:{}: {e}", path.display(), i + 1)))?;
        members.push(v);
    }
    Ok(CoeffSet::new(params, members)?)
}

/// A class named on the command line.
pub enum ClassSpec {
    Linear(LinearClass),
    Explicit(ExplicitClass),
}

impl ClassSpec {
    pub fn parse(text: &str) -> Result<(String, ClassSpec), Failure> {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| s.parse::<u64>().map_err(|e| bad(format!("`{text}`: {e}")));
        let spec = match parts[..] {
            ["fl", p, n] => ClassSpec::Linear(LinearClass::new(params(num(p)?, num(n)? as usize)?)),
            ["const", k] => ClassSpec::Explicit(ExplicitClass::constant(num(k)? as usize)?),
            _ => {
                let body = std::fs::read_to_string(text)
                    .map_err(|e| bad(format!("class `{text}`: {e}")))?;
                ClassSpec::Explicit(ExplicitClass::parse(&body)?)
            }
        };
        Ok((text.to_string(), spec))
    }

    /// The class as an explicit table.
    pub fn explicit(self) -> Result<ExplicitClass, Failure> {
        match self {
            ClassSpec::Linear(c) => Ok(c.tabulate(DEFAULT_TABLE_BUDGET)?),
            ClassSpec::Explicit(c) => Ok(c),
        }
    }
}
