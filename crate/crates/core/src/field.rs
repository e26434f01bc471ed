//! Arithmetic and linear algebra over GF(p).
//!
//! Field elements are canonical residues `0..p` stored as `u64`. Every
//! operation reduces immediately, so vectors and matrices compare bit-exactly.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};

/// Prime modulus and vector dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    p: u64,
    n: usize,
}

impl Params {
    /// Validates that `p` is prime and `n >= 1`.
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(usage("dimension n must be at least 1"));
        }
        Ok(Self { p, n })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `p^n`, or `None` if it does not fit in a `u128`.
    pub fn space_size(&self) -> Option<u128> {
        checked_pow(self.p, self.n)
    }

    /// `(p-1)^n`, the size of the all-nonzero cube.
    pub fn nonzero_cube_size(&self) -> Option<u128> {
        checked_pow(self.p - 1, self.n)
    }

    /// Builds a vector, checking length and range.
    pub fn vector(&self, entries: Vec<u64>) -> Result<FieldVec> {
        if entries.len() != self.n {
            return Err(Error::Shape {
                expected: self.n,
                actual: entries.len(),
            });
        }
        if let Some(&value) = entries.iter().find(|&&e| e >= self.p) {
            return Err(Error::OutOfRange { value, p: self.p });
        }
        Ok(FieldVec(entries))
    }

    pub fn zero(&self) -> FieldVec {
        FieldVec(vec![0; self.n])
    }

    /// The `i`-th standard basis vector.
    pub fn basis(&self, i: usize) -> FieldVec {
        let mut e = vec![0; self.n];
        e[i] = 1 % self.p;
        FieldVec(e)
    }

    /// All of `{0,…,p-1}^n` in lexicographic order, leftmost coordinate most
    /// significant.
    pub fn all_vectors(&self) -> LexVectors {
        LexVectors::new(*self, 0)
    }

    /// All of `{1,…,p-1}^n` in lexicographic order.
    pub fn nonzero_cube(&self) -> LexVectors {
        LexVectors::new(*self, 1)
    }

    /// Decodes a lexicographic index into `{0,…,p-1}^n`.
    pub fn vector_at(&self, mut index: u128) -> FieldVec {
        let p = self.p as u128;
        let mut entries = vec![0; self.n];
        for slot in entries.iter_mut().rev() {
            *slot = (index % p) as u64;
            index /= p;
        }
        FieldVec(entries)
    }

    /// Lexicographic index of `v` within `{0,…,p-1}^n`.
    pub fn index_of(&self, v: &FieldVec) -> u128 {
        v.0.iter()
            .fold(0u128, |acc, &e| acc * self.p as u128 + e as u128)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.p - b % self.p)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.p)
    }

    fn check(&self, v: &FieldVec) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::Shape {
                expected: self.n,
                actual: v.len(),
            });
        }
        if let Some(&value) = v.0.iter().find(|&&e| e >= self.p) {
            return Err(Error::OutOfRange { value, p: self.p });
        }
        Ok(())
    }
}

fn checked_pow(base: u64, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
    }
    Some(acc)
}

/// Trial-division primality test.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// A vector over GF(p). Construct through [`Params::vector`] to get range checks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldVec(Vec<u64>);

impl FieldVec {
    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Every entry lies in `{1,…,p-1}`.
    pub fn all_nonzero(&self) -> bool {
        self.0.iter().all(|&e| e != 0)
    }

    pub fn scale(&self, lambda: u64, params: &Params) -> FieldVec {
        FieldVec(self.0.iter().map(|&e| params.mul(e, lambda)).collect())
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.0
    }
}

impl fmt::Display for FieldVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Odometer over a cube `{lo,…,p-1}^n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct LexVectors {
    p: u64,
    lo: u64,
    next: Option<Vec<u64>>,
}

impl LexVectors {
    fn new(params: Params, lo: u64) -> Self {
        let next = (lo < params.p).then(|| vec![lo; params.n]);
        Self {
            p: params.p,
            lo,
            next,
        }
    }
}

impl Iterator for LexVectors {
    type Item = FieldVec;

    fn next(&mut self) -> Option<FieldVec> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] + 1 < self.p {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = self.lo;
        }
        Some(FieldVec(current))
    }
}

/// `(Σ x_i·u_i) mod p`.
pub fn dot_mod(x: &FieldVec, u: &FieldVec, params: &Params) -> Result<u64> {
    params.check(x)?;
    params.check(u)?;
    Ok(dot_unchecked(x.entries(), u.entries(), params.p))
}

/// Dot product without shape validation; callers guarantee shape.
pub(crate) fn dot_unchecked(x: &[u64], u: &[u64], p: u64) -> u64 {
    if p < (1 << 31) && x.len() < (1 << 20) {
        // each product < 2^62, the sum cannot overflow u128 and we reduce once
        let s: u128 = x
            .iter()
            .zip(u)
            .map(|(&a, &b)| (a as u128) * (b as u128))
            .sum();
        (s % p as u128) as u64
    } else {
        x.iter().zip(u).fold(0u64, |acc, (&a, &b)| {
            let prod = ((a as u128 * b as u128) % p as u128) as u64;
            ((acc as u128 + prod as u128) % p as u128) as u64
        })
    }
}

/// Rows of coefficients over GF(p), optionally augmented with a right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    width: usize,
    rows: Vec<Vec<u64>>,
    rhs: Option<Vec<u64>>,
}

impl FieldMatrix {
    /// Coefficient matrix without augmentation.
    pub fn new(width: usize, rows: Vec<FieldVec>) -> Result<Self> {
        let rows: Vec<Vec<u64>> = rows.into_iter().map(FieldVec::into_entries).collect();
        check_width(width, &rows)?;
        Ok(Self {
            width,
            rows,
            rhs: None,
        })
    }

    /// Augmented system: row `i` reads `rows[i] · u = rhs[i]`.
    pub fn augmented(width: usize, rows: Vec<(FieldVec, u64)>) -> Result<Self> {
        let (rows, rhs): (Vec<Vec<u64>>, Vec<u64>) =
            rows.into_iter().map(|(r, z)| (r.into_entries(), z)).unzip();
        check_width(width, &rows)?;
        Ok(Self {
            width,
            rows,
            rhs: Some(rhs),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn rhs(&self) -> Option<&[u64]> {
        self.rhs.as_deref()
    }

    /// Appends one equation. Turns an unaugmented matrix into an augmented one
    /// with zero right-hand sides for the existing rows.
    pub fn push(&mut self, row: FieldVec, rhs: u64) -> Result<()> {
        if row.len() != self.width {
            return Err(Error::Shape {
                expected: self.width,
                actual: row.len(),
            });
        }
        let count = self.rows.len();
        self.rhs.get_or_insert_with(|| vec![0; count]).push(rhs);
        self.rows.push(row.into_entries());
        Ok(())
    }
}

fn check_width(width: usize, rows: &[Vec<u64>]) -> Result<()> {
    match rows.iter().find(|r| r.len() != width) {
        Some(r) => Err(Error::Shape {
            expected: width,
            actual: r.len(),
        }),
        None => Ok(()),
    }
}

/// Result of row reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FieldMatrix,
    /// Number of pivots among the coefficient columns.
    pub rank: usize,
    /// Pivot column of each nonzero coefficient row, in row order.
    pub pivots: Vec<usize>,
    /// False iff the augmented column holds a pivot.
    pub consistent: bool,
}

/// Reduced row echelon form over GF(p).
///
/// The augmented column is treated as an ordinary column when choosing pivots,
/// so an inconsistent system ends with a row `0 … 0 | 1`.
pub fn rref_mod(m: &FieldMatrix, params: &Params) -> Result<Rref> {
    let p = params.p;
    for row in &m.rows {
        if let Some(&value) = row.iter().find(|&&e| e >= p) {
            return Err(Error::OutOfRange { value, p });
        }
    }
    let augmented = m.rhs.is_some();
    let cols = m.width + usize::from(augmented);
    let mut a: Vec<Vec<u64>> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            if let Some(rhs) = &m.rhs {
                row.push(rhs[i] % p);
            }
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut consistent = true;
    let mut lead = 0;
    for col in 0..cols {
        if lead == a.len() {
            break;
        }
        let Some(found) = (lead..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(lead, found);
        let inv = params.inv(a[lead][col]).expect("nonzero residue mod prime");
        for e in a[lead].iter_mut() {
            *e = params.mul(*e, inv);
        }
        let pivot_row = a[lead].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == lead || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (e, &pe) in row.iter_mut().zip(&pivot_row) {
                *e = params.sub(*e, params.mul(factor, pe));
            }
        }
        if col < m.width {
            pivots.push(col);
        } else {
            consistent = false;
        }
        lead += 1;
    }

    let (rows, rhs) = if augmented {
        let mut rhs = Vec::with_capacity(a.len());
        for row in a.iter_mut() {
            rhs.push(row.pop().unwrap_or(0));
        }
        (a, Some(rhs))
    } else {
        (a, None)
    };
    Ok(Rref {
        matrix: FieldMatrix {
            width: m.width,
            rows,
            rhs,
        },
        rank: pivots.len(),
        pivots,
        consistent,
    })
}

/// Number of `u ∈ {0,…,p-1}^n` satisfying the system: `0` if inconsistent,
/// else `p^(n - rank)`. An unaugmented matrix is read as homogeneous.
pub fn solution_count(m: &FieldMatrix, params: &Params) -> Result<BigUint> {
    if m.width != params.n {
        return Err(Error::Shape {
            expected: params.n,
            actual: m.width,
        });
    }
    let r = rref_mod(m, params)?;
    if !r.consistent {
        return Ok(BigUint::from(0u32));
    }
    Ok(BigUint::from(params.p).pow((params.n - r.rank) as u32))
}

/// True iff `t = λ·s (mod p)` for some `λ ∈ {1,…,p-1}`.
pub fn is_multiple_pair(s: &FieldVec, t: &FieldVec, params: &Params) -> Result<bool> {
    params.check(s)?;
    params.check(t)?;
    if s.is_zero() || t.is_zero() {
        return Err(usage("multiple-pair test needs nonzero vectors"));
    }
    Ok(multiple_unchecked(s.entries(), t.entries(), params))
}

pub(crate) fn multiple_unchecked(s: &[u64], t: &[u64], params: &Params) -> bool {
    let Some(i) = s.iter().position(|&e| e != 0) else {
        return false;
    };
    let lambda = params.mul(t[i], params.inv(s[i]).expect("nonzero"));
    lambda != 0 && s.iter().zip(t).all(|(&a, &b)| params.mul(a, lambda) == b)
}

/// Scales a nonzero vector so its first nonzero entry is 1. Two nonzero
/// vectors are multiples of each other iff their normal forms agree.
pub(crate) fn projective_normal(v: &[u64], params: &Params) -> Vec<u64> {
    match v.iter().find(|&&e| e != 0) {
        Some(&lead) => {
            let inv = params.inv(lead).expect("nonzero");
            v.iter().map(|&e| params.mul(e, inv)).collect()
        }
        None => v.to_vec(),
    }
}
