//! Integer partitions and the cell statistics built on their Ferrers diagrams.
//!
//! Diagrams use the English convention with 1-based `(row, col)` cells, so the
//! content of a cell is `col - row` and the first row holds contents
//! `0, 1, ..., λ₁ - 1`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::factorial;
use crate::error::{Error, Result};

/// Largest `n` accepted by the checked enumeration entry points.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 200;

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

/// A box of a Ferrers diagram, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn content(&self) -> i64 {
        self.col as i64 - self.row as i64
    }
}

impl Partition {
    /// Builds a partition, rejecting zero parts and increasing runs.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Domain(format!(
                "partition parts must be positive: {parts:?}"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Self { parts })
    }

    /// The empty partition of 0.
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// `rows` equal parts of size `cols`, written ⟨cols^rows⟩.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        if rows == 0 || cols == 0 {
            return Self::empty();
        }
        Self {
            parts: vec![cols; rows],
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `i` (0-based), or 0 past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts, l(λ).
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Whether the diagram of `self` contains the diagram of `other`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.length() <= self.length() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Reflection of the diagram along its main diagonal.
    pub fn conjugate(&self) -> Partition {
        let width = self.part(0);
        let parts = (1..=width)
            .map(|col| self.parts.iter().take_while(|&&p| p >= col).count())
            .collect();
        Partition { parts }
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |col| Cell { row: i + 1, col }))
    }

    /// Content `col - row` of every cell, row-major.
    pub fn contents(&self) -> Vec<i64> {
        self.cells().map(|c| c.content()).collect()
    }

    /// Hook length of every cell, row-major.
    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        self.cells()
            .map(|c| {
                let arm = self.parts[c.row - 1] - c.col;
                let leg = conj.parts[c.col - 1] - c.row;
                arm + leg + 1
            })
            .collect()
    }

    /// Product of all hook lengths, h_λ.
    pub fn hook_number(&self) -> BigUint {
        self.hook_lengths()
            .into_iter()
            .fold(BigUint::one(), |acc, h| acc * BigUint::from(h))
    }

    /// Number of standard Young tableaux of this shape, |λ|!/h_λ.
    pub fn dim_sym(&self) -> Result<BigUint> {
        let (quot, rem) = factorial(self.size()).div_rem(&self.hook_number());
        if !rem.is_zero() {
            return Err(Error::Inconsistency(format!(
                "hook number of {self} does not divide {}!",
                self.size()
            )));
        }
        Ok(quot)
    }

    /// Plancherel weight |λ|!/h_λ².
    pub fn plancherel_weight(&self) -> BigRational {
        let h = self.hook_number();
        BigRational::new(factorial(self.size()).into(), (&h * &h).into())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

/// Lazy iterator over the partitions of `n` in reverse-lexicographic order.
#[derive(Clone, Debug)]
pub struct PartitionIter {
    next: Option<Vec<usize>>,
}

impl PartitionIter {
    pub fn new(n: usize) -> Self {
        let first = if n == 0 { Vec::new() } else { vec![n] };
        Self { next: Some(first) }
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        self.next = successor(&current);
        Some(Partition { parts: current })
    }
}

// Next partition in reverse-lex order: decrement the last part exceeding 1 and
// refill the freed mass greedily with parts no larger than the new value.
fn successor(parts: &[usize]) -> Option<Vec<usize>> {
    let pivot = parts.iter().rposition(|&p| p > 1)?;
    let ones = parts.len() - pivot - 1;
    let mut out = parts[..pivot].to_vec();
    let value = parts[pivot] - 1;
    let mut remaining = ones + 1 + value;
    while remaining > 0 {
        let p = value.min(remaining);
        out.push(p);
        remaining -= p;
    }
    Some(out)
}

/// Checked lazy enumeration using [`DEFAULT_ENUMERATION_LIMIT`].
pub fn partitions(n: usize) -> Result<PartitionIter> {
    partitions_with_limit(n, DEFAULT_ENUMERATION_LIMIT)
}

pub fn partitions_with_limit(n: usize, limit: usize) -> Result<PartitionIter> {
    if n > limit {
        return Err(Error::Capacity(format!(
            "partition enumeration of n = {n} exceeds the limit {limit}"
        )));
    }
    Ok(PartitionIter::new(n))
}

/// Every partition of `n`, each once, in reverse-lexicographic order.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    Ok(partitions(n)?.collect())
}

pub fn enumerate_partitions_with_limit(n: usize, limit: usize) -> Result<Vec<Partition>> {
    Ok(partitions_with_limit(n, limit)?.collect())
}

/// All partitions whose diagram fits in `rows × cols`, by increasing size and
/// reverse-lexicographic within a size.
pub fn partitions_in_rectangle(rows: usize, cols: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill_box(rows, cols, &mut current, &mut out);
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| b.parts.cmp(&a.parts)));
    out
}

fn fill_box(rows: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    out.push(Partition {
        parts: current.clone(),
    });
    if current.len() == rows {
        return;
    }
    for p in 1..=max_part {
        current.push(p);
        fill_box(rows, p, current, out);
        current.pop();
    }
}
