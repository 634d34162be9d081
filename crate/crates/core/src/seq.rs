//! Finite sequences of naturals and the coefficient arithmetic built on them.
//!
//! A [`Sequence`] `(a_1, a_2, ...)` records `a_k` contact points of order `k`
//! (equivalently: a partition with `a_k` parts equal to `k`). The three
//! derived quantities used throughout are the part count `|a| = a_1 + a_2 + ...`,
//! the weighted sum `Ia = 1*a_1 + 2*a_2 + ...` and the weighted power
//! `I^a = 1^{a_1} * 2^{a_2} * ...`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A finite sequence of naturals, stored canonically without trailing zeros.
///
/// Equality and hashing act on the canonical form, so `(1, 0)` and `(1)` are
/// the same sequence. The empty sequence is the zero sequence.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Sequence {
    entries: Vec<u64>,
}

impl Sequence {
    /// Builds a sequence from raw entries, trimming trailing zeros.
    pub fn new(entries: impl Into<Vec<u64>>) -> Self {
        let mut entries = entries.into();
        while entries.last() == Some(&0) {
            entries.pop();
        }
        Sequence { entries }
    }

    pub fn zero() -> Self {
        Sequence::default()
    }

    /// The sequence `e_k` with a single 1 at place `k` (1-indexed).
    pub fn unit(k: usize) -> Self {
        assert!(k >= 1, "sequence places are 1-indexed");
        let mut entries = vec![0; k];
        entries[k - 1] = 1;
        Sequence { entries }
    }

    /// Counts occurrences: `from_parts([2, 1, 1])` is `(2, 1)`.
    pub fn from_parts(parts: impl IntoIterator<Item = u64>) -> Self {
        let mut entries: Vec<u64> = Vec::new();
        for p in parts {
            assert!(p >= 1, "parts must be positive");
            let idx = (p - 1) as usize;
            if entries.len() <= idx {
                entries.resize(idx + 1, 0);
            }
            entries[idx] += 1;
        }
        Sequence::new(entries)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical entries (no trailing zeros).
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// The entry at place `k` (1-indexed); zero beyond the stored length.
    pub fn count_of(&self, k: usize) -> u64 {
        assert!(k >= 1, "sequence places are 1-indexed");
        self.entries.get(k - 1).copied().unwrap_or(0)
    }

    /// Iterates `(k, a_k)` over places with a nonzero entry.
    pub fn weighted_entries(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, &a)| (i + 1, a))
    }

    /// `|a| = a_1 + a_2 + ...`, the number of parts.
    pub fn part_count(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// `Ia = 1*a_1 + 2*a_2 + ...`, the total weight.
    pub fn weighted_sum(&self) -> u64 {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &a)| (i as u64 + 1) * a)
            .sum()
    }

    /// `I^a = 1^{a_1} * 2^{a_2} * ...`; 1 for the zero sequence.
    pub fn weighted_power(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (k, a) in self.weighted_entries() {
            acc *= BigInt::from(k).pow(a as u32);
        }
        acc
    }

    /// Entrywise `self_k >= other_k`.
    pub fn dominates(&self, other: &Sequence) -> bool {
        other
            .entries
            .iter()
            .enumerate()
            .all(|(i, &b)| self.entries.get(i).copied().unwrap_or(0) >= b)
    }

    /// Entrywise subtraction; errors when `other` is not dominated by `self`.
    pub fn checked_sub(&self, other: &Sequence) -> Result<Sequence> {
        let mut entries = self.entries.clone();
        for (i, &b) in other.entries.iter().enumerate() {
            let a = entries.get(i).copied().unwrap_or(0);
            if b > a {
                return Err(Error::NegativeEntry { place: i + 1 });
            }
            if b > 0 {
                entries[i] = a - b;
            }
        }
        Ok(Sequence::new(entries))
    }

    /// Entrywise binomial `C(self, other) = prod_k C(self_k, other_k)`;
    /// zero when some `other_k > self_k`.
    pub fn binom(&self, other: &Sequence) -> BigInt {
        let mut acc = BigInt::one();
        for (i, &b) in other.entries.iter().enumerate() {
            let a = self.entries.get(i).copied().unwrap_or(0);
            acc *= binomial(a, b);
            if acc.is_zero() {
                return acc;
            }
        }
        acc
    }

    /// Entrywise multinomial `C(self; parts[0], ..., parts[m-1])`, with the
    /// leftover `self - sum(parts)` absorbing the rest; zero when the parts
    /// overdraw some place.
    pub fn multinom(&self, parts: &[Sequence]) -> BigInt {
        let places = parts
            .iter()
            .map(|p| p.entries.len())
            .chain([self.entries.len()])
            .max()
            .unwrap_or(0);
        let mut acc = BigInt::one();
        for i in 0..places {
            let n = self.entries.get(i).copied().unwrap_or(0);
            let ks: Vec<u64> = parts
                .iter()
                .map(|p| p.entries.get(i).copied().unwrap_or(0))
                .collect();
            acc *= multinomial(n, &ks);
            if acc.is_zero() {
                return acc;
            }
        }
        acc
    }

    /// The parts in descending order: `(2, 1)` gives `[2, 1, 1]`.
    pub fn parts_desc(&self) -> Vec<u64> {
        let mut parts = Vec::with_capacity(self.part_count() as usize);
        for (k, a) in self.weighted_entries().collect::<Vec<_>>().into_iter().rev() {
            for _ in 0..a {
                parts.push(k as u64);
            }
        }
        parts
    }

    /// All sequences dominated by `self` (entrywise `<=`), in a fixed order.
    pub fn dominated(&self) -> Vec<Sequence> {
        let mut out = vec![Sequence::zero()];
        for (i, &a) in self.entries.iter().enumerate() {
            let prev = std::mem::take(&mut out);
            for s in prev {
                for c in 0..=a {
                    let mut entries = s.entries.clone();
                    if c > 0 {
                        entries.resize(i + 1, 0);
                        entries[i] = c;
                    }
                    out.push(Sequence::new(entries));
                }
            }
        }
        out
    }
}

impl Add<&Sequence> for &Sequence {
    type Output = Sequence;

    fn add(self, rhs: &Sequence) -> Sequence {
        let n = self.entries.len().max(rhs.entries.len());
        let entries: Vec<u64> = (0..n)
            .map(|i| {
                self.entries.get(i).copied().unwrap_or(0) + rhs.entries.get(i).copied().unwrap_or(0)
            })
            .collect();
        Sequence::new(entries)
    }
}

impl Add for Sequence {
    type Output = Sequence;

    fn add(self, rhs: Sequence) -> Sequence {
        &self + &rhs
    }
}

impl fmt::Display for Sequence {
    /// Comma syntax shared with the CLI: `(0, 1)` prints as `0,1`, the zero
    /// sequence as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for e in &self.entries {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Sequence {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Sequence::zero());
        }
        let entries: Vec<u64> = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| format!("invalid sequence entry {part:?} (expected a natural number)"))
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(Sequence::new(entries))
    }
}

/// Binomial coefficient `C(n, k)` as an unbounded integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `n!` as an unbounded integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Multinomial coefficient `n! / (k_1! ... k_m! (n - k_1 - ... - k_m)!)`;
/// zero when the parts exceed `n`.
pub fn multinomial(n: u64, parts: &[u64]) -> BigInt {
    let mut rest = n;
    let mut acc = BigInt::one();
    for &k in parts {
        if k > rest {
            return BigInt::zero();
        }
        acc *= binomial(rest, k);
        rest -= k;
    }
    acc
}

/// All sequences with the given weighted sum, each exactly once. The list
/// has `p(total)` elements (one per partition of `total`) and is ordered
/// lexicographically descending on the entries, so `partition_sequences(2)`
/// is `[(2), (0, 1)]`.
pub fn partition_sequences(total: u64) -> Vec<Sequence> {
    fn go(weight: u64, remaining: u64, current: &mut Vec<u64>, out: &mut Vec<Sequence>) {
        if remaining == 0 {
            out.push(Sequence::new(current.clone()));
            return;
        }
        if weight > remaining {
            return;
        }
        for count in (0..=remaining / weight).rev() {
            current.push(count);
            go(weight + 1, remaining - count * weight, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(1, total, &mut Vec::new(), &mut out);
    out
}

/// All `(alpha, beta)` pairs with `I(alpha) + I(beta) = total`, ordered by
/// `I(alpha)` ascending then by the partition order of each factor.
pub fn alpha_beta_pairs(total: u64) -> Vec<(Sequence, Sequence)> {
    let mut out = Vec::new();
    for ia in 0..=total {
        for alpha in partition_sequences(ia) {
            for beta in partition_sequences(total - ia) {
                out.push((alpha.clone(), beta));
            }
        }
    }
    out
}
