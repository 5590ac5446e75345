//! Finite statistics of symbol sequences: shifted windows of the two-sided
//! zero-padded sequence, pattern (cylinder) frequencies and occurrence
//! positions.
//!
//! A pattern counted "at position `k`" occupies sites `k, …, k+r`. Counts over
//! `k ∈ [1, N]` include occurrences that run past `N`, so the sequence must be
//! available up to `N + r`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::potential::mobius_sieve;
use crate::{Error, Result};

pub type Word = Vec<i64>;

/// `ω_1, …, ω_{n_max}` over a finite integer alphabet, padded with a fixed
/// symbol at `n <= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSequence {
    values: Vec<i64>,
    alphabet: Vec<i64>,
    negative_pad: i64,
}

impl SymbolSequence {
    pub fn new(values: Vec<i64>, negative_pad: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Size { what: "sequence length", requested: 0, cap: u64::MAX });
        }
        let mut alphabet = values.clone();
        alphabet.push(negative_pad);
        alphabet.sort_unstable();
        alphabet.dedup();
        Ok(SymbolSequence { values, alphabet, negative_pad })
    }

    /// `ω̄_n = μ(n)` for `1 <= n <= n_max`, zero for `n <= 0`.
    pub fn moebius(n_max: usize) -> Result<Self> {
        let mu = mobius_sieve(n_max)?;
        Ok(SymbolSequence {
            values: mu.into_iter().map(i64::from).collect(),
            alphabet: alloc::vec![-1, 0, 1],
            negative_pad: 0,
        })
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    pub fn alphabet(&self) -> &[i64] {
        &self.alphabet
    }

    pub fn negative_pad(&self) -> i64 {
        self.negative_pad
    }

    /// `ω̄_n` for any `n <= n_max`.
    pub fn get(&self, n: i64) -> Result<i64> {
        if n <= 0 {
            return Ok(self.negative_pad);
        }
        self.values
            .get(n as usize - 1)
            .copied()
            .ok_or(Error::Range { what: "sequence", index: n, bound: self.n_max() as i64 })
    }

    fn positive(&self) -> &[i64] {
        &self.values
    }

    fn check_word(&self, word: &[i64]) -> Result<()> {
        if word.is_empty() {
            return Err(Error::input("pattern word is empty"));
        }
        if let Some(w) = word.iter().find(|w| self.alphabet.binary_search(w).is_err()) {
            return Err(Error::input(alloc::format!("symbol {w} is not in the alphabet")));
        }
        Ok(())
    }
}

/// `(ω̄_{j+1}, …, ω̄_{j+len})`.
pub fn shift_window(seq: &SymbolSequence, j: i64, len: usize) -> Result<Word> {
    if len == 0 {
        return Err(Error::Size { what: "window length", requested: 0, cap: u64::MAX });
    }
    let last = j + len as i64;
    if last > seq.n_max() as i64 {
        return Err(Error::Range { what: "shifted window", index: last, bound: seq.n_max() as i64 });
    }
    (j + 1..=last).map(|n| seq.get(n)).collect()
}

fn check_span(seq: &SymbolSequence, n: usize, word_len: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Size { what: "positions N", requested: 0, cap: u64::MAX });
    }
    let need = n + word_len - 1;
    if need > seq.n_max() {
        return Err(Error::Range { what: "pattern span", index: need as i64, bound: seq.n_max() as i64 });
    }
    Ok(())
}

#[inline]
fn matches_at(values: &[i64], k0: usize, word: &[i64]) -> bool {
    values[k0..k0 + word.len()].iter().zip(word).all(|(a, b)| a == b)
}

/// Number of `k ∈ [1, N]` with `ω_k … ω_{k+r}` equal to `word`.
pub fn pattern_count(seq: &SymbolSequence, word: &[i64], n: usize) -> Result<u64> {
    seq.check_word(word)?;
    check_span(seq, n, word.len())?;
    let v = seq.positive();
    Ok((0..n).filter(|&k0| matches_at(v, k0, word)).count() as u64)
}

pub fn pattern_frequency(seq: &SymbolSequence, word: &[i64], n: usize) -> Result<f64> {
    Ok(pattern_count(seq, word, n)? as f64 / n as f64)
}

/// Counts of every word of length `r + 1` over positions `k ∈ [1, N]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternTable {
    pub r: usize,
    pub n: usize,
    pub counts: BTreeMap<Word, u64>,
}

impl PatternTable {
    pub fn build(seq: &SymbolSequence, r: usize, n: usize) -> Result<Self> {
        check_span(seq, n, r + 1)?;
        let v = seq.positive();
        let mut counts = BTreeMap::new();
        for k0 in 0..n {
            *counts.entry(v[k0..=k0 + r].to_vec()).or_insert(0) += 1;
        }
        Ok(PatternTable { r, n, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn frequency(&self, word: &[i64]) -> f64 {
        self.counts.get(word).copied().unwrap_or(0) as f64 / self.n as f64
    }
}

/// Frequency of the length-`r+1` prefix of the periodic extension of
/// `period_word`, for each `r`.
pub fn periodic_word_decay(
    seq: &SymbolSequence,
    period_word: &[i64],
    r_values: &[usize],
    n: usize,
) -> Result<Vec<(usize, f64)>> {
    seq.check_word(period_word)?;
    r_values
        .iter()
        .map(|&r| {
            let word: Word = (0..=r).map(|i| period_word[i % period_word.len()]).collect();
            Ok((r, pattern_frequency(seq, &word, n)?))
        })
        .collect()
}

/// Starts `k` of occurrences lying entirely in `[1, search_end]`, at most
/// `max_hits` of them, ascending.
pub fn recurrence_positions(
    seq: &SymbolSequence,
    word: &[i64],
    search_end: usize,
    max_hits: usize,
) -> Result<Vec<usize>> {
    if word.is_empty() {
        return Err(Error::input("pattern word is empty"));
    }
    let v = seq.positive();
    let end = search_end.min(v.len());
    if end < word.len() {
        return Ok(Vec::new());
    }
    Ok((0..=end - word.len())
        .filter(|&k0| matches_at(v, k0, word))
        .map(|k0| k0 + 1)
        .take(max_hits)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn mobius(n: usize) -> SymbolSequence {
        SymbolSequence::moebius(n).unwrap()
    }

    #[test]
    fn shifted_windows() {
        let s = mobius(100);
        assert_eq!(shift_window(&s, 0, 5).unwrap(), vec![1, -1, -1, 0, -1]);
        assert_eq!(shift_window(&s, -3, 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(shift_window(&s, 2, 2).unwrap(), vec![-1, 0]);
        assert_eq!(shift_window(&s, -2, 4).unwrap(), vec![0, 0, 1, -1]);
        assert!(matches!(shift_window(&s, 98, 3), Err(Error::Range { .. })));
    }

    #[test]
    fn zero_frequency_small() {
        let s = mobius(20);
        assert_eq!(pattern_frequency(&s, &[0], 10).unwrap(), 0.3);
        assert!(pattern_frequency(&s, &[2], 10).is_err());
        assert!(pattern_frequency(&s, &[0, 0], 20).is_err());
    }

    #[test]
    fn single_letters_partition() {
        let s = mobius(1000);
        let total: u64 = s.alphabet().iter().map(|&a| pattern_count(&s, &[a], 1000).unwrap()).sum();
        assert_eq!(total, 1000);
    }

    #[test]
    fn positions() {
        let s = mobius(100);
        assert_eq!(recurrence_positions(&s, &[1, -1], 10, 10).unwrap(), vec![1, 6]);
        let prefix = shift_window(&s, 0, 7).unwrap();
        assert_eq!(recurrence_positions(&s, &prefix, 100, 1).unwrap(), vec![1]);
        assert!(recurrence_positions(&s, &[5], 100, 10).unwrap().is_empty());
        assert_eq!(recurrence_positions(&s, &[1, -1], 100, 2).unwrap().len(), 2);
    }

    #[test]
    fn periodic_zero_word() {
        let s = mobius(2000);
        let table = periodic_word_decay(&s, &[0], &[0, 1, 2, 3], 1990).unwrap();
        for pair in table.windows(2) {
            assert!(pair[1].1 <= pair[0].1);
        }
        // 242 = 2·11², 243 = 3⁵, 244 = 2²·61, 245 = 5·7² is the first run of four.
        assert!(table[3].1 > 0.0);
        assert_eq!(recurrence_positions(&s, &[0, 0, 0, 0], 2000, 1).unwrap(), vec![242]);
    }

    proptest! {
        #[test]
        fn table_partitions_and_prefix_monotone(r in 0usize..4, n in 1usize..500) {
            let s = mobius(600);
            let t = PatternTable::build(&s, r, n).unwrap();
            prop_assert_eq!(t.total(), n as u64);
            for (w, &c) in &t.counts {
                prop_assert_eq!(c, pattern_count(&s, w, n).unwrap());
                if w.len() > 1 {
                    prop_assert!(c <= pattern_count(&s, &w[..w.len() - 1], n).unwrap());
                }
                let hits = recurrence_positions(&s, w, n + r, usize::MAX).unwrap();
                prop_assert_eq!(hits.len() as u64, c);
            }
        }
    }
}
