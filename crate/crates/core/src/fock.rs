//! Truncated multi-mode occupation-number basis.
//!
//! States are kept in graded-lexicographic order: ascending total quanta,
//! and lexicographically ascending occupation tuples within a grade. With
//! this order every grade is a contiguous block of ordinals.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest basis [`FockBasis::enumerate`] will build without an explicit cap.
pub const DEFAULT_DIM_CAP: usize = 1_000_000;

/// Occupation tuple `(n_1, ..., n_d)` labelling a Fock state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    occupations: Vec<usize>,
    total: usize,
}

impl MultiIndex {
    pub fn new(occupations: Vec<usize>) -> Self {
        let total = occupations.iter().sum();
        Self { occupations, total }
    }

    /// The all-zero state of `d` modes.
    pub fn ground(d: usize) -> Self {
        Self::new(vec![0; d])
    }

    pub fn occupations(&self) -> &[usize] {
        &self.occupations
    }

    pub fn modes(&self) -> usize {
        self.occupations.len()
    }

    /// Total quanta, i.e. the grade of the state.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn get(&self, mode: usize) -> usize {
        self.occupations[mode]
    }

    /// `self + e_mode`.
    pub fn raised(&self, mode: usize) -> Self {
        let mut occ = self.occupations.clone();
        occ[mode] += 1;
        Self {
            occupations: occ,
            total: self.total + 1,
        }
    }

    /// `self - e_mode`, or `None` if that mode is empty.
    pub fn lowered(&self, mode: usize) -> Option<Self> {
        if self.occupations[mode] == 0 {
            return None;
        }
        let mut occ = self.occupations.clone();
        occ[mode] -= 1;
        Some(Self {
            occupations: occ,
            total: self.total - 1,
        })
    }

    /// `self + e_to - e_from`, or `None` if mode `from` is empty.
    pub fn hopped(&self, from: usize, to: usize) -> Option<Self> {
        self.lowered(from).map(|m| m.raised(to))
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(occupations: Vec<usize>) -> Self {
        Self::new(occupations)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, n) in self.occupations.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// Every `d`-mode state with total quanta at most `n_max`, in graded-lex order.
#[derive(Debug, Clone)]
pub struct FockBasis {
    d: usize,
    n_max: usize,
    states: Vec<MultiIndex>,
    index_of: HashMap<MultiIndex, usize>,
    /// `grade_start[n]` is the ordinal of the first state of grade `n`;
    /// the last element equals the basis size.
    grade_start: Vec<usize>,
}

impl FockBasis {
    /// Enumerate the basis with the default dimension cap.
    pub fn enumerate(d: usize, n_max: usize) -> Result<Self> {
        Self::enumerate_capped(d, n_max, DEFAULT_DIM_CAP)
    }

    pub fn enumerate_capped(d: usize, n_max: usize, cap: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("mode count d must be at least 1".into()));
        }
        let size = binomial(n_max as u128 + d as u128, d as u128);
        match size {
            Some(s) if s <= cap as u128 => {}
            Some(s) => return Err(Error::Capacity { requested: s, cap }),
            None => return Err(Error::Capacity { requested: u128::MAX, cap }),
        }

        let mut states = Vec::new();
        let mut grade_start = Vec::with_capacity(n_max + 2);
        let mut buf = vec![0usize; d];
        for grade in 0..=n_max {
            grade_start.push(states.len());
            compositions(grade, 0, &mut buf, &mut states);
        }
        grade_start.push(states.len());

        let index_of = states
            .iter()
            .enumerate()
            .map(|(k, m)| (m.clone(), k))
            .collect();
        Ok(Self {
            d,
            n_max,
            states,
            index_of,
            grade_start,
        })
    }

    /// The same mode count with a cutoff raised by `extra` grades.
    pub fn extended(&self, extra: usize) -> Result<Self> {
        Self::enumerate_capped(self.d, self.n_max + extra, usize::MAX)
    }

    pub fn modes(&self) -> usize {
        self.d
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[MultiIndex] {
        &self.states
    }

    /// Ordinal of `m` under the graded-lex order.
    pub fn rank(&self, m: &MultiIndex) -> Result<usize> {
        if m.modes() != self.d {
            return Err(Error::Domain(format!(
                "state {m} has {} modes, basis has {}",
                m.modes(),
                self.d
            )));
        }
        self.index_of.get(m).copied().ok_or_else(|| {
            Error::Domain(format!(
                "state {m} lies outside the truncation n_max = {}",
                self.n_max
            ))
        })
    }

    /// Ordinal of `m`, or `None` if it is not in the truncation.
    pub fn position(&self, m: &MultiIndex) -> Option<usize> {
        self.index_of.get(m).copied()
    }

    pub fn unrank(&self, ordinal: usize) -> Result<&MultiIndex> {
        self.states.get(ordinal).ok_or_else(|| {
            Error::Domain(format!(
                "ordinal {ordinal} out of range for basis of size {}",
                self.len()
            ))
        })
    }

    /// Ordinal range occupied by grade `n`.
    pub fn grade_range(&self, n: usize) -> std::ops::Range<usize> {
        if n > self.n_max {
            return self.len()..self.len();
        }
        self.grade_start[n]..self.grade_start[n + 1]
    }
}

/// Push every composition of `remaining` into `buf[pos..]`, lexicographically.
fn compositions(remaining: usize, pos: usize, buf: &mut [usize], out: &mut Vec<MultiIndex>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(MultiIndex::new(buf.to_vec()));
        return;
    }
    for first in 0..=remaining {
        buf[pos] = first;
        compositions(remaining - first, pos + 1, buf, out);
    }
    buf[pos] = 0;
}

/// Exact binomial coefficient, `None` on overflow.
pub(crate) fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        // acc * (n - j) / (j + 1) stays integral at every step
        acc = acc.checked_mul(n - j)? / (j + 1);
    }
    Some(acc)
}

/// Number of `d`-mode states with exactly `n` quanta, `C(n + d - 1, n)`.
pub fn degeneracy(d: usize, n: usize) -> Result<u128> {
    if d == 0 {
        return Err(Error::Domain("mode count d must be at least 1".into()));
    }
    binomial((n + d - 1) as u128, n as u128)
        .ok_or_else(|| Error::Domain(format!("degeneracy C({}, {n}) overflows", n + d - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn single_mode_ladder() {
        let b = FockBasis::enumerate(1, 3).unwrap();
        let got: Vec<_> = b.states().iter().map(|m| m.get(0)).collect();
        assert_eq!(got, vec![0, 1, 2, 3]);
    }

    #[test]
    fn two_mode_order() {
        let b = FockBasis::enumerate(2, 2).unwrap();
        let want = [
            mi(&[0, 0]),
            mi(&[0, 1]),
            mi(&[1, 0]),
            mi(&[0, 2]),
            mi(&[1, 1]),
            mi(&[2, 0]),
        ];
        assert_eq!(b.states(), &want);
        assert_eq!(b.rank(&mi(&[0, 0])).unwrap(), 0);
        assert_eq!(b.rank(&mi(&[1, 0])).unwrap(), 2);
        assert_eq!(b.rank(&mi(&[1, 1])).unwrap(), 4);
        assert_eq!(b.grade_range(1), 1..3);
    }

    #[test]
    fn three_modes_size() {
        assert_eq!(FockBasis::enumerate(3, 2).unwrap().len(), 10);
    }

    #[test]
    fn rejects_zero_modes_and_huge_bases() {
        assert!(matches!(FockBasis::enumerate(0, 3), Err(Error::Domain(_))));
        assert!(matches!(
            FockBasis::enumerate(10, 40),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            FockBasis::enumerate_capped(2, 2, 5),
            Err(Error::Capacity { requested: 6, cap: 5 })
        ));
        assert!(FockBasis::enumerate_capped(2, 2, 6).is_ok());
    }

    #[test]
    fn rank_errors() {
        let b = FockBasis::enumerate(2, 2).unwrap();
        assert!(b.rank(&mi(&[2, 1])).is_err());
        assert!(b.rank(&mi(&[0, 0, 0])).is_err());
        assert!(b.unrank(6).is_err());
    }

    #[test]
    fn degeneracy_values() {
        for d in 1..6 {
            assert_eq!(degeneracy(d, 0).unwrap(), 1);
        }
        assert_eq!(degeneracy(2, 3).unwrap(), 4);
        assert_eq!(degeneracy(3, 2).unwrap(), 6);
        assert!(degeneracy(0, 2).is_err());
    }

    #[test]
    fn multi_index_moves() {
        let m = mi(&[1, 0, 2]);
        assert_eq!(m.total(), 3);
        assert_eq!(m.raised(1), mi(&[1, 1, 2]));
        assert_eq!(m.lowered(1), None);
        assert_eq!(m.hopped(2, 0), Some(mi(&[2, 0, 1])));
        assert_eq!(m.to_string(), "(1,0,2)");
    }
}
