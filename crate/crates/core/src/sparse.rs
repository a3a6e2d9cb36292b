//! Coordinate-format complex matrices on a Fock basis.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockBasis;

/// Entries with modulus below this are dropped after arithmetic.
pub const PRUNE_EPS: f64 = 1e-15;

/// Change in total quanta effected by an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuantaShift {
    Fixed(i64),
    Mixed,
}

impl QuantaShift {
    fn add(self, other: Self) -> Self {
        match (self, other) {
            (Self::Fixed(a), Self::Fixed(b)) => Self::Fixed(a + b),
            _ => Self::Mixed,
        }
    }

    fn join(self, other: Self) -> Self {
        if self == other {
            self
        } else {
            Self::Mixed
        }
    }
}

impl fmt::Display for QuantaShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed(s) => write!(f, "{s}"),
            Self::Mixed => write!(f, "mixed"),
        }
    }
}

/// Square sparse matrix stored as `(row, column, value)` triplets, sorted
/// row-major with no duplicate positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseOperator {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
    quanta_shift: QuantaShift,
    /// False when built from a representation with negative squared amplitudes.
    valid: bool,
}

impl SparseOperator {
    /// Build from triplets; duplicates are summed and zeros dropped.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
        quanta_shift: QuantaShift,
    ) -> Self {
        let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside dimension {dim}");
            *acc.entry((r, c)).or_default() += v;
        }
        Self::from_map(dim, acc, quanta_shift, true)
    }

    fn from_map(
        dim: usize,
        acc: BTreeMap<(usize, usize), Complex64>,
        quanta_shift: QuantaShift,
        valid: bool,
    ) -> Self {
        let entries = acc
            .into_iter()
            .filter(|(_, v)| v.norm() >= PRUNE_EPS)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Self {
            dim,
            entries,
            quanta_shift,
            valid,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
            quanta_shift: QuantaShift::Fixed(0),
            valid: true,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal((0..dim).map(|_| Complex64::new(1.0, 0.0)))
    }

    pub fn from_diagonal(diag: impl IntoIterator<Item = Complex64>) -> Self {
        let diag: Vec<_> = diag.into_iter().collect();
        let dim = diag.len();
        Self::from_triplets(
            dim,
            diag.into_iter().enumerate().map(|(k, v)| (k, k, v)),
            QuantaShift::Fixed(0),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn quanta_shift(&self) -> QuantaShift {
        self.quanta_shift
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub(crate) fn mark_invalid(mut self) -> Self {
        self.valid = false;
        self
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries
            .binary_search_by(|&(r, c, _)| (r, c).cmp(&(row, col)))
            .map(|k| self.entries[k].2)
            .unwrap_or_default()
    }

    /// Largest entry modulus, 0 for the zero operator.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether every entry sits on the diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.entries.iter().all(|&(r, c, _)| r == c)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        let mut d = vec![Complex64::default(); self.dim];
        for &(r, c, v) in &self.entries {
            if r == c {
                d[r] = v;
            }
        }
        d
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.map_transpose(|v| v.conj(), self.quanta_shift_neg())
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> Self {
        self.map_transpose(|v| v, self.quanta_shift_neg())
    }

    fn quanta_shift_neg(&self) -> QuantaShift {
        match self.quanta_shift {
            QuantaShift::Fixed(s) => QuantaShift::Fixed(-s),
            QuantaShift::Mixed => QuantaShift::Mixed,
        }
    }

    fn map_transpose(&self, f: impl Fn(Complex64) -> Complex64, shift: QuantaShift) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, f(v))).collect();
        entries.sort_by_key(|e| (e.0, e.1));
        Self {
            dim: self.dim,
            entries,
            quanta_shift: shift,
            valid: self.valid,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let acc = self.entries.iter().map(|&(r, c, v)| ((r, c), v * s)).collect();
        Self::from_map(self.dim, acc, self.quanta_shift, self.valid)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        self.check_dim(other)?;
        let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for &(r, c, v) in &self.entries {
            *acc.entry((r, c)).or_default() += v;
        }
        for &(r, c, v) in &other.entries {
            *acc.entry((r, c)).or_default() += v * sign;
        }
        let shift = if self.is_zero() {
            other.quanta_shift
        } else if other.is_zero() {
            self.quanta_shift
        } else {
            self.quanta_shift.join(other.quanta_shift)
        };
        Ok(Self::from_map(self.dim, acc, shift, self.valid && other.valid))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        // row-wise view of the right factor
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.dim];
        for &(r, c, v) in &other.entries {
            rows[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for &(r, k, a) in &self.entries {
            for &(c, b) in &rows[k] {
                *acc.entry((r, c)).or_default() += a * b;
            }
        }
        Ok(Self::from_map(
            self.dim,
            acc,
            self.quanta_shift.add(other.quanta_shift),
            self.valid && other.valid,
        ))
    }

    /// `self · other - other · self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// Apply to a state vector given in basis ordinals.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        let mut out = vec![Complex64::default(); self.dim];
        for &(r, c, a) in &self.entries {
            out[r] += a * v[c];
        }
        Ok(out)
    }

    /// Relabel ordinals: entry `(r, c)` moves to `(perm[r], perm[c])`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|&(r, c, v)| (perm[r], perm[c], v))
            .collect();
        entries.sort_by_key(|e| (e.0, e.1));
        Self {
            dim: self.dim,
            entries,
            quanta_shift: self.quanta_shift,
            valid: self.valid,
        }
    }

    /// Whether every entry connects grades differing by the declared shift.
    pub fn respects_shift(&self, basis: &FockBasis) -> bool {
        let QuantaShift::Fixed(s) = self.quanta_shift else {
            return true;
        };
        self.entries.iter().all(|&(r, c, _)| {
            let row = basis.states()[r].total() as i64;
            let col = basis.states()[c].total() as i64;
            row - col == s
        })
    }

    /// Largest imaginary part over all entries.
    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|e| e.2.im.abs()).fold(0.0, f64::max)
    }
}
