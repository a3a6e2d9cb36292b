//! Parameters of `A_κ(d)` and the sparse generators `a_i`, `a_i†`, `N_i`, `X_ij`.
//!
//! Mode indices are zero-based throughout the API; `X_ij` in the usual
//! one-based notation is [`x_op`] with `from = i - 1`, `to = j - 1`.
//!
//! The representation on `|n⟩ = |n_1, ..., n_d⟩` is
//!
//! ```text
//! a_i  |n⟩ = sqrt((Σn + dν)(κ(n_i + ν) + 1 - κ)) |n - e_i⟩
//! a_i† |n⟩ = sqrt((Σn + dν + 1)(κ(n_i + ν) + 1)) |n + e_i⟩
//! N_i  |n⟩ = (n_i + ν) |n⟩
//! X_ij |n⟩ = sqrt((κ(n_j + ν) + 1)(κ(n_i + ν) + 1 - κ)) |n - e_i + e_j⟩
//! ```
//!
//! with `ν = 1 - 1/κ`. Under that shift the mode factors reduce to
//! `κ(n_i + ν) + 1 - κ = κ n_i` and `κ(n_i + ν) + 1 = κ(n_i + 1)`, and both
//! forms are evaluated that way so that `a_i |…, 0, …⟩ = 0` holds exactly.
//!
//! Every amplitude is the product of the principal square roots of its two
//! factors. For `κ < d/(d+1)` the grade factor `Σn + dν` is negative on low
//! grades, the amplitudes become imaginary, and the representation is not
//! unitary. Such operators are only built under [`UnitarityPolicy::Force`];
//! the creator is then the plain transpose of the annihilator rather than its
//! adjoint, which keeps every defining relation a formal identity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockBasis, MultiIndex};
use crate::sparse::{QuantaShift, SparseOperator};

/// Grade factors closer to zero than this (relative) are treated as zero.
const GRADE_SNAP: f64 = 1e-12;

/// Deformation parameter `κ`, mode count `d`, and the derived shift `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraParams {
    kappa: f64,
    d: usize,
    nu: f64,
}

impl AlgebraParams {
    pub fn new(kappa: f64, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("mode count d must be at least 1".into()));
        }
        if !kappa.is_finite() {
            return Err(Error::Domain(format!("kappa must be finite, got {kappa}")));
        }
        if kappa == 0.0 {
            return Err(Error::SingularParameter);
        }
        Ok(Self {
            kappa,
            d,
            nu: 1.0 - 1.0 / kappa,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn modes(&self) -> usize {
        self.d
    }

    /// `ν = 1 - 1/κ`, fixed by `a_i |0⟩ = 0`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Smallest `κ > 0` for which every squared ladder amplitude is
    /// non-negative: the worst case is `Σn = 1`, giving `κ ≥ d/(d+1)`.
    pub fn min_unitary_kappa(d: usize) -> f64 {
        d as f64 / (d as f64 + 1.0)
    }

    /// `Σn + dν`, the eigenvalue of `ΣN` on grade `total`.
    pub fn grade_factor(&self, total: usize) -> f64 {
        let dnu = self.d as f64 * self.nu;
        let g = total as f64 + dnu;
        if g.abs() <= GRADE_SNAP * (total as f64 + dnu.abs() + 1.0) {
            0.0
        } else {
            g
        }
    }

    /// `κ(n + ν) + 1 - κ`.
    pub fn lowering_factor(&self, n: usize) -> f64 {
        self.kappa * n as f64
    }

    /// `κ(n + ν) + 1`.
    pub fn raising_factor(&self, n: usize) -> f64 {
        self.kappa * (n as f64 + 1.0)
    }

    fn check_mode(&self, i: usize) -> Result<()> {
        if i >= self.d {
            return Err(Error::Domain(format!(
                "mode index {i} out of range for d = {}",
                self.d
            )));
        }
        Ok(())
    }

    fn check_basis(&self, basis: &FockBasis) -> Result<()> {
        if basis.modes() != self.d {
            return Err(Error::Domain(format!(
                "basis has {} modes but parameters have d = {}",
                basis.modes(),
                self.d
            )));
        }
        Ok(())
    }
}

/// How to treat negative squared amplitudes while building operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum UnitarityPolicy {
    /// Refuse with [`Error::NonUnitary`].
    #[default]
    Strict,
    /// Build anyway with imaginary amplitudes and mark the operator invalid.
    Force,
}

/// Squared matrix element of `a_i` on `m`: `(Σn + dν)(κ(n_i + ν) + 1 - κ)`.
pub fn structure_f_squared(params: &AlgebraParams, i: usize, m: &MultiIndex) -> f64 {
    params.grade_factor(m.total()) * params.lowering_factor(m.get(i))
}

fn principal_sqrt(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

/// Amplitude `⟨m - e_i| a_i |m⟩`.
fn lowering_amplitude(params: &AlgebraParams, i: usize, m: &MultiIndex) -> Complex64 {
    principal_sqrt(params.grade_factor(m.total())) * principal_sqrt(params.lowering_factor(m.get(i)))
}

/// Every `(mode, state, radicand)` in the basis with a negative squared amplitude.
pub(crate) fn negative_radicands(
    params: &AlgebraParams,
    basis: &FockBasis,
    modes: impl Iterator<Item = usize> + Clone,
) -> Vec<(usize, MultiIndex, f64)> {
    let mut out = Vec::new();
    for m in basis.states() {
        for i in modes.clone() {
            let r = structure_f_squared(params, i, m);
            if r < 0.0 {
                out.push((i, m.clone(), r));
            }
        }
    }
    out
}

/// `a_i` on the truncated basis (shift −1).
pub fn annihilator(
    params: &AlgebraParams,
    basis: &FockBasis,
    i: usize,
    policy: UnitarityPolicy,
) -> Result<SparseOperator> {
    params.check_basis(basis)?;
    params.check_mode(i)?;
    let offending = negative_radicands(params, basis, std::iter::once(i));
    if !offending.is_empty() && policy == UnitarityPolicy::Strict {
        return Err(Error::NonUnitary { offending });
    }
    let triplets = basis.states().iter().enumerate().filter_map(|(col, m)| {
        let target = m.lowered(i)?;
        let row = basis.position(&target)?;
        Some((row, col, lowering_amplitude(params, i, m)))
    });
    let op = SparseOperator::from_triplets(basis.len(), triplets, QuantaShift::Fixed(-1));
    Ok(if offending.is_empty() { op } else { op.mark_invalid() })
}

/// `a_i†` on the truncated basis (shift +1). Entries that would leave the
/// truncation are dropped. The amplitude on `|n⟩` reuses the radicand of
/// `a_i` on `|n + e_i⟩`, so for unitary parameters this is exactly the
/// adjoint of [`annihilator`].
pub fn creator(
    params: &AlgebraParams,
    basis: &FockBasis,
    i: usize,
    policy: UnitarityPolicy,
) -> Result<SparseOperator> {
    Ok(annihilator(params, basis, i, policy)?.transpose())
}

/// Diagonal `N_i` with eigenvalue `n_i + ν`.
pub fn number_op(params: &AlgebraParams, basis: &FockBasis, i: usize) -> Result<SparseOperator> {
    params.check_basis(basis)?;
    params.check_mode(i)?;
    Ok(SparseOperator::from_diagonal(basis.states().iter().map(|m| {
        Complex64::new(m.get(i) as f64 + params.nu(), 0.0)
    })))
}

/// `X_{from,to}`: moves one quantum from mode `from` to mode `to`,
/// `X |n⟩ = sqrt((κ(n_to + ν) + 1)(κ(n_from + ν) + 1 - κ)) |n - e_from + e_to⟩`.
pub fn x_op(
    params: &AlgebraParams,
    basis: &FockBasis,
    from: usize,
    to: usize,
) -> Result<SparseOperator> {
    params.check_basis(basis)?;
    params.check_mode(from)?;
    params.check_mode(to)?;
    if from == to {
        return Err(Error::Domain(format!(
            "X generator needs distinct modes, got {from} twice"
        )));
    }
    let triplets = basis.states().iter().enumerate().filter_map(|(col, m)| {
        let target = m.hopped(from, to)?;
        let row = basis.position(&target)?;
        let amp = principal_sqrt(params.raising_factor(m.get(to)))
            * principal_sqrt(params.lowering_factor(m.get(from)));
        Some((row, col, amp))
    });
    Ok(SparseOperator::from_triplets(
        basis.len(),
        triplets,
        QuantaShift::Fixed(0),
    ))
}

/// Quadratures `X_i = (a_i + a_i†)/2` and `P_i = (a_i - a_i†)/(2i)`, so that
/// `X_i² + P_i² = (a_i a_i† + a_i† a_i)/2`.
pub fn quadratures(
    params: &AlgebraParams,
    basis: &FockBasis,
    i: usize,
    policy: UnitarityPolicy,
) -> Result<(SparseOperator, SparseOperator)> {
    let a = annihilator(params, basis, i, policy)?;
    let adag = a.transpose();
    let x = a.add(&adag)?.scale_real(0.5);
    let p = a.sub(&adag)?.scale(Complex64::new(0.0, -0.5));
    Ok((x, p))
}

/// Choice of the additive functions `g_i` in the general solution of the
/// structure-function recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gauge {
    /// `g_i = (1 - κ) Σ_{k≠i} (n_k + ν)`; factorizes into the ladder radicand.
    Factorizing,
    /// `g_i = (1 - κ) Σ_{k≠i} n_k`; coincides with `Factorizing` only at κ = 1.
    Unshifted,
    /// `g_i = 0`.
    Zero,
}

impl Gauge {
    fn eval(self, params: &AlgebraParams, i: usize, m: &MultiIndex) -> f64 {
        let others = (0..params.d).filter(|&k| k != i);
        match self {
            Gauge::Factorizing => {
                (1.0 - params.kappa)
                    * others.map(|k| m.get(k) as f64 + params.nu).sum::<f64>()
            }
            Gauge::Unshifted => {
                (1.0 - params.kappa) * others.map(|k| m.get(k) as f64).sum::<f64>()
            }
            Gauge::Zero => 0.0,
        }
    }
}

/// General solution of the recurrence in mode `i`:
/// `κ(n_i+ν)² + κ(n_i+ν) Σ_{k≠i}(n_k+ν) + (1-κ)(n_i+ν) + g_i`.
pub fn general_solution(params: &AlgebraParams, i: usize, m: &MultiIndex, gauge: Gauge) -> f64 {
    let k = params.kappa;
    let ni = m.get(i) as f64 + params.nu;
    let rest: f64 = (0..params.d)
        .filter(|&j| j != i)
        .map(|j| m.get(j) as f64 + params.nu)
        .sum();
    k * ni * ni + k * ni * rest + (1.0 - k) * ni + gauge.eval(params, i, m)
}

/// Right-hand side of `f_i²(n + e_i) - f_i²(n) = 1 + κ(Σ(n_k + ν) + n_i + ν)`.
pub fn recurrence_increment(params: &AlgebraParams, i: usize, m: &MultiIndex) -> f64 {
    let sum_n: f64 = m
        .occupations()
        .iter()
        .map(|&n| n as f64 + params.nu)
        .sum();
    1.0 + params.kappa * (sum_n + m.get(i) as f64 + params.nu)
}

/// Tabulated `f_i²` over a basis, obtained by summing the recurrence upward
/// in `n_i` from the general solution at `n_i = 0`.
#[derive(Debug, Clone)]
pub struct StructureFunction {
    params: AlgebraParams,
    gauge: Gauge,
    basis: FockBasis,
    /// `table[i][ordinal]`
    table: Vec<Vec<f64>>,
}

/// Tabulate the structure functions for every mode over `basis`.
pub fn solve_recurrence(
    params: &AlgebraParams,
    basis: &FockBasis,
    gauge: Gauge,
) -> Result<StructureFunction> {
    params.check_basis(basis)?;
    let table = (0..params.d)
        .map(|i| {
            basis
                .states()
                .iter()
                .map(|m| {
                    let mut occ = m.occupations().to_vec();
                    occ[i] = 0;
                    let mut cur = MultiIndex::new(occ);
                    let mut value = general_solution(params, i, &cur, gauge);
                    for _ in 0..m.get(i) {
                        value += recurrence_increment(params, i, &cur);
                        cur = cur.raised(i);
                    }
                    value
                })
                .collect()
        })
        .collect();
    Ok(StructureFunction {
        params: *params,
        gauge,
        basis: basis.clone(),
        table,
    })
}

impl StructureFunction {
    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn get(&self, i: usize, m: &MultiIndex) -> Result<f64> {
        self.params.check_mode(i)?;
        Ok(self.table[i][self.basis.rank(m)?])
    }

    /// Largest `|f²(n + e_i) - f²(n) - increment| / max(|increment|, 1)` over
    /// all `n` whose raised neighbour is in the basis.
    pub fn recurrence_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (col, m) in self.basis.states().iter().enumerate() {
            for i in 0..self.params.d {
                let Some(up) = self.basis.position(&m.raised(i)) else {
                    continue;
                };
                let rhs = recurrence_increment(&self.params, i, m);
                let lhs = self.table[i][up] - self.table[i][col];
                worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
            }
        }
        worst
    }

    /// Largest deviation from [`structure_f_squared`], relative to `max(|f²|, 1)`.
    pub fn max_deviation_from_closed_form(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (col, m) in self.basis.states().iter().enumerate() {
            for i in 0..self.params.d {
                let closed = structure_f_squared(&self.params, i, m);
                let tab = self.table[i][col];
                worst = worst.max((closed - tab).abs() / closed.abs().max(tab.abs()).max(1.0));
            }
        }
        worst
    }
}

/// All generators of one representation, built once and shared by the
/// relation checks.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub params: AlgebraParams,
    pub lower: Vec<SparseOperator>,
    pub raise: Vec<SparseOperator>,
    pub number: Vec<SparseOperator>,
    /// `hop[from][to]`, `None` on the diagonal.
    pub hop: Vec<Vec<Option<SparseOperator>>>,
    pub identity: SparseOperator,
    /// Whether every squared amplitude is non-negative.
    pub unitary: bool,
}

impl OperatorSet {
    pub fn build(params: &AlgebraParams, basis: &FockBasis, policy: UnitarityPolicy) -> Result<Self> {
        let d = params.modes();
        let lower = (0..d)
            .map(|i| annihilator(params, basis, i, policy))
            .collect::<Result<Vec<_>>>()?;
        let raise = lower.iter().map(SparseOperator::transpose).collect();
        let number = (0..d)
            .map(|i| number_op(params, basis, i))
            .collect::<Result<Vec<_>>>()?;
        let hop = (0..d)
            .map(|from| {
                (0..d)
                    .map(|to| {
                        (from != to)
                            .then(|| x_op(params, basis, from, to))
                            .transpose()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let unitary = lower.iter().all(SparseOperator::is_valid);
        Ok(Self {
            params: *params,
            lower,
            raise,
            number,
            hop,
            identity: SparseOperator::identity(basis.len()),
            unitary,
        })
    }

    pub fn dim(&self) -> usize {
        self.identity.dim()
    }

    pub fn x(&self, from: usize, to: usize) -> &SparseOperator {
        self.hop[from][to]
            .as_ref()
            .expect("X generator requested on a single mode")
    }

    /// `Σ_k N_k`.
    pub fn total_number(&self) -> SparseOperator {
        self.number
            .iter()
            .skip(1)
            .fold(self.number[0].clone(), |acc, n| acc.add(n).expect("same dimension"))
    }

    /// Same operators with ordinals relabelled by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let p = |ops: &Vec<SparseOperator>| ops.iter().map(|o| o.permuted(perm)).collect();
        Self {
            params: self.params,
            lower: p(&self.lower),
            raise: p(&self.raise),
            number: p(&self.number),
            hop: self
                .hop
                .iter()
                .map(|row| row.iter().map(|o| o.as_ref().map(|o| o.permuted(perm))).collect())
                .collect(),
            identity: self.identity.permuted(perm),
            unitary: self.unitary,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn ket(basis: &FockBasis, m: &[usize]) -> Vec<Complex64> {
        let mut v = vec![Complex64::default(); basis.len()];
        v[basis.rank(&mi(m)).unwrap()] = Complex64::new(1.0, 0.0);
        v
    }

    fn amp(basis: &FockBasis, v: &[Complex64], m: &[usize]) -> Complex64 {
        v[basis.rank(&mi(m)).unwrap()]
    }

    #[test]
    fn params_and_shift() {
        assert_eq!(AlgebraParams::new(1.0, 2).unwrap().nu(), 0.0);
        assert_eq!(AlgebraParams::new(2.0, 2).unwrap().nu(), 0.5);
        assert_eq!(AlgebraParams::new(0.0, 2), Err(Error::SingularParameter));
        assert!(AlgebraParams::new(1.0, 0).is_err());
        assert!(AlgebraParams::new(f64::NAN, 2).is_err());
    }

    #[test]
    fn structure_function_values() {
        let p1 = AlgebraParams::new(1.0, 2).unwrap();
        let p2 = AlgebraParams::new(2.0, 2).unwrap();
        assert_eq!(structure_f_squared(&p1, 0, &mi(&[1, 0])), 1.0);
        assert_eq!(structure_f_squared(&p2, 0, &mi(&[1, 1])), 6.0);
        for kappa in [0.3, 0.7, 1.0, 2.0, -1.5, 5.0] {
            let p = AlgebraParams::new(kappa, 3).unwrap();
            assert_eq!(structure_f_squared(&p, 1, &mi(&[2, 0, 3])), 0.0);
        }
    }

    #[test]
    fn recurrence_with_factorizing_gauge_matches_closed_form() {
        let p = AlgebraParams::new(1.0, 2).unwrap();
        let b = FockBasis::enumerate(2, 4).unwrap();
        let f = solve_recurrence(&p, &b, Gauge::Factorizing).unwrap();
        assert_relative_eq!(f.get(0, &mi(&[1, 0])).unwrap(), 1.0, epsilon = 1e-14);
        for kappa in [0.7, 2.0, 5.0, -0.4] {
            let p = AlgebraParams::new(kappa, 3).unwrap();
            let b = FockBasis::enumerate(3, 6).unwrap();
            let f = solve_recurrence(&p, &b, Gauge::Factorizing).unwrap();
            assert!(f.max_deviation_from_closed_form() < 1e-12);
            assert!(f.recurrence_residual() < 1e-12);
        }
    }

    #[test]
    fn zero_gauge_matches_general_solution() {
        for kappa in [0.7, 2.0] {
            let p = AlgebraParams::new(kappa, 2).unwrap();
            let nu = p.nu();
            let b = FockBasis::enumerate(2, 3).unwrap();
            let f = solve_recurrence(&p, &b, Gauge::Zero).unwrap();
            let want = kappa * (1.0 + nu).powi(2) + kappa * (1.0 + nu) * nu + (1.0 - kappa) * (1.0 + nu);
            assert_relative_eq!(f.get(0, &mi(&[1, 0])).unwrap(), want, max_relative = 1e-12);
            assert!(f.recurrence_residual() < 1e-12);
        }
    }

    #[test]
    fn unshifted_gauge_factorizes_only_at_unit_kappa() {
        let b = FockBasis::enumerate(2, 4).unwrap();
        let p = AlgebraParams::new(1.0, 2).unwrap();
        let f = solve_recurrence(&p, &b, Gauge::Unshifted).unwrap();
        assert!(f.max_deviation_from_closed_form() < 1e-12);
        let p = AlgebraParams::new(2.0, 2).unwrap();
        let f = solve_recurrence(&p, &b, Gauge::Unshifted).unwrap();
        // sits (κ - 1)ν = 1/2 above the factorizing gauge
        assert_relative_eq!(f.get(0, &mi(&[0, 0])).unwrap(), 2.0 * 2.0 * 0.25 - 0.5, epsilon = 1e-14);
        assert!(f.max_deviation_from_closed_form() > 0.1);
    }

    #[test]
    fn ladder_actions() {
        let b = FockBasis::enumerate(2, 3).unwrap();
        let p1 = AlgebraParams::new(1.0, 2).unwrap();
        let p2 = AlgebraParams::new(2.0, 2).unwrap();
        let s = UnitarityPolicy::Strict;

        let a1 = annihilator(&p1, &b, 0, s).unwrap();
        assert_eq!(a1.quanta_shift(), QuantaShift::Fixed(-1));
        assert!(a1.apply(&ket(&b, &[0, 0])).unwrap().iter().all(|z| z.norm() == 0.0));
        let out = a1.apply(&ket(&b, &[1, 0])).unwrap();
        assert_eq!(amp(&b, &out, &[0, 0]), Complex64::new(1.0, 0.0));

        let a1 = annihilator(&p2, &b, 0, s).unwrap();
        let out = a1.apply(&ket(&b, &[1, 1])).unwrap();
        assert_relative_eq!(amp(&b, &out, &[0, 1]).re, 6f64.sqrt(), max_relative = 1e-15);

        let c1 = creator(&p2, &b, 0, s).unwrap();
        let out = c1.apply(&ket(&b, &[0, 0])).unwrap();
        assert_relative_eq!(amp(&b, &out, &[1, 0]).re, 2.0, max_relative = 1e-15);
        assert_eq!(c1, a1.adjoint());

        let c1 = creator(&p1, &b, 0, s).unwrap();
        let out = c1.apply(&ket(&b, &[0, 0])).unwrap();
        assert_eq!(amp(&b, &out, &[1, 0]), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn number_operator_diagonal() {
        let b = FockBasis::enumerate(2, 3).unwrap();
        let p1 = AlgebraParams::new(1.0, 2).unwrap();
        let p2 = AlgebraParams::new(2.0, 2).unwrap();
        let n1 = number_op(&p1, &b, 0).unwrap();
        assert_eq!(n1.get(0, 0).re, 0.0);
        let k = b.rank(&mi(&[2, 1])).unwrap();
        assert_eq!(number_op(&p2, &b, 0).unwrap().get(k, k).re, 2.5);
        assert_eq!(number_op(&p2, &b, 1).unwrap().get(k, k).re, 1.5);
        assert!(number_op(&p2, &b, 2).is_err());
    }

    #[test]
    fn x_generator_actions() {
        let b = FockBasis::enumerate(2, 3).unwrap();
        let p1 = AlgebraParams::new(1.0, 2).unwrap();
        let p2 = AlgebraParams::new(2.0, 2).unwrap();
        // X_21: from mode 2 to mode 1
        let x21 = x_op(&p1, &b, 1, 0).unwrap();
        let out = x21.apply(&ket(&b, &[0, 1])).unwrap();
        assert_eq!(amp(&b, &out, &[1, 0]), Complex64::new(1.0, 0.0));
        let x21 = x_op(&p2, &b, 1, 0).unwrap();
        let out = x21.apply(&ket(&b, &[0, 1])).unwrap();
        assert_relative_eq!(amp(&b, &out, &[1, 0]).re, 2.0, max_relative = 1e-15);
        for n1 in 0..=3 {
            assert!(x21.apply(&ket(&b, &[n1, 0])).unwrap().iter().all(|z| z.norm() == 0.0));
        }
        assert_eq!(x21.adjoint(), x_op(&p2, &b, 0, 1).unwrap());
        assert!(x_op(&p2, &b, 1, 1).is_err());
        assert!(x21.respects_shift(&b));
    }

    #[test]
    fn quadrature_entries() {
        let b = FockBasis::enumerate(2, 3).unwrap();
        let p1 = AlgebraParams::new(1.0, 2).unwrap();
        let (x1, p_1) = quadratures(&p1, &b, 0, UnitarityPolicy::Strict).unwrap();
        let r = b.rank(&mi(&[1, 0])).unwrap();
        assert_eq!(x1.get(r, 0), Complex64::new(0.5, 0.0));
        assert_eq!(p_1.get(r, 0).norm(), 0.5);
        assert_eq!(p_1.get(r, 0), Complex64::new(0.0, 0.5));
        assert_eq!(x1.adjoint(), x1);
        assert_eq!(p_1.adjoint(), p_1);

        let p2 = AlgebraParams::new(2.0, 2).unwrap();
        let (x1, p_1) = quadratures(&p2, &b, 0, UnitarityPolicy::Strict).unwrap();
        let sq = x1.matmul(&x1).unwrap().add(&p_1.matmul(&p_1).unwrap()).unwrap();
        let out = sq.apply(&ket(&b, &[0, 0])).unwrap();
        assert_relative_eq!(out[0].re, 2.0, max_relative = 1e-14);
        assert!(out.iter().skip(1).all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn ladder_operators_shift_grade_by_one() {
        let b = FockBasis::enumerate(3, 5).unwrap();
        let p = AlgebraParams::new(2.0, 3).unwrap();
        let ops = OperatorSet::build(&p, &b, UnitarityPolicy::Strict).unwrap();
        for i in 0..3 {
            assert!(ops.lower[i].respects_shift(&b));
            assert!(ops.raise[i].respects_shift(&b));
            assert_eq!(ops.raise[i], ops.lower[i].adjoint());
        }
    }

    #[test]
    fn unit_kappa_single_mode_squares() {
        let b = FockBasis::enumerate(1, 6).unwrap();
        let p = AlgebraParams::new(1.0, 1).unwrap();
        let a = annihilator(&p, &b, 0, UnitarityPolicy::Strict).unwrap();
        let ada = a.adjoint().matmul(&a).unwrap();
        for n in 0..=6 {
            assert_relative_eq!(ada.get(n, n).re, (n * n) as f64, max_relative = 1e-14);
            if n > 0 {
                assert_relative_eq!(a.get(n - 1, n).re, n as f64, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn non_unitary_needs_force() {
        let b = FockBasis::enumerate(2, 3).unwrap();
        let p = AlgebraParams::new(0.5, 2).unwrap();
        match annihilator(&p, &b, 0, UnitarityPolicy::Strict) {
            Err(Error::NonUnitary { offending }) => {
                assert_eq!(offending[0].1, mi(&[1, 0]));
                assert_relative_eq!(offending[0].2, -0.5, max_relative = 1e-12);
            }
            other => panic!("expected NonUnitary, got {other:?}"),
        }
        let a = annihilator(&p, &b, 0, UnitarityPolicy::Force).unwrap();
        assert!(!a.is_valid());
        let r = b.rank(&mi(&[1, 0])).unwrap();
        assert_relative_eq!(a.get(0, r).im, 0.5f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn boundary_kappa_is_unitary() {
        for d in [2usize, 3, 4] {
            let kappa = AlgebraParams::min_unitary_kappa(d);
            let p = AlgebraParams::new(kappa, d).unwrap();
            let b = FockBasis::enumerate(d, 4).unwrap();
            assert!(annihilator(&p, &b, 0, UnitarityPolicy::Strict).is_ok(), "d = {d}");
        }
    }
}
