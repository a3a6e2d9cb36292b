//! Deformed harmonic Hamiltonian, its spectrum, and energy-positivity analysis.
//!
//! `H = Σ_i (X_i² + P_i²)` with `X_i = (a_i + a_i†)/2`, `P_i = (a_i - a_i†)/(2i)`.
//! As an operator identity `H = κ(ΣN)² + (d - (d-1)κ/2) ΣN + d/2`, and on
//! grade `n` the operator `ΣN` has eigenvalue `n + dν`.
//!
//! Two closed forms are reported next to the matrix eigenvalues:
//!
//! * bare-grade: the quadratic evaluated at the bare grade `n`;
//! * shift-corrected: the same quadratic at `n + dν`, which is what the
//!   matrix actually produces.
//!
//! They coincide only at `κ = 1`.

use serde::{Deserialize, Serialize};

use crate::algebra::{quadratures, AlgebraParams, UnitarityPolicy};
use crate::error::{Error, Result};
use crate::fock::{degeneracy, FockBasis};
use crate::sparse::SparseOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadraticVariant {
    BareGrade,
    ShiftCorrected,
}

/// `E(n) = a2·n² + a1·n + a0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyQuadratic {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
    pub variant: QuadraticVariant,
}

/// Linear coefficient `d - (d-1)κ/2`.
fn linear_coeff(kappa: f64, d: usize) -> f64 {
    d as f64 - (d as f64 - 1.0) * kappa / 2.0
}

impl EnergyQuadratic {
    /// `κn² + (d - (d-1)κ/2) n + d/2`; any real κ, including 0.
    pub fn paper_literal(kappa: f64, d: usize) -> Self {
        Self {
            a2: kappa,
            a1: linear_coeff(kappa, d),
            a0: d as f64 / 2.0,
            variant: QuadraticVariant::BareGrade,
        }
    }

    /// The bare-grade quadratic re-expanded around `m = n + dν`.
    pub fn shift_corrected(params: &AlgebraParams) -> Self {
        let k = params.kappa();
        let b = linear_coeff(k, params.modes());
        let s = params.modes() as f64 * params.nu();
        Self {
            a2: k,
            a1: 2.0 * k * s + b,
            a0: k * s * s + b * s + params.modes() as f64 / 2.0,
            variant: QuadraticVariant::ShiftCorrected,
        }
    }

    pub fn eval(&self, n: f64) -> f64 {
        (self.a2 * n + self.a1) * n + self.a0
    }

    pub fn discriminant(&self) -> f64 {
        self.a1 * self.a1 - 4.0 * self.a2 * self.a0
    }

    /// Whether `E(n) > 0` for every real `n ≥ 0`.
    pub fn positive_for_real_n(&self) -> bool {
        if self.a2 > 0.0 {
            let vertex = (-self.a1 / (2.0 * self.a2)).max(0.0);
            self.eval(vertex) > 0.0
        } else if self.a2 == 0.0 {
            self.a0 > 0.0 && self.a1 >= 0.0
        } else {
            false
        }
    }
}

/// Grade-`n` energy from the bare-grade quadratic.
pub fn energy_paper_literal(kappa: f64, d: usize, n: usize) -> f64 {
    EnergyQuadratic::paper_literal(kappa, d).eval(n as f64)
}

/// Grade-`n` energy with `ΣN → n + dν`; equals the matrix eigenvalue.
pub fn energy_shift_corrected(params: &AlgebraParams, n: usize) -> f64 {
    let m = n as f64 + params.modes() as f64 * params.nu();
    EnergyQuadratic::paper_literal(params.kappa(), params.modes()).eval(m)
}

/// `Σ_i (X_i² + P_i²)` on the truncated basis. Exact (and diagonal) on the
/// grades below `n_max`; the top grade misses the `a_i a_i†` term.
pub fn hamiltonian(
    params: &AlgebraParams,
    basis: &FockBasis,
    policy: UnitarityPolicy,
) -> Result<SparseOperator> {
    let mut h = SparseOperator::zero(basis.len());
    for i in 0..params.modes() {
        let (x, p) = quadratures(params, basis, i, policy)?;
        h = h.add(&x.matmul(&x)?)?.add(&p.matmul(&p)?)?;
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub grade: usize,
    pub degeneracy: u128,
    pub energy_matrix: f64,
    pub energy_paper: f64,
    pub energy_shifted: f64,
    pub paper_match: bool,
    pub shifted_match: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub kappa: f64,
    pub d: usize,
    pub nu: f64,
    pub n_max: usize,
    pub levels: Vec<Level>,
    /// Largest off-diagonal modulus relative to the largest diagonal modulus.
    pub max_offdiag: f64,
    /// Largest within-grade eigenvalue spread, relative to the level energy.
    pub max_spread: f64,
    /// Largest imaginary part of any entry of `H`.
    pub max_imag: f64,
    pub tol: f64,
    pub invalid_representation: bool,
}

impl SpectrumReport {
    pub fn basis_size(&self) -> u128 {
        self.levels.iter().map(|l| l.degeneracy).sum()
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Spectrum of `H` grouped by grade, for unitary parameters.
pub fn spectrum_report(params: &AlgebraParams, basis: &FockBasis, tol: f64) -> Result<SpectrumReport> {
    spectrum_report_with(params, basis, tol, UnitarityPolicy::Strict)
}

/// Spectrum of `H` grouped by grade. `H` is built one grade beyond the
/// basis so that every grade of `basis` gets its exact eigenvalue.
pub fn spectrum_report_with(
    params: &AlgebraParams,
    basis: &FockBasis,
    tol: f64,
    policy: UnitarityPolicy,
) -> Result<SpectrumReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if basis.modes() != params.modes() {
        return Err(Error::Domain(format!(
            "basis has {} modes but parameters have d = {}",
            basis.modes(),
            params.modes()
        )));
    }
    let wide = basis.extended(1)?;
    let h = hamiltonian(params, &wide, policy)?;
    let inner = basis.len();

    let diag: Vec<f64> = h.diagonal()[..inner].iter().map(|z| z.re).collect();
    let max_diag = diag.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let offdiag = h
        .entries()
        .iter()
        .filter(|&&(r, c, _)| r != c && r < inner && c < inner)
        .map(|e| e.2.norm())
        .fold(0.0, f64::max);
    let max_offdiag = if max_diag > 0.0 { offdiag / max_diag } else { offdiag };
    let max_imag = h
        .entries()
        .iter()
        .filter(|&&(r, c, _)| r < inner && c < inner)
        .map(|e| e.2.im.abs())
        .fold(0.0, f64::max);

    let mut levels = Vec::with_capacity(basis.n_max() + 1);
    let mut max_spread: f64 = 0.0;
    for grade in 0..=basis.n_max() {
        let block = &diag[basis.grade_range(grade)];
        let hi = block.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = block.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = block.iter().sum::<f64>() / block.len() as f64;
        let spread = if mean != 0.0 { (hi - lo) / mean.abs() } else { hi - lo };
        max_spread = max_spread.max(spread);

        let energy_paper = energy_paper_literal(params.kappa(), params.modes(), grade);
        let energy_shifted = energy_shift_corrected(params, grade);
        levels.push(Level {
            grade,
            degeneracy: degeneracy(params.modes(), grade)?,
            energy_matrix: mean,
            energy_paper,
            energy_shifted,
            paper_match: close(energy_paper, mean, tol),
            shifted_match: close(energy_shifted, mean, tol),
        });
    }

    if max_spread > tol || max_offdiag > tol || max_imag > 1e-12 {
        return Err(Error::Inconsistent(format!(
            "H is not a function of the grade: spread {max_spread:e}, off-diagonal {max_offdiag:e}, imaginary {max_imag:e}"
        )));
    }

    Ok(SpectrumReport {
        kappa: params.kappa(),
        d: params.modes(),
        nu: params.nu(),
        n_max: basis.n_max(),
        levels,
        max_offdiag,
        max_spread,
        max_imag,
        tol,
        invalid_representation: !h.is_valid(),
    })
}

/// Real-`n` positivity threshold `(2d(d+1) - 4d√d)/(d-1)²`: the smaller
/// root in κ of the bare-grade discriminant. Defined for `d ≥ 2`.
pub fn positivity_threshold_paper(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!(
            "positivity threshold is defined for d >= 2, got d = {d}"
        )));
    }
    let d = d as f64;
    Ok((2.0 * d * (d + 1.0) - 4.0 * d * d.sqrt()) / ((d - 1.0) * (d - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub all_positive: bool,
    pub first_violation: Option<u64>,
}

/// First integer `n ≥ 0` with `E(n) ≤ 0`, walking from a real root
/// `estimate` to absorb rounding. A violation must exist.
fn refine_violation(q: &EnergyQuadratic, estimate: f64) -> u64 {
    let mut n = if estimate.is_finite() && estimate > 0.0 {
        estimate.ceil() as u64
    } else {
        0
    };
    while n > 0 && q.eval((n - 1) as f64) <= 0.0 {
        n -= 1;
    }
    while q.eval(n as f64) > 0.0 {
        n += 1;
    }
    n
}

/// Whether `E(n) > 0` at every integer grade `n ≥ 0`, and if not the first
/// grade where it fails.
pub fn positivity_check_integer(q: &EnergyQuadratic) -> PositivityVerdict {
    let fail = |n| PositivityVerdict {
        all_positive: false,
        first_violation: Some(n),
    };
    let ok = PositivityVerdict {
        all_positive: true,
        first_violation: None,
    };
    if q.eval(0.0) <= 0.0 {
        return fail(0);
    }
    if q.a2 > 0.0 {
        // convex: the integer minimum sits next to the vertex
        let vertex = -q.a1 / (2.0 * q.a2);
        if vertex <= 0.0 {
            return ok;
        }
        let lo = vertex.floor();
        if q.eval(lo) > 0.0 && q.eval(lo + 1.0) > 0.0 {
            return ok;
        }
        let disc = q.discriminant().max(0.0);
        let small_root = (-q.a1 - disc.sqrt()) / (2.0 * q.a2);
        fail(refine_violation(q, small_root))
    } else if q.a2 == 0.0 {
        if q.a1 >= 0.0 {
            return ok;
        }
        fail(refine_violation(q, -q.a0 / q.a1))
    } else {
        // concave with E(0) > 0: one root on each side of zero
        let disc = q.discriminant();
        let big_root = (-q.a1 - disc.sqrt()) / (2.0 * q.a2);
        fail(refine_violation(q, big_root))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn paper_literal_values() {
        assert_eq!(energy_paper_literal(1.0, 2, 1), 3.5);
        for kappa in [-1.0, 0.0, 0.5, 2.0] {
            assert_eq!(energy_paper_literal(kappa, 2, 0), 1.0);
        }
        assert_eq!(energy_paper_literal(1.0, 3, 2), 9.5);
    }

    #[test]
    fn shift_corrected_values() {
        let p1 = AlgebraParams::new(1.0, 2).unwrap();
        for n in 0..6 {
            let nf = n as f64;
            assert_eq!(energy_shift_corrected(&p1, n), nf * nf + 1.5 * nf + 1.0);
        }
        let p2 = AlgebraParams::new(2.0, 2).unwrap();
        assert_eq!(energy_shift_corrected(&p2, 0), 4.0);
        assert_eq!(energy_shift_corrected(&p2, 1), 11.0);
        let q = EnergyQuadratic::shift_corrected(&p2);
        assert_eq!(q.a2, 2.0);
        for n in 0..5 {
            assert_relative_eq!(q.eval(n as f64), energy_shift_corrected(&p2, n), max_relative = 1e-14);
        }
    }

    #[test]
    fn hamiltonian_ground_entries() {
        let b = FockBasis::enumerate(2, 3).unwrap();
        let p2 = AlgebraParams::new(2.0, 2).unwrap();
        let h = hamiltonian(&p2, &b, UnitarityPolicy::Strict).unwrap();
        assert_relative_eq!(h.get(0, 0).re, 4.0, max_relative = 1e-14);
        let p1 = AlgebraParams::new(1.0, 2).unwrap();
        let h = hamiltonian(&p1, &b, UnitarityPolicy::Strict).unwrap();
        assert_relative_eq!(h.get(0, 0).re, 1.0, max_relative = 1e-14);
        let interior = b.grade_range(2).end;
        for &(r, c, v) in h.entries() {
            if r < interior && c < interior && r != c {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn spectrum_at_unit_kappa() {
        let p = AlgebraParams::new(1.0, 2).unwrap();
        let b = FockBasis::enumerate(2, 3).unwrap();
        let r = spectrum_report(&p, &b, 1e-10).unwrap();
        for (l, want) in r.levels.iter().zip([1.0, 3.5, 8.0, 14.5]) {
            assert_relative_eq!(l.energy_matrix, want, max_relative = 1e-12);
        }
        let g: Vec<u128> = r.levels.iter().map(|l| l.degeneracy).collect();
        assert_eq!(g, vec![1, 2, 3, 4]);
        assert!(r.levels.iter().all(|l| l.paper_match && l.shifted_match));
        assert_eq!(r.basis_size(), b.len() as u128);
    }

    #[test]
    fn spectrum_flags_bare_grade_mismatch() {
        let p = AlgebraParams::new(2.0, 2).unwrap();
        let b = FockBasis::enumerate(2, 2).unwrap();
        let r = spectrum_report(&p, &b, 1e-10).unwrap();
        for (l, want) in r.levels.iter().zip([4.0, 11.0, 22.0]) {
            assert_relative_eq!(l.energy_matrix, want, max_relative = 1e-12);
        }
        let lit: Vec<f64> = r.levels.iter().map(|l| l.energy_paper).collect();
        assert_eq!(lit, vec![1.0, 4.0, 11.0]);
        assert!(r.levels.iter().all(|l| !l.paper_match && l.shifted_match));
    }

    #[test]
    fn spectrum_rejects_non_unitary_unless_forced() {
        let p = AlgebraParams::new(0.5, 2).unwrap();
        let b = FockBasis::enumerate(2, 3).unwrap();
        assert!(matches!(spectrum_report(&p, &b, 1e-10), Err(Error::NonUnitary { .. })));
        let r = spectrum_report_with(&p, &b, 1e-10, UnitarityPolicy::Force).unwrap();
        assert!(r.invalid_representation);
        assert!(r.levels.iter().all(|l| l.shifted_match));
    }

    #[test]
    fn thresholds() {
        assert_relative_eq!(positivity_threshold_paper(2).unwrap(), 12.0 - 8.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(positivity_threshold_paper(3).unwrap(), 6.0 - 3.0 * 3f64.sqrt(), epsilon = 1e-12);
        assert!(positivity_threshold_paper(1).is_err());
        for d in 2..8 {
            let k = positivity_threshold_paper(d).unwrap();
            assert!(EnergyQuadratic::paper_literal(k, d).discriminant().abs() < 1e-9);
        }
    }

    #[test]
    fn integer_positivity_cases() {
        let v = positivity_check_integer(&EnergyQuadratic::paper_literal(0.5, 2));
        assert!(v.all_positive);
        let v = positivity_check_integer(&EnergyQuadratic::paper_literal(0.0, 2));
        assert!(v.all_positive);
        let v = positivity_check_integer(&EnergyQuadratic::paper_literal(-1.0, 2));
        assert_eq!(v, PositivityVerdict { all_positive: false, first_violation: Some(3) });
    }

    #[test]
    fn integer_positivity_edge_shapes() {
        let q = |a2, a1, a0| EnergyQuadratic { a2, a1, a0, variant: QuadraticVariant::BareGrade };
        // dips below zero between 2 and 3 only: (n - 2.2)(n - 2.8)
        let v = positivity_check_integer(&q(1.0, -5.0, 6.16));
        assert!(v.all_positive);
        // (n - 1.5)(n - 3.5): negative at 2 and 3
        assert_eq!(positivity_check_integer(&q(1.0, -5.0, 5.25)).first_violation, Some(2));
        // touches zero at n = 2
        assert_eq!(positivity_check_integer(&q(1.0, -4.0, 4.0)).first_violation, Some(2));
        // linear decreasing: 10 - 3n, first non-positive at 4
        assert_eq!(positivity_check_integer(&q(0.0, -3.0, 10.0)).first_violation, Some(4));
        // non-positive at the ground grade
        assert_eq!(positivity_check_integer(&q(1.0, 1.0, 0.0)).first_violation, Some(0));
    }
}
