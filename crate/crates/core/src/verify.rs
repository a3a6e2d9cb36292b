//! Numerical certification of the defining relations on the truncation interior.
//!
//! Each relation is evaluated as `LHS - RHS` with sparse matrix products and
//! then sandwiched between the projector onto grades `≤ n_max - margin`. The
//! margin is the largest grade excursion of any intermediate product in the
//! relation, so the projected residual never sees entries lost at the cutoff.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{negative_radicands, AlgebraParams, OperatorSet, UnitarityPolicy};
use crate::error::{Error, Result};
use crate::fock::{FockBasis, MultiIndex};
use crate::sparse::SparseOperator;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Denominator floor for relative residuals.
const SCALE_FLOOR: f64 = 1e-12;

/// The fixed relation catalogue. Pairs `i ≠ j` range over all ordered pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationTag {
    /// `[a_i, a_i†] = 1 + κ(ΣN + N_i)`
    DiagCommutator,
    /// `[N_i, a_j] = -δ_ij a_j` and `[N_i, a_j†] = +δ_ij a_j†`
    NumberLadder,
    /// `[a_i, a_j] = 0`
    ModeCommute,
    /// `[a_i†, a_j†] = 0`
    AdjointCommute,
    /// `[a_j, a_i†] = X_ji`
    CrossCommutator,
    /// `[a_j, a_i† a_i] = (κN_i + 1 - κ) a_j`
    NumberWeightedLadder,
    /// `X_ji a_i = (κN_i + 1 - κ) a_j`
    XIntertwinerLeft,
    /// `a_i† X_ij = a_j† (κN_i + 1 - κ)`
    XIntertwinerRight,
    /// `[X_ji, a_j] = 0` and `[X_ij, a_j†] = 0`
    XModeCommute,
    /// `[a_i, [a_i, a_j†]] = 0` and `[a_i†, [a_i†, a_j]] = 0`
    DoubleCommutators,
    /// `X_ij = X_ji†`
    XAdjointPairing,
    /// `a_i† a_i = (ΣN)(κN_i + 1 - κ)`
    AdagAIdentity,
}

impl RelationTag {
    pub const ALL: [RelationTag; 12] = [
        RelationTag::DiagCommutator,
        RelationTag::NumberLadder,
        RelationTag::ModeCommute,
        RelationTag::AdjointCommute,
        RelationTag::CrossCommutator,
        RelationTag::NumberWeightedLadder,
        RelationTag::XIntertwinerLeft,
        RelationTag::XIntertwinerRight,
        RelationTag::XModeCommute,
        RelationTag::DoubleCommutators,
        RelationTag::XAdjointPairing,
        RelationTag::AdagAIdentity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationTag::DiagCommutator => "diag-commutator",
            RelationTag::NumberLadder => "number-ladder",
            RelationTag::ModeCommute => "mode-commute",
            RelationTag::AdjointCommute => "adjoint-commute",
            RelationTag::CrossCommutator => "cross-commutator",
            RelationTag::NumberWeightedLadder => "number-weighted-ladder",
            RelationTag::XIntertwinerLeft => "x-intertwiner-left",
            RelationTag::XIntertwinerRight => "x-intertwiner-right",
            RelationTag::XModeCommute => "x-mode-commute",
            RelationTag::DoubleCommutators => "double-commutators",
            RelationTag::XAdjointPairing => "x-adjoint-pairing",
            RelationTag::AdagAIdentity => "adag-a-identity",
        }
    }

    /// Interior margin used unless overridden.
    pub fn default_margin(self) -> usize {
        match self {
            RelationTag::XAdjointPairing => 0,
            RelationTag::NumberWeightedLadder
            | RelationTag::DoubleCommutators
            | RelationTag::AdagAIdentity => 2,
            _ => 1,
        }
    }

    /// Whether the relation is stated for distinct modes only.
    pub fn needs_two_modes(self) -> bool {
        !matches!(
            self,
            RelationTag::DiagCommutator | RelationTag::NumberLadder | RelationTag::AdagAIdentity
        )
    }

    /// Tags that make sense for `d` modes, in catalogue order.
    pub fn applicable(d: usize) -> Vec<RelationTag> {
        Self::ALL
            .into_iter()
            .filter(|t| d >= 2 || !t.needs_two_modes())
            .collect()
    }
}

impl fmt::Display for RelationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownRelation(s.to_string()))
    }
}

/// Outcome of one relation check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: RelationTag,
    pub kappa: f64,
    pub d: usize,
    pub nu: f64,
    pub n_max: usize,
    pub margin: usize,
    /// Number of operator identities (mode / pair instances) evaluated.
    pub cases: usize,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub tol: f64,
    pub pass: bool,
    /// False when the representation has negative squared amplitudes.
    pub unitary: bool,
}

/// One instance of a relation: `lhs` should equal `rhs`; `terms` are the
/// products that make up `lhs`, used to scale residuals when `rhs = 0`.
struct Case {
    lhs: SparseOperator,
    rhs: SparseOperator,
    terms: Vec<SparseOperator>,
}

fn comm_case(a: &SparseOperator, b: &SparseOperator, rhs: SparseOperator) -> Result<Case> {
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    Ok(Case {
        lhs: ab.sub(&ba)?,
        rhs,
        terms: vec![ab, ba],
    })
}

/// `κN_i + 1 - κ`
fn mode_weight(ops: &OperatorSet, i: usize) -> Result<SparseOperator> {
    let k = ops.params.kappa();
    ops.number[i]
        .scale_real(k)
        .add(&ops.identity.scale_real(1.0 - k))
}

fn pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
}

fn build_cases(tag: RelationTag, ops: &OperatorSet) -> Result<Vec<Case>> {
    let d = ops.params.modes();
    let dim = ops.dim();
    let zero = || SparseOperator::zero(dim);
    let mut cases = Vec::new();
    match tag {
        RelationTag::DiagCommutator => {
            let total = ops.total_number();
            for i in 0..d {
                let rhs = ops
                    .identity
                    .add(&total.add(&ops.number[i])?.scale_real(ops.params.kappa()))?;
                cases.push(comm_case(&ops.lower[i], &ops.raise[i], rhs)?);
            }
        }
        RelationTag::NumberLadder => {
            for i in 0..d {
                for j in 0..d {
                    let (down, up) = if i == j {
                        (ops.lower[j].scale_real(-1.0), ops.raise[j].clone())
                    } else {
                        (zero(), zero())
                    };
                    cases.push(comm_case(&ops.number[i], &ops.lower[j], down)?);
                    cases.push(comm_case(&ops.number[i], &ops.raise[j], up)?);
                }
            }
        }
        RelationTag::ModeCommute => {
            for (i, j) in pairs(d) {
                cases.push(comm_case(&ops.lower[i], &ops.lower[j], zero())?);
            }
        }
        RelationTag::AdjointCommute => {
            for (i, j) in pairs(d) {
                cases.push(comm_case(&ops.raise[i], &ops.raise[j], zero())?);
            }
        }
        RelationTag::CrossCommutator => {
            for (i, j) in pairs(d) {
                // [a_j, a_i†] = X_ji, which lowers j and raises i
                cases.push(comm_case(&ops.lower[j], &ops.raise[i], ops.x(j, i).clone())?);
            }
        }
        RelationTag::NumberWeightedLadder => {
            for (i, j) in pairs(d) {
                let ada = ops.raise[i].matmul(&ops.lower[i])?;
                let rhs = mode_weight(ops, i)?.matmul(&ops.lower[j])?;
                cases.push(comm_case(&ops.lower[j], &ada, rhs)?);
            }
        }
        RelationTag::XIntertwinerLeft => {
            for (i, j) in pairs(d) {
                let lhs = ops.x(j, i).matmul(&ops.lower[i])?;
                let rhs = mode_weight(ops, i)?.matmul(&ops.lower[j])?;
                cases.push(Case {
                    terms: vec![lhs.clone()],
                    lhs,
                    rhs,
                });
            }
        }
        RelationTag::XIntertwinerRight => {
            for (i, j) in pairs(d) {
                let lhs = ops.raise[i].matmul(ops.x(i, j))?;
                let rhs = ops.raise[j].matmul(&mode_weight(ops, i)?)?;
                cases.push(Case {
                    terms: vec![lhs.clone()],
                    lhs,
                    rhs,
                });
            }
        }
        RelationTag::XModeCommute => {
            for (i, j) in pairs(d) {
                cases.push(comm_case(ops.x(j, i), &ops.lower[j], zero())?);
                cases.push(comm_case(ops.x(i, j), &ops.raise[j], zero())?);
            }
        }
        RelationTag::DoubleCommutators => {
            for (i, j) in pairs(d) {
                let inner = ops.lower[i].commutator(&ops.raise[j])?;
                cases.push(comm_case(&ops.lower[i], &inner, zero())?);
                let inner = ops.raise[i].commutator(&ops.lower[j])?;
                cases.push(comm_case(&ops.raise[i], &inner, zero())?);
            }
        }
        RelationTag::XAdjointPairing => {
            for (i, j) in pairs(d) {
                let lhs = ops.x(i, j).clone();
                cases.push(Case {
                    terms: vec![lhs.clone()],
                    lhs,
                    rhs: ops.x(j, i).adjoint(),
                });
            }
        }
        RelationTag::AdagAIdentity => {
            let total = ops.total_number();
            for i in 0..d {
                let lhs = ops.raise[i].matmul(&ops.lower[i])?;
                let rhs = total.matmul(&mode_weight(ops, i)?)?;
                cases.push(Case {
                    terms: vec![lhs.clone()],
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(cases)
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &SparseOperator, b: &SparseOperator) -> Result<SparseOperator> {
    a.commutator(b)
}

/// Diagonal 0/1 operator selecting the states with total `≤ n_max - margin`.
pub fn interior_projector(basis: &FockBasis, margin: usize) -> Result<SparseOperator> {
    if margin > basis.n_max() {
        return Err(Error::Domain(format!(
            "interior margin {margin} exceeds n_max = {}",
            basis.n_max()
        )));
    }
    let top = basis.n_max() - margin;
    Ok(SparseOperator::from_diagonal(basis.states().iter().map(
        |m| {
            if m.total() <= top {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        },
    )))
}

fn sandwich(p: &SparseOperator, op: &SparseOperator) -> Result<SparseOperator> {
    p.matmul(op)?.matmul(p)
}

/// `(max absolute, max relative)` residual over the cases of one relation.
fn residuals(tag: RelationTag, ops: &OperatorSet, projector: &SparseOperator) -> Result<(usize, f64, f64)> {
    let cases = build_cases(tag, ops)?;
    let mut max_abs: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    for case in &cases {
        let abs = sandwich(projector, &case.lhs.sub(&case.rhs)?)?.max_abs();
        let rhs_scale = sandwich(projector, &case.rhs)?.max_abs();
        let scale = if rhs_scale > 0.0 {
            rhs_scale
        } else {
            case.terms
                .iter()
                .map(|t| sandwich(projector, t).map(|s| s.max_abs()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(SCALE_FLOOR, f64::max)
        };
        max_abs = max_abs.max(abs);
        max_rel = max_rel.max(abs / scale);
    }
    Ok((cases.len(), max_abs, max_rel))
}

/// Check one relation on prebuilt operators.
pub fn check_relation_with(
    tag: RelationTag,
    ops: &OperatorSet,
    basis: &FockBasis,
    margin: usize,
    tol: f64,
) -> Result<RelationReport> {
    let d = ops.params.modes();
    if tag.needs_two_modes() && d < 2 {
        return Err(Error::Domain(format!("relation {tag} needs at least two modes")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let projector = interior_projector(basis, margin)?;
    let (cases, max_abs, max_rel) = residuals(tag, ops, &projector)?;
    Ok(RelationReport {
        relation: tag,
        kappa: ops.params.kappa(),
        d,
        nu: ops.params.nu(),
        n_max: basis.n_max(),
        margin,
        cases,
        max_abs_residual: max_abs,
        max_rel_residual: max_rel,
        tol,
        pass: max_rel <= tol,
        unitary: ops.unitary,
    })
}

/// Check one relation, building the representation first. Non-unitary
/// parameters are accepted: the relations are checked on the formal
/// representation and the report says `unitary: false`.
pub fn check_relation(
    tag: RelationTag,
    params: &AlgebraParams,
    basis: &FockBasis,
    tol: f64,
) -> Result<RelationReport> {
    let ops = OperatorSet::build(params, basis, UnitarityPolicy::Force)?;
    check_relation_with(tag, &ops, basis, tag.default_margin(), tol)
}

/// Run every applicable relation, with optional per-relation margins.
pub fn check_catalogue(
    params: &AlgebraParams,
    basis: &FockBasis,
    tol: f64,
    margins: &BTreeMap<RelationTag, usize>,
) -> Result<Vec<RelationReport>> {
    let ops = OperatorSet::build(params, basis, UnitarityPolicy::Force)?;
    RelationTag::applicable(params.modes())
        .into_iter()
        .map(|tag| {
            let margin = margins.get(&tag).copied().unwrap_or(tag.default_margin());
            check_relation_with(tag, &ops, basis, margin, tol)
        })
        .collect()
}

/// A state where the squared ladder amplitude of `mode` is negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffendingState {
    /// Zero-based mode index.
    pub mode: usize,
    pub state: MultiIndex,
    pub radicand: f64,
}

/// Sign audit of every squared ladder amplitude on a basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitarityReport {
    pub kappa: f64,
    pub d: usize,
    pub nu: f64,
    pub n_max: usize,
    /// In basis order, then mode order.
    pub offending: Vec<OffendingState>,
    /// `d/(d+1)`: derived bound, not part of the algebra's definition.
    pub min_valid_kappa: f64,
}

impl UnitarityReport {
    pub fn is_unitary(&self) -> bool {
        self.offending.is_empty()
    }
}

pub fn unitarity_check(params: &AlgebraParams, basis: &FockBasis) -> UnitarityReport {
    let offending = negative_radicands(params, basis, 0..params.modes())
        .into_iter()
        .map(|(mode, state, radicand)| OffendingState {
            mode,
            state,
            radicand,
        })
        .collect();
    UnitarityReport {
        kappa: params.kappa(),
        d: params.modes(),
        nu: params.nu(),
        n_max: basis.n_max(),
        offending,
        min_valid_kappa: AlgebraParams::min_unitary_kappa(params.modes()),
    }
}
