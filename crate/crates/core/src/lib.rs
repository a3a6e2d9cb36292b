//! Finite truncations of the deformed Weyl–Heisenberg algebras `A_κ(d)`.
//!
//! The crate builds the ladder operators `a_i`, `a_i†`, the number operators
//! `N_i` and the inter-mode generators `X_ij` as sparse matrices on a graded
//! multi-mode Fock basis, checks the defining commutation relations on the
//! truncation interior, and evaluates the deformed harmonic spectrum.
//!
//! ```
//! use kappa_weyl::{AlgebraParams, FockBasis, spectrum};
//!
//! let params = AlgebraParams::new(1.0, 2).unwrap();
//! let basis = FockBasis::enumerate(2, 3).unwrap();
//! let report = spectrum::spectrum_report(&params, &basis, 1e-10).unwrap();
//! for (level, want) in report.levels.iter().zip([1.0, 3.5, 8.0, 14.5]) {
//!     assert!((level.energy_matrix - want).abs() < 1e-12);
//! }
//! ```

pub mod algebra;
mod error;
pub mod fock;
pub mod sparse;
pub mod spectrum;
pub mod verify;

pub use algebra::{AlgebraParams, Gauge, OperatorSet, StructureFunction, UnitarityPolicy};
pub use error::{Error, Result};
pub use fock::{degeneracy, FockBasis, MultiIndex, DEFAULT_DIM_CAP};
pub use sparse::{QuantaShift, SparseOperator};
pub use spectrum::{EnergyQuadratic, QuadraticVariant, SpectrumReport};
pub use verify::{RelationReport, RelationTag, UnitarityReport};
