//! Plane-wave transmission through one or two parity-invariant point
//! interactions on the line, and the parameter relations under which
//! the double junction becomes perfectly transparent.
//!
//! A parity-invariant junction is fixed by two angles on a torus or,
//! equivalently, by two extended lengths `L⁽⁺⁾ = L₀·cot(θ₊/2)` and
//! `L⁽⁻⁾ = L₀·cot(θ₋/2)`. Lengths are kept in homogeneous form so the
//! free and Neumann junctions (one or both lengths infinite) need no
//! special casing anywhere downstream.
//!
//! ```
//! use pointscatter::{DoubleConfig, JunctionParams, ExtendedLength};
//!
//! let j1 = JunctionParams::from_lengths(
//!     ExtendedLength::new(2.0).unwrap(),
//!     ExtendedLength::new(-1.0).unwrap(),
//!     1.0,
//! ).unwrap();
//! let j2 = j1.negated();
//! let config = DoubleConfig::new(j1, j2, 1.0).unwrap();
//! let t = pointscatter::t2(&config, std::f64::consts::PI).unwrap();
//! assert!((t - 1.0).abs() < 1e-10);
//! ```

pub mod cli;
pub mod double;
pub mod error;
pub mod junction;
mod linear;
pub mod par;
pub mod resonance;
pub mod roots;
pub mod single;

pub use double::{
    double_amplitudes, double_oracle, t2, transfer_compose_check, DoubleConfig, DoubleSolution,
    TransferCheck,
};
pub use error::{Error, Result};
pub use junction::{classify_junction, BoundaryClass, ExtendedLength, JunctionParams};
pub use par::Execution;
pub use resonance::{
    analyze, classify_relation, incidental_resonance, peak_width, quartic_coefficients,
    resonance_matrix, resonance_residuals, resonance_roots_case_i, resonance_roots_case_ii,
    resonant_separations, IncidentalCandidate, PeakWidth, QuarticCoefficients, RelationClass,
    ResonanceMatrix, ResonanceReport, ResonanceRoot, RootKind,
};
pub use single::{single_amplitudes, single_oracle, t1, IncidentSide, OracleSolve, SingleSolution};
