//! Coherence bookkeeping for Page-Wootters clocks.
//!
//! The total relative entropy of coherence of a state splits into an
//! internal part, which survives averaging over time translations, and an
//! external part (the Holevo asymmetry), which does not. This crate computes
//! both for two-qubit Bell-diagonal states and arbitrary small density
//! matrices, relates the internal part to clock agreement probabilities and
//! to extractable work, and builds zero-energy history states whose clock
//! slices evolve under the Schrödinger equation.
//!
//! Logarithms are base 2 throughout; free energies convert to nats internally.

pub mod channels;
pub mod clock;
pub mod error;
pub mod history;
pub mod measures;
pub mod qmat;
pub mod states;
pub mod thermo;
pub mod verify;

pub use channels::{full_dephase, twirl_pinching, twirl_quadrature, zeeman_hamiltonian, EnergyStructure};
pub use clock::{conditional_probabilities, p_rr_closed_form, sweep_family, ClockTable, SweepRecord};
pub use error::{Error, Result};
pub use measures::{coherence_breakdown, concurrence, internal_coherence_closed_form, CoherenceBreakdown};
pub use qmat::{kron, partial_trace, ComplexMatrix, HermitianEigen, Subsystem};
pub use states::{bell_diagonal, BellDiagonalTriplet, DensityMatrix};
pub use thermo::{work_from_internal_coherence, work_locking_demo, WorkReport};

pub use num_complex::Complex64;
