//! Open n-qubit states as real Pauli vectors in Liouville space, and quantum
//! operations as real `4^m x 4^n` gate matrices acting on them.
//!
//! A density matrix `rho` of `n` qubits is stored as the vector
//! `P_mu = Tr(sigma_mu rho)` (with `P_0 = 1`), indexed by base-4 Pauli labels.
//! Every quantum operation is then a real matrix `E` with `P' = E P`; such a
//! matrix is called a (quantum four-valued logic) gate. The crate builds gates
//! from unitaries, Kraus sets, projective measurements, Lindblad generators and
//! classical four-valued truth tables, and analyses and decomposes them.
//!
//! Module map:
//!
//! * [`pauli`], [`state`]: Pauli tensor basis, states and conversions.
//! * [`channel`]: gate construction, application, composition and analysis.
//! * [`decompose`]: translation split, SVD, polar and Euler decompositions.
//! * [`lindblad`]: Markovian generators and propagators.
//! * [`mvlogic`]: classical four-valued logic and its quantum realization.
//! * [`universality`]: pseudo-gates, Weyl generators, Lie closure.
//! * [`circuit`]: JSON circuits and their simulation.

pub mod channel;
pub mod circuit;
pub mod config;
pub mod decompose;
pub mod error;
pub mod io;
pub mod linalg;
pub mod lindblad;
pub mod mvlogic;
pub mod pauli;
pub mod random;
pub mod state;
pub mod universality;

pub use channel::{GateKind, GateMatrix, KrausSet};
pub use config::Tolerances;
pub use error::{Error, Result};
pub use pauli::PauliIndex;
pub use state::{DensityMatrix, PauliVector};

pub use num_complex::Complex64 as C64;
