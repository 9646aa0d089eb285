//! Process-wide numerical tolerances.
//!
//! Operations read the current values through [`tolerances`]; the values are
//! plain data and can be replaced with [`set_tolerances`] (the CLI does this
//! once for `--tol`).

use std::sync::RwLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Algebraic identities (unitarity, row 0, orthogonality, reality).
    pub algebraic: f64,
    /// Slack allowed below zero for eigenvalues in PSD checks.
    pub psd: f64,
    /// Conversions that should be exact up to rounding.
    pub round_trip: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: 1e-10,
            psd: 1e-9,
            round_trip: 1e-12,
        }
    }
}

static GLOBAL: RwLock<Tolerances> = RwLock::new(Tolerances {
    algebraic: 1e-10,
    psd: 1e-9,
    round_trip: 1e-12,
});

pub fn tolerances() -> Tolerances {
    *GLOBAL.read().unwrap_or_else(|e| e.into_inner())
}

pub fn set_tolerances(tol: Tolerances) {
    *GLOBAL.write().unwrap_or_else(|e| e.into_inner()) = tol;
}
