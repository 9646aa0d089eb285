//! Seeded random states, unitaries, Kraus sets and gates.
//!
//! All samplers take a caller-owned RNG; [`rng`] gives the reproducible
//! ChaCha stream used by the CLI and test suites.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::{gate_from_kraus, GateMatrix, KrausSet};
use crate::error::{Error, Result};
use crate::linalg::{self, pow2, CMatrix, C64};
use crate::state::{density_to_pvec, DensityMatrix, PauliVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(normal(rng), normal(rng)) * 0.5f64.sqrt()
    })
}

/// Haar-distributed `d x d` unitary (QR of a Ginibre matrix with the phases of `R` removed).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let qr = ginibre(rng, d, d).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            linalg::ONE
        };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let g = ginibre(rng, d, d);
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// Full-rank density matrix `G G^dag / Tr(G G^dag)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    let d = pow2(n);
    let g = ginibre(rng, d, d);
    let rho = &g * g.adjoint();
    let tr = linalg::trace(&rho);
    let rho = rho / tr;
    let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(rho).expect("Ginibre state has the right shape")
}

pub fn random_pvec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PauliVector {
    density_to_pvec(&random_density(rng, n)).expect("random density is Hermitian with unit trace")
}

/// `m` Kraus operators `2^n_out x 2^n_in` cut from the columns of a Haar unitary,
/// so `sum A^dag A = I` up to rounding.
pub fn random_kraus<R: Rng + ?Sized>(
    rng: &mut R,
    n_in: usize,
    n_out: usize,
    m: usize,
) -> Result<KrausSet> {
    let (d_in, d_out) = (pow2(n_in), pow2(n_out));
    if m == 0 || m * d_out < d_in {
        return Err(Error::InvalidValue(format!(
            "{m} Kraus operator(s) of {d_out} rows cannot be complete on dimension {d_in}"
        )));
    }
    let u = haar_unitary(rng, m * d_out);
    let ops = (0..m)
        .map(|j| u.view((j * d_out, 0), (d_out, d_in)).into_owned())
        .collect();
    KrausSet::new(ops)
}

/// Trace-preserving completely positive gate on `n` ququats with `m` Kraus operators.
pub fn random_tp_gate<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<GateMatrix> {
    gate_from_kraus(&random_kraus(rng, n, n, m)?)
}
