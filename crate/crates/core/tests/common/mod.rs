//! Random density matrices for integration tests.
#![allow(dead_code)]

use excitonkit::linalg::{c, CMatrix};
use excitonkit::{SubspaceState, TwoQubitState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ginibre-distributed mixed state `G G† / Tr(G G†)`.
pub fn ginibre(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let mut draw = || -> f64 { StandardNormal.sample(rng) };
    let g = CMatrix::from_fn(dim, dim, |_, _| c(draw(), draw()));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    m / c(tr, 0.0)
}

/// Random sites-only subspace state of an `n`-site network.
pub fn subspace_state(rng: &mut ChaCha8Rng, n_sites: usize) -> SubspaceState {
    SubspaceState::from_matrix(ginibre(rng, n_sites + 1), false).unwrap()
}

pub fn two_qubit_state(rng: &mut ChaCha8Rng) -> TwoQubitState {
    TwoQubitState::new(ginibre(rng, 4)).unwrap()
}
