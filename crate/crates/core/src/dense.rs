//! Dense tensor-product routines on full registers.
//!
//! These work on ordinary `∏ d_k`-dimensional density matrices with no knowledge
//! of the single-excitation structure, which makes them the reference against
//! which the compact subspace routines are checked. Cost is exponential in the
//! number of qubits.
//!
//! Party `0` is the most significant digit of a basis index. Qubit-level
//! helpers take 1-based qubit numbers to match site numbering.

use crate::correlations::{self, DiscordOptimizer, Measure};
use crate::linalg::{CMatrix, ZERO};
use crate::statespace::TwoQubitState;
use crate::{Error, Result};

fn digits(mut x: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = x % dims[k];
        x /= dims[k];
    }
    out
}

fn compose(ds: impl Iterator<Item = (usize, usize)>) -> usize {
    ds.fold(0, |acc, (digit, dim)| acc * dim + digit)
}

fn check_dims(rho: &CMatrix, dims: &[usize]) -> Result<usize> {
    let total: usize = dims.iter().product();
    if rho.nrows() != total || rho.ncols() != total {
        return Err(Error::Dimension(format!(
            "matrix is {}x{}, party dimensions {dims:?} need {total}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    Ok(total)
}

/// Keeps the parties listed in `keep` (in that order) and traces out the rest.
pub fn partial_trace(rho: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let total = check_dims(rho, dims)?;
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidArgument(format!("party out of range in {keep:?}")));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let keep_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();

    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_dim];
    for x in 0..total {
        let d = digits(x, dims);
        let k = compose(keep.iter().map(|&p| (d[p], dims[p])));
        let t = compose(traced.iter().map(|&p| (d[p], dims[p])));
        groups[t].push((k, x));
    }
    let mut out = CMatrix::from_element(keep_dim, keep_dim, ZERO);
    for g in &groups {
        for &(k1, x1) in g {
            for &(k2, x2) in g {
                out[(k1, k2)] += rho[(x1, x2)];
            }
        }
    }
    Ok(out)
}

/// Transposes the indices of one party.
pub fn partial_transpose(rho: &CMatrix, dims: &[usize], party: usize) -> Result<CMatrix> {
    let total = check_dims(rho, dims)?;
    if party >= dims.len() {
        return Err(Error::InvalidArgument(format!("party {party} out of range")));
    }
    let mut out = CMatrix::from_element(total, total, ZERO);
    for x in 0..total {
        let dx = digits(x, dims);
        for y in 0..total {
            let dy = digits(y, dims);
            let mut nx = dx.clone();
            let mut ny = dy.clone();
            nx[party] = dy[party];
            ny[party] = dx[party];
            let xi = compose(nx.iter().zip(dims).map(|(&d, &n)| (d, n)));
            let yi = compose(ny.iter().zip(dims).map(|(&d, &n)| (d, n)));
            out[(xi, yi)] = rho[(x, y)];
        }
    }
    Ok(out)
}

/// Reorders an `n`-qubit matrix so qubit `first` (1-based) becomes the most
/// significant factor, leaving the others in their original order. The result
/// is a `2 × 2^(n-1)` bipartite operator.
pub fn qubit_bipartition(rho: &CMatrix, n_qubits: usize, first: usize) -> Result<CMatrix> {
    if first == 0 || first > n_qubits {
        return Err(Error::SiteIndex { index: first, n_sites: n_qubits });
    }
    let dims = vec![2; n_qubits];
    let total = check_dims(rho, &dims)?;
    let p = first - 1;
    let order: Vec<usize> = std::iter::once(p).chain((0..n_qubits).filter(|&k| k != p)).collect();
    let map: Vec<usize> = (0..total)
        .map(|x| {
            let d = digits(x, &dims);
            compose(order.iter().map(|&k| (d[k], 2)))
        })
        .collect();
    let mut out = CMatrix::from_element(total, total, ZERO);
    for x in 0..total {
        for y in 0..total {
            out[(map[x], map[y])] = rho[(x, y)];
        }
    }
    Ok(out)
}

/// Negativity across `A:B` with the transpose taken on `A`.
pub fn negativity(rho: &CMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    let pt = partial_transpose(rho, &[dim_a, dim_b], 0)?;
    Ok(correlations::negative_eigenvalue_mass(&pt))
}

/// Two-qubit marginal of qubits `(first, second)`, 1-based, in that order.
pub fn two_qubit_marginal(rho: &CMatrix, n_qubits: usize, first: usize, second: usize) -> Result<TwoQubitState> {
    let dims = vec![2; n_qubits];
    TwoQubitState::new(partial_trace(rho, &dims, &[first - 1, second - 1])?)
}

/// Monogamy score on a dense `n`-qubit state: `(Q_{i:R}, Q_{R_i}, δQ_i)`.
pub fn monogamy_score(
    rho: &CMatrix,
    n_qubits: usize,
    nodal: usize,
    measure: Measure,
    optimizer: &DiscordOptimizer,
) -> Result<(f64, f64, f64)> {
    let split = qubit_bipartition(rho, n_qubits, nodal)?;
    let rest = 1usize << (n_qubits - 1);
    let total = match measure {
        Measure::Negativity => negativity(&split, 2, rest)?,
        Measure::NegativitySquared => negativity(&split, 2, rest)?.powi(2),
        Measure::Discord => optimizer.discord(&split, rest)?,
        other => return Err(Error::InvalidArgument(format!("{other} has no monogamy score"))),
    };
    let mut bipartite = 0.0;
    for j in (1..=n_qubits).filter(|&j| j != nodal) {
        let pair = two_qubit_marginal(rho, n_qubits, j, nodal)?;
        bipartite += match measure {
            Measure::Negativity => correlations::negativity_two_qubit(&pair),
            Measure::NegativitySquared => correlations::negativity_two_qubit(&pair).powi(2),
            _ => optimizer.discord(pair.matrix(), 2)?,
        };
    }
    Ok((total, bipartite, total - bipartite))
}
