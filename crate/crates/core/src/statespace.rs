//! Density matrices in the zero/one-excitation subspace.
//!
//! A network of `N` sites plus a sink is a register of `N + 1` qubits, but the
//! dynamics never leaves the span of the global ground state `|0⟩` and the
//! single-excitation states `|j⟩`. A [`SubspaceState`] stores the
//! `(N + 2) × (N + 2)` matrix over `{|0⟩, |1⟩, …, |N⟩, |N+1⟩}`; after the sink
//! is traced out it stores `(N + 1) × (N + 1)` over the sites alone. In both
//! cases row/column `q ≥ 1` means "qubit `q` excited, all others ground".

use std::fmt::Write as _;
use std::str::FromStr;

use crate::linalg::{c, hermitian_eigenvalues, hermiticity_error, trace, CMatrix, C64, ONE, ZERO};
use crate::{Error, Result};

/// Largest register the dense embedding will build (`2^10` amplitudes).
pub const MAX_EMBED_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceState {
    rho: CMatrix,
    with_sink: bool,
}

/// Reduced state of two sites, basis `{|gg⟩, |ge⟩, |eg⟩, |ee⟩}` with the first
/// label belonging to the first party.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState(CMatrix);

/// Single-site marginal in the basis `{|g⟩, |e⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState(CMatrix);

impl SubspaceState {
    /// Wraps a matrix without validation. `with_sink` marks the last basis
    /// index as the sink level.
    pub fn from_matrix(rho: CMatrix, with_sink: bool) -> Result<Self> {
        let dim = rho.nrows();
        let min_dim = if with_sink { 3 } else { 2 };
        if rho.ncols() != dim || dim < min_dim {
            return Err(Error::Dimension(format!(
                "subspace matrix must be square with dimension >= {min_dim}, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        Ok(Self { rho, with_sink })
    }

    /// Projector onto basis vector `index` of a `dim`-dimensional network
    /// subspace that includes the sink.
    pub fn basis(index: usize, dim: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::BasisIndex { index, dim });
        }
        let mut rho = CMatrix::zeros(dim, dim);
        rho[(index, index)] = ONE;
        Self::from_matrix(rho, true)
    }

    /// Incoherent mixture `Σ w |idx⟩⟨idx|`.
    pub fn mixture(components: &[(f64, usize)], dim: usize) -> Result<Self> {
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.is_empty() || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("mixture weights sum to {total}, expected 1")));
        }
        let mut rho = CMatrix::zeros(dim, dim);
        for &(w, idx) in components {
            if idx >= dim {
                return Err(Error::BasisIndex { index: idx, dim });
            }
            if w < 0.0 {
                return Err(Error::InvalidArgument(format!("negative mixture weight {w}")));
            }
            rho[(idx, idx)] += c(w, 0.0);
        }
        Self::from_matrix(rho, true)
    }

    /// Pure state from amplitudes over the subspace basis (normalised here).
    pub fn pure(amplitudes: &[C64], with_sink: bool) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let n = amplitudes.len();
        let rho = CMatrix::from_fn(n, n, |a, b| amplitudes[a] * amplitudes[b].conj() / (norm * norm));
        Self::from_matrix(rho, with_sink)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> CMatrix {
        self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn has_sink(&self) -> bool {
        self.with_sink
    }

    /// Number of qubits in the register this state lives on.
    pub fn n_qubits(&self) -> usize {
        self.dim() - 1
    }

    pub fn n_sites(&self) -> usize {
        self.n_qubits() - usize::from(self.with_sink)
    }

    /// `ρ_jj` for basis index `j`.
    pub fn population(&self, index: usize) -> f64 {
        self.rho[(index, index)].re
    }

    pub fn sink_population(&self) -> Option<f64> {
        self.with_sink.then(|| self.population(self.dim() - 1))
    }

    pub fn trace(&self) -> f64 {
        trace(&self.rho).re
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.rho)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.rho).first().copied().unwrap_or(0.0)
    }

    /// Checks Hermiticity (1e-10), unit trace (1e-10) and positivity (-1e-8).
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > 1e-10 {
            return Err(Error::NotHermitian(herm));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("trace {tr} differs from 1")));
        }
        let min = self.min_eigenvalue();
        if min < -1e-8 {
            return Err(Error::Positivity(min));
        }
        Ok(())
    }

    pub(crate) fn check_site(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n_sites() {
            return Err(Error::SiteIndex { index: i, n_sites: self.n_sites() });
        }
        Ok(())
    }

    /// Traces out the sink qubit. The sink population folds into the ground
    /// weight; coherences between the sink level and everything else vanish.
    pub fn trace_out_sink(&self) -> Result<Self> {
        if !self.with_sink {
            return Err(Error::NoSink);
        }
        let d = self.dim() - 1;
        let mut rho = self.rho.view((0, 0), (d, d)).into_owned();
        rho[(0, 0)] += self.rho[(d, d)];
        Ok(Self { rho, with_sink: false })
    }

    /// Two-site marginal with `i` as the first party.
    pub fn reduce_two_site(&self, i: usize, j: usize) -> Result<TwoQubitState> {
        self.check_site(i)?;
        self.check_site(j)?;
        if i == j {
            return Err(Error::InvalidArgument(format!("two-site reduction needs distinct sites, got {i} twice")));
        }
        let r = &self.rho;
        let (gg, ge, eg) = (0, 1, 2);
        let mut s = CMatrix::zeros(4, 4);
        s[(gg, gg)] = c(self.trace() - r[(i, i)].re - r[(j, j)].re, 0.0);
        s[(eg, eg)] = r[(i, i)];
        s[(ge, ge)] = r[(j, j)];
        s[(eg, ge)] = r[(i, j)];
        s[(ge, eg)] = r[(j, i)];
        s[(eg, gg)] = r[(i, 0)];
        s[(gg, eg)] = r[(0, i)];
        s[(ge, gg)] = r[(j, 0)];
        s[(gg, ge)] = r[(0, j)];
        Ok(TwoQubitState(s))
    }

    /// Single-site marginal `[[1 - ρ_ii, ρ_0i], [ρ_i0, ρ_ii]]`.
    pub fn reduce_site(&self, i: usize) -> Result<QubitState> {
        self.check_site(i)?;
        let r = &self.rho;
        let pi = r[(i, i)].re;
        Ok(QubitState(CMatrix::from_row_slice(
            2,
            2,
            &[c(self.trace() - pi, 0.0), r[(0, i)], r[(i, 0)], c(pi, 0.0)],
        )))
    }

    /// Dense density matrix on the full `2^(n_qubits)` register. Qubit 1 is the
    /// most significant bit and `|e⟩` is bit value 1.
    pub fn embed_full(&self) -> Result<CMatrix> {
        let q = self.n_qubits();
        if q > MAX_EMBED_QUBITS {
            return Err(Error::OracleTooLarge(q));
        }
        let full = 1usize << q;
        let pos = |idx: usize| if idx == 0 { 0 } else { 1usize << (q - idx) };
        let mut out = CMatrix::zeros(full, full);
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                out[(pos(a), pos(b))] = self.rho[(a, b)];
            }
        }
        Ok(out)
    }

    /// Row-major dump with real and imaginary parts interleaved, one matrix
    /// row per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for a in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|b| format!("{:.12e},{:.12e}", self.rho[(a, b)].re, self.rho[(a, b)].im))
                .collect();
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

impl TwoQubitState {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.shape() != (4, 4) {
            return Err(Error::Dimension(format!("two-qubit state must be 4x4, got {:?}", m.shape())));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    /// Same state with the roles of the two parties exchanged.
    pub fn swap_parties(&self) -> Self {
        let perm = [0usize, 2, 1, 3];
        Self(CMatrix::from_fn(4, 4, |a, b| self.0[(perm[a], perm[b])]))
    }
}

impl QubitState {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.shape() != (2, 2) {
            return Err(Error::Dimension(format!("qubit state must be 2x2, got {:?}", m.shape())));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }
}

/// How the network is prepared at t = 0: a single basis index or an incoherent
/// mixture of basis indices.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Basis(usize),
    Mixture(Vec<(f64, usize)>),
}

impl InitialState {
    pub fn to_state(&self, dim: usize) -> Result<SubspaceState> {
        match self {
            InitialState::Basis(i) => SubspaceState::basis(*i, dim),
            InitialState::Mixture(parts) => SubspaceState::mixture(parts, dim),
        }
    }

    /// Short tag for file names and labels, e.g. `1` or `1+6`.
    pub fn tag(&self) -> String {
        match self {
            InitialState::Basis(i) => i.to_string(),
            InitialState::Mixture(parts) => {
                let idx: Vec<String> = parts.iter().map(|(_, i)| i.to_string()).collect();
                idx.join("+")
            }
        }
    }
}

impl FromStr for InitialState {
    type Err = Error;

    /// Accepts `6`, `1+6` (equal mixture) or `0.25:1,0.75:6` (weighted).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse initial state '{s}'"));
        if s.contains(':') {
            let parts = s
                .split(',')
                .map(|item| {
                    let (w, i) = item.split_once(':').ok_or_else(bad)?;
                    Ok((w.trim().parse::<f64>().map_err(|_| bad())?, i.trim().parse::<usize>().map_err(|_| bad())?))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(InitialState::Mixture(parts));
        }
        if s.contains('+') {
            let idx = s
                .split('+')
                .map(|i| i.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            let w = 1.0 / idx.len() as f64;
            return Ok(InitialState::Mixture(idx.into_iter().map(|i| (w, i)).collect()));
        }
        s.parse::<usize>().map(InitialState::Basis).map_err(|_| bad())
    }
}

/// Amplitude vector of length `dim` with `value` at the listed indices.
pub fn uniform_superposition(indices: &[usize], dim: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    for &i in indices {
        v[i] = ONE;
    }
    v
}
