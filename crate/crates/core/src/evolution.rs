//! Lindblad generator on the excitation subspace and its fixed-step RK4
//! integration.
//!
//! With `ħ = 1` and every rate converted to rad/ps,
//!
//! ```text
//! dρ/dt = -i[H, ρ]
//!       + Σ_j Γ_j (2 σ⁻_j ρ σ⁺_j - {σ⁺_j σ⁻_j, ρ})
//!       + Σ_j γ_j (2 Π_j ρ Π_j - {Π_j, ρ})
//!       + Γ_s (2 S ρ S† - {S† S, ρ})
//! ```
//!
//! where `σ⁻_j = |0⟩⟨j|`, `Π_j = |j⟩⟨j|` and `S = |N+1⟩⟨k|` for the preferred
//! site `k`.

use crate::linalg::{c, hermitize, trace, CMatrix, C64};
use crate::netmodel::{convert_rate, NetworkSpec};
use crate::statespace::SubspaceState;
use crate::{Error, Result};

/// Trace drift that aborts an integration.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;

/// The generator of a network, with all energies already in rad/ps.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    dim: usize,
    hamiltonian: CMatrix,
    dissipation: Vec<f64>,
    dephasing: Vec<f64>,
    sink_rate: f64,
    preferred: usize,
}

impl Liouvillian {
    pub fn new(spec: &NetworkSpec) -> Self {
        let n = spec.n_sites();
        let dim = n + 2;
        let mut hamiltonian = CMatrix::zeros(dim, dim);
        for a in 0..n {
            for b in 0..n {
                hamiltonian[(a + 1, b + 1)] = spec.hamiltonian()[(a, b)] * convert_rate(1.0);
            }
        }
        Self {
            dim,
            hamiltonian,
            dissipation: spec.dissipation_rates().iter().map(|&g| convert_rate(g)).collect(),
            dephasing: spec.dephasing_rates().iter().map(|&g| convert_rate(g)).collect(),
            sink_rate: convert_rate(spec.sink_rate()),
            preferred: spec.preferred_site(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Subspace Hamiltonian in rad/ps (ground and sink rows are zero).
    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    /// Sink rate in 1/ps.
    pub fn sink_rate(&self) -> f64 {
        self.sink_rate
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let h = &self.hamiltonian;
        let minus_i = c(0.0, -1.0);
        let mut out = (h * rho - rho * h) * minus_i;
        let d = self.dim;
        let sink = d - 1;
        for j in 1..d - 1 {
            let diss = self.dissipation[j - 1];
            let deph = self.dephasing[j - 1];
            let mut anti = diss + deph;
            if j == self.preferred {
                anti += self.sink_rate;
            }
            let pop = rho[(j, j)];
            out[(0, 0)] += pop * (2.0 * diss);
            out[(j, j)] += pop * (2.0 * deph);
            out[(sink, sink)] += if j == self.preferred { pop * (2.0 * self.sink_rate) } else { C64::default() };
            if anti != 0.0 {
                for b in 0..d {
                    out[(j, b)] -= rho[(j, b)] * anti;
                    out[(b, j)] -= rho[(b, j)] * anti;
                }
            }
        }
        out
    }
}

/// Integration grid in picoseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationOptions {
    pub t_end: f64,
    pub dt: f64,
    pub sample_every: f64,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        Self { t_end: 10.0, dt: 1e-3, sample_every: 1e-2 }
    }
}

impl PropagationOptions {
    pub fn new(t_end: f64, dt: f64, sample_every: f64) -> Self {
        Self { t_end, dt, sample_every }
    }

    /// Number of steps and the sampling stride, in steps.
    pub fn grid(&self) -> Result<(usize, usize)> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidArgument(format!("t_end must be non-negative, got {}", self.t_end)));
        }
        if !(self.sample_every >= self.dt) {
            return Err(Error::InvalidArgument(format!(
                "sample interval {} is shorter than the step {}",
                self.sample_every, self.dt
            )));
        }
        let steps = (self.t_end / self.dt).round() as usize;
        let stride = ((self.sample_every / self.dt).round() as usize).max(1);
        Ok((steps, stride))
    }
}

/// Sampled solution of the master equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<SubspaceState>,
    preferred_site: usize,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[SubspaceState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_sites(&self) -> usize {
        self.states[0].n_sites()
    }

    pub fn preferred_site(&self) -> usize {
        self.preferred_site
    }

    /// `p_j(t)` for basis index `j` (0 = ground, `N + 1` = sink).
    pub fn population(&self, index: usize) -> Vec<f64> {
        self.states.iter().map(|s| s.population(index)).collect()
    }

    pub fn sink_population(&self) -> Vec<f64> {
        self.population(self.n_sites() + 1)
    }

    /// Rows of `[p0, p1, …, pN, psink]`, one per sample.
    pub fn population_table(&self) -> Vec<Vec<f64>> {
        self.states
            .iter()
            .map(|s| (0..s.dim()).map(|j| s.population(j)).collect())
            .collect()
    }

    /// Restricts to samples with `t <= t_max` (plus floating slack).
    pub fn truncated(&self, t_max: f64) -> Self {
        let keep = self.times.iter().take_while(|&&t| t <= t_max + 1e-9).count();
        Self {
            times: self.times[..keep].to_vec(),
            states: self.states[..keep].to_vec(),
            preferred_site: self.preferred_site,
        }
    }
}

fn rk4_step(l: &Liouvillian, rho: &CMatrix, dt: f64) -> CMatrix {
    let k1 = l.apply(rho);
    let k2 = l.apply(&(rho + &k1 * c(0.5 * dt, 0.0)));
    let k3 = l.apply(&(rho + &k2 * c(0.5 * dt, 0.0)));
    let k4 = l.apply(&(rho + &k3 * c(dt, 0.0)));
    let mut next = rho + (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * c(dt / 6.0, 0.0);
    hermitize(&mut next);
    next
}

/// Integrates from `rho0` with classical RK4 at fixed step `dt`, recording a
/// sample every `sample_every` (rounded to a whole number of steps) and at the
/// final time.
pub fn propagate(spec: &NetworkSpec, rho0: &SubspaceState, options: PropagationOptions) -> Result<Trajectory> {
    let (steps, stride) = options.grid()?;
    if rho0.dim() != spec.subspace_dim() || !rho0.has_sink() {
        return Err(Error::Dimension(format!(
            "initial state has dimension {}, network needs {} including the sink",
            rho0.dim(),
            spec.subspace_dim()
        )));
    }
    let l = Liouvillian::new(spec);
    let trace0 = trace(rho0.matrix()).re;
    let mut rho = rho0.matrix().clone();
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    for step in 1..=steps {
        rho = rk4_step(&l, &rho, options.dt);
        let t = step as f64 * options.dt;
        let drift = (trace(&rho).re - trace0).abs();
        if !(drift <= TRACE_DRIFT_LIMIT) {
            return Err(Error::TraceDrift { t, drift });
        }
        if step % stride == 0 || step == steps {
            times.push(t);
            states.push(SubspaceState::from_matrix(rho.clone(), true)?);
        }
    }
    Ok(Trajectory { times, states, preferred_site: spec.preferred_site() })
}

/// `2 Γ_s ∫₀ᵗ p_k(t') dt'` by the trapezoidal rule over the trajectory samples.
pub fn sink_population_integral(traj: &Trajectory, spec: &NetworkSpec) -> Vec<f64> {
    let rate = 2.0 * convert_rate(spec.sink_rate());
    let pk = traj.population(spec.preferred_site());
    let t = traj.times();
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(t.len());
    out.push(0.0);
    for n in 1..t.len() {
        acc += 0.5 * (t[n] - t[n - 1]) * (pk[n] + pk[n - 1]);
        out.push(rate * acc);
    }
    out
}
