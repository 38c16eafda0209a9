//! Bipartite quantum-correlation measures.
//!
//! Entropies are in bits. Negativity is the raw sum of negative eigenvalues of
//! the partial transpose, so a Bell pair carries 0.5 ebits.
//!
//! Discord is always computed with a rank-1 projective measurement on the
//! first party, which must be a qubit. The optimisation scans a uniform
//! `(θ, φ)` grid over the Bloch sphere and polishes the best grid point with
//! a Nelder–Mead simplex.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dense;
use crate::linalg::{c, hermitian_eigenvalues, spectrum_entropy, CMatrix, C64, ZERO};
use crate::statespace::{SubspaceState, TwoQubitState};
use crate::{Error, Result};

/// Eigenvalues between this and zero are treated as integration noise.
pub const POSITIVITY_TOL: f64 = 1e-8;
/// Negative partial-transpose eigenvalues smaller than this in magnitude are
/// ignored by the negativity.
pub const NEGATIVITY_CUTOFF: f64 = 1e-12;
const DEGENERATE_BRANCH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Negativity,
    NegativitySquared,
    Discord,
    MutualInformation,
    ClassicalCorrelation,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Negativity => "negativity",
            Measure::NegativitySquared => "negativity-squared",
            Measure::Discord => "discord",
            Measure::MutualInformation => "mutual-information",
            Measure::ClassicalCorrelation => "classical-correlation",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Measure::Negativity | Measure::NegativitySquared => "ebits",
            _ => "bits",
        }
    }

    /// Measures that admit monogamy scores and bipartition collections.
    pub fn is_multiparty(self) -> bool {
        matches!(self, Measure::Negativity | Measure::NegativitySquared | Measure::Discord)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "negativity" => Measure::Negativity,
            "negativity-squared" | "negativity2" => Measure::NegativitySquared,
            "discord" => Measure::Discord,
            "mutual-information" => Measure::MutualInformation,
            "classical-correlation" => Measure::ClassicalCorrelation,
            _ => return Err(Error::InvalidArgument(format!("unknown measure '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationValue {
    pub measure: Measure,
    pub value: f64,
}

impl CorrelationValue {
    pub fn unit(&self) -> &'static str {
        self.measure.unit()
    }
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &CMatrix) -> Result<f64> {
    let eig = hermitian_eigenvalues(rho);
    if let Some(&min) = eig.first() {
        if min < -POSITIVITY_TOL {
            return Err(Error::Positivity(min));
        }
    }
    Ok(spectrum_entropy(&eig))
}

/// `Σ |λ|` over eigenvalues below `-NEGATIVITY_CUTOFF`.
pub fn negative_eigenvalue_mass(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)
        .into_iter()
        .filter(|&l| l < -NEGATIVITY_CUTOFF)
        .map(|l| -l)
        .sum()
}

pub fn negativity_two_qubit(state: &TwoQubitState) -> f64 {
    let m = state.matrix();
    // transpose the first factor: swap the A labels of (A B, A' B')
    let pt = CMatrix::from_fn(4, 4, |x, y| {
        let (a, b) = (x >> 1, x & 1);
        let (a2, b2) = (y >> 1, y & 1);
        m[((a2 << 1) | b, (a << 1) | b2)]
    });
    negative_eigenvalue_mass(&pt)
}

fn require_sites_only(state: &SubspaceState, i: usize) -> Result<()> {
    if state.has_sink() {
        return Err(Error::SinkPresent);
    }
    state.check_site(i)
}

/// Negativity of qubit `i` against the remaining sites.
///
/// Within the single-excitation sector the partial transpose on qubit `i`
/// only couples `|0⟩` to `|i⟩` and to the two-excitation states `|i, j⟩`, so
/// it lives on a `2N`-dimensional space spanned by `|0⟩`, `|i⟩`, the other
/// `|j⟩` and the pairs `|i, j⟩`.
pub fn negativity_site_vs_rest(state: &SubspaceState, i: usize) -> Result<f64> {
    require_sites_only(state, i)?;
    let rho = state.matrix();
    let q = state.n_qubits();
    let others: Vec<usize> = (1..=q).filter(|&j| j != i).collect();
    let n_others = others.len();
    let mut m = CMatrix::from_element(2 * q, 2 * q, ZERO);
    m[(0, 0)] = rho[(0, 0)];
    m[(0, 1)] = rho[(i, 0)];
    m[(1, 0)] = rho[(0, i)];
    m[(1, 1)] = rho[(i, i)];
    for (p, &j) in others.iter().enumerate() {
        let row = 2 + p;
        let pair = 2 + n_others + p;
        m[(0, row)] = rho[(0, j)];
        m[(row, 0)] = rho[(j, 0)];
        for (p2, &k) in others.iter().enumerate() {
            m[(row, 2 + p2)] = rho[(j, k)];
        }
        m[(0, pair)] = rho[(i, j)];
        m[(pair, 0)] = rho[(j, i)];
    }
    Ok(negative_eigenvalue_mass(&m))
}

/// Site `i` against the rest as a `2 × N` bipartite matrix. The rest is kept
/// in its own zero/one-excitation space: index 0 is "rest in ground", index
/// `r ≥ 1` the `r`-th other site in increasing order.
pub fn compact_bipartition(state: &SubspaceState, i: usize) -> Result<CMatrix> {
    require_sites_only(state, i)?;
    let q = state.n_qubits();
    let mut map = vec![0usize; q + 1];
    map[i] = q;
    let mut r = 1;
    for j in (1..=q).filter(|&j| j != i) {
        map[j] = r;
        r += 1;
    }
    let rho = state.matrix();
    let mut out = CMatrix::from_element(2 * q, 2 * q, ZERO);
    for a in 0..=q {
        for b in 0..=q {
            out[(map[a], map[b])] = rho[(a, b)];
        }
    }
    Ok(out)
}

/// `S(A) + S(B) - S(AB)` in bits.
pub fn mutual_information(rho: &CMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    let a = dense::partial_trace(rho, &[dim_a, dim_b], &[0])?;
    let b = dense::partial_trace(rho, &[dim_a, dim_b], &[1])?;
    Ok(entropy(&a)? + entropy(&b)? - entropy(rho)?)
}

pub fn mutual_information_two_qubit(state: &TwoQubitState) -> Result<f64> {
    mutual_information(state.matrix(), 2, 2)
}

/// Projective qubit measurement `{|m⟩⟨m|, 1 - |m⟩⟨m|}` with
/// `|m⟩ = cos(θ/2)|g⟩ + e^{iφ} sin(θ/2)|e⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Components `(⟨g|m⟩, ⟨e|m⟩)`.
    pub fn vector(&self) -> (C64, C64) {
        let (s, co) = (0.5 * self.theta).sin_cos();
        (c(co, 0.0), C64::from_polar(s, self.phi))
    }

    /// The second outcome of the same measurement.
    pub fn orthogonal(&self) -> Self {
        Self::new(std::f64::consts::PI - self.theta, self.phi + std::f64::consts::PI)
    }

    pub fn projectors(&self) -> [CMatrix; 2] {
        let (a, b) = self.vector();
        let p0 = CMatrix::from_row_slice(2, 2, &[a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj()]);
        let p1 = CMatrix::identity(2, 2) - &p0;
        [p0, p1]
    }
}

/// `Σ λ log(p/λ)` in bits with `p = Σ λ`, or 0 for a vanishing branch.
fn branch_entropy(eigenvalues: impl Iterator<Item = f64> + Clone) -> f64 {
    let p: f64 = eigenvalues.clone().sum();
    if p < DEGENERATE_BRANCH {
        return 0.0;
    }
    eigenvalues.filter(|&l| l > 0.0).map(|l| -l * (l / p).log2()).sum()
}

/// Post-measurement states of `B` for a `2 × d_B` operator, given its blocks
/// `⟨x|ρ|y⟩_A`. The unnormalised state for outcome `|m⟩ = a|g⟩ + b|e⟩` is
/// `|a|² ρ_gg + a* b ρ_ge + b* a ρ_eg + |b|² ρ_ee`.
enum ConditionalStates {
    Qubit([[[C64; 2]; 2]; 4]),
    /// `B` in a zero/one-excitation space with `A` a site: `ρ_ee` lives on the
    /// ground of `B` and `ρ_ge` has a single nonzero column, so only row and
    /// column 0 depend on the measurement. The remaining block `ρ_gg[1.., 1..]`
    /// is diagonalised once and every outcome reduces to an arrow matrix.
    Arrow(ArrowForm),
    Generic { gg: CMatrix, ge: CMatrix, eg: CMatrix, ee: CMatrix },
}

struct ArrowForm {
    gg00: f64,
    ge00: C64,
    ee00: f64,
    /// Ascending eigenvalues of `ρ_gg[1.., 1..]`.
    poles: Vec<f64>,
    /// `U† ρ_gg[1.., 0]` and `U† ρ_ge[1.., 0]` in the same eigenbasis.
    g: Vec<C64>,
    u: Vec<C64>,
}

impl ArrowForm {
    fn detect(gg: &CMatrix, ge: &CMatrix, eg: &CMatrix, ee: &CMatrix) -> Option<Self> {
        let d = gg.nrows();
        let zero = |m: &CMatrix, keep: &dyn Fn(usize, usize) -> bool| {
            (0..d).all(|x| (0..d).all(|y| keep(x, y) || m[(x, y)] == ZERO))
        };
        let arrow = d >= 3
            && zero(ee, &|x, y| x == 0 && y == 0)
            && zero(ge, &|_, y| y == 0)
            && zero(eg, &|x, _| x == 0);
        if !arrow {
            return None;
        }
        let block = gg.view((1, 1), (d - 1, d - 1)).into_owned();
        let eig = block.symmetric_eigen();
        if !eig.eigenvalues.iter().all(|x| x.is_finite()) || !eig.eigenvectors.iter().all(|z| z.is_finite()) {
            return None;
        }
        let mut order: Vec<usize> = (0..d - 1).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
        let project = |col: usize, m: &CMatrix| -> Vec<C64> {
            order
                .iter()
                .map(|&k| (0..d - 1).map(|r| eig.eigenvectors[(r, k)].conj() * m[(r + 1, col)]).sum())
                .collect()
        };
        Some(Self {
            gg00: gg[(0, 0)].re,
            ge00: ge[(0, 0)],
            ee00: ee[(0, 0)].re,
            poles: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
            g: project(0, gg),
            u: project(0, ge),
        })
    }

    fn weighted_entropy(&self, a: C64, b: C64, scratch: &mut Scratch) -> f64 {
        let a2 = a.norm_sqr();
        let ab = a.conj() * b;
        let corner = a2 * self.gg00 + 2.0 * (ab * self.ge00).re + b.norm_sqr() * self.ee00;
        let weights = self.g.iter().zip(&self.u).map(|(&g, &u)| (g * a2 + u * ab).norm_sqr());
        let poles = self.poles.iter().map(|&d| a2 * d);
        arrow_eigenvalues(corner, poles, weights, &mut scratch.eigenvalues, &mut scratch.roots);
        branch_entropy(scratch.eigenvalues.iter().copied())
    }
}

/// Buffers reused across the outcomes of one minimisation.
#[derive(Default)]
struct Scratch {
    eigenvalues: Vec<f64>,
    /// Secular roots of the previous call, used as starting points.
    roots: Vec<f64>,
}

/// Eigenvalues of the Hermitian arrow matrix with diagonal `(corner, poles)`
/// and squared off-diagonal moduli `weights`, written to `out`. Poles must be
/// ascending. `roots` holds the secular roots of the previous call on entry
/// and of this call on exit.
fn arrow_eigenvalues(
    corner: f64,
    poles: impl Iterator<Item = f64>,
    weights: impl Iterator<Item = f64>,
    out: &mut Vec<f64>,
    roots: &mut Vec<f64>,
) {
    out.clear();
    let mut live: Vec<(f64, f64)> = Vec::with_capacity(8);
    let pairs: Vec<(f64, f64)> = poles.zip(weights).collect();
    let norm2: f64 = pairs.iter().map(|p| p.1).sum();
    let scale = pairs.iter().fold(corner.abs(), |s, p| s.max(p.0.abs())) + norm2.sqrt();
    let tiny = f64::EPSILON * scale;
    for (d, z) in pairs {
        if z.sqrt() <= tiny {
            out.push(d);
            continue;
        }
        match live.last_mut() {
            Some(last) if d - last.0 <= tiny => {
                // Rotating two equal poles leaves one decoupled at the pole.
                last.1 += z;
                out.push(d);
            }
            _ => live.push((d, z)),
        }
    }
    if live.is_empty() {
        out.push(corner);
        roots.clear();
        return;
    }
    let radius = live.iter().map(|p| p.1).sum::<f64>().sqrt();
    let lo = corner.min(live[0].0) - radius - tiny;
    let hi = corner.max(live[live.len() - 1].0) + radius + tiny;
    let m = live.len();
    // Value of the secular function with the pole sums split at `k`:
    // (f, -Σ_{j<k} z/(d-x)², -Σ_{j≥k} z/(d-x)², magnitude of the terms of f).
    let eval = |x: f64, k: usize| {
        let (mut val, mut left, mut right) = (corner - x, 0.0, 0.0);
        let mut size = corner.abs() + x.abs();
        for (j, &(d, z)) in live.iter().enumerate() {
            let r = 1.0 / (d - x);
            val -= z * r;
            size += (z * r).abs();
            if j < k {
                left -= z * r * r;
            } else {
                right -= z * r * r;
            }
        }
        (val, left, right, size)
    };
    let warm = roots.len() == m + 1;
    for k in 0..=m {
        let mut left = if k == 0 { lo } else { live[k - 1].0 };
        let mut right = if k == m { hi } else { live[k].0 };
        let mut x = if warm && roots[k] > left && roots[k] < right { roots[k] } else { 0.5 * (left + right) };
        for _ in 0..100 {
            let (val, dl, dr, size) = eval(x, k);
            if val.abs() <= 4.0 * f64::EPSILON * size {
                break;
            }
            if val > 0.0 {
                left = x;
            } else {
                right = x;
            }
            // Fit C - S/(d_lo - y) - R/(d_hi - y) at x (value and slope) and
            // take its root; outer intervals keep the linear term instead of
            // the missing pole.
            let next = if k == 0 || k == m {
                let d = if k == 0 { live[0].0 } else { live[m - 1].0 };
                let s = -(dl + dr) * (d - x) * (d - x);
                let cst = val + x + s / (d - x);
                let disc = ((cst - d) * (cst - d) + 4.0 * s).sqrt();
                if k == 0 {
                    0.5 * (cst + d - disc)
                } else {
                    0.5 * (cst + d + disc)
                }
            } else {
                let (d0, d1) = (live[k - 1].0, live[k].0);
                let gap = d1 - d0;
                let s = -dl * (d0 - x) * (d0 - x);
                let r = (-dr + 1.0) * (d1 - x) * (d1 - x);
                let cst = val + s / (d0 - x) + r / (d1 - x);
                let (qa, qb, qc) = (cst, s + r - cst * gap, -s * gap);
                let tau = if qa == 0.0 {
                    -qc / qb
                } else {
                    let q = -0.5 * (qb + qb.signum() * (qb * qb - 4.0 * qa * qc).max(0.0).sqrt());
                    let (t1, t2) = (q / qa, if q != 0.0 { qc / q } else { f64::NAN });
                    if t1 > 0.0 && t1 < gap {
                        t1
                    } else {
                        t2
                    }
                };
                d0 + tau
            };
            let next = if next > left && next < right { next } else { 0.5 * (left + right) };
            let done = (next - x).abs() <= 2.0 * tiny || right - left <= 2.0 * tiny;
            x = next;
            if done {
                break;
            }
        }
        out.push(x);
        if warm {
            roots[k] = x;
        }
    }
    if !warm {
        roots.clear();
        roots.extend_from_slice(&out[out.len() - m - 1..]);
    }
}

impl ConditionalStates {
    fn new(rho: &CMatrix, dim_b: usize, structured: bool) -> Self {
        let block = |x: usize, y: usize| rho.view((x * dim_b, y * dim_b), (dim_b, dim_b)).into_owned();
        let (gg, ge, eg, ee) = (block(0, 0), block(0, 1), block(1, 0), block(1, 1));
        if dim_b == 2 {
            let flat = |m: &CMatrix| [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]];
            return ConditionalStates::Qubit([flat(&gg), flat(&ge), flat(&eg), flat(&ee)]);
        }
        match ArrowForm::detect(&gg, &ge, &eg, &ee).filter(|_| structured) {
            Some(form) => ConditionalStates::Arrow(form),
            None => {
                // Indices whose rows and columns vanish in every block carry
                // only zero eigenvalues; dropping them is exact.
                let live: Vec<usize> = (0..dim_b)
                    .filter(|&k| {
                        [&gg, &ge, &eg, &ee]
                            .iter()
                            .any(|m| (0..dim_b).any(|x| m[(k, x)] != ZERO || m[(x, k)] != ZERO))
                    })
                    .collect();
                if live.len() == dim_b {
                    return ConditionalStates::Generic { gg, ge, eg, ee };
                }
                let keep = |m: &CMatrix| CMatrix::from_fn(live.len(), live.len(), |x, y| m[(live[x], live[y])]);
                ConditionalStates::Generic { gg: keep(&gg), ge: keep(&ge), eg: keep(&eg), ee: keep(&ee) }
            }
        }
    }

    /// `p · S(ρ_B|m)` for the single outcome `|m⟩`.
    fn weighted_entropy(&self, basis: MeasurementBasis, scratch: &mut Scratch) -> f64 {
        let (a, b) = basis.vector();
        self.outcome_entropy(a, b, scratch)
    }

    /// `p · S(ρ_B|m)` for `|m⟩ = a|g⟩ + b|e⟩`.
    fn outcome_entropy(&self, a: C64, b: C64, scratch: &mut Scratch) -> f64 {
        let w = [c(a.norm_sqr(), 0.0), a.conj() * b, b.conj() * a, c(b.norm_sqr(), 0.0)];
        match self {
            ConditionalStates::Qubit(blocks) => {
                let entry = |x: usize, y: usize| -> C64 { (0..4).map(|k| w[k] * blocks[k][x][y]).sum() };
                let (m00, m11, m10) = (entry(0, 0).re, entry(1, 1).re, entry(1, 0));
                let mean = 0.5 * (m00 + m11);
                let half_gap = (0.25 * (m00 - m11) * (m00 - m11) + m10.norm_sqr()).sqrt();
                branch_entropy([mean - half_gap, mean + half_gap].into_iter())
            }
            ConditionalStates::Arrow(form) => form.weighted_entropy(a, b, scratch),
            ConditionalStates::Generic { gg, ge, eg, ee } => {
                let m = gg * w[0] + ge * w[1] + eg * w[2] + ee * w[3];
                branch_entropy(hermitian_eigenvalues(&m).into_iter())
            }
        }
    }

    fn conditional_entropy(&self, basis: MeasurementBasis, scratch: &mut Scratch) -> f64 {
        self.weighted_entropy(basis, scratch) + self.weighted_entropy(basis.orthogonal(), scratch)
    }
}

/// Grid-plus-simplex minimiser of the measured conditional entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscordOptimizer {
    pub theta_points: usize,
    pub phi_points: usize,
    pub refine: bool,
    pub tolerance: f64,
    /// Use the arrow-matrix shortcut when the state has single-excitation
    /// structure. Off, every outcome goes through a dense eigensolver.
    pub structured: bool,
}

impl Default for DiscordOptimizer {
    fn default() -> Self {
        Self { theta_points: 32, phi_points: 64, refine: true, tolerance: 1e-6, structured: true }
    }
}

/// Result of the conditional-entropy minimisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub conditional_entropy: f64,
    pub basis: MeasurementBasis,
}

impl DiscordOptimizer {
    /// Dense reference grid without refinement.
    pub fn exhaustive() -> Self {
        Self { theta_points: 256, phi_points: 512, refine: false, tolerance: 0.0, structured: true }
    }

    pub fn grid_only(&self) -> Self {
        Self { refine: false, ..self.clone() }
    }

    pub fn unstructured(&self) -> Self {
        Self { structured: false, ..self.clone() }
    }

    /// Minimum over measurements on `A` of `Σ_a p_a S(ρ_B|a)` for a `2 × dim_b`
    /// state.
    pub fn minimize(&self, rho: &CMatrix, dim_b: usize) -> Result<Minimum> {
        if rho.nrows() != 2 * dim_b || rho.ncols() != 2 * dim_b {
            return Err(Error::Dimension(format!(
                "measured party must be a qubit: matrix {}x{} with dim_b = {dim_b}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        if self.theta_points < 2 || self.phi_points < 1 {
            return Err(Error::InvalidArgument("discord grid needs at least 2x1 points".into()));
        }
        let cond = ConditionalStates::new(rho, dim_b, self.structured);
        let mut scratch = Scratch::default();
        let nt = self.theta_points;
        let np = self.phi_points;
        let theta = |k: usize| std::f64::consts::PI * k as f64 / (nt - 1) as f64;
        let phi = |l: usize| 2.0 * std::f64::consts::PI * l as f64 / np as f64;

        // One-outcome table; the poles do not depend on φ.
        let phases: Vec<C64> = (0..np).map(|l| C64::from_polar(1.0, phi(l))).collect();
        let mut single = vec![vec![0.0; np]; nt];
        for (k, row) in single.iter_mut().enumerate() {
            if k == 0 || k == nt - 1 {
                let v = cond.weighted_entropy(MeasurementBasis::new(theta(k), 0.0), &mut scratch);
                row.fill(v);
            } else {
                let (sin, cos) = (0.5 * theta(k)).sin_cos();
                for (v, &phase) in row.iter_mut().zip(&phases) {
                    *v = cond.outcome_entropy(c(cos, 0.0), phase * sin, &mut scratch);
                }
            }
        }
        // The orthogonal outcome of (θ_k, φ_l) is (θ_{nt-1-k}, φ_l + π), which is
        // on the grid whenever the φ count is even.
        let mut best = Minimum { conditional_entropy: f64::INFINITY, basis: MeasurementBasis::new(0.0, 0.0) };
        for k in 0..nt {
            for l in 0..np {
                let basis = MeasurementBasis::new(theta(k), phi(l));
                let h = if np % 2 == 0 {
                    single[k][l] + single[nt - 1 - k][(l + np / 2) % np]
                } else {
                    single[k][l] + cond.weighted_entropy(basis.orthogonal(), &mut scratch)
                };
                if h < best.conditional_entropy {
                    best = Minimum { conditional_entropy: h, basis };
                }
            }
        }

        if self.refine {
            let step = [std::f64::consts::PI / (nt - 1) as f64, 2.0 * std::f64::consts::PI / np as f64];
            let f = |x: [f64; 2]| cond.conditional_entropy(MeasurementBasis::new(x[0], x[1]), &mut scratch);
            let ftol = (self.tolerance * 1e-3).max(1e-13);
            let (x, fx) = nelder_mead(f, [best.basis.theta, best.basis.phi], step, ftol, 500);
            if fx < best.conditional_entropy {
                best = Minimum { conditional_entropy: fx, basis: MeasurementBasis::new(x[0], x[1]) };
            }
        }
        Ok(best)
    }

    /// `J(B|A) = S(B) - min Σ p_a S(ρ_B|a)`.
    pub fn classical_correlation(&self, rho: &CMatrix, dim_b: usize) -> Result<f64> {
        let min = self.minimize(rho, dim_b)?;
        let b = dense::partial_trace(rho, &[2, dim_b], &[1])?;
        Ok(entropy(&b)? - min.conditional_entropy)
    }

    /// `D = I - J` with the measurement on the first (qubit) party.
    pub fn discord(&self, rho: &CMatrix, dim_b: usize) -> Result<f64> {
        let min = self.minimize(rho, dim_b)?;
        let a = dense::partial_trace(rho, &[2, dim_b], &[0])?;
        let d = entropy(&a)? - entropy(rho)? + min.conditional_entropy;
        if d < -1e-9 {
            return Err(Error::InvalidArgument(format!("discord evaluated to {d:e}")));
        }
        Ok(d)
    }
}

pub fn classical_correlation(state: &TwoQubitState) -> Result<f64> {
    DiscordOptimizer::default().classical_correlation(state.matrix(), 2)
}

pub fn discord(state: &TwoQubitState) -> Result<f64> {
    DiscordOptimizer::default().discord(state.matrix(), 2)
}

/// Discord of the split `i : rest`, measuring site `i`.
pub fn discord_site_vs_rest(state: &SubspaceState, i: usize) -> Result<f64> {
    discord_site_vs_rest_with(state, i, &DiscordOptimizer::default())
}

pub fn discord_site_vs_rest_with(state: &SubspaceState, i: usize, optimizer: &DiscordOptimizer) -> Result<f64> {
    let compact = compact_bipartition(state, i)?;
    optimizer.discord(&compact, state.n_qubits())
}

/// Two-variable Nelder–Mead minimiser; returns the best vertex.
fn nelder_mead<F: FnMut([f64; 2]) -> f64>(
    mut f: F,
    start: [f64; 2],
    step: [f64; 2],
    ftol: f64,
    max_iter: usize,
) -> ([f64; 2], f64) {
    let mut pts = [start, [start[0] + step[0], start[1]], [start[0], start[1] + step[1]]];
    let mut vals = pts.map(&mut f);
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..max_iter {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&x, &y| vals[x].total_cmp(&vals[y]));
        pts = order.map(|k| pts[k]);
        vals = order.map(|k| vals[k]);
        let size = (0..2).map(|d| (pts[1][d] - pts[0][d]).abs().max((pts[2][d] - pts[0][d]).abs())).fold(0.0, f64::max);
        if vals[2] - vals[0] <= ftol && size < 1e-8 {
            break;
        }
        let centroid = [(pts[0][0] + pts[1][0]) * 0.5, (pts[0][1] + pts[1][1]) * 0.5];
        let reflected = lerp(centroid, pts[2], -1.0);
        let fr = f(reflected);
        if fr < vals[0] {
            let expanded = lerp(centroid, pts[2], -2.0);
            let fe = f(expanded);
            if fe < fr {
                pts[2] = expanded;
                vals[2] = fe;
            } else {
                pts[2] = reflected;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            pts[2] = reflected;
            vals[2] = fr;
        } else {
            let (target, ft) = if fr < vals[2] { (reflected, fr) } else { (pts[2], vals[2]) };
            let contracted = lerp(centroid, target, 0.5);
            let fc = f(contracted);
            if fc < ft {
                pts[2] = contracted;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    pts[k] = lerp(pts[0], pts[k], 0.5);
                    vals[k] = f(pts[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&x, &y| vals[x].total_cmp(&vals[y])).unwrap_or(0);
    (pts[best], vals[best])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn pure(v: &[C64]) -> CMatrix {
        let n = v.len();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        CMatrix::from_fn(n, n, |a, b| v[a] * v[b].conj() / norm)
    }

    fn bell() -> TwoQubitState {
        TwoQubitState::new(pure(&[ONE, ZERO, ZERO, ONE])).unwrap()
    }

    fn classical_mixture() -> TwoQubitState {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(0.5, 0.0);
        m[(3, 3)] = c(0.5, 0.0);
        TwoQubitState::new(m).unwrap()
    }

    fn product() -> TwoQubitState {
        // |+⟩ ⊗ (0.3|g⟩⟨g| + 0.7|e⟩⟨e|)
        let plus = CMatrix::from_element(2, 2, c(0.5, 0.0));
        let mut b = CMatrix::zeros(2, 2);
        b[(0, 0)] = c(0.3, 0.0);
        b[(1, 1)] = c(0.7, 0.0);
        TwoQubitState::new(plus.kronecker(&b)).unwrap()
    }

    #[test]
    fn entropy_fixtures() {
        assert!(entropy(&bell().matrix().clone()).unwrap().abs() < 1e-12);
        let mixed = CMatrix::identity(2, 2) * c(0.5, 0.0);
        assert!((entropy(&mixed).unwrap() - 1.0).abs() < 1e-14);
        let mut d = CMatrix::zeros(3, 3);
        d[(0, 0)] = c(0.5, 0.0);
        d[(1, 1)] = c(0.25, 0.0);
        d[(2, 2)] = c(0.25, 0.0);
        assert!((entropy(&d).unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn entropy_rejects_negative_states() {
        let mut d = CMatrix::zeros(2, 2);
        d[(0, 0)] = c(1.1, 0.0);
        d[(1, 1)] = c(-0.1, 0.0);
        assert!(matches!(entropy(&d), Err(Error::Positivity(_))));
        d[(0, 0)] = c(1.0 + 1e-9, 0.0);
        d[(1, 1)] = c(-1e-9, 0.0);
        assert!(entropy(&d).is_ok());
    }

    #[test]
    fn negativity_fixtures() {
        assert!((negativity_two_qubit(&bell()) - 0.5).abs() < 1e-12);
        assert!(negativity_two_qubit(&product()).abs() < 1e-12);
        assert!(negativity_two_qubit(&classical_mixture()).abs() < 1e-12);
    }

    #[test]
    fn w_state_pair_negativity() {
        // Two-qubit marginal of the 3-qubit W state: (|gg⟩⟨gg| + 2|ψ+⟩⟨ψ+|)/3.
        // Its partial transpose has the eigenvalue (1 - √5)/6.
        let mut m = CMatrix::zeros(4, 4);
        let third = c(1.0 / 3.0, 0.0);
        m[(0, 0)] = third;
        m[(1, 1)] = third;
        m[(2, 2)] = third;
        m[(1, 2)] = third;
        m[(2, 1)] = third;
        let n = negativity_two_qubit(&TwoQubitState::new(m).unwrap());
        assert!((n - (5f64.sqrt() - 1.0) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_fixtures() {
        assert!(mutual_information_two_qubit(&product()).unwrap().abs() < 1e-12);
        assert!((mutual_information_two_qubit(&bell()).unwrap() - 2.0).abs() < 1e-12);
        assert!((mutual_information_two_qubit(&classical_mixture()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_correlation_fixtures() {
        assert!(classical_correlation(&product()).unwrap().abs() < 1e-9);
        assert!((classical_correlation(&bell()).unwrap() - 1.0).abs() < 1e-9);
        assert!((classical_correlation(&classical_mixture()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn discord_fixtures() {
        assert!((discord(&bell()).unwrap() - 1.0).abs() < 1e-9);
        assert!(discord(&classical_mixture()).unwrap().abs() < 1e-9);
        assert!(discord(&product()).unwrap().abs() < 1e-9);
    }

    #[test]
    fn measurement_basis_is_complete() {
        let m = MeasurementBasis::new(1.1, 2.3);
        let [p0, p1] = m.projectors();
        assert!((&p0 + &p1 - CMatrix::identity(2, 2)).norm() < 1e-15);
        assert!((&p0 * &p0 - &p0).norm() < 1e-15);
        let o = m.orthogonal().projectors()[0].clone();
        assert!((o - p1).norm() < 1e-15);
    }

    #[test]
    fn measure_names() {
        for m in [
            Measure::Negativity,
            Measure::NegativitySquared,
            Measure::Discord,
            Measure::MutualInformation,
            Measure::ClassicalCorrelation,
        ] {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert_eq!(Measure::Discord.unit(), "bits");
        assert_eq!(Measure::Negativity.unit(), "ebits");
    }

    #[test]
    fn site_vs_rest_requires_sink_free_state() {
        let s = SubspaceState::basis(1, 5).unwrap();
        assert!(matches!(negativity_site_vs_rest(&s, 1), Err(Error::SinkPresent)));
        let t = s.trace_out_sink().unwrap();
        assert!(negativity_site_vs_rest(&t, 1).unwrap().abs() < 1e-15);
        assert!(matches!(negativity_site_vs_rest(&t, 4), Err(Error::SiteIndex { .. })));
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let (x, fx) = nelder_mead(|p| (p[0] - 1.0).powi(2) + 3.0 * (p[1] + 0.5).powi(2), [0.0, 0.0], [0.3, 0.3], 1e-14, 1000);
        assert!(fx < 1e-10);
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] + 0.5).abs() < 1e-5);
    }

    fn arrow_matrix(corner: f64, poles: &[f64], off: &[C64]) -> CMatrix {
        let n = poles.len() + 1;
        let mut m = CMatrix::zeros(n, n);
        m[(0, 0)] = c(corner, 0.0);
        for k in 0..poles.len() {
            m[(k + 1, k + 1)] = c(poles[k], 0.0);
            m[(0, k + 1)] = off[k];
            m[(k + 1, 0)] = off[k].conj();
        }
        m
    }

    #[test]
    fn arrow_solver_matches_dense_eigenvalues() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let (mut out, mut roots) = (Vec::new(), Vec::new());
        for trial in 0..400 {
            let m = rng.random_range(1..8);
            let mut poles: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
            if trial % 3 == 0 && m > 1 {
                poles[1] = poles[0];
            }
            poles.sort_by(f64::total_cmp);
            let off: Vec<C64> = (0..m)
                .map(|k| if trial % 5 == 0 && k == 0 { ZERO } else { c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) })
                .collect();
            let corner = rng.random::<f64>();
            let dense = hermitian_eigenvalues(&arrow_matrix(corner, &poles, &off));
            arrow_eigenvalues(corner, poles.iter().copied(), off.iter().map(|z| z.norm_sqr()), &mut out, &mut roots);
            let mut fast = out.clone();
            fast.sort_by(f64::total_cmp);
            assert_eq!(fast.len(), dense.len());
            for (x, y) in fast.iter().zip(&dense) {
                assert!((x - y).abs() < 1e-12, "trial {trial}: {fast:?} vs {dense:?}");
            }
        }
    }

    #[test]
    fn arrow_path_matches_generic_conditional_entropy() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let q = 5;
            let v: Vec<C64> = (0..=q).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
            let w: Vec<C64> = (0..=q).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
            let rho = (pure(&v) * c(0.6, 0.0)) + (pure(&w) * c(0.4, 0.0));
            let state = SubspaceState::from_matrix(rho, false).unwrap();
            let compact = compact_bipartition(&state, 2).unwrap();
            let arrow = ConditionalStates::new(&compact, q, true);
            assert!(matches!(arrow, ConditionalStates::Arrow(_)));
            let ConditionalStates::Arrow(form) = &arrow else { unreachable!() };
            let block = |x: usize, y: usize| compact.view((x * q, y * q), (q, q)).into_owned();
            let generic = ConditionalStates::Generic { gg: block(0, 0), ge: block(0, 1), eg: block(1, 0), ee: block(1, 1) };
            let mut scratch = Scratch::default();
            for &(theta, phi) in &[(0.0, 0.0), (0.7, 1.3), (1.9, -2.2), (std::f64::consts::PI, 0.4)] {
                let (a, b) = MeasurementBasis::new(theta, phi).vector();
                let fast = form.weighted_entropy(a, b, &mut scratch);
                let slow = generic.outcome_entropy(a, b, &mut scratch);
                assert!((fast - slow).abs() < 1e-12, "{fast} vs {slow}");
            }
        }
    }
}
