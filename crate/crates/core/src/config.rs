//! Experiment configuration in TOML.
//!
//! ```toml
//! [network]
//! preset = "fmo"            # or the inline keys below
//! # n_sites = 2
//! # hamiltonian = [0.0, 50.0, 50.0, 0.0]   # row-major, cm-1
//! # diss_rates = "0 cm-1"                   # one value broadcasts to all sites
//! # deph_rates = "0.157, 9.432 ps-1"
//! # sink_rate = "50 cm-1"
//! # preferred_site = 2
//!
//! [initial]
//! state = "1+6"             # "6", "1+6" or "0.25:1,0.75:6"
//!
//! [time]
//! t_end = 10.0
//! dt = 0.001
//! sample_every = 0.01
//!
//! [analysis]
//! measures = ["negativity", "discord"]
//! nodal_sites = "all"       # or [1, 2]
//! dwell = 0.05
//! floor = 1e-4
//!
//! [output]
//! dir = "out"
//! ```
//!
//! Every rate key needs a unit suffix, `cm-1` or `ps-1`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::analytics::RouteOptions;
use crate::correlations::Measure;
use crate::evolution::PropagationOptions;
use crate::linalg::{c, CMatrix};
use crate::netmodel::{NetworkSpec, Preset, UnitSystem};
use crate::statespace::InitialState;
use crate::{Error, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    network: Option<RawNetwork>,
    initial: Option<RawInitial>,
    time: Option<RawTime>,
    analysis: Option<RawAnalysis>,
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    preset: Option<String>,
    label: Option<String>,
    n_sites: Option<usize>,
    hamiltonian: Option<Vec<f64>>,
    hamiltonian_imag: Option<Vec<f64>>,
    diss_rates: Option<String>,
    deph_rates: Option<String>,
    sink_rate: Option<String>,
    preferred_site: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawState {
    Index(usize),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    state: RawState,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_end: Option<f64>,
    dt: Option<f64>,
    sample_every: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawSites {
    Keyword(String),
    List(Vec<usize>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnalysis {
    measures: Option<Vec<String>>,
    nodal_sites: Option<RawSites>,
    dwell: Option<f64>,
    floor: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: PathBuf,
}

fn field_error(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

/// Parses `"<values> <unit>"` where values are comma or space separated and
/// the unit is `cm-1` or `ps-1`. Returns values in cm⁻¹.
pub fn parse_rates(text: &str) -> std::result::Result<Vec<f64>, String> {
    let text = text.trim();
    let (body, to_cm) = if let Some(b) = text.strip_suffix("cm-1") {
        (b, 1.0)
    } else if let Some(b) = text.strip_suffix("ps-1") {
        (b, 1.0 / UnitSystem::TWO_PI_C)
    } else {
        return Err(format!("'{text}' lacks a unit suffix (cm-1 or ps-1)"));
    };
    let values = body
        .split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map(|v| v * to_cm).map_err(|_| format!("'{s}' is not a number")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(format!("'{text}' has no values"));
    }
    Ok(values)
}

fn rates_field(field: &str, text: Option<&str>, n: usize) -> Result<Vec<f64>> {
    let Some(text) = text else { return Ok(vec![0.0; n]) };
    let v = parse_rates(text).map_err(|m| field_error(field, m))?;
    match v.len() {
        1 => Ok(vec![v[0]; n]),
        k if k == n => Ok(v),
        k => Err(field_error(field, format!("{k} values for {n} sites"))),
    }
}

fn network_from_raw(raw: RawNetwork) -> Result<(NetworkSpec, Option<Preset>)> {
    if let Some(name) = &raw.preset {
        let inline = raw.n_sites.is_some()
            || raw.hamiltonian.is_some()
            || raw.hamiltonian_imag.is_some()
            || raw.diss_rates.is_some()
            || raw.deph_rates.is_some()
            || raw.sink_rate.is_some()
            || raw.preferred_site.is_some();
        if inline {
            return Err(field_error("network", "give either a preset or inline keys, not both"));
        }
        let preset: Preset = name.parse().map_err(|e| field_error("network.preset", e))?;
        let mut spec = preset.spec();
        if let Some(l) = raw.label {
            spec = spec.with_label(l);
        }
        return Ok((spec, Some(preset)));
    }
    let n = raw.n_sites.ok_or_else(|| field_error("network.n_sites", "missing (or set network.preset)"))?;
    if n == 0 {
        return Err(field_error("network.n_sites", "must be positive"));
    }
    let re = raw.hamiltonian.ok_or_else(|| field_error("network.hamiltonian", "missing"))?;
    if re.len() != n * n {
        return Err(field_error("network.hamiltonian", format!("{} entries, expected {}", re.len(), n * n)));
    }
    let im = raw.hamiltonian_imag.unwrap_or_else(|| vec![0.0; n * n]);
    if im.len() != n * n {
        return Err(field_error("network.hamiltonian_imag", format!("{} entries, expected {}", im.len(), n * n)));
    }
    let h = CMatrix::from_fn(n, n, |a, b| c(re[a * n + b], im[a * n + b]));
    let diss = rates_field("network.diss_rates", raw.diss_rates.as_deref(), n)?;
    let deph = rates_field("network.deph_rates", raw.deph_rates.as_deref(), n)?;
    let sink = match raw.sink_rate.as_deref() {
        None => return Err(field_error("network.sink_rate", "missing")),
        Some(t) => {
            let v = parse_rates(t).map_err(|m| field_error("network.sink_rate", m))?;
            if v.len() != 1 {
                return Err(field_error("network.sink_rate", "expected a single value"));
            }
            v[0]
        }
    };
    let k = raw.preferred_site.ok_or_else(|| field_error("network.preferred_site", "missing"))?;
    let label = raw.label.unwrap_or_else(|| "custom".into());
    let spec = NetworkSpec::new(h, diss, deph, sink, k, label).map_err(|e| field_error("network", e))?;
    Ok((spec, None))
}

/// Which sites act as nodal observers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodalSites {
    All,
    List(Vec<usize>),
}

impl NodalSites {
    pub fn resolve(&self, n_sites: usize) -> Result<Vec<usize>> {
        match self {
            NodalSites::All => Ok((1..=n_sites).collect()),
            NodalSites::List(v) => {
                if v.is_empty() {
                    return Err(field_error("analysis.nodal_sites", "empty list"));
                }
                if let Some(&bad) = v.iter().find(|&&i| i == 0 || i > n_sites) {
                    return Err(field_error("analysis.nodal_sites", format!("site {bad} outside 1..={n_sites}")));
                }
                let mut out = v.clone();
                out.sort_unstable();
                out.dedup();
                Ok(out)
            }
        }
    }
}

impl std::str::FromStr for NodalSites {
    type Err = Error;

    /// `all` or a comma separated list such as `1,2,6`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "all" {
            return Ok(NodalSites::All);
        }
        s.split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| field_error("nodal sites", format!("cannot parse '{s}'"))))
            .collect::<Result<Vec<_>>>()
            .map(NodalSites::List)
    }
}

/// Everything a run needs.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub network: NetworkSpec,
    pub preset: Option<Preset>,
    pub initial: InitialState,
    pub propagation: PropagationOptions,
    pub measures: Vec<Measure>,
    pub nodal_sites: NodalSites,
    pub route: RouteOptions,
    pub output_dir: Option<PathBuf>,
}

pub const DEFAULT_MEASURES: [Measure; 2] = [Measure::Negativity, Measure::Discord];

impl ExperimentConfig {
    /// Defaults around a preset: excitation on its default site, 10 ps.
    pub fn from_preset(preset: Preset) -> Self {
        Self {
            network: preset.spec(),
            preset: Some(preset),
            initial: InitialState::Basis(preset.default_initial_site()),
            propagation: PropagationOptions::default(),
            measures: DEFAULT_MEASURES.to_vec(),
            nodal_sites: NodalSites::All,
            route: RouteOptions::default(),
            output_dir: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        let (network, preset) = match raw.network {
            Some(n) => network_from_raw(n)?,
            None => return Err(field_error("network", "section missing")),
        };
        let initial = match raw.initial {
            None => InitialState::Basis(preset.map_or(1, Preset::default_initial_site)),
            Some(RawInitial { state: RawState::Index(i) }) => InitialState::Basis(i),
            Some(RawInitial { state: RawState::Text(s) }) => s.parse().map_err(|e| field_error("initial.state", e))?,
        };
        let mut propagation = PropagationOptions::default();
        if let Some(t) = raw.time {
            propagation.t_end = t.t_end.unwrap_or(propagation.t_end);
            propagation.dt = t.dt.unwrap_or(propagation.dt);
            propagation.sample_every = t.sample_every.unwrap_or(propagation.sample_every);
        }
        let mut measures = DEFAULT_MEASURES.to_vec();
        let mut nodal_sites = NodalSites::All;
        let mut route = RouteOptions::default();
        if let Some(a) = raw.analysis {
            if let Some(m) = a.measures {
                measures = m
                    .iter()
                    .map(|s| s.parse::<Measure>().map_err(|e| field_error("analysis.measures", e)))
                    .collect::<Result<_>>()?;
            }
            match a.nodal_sites {
                None => {}
                Some(RawSites::Keyword(k)) if k == "all" => {}
                Some(RawSites::Keyword(k)) => {
                    return Err(field_error("analysis.nodal_sites", format!("expected \"all\" or a list, got '{k}'")))
                }
                Some(RawSites::List(v)) => nodal_sites = NodalSites::List(v),
            }
            route.dwell = a.dwell.unwrap_or(route.dwell);
            route.floor = a.floor.unwrap_or(route.floor);
        }
        let cfg = Self {
            network,
            preset,
            initial,
            propagation,
            measures,
            nodal_sites,
            route,
            output_dir: raw.output.map(|o| o.dir),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Checks cross-field invariants; call again after applying overrides.
    pub fn validate(&self) -> Result<()> {
        let p = &self.propagation;
        p.grid().map_err(|e| field_error("time", e))?;
        if p.t_end < p.sample_every {
            return Err(field_error("time", format!("t_end {} is shorter than sample_every {}", p.t_end, p.sample_every)));
        }
        self.initial.to_state(self.network.subspace_dim()).map_err(|e| field_error("initial.state", e))?;
        if self.measures.is_empty() {
            return Err(field_error("analysis.measures", "empty list"));
        }
        self.nodal_sites.resolve(self.network.n_sites())?;
        if !(self.route.dwell >= 0.0) {
            return Err(field_error("analysis.dwell", "must be non-negative"));
        }
        if !self.route.floor.is_finite() {
            return Err(field_error("analysis.floor", "must be finite"));
        }
        Ok(())
    }
}

fn join(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", ")
}

/// Writes a network as an inline `[network]` section. Values use the shortest
/// exact representation, so reading the text back gives the same spec.
pub fn network_to_toml(spec: &NetworkSpec) -> String {
    let h = spec.hamiltonian();
    let n = spec.n_sites();
    let mut out = String::from("[network]\n");
    let _ = writeln!(out, "label = {:?}", spec.label());
    let _ = writeln!(out, "n_sites = {n}");
    let _ = writeln!(out, "hamiltonian = [{}]", join((0..n * n).map(|k| h[(k / n, k % n)].re)));
    if (0..n * n).any(|k| h[(k / n, k % n)].im != 0.0) {
        let _ = writeln!(out, "hamiltonian_imag = [{}]", join((0..n * n).map(|k| h[(k / n, k % n)].im)));
    }
    let _ = writeln!(out, "diss_rates = \"{} cm-1\"", join(spec.dissipation_rates().iter().copied()));
    let _ = writeln!(out, "deph_rates = \"{} cm-1\"", join(spec.dephasing_rates().iter().copied()));
    let _ = writeln!(out, "sink_rate = \"{:?} cm-1\"", spec.sink_rate());
    let _ = writeln!(out, "preferred_site = {}", spec.preferred_site());
    out
}

/// Reads a document holding only a `[network]` section.
pub fn network_from_toml(text: &str) -> Result<NetworkSpec> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Doc {
        network: RawNetwork,
    }
    let doc: Doc = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
    Ok(network_from_raw(doc.network)?.0)
}
