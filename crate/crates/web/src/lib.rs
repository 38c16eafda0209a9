//! Browser bindings: populations and dominance routes for the built-in
//! networks. Each call returns a JSON string for the page to parse.

use excitonkit::analytics::{collection_series, detect_route, RouteReport};
use excitonkit::evolution::propagate;
use excitonkit::{InitialState, Measure, Preset, PropagationOptions, Result, Trajectory};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const SAMPLE_EVERY: f64 = 0.01;
const MAX_T_END: f64 = 20.0;

#[derive(Serialize)]
struct PresetInfo {
    name: &'static str,
    description: &'static str,
    sites: usize,
}

#[derive(Serialize)]
struct Populations {
    times: Vec<f64>,
    /// `sites[j - 1][k]` is the population of site `j` at sample `k`.
    sites: Vec<Vec<f64>>,
    sink: Vec<f64>,
}

#[derive(Serialize)]
struct Route {
    measure: Measure,
    times: Vec<f64>,
    /// `values[i - 1][k]` is `Q_{i:R}` at sample `k`.
    values: Vec<Vec<f64>>,
    report: RouteReport,
}

fn trajectory(preset: &str, initial: &str, t_end: f64) -> Result<Trajectory> {
    let preset: Preset = preset.parse()?;
    let initial: InitialState = initial.parse()?;
    if !(t_end > 0.0 && t_end <= MAX_T_END) {
        return Err(excitonkit::Error::InvalidArgument(format!("t_end must lie in (0, {MAX_T_END}] ps")));
    }
    let spec = preset.spec();
    let rho0 = initial.to_state(spec.subspace_dim())?;
    let dt = PropagationOptions::default().dt;
    propagate(&spec, &rho0, PropagationOptions::new(t_end, dt, SAMPLE_EVERY))
}

pub fn presets_json() -> String {
    let list: Vec<PresetInfo> = Preset::ALL
        .iter()
        .map(|p| PresetInfo { name: p.name(), description: p.description(), sites: p.spec().n_sites() })
        .collect();
    serde_json::to_string(&list).expect("preset list serializes")
}

pub fn simulate_json(preset: &str, initial: &str, t_end: f64) -> Result<String> {
    let traj = trajectory(preset, initial, t_end)?;
    let out = Populations {
        times: traj.times().to_vec(),
        sites: (1..=traj.n_sites()).map(|j| traj.population(j)).collect(),
        sink: traj.sink_population(),
    };
    Ok(serde_json::to_string(&out)?)
}

pub fn route_json(preset: &str, initial: &str, t_end: f64, measure: &str) -> Result<String> {
    let measure: Measure = measure.parse()?;
    let traj = trajectory(preset, initial, t_end)?;
    let series = collection_series(&traj, measure)?;
    let report = detect_route(&series.times, &series.values, Default::default())?;
    let n = traj.n_sites();
    let values = (0..n).map(|i| series.values.iter().map(|row| row[i]).collect()).collect();
    Ok(serde_json::to_string(&Route { measure, times: series.times, values, report })?)
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// `[{name, description, sites}]` for the built-in networks.
#[wasm_bindgen]
pub fn presets() -> String {
    presets_json()
}

/// `{times, sites, sink}` populations sampled every 10 fs.
#[wasm_bindgen]
pub fn simulate(preset: &str, initial: &str, t_end: f64) -> std::result::Result<String, JsError> {
    js(simulate_json(preset, initial, t_end))
}

/// `{measure, times, values, report}`: the bipartition collection and its
/// dominance segmentation.
#[wasm_bindgen]
pub fn route(preset: &str, initial: &str, t_end: f64, measure: &str) -> std::result::Result<String, JsError> {
    js(route_json(preset, initial, t_end, measure))
}
