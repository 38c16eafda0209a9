//! Multiparty quantities built from the bipartite measures: monogamy scores,
//! bipartition collections, dominant-route segmentation and site grouping.
//!
//! Every evaluation first traces out the sink, so the rest `R` of a nodal
//! site `i` always means the other network sites.

use serde::{Deserialize, Serialize};

use crate::correlations::{
    compact_bipartition, negativity_site_vs_rest, negativity_two_qubit, DiscordOptimizer, Measure,
};
use crate::evolution::Trajectory;
use crate::statespace::SubspaceState;
use crate::{Error, Result};

#[cfg(feature = "parallel")]
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}

fn sites_only(state: &SubspaceState) -> Result<SubspaceState> {
    if state.has_sink() {
        state.trace_out_sink()
    } else {
        Ok(state.clone())
    }
}

fn check_measure(measure: Measure) -> Result<()> {
    if measure.is_multiparty() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{measure} has no monogamy score or collection")))
    }
}

/// `Q_{i:R}` on a sink-free state.
fn total_correlation(state: &SubspaceState, i: usize, measure: Measure, opt: &DiscordOptimizer) -> Result<f64> {
    match measure {
        Measure::Negativity => negativity_site_vs_rest(state, i),
        Measure::NegativitySquared => Ok(negativity_site_vs_rest(state, i)?.powi(2)),
        Measure::Discord => opt.discord(&compact_bipartition(state, i)?, state.n_qubits()),
        other => Err(Error::InvalidArgument(format!("{other} has no monogamy score"))),
    }
}

/// `Q(ρ_{first:second})` with `first` as the measured party.
fn pair_correlation(
    state: &SubspaceState,
    first: usize,
    second: usize,
    measure: Measure,
    opt: &DiscordOptimizer,
) -> Result<f64> {
    let pair = state.reduce_two_site(first, second)?;
    match measure {
        Measure::Negativity => Ok(negativity_two_qubit(&pair)),
        Measure::NegativitySquared => Ok(negativity_two_qubit(&pair).powi(2)),
        Measure::Discord => opt.discord(pair.matrix(), 2),
        other => Err(Error::InvalidArgument(format!("{other} has no monogamy score"))),
    }
}

/// `(Q_{i:R}, Q_{R_i}, δQ_i)` for one nodal site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonogamyScore {
    pub total: f64,
    pub bipartite: f64,
    pub delta: f64,
}

impl MonogamyScore {
    fn new(total: f64, bipartite: f64) -> Self {
        Self { total, bipartite, delta: total - bipartite }
    }
}

/// Monogamy score with site `i` as the nodal observer. The bipartite
/// contribution sums `Q(ρ_{j:i})` over `j ≠ i`, with `j` measured for discord.
pub fn monogamy_score(state: &SubspaceState, i: usize, measure: Measure) -> Result<MonogamyScore> {
    check_measure(measure)?;
    let s = sites_only(state)?;
    s.check_site(i)?;
    let opt = DiscordOptimizer::default();
    let total = total_correlation(&s, i, measure, &opt)?;
    let mut bipartite = 0.0;
    for j in (1..=s.n_sites()).filter(|&j| j != i) {
        bipartite += pair_correlation(&s, j, i, measure, &opt)?;
    }
    Ok(MonogamyScore::new(total, bipartite))
}

/// Bipartition collection `{Q_{i:R}}` for `i = 1..N`.
pub fn collection(state: &SubspaceState, measure: Measure) -> Result<Vec<f64>> {
    check_measure(measure)?;
    let s = sites_only(state)?;
    let opt = DiscordOptimizer::default();
    (1..=s.n_sites()).map(|i| total_correlation(&s, i, measure, &opt)).collect()
}

/// Monogamy scores of every site at one instant.
fn snapshot(state: &SubspaceState, measure: Measure, opt: &DiscordOptimizer) -> Result<Vec<MonogamyScore>> {
    let s = sites_only(state)?;
    let n = s.n_sites();
    // pair[j][i] = Q(ρ_{j:i})
    let mut pair = vec![vec![0.0; n + 1]; n + 1];
    for j in 1..=n {
        for i in 1..=n {
            if i == j {
                continue;
            }
            let symmetric = !matches!(measure, Measure::Discord);
            pair[j][i] = if symmetric && i < j { pair[i][j] } else { pair_correlation(&s, j, i, measure, opt)? };
        }
    }
    (1..=n)
        .map(|i| {
            let total = total_correlation(&s, i, measure, opt)?;
            let bipartite = (1..=n).filter(|&j| j != i).map(|j| pair[j][i]).sum();
            Ok(MonogamyScore::new(total, bipartite))
        })
        .collect()
}

/// Per-site time series of `Q_{i:R}`, `Q_{R_i}` and `δQ_i`.
///
/// Arrays are indexed `[site - 1][sample]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSeries {
    pub measure: Measure,
    pub times: Vec<f64>,
    pub total: Vec<Vec<f64>>,
    pub bipartite: Vec<Vec<f64>>,
    pub delta: Vec<Vec<f64>>,
}

impl CorrelationSeries {
    pub fn n_sites(&self) -> usize {
        self.total.len()
    }

    /// Collections `{Q_{i:R}}` sample by sample, indexed `[sample][site - 1]`.
    pub fn collections(&self) -> Vec<Vec<f64>> {
        (0..self.times.len()).map(|t| self.total.iter().map(|s| s[t]).collect()).collect()
    }

    /// Monogamy scores sample by sample, indexed `[sample][site - 1]`.
    pub fn delta_collections(&self) -> Vec<Vec<f64>> {
        (0..self.times.len()).map(|t| self.delta.iter().map(|s| s[t]).collect()).collect()
    }
}

/// Collections only: `values[sample][site - 1] = Q_{i:R}(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollectionSeries {
    pub measure: Measure,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

pub fn series(traj: &Trajectory, measure: Measure) -> Result<CorrelationSeries> {
    series_with(traj, measure, &DiscordOptimizer::default())
}

pub fn series_with(traj: &Trajectory, measure: Measure, opt: &DiscordOptimizer) -> Result<CorrelationSeries> {
    check_measure(measure)?;
    if traj.is_empty() {
        return Err(Error::EmptySeries);
    }
    let snaps = par_map(traj.states(), |s| snapshot(s, measure, opt)).into_iter().collect::<Result<Vec<_>>>()?;
    let n = traj.n_sites();
    let column = |f: fn(&MonogamyScore) -> f64| -> Vec<Vec<f64>> {
        (0..n).map(|i| snaps.iter().map(|row| f(&row[i])).collect()).collect()
    };
    Ok(CorrelationSeries {
        measure,
        times: traj.times().to_vec(),
        total: column(|m| m.total),
        bipartite: column(|m| m.bipartite),
        delta: column(|m| m.delta),
    })
}

/// `{Q_{i:R}(t)}` without the pair terms, which is all route detection needs.
pub fn collection_series(traj: &Trajectory, measure: Measure) -> Result<CollectionSeries> {
    check_measure(measure)?;
    if traj.is_empty() {
        return Err(Error::EmptySeries);
    }
    let values = par_map(traj.states(), |s| collection(s, measure)).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CollectionSeries { measure, times: traj.times().to_vec(), values })
}

/// Thresholds of the dominance segmentation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteOptions {
    /// Shortest dominance run kept, ps.
    pub dwell: f64,
    /// Collections whose maximum is below this have no dominant site.
    pub floor: f64,
    /// Relative gap under which sites count as tied for the maximum.
    pub tie_tolerance: f64,
}

impl Default for RouteOptions {
    fn default() -> Self {
        Self { dwell: 0.05, floor: 1e-4, tie_tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceInterval {
    pub site: usize,
    pub t_start: f64,
    pub t_end: f64,
}

/// Sites whose collection values coincide, within the tie tolerance, on some
/// samples above the floor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TieGroup {
    pub sites: Vec<usize>,
    pub samples: usize,
    pub t_first: f64,
    pub t_last: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteReport {
    pub method: String,
    pub dwell: f64,
    pub floor: f64,
    pub intervals: Vec<DominanceInterval>,
    pub route: Vec<usize>,
    pub ties: Vec<TieGroup>,
}

impl RouteReport {
    /// Whether `pattern` occurs in the route as an ordered (not necessarily
    /// contiguous) subsequence.
    pub fn contains_ordered(&self, pattern: &[usize]) -> bool {
        let mut it = self.route.iter();
        pattern.iter().all(|p| it.any(|r| r == p))
    }

    pub fn intervals_of(&self, site: usize) -> impl Iterator<Item = &DominanceInterval> {
        self.intervals.iter().filter(move |iv| iv.site == site)
    }
}

/// Per-sample dominant site (`None` below the floor) and maximum value.
pub fn dominant_sites(collections: &[Vec<f64>], floor: f64) -> Vec<(Option<usize>, f64)> {
    collections
        .iter()
        .map(|row| {
            let mut best: Option<(usize, f64)> = None;
            for (k, &v) in row.iter().enumerate() {
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((k + 1, v));
                }
            }
            match best {
                Some((site, v)) if v >= floor => (Some(site), v),
                Some((_, v)) => (None, v),
                None => (None, 0.0),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct Run {
    label: Option<usize>,
    start: usize,
    end: usize,
}

/// Segments a uniformly sampled collection series into dominance intervals.
///
/// The dominant site of a sample is the argmax of its collection (lowest index
/// on exact ties), undefined below `floor`. Runs shorter than `dwell` are
/// absorbed by their neighbours (both, when those agree; otherwise the longer
/// one) until every run is at least `dwell` long. The route lists sites in
/// order of their first surviving interval.
pub fn detect_route(times: &[f64], collections: &[Vec<f64>], options: RouteOptions) -> Result<RouteReport> {
    if times.is_empty() || collections.len() != times.len() {
        return Err(Error::EmptySeries);
    }
    let len = times.len();
    let h = if len > 1 { (times[len - 1] - times[0]) / (len - 1) as f64 } else { 0.0 };
    let dominant = dominant_sites(collections, options.floor);

    let mut runs: Vec<Run> = Vec::new();
    for (k, &(label, _)) in dominant.iter().enumerate() {
        match runs.last_mut() {
            Some(r) if r.label == label => r.end = k + 1,
            _ => runs.push(Run { label, start: k, end: k + 1 }),
        }
    }
    let duration = |r: &Run| (r.end - r.start) as f64 * h;
    let slack = 1e-9 * h.max(1e-12);
    while runs.len() > 1 {
        let Some(idx) = (0..runs.len())
            .filter(|&k| duration(&runs[k]) < options.dwell - slack)
            .min_by(|&a, &b| duration(&runs[a]).total_cmp(&duration(&runs[b])).then(a.cmp(&b)))
        else {
            break;
        };
        let prev = idx.checked_sub(1);
        let next = (idx + 1 < runs.len()).then_some(idx + 1);
        match (prev, next) {
            (Some(p), Some(n)) if runs[p].label == runs[n].label => {
                runs[p].end = runs[n].end;
                runs.drain(idx..=n);
            }
            (Some(p), Some(n)) => {
                if duration(&runs[n]) > duration(&runs[p]) {
                    runs[n].start = runs[idx].start;
                } else {
                    runs[p].end = runs[idx].end;
                }
                runs.remove(idx);
            }
            (Some(p), None) => {
                runs[p].end = runs[idx].end;
                runs.remove(idx);
            }
            (None, Some(n)) => {
                runs[n].start = runs[idx].start;
                runs.remove(idx);
            }
            (None, None) => break,
        }
    }

    let t_last = times[len - 1];
    let intervals: Vec<DominanceInterval> = runs
        .iter()
        .filter_map(|r| {
            r.label.map(|site| DominanceInterval {
                site,
                t_start: times[r.start],
                t_end: if r.end < len { times[r.end] } else { t_last },
            })
        })
        .collect();
    let mut route = Vec::new();
    for iv in &intervals {
        if !route.contains(&iv.site) {
            route.push(iv.site);
        }
    }

    let mut ties: Vec<TieGroup> = Vec::new();
    for (k, row) in collections.iter().enumerate() {
        let (Some(_), max) = dominant[k] else { continue };
        let tol = options.tie_tolerance * max.abs();
        let mut order: Vec<usize> = (0..row.len()).filter(|&s| row[s] >= options.floor).collect();
        order.sort_by(|&x, &y| row[y].total_cmp(&row[x]).then(x.cmp(&y)));
        let mut start = 0;
        while start < order.len() {
            let mut end = start + 1;
            while end < order.len() && row[order[end - 1]] - row[order[end]] <= tol {
                end += 1;
            }
            if end - start >= 2 {
                let mut sites: Vec<usize> = order[start..end].iter().map(|&s| s + 1).collect();
                sites.sort_unstable();
                match ties.iter_mut().find(|g| g.sites == sites) {
                    Some(g) => {
                        g.samples += 1;
                        g.t_last = times[k];
                    }
                    None => ties.push(TieGroup { sites, samples: 1, t_first: times[k], t_last: times[k] }),
                }
            }
            start = end;
        }
    }

    Ok(RouteReport {
        method: "argmax of the bipartition collection, dwell/floor segmentation".into(),
        dwell: options.dwell,
        floor: options.floor,
        intervals,
        route,
        ties,
    })
}

/// Series needed to characterise sites for one initial condition.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteBundle {
    pub label: String,
    pub negativity: CorrelationSeries,
    pub discord: CorrelationSeries,
    /// `populations[site - 1][sample]` on the same time grid.
    pub populations: Vec<Vec<f64>>,
}

impl SiteBundle {
    pub fn from_trajectory(label: impl Into<String>, traj: &Trajectory) -> Result<Self> {
        let n = traj.n_sites();
        Ok(Self {
            label: label.into(),
            negativity: series(traj, Measure::Negativity)?,
            discord: series(traj, Measure::Discord)?,
            populations: (1..=n).map(|j| traj.population(j)).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteFeatures {
    pub site: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteGroup {
    pub label: String,
    pub sites: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub window: (f64, f64),
    pub feature_names: Vec<String>,
    pub features: Vec<SiteFeatures>,
    pub groups: Vec<SiteGroup>,
}

impl GroupReport {
    /// Groups as sorted site sets, sorted by smallest member.
    pub fn partition(&self) -> Vec<Vec<usize>> {
        self.groups.iter().map(|g| g.sites.clone()).collect()
    }
}

pub const GROUP_WINDOW: (f64, f64) = (0.0, 2.0);
pub const GROUP_COUNT: usize = 3;

fn fraction(times: &[f64], window: (f64, f64), pred: impl Fn(usize) -> bool) -> f64 {
    let idx: Vec<usize> = (0..times.len()).filter(|&k| times[k] > window.0 && times[k] <= window.1 + 1e-9).collect();
    if idx.is_empty() {
        return 0.0;
    }
    idx.iter().filter(|&&k| pred(k)).count() as f64 / idx.len() as f64
}

/// Groups sites into three clusters by single-linkage agglomeration on, per
/// bundle, the fraction of the window with `δN_i > N_{R_i}`, the fraction
/// with `D_{R_i} > D_{i:R}`, and the peak population of the site.
pub fn classify_sites(bundles: &[SiteBundle]) -> Result<GroupReport> {
    let first = bundles.first().ok_or(Error::EmptySeries)?;
    let n = first.negativity.n_sites();
    if bundles.iter().any(|b| b.negativity.n_sites() != n || b.discord.n_sites() != n || b.populations.len() != n) {
        return Err(Error::Dimension("bundles disagree on the number of sites".into()));
    }
    let window = GROUP_WINDOW;
    let mut feature_names = Vec::new();
    for b in bundles {
        feature_names.push(format!("{}:frac(dN>N_R)", b.label));
        feature_names.push(format!("{}:frac(D_R>D_iR)", b.label));
        feature_names.push(format!("{}:max(p)", b.label));
    }
    let features: Vec<SiteFeatures> = (0..n)
        .map(|i| {
            let mut values = Vec::new();
            for b in bundles {
                let neg = &b.negativity;
                let dis = &b.discord;
                values.push(fraction(&neg.times, window, |k| neg.delta[i][k] > neg.bipartite[i][k]));
                values.push(fraction(&dis.times, window, |k| dis.bipartite[i][k] > dis.total[i][k]));
                let peak = neg
                    .times
                    .iter()
                    .zip(&b.populations[i])
                    .filter(|(&t, _)| t <= window.1 + 1e-9)
                    .map(|(_, &p)| p)
                    .fold(0.0, f64::max);
                values.push(peak);
            }
            SiteFeatures { site: i + 1, values }
        })
        .collect();

    let distance = |a: &SiteFeatures, b: &SiteFeatures| -> f64 {
        a.values.iter().zip(&b.values).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
    };
    let mut distinct: Vec<&SiteFeatures> = Vec::new();
    for f in &features {
        if !distinct.iter().any(|d| distance(d, f) < 1e-12) {
            distinct.push(f);
        }
    }
    if distinct.len() < GROUP_COUNT {
        return Err(Error::Degenerate(format!(
            "only {} distinct feature vectors among {n} sites, cannot form {GROUP_COUNT} groups",
            distinct.len()
        )));
    }

    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while clusters.len() > GROUP_COUNT {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let d = clusters[a]
                    .iter()
                    .flat_map(|&x| clusters[b].iter().map(move |&y| (x, y)))
                    .map(|(x, y)| distance(&features[x], &features[y]))
                    .fold(f64::INFINITY, f64::min);
                if d < best.0 {
                    best = (d, a, b);
                }
            }
        }
        let merged = clusters.remove(best.2);
        clusters[best.1].extend(merged);
    }
    let mut sets: Vec<Vec<usize>> = clusters
        .into_iter()
        .map(|c| {
            let mut s: Vec<usize> = c.into_iter().map(|i| i + 1).collect();
            s.sort_unstable();
            s
        })
        .collect();
    sets.sort_by_key(|s| s[0]);
    let labels = ["I", "II", "III"];
    let groups = sets
        .into_iter()
        .enumerate()
        .map(|(k, sites)| SiteGroup { label: labels[k].to_string(), sites })
        .collect();
    Ok(GroupReport { window, feature_names, features, groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};

    fn w_state(n: usize) -> SubspaceState {
        let mut v = vec![ONE; n + 1];
        v[0] = ZERO;
        SubspaceState::pure(&v, false).unwrap()
    }

    #[test]
    fn w3_negativity_monogamy() {
        let s = w_state(3);
        let m = monogamy_score(&s, 1, Measure::Negativity).unwrap();
        let pair = (5f64.sqrt() - 1.0) / 6.0;
        assert!((m.total - 2f64.sqrt() / 3.0).abs() < 1e-12);
        assert!((m.bipartite - 2.0 * pair).abs() < 1e-12);
        assert!((m.delta - (2f64.sqrt() / 3.0 - 2.0 * pair)).abs() < 1e-12);
    }

    #[test]
    fn negativity_squared_squares_each_term() {
        let s = w_state(3);
        let m = monogamy_score(&s, 2, Measure::NegativitySquared).unwrap();
        let pair = (5f64.sqrt() - 1.0) / 6.0;
        assert!((m.total - 2.0 / 9.0).abs() < 1e-12);
        assert!((m.bipartite - 2.0 * pair * pair).abs() < 1e-12);
    }

    #[test]
    fn product_states_score_zero() {
        let s = SubspaceState::basis(2, 6).unwrap();
        for q in [Measure::Negativity, Measure::Discord] {
            let m = monogamy_score(&s, 1, q).unwrap();
            assert!(m.total.abs() < 1e-9 && m.bipartite.abs() < 1e-9 && m.delta.abs() < 1e-9);
        }
        assert!(monogamy_score(&s, 1, Measure::MutualInformation).is_err());
    }

    #[test]
    fn ground_collection_is_zero() {
        let s = SubspaceState::basis(0, 9).unwrap();
        for q in [Measure::Negativity, Measure::Discord] {
            assert!(collection(&s, q).unwrap().iter().all(|v| v.abs() < 1e-12));
        }
    }

    fn route(rows: Vec<Vec<f64>>, dt: f64) -> RouteReport {
        let times: Vec<f64> = (0..rows.len()).map(|k| k as f64 * dt).collect();
        detect_route(&times, &rows, RouteOptions::default()).unwrap()
    }

    #[test]
    fn short_blips_are_absorbed() {
        let mut rows = Vec::new();
        for k in 0..100 {
            let mut r = vec![0.0, 0.0, 0.0];
            let site = if k < 40 { 0 } else if k < 42 { 2 } else if k < 70 { 1 } else { 2 };
            r[site] = 1.0;
            rows.push(r);
        }
        let rep = route(rows, 0.01);
        assert_eq!(rep.route, vec![1, 2, 3]);
        assert_eq!(rep.intervals.len(), 3);
        assert!((rep.intervals[1].t_start - 0.42).abs() < 1e-12);
        for w in rep.intervals.windows(2) {
            assert!(w[0].t_end <= w[1].t_start + 1e-12);
        }
    }

    #[test]
    fn blip_between_equal_neighbours_joins_them() {
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|k| if (10..12).contains(&k) { vec![0.0, 1.0] } else { vec![1.0, 0.0] })
            .collect();
        let rep = route(rows, 0.01);
        assert_eq!(rep.route, vec![1]);
        assert_eq!(rep.intervals.len(), 1);
    }

    #[test]
    fn all_zero_collection_has_no_route() {
        let rep = route(vec![vec![0.0; 4]; 50], 0.01);
        assert!(rep.route.is_empty());
        assert!(rep.intervals.is_empty());
        assert!(detect_route(&[], &[], RouteOptions::default()).is_err());
    }

    #[test]
    fn ties_below_the_maximum_are_reported() {
        let rows = vec![vec![0.5, 0.2, 0.2 * (1.0 + 1e-9), 0.2, 1e-5, 1e-5]; 5];
        let rep = route(rows, 0.01);
        assert_eq!(rep.route, vec![1]);
        assert_eq!(rep.ties.len(), 1);
        assert_eq!(rep.ties[0].sites, vec![2, 3, 4]);
    }

    #[test]
    fn ties_are_reported() {
        let rows = vec![vec![0.1, 0.3, 0.3, 0.2]; 10];
        let rep = route(rows, 0.01);
        assert_eq!(rep.route, vec![2]);
        assert_eq!(rep.ties.len(), 1);
        assert_eq!(rep.ties[0].sites, vec![2, 3]);
        assert_eq!(rep.ties[0].samples, 10);
    }

    #[test]
    fn ordered_subsequence() {
        let rep = RouteReport {
            method: String::new(),
            dwell: 0.0,
            floor: 0.0,
            intervals: vec![],
            route: vec![1, 2, 5, 3, 4],
            ties: vec![],
        };
        assert!(rep.contains_ordered(&[1, 2, 3]));
        assert!(!rep.contains_ordered(&[3, 2]));
    }

    fn constant_series(measure: Measure, n: usize, t: usize, total: f64, bip: f64) -> CorrelationSeries {
        CorrelationSeries {
            measure,
            times: (0..t).map(|k| k as f64 * 0.1).collect(),
            total: vec![vec![total; t]; n],
            bipartite: vec![vec![bip; t]; n],
            delta: vec![vec![total - bip; t]; n],
        }
    }

    #[test]
    fn identical_features_are_degenerate() {
        let b = SiteBundle {
            label: "flat".into(),
            negativity: constant_series(Measure::Negativity, 5, 30, 0.2, 0.1),
            discord: constant_series(Measure::Discord, 5, 30, 0.2, 0.1),
            populations: vec![vec![0.2; 30]; 5],
        };
        assert!(matches!(classify_sites(&[b]), Err(Error::Degenerate(_))));
        assert!(matches!(classify_sites(&[]), Err(Error::EmptySeries)));
    }

    #[test]
    fn grouping_separates_feature_clusters() {
        let n = 5;
        let t = 30;
        let mut pops = vec![vec![0.0; t]; n];
        for (i, p) in [0.9, 0.88, 0.1, 0.5, 0.52].into_iter().enumerate() {
            pops[i] = vec![p; t];
        }
        let b = SiteBundle {
            label: "x".into(),
            negativity: constant_series(Measure::Negativity, n, t, 0.2, 0.1),
            discord: constant_series(Measure::Discord, n, t, 0.2, 0.1),
            populations: pops,
        };
        let rep = classify_sites(&[b]).unwrap();
        assert_eq!(rep.partition(), vec![vec![1, 2], vec![3], vec![4, 5]]);
        assert_eq!(rep.groups[0].label, "I");
    }
}
