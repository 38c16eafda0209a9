//! Plain-text output files and their readers.
//!
//! Floats are written with 12 significant digits in scientific notation, so
//! identical inputs give byte-identical files.
//!
//! | file | columns |
//! |------|---------|
//! | `populations.csv` | `t_ps,p0,p1..pN,psink` |
//! | `<measure>_site<i>.csv` | `t_ps,<measure>_total_<i>,<measure>_bipartite_<i>,<measure>_delta_<i>` |
//! | `<measure>_collection.csv` | `t_ps,<measure>_1..<measure>_N` |
//! | `dominance.csv` | `t_ps,dominant,max_value` (dominant 0 = none) |
//! | `route.json`, `groups.json` | serialized reports |

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::analytics::{dominant_sites, CollectionSeries, CorrelationSeries, GroupReport, RouteReport};
use crate::correlations::Measure;
use crate::evolution::Trajectory;
use crate::{Error, Result};

/// Formats `x` with 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    // adding zero folds -0.0 into 0.0
    format!("{:.11e}", x + 0.0)
}

fn round12(x: f64) -> f64 {
    fmt_float(x).parse().unwrap_or(x)
}

/// A parsed numeric CSV: header plus rows of floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|&v| fmt_float(v)))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|_| Error::InvalidArgument(format!("'{s}' is not a number"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn to_file(&self, path: &Path) -> Result<()> {
        self.write(std::io::BufWriter::new(std::fs::File::create(path)?))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::read(std::fs::File::open(path)?)
    }

    /// Checks the header against an expected schema.
    pub fn expect_header(&self, expected: &[String]) -> Result<()> {
        if self.header != expected {
            return Err(Error::InvalidArgument(format!("header {:?}, expected {:?}", self.header, expected)));
        }
        Ok(())
    }
}

pub fn populations_header(n_sites: usize) -> Vec<String> {
    let mut h = vec!["t_ps".to_string()];
    h.extend((0..=n_sites).map(|j| format!("p{j}")));
    h.push("psink".into());
    h
}

pub fn populations_table(traj: &Trajectory) -> Table {
    let table = traj.population_table();
    let rows = traj
        .times()
        .iter()
        .zip(table)
        .map(|(&t, p)| std::iter::once(t).chain(p).collect())
        .collect();
    Table { header: populations_header(traj.n_sites()), rows }
}

pub fn series_file_name(measure: Measure, site: usize) -> String {
    format!("{}_site{site}.csv", measure.name())
}

pub fn series_header(measure: Measure, site: usize) -> Vec<String> {
    let m = measure.name();
    vec!["t_ps".into(), format!("{m}_total_{site}"), format!("{m}_bipartite_{site}"), format!("{m}_delta_{site}")]
}

pub fn series_table(series: &CorrelationSeries, site: usize) -> Result<Table> {
    let i = site.checked_sub(1).filter(|&i| i < series.n_sites()).ok_or(Error::SiteIndex {
        index: site,
        n_sites: series.n_sites(),
    })?;
    let rows = (0..series.times.len())
        .map(|k| vec![series.times[k], series.total[i][k], series.bipartite[i][k], series.delta[i][k]])
        .collect();
    Ok(Table { header: series_header(series.measure, site), rows })
}

pub fn collection_header(measure: Measure, n_sites: usize) -> Vec<String> {
    std::iter::once("t_ps".to_string()).chain((1..=n_sites).map(|i| format!("{}_{i}", measure.name()))).collect()
}

pub fn collection_table(series: &CollectionSeries) -> Table {
    let n = series.values.first().map_or(0, Vec::len);
    let rows = series.times.iter().zip(&series.values).map(|(&t, v)| std::iter::once(t).chain(v.iter().copied()).collect()).collect();
    Table { header: collection_header(series.measure, n), rows }
}

pub fn dominance_header() -> Vec<String> {
    ["t_ps", "dominant", "max_value"].map(String::from).to_vec()
}

/// Per-sample dominant site of a collection series, 0 where below the floor.
pub fn dominance_table(times: &[f64], collections: &[Vec<f64>], floor: f64) -> Table {
    let rows = times
        .iter()
        .zip(dominant_sites(collections, floor))
        .map(|(&t, (site, max))| vec![t, site.unwrap_or(0) as f64, max])
        .collect();
    Table { header: dominance_header(), rows }
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().map(round12).and_then(serde_json::Number::from_f64) {
                *n = x;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_numbers),
        Value::Object(o) => o.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Pretty JSON with floats rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_numbers(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn read_route(path: &Path) -> Result<RouteReport> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

pub fn read_groups(path: &Path) -> Result<GroupReport> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Writes the populations of a trajectory and returns the file path.
pub fn write_populations(traj: &Trajectory, dir: &Path) -> Result<PathBuf> {
    let path = dir.join("populations.csv");
    populations_table(traj).to_file(&path)?;
    Ok(path)
}

/// Writes one series file per listed site and returns the paths.
pub fn write_series(series: &CorrelationSeries, sites: &[usize], dir: &Path) -> Result<Vec<PathBuf>> {
    sites
        .iter()
        .map(|&i| {
            let path = dir.join(series_file_name(series.measure, i));
            series_table(series, i)?.to_file(&path)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{detect_route, RouteOptions};
    use crate::evolution::{propagate, PropagationOptions};
    use crate::netmodel::Preset;
    use crate::statespace::SubspaceState;

    fn short_traj() -> Trajectory {
        let spec = Preset::Fmo.spec();
        let rho = SubspaceState::basis(1, spec.subspace_dim()).unwrap();
        propagate(&spec, &rho, PropagationOptions::new(0.05, 1e-3, 1e-2)).unwrap()
    }

    #[test]
    fn float_format_has_twelve_digits() {
        assert_eq!(fmt_float(1.0 / 6.0), "1.66666666667e-1");
        assert_eq!(fmt_float(0.0), "0.00000000000e0");
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
    }

    #[test]
    fn populations_round_trip() {
        let traj = short_traj();
        let t = populations_table(&traj);
        assert_eq!(t.header.len(), 1 + 8 + 1);
        assert_eq!(t.header[0], "t_ps");
        assert_eq!(t.header[9], "psink");
        let mut buf = Vec::new();
        t.write(&mut buf).unwrap();
        let back = Table::read(buf.as_slice()).unwrap();
        back.expect_header(&populations_header(7)).unwrap();
        assert_eq!(back.rows.len(), traj.len());
        for (a, b) in back.rows.iter().flatten().zip(t.rows.iter().flatten()) {
            assert!((a - b).abs() <= 1e-11 * b.abs().max(1e-300));
        }
        let mut again = Vec::new();
        back.write(&mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn series_schema() {
        let s = CorrelationSeries {
            measure: Measure::Discord,
            times: vec![0.0, 0.01],
            total: vec![vec![0.1, 0.2]; 2],
            bipartite: vec![vec![0.05, 0.3]; 2],
            delta: vec![vec![0.05, -0.1]; 2],
        };
        let t = series_table(&s, 2).unwrap();
        assert_eq!(t.header, vec!["t_ps", "discord_total_2", "discord_bipartite_2", "discord_delta_2"]);
        assert_eq!(t.rows[1], vec![0.01, 0.2, 0.3, -0.1]);
        assert!(series_table(&s, 3).is_err());
        assert_eq!(series_file_name(Measure::Discord, 2), "discord_site2.csv");
    }

    #[test]
    fn route_json_round_trip() {
        let times: Vec<f64> = (0..20).map(|k| k as f64 * 0.01).collect();
        let rows: Vec<Vec<f64>> = (0..20).map(|k| if k < 10 { vec![1.0 / 3.0, 0.0] } else { vec![0.0, 0.5] }).collect();
        let rep = detect_route(&times, &rows, RouteOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("route.json");
        write_json(&rep, &path).unwrap();
        let back = read_route(&path).unwrap();
        assert_eq!(back.route, rep.route);
        assert_eq!(back.intervals.len(), rep.intervals.len());
        let dom = dominance_table(&times, &rows, 1e-4);
        assert_eq!(dom.rows[0][1], 1.0);
        assert_eq!(dom.rows[15][1], 2.0);
        assert_eq!(dom.rows[0][2], 1.0 / 3.0);
    }
}
