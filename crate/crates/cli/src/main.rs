//! `excitonkit` command-line front end.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical abort, 1 for
//! anything else (I/O and the like).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use excitonkit::analytics::{self, classify_sites, detect_route, SiteBundle, GROUP_WINDOW};
use excitonkit::config::{ExperimentConfig, NodalSites};
use excitonkit::evolution::propagate;
use excitonkit::export;
use excitonkit::{Error, InitialState, Measure, Preset, Trajectory};

#[derive(Parser)]
#[command(name = "excitonkit", version, about = "Exciton transport and multiparty quantum correlations on light-harvesting networks")]
struct Cli {
    /// Worker threads for correlation evaluation.
    #[arg(long, global = true, env = "EXCITONKIT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in networks.
    Presets,
    /// Integrate the master equation and write populations.csv.
    Simulate(RunArgs),
    /// Write monogamy-score series per measure and nodal site.
    Correlations {
        #[command(flatten)]
        run: RunArgs,
        /// Measure to evaluate; repeat for several.
        #[arg(long = "measure")]
        measures: Vec<Measure>,
        /// Nodal sites: `all` or a list such as `1,2,6`.
        #[arg(long)]
        nodal: Option<NodalSites>,
    },
    /// Detect the dominant transfer route from a bipartition collection.
    Route {
        #[command(flatten)]
        run: RunArgs,
        /// Measure for the collection (default discord).
        #[arg(long)]
        measure: Option<Measure>,
        /// Runs shorter than this many ps are merged into their neighbours.
        #[arg(long)]
        dwell: Option<f64>,
        /// Samples whose largest value is below this have no dominant site.
        #[arg(long)]
        floor: Option<f64>,
    },
    /// Group sites from negativity and discord series of several initial states.
    Classify {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Built-in network (see `presets`).
    #[arg(long, conflicts_with = "config")]
    preset: Option<Preset>,
    /// TOML experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Initial state: `6`, `1+6` or `0.25:1,0.75:6`. Repeatable for `classify`.
    #[arg(long = "initial")]
    initial: Vec<InitialState>,
    /// Propagation horizon in ps.
    #[arg(long)]
    t_end: Option<f64>,
    /// RK4 step in ps.
    #[arg(long)]
    dt: Option<f64>,
    /// Sampling interval in ps.
    #[arg(long)]
    sample_every: Option<f64>,
    /// Output directory (created if missing).
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TraceDrift { .. } | Error::Positivity(_) | Error::Degenerate(_) | Error::EmptySeries => 3,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
            _ => 2,
        };
        let mut message = e.to_string();
        if matches!(e, Error::Positivity(_) | Error::TraceDrift { .. }) {
            message.push_str(" (integration error; try a smaller --dt)");
        }
        Failure { code, message }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Outcome = std::result::Result<(), Failure>;

impl RunArgs {
    fn load(&self) -> std::result::Result<ExperimentConfig, Failure> {
        let mut cfg = match (&self.preset, &self.config) {
            (Some(p), None) => ExperimentConfig::from_preset(*p),
            (None, Some(path)) => ExperimentConfig::from_path(path)?,
            _ => return Err(config_error("pass either --preset or --config")),
        };
        if let Some(first) = self.initial.first() {
            cfg.initial = first.clone();
        }
        let p = &mut cfg.propagation;
        p.t_end = self.t_end.unwrap_or(p.t_end);
        p.dt = self.dt.unwrap_or(p.dt);
        p.sample_every = self.sample_every.unwrap_or(p.sample_every);
        if let Some(out) = &self.out {
            cfg.output_dir = Some(out.clone());
        }
        Ok(cfg)
    }
}

fn output_dir(cfg: &ExperimentConfig) -> std::result::Result<PathBuf, Failure> {
    let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(Error::from)?;
    Ok(dir)
}

fn trajectory(cfg: &ExperimentConfig) -> std::result::Result<Trajectory, Failure> {
    let rho0 = cfg.initial.to_state(cfg.network.subspace_dim())?;
    Ok(propagate(&cfg.network, &rho0, cfg.propagation)?)
}

fn wrote(path: &Path) {
    println!("wrote {}", path.display());
}

fn presets() -> Outcome {
    for p in Preset::ALL {
        println!("{:<24} {}", p.name(), p.description());
    }
    Ok(())
}

fn simulate(run: &RunArgs) -> Outcome {
    let cfg = run.load()?;
    cfg.validate()?;
    let dir = output_dir(&cfg)?;
    let traj = trajectory(&cfg)?;
    wrote(&export::write_populations(&traj, &dir)?);
    if let Some(sink) = traj.states().last().and_then(|s| s.sink_population()) {
        println!("p_sink({} ps) = {}", cfg.propagation.t_end, export::fmt_float(sink));
    }
    Ok(())
}

fn correlations(run: &RunArgs, measures: &[Measure], nodal: Option<&NodalSites>) -> Outcome {
    let mut cfg = run.load()?;
    if !measures.is_empty() {
        cfg.measures = measures.to_vec();
    }
    if let Some(n) = nodal {
        cfg.nodal_sites = n.clone();
    }
    cfg.validate()?;
    if let Some(m) = cfg.measures.iter().find(|m| !m.is_multiparty()) {
        return Err(config_error(format!("{m} has no monogamy score; use negativity, negativity-squared or discord")));
    }
    let sites = cfg.nodal_sites.resolve(cfg.network.n_sites())?;
    let dir = output_dir(&cfg)?;
    let traj = trajectory(&cfg)?;
    for &m in &cfg.measures {
        let series = analytics::series(&traj, m)?;
        for path in export::write_series(&series, &sites, &dir)? {
            wrote(&path);
        }
        let collection = analytics::CollectionSeries { measure: m, times: series.times.clone(), values: series.collections() };
        let path = dir.join(format!("{}_collection.csv", m.name()));
        export::collection_table(&collection).to_file(&path)?;
        wrote(&path);
    }
    Ok(())
}

fn route(run: &RunArgs, measure: Option<Measure>, dwell: Option<f64>, floor: Option<f64>) -> Outcome {
    let mut cfg = run.load()?;
    let measure = measure.unwrap_or(Measure::Discord);
    cfg.measures = vec![measure];
    cfg.route.dwell = dwell.unwrap_or(cfg.route.dwell);
    cfg.route.floor = floor.unwrap_or(cfg.route.floor);
    cfg.validate()?;
    if !measure.is_multiparty() {
        return Err(config_error(format!("{measure} has no bipartition collection")));
    }
    let dir = output_dir(&cfg)?;
    let traj = trajectory(&cfg)?;
    let collection = analytics::collection_series(&traj, measure)?;
    let report = detect_route(&collection.times, &collection.values, cfg.route)?;

    let path = dir.join(format!("{}_collection.csv", measure.name()));
    export::collection_table(&collection).to_file(&path)?;
    wrote(&path);
    let path = dir.join("dominance.csv");
    export::dominance_table(&collection.times, &collection.values, cfg.route.floor).to_file(&path)?;
    wrote(&path);
    let path = dir.join("route.json");
    export::write_json(&report, &path)?;
    wrote(&path);

    let route: Vec<String> = report.route.iter().map(usize::to_string).collect();
    println!("route: {}", route.join(" -> "));
    for tie in &report.ties {
        println!("tie among sites {:?} from {} to {} ps", tie.sites, tie.t_first, tie.t_last);
    }
    Ok(())
}

fn classify(run: &RunArgs) -> Outcome {
    let mut cfg = run.load()?;
    cfg.propagation.t_end = cfg.propagation.t_end.min(GROUP_WINDOW.1);
    cfg.validate()?;
    let initials = if run.initial.is_empty() {
        ["1", "6", "1+6"].iter().map(|s| s.parse().expect("default initial states parse")).collect()
    } else {
        run.initial.clone()
    };
    let dir = output_dir(&cfg)?;
    let mut bundles = Vec::new();
    for initial in initials {
        let mut c = cfg.clone();
        c.initial = initial;
        c.validate()?;
        let traj = trajectory(&c)?;
        bundles.push(SiteBundle::from_trajectory(c.initial.tag(), &traj)?);
    }
    let report = classify_sites(&bundles)?;
    let path = dir.join("groups.json");
    export::write_json(&report, &path)?;
    wrote(&path);
    for g in &report.groups {
        println!("group {}: {:?}", g.label, g.sites);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    let outcome = match &cli.command {
        Command::Presets => presets(),
        Command::Simulate(run) => simulate(run),
        Command::Correlations { run, measures, nodal } => correlations(run, measures, nodal.as_ref()),
        Command::Route { run, measure, dwell, floor } => route(run, *measure, *dwell, *floor),
        Command::Classify { run } => classify(run),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
