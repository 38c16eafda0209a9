//! Open-system exciton transport on small networks and the quantum
//! correlations it generates.
//!
//! The crate integrates a Lindblad master equation restricted to the
//! zero/one-excitation subspace of an `N`-site network with an attached sink,
//! and evaluates negativity and quantum discord across single-site bipartitions
//! along the resulting trajectories. On top of those it assembles monogamy
//! scores, bipartition collections, dominant-route segmentation and a
//! three-way site grouping.
//!
//! Module map:
//!
//! - [`netmodel`]: network specifications, unit conversion and presets.
//! - [`statespace`]: subspace density matrices and their reductions.
//! - [`dense`]: full tensor-product routines used as independent oracles.
//! - [`evolution`]: Lindblad generator and the RK4 propagator.
//! - [`correlations`]: entropy, negativity, mutual information, discord.
//! - [`analytics`]: monogamy scores, series, route detection, grouping.
//! - [`config`] and [`export`]: experiment configuration and file formats.

pub mod analytics;
pub mod config;
pub mod correlations;
pub mod dense;
mod error;
pub mod evolution;
pub mod export;
pub mod linalg;
pub mod netmodel;
pub mod statespace;

pub use error::{Error, Result};

pub use analytics::{CorrelationSeries, GroupReport, RouteOptions, RouteReport};
pub use correlations::Measure;
pub use evolution::{Liouvillian, PropagationOptions, Trajectory};
pub use netmodel::{NetworkSpec, Preset};
pub use statespace::{InitialState, QubitState, SubspaceState, TwoQubitState};
