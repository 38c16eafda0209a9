//! Network specifications: site Hamiltonian, noise rates and sink wiring.
//!
//! Energies and rates are stored in wavenumbers (cm⁻¹). The conversion to
//! angular frequency in rad/ps happens only when the Lindblad generator is
//! built, so simulated time is always in picoseconds.

use std::fmt;
use std::str::FromStr;

use crate::linalg::{c, hermiticity_error, CMatrix};
use crate::{Error, Result};

/// Unit conversions between spectroscopic wavenumbers and angular rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem;

impl UnitSystem {
    /// `2π c` in cm/ps; multiplies a wavenumber to give rad/ps.
    pub const TWO_PI_C: f64 = 0.1883651567;

    pub fn to_rad_per_ps(wavenumber: f64) -> f64 {
        Self::TWO_PI_C * wavenumber
    }

    pub fn to_wavenumber(rate_per_ps: f64) -> f64 {
        rate_per_ps / Self::TWO_PI_C
    }
}

/// Wavenumber (cm⁻¹) to angular rate (rad/ps).
pub fn convert_rate(wavenumber: f64) -> f64 {
    UnitSystem::to_rad_per_ps(wavenumber)
}

const HERMITIAN_TOL: f64 = 1e-12;

/// An `N`-site network with local dissipation, local dephasing and an
/// irreversible sink attached to one preferred site.
///
/// Site indices are 1-based throughout the crate, matching the subspace basis
/// where index 0 is the global ground state and `N + 1` the sink.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    hamiltonian: CMatrix,
    dissipation_rates: Vec<f64>,
    dephasing_rates: Vec<f64>,
    sink_rate: f64,
    preferred_site: usize,
    label: String,
}

impl NetworkSpec {
    pub fn new(
        hamiltonian: CMatrix,
        dissipation_rates: Vec<f64>,
        dephasing_rates: Vec<f64>,
        sink_rate: f64,
        preferred_site: usize,
        label: impl Into<String>,
    ) -> Result<Self> {
        let n = hamiltonian.nrows();
        if n == 0 || hamiltonian.ncols() != n {
            return Err(Error::Dimension(format!(
                "hamiltonian must be square and non-empty, got {}x{}",
                hamiltonian.nrows(),
                hamiltonian.ncols()
            )));
        }
        for (what, v) in [("dissipation", &dissipation_rates), ("dephasing", &dephasing_rates)] {
            if v.len() != n {
                return Err(Error::Dimension(format!(
                    "{what} rates have length {}, expected {n}",
                    v.len()
                )));
            }
        }
        let herm = hermiticity_error(&hamiltonian);
        if !(herm <= HERMITIAN_TOL) {
            return Err(Error::NotHermitian(herm));
        }
        for (j, &g) in dissipation_rates.iter().enumerate() {
            check_rate(&format!("dissipation at site {}", j + 1), g)?;
        }
        for (j, &g) in dephasing_rates.iter().enumerate() {
            check_rate(&format!("dephasing at site {}", j + 1), g)?;
        }
        check_rate("sink", sink_rate)?;
        if preferred_site == 0 || preferred_site > n {
            return Err(Error::SiteIndex { index: preferred_site, n_sites: n });
        }
        Ok(Self {
            hamiltonian,
            dissipation_rates,
            dephasing_rates,
            sink_rate,
            preferred_site,
            label: label.into(),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.hamiltonian.nrows()
    }

    /// Dimension of the subspace density matrix, `N + 2`.
    pub fn subspace_dim(&self) -> usize {
        self.n_sites() + 2
    }

    /// Site-basis Hamiltonian in cm⁻¹.
    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn dissipation_rates(&self) -> &[f64] {
        &self.dissipation_rates
    }

    pub fn dephasing_rates(&self) -> &[f64] {
        &self.dephasing_rates
    }

    pub fn sink_rate(&self) -> f64 {
        self.sink_rate
    }

    pub fn preferred_site(&self) -> usize {
        self.preferred_site
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

fn check_rate(what: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::NegativeRate { what: what.to_string(), value });
    }
    Ok(())
}

/// Fully connected network: every off-diagonal coupling equals `coupling`.
pub fn build_fcn(
    n: usize,
    coupling: f64,
    onsite: &[f64],
    dissipation: &[f64],
    dephasing: &[f64],
    sink_rate: f64,
    preferred_site: usize,
) -> Result<NetworkSpec> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("a network needs at least 2 sites, got {n}")));
    }
    if onsite.len() != n {
        return Err(Error::Dimension(format!("onsite energies have length {}, expected {n}", onsite.len())));
    }
    let h = CMatrix::from_fn(n, n, |a, b| if a == b { c(onsite[a], 0.0) } else { c(coupling, 0.0) });
    NetworkSpec::new(
        h,
        dissipation.to_vec(),
        dephasing.to_vec(),
        sink_rate,
        preferred_site,
        format!("fcn-{n}"),
    )
}

/// FMO site Hamiltonian in cm⁻¹ (seven bacteriochlorophyll sites, site basis).
#[rustfmt::skip]
pub const FMO_HAMILTONIAN: [[f64; 7]; 7] = [
    [ 215.0, -104.1,   5.1,  -4.3,   4.7, -15.1,  -7.8],
    [-104.1,  220.0,  32.6,   7.1,   5.4,   8.3,   0.8],
    [   5.1,   32.6,   0.0, -46.8,   1.0,  -8.1,   5.1],
    [  -4.3,    7.1, -46.8, 125.0, -70.7, -14.7, -61.5],
    [   4.7,    5.4,   1.0, -70.7, 450.0,  89.7,  -2.5],
    [ -15.1,    8.3,  -8.1, -14.7,  89.7, 330.0,  32.7],
    [  -7.8,    0.8,   5.1, -61.5,  -2.5,  32.7, 280.0],
];

/// FMO dephasing rates in ps⁻¹.
pub const FMO_DEPHASING_PER_PS: [f64; 7] = [0.157, 9.432, 7.797, 9.432, 7.797, 0.922, 9.433];

/// FMO trapping rate into the reaction centre, cm⁻¹.
pub const FMO_SINK_RATE: f64 = 62.8 / 1.88;

/// FMO uniform dissipation rate, cm⁻¹.
pub const FMO_DISSIPATION_RATE: f64 = 1.0 / (2.0 * 188.0);

pub const FMO_PREFERRED_SITE: usize = 3;

pub fn build_fmo() -> NetworkSpec {
    let h = CMatrix::from_fn(7, 7, |a, b| c(FMO_HAMILTONIAN[a][b], 0.0));
    let dephasing = FMO_DEPHASING_PER_PS.iter().map(|&g| UnitSystem::to_wavenumber(g)).collect();
    NetworkSpec::new(h, vec![FMO_DISSIPATION_RATE; 7], dephasing, FMO_SINK_RATE, FMO_PREFERRED_SITE, "fmo")
        .expect("FMO preset is valid")
}

/// Coupling, onsite scale and sink rate of the seven-site FCN presets, cm⁻¹.
pub const FCN_COUPLING: f64 = 50.0;
pub const FCN_SINK_RATE: f64 = 50.0;
pub const FCN_SITES: usize = 7;

/// Named network instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    FcnClean,
    FcnEnergyMismatch,
    FcnDephasingMismatch,
    Fmo,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::FcnClean,
        Preset::FcnEnergyMismatch,
        Preset::FcnDephasingMismatch,
        Preset::Fmo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::FcnClean => "fcn-clean",
            Preset::FcnEnergyMismatch => "fcn-energy-mismatch",
            Preset::FcnDephasingMismatch => "fcn-dephasing-mismatch",
            Preset::Fmo => "fmo",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::FcnClean => "7-site FCN, J = 50 cm-1, no dissipation or dephasing, sink on site 7",
            Preset::FcnEnergyMismatch => "clean FCN with onsite energy 50 cm-1 on site 1",
            Preset::FcnDephasingMismatch => "clean FCN with dephasing 50 cm-1 on site 1",
            Preset::Fmo => "7-site FMO complex, sink on site 3",
        }
    }

    pub fn spec(self) -> NetworkSpec {
        let n = FCN_SITES;
        let zeros = vec![0.0; n];
        let spec = match self {
            Preset::Fmo => return build_fmo(),
            Preset::FcnClean => build_fcn(n, FCN_COUPLING, &zeros, &zeros, &zeros, FCN_SINK_RATE, n),
            Preset::FcnEnergyMismatch => {
                let mut onsite = zeros.clone();
                onsite[0] = 50.0;
                build_fcn(n, FCN_COUPLING, &onsite, &zeros, &zeros, FCN_SINK_RATE, n)
            }
            Preset::FcnDephasingMismatch => {
                let mut deph = zeros.clone();
                deph[0] = 50.0;
                build_fcn(n, FCN_COUPLING, &zeros, &zeros, &deph, FCN_SINK_RATE, n)
            }
        };
        spec.expect("FCN presets are valid").with_label(self.name())
    }

    /// Site holding the excitation at t = 0 unless overridden.
    pub fn default_initial_site(self) -> usize {
        1
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown preset '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_reproduces_quoted_rates() {
        let trap = convert_rate(62.8 / 1.88);
        assert!((6.25..=6.35).contains(&trap), "{trap}");
        let diss = convert_rate(1.0 / (2.0 * 188.0));
        assert!((diss - 5.0e-4).abs() < 0.1e-4, "{diss}");
        assert_eq!(convert_rate(0.0), 0.0);
    }

    #[test]
    fn fmo_matches_published_matrix() {
        let spec = build_fmo();
        let h = spec.hamiltonian();
        assert_eq!(h[(0, 1)].re, -104.1);
        assert_eq!(h[(2, 2)].re, 0.0);
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(h[(a, b)], c(FMO_HAMILTONIAN[a][b], 0.0));
                assert_eq!(h[(a, b)], h[(b, a)]);
            }
        }
        assert_eq!(spec.preferred_site(), 3);
        assert_eq!(spec.sink_rate(), 62.8 / 1.88);
        assert!(spec.dissipation_rates().iter().all(|&g| g == 1.0 / 376.0));
        for (g, ps) in spec.dephasing_rates().iter().zip(FMO_DEPHASING_PER_PS) {
            assert!((convert_rate(*g) - ps).abs() < 1e-12);
        }
    }

    #[test]
    fn fcn_layout() {
        let spec = Preset::FcnEnergyMismatch.spec();
        let h = spec.hamiltonian();
        assert_eq!(h[(0, 0)].re, 50.0);
        assert_eq!(h[(1, 1)].re, 0.0);
        assert!((0..7).all(|a| (0..7).all(|b| a == b || h[(a, b)].re == 50.0)));
        assert_eq!(spec.preferred_site(), 7);
        assert_eq!(spec.label(), "fcn-energy-mismatch");

        let decoupled = build_fcn(2, 0.0, &[0.0, 0.0], &[0.0, 0.0], &[0.0, 0.0], 0.0, 1).unwrap();
        assert_eq!(decoupled.hamiltonian()[(0, 1)].re, 0.0);
    }

    #[test]
    fn fcn_errors() {
        assert!(matches!(
            build_fcn(3, 1.0, &[0.0; 2], &[0.0; 3], &[0.0; 3], 1.0, 1),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            build_fcn(3, 1.0, &[0.0; 3], &[0.0, -1.0, 0.0], &[0.0; 3], 1.0, 1),
            Err(Error::NegativeRate { .. })
        ));
        assert!(matches!(
            build_fcn(3, 1.0, &[0.0; 3], &[0.0; 3], &[0.0; 3], 1.0, 4),
            Err(Error::SiteIndex { .. })
        ));
        assert!(build_fcn(1, 1.0, &[0.0], &[0.0], &[0.0], 1.0, 1).is_err());
    }

    #[test]
    fn non_hermitian_hamiltonian_rejected() {
        let h = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        let r = NetworkSpec::new(h, vec![0.0; 2], vec![0.0; 2], 0.0, 1, "bad");
        assert!(matches!(r, Err(Error::NotHermitian(_))));
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("fcn".parse::<Preset>().is_err());
    }
}
