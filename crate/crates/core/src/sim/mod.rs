//! Open-system simulation of the anneal.
//!
//! Units: `ħ = 1`, time in nanoseconds, schedule amplitudes and fields in
//! rad/ns, so `β` is measured in nanoseconds.

mod dissipator;
mod hamiltonian;
mod run;
mod sweep;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;

use crate::error::SimError;

pub use dissipator::{
    fc_dissipator, hermitian_part, local_dissipator, populations, FullCounting, LocalDamping, TransitionRates,
};
pub use hamiltonian::{assemble_hamiltonian, build_hamiltonian, ground_space, spin, AnnealSpec, Eigen};
pub use run::{
    ground_probability, min_eigenvalue, problem_ground_states, run, Diagnostics, InitialState, Observer, RunOptions, RunReport,
    TrajectoryPoint,
};
pub use sweep::{offsets_for, offset_sweep, run_job, sweep_jobs, SweepJob, SweepRow};

pub type CMatrix = DMatrix<Complex64>;

/// Dense matrices stop being practical beyond this.
pub const MAX_QUBITS: usize = 10;

/// Default level-pairing tolerance relative to the spectral range.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-9;

pub mod units {
    /// J·s
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// J/K
    pub const BOLTZMANN: f64 = 1.380_649e-23;
    /// Seconds per simulator time unit.
    pub const TIME_UNIT: f64 = 1e-9;

    /// `β = ħ/(k_B T)` in simulator time units for a temperature in kelvin.
    pub fn beta_from_kelvin(kelvin: f64) -> f64 {
        HBAR / (BOLTZMANN * kelvin) / TIME_UNIT
    }

    pub fn beta_from_millikelvin(millikelvin: f64) -> f64 {
        beta_from_kelvin(millikelvin * 1e-3)
    }
}

/// Operating point used for the published simulation campaign.
pub mod preset {
    pub const TEMPERATURE_MK: f64 = 22.5;
    /// ns
    pub const FC_TIME: f64 = 1.0;
    /// ns
    pub const LOCAL_TIME: f64 = 15.0;
    /// ns
    pub const ANNEAL_TIME: f64 = 1000.0;
    pub const OFFSET_MAGNITUDES: [f64; 5] = [-0.01, -0.02, -0.03, -0.04, -0.05];
    pub const EXTENSION: f64 = 0.1;
}

/// Which field sets the local-damping Boltzmann factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LocalField {
    /// The problem field `h_j`.
    #[default]
    Bare,
    /// The instantaneous `B_j(s) h_j`.
    Scheduled,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecoherenceConfig {
    /// Inverse temperature in ns.
    pub beta: f64,
    pub fc_rate: f64,
    pub local_rate: f64,
    pub fc_enabled: bool,
    pub local_enabled: bool,
    pub relative_tolerance: f64,
    pub local_field: LocalField,
    /// Multiplies both upward Boltzmann factors; `1` unless injecting a fault.
    pub boltzmann_bias: f64,
}

impl DecoherenceConfig {
    pub fn from_temperature(millikelvin: f64, fc_time: f64, local_time: f64) -> Self {
        Self {
            beta: units::beta_from_millikelvin(millikelvin),
            fc_rate: 1.0 / fc_time,
            local_rate: 1.0 / local_time,
            fc_enabled: true,
            local_enabled: true,
            relative_tolerance: DEFAULT_RELATIVE_TOLERANCE,
            local_field: LocalField::Bare,
            boltzmann_bias: 1.0,
        }
    }

    pub fn paper_preset() -> Self {
        Self::from_temperature(preset::TEMPERATURE_MK, preset::FC_TIME, preset::LOCAL_TIME)
    }

    /// Both channels off; `beta` still sets a Gibbs initial state.
    pub fn closed(beta: f64) -> Self {
        Self { fc_enabled: false, local_enabled: false, ..Self::paper_preset() }.with_beta(beta)
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_channels(mut self, fc: bool, local: bool) -> Self {
        self.fc_enabled = fc;
        self.local_enabled = local;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.beta > 0.0) {
            return Err(SimError::Parameter("beta must be positive"));
        }
        if !(self.fc_rate >= 0.0 && self.fc_rate.is_finite() && self.local_rate >= 0.0 && self.local_rate.is_finite()) {
            return Err(SimError::Parameter("rates must be finite and non-negative"));
        }
        if !(self.relative_tolerance > 0.0) {
            return Err(SimError::Parameter("degeneracy tolerance must be positive"));
        }
        if !(self.boltzmann_bias >= 0.0) {
            return Err(SimError::Parameter("Boltzmann bias must be non-negative"));
        }
        Ok(())
    }

    pub fn full_counting(&self) -> Option<FullCounting> {
        self.fc_enabled.then_some(FullCounting {
            rate: self.fc_rate,
            beta: self.beta,
            relative_tolerance: self.relative_tolerance,
            boltzmann_bias: self.boltzmann_bias,
        })
    }

    pub fn local_damping(&self) -> Option<LocalDamping> {
        self.local_enabled.then_some(LocalDamping {
            rate: self.local_rate,
            beta: self.beta,
            boltzmann_bias: self.boltzmann_bias,
        })
    }
}

/// `e^{−βH}/Tr e^{−βH}`. An infinite `beta` gives the uniform mixture over
/// the ground space.
pub fn gibbs_state(h: &DMatrix<f64>, beta: f64) -> CMatrix {
    gibbs_with(&Eigen::new(h), beta, DEFAULT_RELATIVE_TOLERANCE)
}

pub(crate) fn gibbs_with(eig: &Eigen, beta: f64, relative_tolerance: f64) -> CMatrix {
    let e0 = eig.energies[0];
    let eps = eig.tolerance(relative_tolerance);
    let weights: DVector<f64> = if beta.is_infinite() {
        DVector::from_iterator(eig.energies.len(), eig.energies.iter().map(|&e| if e - e0 <= eps { 1.0 } else { 0.0 }))
    } else {
        DVector::from_iterator(eig.energies.len(), eig.energies.iter().map(|&e| Float::exp(-beta * (e - e0))))
    };
    let weights = &weights / weights.sum();
    let rho = &eig.vectors * DMatrix::from_diagonal(&weights) * eig.vectors.transpose();
    hermitian_part(&rho.map(|v| Complex64::new(v, 0.0)))
}
