use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Float;

use crate::error::SimError;

use super::dissipator::{apply_rates, hermitian_part, left_multiply, populations, FullCounting, LocalDamping, TransitionRates};
use super::hamiltonian::{assemble_hamiltonian, AnnealSpec, Eigen};
use super::{gibbs_with, CMatrix, DecoherenceConfig, LocalField};

/// Density matrix at `s = 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    /// Thermal state of `H(0)` at the configured `β`.
    Gibbs,
    /// Uniform mixture over the ground space of `H(0)`.
    Ground,
    /// A computational basis state.
    Basis(usize),
    Density(CMatrix),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    /// Number of RK4 steps across the window.
    pub steps: usize,
    /// Record the trajectory every this many steps. The first and last
    /// points are always recorded.
    pub record_every: usize,
    pub initial: InitialState,
    pub trace_limit: f64,
    pub negativity_limit: f64,
    pub hermiticity_limit: f64,
}

impl RunOptions {
    pub fn new(steps: usize) -> Self {
        Self {
            steps,
            record_every: (steps / 100).max(1),
            initial: InitialState::Gibbs,
            trace_limit: 1e-6,
            negativity_limit: 1e-6,
            hermiticity_limit: 1e-8,
        }
    }

    /// Enough steps that the physical time step does not exceed `dt`.
    pub fn with_time_step(spec: &AnnealSpec, dt: f64) -> Self {
        Self::new(Float::ceil(spec.total_time() / dt).max(1.0) as usize)
    }

    pub fn initial(mut self, initial: InitialState) -> Self {
        self.initial = initial;
        self
    }

    pub fn record_every(mut self, stride: usize) -> Self {
        self.record_every = stride.max(1);
        self
    }
}

/// Called at every recorded point with the normalized time and `ρ`.
pub trait Observer {
    fn observe(&mut self, s: f64, rho: &CMatrix);
}

impl<F: FnMut(f64, &CMatrix)> Observer for F {
    fn observe(&mut self, s: f64, rho: &CMatrix) {
        self(s, rho)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub s: f64,
    /// Weight on the ground space of the final Hamiltonian.
    pub p_ground: f64,
    /// `Tr ρH(s)`.
    pub energy: f64,
    pub trace: f64,
    pub min_eig: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    pub steps: usize,
    /// Physical time step.
    pub time_step: f64,
    pub max_trace_drift: f64,
    pub max_hermiticity_error: f64,
    /// Smallest eigenvalue of `ρ` over the recorded points.
    pub min_eigenvalue: f64,
    pub initial_purity: f64,
    pub final_purity: f64,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub final_state: CMatrix,
    /// `ρ_kk` in the computational basis.
    pub populations: Vec<f64>,
    /// Weight on the ground space of `H(1)`.
    pub p_ground: f64,
    /// Dimension of the final ground space.
    pub ground_rank: usize,
    /// Basis states that minimize the problem's Ising energy.
    pub solution_states: Vec<usize>,
    /// Total population on `solution_states`.
    pub p_solution: f64,
    pub trajectory: Vec<TrajectoryPoint>,
    pub diagnostics: Diagnostics,
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(rho: &CMatrix) -> f64 {
    hermitian_part(rho).symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// `Σ_g gᵀ ρ g` over the columns of `ground`.
pub fn ground_probability(ground: &DMatrix<f64>, rho: &CMatrix) -> f64 {
    let g = ground.map(|v| Complex64::new(v, 0.0));
    (g.transpose() * rho * &g).trace().re
}

/// Basis states of minimal problem energy, ignoring the schedule.
pub fn problem_ground_states(spec: &AnnealSpec, relative_tolerance: f64) -> Vec<usize> {
    let energies: Vec<f64> = (0..spec.dimension()).map(|k| spec.model().energy_of_mask(k as u64)).collect();
    let lo = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let eps = relative_tolerance * (hi - lo);
    (0..energies.len()).filter(|&k| energies[k] - lo <= eps).collect()
}

fn max_asymmetry(rho: &CMatrix) -> f64 {
    (rho - rho.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn purity(rho: &CMatrix) -> f64 {
    rho.iter().map(|c| c.norm_sqr()).sum()
}

/// Everything the right-hand side needs at one instant.
struct Frame {
    h: DMatrix<f64>,
    eigen: Option<(Eigen, TransitionRates)>,
    fields: Vec<f64>,
}

struct Propagator<'a> {
    spec: &'a AnnealSpec,
    local_field: LocalField,
    fc: Option<FullCounting>,
    local: Option<LocalDamping>,
}

impl Propagator<'_> {
    fn frame(&self, s: f64) -> Result<Frame, SimError> {
        let h = assemble_hamiltonian(self.spec, s)?;
        let eigen = self.fc.map(|fc| {
            let eig = Eigen::new(&h);
            let rates = fc.rates(&eig.energies, eig.tolerance(fc.relative_tolerance));
            (eig, rates)
        });
        let bare = self.spec.model().fields();
        let fields = match self.local_field {
            LocalField::Bare => bare.to_vec(),
            LocalField::Scheduled => bare.iter().zip(self.spec.amplitudes(s)).map(|(h, (_, b))| h * b).collect(),
        };
        Ok(Frame { h, eigen, fields })
    }

    fn rhs(&self, frame: &Frame, rho: &CMatrix) -> CMatrix {
        let hr = left_multiply(&frame.h, rho);
        let mut out = (&hr - hr.adjoint()) * Complex64::new(0.0, -1.0);
        if let Some((eig, rates)) = &frame.eigen {
            out += apply_rates(eig, rates, rho);
        }
        if let Some(local) = &self.local {
            out += local.apply(&frame.fields, rho);
        }
        out
    }
}

/// Integrates the master equation across the run window with fixed-step RK4.
pub fn run(
    spec: &AnnealSpec,
    decoherence: &DecoherenceConfig,
    options: &RunOptions,
    observers: &mut [&mut dyn Observer],
) -> Result<RunReport, SimError> {
    decoherence.validate()?;
    if options.steps == 0 {
        return Err(SimError::Parameter("at least one step is required"));
    }
    let dim = spec.dimension();
    let propagator = Propagator {
        spec,
        local_field: decoherence.local_field,
        fc: decoherence.full_counting(),
        local: decoherence.local_damping(),
    };

    let h0 = assemble_hamiltonian(spec, 0.0)?;
    let mut rho = match &options.initial {
        InitialState::Gibbs => gibbs_with(&Eigen::new(&h0), decoherence.beta, decoherence.relative_tolerance),
        InitialState::Ground => gibbs_with(&Eigen::new(&h0), f64::INFINITY, decoherence.relative_tolerance),
        InitialState::Basis(k) => {
            if *k >= dim {
                return Err(SimError::Dimension("basis state outside the Hilbert space"));
            }
            let mut rho = CMatrix::zeros(dim, dim);
            rho[(*k, *k)] = Complex64::new(1.0, 0.0);
            rho
        }
        InitialState::Density(rho) => {
            if rho.nrows() != dim || rho.ncols() != dim {
                return Err(SimError::Dimension("initial density matrix"));
            }
            rho.clone()
        }
    };

    let h_final = assemble_hamiltonian(spec, 1.0)?;
    let final_eigen = Eigen::new(&h_final);
    let rank = final_eigen.ground_multiplicity(decoherence.relative_tolerance);
    let ground = final_eigen.vectors.columns(0, rank).into_owned();

    let ds = 1.0 / options.steps as f64;
    let dt = spec.total_time() * ds;
    let mut diagnostics = Diagnostics {
        steps: options.steps,
        time_step: dt,
        max_trace_drift: 0.0,
        max_hermiticity_error: 0.0,
        min_eigenvalue: f64::INFINITY,
        initial_purity: purity(&rho),
        final_purity: 0.0,
    };
    let mut trajectory = Vec::new();

    let mut record = |s: f64, rho: &CMatrix, h: &DMatrix<f64>, diagnostics: &mut Diagnostics| -> Result<(), SimError> {
        let min_eig = min_eigenvalue(rho);
        diagnostics.min_eigenvalue = diagnostics.min_eigenvalue.min(min_eig);
        if min_eig < -options.negativity_limit {
            return Err(SimError::Negativity { s, min_eig });
        }
        let point = TrajectoryPoint {
            s,
            p_ground: ground_probability(&ground, rho),
            energy: rho.iter().zip(h.iter()).map(|(r, h)| r.re * h).sum(),
            trace: rho.trace().re,
            min_eig,
        };
        trajectory.push(point);
        for observer in observers.iter_mut() {
            observer.observe(s, rho);
        }
        Ok(())
    };

    let mut start = propagator.frame(0.0)?;
    record(0.0, &rho, &start.h, &mut diagnostics)?;
    let half = Complex64::new(0.5 * dt, 0.0);
    let full = Complex64::new(dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    for step in 0..options.steps {
        let s0 = step as f64 * ds;
        let s1 = (step + 1) as f64 * ds;
        let mid = propagator.frame(0.5 * (s0 + s1))?;
        let end = propagator.frame(s1)?;
        let k1 = propagator.rhs(&start, &rho);
        let k2 = propagator.rhs(&mid, &(&rho + &k1 * half));
        let k3 = propagator.rhs(&mid, &(&rho + &k2 * half));
        let k4 = propagator.rhs(&end, &(&rho + &k3 * full));
        rho += (k1 + (k2 + k3) * two + k4) * sixth;

        let drift = (rho.trace().re - 1.0).abs();
        diagnostics.max_trace_drift = diagnostics.max_trace_drift.max(drift);
        if drift > options.trace_limit {
            return Err(SimError::TraceDrift { s: s1, drift });
        }
        let asymmetry = max_asymmetry(&rho);
        diagnostics.max_hermiticity_error = diagnostics.max_hermiticity_error.max(asymmetry);
        if asymmetry > options.hermiticity_limit {
            return Err(SimError::Hermiticity { s: s1, error: asymmetry });
        }
        let last = step + 1 == options.steps;
        if last || (step + 1) % options.record_every == 0 {
            record(s1, &rho, &end.h, &mut diagnostics)?;
        }
        start = end;
    }
    diagnostics.final_purity = purity(&rho);

    let populations = populations(&rho);
    let solution_states = problem_ground_states(spec, decoherence.relative_tolerance);
    Ok(RunReport {
        p_solution: solution_states.iter().map(|&k| populations[k]).sum(),
        solution_states,
        populations,
        p_ground: ground_probability(&ground, &rho),
        ground_rank: rank,
        final_state: rho,
        trajectory,
        diagnostics,
    })
}
