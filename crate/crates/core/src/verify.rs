//! Self-checks with known answers, shared by the test suites and the CLI.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{PipelineError, SimError};
use crate::ilp::{build_encoding, introduce_slacks, IntegerLinearProgram};
use crate::ising::{qubo_to_ising, IsingModel};
use crate::oracle::{decoded_minimizers, enumerate_ilp, enumerate_qubo};
use crate::qubo::{compile_to_qubo, penalty_floor, QuboProblem};
use crate::scalar::Rational;
use crate::schedule::{OffsetAssignment, ScheduleTable, DEFAULT_AMPLITUDE};
use crate::sim::{
    gibbs_state, preset, run, AnnealSpec, CMatrix, DecoherenceConfig, Eigen, InitialState, RunOptions,
};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }

    fn error(name: &'static str, err: SimError) -> Self {
        Self::new(name, false, format!("{err}"))
    }
}

/// QUBO minimizers against ILP optima for one program.
#[derive(Clone, Debug, PartialEq)]
pub struct Equivalence {
    pub penalty: Rational,
    pub num_bits: usize,
    pub objective: Rational,
    pub qubo_ground: Rational,
    pub ilp_optima: Vec<Vec<i128>>,
    pub qubo_optima: Vec<Vec<i128>>,
    /// Every QUBO ground configuration decodes to a feasible point.
    pub all_feasible: bool,
}

impl Equivalence {
    pub fn matches(&self) -> bool {
        self.all_feasible && self.objective == self.qubo_ground && self.ilp_optima == self.qubo_optima
    }
}

/// Compiles `ilp` at its penalty floor and compares both brute-force optima.
pub fn compile_and_compare(ilp: &IntegerLinearProgram, cap: usize) -> Result<Equivalence, PipelineError> {
    let enc = build_encoding(ilp, &introduce_slacks(ilp)?)?;
    let penalty = penalty_floor(ilp);
    let qubo = compile_to_qubo(ilp, &enc, penalty)?;
    let spectrum = enumerate_qubo(&qubo, cap)?;
    let optima = enumerate_ilp(ilp, cap)?;
    let all_feasible = spectrum.ground_configs.iter().all(|&m| {
        let (x, s) = enc.decode(&crate::qubo::mask_to_bits(m, enc.num_bits()));
        ilp.residuals(&x, &s).iter().all(|r| *r == Rational::from_integer(0))
    });
    Ok(Equivalence {
        penalty,
        num_bits: enc.num_bits(),
        objective: optima.objective,
        qubo_ground: spectrum.ground_energy(),
        ilp_optima: optima.optima,
        qubo_optima: decoded_minimizers(&enc, &spectrum),
        all_feasible,
    })
}

/// Runs [`compile_and_compare`] over `programs` and counts mismatches.
pub fn compiler_equivalence(programs: &[IntegerLinearProgram], cap: usize) -> CheckOutcome {
    const NAME: &str = "compiler/oracle equivalence";
    let mut mismatches = Vec::new();
    for (i, ilp) in programs.iter().enumerate() {
        match compile_and_compare(ilp, cap) {
            Ok(eq) if eq.matches() => {}
            Ok(_) => mismatches.push(format!("#{i}")),
            Err(e) => mismatches.push(format!("#{i}: {e}")),
        }
    }
    let detail = if mismatches.is_empty() {
        format!("{} programs, zero mismatches", programs.len())
    } else {
        format!("{} of {} mismatched: {}", mismatches.len(), programs.len(), mismatches.join(", "))
    };
    CheckOutcome::new(NAME, mismatches.is_empty(), detail)
}

fn constant_spec(model: IsingModel<f64>, a: f64, b: f64, time: f64) -> Result<AnnealSpec, SimError> {
    let n = model.num_spins();
    AnnealSpec::new(model, ScheduleTable::constant(a, b)?, OffsetAssignment::zeros(n), time)
}

/// Largest deviation of `⟨0…0|ρ(t)|0…0⟩` from `cos^{2n}(A t)` over one
/// period under a constant transverse field.
pub fn transverse_oscillation_error(n: usize, amplitude: f64, steps: usize) -> Result<f64, SimError> {
    let model = IsingModel::new(vec![0.0; n], &[], 0.0).map_err(|_| SimError::Parameter("qubit count"))?;
    let period = core::f64::consts::PI / amplitude;
    let spec = constant_spec(model, amplitude, 0.0, period)?;
    let options = RunOptions::new(steps).record_every(1).initial(InitialState::Basis(0));
    let mut worst = 0.0f64;
    let mut observer = |s: f64, rho: &CMatrix| {
        let expected = Float::powi(Float::cos(amplitude * s * period), 2 * n as i32);
        worst = worst.max((rho[(0, 0)].re - expected).abs());
    };
    run(&spec, &DecoherenceConfig::closed(1.0), &options, &mut [&mut observer])?;
    Ok(worst)
}

pub fn transverse_oscillation() -> CheckOutcome {
    const NAME: &str = "transverse-field oscillation";
    match transverse_oscillation_error(5, DEFAULT_AMPLITUDE, 4000) {
        Ok(err) => CheckOutcome::new(NAME, err < 1e-6, format!("n = 5, max |P0 - cos^10(At)| = {err:.3e}")),
        Err(e) => CheckOutcome::error(NAME, e),
    }
}

/// Largest entrywise deviation of the thermal state of `−A Σσ^x` from the
/// product of single-qubit states `(1 + tanh(βA) σ^x)/2`, together with the
/// deviation of its spectrum from the binomial Boltzmann weights.
pub fn gibbs_distribution_error(n: usize, amplitude: f64, beta: f64) -> f64 {
    let dim = 1usize << n;
    let transverse = vec![amplitude; n];
    let h = crate::sim::build_hamiltonian(n, &transverse, &vec![0.0; n], &[]);
    let rho = gibbs_state(&h, beta);
    let t = Float::tanh(beta * amplitude);
    let mut worst = 0.0f64;
    for k in 0..dim {
        for l in 0..dim {
            let flips = (k ^ l).count_ones() as i32;
            let expected = Float::powi(t, flips) / dim as f64;
            worst = worst.max((rho[(k, l)] - num_complex::Complex64::new(expected, 0.0)).norm());
        }
    }
    // Level E_k = −A(n − 2k) carries binomial(n, k) states.
    let mut weights = Vec::with_capacity(dim);
    let mut binomial = 1.0;
    for k in 0..=n {
        let energy = -amplitude * (n as f64 - 2.0 * k as f64);
        let w = Float::exp(-beta * (energy + amplitude * n as f64));
        weights.extend(core::iter::repeat_n(w, binomial as usize));
        binomial = binomial * (n - k) as f64 / (k + 1) as f64;
    }
    let z: f64 = weights.iter().sum();
    let mut probabilities: Vec<f64> = weights.iter().map(|w| w / z).collect();
    probabilities.sort_by(|a, b| b.total_cmp(a));
    let mut spectrum: Vec<f64> = rho.map(|c| c.re).symmetric_eigenvalues().iter().copied().collect();
    spectrum.sort_by(|a, b| b.total_cmp(a));
    for (p, e) in probabilities.iter().zip(&spectrum) {
        worst = worst.max((p - e).abs());
    }
    worst
}

pub fn gibbs_distribution() -> CheckOutcome {
    let beta = crate::sim::units::beta_from_millikelvin(preset::TEMPERATURE_MK);
    let err = gibbs_distribution_error(5, DEFAULT_AMPLITUDE, beta);
    CheckOutcome::new("Gibbs distribution", err < 1e-9, format!("n = 5, max deviation {err:.3e}"))
}

/// The three-qubit problem whose two ground states `(0,1,1)` and `(1,0,1)`
/// differ only in qubits 0 and 1.
pub fn offset_test_qubo() -> QuboProblem {
    let r = |n: i128, d: i128| Rational::new(n, d);
    let q = nalgebra::DMatrix::from_row_slice(
        3,
        3,
        &[r(-1, 4), r(1, 1), r(0, 1), r(0, 1), r(-1, 4), r(0, 1), r(0, 1), r(0, 1), r(-1, 4)],
    );
    QuboProblem::new(q, r(0, 1))
}

/// Most probable final basis state of the offset test problem with
/// `offset` on `qubit`, annealed closed from the preset thermal state.
pub fn offset_lifting_winner(qubit: usize, offset: f64, time_step: f64) -> Result<usize, SimError> {
    let model = qubo_to_ising(&offset_test_qubo()).to_f64();
    let mut deltas = vec![0.0; 3];
    deltas[qubit] = offset;
    let spec = AnnealSpec::new(
        model,
        ScheduleTable::linear(DEFAULT_AMPLITUDE, DEFAULT_AMPLITUDE)?,
        OffsetAssignment::explicit(deltas, false)?,
        preset::ANNEAL_TIME,
    )?;
    let beta = DecoherenceConfig::paper_preset().beta;
    let report = run(&spec, &DecoherenceConfig::closed(beta), &RunOptions::with_time_step(&spec, time_step), &mut [])?;
    let p = &report.populations;
    Ok((0..p.len()).fold(0, |best, k| if p[k] > p[best] { k } else { best }))
}

/// Bits of `mask` as a tuple-like vector, qubit 0 first.
pub fn basis_bits(mask: usize, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((mask >> i) & 1) as u8).collect()
}

pub fn offset_lifting() -> CheckOutcome {
    const NAME: &str = "offset degeneracy lifting";
    let winners = offset_lifting_winner(0, -0.05, 0.02).and_then(|a| Ok((a, offset_lifting_winner(1, -0.05, 0.02)?)));
    match winners {
        Ok((a, b)) => CheckOutcome::new(
            NAME,
            a == 0b101 && b == 0b110,
            format!("delay q0 -> {:?}, delay q1 -> {:?}", basis_bits(a, 3), basis_bits(b, 3)),
        ),
        Err(e) => CheckOutcome::error(NAME, e),
    }
}

/// Which channel a detailed-balance check isolates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    FullCounting,
    Local,
}

/// Relaxes a static single qubit under one channel and returns the
/// stationary `p_excited/p_ground` next to the expected Boltzmann factor.
///
/// `bias` scales the channel's upward rate; `1` is the physical model.
pub fn detailed_balance_ratio(channel: Channel, bias: f64) -> Result<(f64, f64), SimError> {
    let beta = DecoherenceConfig::paper_preset().beta;
    let field = 0.7;
    let mut deco = DecoherenceConfig::paper_preset();
    deco.fc_rate = 1.0;
    deco.local_rate = 1.0;
    deco.boltzmann_bias = bias;
    let model = IsingModel::new(vec![field], &[], 0.0).map_err(|_| SimError::Parameter("field"))?;
    let (spec, deco) = match channel {
        Channel::FullCounting => (constant_spec(model, 0.4, 1.0, 40.0)?, deco.with_channels(true, false)),
        Channel::Local => (constant_spec(model, 0.0, 1.0, 40.0)?, deco.with_channels(false, true)),
    };
    let report = run(&spec, &deco, &RunOptions::new(4000).initial(InitialState::Basis(1)), &mut [])?;
    let h = crate::sim::assemble_hamiltonian(&spec, 1.0)?;
    match channel {
        Channel::FullCounting => {
            let eig = Eigen::new(&h);
            let pops: Vec<f64> = (0..2)
                .map(|i| {
                    let v = eig.vectors.column(i).map(|x| num_complex::Complex64::new(x, 0.0));
                    (v.adjoint() * &report.final_state * v)[(0, 0)].re
                })
                .collect();
            let gap = eig.energies[1] - eig.energies[0];
            Ok((pops[1] / pops[0], Float::exp(-beta * gap)))
        }
        Channel::Local => {
            // h > 0: bit 0 is the local ground state.
            let p = &report.populations;
            Ok((p[1] / p[0], Float::exp(-2.0 * beta * field)))
        }
    }
}

pub fn detailed_balance(channel: Channel, bias: f64) -> CheckOutcome {
    let name = match channel {
        Channel::FullCounting => "detailed balance (fc)",
        Channel::Local => "detailed balance (local)",
    };
    match detailed_balance_ratio(channel, bias) {
        Ok((observed, expected)) => CheckOutcome::new(
            name,
            (observed - expected).abs() < 1e-6,
            format!("ratio {observed:.9}, expected {expected:.9}"),
        ),
        Err(e) => CheckOutcome::error(name, e),
    }
}

/// Every simulator check plus compiler equivalence on `programs`.
pub fn run_all(programs: &[IntegerLinearProgram], cap: usize) -> Vec<CheckOutcome> {
    vec![
        transverse_oscillation(),
        gibbs_distribution(),
        offset_lifting(),
        compiler_equivalence(programs, cap),
        detailed_balance(Channel::FullCounting, 1.0),
        detailed_balance(Channel::Local, 1.0),
    ]
}
