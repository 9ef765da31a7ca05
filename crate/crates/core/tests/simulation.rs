use num_complex::Complex64;
use qanneal_core::ising::IsingModel;
use qanneal_core::mds::{linear_graph, mds_qubo_closed_form};
use qanneal_core::schedule::{OffsetAssignment, OffsetMode, ScheduleTable};
use qanneal_core::sim::{
    assemble_hamiltonian, offset_sweep, run, sweep_jobs, AnnealSpec, CMatrix, DecoherenceConfig, InitialState,
    RunOptions, SweepJob,
};
use qanneal_core::verify;
use qanneal_core::{qubo_to_ising, Rational, SimError};

fn g2() -> IsingModel<f64> {
    qubo_to_ising(&mds_qubo_closed_form(&linear_graph(2), Rational::from_integer(2)).unwrap()).to_f64()
}

fn spec(model: IsingModel<f64>, time: f64) -> AnnealSpec {
    let n = model.num_spins();
    AnnealSpec::new(model, ScheduleTable::linear(5.0, 5.0).unwrap(), OffsetAssignment::zeros(n), time).unwrap()
}

#[test]
fn hamiltonian_is_symmetric_across_the_window() {
    let deltas = vec![-0.05, 0.0, -0.02, 0.0];
    let s = spec(g2(), 1.0).with_offsets(OffsetAssignment::explicit(deltas, false).unwrap()).unwrap();
    for k in 0..=20 {
        let h = assemble_hamiltonian(&s, k as f64 / 20.0).unwrap();
        assert_eq!(h, h.transpose());
        assert_eq!(h.nrows(), 16);
    }
}

#[test]
fn transverse_field_oscillates_as_cos_power() {
    let err = verify::transverse_oscillation_error(5, 5.0, 4000).unwrap();
    assert!(err < 1e-6, "{err}");
    let err = verify::transverse_oscillation_error(2, 1.0, 2000).unwrap();
    assert!(err < 1e-6, "{err}");
}

#[test]
fn gibbs_state_of_transverse_field() {
    assert!(verify::gibbs_distribution_error(5, 5.0, 0.34) < 1e-12);
    assert!(verify::gibbs_distribution_error(3, 1.0, 2.0) < 1e-12);
}

#[test]
fn closed_anneal_of_g2_finds_the_ground_space() {
    let s = spec(g2(), 1000.0);
    let opts = RunOptions::with_time_step(&s, 0.02).initial(InitialState::Ground);
    let r = run(&s, &DecoherenceConfig::closed(f64::INFINITY), &opts, &mut []).unwrap();
    assert_eq!(r.ground_rank, 2);
    assert!(r.p_ground > 0.99, "{}", r.p_ground);
    // symmetric problem, zero offsets: both dominating sets equally likely
    assert_eq!(r.solution_states, vec![0b0001, 0b0010]);
    assert!((r.populations[0b0001] - r.populations[0b0010]).abs() < 1e-6);
    // unitary limit keeps the state pure
    assert!((r.diagnostics.final_purity - r.diagnostics.initial_purity).abs() < 1e-6);
}

#[test]
fn integrity_limits_hold_on_a_dissipative_run() {
    let s = spec(g2(), 100.0);
    let r = run(&s, &DecoherenceConfig::paper_preset(), &RunOptions::with_time_step(&s, 0.02), &mut []).unwrap();
    assert!(r.diagnostics.max_trace_drift < 1e-6);
    assert!(r.diagnostics.max_hermiticity_error < 1e-10);
    assert!(r.diagnostics.min_eigenvalue > -1e-8);
    assert!(r.diagnostics.final_purity < r.diagnostics.initial_purity);
    assert!(r.trajectory.iter().all(|p| (p.trace - 1.0).abs() < 1e-6));
    assert_eq!(r.trajectory.first().unwrap().s, 0.0);
    assert_eq!(r.trajectory.last().unwrap().s, 1.0);
}

#[test]
fn unstable_step_aborts_instead_of_renormalizing() {
    let s = spec(g2(), 1000.0);
    let err = run(&s, &DecoherenceConfig::closed(1.0), &RunOptions::with_time_step(&s, 0.2), &mut []).unwrap_err();
    assert!(matches!(err, SimError::TraceDrift { .. } | SimError::Negativity { .. } | SimError::Hermiticity { .. }), "{err}");
}

#[test]
fn observers_see_every_recorded_point() {
    let s = spec(g2(), 10.0);
    let mut seen = Vec::new();
    let mut obs = |t: f64, rho: &CMatrix| seen.push((t, rho.trace()));
    let r = run(&s, &DecoherenceConfig::closed(0.3), &RunOptions::new(500).record_every(50), &mut [&mut obs]).unwrap();
    assert_eq!(seen.len(), 11);
    assert_eq!(r.trajectory.len(), 11);
    assert!(seen.iter().all(|(_, tr)| (*tr - Complex64::new(1.0, 0.0)).norm() < 1e-9));
}

#[test]
fn initial_states_are_validated() {
    let s = spec(g2(), 1.0);
    let bad = RunOptions::new(10).initial(InitialState::Basis(16));
    assert!(run(&s, &DecoherenceConfig::closed(1.0), &bad, &mut []).is_err());
    let wrong = RunOptions::new(10).initial(InitialState::Density(CMatrix::identity(4, 4)));
    assert!(run(&s, &DecoherenceConfig::closed(1.0), &wrong, &mut []).is_err());
}

#[test]
fn offset_on_one_qubit_lifts_the_degeneracy() {
    assert_eq!(verify::offset_lifting_winner(0, -0.05, 0.02).unwrap(), 0b101);
    assert_eq!(verify::offset_lifting_winner(1, -0.05, 0.02).unwrap(), 0b110);
}

#[test]
fn detailed_balance_and_its_fault_injection() {
    for channel in [verify::Channel::FullCounting, verify::Channel::Local] {
        assert!(verify::detailed_balance(channel, 1.0).passed);
        assert!(!verify::detailed_balance(channel, 1.1).passed);
    }
}

#[test]
fn sweep_job_order() {
    let jobs = sweep_jobs(&[-0.01, -0.02, -0.05], &[OffsetMode::StrongDelay, OffsetMode::WeakDelay]);
    assert_eq!(jobs.len(), 7);
    assert_eq!(jobs[0], SweepJob::baseline());
    assert_eq!(jobs[1], SweepJob { mode: OffsetMode::StrongDelay, magnitude: -0.01 });
    assert_eq!(jobs[6], SweepJob { mode: OffsetMode::WeakDelay, magnitude: -0.05 });
    assert_eq!(sweep_jobs(&[], &[OffsetMode::StrongDelay]), vec![SweepJob::baseline()]);
}

#[test]
fn sweep_baseline_equals_plain_run_and_modes_differ() {
    let s = spec(g2(), 20.0);
    let deco = DecoherenceConfig::paper_preset();
    let opts = RunOptions::with_time_step(&s, 0.02);
    let rows = offset_sweep(&s, &[-0.05], &[OffsetMode::StrongDelay, OffsetMode::WeakDelay], &deco, &opts).unwrap();
    let plain = run(&s, &deco, &opts, &mut []).unwrap();
    assert_eq!(rows[0].report.populations, plain.populations);
    assert_ne!(rows[1].report.populations, rows[2].report.populations);
    assert_eq!(rows[1].report.solution_states, vec![0b0001, 0b0010]);
}

#[test]
fn positive_offsets_are_rejected_by_the_sweep() {
    let s = spec(g2(), 1.0);
    let r = offset_sweep(&s, &[0.01], &[OffsetMode::StrongDelay], &DecoherenceConfig::closed(1.0), &RunOptions::new(10));
    assert!(r.is_err());
}

#[test]
fn offsets_beyond_the_extension_are_rejected() {
    let table = ScheduleTable::linear(5.0, 5.0).unwrap().extend(0.1).unwrap();
    let far = OffsetAssignment::explicit(vec![-0.2, 0.0, 0.0, 0.0], false).unwrap();
    assert!(AnnealSpec::new(g2(), table, far, 1.0).is_err());
}
