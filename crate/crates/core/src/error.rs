use thiserror::Error;

use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IlpError {
    #[error("program has no variables")]
    Empty,
    #[error("{what}: expected length {expected}, found {found}")]
    Shape { what: &'static str, expected: usize, found: usize },
    #[error("bit width {0} outside 1..=62")]
    BitWidth(u32),
    #[error("constraint row {row} can never be met: largest attainable slack is {max_slack}")]
    Infeasible { row: usize, max_slack: Rational },
    #[error("penalty must be positive, got {0}")]
    NonPositivePenalty(Rational),
    #[error("integer overflow while sizing slack variables")]
    Overflow,
    #[error("value {0} has no exact rational representation")]
    Inexact(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration over {bits} bits exceeds the cap of {cap}")]
    CapExceeded { bits: usize, cap: usize },
    #[error("no feasible point in the integer box")]
    NoFeasiblePoint,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("schedule needs at least two knots")]
    TooFewKnots,
    #[error("knots must start at 0, end at 1 and increase strictly")]
    BadKnots,
    #[error("schedule amplitudes must be finite and non-negative")]
    BadAmplitude,
    #[error("column lengths differ")]
    Shape,
    #[error("extension fraction {0} outside (0, 1)")]
    BadFraction(f64),
    #[error("offset {offset} on qubit {qubit} exceeds the schedule's bound {bound}")]
    OffsetOutOfBounds { qubit: usize, offset: f64, bound: f64 },
    #[error("positive offset {0} requires an explicit override")]
    PositiveOffset(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("{0} qubits exceed the simulator limit of {1}")]
    TooManyQubits(usize, usize),
    #[error("invalid parameter: {0}")]
    Parameter(&'static str),
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("negative amplitude under the coupling square root at s = {0}")]
    NegativeAmplitude(f64),
    #[error("trace drifted by {drift:e} at s = {s}")]
    TraceDrift { s: f64, drift: f64 },
    #[error("density matrix eigenvalue {min_eig:e} at s = {s}")]
    Negativity { s: f64, min_eig: f64 },
    #[error("density matrix lost hermiticity ({error:e}) at s = {s}")]
    Hermiticity { s: f64, error: f64 },
}

/// Failure anywhere between an integer program and its brute-force spectrum.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Ilp(#[from] IlpError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
