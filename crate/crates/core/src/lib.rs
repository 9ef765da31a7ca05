//! Compile integer programs into QUBO/Ising form and simulate their solution
//! on an idealized quantum annealer.
//!
//! The pipeline is:
//!
//! 1. [`ilp`]: integer program, slack variables, bit encoding.
//! 2. [`qubo`]: exact compilation to `Ψᵀ Q Ψ + C` and decoding.
//! 3. [`ising`]: spin form, field-strength grouping.
//! 4. [`schedule`]: `A(s)`, `B(s)` with per-qubit offsets.
//! 5. [`sim`]: Lindblad evolution of the density matrix.
//!
//! [`mds`] expresses minimum dominating sets in this language and [`oracle`]
//! provides brute-force ground truth. The crate is `no_std` with `alloc`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod ilp;
pub mod ising;
pub mod mds;
pub mod oracle;
pub mod qubo;
pub mod scalar;
pub mod schedule;
pub mod sim;
pub mod verify;

pub use error::{IlpError, OracleError, PipelineError, ScheduleError, SimError};
pub use ilp::{build_encoding, introduce_slacks, BinaryEncoding, BitLabel, BitRole, IntegerLinearProgram, SlackSpec};
pub use ising::{ising_to_qubo, qubo_to_ising, split_field_groups, FieldGroups, IsingModel};
pub use mds::{linear_graph, mds_analytics, mds_qubo_closed_form, mds_to_ilp, qubit_count, Graph};
pub use oracle::{enumerate_ilp, enumerate_ising, enumerate_qubo, mds_subset_oracle, SpectrumReport};
pub use qubo::{compile_to_qubo, decode_solution, penalty_floor, Decoded, QuboProblem};
pub use scalar::Rational;
pub use schedule::{assign_offsets, OffsetAssignment, OffsetMode, ScheduleTable};
pub use sim::{assemble_hamiltonian, gibbs_state, offset_sweep, run, AnnealSpec, DecoherenceConfig, RunOptions, RunReport};
