//! Files, sweeps and the `qanneal` command line on top of [`qanneal_core`].
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod csvio;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod parallel;
pub mod random;

pub use qanneal_core as core;
