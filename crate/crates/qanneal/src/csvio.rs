//! CSV tables: schedules in, trajectories, sweeps and energy tables out.

use std::collections::BTreeSet;

use qanneal_core::oracle::SpectrumReport;
use qanneal_core::schedule::ScheduleTable;
use qanneal_core::sim::{SweepRow, TrajectoryPoint};
use qanneal_core::Rational;
use serde::Deserialize;

use crate::error::CliError;
use crate::formats::{bit_string, Exact};

#[derive(Deserialize)]
struct ScheduleRecord {
    s: f64,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: f64,
}

/// Reads `s,A,B` rows.
pub fn read_schedule(text: &str) -> Result<ScheduleTable, CliError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let (mut s, mut a, mut b) = (Vec::new(), Vec::new(), Vec::new());
    for record in reader.deserialize() {
        let r: ScheduleRecord = record?;
        s.push(r.s);
        a.push(r.a);
        b.push(r.b);
    }
    Ok(ScheduleTable::new(s, a, b)?)
}

pub fn write_schedule(table: &ScheduleTable) -> String {
    let mut out = String::from("s,A,B\n");
    for ((s, a), b) in table.knots().iter().zip(table.a_values()).zip(table.b_values()) {
        out.push_str(&format!("{s},{a},{b}\n"));
    }
    out
}

pub fn write_trajectory(points: &[TrajectoryPoint]) -> String {
    let mut out = String::from("s,p_ground,energy,trace,min_eig\n");
    for p in points {
        out.push_str(&format!("{},{},{},{},{}\n", p.s, p.p_ground, p.energy, p.trace, p.min_eig));
    }
    out
}

/// Which probability fills the `p_ground` column of a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroundMeasure {
    /// Ground space of the final annealing Hamiltonian.
    #[default]
    Hamiltonian,
    /// Basis states that minimize the problem energy.
    Solution,
}

impl GroundMeasure {
    pub fn pick(self, row: &SweepRow) -> f64 {
        match self {
            GroundMeasure::Hamiltonian => row.report.p_ground,
            GroundMeasure::Solution => row.report.p_solution,
        }
    }
}

/// `mode,magnitude,p_ground,p_state_*`, one column for every basis state
/// whose population exceeds `threshold` in some row.
pub fn write_sweep(rows: &[SweepRow], n: usize, measure: GroundMeasure, threshold: f64) -> String {
    let states: BTreeSet<usize> = rows
        .iter()
        .flat_map(|r| r.report.populations.iter().enumerate().filter(|(_, &p)| p > threshold).map(|(k, _)| k))
        .collect();
    let mut out = String::from("mode,magnitude,p_ground");
    for &k in &states {
        out.push_str(&format!(",p_state_{}", bit_string(k, n)));
    }
    out.push('\n');
    for row in rows {
        out.push_str(&format!("{},{},{}", row.job.mode.tag(), row.job.magnitude, measure.pick(row)));
        for &k in &states {
            out.push_str(&format!(",{}", row.report.populations[k]));
        }
        out.push('\n');
    }
    out
}

pub fn write_energy_table(report: &SpectrumReport<Rational>) -> String {
    let mut out = String::from("energy,degeneracy\n");
    for level in &report.levels {
        out.push_str(&format!("{},{}\n", Exact(level.energy), level.degeneracy));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_round_trip() {
        let t = ScheduleTable::new(vec![0.0, 0.3, 1.0], vec![5.0, 2.0, 0.0], vec![0.0, 1.5, 6.0]).unwrap();
        assert_eq!(read_schedule(&write_schedule(&t)).unwrap(), t);
    }

    #[test]
    fn schedule_errors_are_input_errors() {
        let err = read_schedule("s,A,B\n0,1,0\n0.5,x,1\n1,0,1\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("line 3") || err.to_string().contains("record 2"), "{err}");
        assert!(read_schedule("s,A,B\n0.1,1,0\n1,0,1\n").is_err());
    }
}
