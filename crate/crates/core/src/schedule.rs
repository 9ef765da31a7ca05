//! Annealing schedules `A(s)`, `B(s)` and per-qubit offsets.
//!
//! An offset `δ` shifts a qubit's schedule argument, `s → s + δ`; negative
//! offsets delay that qubit. Outside the tabulated range the schedule is
//! continued linearly from the outermost segment and clipped at zero.

use alloc::vec::Vec;

use crate::error::ScheduleError;
use crate::ising::FieldGroups;

/// Default amplitude of both `A` and `B` for the synthetic linear schedule.
pub const DEFAULT_AMPLITUDE: f64 = 5.0;

/// Piecewise-linear schedule over normalized time.
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleTable {
    knots: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    time_scale: f64,
    offset_bound: Option<f64>,
}

impl ScheduleTable {
    pub fn new(knots: Vec<f64>, a: Vec<f64>, b: Vec<f64>) -> Result<Self, ScheduleError> {
        if knots.len() != a.len() || knots.len() != b.len() {
            return Err(ScheduleError::Shape);
        }
        if knots.len() < 2 {
            return Err(ScheduleError::TooFewKnots);
        }
        let ordered = knots.windows(2).all(|w| w[0] < w[1]);
        if knots[0] != 0.0 || knots[knots.len() - 1] != 1.0 || !ordered {
            return Err(ScheduleError::BadKnots);
        }
        if a.iter().chain(&b).any(|v| !v.is_finite() || *v < 0.0) {
            return Err(ScheduleError::BadAmplitude);
        }
        Ok(Self { knots, a, b, time_scale: 1.0, offset_bound: None })
    }

    /// `A(s) = a_max (1 − s)`, `B(s) = b_max s`.
    pub fn linear(a_max: f64, b_max: f64) -> Result<Self, ScheduleError> {
        Self::new(alloc::vec![0.0, 1.0], alloc::vec![a_max, 0.0], alloc::vec![0.0, b_max])
    }

    /// Time-independent amplitudes.
    pub fn constant(a: f64, b: f64) -> Result<Self, ScheduleError> {
        Self::new(alloc::vec![0.0, 1.0], alloc::vec![a, a], alloc::vec![b, b])
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn a_values(&self) -> &[f64] {
        &self.a
    }

    pub fn b_values(&self) -> &[f64] {
        &self.b
    }

    /// Ratio of the run window to the nominal anneal: `1` for plain tables,
    /// `1 + 2f` after [`extend`](Self::extend).
    pub fn time_scale(&self) -> f64 {
        self.time_scale
    }

    /// Largest admissible `|δ|`, if the table imposes one.
    pub fn offset_bound(&self) -> Option<f64> {
        self.offset_bound
    }

    /// `A` non-increasing and `B` non-decreasing. Tabulated data may violate
    /// this; callers decide whether to warn.
    pub fn is_monotone(&self) -> bool {
        self.a.windows(2).all(|w| w[1] <= w[0]) && self.b.windows(2).all(|w| w[1] >= w[0])
    }

    /// `(A, B)` seen by a qubit with offset `δ` at window position `s`.
    pub fn evaluate(&self, s: f64, delta: f64) -> (f64, f64) {
        let u = s + delta / self.time_scale;
        let last = self.knots.len() - 1;
        let segment = if u <= self.knots[0] {
            0
        } else if u >= self.knots[last] {
            last - 1
        } else {
            self.knots.partition_point(|&k| k <= u) - 1
        };
        let (s0, s1) = (self.knots[segment], self.knots[segment + 1]);
        let t = (u - s0) / (s1 - s0);
        let lerp = |v: &[f64]| v[segment] + t * (v[segment + 1] - v[segment]);
        (lerp(&self.a).max(0.0), lerp(&self.b).max(0.0))
    }

    /// Pads the window by `fraction` of the nominal anneal at both ends,
    /// holding the initial and final amplitudes, so that every qubit with
    /// `|δ| ≤ fraction` starts and ends on the same `(A, B)`.
    ///
    /// The returned table is again normalized to `[0, 1]`; the physical run
    /// time grows by `1 + 2·fraction`.
    pub fn extend(&self, fraction: f64) -> Result<Self, ScheduleError> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(ScheduleError::BadFraction(fraction));
        }
        let width = 1.0 + 2.0 * fraction;
        let mut knots = Vec::with_capacity(self.knots.len() + 2);
        knots.push(0.0);
        knots.extend(self.knots.iter().map(|k| (k + fraction) / width));
        knots.push(1.0);
        let pad = |v: &[f64]| {
            let mut out = Vec::with_capacity(v.len() + 2);
            out.push(v[0]);
            out.extend_from_slice(v);
            out.push(v[v.len() - 1]);
            out
        };
        let bound = self.offset_bound.unwrap_or(0.0) + fraction * self.time_scale;
        Ok(Self {
            knots,
            a: pad(&self.a),
            b: pad(&self.b),
            time_scale: self.time_scale * width,
            offset_bound: Some(bound),
        })
    }

    pub fn check_offset(&self, qubit: usize, offset: f64) -> Result<(), ScheduleError> {
        match self.offset_bound {
            Some(bound) if offset.abs() > bound * (1.0 + 1e-12) => {
                Err(ScheduleError::OffsetOutOfBounds { qubit, offset, bound })
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OffsetMode {
    /// Delay the qubits with strong fields (`s`).
    StrongDelay,
    /// Delay the qubits with weak fields (`w`).
    WeakDelay,
    None,
}

impl OffsetMode {
    pub fn tag(self) -> &'static str {
        match self {
            OffsetMode::StrongDelay => "s",
            OffsetMode::WeakDelay => "w",
            OffsetMode::None => "none",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "s" | "strong" => Some(OffsetMode::StrongDelay),
            "w" | "weak" => Some(OffsetMode::WeakDelay),
            "none" | "baseline" => Some(OffsetMode::None),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupLabel {
    Strong,
    Weak,
    None,
}

/// Per-qubit schedule offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct OffsetAssignment {
    deltas: Vec<f64>,
    groups: Vec<GroupLabel>,
}

impl OffsetAssignment {
    pub fn zeros(n: usize) -> Self {
        Self { deltas: alloc::vec![0.0; n], groups: alloc::vec![GroupLabel::None; n] }
    }

    /// Explicit offsets; positive entries need `allow_positive`.
    pub fn explicit(deltas: Vec<f64>, allow_positive: bool) -> Result<Self, ScheduleError> {
        if let Some(&d) = deltas.iter().find(|d| !d.is_finite() || (**d > 0.0 && !allow_positive)) {
            return Err(ScheduleError::PositiveOffset(d));
        }
        let groups = alloc::vec![GroupLabel::None; deltas.len()];
        Ok(Self { deltas, groups })
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn groups(&self) -> &[GroupLabel] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }
}

/// Offsets `magnitude` on the delayed group and zero elsewhere.
pub fn assign_offsets<T>(
    groups: &FieldGroups<T>,
    magnitude: f64,
    mode: OffsetMode,
    allow_positive: bool,
) -> Result<OffsetAssignment, ScheduleError> {
    if !magnitude.is_finite() || (magnitude > 0.0 && !allow_positive) {
        return Err(ScheduleError::PositiveOffset(magnitude));
    }
    let n = groups.strong.len() + groups.weak.len();
    let mut labels = alloc::vec![GroupLabel::Weak; n];
    for &i in &groups.strong {
        labels[i] = GroupLabel::Strong;
    }
    let delayed = match mode {
        OffsetMode::StrongDelay => Some(GroupLabel::Strong),
        OffsetMode::WeakDelay => Some(GroupLabel::Weak),
        OffsetMode::None => None,
    };
    let deltas = labels
        .iter()
        .map(|&l| if Some(l) == delayed { magnitude } else { 0.0 })
        .collect();
    Ok(OffsetAssignment { deltas, groups: labels })
}
