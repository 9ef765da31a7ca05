//! Ising models and the QUBO ↔ Ising substitution `Ψ = (1 + σ)/2`.
//!
//! Spin `σ = +1` corresponds to bit `Ψ = 1`; configurations are encoded as
//! bit masks with bit `i` holding qubit `i`.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::IlpError;
use crate::qubo::QuboProblem;
use crate::scalar::{rational_from_f64, Energy, Rational};

/// `E(σ) = Σ_{i<j} J_ij σ_i σ_j + Σ_i h_i σ_i + constant`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingModel<T: Energy + 'static> {
    fields: Vec<T>,
    couplers: DMatrix<T>,
    constant: T,
}

impl<T: Energy + 'static> IsingModel<T> {
    /// Couplers are given as `(i, j, J_ij)` triples; `(j, i)` is folded onto
    /// `(i, j)` and repeated pairs accumulate.
    pub fn new(fields: Vec<T>, couplers: &[(usize, usize, T)], constant: T) -> Result<Self, IlpError> {
        let n = fields.len();
        let mut j = DMatrix::from_element(n, n, T::zero());
        for &(a, b, v) in couplers {
            if a >= n || b >= n || a == b {
                return Err(IlpError::Shape { what: "coupler index", expected: n, found: a.max(b) });
            }
            let (lo, hi) = (a.min(b), a.max(b));
            j[(lo, hi)] = j[(lo, hi)] + v;
        }
        Ok(Self { fields, couplers: j, constant })
    }

    pub fn num_spins(&self) -> usize {
        self.fields.len()
    }

    pub fn fields(&self) -> &[T] {
        &self.fields
    }

    /// Coupling `J_ij` for `i < j` (zero otherwise).
    pub fn coupler(&self, i: usize, j: usize) -> T {
        if i < j {
            self.couplers[(i, j)]
        } else {
            T::zero()
        }
    }

    /// Non-zero couplers as `(i, j, J_ij)` with `i < j`.
    pub fn coupler_list(&self) -> Vec<(usize, usize, T)> {
        let n = self.num_spins();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.couplers[(i, j)];
                if v != T::zero() {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    pub fn constant(&self) -> T {
        self.constant
    }

    pub fn energy(&self, spins: &[i8]) -> T {
        let s = |i: usize| T::from_i64(spins[i] as i64);
        let n = self.num_spins();
        let mut e = self.constant;
        for i in 0..n {
            e = e + self.fields[i] * s(i);
            for j in i + 1..n {
                e = e + self.couplers[(i, j)] * s(i) * s(j);
            }
        }
        e
    }

    /// Energy of the configuration whose bit `i` is `Ψ_i = (1 + σ_i)/2`.
    pub fn energy_of_mask(&self, mask: u64) -> T {
        self.energy(&spins_of_mask(mask, self.num_spins()))
    }

    /// Uniform rescaling of fields, couplers and constant.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            fields: self.fields.iter().map(|&h| h * factor).collect(),
            couplers: self.couplers.map(|j| j * factor),
            constant: self.constant * factor,
        }
    }

    pub fn to_f64(&self) -> IsingModel<f64> {
        IsingModel {
            fields: self.fields.iter().map(|h| h.to_f64()).collect(),
            couplers: self.couplers.map(|j| j.to_f64()),
            constant: self.constant.to_f64(),
        }
    }

    /// Largest `|h|`, `|J|` or `|constant|`, used as the level-grouping scale.
    pub fn energy_scale(&self) -> T {
        let mut scale = self.constant.magnitude();
        for &h in &self.fields {
            scale = scale + h.magnitude();
        }
        for j in self.couplers.iter() {
            scale = scale + j.magnitude();
        }
        scale
    }
}

impl IsingModel<f64> {
    /// Exact rational copy; fails for non-finite values.
    pub fn to_exact(&self) -> Result<IsingModel<Rational>, IlpError> {
        let conv = |x: f64| rational_from_f64(x).ok_or(IlpError::Inexact(x));
        let fields = self.fields.iter().map(|&h| conv(h)).collect::<Result<Vec<_>, _>>()?;
        let n = self.num_spins();
        let mut couplers = DMatrix::from_element(n, n, Rational::from_integer(0));
        for i in 0..n {
            for j in i + 1..n {
                couplers[(i, j)] = conv(self.couplers[(i, j)])?;
            }
        }
        Ok(IsingModel { fields, couplers, constant: conv(self.constant)? })
    }
}

pub fn spins_of_mask(mask: u64, n: usize) -> Vec<i8> {
    (0..n).map(|i| if (mask >> i) & 1 == 1 { 1 } else { -1 }).collect()
}

/// Substitutes `Ψ_i = (1 + σ_i)/2` into `Ψᵀ Q Ψ + C`.
pub fn qubo_to_ising(q: &QuboProblem) -> IsingModel<Rational> {
    let n = q.num_bits();
    let m = q.matrix();
    let mut fields = Vec::with_capacity(n);
    let mut constant = q.constant();
    let mut couplers = DMatrix::from_element(n, n, Rational::from_integer(0));
    for i in 0..n {
        let mut h = m[(i, i)].half();
        constant += m[(i, i)].half();
        for j in 0..n {
            if j != i {
                h += m[(i, j)].half();
            }
            if j > i {
                couplers[(i, j)] = m[(i, j)].half();
                constant += m[(i, j)].half();
            }
        }
        fields.push(h);
    }
    IsingModel { fields, couplers, constant }
}

/// Substitutes `σ_i = 2Ψ_i − 1`; the exact inverse of [`qubo_to_ising`].
pub fn ising_to_qubo(model: &IsingModel<Rational>) -> QuboProblem {
    let n = model.num_spins();
    let two = Rational::from_integer(2);
    let mut q = DMatrix::from_element(n, n, Rational::from_integer(0));
    let mut constant = model.constant();
    for i in 0..n {
        q[(i, i)] += two * model.fields[i];
        constant -= model.fields[i];
        for j in i + 1..n {
            let jij = model.couplers[(i, j)];
            q[(i, j)] += two * jij;
            q[(j, i)] += two * jij;
            q[(i, i)] -= two * jij;
            q[(j, j)] -= two * jij;
            constant += jij;
        }
    }
    QuboProblem::new(q, constant)
}

/// Qubits split by field strength around `θ = (max|h| + min|h|)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGroups<T> {
    pub threshold: T,
    /// `|h_i| > θ`.
    pub strong: Vec<usize>,
    /// `|h_i| ≤ θ`; ties at the threshold land here.
    pub weak: Vec<usize>,
}

pub fn split_field_groups<T: Energy + 'static>(model: &IsingModel<T>) -> FieldGroups<T> {
    split_fields(model.fields())
}

pub fn split_fields<T: Energy>(fields: &[T]) -> FieldGroups<T> {
    let magnitudes: Vec<T> = fields.iter().map(|h| h.magnitude()).collect();
    let (mut lo, mut hi) = (magnitudes[0], magnitudes[0]);
    for &m in &magnitudes {
        if m < lo {
            lo = m;
        }
        if m > hi {
            hi = m;
        }
    }
    let threshold = (hi + lo).half();
    let (strong, weak) = (0..fields.len()).partition(|&i| magnitudes[i] > threshold);
    FieldGroups { threshold, strong, weak }
}
