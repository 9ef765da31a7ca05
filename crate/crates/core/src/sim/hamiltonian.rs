use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Float;

use crate::error::SimError;
use crate::ising::IsingModel;
use crate::schedule::{OffsetAssignment, ScheduleTable};

use super::MAX_QUBITS;

/// Everything that fixes `H(s)`: problem, schedule, offsets and anneal time.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnealSpec {
    model: IsingModel<f64>,
    schedule: ScheduleTable,
    offsets: OffsetAssignment,
    anneal_time: f64,
}

impl AnnealSpec {
    pub fn new(
        model: IsingModel<f64>,
        schedule: ScheduleTable,
        offsets: OffsetAssignment,
        anneal_time: f64,
    ) -> Result<Self, SimError> {
        let n = model.num_spins();
        if n == 0 {
            return Err(SimError::Parameter("model has no qubits"));
        }
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n, MAX_QUBITS));
        }
        if offsets.len() != n {
            return Err(SimError::Dimension("one offset per qubit"));
        }
        if !(anneal_time.is_finite() && anneal_time > 0.0) {
            return Err(SimError::Parameter("anneal time must be positive"));
        }
        for (i, &d) in offsets.deltas().iter().enumerate() {
            schedule.check_offset(i, d)?;
        }
        Ok(Self { model, schedule, offsets, anneal_time })
    }

    /// Same problem and schedule with different offsets.
    pub fn with_offsets(&self, offsets: OffsetAssignment) -> Result<Self, SimError> {
        Self::new(self.model.clone(), self.schedule.clone(), offsets, self.anneal_time)
    }

    pub fn model(&self) -> &IsingModel<f64> {
        &self.model
    }

    pub fn schedule(&self) -> &ScheduleTable {
        &self.schedule
    }

    pub fn offsets(&self) -> &OffsetAssignment {
        &self.offsets
    }

    /// Nominal anneal time `T_a`.
    pub fn anneal_time(&self) -> f64 {
        self.anneal_time
    }

    /// Physical length of the run window, `T_a` times the schedule's time scale.
    pub fn total_time(&self) -> f64 {
        self.anneal_time * self.schedule.time_scale()
    }

    pub fn num_qubits(&self) -> usize {
        self.model.num_spins()
    }

    pub fn dimension(&self) -> usize {
        1 << self.num_qubits()
    }

    /// `(A_i(s), B_i(s))` for every qubit.
    pub fn amplitudes(&self, s: f64) -> Vec<(f64, f64)> {
        self.offsets.deltas().iter().map(|&d| self.schedule.evaluate(s, d)).collect()
    }
}

/// `σ^z` eigenvalue of qubit `i` in basis state `k` (`+1` when bit `i` is set).
#[inline]
pub fn spin(k: usize, i: usize) -> f64 {
    if (k >> i) & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// `H = −Σ A_i σ^x_i + Σ B_i h_i σ^z_i + Σ_{i>j} √(B_i B_j) J_ij σ^z_i σ^z_j`.
///
/// Basis state `k` has qubit `i` in bit `i`.
pub fn assemble_hamiltonian(spec: &AnnealSpec, s: f64) -> Result<DMatrix<f64>, SimError> {
    let amps = spec.amplitudes(s);
    if amps.iter().any(|&(a, b)| !(a.is_finite() && b.is_finite()) || b < 0.0) {
        return Err(SimError::NegativeAmplitude(s));
    }
    let n = spec.num_qubits();
    let fields: Vec<f64> = spec.model.fields().iter().zip(&amps).map(|(h, (_, b))| h * b).collect();
    let couplers: Vec<(usize, usize, f64)> = spec
        .model
        .coupler_list()
        .into_iter()
        .map(|(i, j, v)| (i, j, v * Float::sqrt(amps[i].1 * amps[j].1)))
        .collect();
    let transverse: Vec<f64> = amps.iter().map(|&(a, _)| a).collect();
    Ok(build_hamiltonian(n, &transverse, &fields, &couplers))
}

/// Dense `−Σ a_i σ^x_i + Σ f_i σ^z_i + Σ c_ij σ^z_i σ^z_j`.
pub fn build_hamiltonian(n: usize, transverse: &[f64], fields: &[f64], couplers: &[(usize, usize, f64)]) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let mut diag = 0.0;
        for (i, f) in fields.iter().enumerate() {
            diag += f * spin(k, i);
        }
        for &(i, j, c) in couplers {
            diag += c * spin(k, i) * spin(k, j);
        }
        h[(k, k)] = diag;
        for (i, a) in transverse.iter().enumerate() {
            if *a != 0.0 {
                h[(k ^ (1 << i), k)] -= a;
            }
        }
    }
    h
}

/// Eigenpairs of a real symmetric matrix, energies ascending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub energies: Vec<f64>,
    /// Eigenvectors as columns, in the order of `energies`.
    pub vectors: DMatrix<f64>,
}

impl Eigen {
    pub fn new(h: &DMatrix<f64>) -> Self {
        let decomposition = SymmetricEigen::new(h.clone());
        let mut order: Vec<usize> = (0..h.nrows()).collect();
        order.sort_by(|&a, &b| decomposition.eigenvalues[a].total_cmp(&decomposition.eigenvalues[b]));
        let energies = order.iter().map(|&i| decomposition.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(h.nrows(), h.ncols(), |r, c| decomposition.eigenvectors[(r, order[c])]);
        Self { energies, vectors }
    }

    pub fn spectral_range(&self) -> f64 {
        self.energies[self.energies.len() - 1] - self.energies[0]
    }

    /// Absolute level-pairing tolerance `relative × spectral range`.
    pub fn tolerance(&self, relative: f64) -> f64 {
        relative * self.spectral_range()
    }

    /// Number of eigenstates within the tolerance of the minimum.
    pub fn ground_multiplicity(&self, relative: f64) -> usize {
        let eps = self.tolerance(relative);
        self.energies.iter().take_while(|&&e| e - self.energies[0] <= eps).count()
    }
}

/// Orthonormal basis of the (possibly degenerate) ground space, as columns.
pub fn ground_space(h: &DMatrix<f64>, relative_tolerance: f64) -> DMatrix<f64> {
    let eig = Eigen::new(h);
    let g = eig.ground_multiplicity(relative_tolerance);
    eig.vectors.columns(0, g).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::IsingModel;
    use crate::schedule::ScheduleTable;
    use alloc::vec;

    fn spec(h: Vec<f64>, j: &[(usize, usize, f64)]) -> AnnealSpec {
        let n = h.len();
        AnnealSpec::new(
            IsingModel::new(h, j, 0.0).unwrap(),
            ScheduleTable::linear(5.0, 5.0).unwrap(),
            OffsetAssignment::zeros(n),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn final_hamiltonian_is_scaled_ising_diagonal() {
        let sp = spec(vec![0.5, -1.0, 0.25], &[(0, 1, 1.0), (1, 2, -0.5)]);
        let h = assemble_hamiltonian(&sp, 1.0).unwrap();
        for k in 0..8 {
            for l in 0..8 {
                let expected = if k == l { 5.0 * sp.model().energy_of_mask(k as u64) } else { 0.0 };
                assert!((h[(k, l)] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn initial_ground_state_is_uniform() {
        let sp = spec(vec![1.0, -2.0], &[(0, 1, 1.0)]);
        let h = assemble_hamiltonian(&sp, 0.0).unwrap();
        let eig = Eigen::new(&h);
        assert!((eig.energies[0] + 10.0).abs() < 1e-12);
        for k in 0..4 {
            assert!((eig.vectors[(k, 0)].abs() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn single_qubit_by_hand() {
        // s = 0.5: A = B = 2.5, h = 1 → [[−B, −A], [−A, B]]
        let sp = spec(vec![1.0], &[]);
        let h = assemble_hamiltonian(&sp, 0.5).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[-2.5, -2.5, -2.5, 2.5]);
        assert!((h - expected).abs().max() < 1e-12);
    }

    #[test]
    fn eigen_is_sorted_and_orthonormal() {
        let h = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, -1.0]);
        let eig = Eigen::new(&h);
        assert!(eig.energies.windows(2).all(|w| w[0] <= w[1]));
        let gram = eig.vectors.transpose() * &eig.vectors;
        assert!((gram - DMatrix::identity(3, 3)).abs().max() < 1e-12);
        let rebuilt = &eig.vectors * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eig.energies.clone())) * eig.vectors.transpose();
        assert!((rebuilt - h).abs().max() < 1e-12);
    }

    #[test]
    fn degenerate_ground_space() {
        let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0, 3.0]));
        assert_eq!(ground_space(&h, 1e-9).ncols(), 2);
    }

    #[test]
    fn rejects_bad_specs() {
        let model = IsingModel::new(vec![1.0, 1.0], &[], 0.0).unwrap();
        let table = ScheduleTable::linear(5.0, 5.0).unwrap();
        assert!(AnnealSpec::new(model.clone(), table.clone(), OffsetAssignment::zeros(3), 1.0).is_err());
        assert!(AnnealSpec::new(model.clone(), table.clone(), OffsetAssignment::zeros(2), 0.0).is_err());
        let ext = table.extend(0.1).unwrap();
        let far = OffsetAssignment::explicit(vec![-0.2, 0.0], false).unwrap();
        assert!(matches!(
            AnnealSpec::new(model, ext, far, 1.0),
            Err(SimError::Schedule(crate::error::ScheduleError::OffsetOutOfBounds { .. }))
        ));
    }
}
