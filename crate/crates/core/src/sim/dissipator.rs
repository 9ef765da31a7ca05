//! Dissipative parts of the master equation.
//!
//! Both channels are applied in closed form instead of building the
//! jump operators: the full-counting channel acts on populations and
//! coherences separately in the energy eigenbasis, and local damping only
//! ever pairs basis states that differ in one bit.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;

use super::hamiltonian::Eigen;
use super::CMatrix;

/// Thermal relaxation between every pair of non-degenerate eigenstates of
/// the instantaneous Hamiltonian, downward at `rate` and upward at
/// `rate·e^{−βΔE}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullCounting {
    pub rate: f64,
    pub beta: f64,
    /// Level pairs closer than `relative_tolerance × spectral range` are skipped.
    pub relative_tolerance: f64,
    /// Multiplies the upward Boltzmann factor. `1` is physical; anything else
    /// breaks detailed balance and exists to prove the checks can fail.
    pub boltzmann_bias: f64,
}

impl FullCounting {
    pub fn new(rate: f64, beta: f64, relative_tolerance: f64) -> Self {
        Self { rate, beta, relative_tolerance, boltzmann_bias: 1.0 }
    }

    fn upward(&self, gap: f64) -> f64 {
        self.boltzmann_bias * Float::exp(-self.beta * gap)
    }

    /// Jump rates between the eigenstates of `energies` (ascending).
    pub fn rates(&self, energies: &[f64], eps: f64) -> TransitionRates {
        let d = energies.len();
        let mut transfer = DMatrix::zeros(d, d);
        let mut escape = vec![0.0; d];
        for lower in 0..d {
            for upper in lower + 1..d {
                let gap = energies[upper] - energies[lower];
                if gap <= eps {
                    continue;
                }
                let up = self.rate * self.upward(gap);
                transfer[(lower, upper)] = self.rate;
                transfer[(upper, lower)] = up;
                escape[upper] += self.rate;
                escape[lower] += up;
            }
        }
        TransitionRates { transfer, escape }
    }

    /// Dissipator for a Hamiltonian that has already been diagonalized.
    pub fn apply_with(&self, eig: &Eigen, rho: &CMatrix) -> CMatrix {
        apply_rates(eig, &self.rates(&eig.energies, eig.tolerance(self.relative_tolerance)), rho)
    }

    /// Dissipator of `rho` given `H`; diagonalizes `H` on every call.
    pub fn apply(&self, h: &DMatrix<f64>, rho: &CMatrix) -> CMatrix {
        self.apply_with(&Eigen::new(h), rho)
    }

    /// The dissipator with `rho` and the result both in the eigenbasis of
    /// `energies` (ascending).
    pub fn apply_eigenbasis(&self, energies: &[f64], eps: f64, rho: &CMatrix) -> CMatrix {
        self.rates(energies, eps).apply(rho)
    }
}

/// `transfer[(a, b)]` is the rate of `b → a`; `escape[b]` sums it over `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionRates {
    pub transfer: DMatrix<f64>,
    pub escape: Vec<f64>,
}

impl TransitionRates {
    /// Populations follow the classical rate equation and each coherence
    /// `ρ_mn` decays at the summed escape rates of `m` and `n`, everything
    /// doubled by the `2S ρ S†` normalization.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let d = self.escape.len();
        let pops = DVector::from_iterator(d, rho.diagonal().iter().map(|c| c.re));
        let gain = &self.transfer * pops;
        let mut out = CMatrix::from_fn(d, d, |m, n| -rho[(m, n)] * (self.escape[m] + self.escape[n]));
        for n in 0..d {
            out[(n, n)] += Complex64::new(2.0 * gain[n], 0.0);
        }
        out
    }
}

/// Full-counting dissipator given precomputed rates for the eigenbasis of `eig`.
pub(crate) fn apply_rates(eig: &Eigen, rates: &TransitionRates, rho: &CMatrix) -> CMatrix {
    let ut = eig.vectors.transpose();
    let d = rates.apply(&sandwich(&ut, rho, &eig.vectors));
    hermitian_part(&sandwich(&eig.vectors, &d, &ut))
}

/// `D_fc[ρ]` for Hamiltonian `h`.
pub fn fc_dissipator(rho: &CMatrix, h: &DMatrix<f64>, rate: f64, beta: f64, relative_tolerance: f64) -> CMatrix {
    FullCounting::new(rate, beta, relative_tolerance).apply(h, rho)
}

/// Independent damping of each qubit toward the `σ^z` eigenstate that
/// minimizes `h_j σ_j`, with the up-rate suppressed by `e^{−2β|h_j|}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalDamping {
    pub rate: f64,
    pub beta: f64,
    pub boltzmann_bias: f64,
}

impl LocalDamping {
    pub fn new(rate: f64, beta: f64) -> Self {
        Self { rate, beta, boltzmann_bias: 1.0 }
    }

    /// Dissipator for per-qubit `fields`. Qubits with zero field get no
    /// channel.
    pub fn apply(&self, fields: &[f64], rho: &CMatrix) -> CMatrix {
        let dim = rho.nrows();
        let mut out = CMatrix::zeros(dim, dim);
        if self.rate == 0.0 {
            return out;
        }
        for (j, &h) in fields.iter().enumerate() {
            if h == 0.0 {
                continue;
            }
            let mask = 1usize << j;
            // Bit value of the local ground state: σ = +1 is bit 1.
            let ground = usize::from(h < 0.0);
            let down = self.rate;
            let up = self.rate * self.boltzmann_bias * Float::exp(-2.0 * self.beta * h.abs());
            for l in 0..dim {
                let bl = (l >> j) & 1;
                for k in 0..dim {
                    let bk = (k >> j) & 1;
                    let loss = |b: usize| if b == ground { up } else { down };
                    let mut value = -rho[(k, l)] * (loss(bk) + loss(bl));
                    if bk == bl {
                        let feed = if bk == ground { down } else { up };
                        value += rho[(k ^ mask, l ^ mask)] * (2.0 * feed);
                    }
                    out[(k, l)] += value;
                }
            }
        }
        out
    }
}

/// `D_loc[ρ]` for problem fields `h`.
pub fn local_dissipator(rho: &CMatrix, h: &[f64], rate: f64, beta: f64) -> CMatrix {
    LocalDamping::new(rate, beta).apply(h, rho)
}

/// `a·m·b` for real `a`, `b`, done as real products on the parts of `m`.
pub(crate) fn sandwich(a: &DMatrix<f64>, m: &CMatrix, b: &DMatrix<f64>) -> CMatrix {
    let re = a * m.map(|c| c.re) * b;
    let im = a * m.map(|c| c.im) * b;
    re.zip_map(&im, Complex64::new)
}

/// `a·m` for real `a`.
pub(crate) fn left_multiply(a: &DMatrix<f64>, m: &CMatrix) -> CMatrix {
    let re = a * m.map(|c| c.re);
    let im = a * m.map(|c| c.im);
    re.zip_map(&im, Complex64::new)
}

/// `(M + M†)/2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Populations `ρ_kk` as reals.
pub fn populations(rho: &CMatrix) -> Vec<f64> {
    rho.diagonal().iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(p: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(p.len(), p.iter().map(|&v| Complex64::new(v, 0.0))))
    }

    #[test]
    fn excited_two_level_decays_at_twice_the_rate() {
        let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![-1.0, 1.0]));
        let d = fc_dissipator(&diag(&[0.0, 1.0]), &h, 0.7, 1e6, 1e-9);
        assert!((d[(0, 0)].re - 1.4).abs() < 1e-12);
        assert!((d[(1, 1)].re + 1.4).abs() < 1e-12);
    }

    #[test]
    fn zero_rates_vanish() {
        let h = DMatrix::from_row_slice(2, 2, &[0.3, -1.0, -1.0, -0.3]);
        let rho = diag(&[0.25, 0.75]);
        assert_eq!(fc_dissipator(&rho, &h, 0.0, 1.0, 1e-9).camax(), 0.0);
        assert_eq!(local_dissipator(&rho, &[1.0], 0.0, 1.0).camax(), 0.0);
    }

    #[test]
    fn boltzmann_populations_are_fixed_points() {
        let beta = 0.8;
        let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![-0.5, 0.5]));
        let w = (-beta).exp();
        let rho = diag(&[1.0 / (1.0 + w), w / (1.0 + w)]);
        assert!(fc_dissipator(&rho, &h, 1.0, beta, 1e-9).camax() < 1e-14);
        let w = (-2.0 * beta * 0.5).exp();
        // h > 0: the local ground is bit 0
        let rho = diag(&[1.0 / (1.0 + w), w / (1.0 + w)]);
        assert!(local_dissipator(&rho, &[0.5], 1.0, beta).camax() < 1e-14);
    }

    #[test]
    fn local_relaxation_direction_follows_field_sign() {
        let up = diag(&[0.0, 1.0]);
        let d = local_dissipator(&up, &[1.0], 1.0, 1e6);
        assert!((d[(0, 0)].re - 2.0).abs() < 1e-12);
        let d = local_dissipator(&up, &[-1.0], 1.0, 1e6);
        assert!(d.camax() < 1e-12);
        let d = local_dissipator(&up, &[0.0], 1.0, 1e6);
        assert_eq!(d.camax(), 0.0);
    }

    #[test]
    fn degenerate_levels_exchange_nothing() {
        let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![1.0, 1.0, 3.0]));
        let d = fc_dissipator(&diag(&[1.0, 0.0, 0.0]), &h, 1.0, 1e6, 1e-9);
        assert!(d.camax() < 1e-12);
    }
}
