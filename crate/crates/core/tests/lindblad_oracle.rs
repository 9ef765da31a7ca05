//! The dissipators against a literal construction from jump operators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qanneal_core::sim::{build_hamiltonian, fc_dissipator, local_dissipator, CMatrix, Eigen};

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `2LρL† − {L†L, ρ}`.
fn lindblad_term(l: &CMatrix, rho: &CMatrix) -> CMatrix {
    let ld = l.adjoint();
    let ldl = &ld * l;
    l * rho * &ld * c(2.0) - &ldl * rho - rho * &ldl
}

fn literal_fc(rho: &CMatrix, h: &DMatrix<f64>, rate: f64, beta: f64, eps_rel: f64) -> CMatrix {
    let eig = Eigen::new(h);
    let eps = eps_rel * eig.spectral_range();
    let d = h.nrows();
    let mut out = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in i + 1..d {
            let gap = eig.energies[j] - eig.energies[i];
            if gap <= eps {
                continue;
            }
            let ei = eig.vectors.column(i).map(c);
            let ej = eig.vectors.column(j).map(c);
            let s = &ei * ej.transpose();
            out += lindblad_term(&s, rho) * c(rate);
            out += lindblad_term(&s.adjoint(), rho) * c(rate * (-beta * gap).exp());
        }
    }
    out
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with qubit `j` in bit `j` of the basis index.
fn on_qubit(op: &CMatrix, j: usize, n: usize) -> CMatrix {
    let high = CMatrix::identity(1 << (n - j - 1), 1 << (n - j - 1));
    let low = CMatrix::identity(1 << j, 1 << j);
    high.kronecker(&op.kronecker(&low))
}

fn literal_local(rho: &CMatrix, h: &[f64], rate: f64, beta: f64) -> CMatrix {
    let n = h.len();
    // |0⟩⟨1| and |1⟩⟨0| in the bit basis
    let to_zero = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
    let to_one = to_zero.transpose();
    let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
    for (j, &hj) in h.iter().enumerate() {
        if hj == 0.0 {
            continue;
        }
        // σ = +1 is bit 1, so h > 0 favours bit 0.
        let single = if hj > 0.0 { &to_zero } else { &to_one };
        let l = on_qubit(single, j, n);
        out += lindblad_term(&l, rho) * c(rate);
        out += lindblad_term(&l.adjoint(), rho) * c(rate * (-2.0 * beta * hj.abs()).exp());
    }
    out
}

fn density(n: usize, seeds: &[(f64, f64)]) -> CMatrix {
    let d = 1 << n;
    let m = CMatrix::from_fn(d, d, |i, j| {
        let (re, im) = seeds[(i * d + j) % seeds.len()];
        Complex64::new(re + 0.1 * i as f64, im - 0.05 * j as f64)
    });
    let rho = &m * m.adjoint();
    let tr = rho.trace();
    rho / tr
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fc_matches_jump_operators(
        n in 1usize..=3,
        params in prop::collection::vec(-2.0f64..2.0, 9),
        seeds in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 7),
        beta in 0.05f64..3.0,
        rate in 0.0f64..2.0,
    ) {
        let transverse = &params[0..n];
        let fields = &params[3..3 + n];
        let couplers: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (i, j, params[6 + i + j - 1])).collect();
        let h = build_hamiltonian(n, transverse, fields, &couplers);
        let rho = density(n, &seeds);
        let fast = fc_dissipator(&rho, &h, rate, beta, 1e-9);
        let slow = literal_fc(&rho, &h, rate, beta, 1e-9);
        prop_assert!(max_diff(&fast, &slow) < 1e-10, "{}", max_diff(&fast, &slow));
    }

    #[test]
    fn local_matches_jump_operators(
        h in prop::collection::vec(prop_oneof![Just(0.0), -2.0f64..2.0], 1..=4),
        seeds in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5),
        beta in 0.05f64..3.0,
        rate in 0.0f64..2.0,
    ) {
        let rho = density(h.len(), &seeds);
        let fast = local_dissipator(&rho, &h, rate, beta);
        let slow = literal_local(&rho, &h, rate, beta);
        prop_assert!(max_diff(&fast, &slow) < 1e-12, "{}", max_diff(&fast, &slow));
    }

    #[test]
    fn dissipators_are_traceless_and_hermitian(
        h in prop::collection::vec(-2.0f64..2.0, 3),
        seeds in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5),
    ) {
        let rho = density(3, &seeds);
        let ham = build_hamiltonian(3, &[0.5, 0.3, 0.2], &h, &[(0, 2, 0.7)]);
        for d in [fc_dissipator(&rho, &ham, 1.0, 0.5, 1e-9), local_dissipator(&rho, &h, 1.0, 0.5)] {
            prop_assert!(d.trace().norm() < 1e-12);
            prop_assert!(max_diff(&d, &d.adjoint()) < 1e-12);
        }
    }
}

#[test]
fn fc_with_degenerate_levels_matches_jump_operators() {
    // Transverse field alone: heavily degenerate levels.
    let h = build_hamiltonian(3, &[1.0, 1.0, 1.0], &[0.0; 3], &[]);
    let rho = density(3, &[(0.3, -0.2), (0.1, 0.4), (-0.5, 0.2)]);
    let fast = fc_dissipator(&rho, &h, 1.0, 0.7, 1e-9);
    let slow = literal_fc(&rho, &h, 1.0, 0.7, 1e-9);
    assert!(max_diff(&fast, &slow) < 1e-10);
}
