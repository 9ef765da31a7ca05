use proptest::prelude::*;
use qanneal_core::ilp::{build_encoding, introduce_slacks, IntegerLinearProgram};
use qanneal_core::ising::{ising_to_qubo, qubo_to_ising};
use qanneal_core::oracle::enumerate_qubo;
use qanneal_core::qubo::{compile_to_qubo, decode_solution, mask_to_bits, penalty_floor, QuboProblem};
use qanneal_core::scalar::Rational;
use qanneal_core::verify::compile_and_compare;

fn int(v: i64) -> Rational {
    Rational::from_integer(v as i128)
}

fn small_ilp() -> impl Strategy<Value = IntegerLinearProgram> {
    (1usize..=3, 1usize..=2)
        .prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(-3i64..=3, n),
                prop::collection::vec(prop::collection::vec(-3i64..=3, n), m),
                prop::collection::vec(-4i64..=4, m),
                prop::collection::vec(1u32..=2, n),
                prop::option::of(prop::collection::vec(prop::collection::vec(-2i64..=2, n), n)),
            )
        })
        .prop_filter_map("slacks must exist", |(c, a, b, bits, d)| {
            let a = a.into_iter().map(|row| row.into_iter().map(int).collect()).collect();
            let mut ilp =
                IntegerLinearProgram::new(c.into_iter().map(int).collect(), a, b.into_iter().map(int).collect(), bits)
                    .ok()?;
            if let Some(d) = d {
                ilp = ilp.with_quadratic(d.into_iter().map(|row| row.into_iter().map(int).collect()).collect()).ok()?;
            }
            let enc = build_encoding(&ilp, &introduce_slacks(&ilp).ok()?).ok()?;
            (enc.num_bits() <= 12).then_some(ilp)
        })
}

fn small_qubo() -> impl Strategy<Value = QuboProblem> {
    (1usize..=6).prop_flat_map(|n| {
        (prop::collection::vec((-8i64..=8, 1i64..=4), n * n), (-5i64..=5)).prop_map(move |(entries, c)| {
            let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
                let (p, q) = entries[i * n + j];
                Rational::new(p as i128, q as i128)
            });
            QuboProblem::new(m, int(c))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qubo_energy_equals_penalized_objective_everywhere(ilp in small_ilp(), p in 1i64..=5) {
        let enc = build_encoding(&ilp, &introduce_slacks(&ilp).unwrap()).unwrap();
        let qubo = compile_to_qubo(&ilp, &enc, int(p)).unwrap();
        for mask in 0..(1u64 << enc.num_bits()) {
            let d = decode_solution(&ilp, &qubo, &enc, &mask_to_bits(mask, enc.num_bits()));
            prop_assert!(d.energies_agree(), "mask {mask:b}: {} vs {}", d.chi_squared, d.qubo_energy);
        }
    }

    #[test]
    fn floor_penalty_minimizers_are_ilp_optima(ilp in small_ilp()) {
        match compile_and_compare(&ilp, 16) {
            Ok(eq) => prop_assert!(eq.matches(), "{eq:?}"),
            Err(qanneal_core::PipelineError::Oracle(qanneal_core::OracleError::NoFeasiblePoint)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn penalty_floor_is_positive(ilp in small_ilp()) {
        prop_assert!(penalty_floor(&ilp) > int(0));
    }

    #[test]
    fn ising_preserves_every_energy(q in small_qubo()) {
        let ising = qubo_to_ising(&q);
        for mask in 0..(1u64 << q.num_bits()) {
            prop_assert_eq!(q.energy_of_mask(mask), ising.energy_of_mask(mask));
        }
    }

    #[test]
    fn ising_round_trip_is_identity(q in small_qubo()) {
        let back = ising_to_qubo(&qubo_to_ising(&q));
        prop_assert_eq!(back.matrix(), q.matrix());
        prop_assert_eq!(back.constant(), q.constant());
    }

    #[test]
    fn spectrum_counts_every_configuration(q in small_qubo()) {
        let report = enumerate_qubo(&q, 16).unwrap();
        prop_assert_eq!(report.total_count(), 1u64 << q.num_bits());
        let brute = (0..(1u64 << q.num_bits())).map(|m| q.energy_of_mask(m)).min().unwrap();
        prop_assert_eq!(report.ground_energy(), brute);
        for &m in &report.ground_configs {
            prop_assert_eq!(q.energy_of_mask(m), brute);
        }
    }

    #[test]
    fn upper_triangular_export_round_trips(q in small_qubo()) {
        let terms = q.upper_triangular_terms();
        let back = QuboProblem::from_upper_triangular(q.num_bits(), &terms, q.constant()).unwrap();
        prop_assert_eq!(back.matrix(), q.matrix());
    }
}
