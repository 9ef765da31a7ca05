//! Seeded random integer programs for equivalence testing.

use qanneal_core::ilp::{build_encoding, introduce_slacks, IntegerLinearProgram};
use qanneal_core::oracle::enumerate_ilp;
use qanneal_core::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int(v: i64) -> Rational {
    Rational::from_integer(v as i128)
}

/// A feasible program with at most `max_bits` bits after slack encoding.
pub fn random_ilp(rng: &mut impl Rng, max_bits: usize) -> IntegerLinearProgram {
    loop {
        let n = rng.random_range(1..=3usize);
        let m = rng.random_range(1..=3usize);
        let bits: Vec<u32> = (0..n).map(|_| rng.random_range(1..=2)).collect();
        let c = (0..n).map(|_| int(rng.random_range(-4..=4))).collect();
        let a = (0..m).map(|_| (0..n).map(|_| int(rng.random_range(-3..=3))).collect()).collect();
        let b = (0..m).map(|_| int(rng.random_range(-4..=4))).collect();
        let Ok(mut ilp) = IntegerLinearProgram::new(c, a, b, bits) else { continue };
        if rng.random_bool(0.3) {
            let d = (0..n).map(|_| (0..n).map(|_| int(rng.random_range(-2..=2))).collect()).collect();
            ilp = ilp.with_quadratic(d).expect("square quadratic block");
        }
        let Ok(slacks) = introduce_slacks(&ilp) else { continue };
        let Ok(enc) = build_encoding(&ilp, &slacks) else { continue };
        if enc.num_bits() <= max_bits && enumerate_ilp(&ilp, max_bits).is_ok() {
            return ilp;
        }
    }
}

pub fn random_programs(count: usize, max_bits: usize, seed: u64) -> Vec<IntegerLinearProgram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_ilp(&mut rng, max_bits)).collect()
}
