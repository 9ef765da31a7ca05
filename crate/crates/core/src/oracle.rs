//! Exhaustive ground truth for small instances.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::OracleError;
use crate::ilp::{BinaryEncoding, IntegerLinearProgram};
use crate::ising::IsingModel;
use crate::mds::Graph;
use crate::qubo::{mask_to_bits, QuboProblem};
use crate::scalar::{common_denominator, Energy, Rational};

pub const DEFAULT_BIT_CAP: usize = 24;
pub const SUBSET_ORACLE_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level<T> {
    pub energy: T,
    pub degeneracy: u64,
}

/// Every distinct energy of a problem with its multiplicity, and the
/// configurations of the lowest level as bit masks (bit `i` = variable `i`),
/// in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport<T> {
    pub num_bits: usize,
    pub levels: Vec<Level<T>>,
    pub ground_configs: Vec<u64>,
    /// Relative tolerance used to group levels; zero for exact arithmetic.
    pub tolerance: f64,
}

impl<T: Energy> SpectrumReport<T> {
    pub fn ground_energy(&self) -> T {
        self.levels[0].energy
    }

    pub fn ground_degeneracy(&self) -> u64 {
        self.levels[0].degeneracy
    }

    /// `E₁ − E₀`, absent when every configuration shares one energy.
    pub fn gap(&self) -> Option<T> {
        self.levels.get(1).map(|l| l.energy - self.levels[0].energy)
    }

    pub fn total_count(&self) -> u64 {
        self.levels.iter().map(|l| l.degeneracy).sum()
    }

    pub fn ground_bits(&self) -> Vec<Vec<u8>> {
        self.ground_configs.iter().map(|&m| mask_to_bits(m, self.num_bits)).collect()
    }
}

fn check_cap(bits: usize, cap: usize) -> Result<(), OracleError> {
    if bits > cap || bits > 63 {
        Err(OracleError::CapExceeded { bits, cap })
    } else {
        Ok(())
    }
}

/// Enumerates all `2^K` energies of a QUBO exactly.
///
/// Entries are scaled to integers by their common denominator and visited in
/// Gray-code order, so each step costs `O(K)`.
pub fn enumerate_qubo(q: &QuboProblem, cap: usize) -> Result<SpectrumReport<Rational>, OracleError> {
    let k = q.num_bits();
    check_cap(k, cap)?;
    let m = q.matrix();
    let scale = common_denominator(m.iter().chain([&q.constant()]));
    let to_int = |r: &Rational| (*r * Rational::from_integer(scale)).to_integer();
    let coeff: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| to_int(&m[(i, j)])).collect()).collect();

    let mut field = alloc::vec![0i128; k];
    let mut energy = to_int(&q.constant());
    let mut config = 0u64;
    let mut histogram: BTreeMap<i128, u64> = BTreeMap::new();
    let mut best = energy;
    let mut best_configs = alloc::vec![0u64];
    histogram.insert(energy, 1);

    for step in 1..(1u64 << k) {
        let bit = step.trailing_zeros() as usize;
        config ^= 1 << bit;
        let row = &coeff[bit];
        let delta = row[bit] + 2 * field[bit];
        let sign = if (config >> bit) & 1 == 1 { 1 } else { -1 };
        energy += sign * delta;
        for (j, f) in field.iter_mut().enumerate() {
            if j != bit {
                *f += sign * row[j];
            }
        }
        *histogram.entry(energy).or_insert(0) += 1;
        if energy < best {
            best = energy;
            best_configs.clear();
        }
        if energy == best {
            best_configs.push(config);
        }
    }
    best_configs.sort_unstable();
    let levels = histogram
        .into_iter()
        .map(|(e, degeneracy)| Level { energy: Rational::new(e, scale), degeneracy })
        .collect();
    Ok(SpectrumReport { num_bits: k, levels, ground_configs: best_configs, tolerance: 0.0 })
}

/// Enumerates all spin configurations of an Ising model.
///
/// Exact models group levels by equality, float models with the relative
/// tolerance of [`crate::scalar::FLOAT_LEVEL_TOLERANCE`].
pub fn enumerate_ising<T: Energy + 'static>(
    model: &IsingModel<T>,
    cap: usize,
) -> Result<SpectrumReport<T>, OracleError> {
    let n = model.num_spins();
    check_cap(n, cap)?;
    let scale = model.energy_scale();
    let mut energies: Vec<(T, u64)> = (0..(1u64 << n)).map(|m| (model.energy_of_mask(m), m)).collect();
    energies.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));

    let mut levels: Vec<Level<T>> = Vec::new();
    let mut anchor = energies[0].0;
    for &(e, _) in &energies {
        match levels.last_mut() {
            Some(level) if T::same_level(anchor, e, scale) => level.degeneracy += 1,
            _ => {
                anchor = e;
                levels.push(Level { energy: e, degeneracy: 1 });
            }
        }
    }
    let ground = levels[0].energy;
    let mut ground_configs: Vec<u64> = energies
        .iter()
        .take_while(|(e, _)| T::same_level(ground, *e, scale))
        .map(|&(_, m)| m)
        .collect();
    ground_configs.sort_unstable();
    let tolerance = if T::EXACT { 0.0 } else { crate::scalar::FLOAT_LEVEL_TOLERANCE };
    Ok(SpectrumReport { num_bits: n, levels, ground_configs, tolerance })
}

/// Optimal points of an integer program found by scanning its box.
#[derive(Clone, Debug, PartialEq)]
pub struct IlpOptima {
    pub objective: Rational,
    pub optima: Vec<Vec<i128>>,
}

pub fn enumerate_ilp(ilp: &IntegerLinearProgram, cap: usize) -> Result<IlpOptima, OracleError> {
    let bits: usize = ilp.bits().iter().map(|&b| b as usize).sum();
    check_cap(bits, cap)?;
    let enc = BinaryEncoding::new(ilp.bits().to_vec(), Vec::new());
    let mut best: Option<IlpOptima> = None;
    for mask in 0..(1u64 << bits) {
        let (x, _) = enc.decode(&mask_to_bits(mask, bits));
        if !ilp.is_feasible(&x) {
            continue;
        }
        let value = ilp.objective(&x);
        match &mut best {
            Some(b) if value > b.objective => {}
            Some(b) if value == b.objective => b.optima.push(x),
            _ => best = Some(IlpOptima { objective: value, optima: alloc::vec![x] }),
        }
    }
    let mut best = best.ok_or(OracleError::NoFeasiblePoint)?;
    best.optima.sort();
    Ok(best)
}

/// Decision-variable values of every QUBO ground configuration, sorted and
/// deduplicated.
pub fn decoded_minimizers(enc: &BinaryEncoding, report: &SpectrumReport<Rational>) -> Vec<Vec<i128>> {
    let mut xs: Vec<Vec<i128>> = report
        .ground_configs
        .iter()
        .map(|&m| enc.decode(&mask_to_bits(m, enc.num_bits())).0)
        .collect();
    xs.sort();
    xs.dedup();
    xs
}

/// Minimum dominating sets by subset enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominatingSets {
    pub domination_number: usize,
    /// Each set as sorted vertex indices; sets in increasing mask order.
    pub sets: Vec<Vec<usize>>,
}

pub fn mds_subset_oracle(g: &Graph) -> Result<DominatingSets, OracleError> {
    let n = g.num_vertices();
    check_cap(n, SUBSET_ORACLE_CAP)?;
    let closed: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).fold(1u64 << v, |m, u| m | (1 << u)))
        .collect();
    let mut best = usize::MAX;
    let mut masks = Vec::new();
    for mask in 0..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size > best || !closed.iter().all(|c| c & mask != 0) {
            continue;
        }
        if size < best {
            best = size;
            masks.clear();
        }
        masks.push(mask);
    }
    let sets = masks
        .into_iter()
        .map(|m| (0..n).filter(|v| (m >> v) & 1 == 1).collect())
        .collect();
    Ok(DominatingSets { domination_number: best, sets })
}

impl DominatingSets {
    /// Sets as 0/1 decision vectors, sorted.
    pub fn as_decisions(&self, n: usize) -> Vec<Vec<i128>> {
        let mut out: Vec<Vec<i128>> = self
            .sets
            .iter()
            .map(|set| (0..n).map(|v| set.contains(&v) as i128).collect())
            .collect();
        out.sort();
        out
    }
}
