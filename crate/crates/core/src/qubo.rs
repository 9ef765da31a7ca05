//! Quadratic unconstrained binary problems and the ILP → QUBO compiler.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};

use crate::error::IlpError;
use crate::ilp::{BinaryEncoding, BitLabel, BitRole, IntegerLinearProgram};
use crate::scalar::Rational;

/// `χ²(Ψ) = Ψᵀ Q Ψ + C` over bits `Ψ ∈ {0,1}^K`.
///
/// `Q` is kept symmetric: an off-diagonal coupling `q Ψ_i Ψ_j` is stored as
/// `q/2` in both `(i, j)` and `(j, i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuboProblem {
    matrix: DMatrix<Rational>,
    constant: Rational,
    penalty: Option<Rational>,
    labels: Vec<BitLabel>,
}

impl QuboProblem {
    /// Symmetrizes `matrix` and attaches free labels.
    pub fn new(matrix: DMatrix<Rational>, constant: Rational) -> Self {
        let n = matrix.nrows();
        let labels = (0..n)
            .map(|owner| BitLabel { role: BitRole::Free, owner, position: 0 })
            .collect();
        Self::from_parts(symmetrize(&matrix), constant, None, labels)
    }

    pub(crate) fn from_parts(
        matrix: DMatrix<Rational>,
        constant: Rational,
        penalty: Option<Rational>,
        labels: Vec<BitLabel>,
    ) -> Self {
        debug_assert!(matrix.is_square() && matrix.nrows() == labels.len());
        Self { matrix, constant, penalty, labels }
    }

    /// Rebuilds a problem from upper-triangular terms where `(i, j, q)` with
    /// `i < j` stands for `q Ψ_i Ψ_j` and `(i, i, q)` for `q Ψ_i`.
    pub fn from_upper_triangular(
        n: usize,
        terms: &[(usize, usize, Rational)],
        constant: Rational,
    ) -> Result<Self, IlpError> {
        let mut matrix = DMatrix::from_element(n, n, Rational::zero());
        let half = Rational::new(1, 2);
        for &(i, j, q) in terms {
            if i >= n || j >= n {
                return Err(IlpError::Shape { what: "term index", expected: n, found: i.max(j) });
            }
            if i == j {
                matrix[(i, i)] += q;
            } else {
                matrix[(i, j)] += q * half;
                matrix[(j, i)] += q * half;
            }
        }
        Ok(Self::new(matrix, constant))
    }

    pub fn with_labels(mut self, labels: Vec<BitLabel>) -> Result<Self, IlpError> {
        if labels.len() != self.num_bits() {
            return Err(IlpError::Shape { what: "labels", expected: self.num_bits(), found: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn num_bits(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Rational> {
        &self.matrix
    }

    pub fn constant(&self) -> Rational {
        self.constant
    }

    pub fn penalty(&self) -> Option<Rational> {
        self.penalty
    }

    pub fn labels(&self) -> &[BitLabel] {
        &self.labels
    }

    /// `Ψᵀ Q Ψ + C` for a bit vector.
    pub fn energy(&self, psi: &[u8]) -> Rational {
        let on: Vec<usize> = psi.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, _)| i).collect();
        let mut e = self.constant;
        for &i in &on {
            for &j in &on {
                e += self.matrix[(i, j)];
            }
        }
        e
    }

    /// Same as [`energy`](Self::energy) with bit `i` taken from bit `i` of `mask`.
    pub fn energy_of_mask(&self, mask: u64) -> Rational {
        self.energy(&mask_to_bits(mask, self.num_bits()))
    }

    /// Upper-triangular export: `(i, i, Q_ii)` and `(i, j, 2 Q_ij)` for
    /// `i < j`, zero entries omitted.
    pub fn upper_triangular_terms(&self) -> Vec<(usize, usize, Rational)> {
        let n = self.num_bits();
        let two = Rational::from_integer(2);
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i..n {
                let q = if i == j { self.matrix[(i, i)] } else { self.matrix[(i, j)] * two };
                if !q.is_zero() {
                    terms.push((i, j, q));
                }
            }
        }
        terms
    }
}

pub fn mask_to_bits(mask: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((mask >> i) & 1) as u8).collect()
}

pub fn bits_to_mask(bits: &[u8]) -> u64 {
    bits.iter().enumerate().fold(0, |m, (i, &b)| m | (((b & 1) as u64) << i))
}

pub(crate) fn symmetrize(m: &DMatrix<Rational>) -> DMatrix<Rational> {
    let half = Rational::new(1, 2);
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)]) * half)
}

/// Compiles `cᵀT_xΨ_x + Ψ_xᵀT_xᵀ d T_xΨ_x + p‖A T_xΨ_x + T_sΨ_s + b‖²`
/// into `Ψᵀ Q Ψ + C`.
///
/// With `W = [A T_x | T_s]` the penalty expands to
/// `p(Ψᵀ WᵀW Ψ + 2 bᵀW Ψ + ‖b‖²)`; every linear coefficient is moved onto the
/// diagonal using `Ψ_k² = Ψ_k`, which holds for any encoding width.
pub fn compile_to_qubo(
    ilp: &IntegerLinearProgram,
    enc: &BinaryEncoding,
    penalty: Rational,
) -> Result<QuboProblem, IlpError> {
    if !penalty.is_positive() {
        return Err(IlpError::NonPositivePenalty(penalty));
    }
    if enc.x_widths() != ilp.bits() || enc.s_widths().len() != ilp.num_constraints() {
        return Err(IlpError::Shape {
            what: "encoding",
            expected: ilp.num_vars() + ilp.num_constraints(),
            found: enc.x_widths().len() + enc.s_widths().len(),
        });
    }
    let m = ilp.num_constraints();
    let kx = enc.x_bits();
    let k = enc.num_bits();

    let mut w = DMatrix::from_element(m, k, Rational::zero());
    if m > 0 {
        w.view_mut((0, 0), (m, kx)).copy_from(&(ilp.constraints() * enc.t_x()));
        w.view_mut((0, kx), (m, k - kx)).copy_from(enc.t_s());
    }
    let b = DVector::from_column_slice(ilp.offsets());
    let p = penalty;

    let mut q = w.transpose() * &w * p;
    let mut linear = w.transpose() * &b * (p * Rational::from_integer(2));
    let cost = enc.t_x().transpose() * DVector::from_column_slice(ilp.costs());
    for i in 0..kx {
        linear[i] += cost[i];
    }
    for i in 0..k {
        q[(i, i)] += linear[i];
    }
    if let Some(d) = ilp.quadratic() {
        let block = symmetrize(&(enc.t_x().transpose() * d * enc.t_x()));
        let mut view = q.view_mut((0, 0), (kx, kx));
        view += block;
    }
    let constant = p * b.dot(&b);
    Ok(QuboProblem::from_parts(q, constant, Some(penalty), enc.labels()))
}

/// Integers recovered from a bit vector, checked against the original program.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    pub x: Vec<i128>,
    pub s: Vec<i128>,
    /// `cᵀx (+ xᵀdx)`.
    pub objective: Rational,
    /// `A x + s + b = 0` holds exactly.
    pub feasible: bool,
    /// Penalized objective evaluated on the integers.
    pub chi_squared: Rational,
    /// `Ψᵀ Q Ψ + C`.
    pub qubo_energy: Rational,
}

impl Decoded {
    pub fn energies_agree(&self) -> bool {
        self.chi_squared == self.qubo_energy
    }
}

pub fn decode_solution(
    ilp: &IntegerLinearProgram,
    qubo: &QuboProblem,
    enc: &BinaryEncoding,
    psi: &[u8],
) -> Decoded {
    let (x, s) = enc.decode(psi);
    let feasible = ilp.residuals(&x, &s).iter().all(Zero::is_zero);
    let penalty = qubo.penalty().unwrap_or_else(Rational::zero);
    Decoded {
        objective: ilp.objective(&x),
        chi_squared: ilp.chi_squared(&x, &s, penalty),
        qubo_energy: qubo.energy(psi),
        feasible,
        x,
        s,
    }
}

/// A penalty strength large enough that every QUBO minimizer is an optimal
/// feasible point.
///
/// Rows are integral, so any infeasible assignment pays at least `p`. The
/// generic choice is one more than the spread of the objective over the box
/// (for non-negative linear costs this is `cᵀx_max + 1`); it is an upper
/// bound on the gap-based requirement `p ≥ E₁ − E₀`. Unit-cost covering
/// programs such as dominating sets need only `p > 1`: each uncovered row
/// costs `p` but can be fixed by adding one unit-cost variable. `p = 1`
/// admits ties with infeasible assignments there (see the tests), so `2` is
/// returned.
pub fn penalty_floor(ilp: &IntegerLinearProgram) -> Rational {
    if ilp.is_unit_covering() {
        return Rational::from_integer(2);
    }
    let (lo, hi) = ilp.objective_bounds();
    hi - lo + Rational::one()
}

/// Bit vector with `x` and its (exact) slacks, for feasible `x`.
pub fn feasible_bits(ilp: &IntegerLinearProgram, enc: &BinaryEncoding, x: &[i128]) -> Option<Vec<u8>> {
    let zeros = vec![0; ilp.num_constraints()];
    let mut s = Vec::with_capacity(ilp.num_constraints());
    for (r, &w) in ilp.residuals(x, &zeros).iter().zip(enc.s_widths()) {
        let slack = -*r;
        if slack.is_negative() || !slack.is_integer() || slack.to_integer() >= (1i128 << w) {
            return None;
        }
        s.push(slack.to_integer());
    }
    Some(enc.encode(x, &s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{build_encoding, introduce_slacks};

    fn int(v: i128) -> Rational {
        Rational::from_integer(v)
    }

    fn ints(v: &[i128]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn single_edge() -> IntegerLinearProgram {
        IntegerLinearProgram::new(ints(&[1, 1]), vec![ints(&[-1, -1]), ints(&[-1, -1])], ints(&[1, 1]), vec![1, 1])
            .unwrap()
    }

    fn compiled(ilp: &IntegerLinearProgram, p: i128) -> (BinaryEncoding, QuboProblem) {
        let enc = build_encoding(ilp, &introduce_slacks(ilp).unwrap()).unwrap();
        let q = compile_to_qubo(ilp, &enc, int(p)).unwrap();
        (enc, q)
    }

    #[test]
    fn unconstrained_single_variable() {
        let ilp = IntegerLinearProgram::new(ints(&[1]), vec![], vec![], vec![1]).unwrap();
        let (_, q) = compiled(&ilp, 1);
        assert_eq!(q.matrix(), &DMatrix::from_element(1, 1, int(1)));
        assert_eq!(q.constant(), int(0));
    }

    #[test]
    fn constant_is_penalty_times_offset_norm() {
        let (_, q) = compiled(&single_edge(), 2);
        assert_eq!(q.constant(), int(4));
    }

    #[test]
    fn single_edge_ground_states_by_enumeration() {
        let ilp = single_edge();
        let (_, q) = compiled(&ilp, 2);
        let energies: Vec<Rational> = (0..16u64).map(|m| q.energy_of_mask(m)).collect();
        let min = *energies.iter().min().unwrap();
        assert_eq!(min, int(1));
        let argmin: Vec<u64> = (0..16).filter(|&m| energies[m as usize] == min).collect();
        // (x0,x1,s0,s1) = (1,0,0,0) and (0,1,0,0)
        assert_eq!(argmin, vec![0b0001, 0b0010]);
    }

    #[test]
    fn decode_examples() {
        let ilp = single_edge();
        let (enc, q) = compiled(&ilp, 2);
        let ground = decode_solution(&ilp, &q, &enc, &[1, 0, 0, 0]);
        assert_eq!((ground.x.as_slice(), ground.s.as_slice()), (&[1, 0][..], &[0, 0][..]));
        assert!(ground.feasible);
        assert_eq!(ground.objective, int(1));
        assert!(ground.energies_agree());

        let empty = decode_solution(&ilp, &q, &enc, &[0, 0, 0, 0]);
        assert!(!empty.feasible);
        assert!(empty.energies_agree());

        let both = decode_solution(&ilp, &q, &enc, &[1, 1, 1, 1]);
        assert_eq!((both.x.as_slice(), both.s.as_slice()), (&[1, 1][..], &[1, 1][..]));
        assert!(both.feasible);
        assert_eq!(both.objective, int(2));
        assert_eq!(both.qubo_energy, int(2));
    }

    #[test]
    fn rejects_non_positive_penalty() {
        let ilp = single_edge();
        let enc = build_encoding(&ilp, &introduce_slacks(&ilp).unwrap()).unwrap();
        assert!(matches!(compile_to_qubo(&ilp, &enc, int(0)), Err(IlpError::NonPositivePenalty(_))));
    }

    #[test]
    fn multi_bit_energy_matches_direct_substitution() {
        // x0 ∈ 0..=3, x1 ∈ 0..=1 ; x0 + 2 x1 ≥ 2 ; x0 ≤ 2
        let ilp = IntegerLinearProgram::new(
            ints(&[3, -1]),
            vec![ints(&[-1, -2]), ints(&[1, 0])],
            ints(&[2, -2]),
            vec![2, 1],
        )
        .unwrap()
        .with_quadratic(vec![ints(&[1, 2]), ints(&[0, -1])])
        .unwrap();
        let (enc, q) = compiled(&ilp, 5);
        for mask in 0..(1u64 << enc.num_bits()) {
            let psi = mask_to_bits(mask, enc.num_bits());
            let d = decode_solution(&ilp, &q, &enc, &psi);
            assert!(d.energies_agree(), "mask {mask:b}");
        }
    }

    #[test]
    fn penalty_floor_examples() {
        assert_eq!(penalty_floor(&single_edge()), int(2));
        let zero = IntegerLinearProgram::new(ints(&[0, 0]), vec![ints(&[-1, 0])], ints(&[1]), vec![1, 1]).unwrap();
        assert_eq!(penalty_floor(&zero), int(1));
        let free = IntegerLinearProgram::new(ints(&[1, 1]), vec![], vec![], vec![1, 1]).unwrap();
        assert_eq!(penalty_floor(&free), int(3));
    }

    #[test]
    fn unit_penalty_ties_for_path_of_four() {
        // Path 0-1-2-3: x = {1} leaves vertex 3 undominated, one violated
        // row costs p = 1, matching the domination number 2.
        let a = vec![
            ints(&[-1, -1, 0, 0]),
            ints(&[-1, -1, -1, 0]),
            ints(&[0, -1, -1, -1]),
            ints(&[0, 0, -1, -1]),
        ];
        let ilp = IntegerLinearProgram::new(ints(&[1; 4]), a, ints(&[1; 4]), vec![1; 4]).unwrap();
        let (enc, q) = compiled(&ilp, 1);
        let psi = enc.encode(&[0, 1, 0, 0], &[0, 0, 0, 0]);
        let d = decode_solution(&ilp, &q, &enc, &psi);
        assert!(!d.feasible);
        assert_eq!(d.qubo_energy, int(2));
    }

    #[test]
    fn upper_triangular_round_trip() {
        let (_, q) = compiled(&single_edge(), 2);
        let terms = q.upper_triangular_terms();
        let back = QuboProblem::from_upper_triangular(q.num_bits(), &terms, q.constant()).unwrap();
        assert_eq!(back.matrix(), q.matrix());
    }
}
