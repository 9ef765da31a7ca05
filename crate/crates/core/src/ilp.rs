//! Integer linear (and quadratic) programs, slack variables and the
//! integer-to-bit encoding.
//!
//! A program minimizes `cᵀx + xᵀdx` over non-negative integers subject to
//! `A x + b ≤ 0`. Every inequality row gets a non-negative slack `s_a` so
//! that `A x + s + b = 0`, and every integer (decision or slack) is written
//! in plain binary over its own block of bits.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::IlpError;
use crate::scalar::{bit_width, common_denominator, Rational};

/// Widest integer variable we accept; keeps `2^R - 1` comfortably inside `i128`.
pub const MAX_VARIABLE_BITS: u32 = 62;

#[derive(Clone, Debug, PartialEq)]
pub struct IntegerLinearProgram {
    costs: Vec<Rational>,
    constraints: DMatrix<Rational>,
    offsets: Vec<Rational>,
    bits: Vec<u32>,
    quadratic: Option<DMatrix<Rational>>,
    row_scales: Vec<Rational>,
}

impl IntegerLinearProgram {
    /// Builds a program from `c`, `A` (row-major, `M×N`), `b` and the bit
    /// width of every decision variable.
    ///
    /// Rows of `(A|b)` carrying fractions are multiplied by the least common
    /// multiple of their denominators so that slacks stay integral; the
    /// factors are kept in [`row_scales`](Self::row_scales).
    pub fn new(
        costs: Vec<Rational>,
        constraints: Vec<Vec<Rational>>,
        offsets: Vec<Rational>,
        bits: Vec<u32>,
    ) -> Result<Self, IlpError> {
        let n = costs.len();
        if n == 0 {
            return Err(IlpError::Empty);
        }
        if bits.len() != n {
            return Err(IlpError::Shape { what: "bits_x", expected: n, found: bits.len() });
        }
        if let Some(&w) = bits.iter().find(|&&w| w == 0 || w > MAX_VARIABLE_BITS) {
            return Err(IlpError::BitWidth(w));
        }
        if offsets.len() != constraints.len() {
            return Err(IlpError::Shape {
                what: "b",
                expected: constraints.len(),
                found: offsets.len(),
            });
        }
        let m = constraints.len();
        let mut a = DMatrix::from_element(m, n, Rational::zero());
        let mut b = offsets;
        let mut row_scales = Vec::with_capacity(m);
        for (row, values) in constraints.iter().enumerate() {
            if values.len() != n {
                return Err(IlpError::Shape { what: "A row", expected: n, found: values.len() });
            }
            let scale = Rational::from_integer(common_denominator(values.iter().chain([&b[row]])));
            for (col, v) in values.iter().enumerate() {
                a[(row, col)] = *v * scale;
            }
            b[row] *= scale;
            row_scales.push(scale);
        }
        Ok(Self { costs, constraints: a, offsets: b, bits, quadratic: None, row_scales })
    }

    /// Adds the quadratic cost `xᵀdx`.
    pub fn with_quadratic(mut self, d: Vec<Vec<Rational>>) -> Result<Self, IlpError> {
        let n = self.num_vars();
        if d.len() != n {
            return Err(IlpError::Shape { what: "d", expected: n, found: d.len() });
        }
        let mut q = DMatrix::from_element(n, n, Rational::zero());
        for (i, row) in d.iter().enumerate() {
            if row.len() != n {
                return Err(IlpError::Shape { what: "d row", expected: n, found: row.len() });
            }
            for (j, v) in row.iter().enumerate() {
                q[(i, j)] = *v;
            }
        }
        self.quadratic = Some(q);
        Ok(self)
    }

    pub fn num_vars(&self) -> usize {
        self.costs.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.offsets.len()
    }

    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    /// Constraint matrix after row rescaling.
    pub fn constraints(&self) -> &DMatrix<Rational> {
        &self.constraints
    }

    /// Constraint offsets after row rescaling.
    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    pub fn bits(&self) -> &[u32] {
        &self.bits
    }

    pub fn quadratic(&self) -> Option<&DMatrix<Rational>> {
        self.quadratic.as_ref()
    }

    pub fn row_scales(&self) -> &[Rational] {
        &self.row_scales
    }

    /// Largest representable value of every decision variable.
    pub fn upper_bounds(&self) -> Vec<i128> {
        self.bits.iter().map(|&r| (1i128 << r) - 1).collect()
    }

    /// Number of points in the integer box, if it fits in a `u128`.
    pub fn box_size(&self) -> Option<u128> {
        let total: u32 = self.bits.iter().sum();
        1u128.checked_shl(total)
    }

    /// `cᵀx + xᵀdx`.
    pub fn objective(&self, x: &[i128]) -> Rational {
        let mut value = Rational::zero();
        for (c, &xi) in self.costs.iter().zip(x) {
            value += *c * Rational::from_integer(xi);
        }
        if let Some(d) = &self.quadratic {
            for i in 0..x.len() {
                for j in 0..x.len() {
                    value += d[(i, j)] * Rational::from_integer(x[i] * x[j]);
                }
            }
        }
        value
    }

    /// Row residuals `A x + s + b`.
    pub fn residuals(&self, x: &[i128], s: &[i128]) -> Vec<Rational> {
        (0..self.num_constraints())
            .map(|a| {
                let mut r = self.offsets[a] + Rational::from_integer(s[a]);
                for (i, &xi) in x.iter().enumerate() {
                    r += self.constraints[(a, i)] * Rational::from_integer(xi);
                }
                r
            })
            .collect()
    }

    /// `A x + b ≤ 0` for every row.
    pub fn is_feasible(&self, x: &[i128]) -> bool {
        let zeros = vec![0; self.num_constraints()];
        self.residuals(x, &zeros).iter().all(|r| !r.is_positive())
    }

    /// The penalized objective evaluated directly on integers:
    /// `cᵀx + xᵀdx + p‖A x + s + b‖²`.
    pub fn chi_squared(&self, x: &[i128], s: &[i128], penalty: Rational) -> Rational {
        let violation: Rational = self.residuals(x, s).iter().map(|r| *r * *r).sum();
        self.objective(x) + penalty * violation
    }

    /// Bounds of the objective over the integer box.
    pub fn objective_bounds(&self) -> (Rational, Rational) {
        let ub = self.upper_bounds();
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        let mut accumulate = |coefficient: Rational, extent: i128| {
            let term = coefficient * Rational::from_integer(extent);
            if term.is_positive() {
                hi += term;
            } else {
                lo += term;
            }
        };
        for (c, &u) in self.costs.iter().zip(&ub) {
            accumulate(*c, u);
        }
        if let Some(d) = &self.quadratic {
            for i in 0..ub.len() {
                for j in 0..ub.len() {
                    accumulate(d[(i, j)], ub[i] * ub[j]);
                }
            }
        }
        (lo, hi)
    }

    /// Unit-cost binary covering program: every cost is one, every variable
    /// a single bit and every row reads `Σ_{j∈S} x_j ≥ 1`.
    pub fn is_unit_covering(&self) -> bool {
        self.num_constraints() > 0
            && self.quadratic.as_ref().is_none_or(|d| d.iter().all(Zero::is_zero))
            && self.costs.iter().all(One::is_one)
            && self.bits.iter().all(|&r| r == 1)
            && self.offsets.iter().all(One::is_one)
            && self.constraints.iter().all(|v| v.is_zero() || *v == -Rational::one())
    }
}

/// Bit widths of the slack variables, one per constraint row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlackSpec {
    widths: Vec<u32>,
}

impl SlackSpec {
    /// Explicit widths, overriding the minimal ones.
    pub fn with_widths(widths: Vec<u32>) -> Result<Self, IlpError> {
        match widths.iter().find(|&&w| w == 0 || w > MAX_VARIABLE_BITS) {
            Some(&w) => Err(IlpError::BitWidth(w)),
            None => Ok(Self { widths }),
        }
    }

    pub fn widths(&self) -> &[u32] {
        &self.widths
    }
}

/// Largest slack `max −(A x + b)_a` any point of the box can require, per row.
pub fn slack_ranges(ilp: &IntegerLinearProgram) -> Vec<Rational> {
    let ub = ilp.upper_bounds();
    (0..ilp.num_constraints())
        .map(|a| {
            let mut range = -ilp.offsets()[a];
            for (i, &u) in ub.iter().enumerate() {
                let coefficient = -ilp.constraints()[(a, i)];
                if coefficient.is_positive() {
                    range += coefficient * Rational::from_integer(u);
                }
            }
            range
        })
        .collect()
}

/// Minimal slack widths such that every attainable slack value is representable.
pub fn introduce_slacks(ilp: &IntegerLinearProgram) -> Result<SlackSpec, IlpError> {
    let mut widths = Vec::with_capacity(ilp.num_constraints());
    for (row, range) in slack_ranges(ilp).into_iter().enumerate() {
        if range.is_negative() {
            return Err(IlpError::Infeasible { row, max_slack: range });
        }
        let range = range.to_integer().to_u128().ok_or(IlpError::Overflow)?;
        let width = bit_width(range);
        if width > MAX_VARIABLE_BITS {
            return Err(IlpError::BitWidth(width));
        }
        widths.push(width);
    }
    Ok(SlackSpec { widths })
}

/// Role of a bit in the compiled problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BitRole {
    /// Bit of a decision variable `x_i`.
    Decision,
    /// Bit of a slack variable `s_a`.
    Slack,
    /// Spin of a model given directly in QUBO/Ising form.
    Free,
}

/// Which integer a bit belongs to and its binary position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitLabel {
    pub role: BitRole,
    pub owner: usize,
    pub position: u32,
}

/// Block-diagonal map `(x, s) = T Ψ` from bits to integers.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryEncoding {
    x_widths: Vec<u32>,
    s_widths: Vec<u32>,
    t_x: DMatrix<Rational>,
    t_s: DMatrix<Rational>,
}

fn weight_matrix(widths: &[u32]) -> DMatrix<Rational> {
    let total: usize = widths.iter().map(|&w| w as usize).sum();
    let mut t = DMatrix::from_element(widths.len(), total, Rational::zero());
    let mut col = 0;
    for (row, &w) in widths.iter().enumerate() {
        for r in 0..w {
            t[(row, col)] = Rational::from_integer(1i128 << r);
            col += 1;
        }
    }
    t
}

/// Builds `T_x` and `T_s` from the program's bit widths and the slack widths.
pub fn build_encoding(ilp: &IntegerLinearProgram, slacks: &SlackSpec) -> Result<BinaryEncoding, IlpError> {
    if slacks.widths().len() != ilp.num_constraints() {
        return Err(IlpError::Shape {
            what: "slack widths",
            expected: ilp.num_constraints(),
            found: slacks.widths().len(),
        });
    }
    Ok(BinaryEncoding::new(ilp.bits().to_vec(), slacks.widths().to_vec()))
}

impl BinaryEncoding {
    pub fn new(x_widths: Vec<u32>, s_widths: Vec<u32>) -> Self {
        let t_x = weight_matrix(&x_widths);
        let t_s = weight_matrix(&s_widths);
        Self { x_widths, s_widths, t_x, t_s }
    }

    pub fn t_x(&self) -> &DMatrix<Rational> {
        &self.t_x
    }

    pub fn t_s(&self) -> &DMatrix<Rational> {
        &self.t_s
    }

    /// The full block-diagonal `T`.
    pub fn t(&self) -> DMatrix<Rational> {
        let (nx, kx) = self.t_x.shape();
        let (ns, ks) = self.t_s.shape();
        let mut t = DMatrix::from_element(nx + ns, kx + ks, Rational::zero());
        t.view_mut((0, 0), (nx, kx)).copy_from(&self.t_x);
        t.view_mut((nx, kx), (ns, ks)).copy_from(&self.t_s);
        t
    }

    pub fn x_widths(&self) -> &[u32] {
        &self.x_widths
    }

    pub fn s_widths(&self) -> &[u32] {
        &self.s_widths
    }

    /// Number of decision bits `Σ R_x`.
    pub fn x_bits(&self) -> usize {
        self.t_x.ncols()
    }

    /// Total number of bits `K = Σ R_x + Σ R_s`.
    pub fn num_bits(&self) -> usize {
        self.t_x.ncols() + self.t_s.ncols()
    }

    /// Bit labels in `(Ψ_x, Ψ_s)` order.
    pub fn labels(&self) -> Vec<BitLabel> {
        let block = |role, widths: &[u32]| {
            widths
                .iter()
                .enumerate()
                .flat_map(move |(owner, &w)| (0..w).map(move |position| BitLabel { role, owner, position }))
                .collect::<Vec<_>>()
        };
        let mut labels = block(BitRole::Decision, &self.x_widths);
        labels.extend(block(BitRole::Slack, &self.s_widths));
        labels
    }

    /// Splits a bit vector into the decision and slack integers.
    pub fn decode(&self, psi: &[u8]) -> (Vec<i128>, Vec<i128>) {
        let mut bits = psi.iter();
        let mut take = |widths: &[u32]| -> Vec<i128> {
            widths
                .iter()
                .map(|&w| (0..w).fold(0i128, |acc, r| acc | ((*bits.next().unwrap_or(&0) as i128 & 1) << r)))
                .collect()
        };
        let x = take(&self.x_widths);
        let s = take(&self.s_widths);
        (x, s)
    }

    /// Inverse of [`decode`](Self::decode) for in-range integers.
    pub fn encode(&self, x: &[i128], s: &[i128]) -> Vec<u8> {
        let mut psi = Vec::with_capacity(self.num_bits());
        for (&value, &w) in x.iter().zip(&self.x_widths).chain(s.iter().zip(&self.s_widths)) {
            psi.extend((0..w).map(|r| ((value >> r) & 1) as u8));
        }
        psi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i128) -> Rational {
        Rational::from_integer(v)
    }

    fn ints(v: &[i128]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn single_edge_mds_slacks_are_one_bit() {
        let ilp = IntegerLinearProgram::new(
            ints(&[1, 1]),
            vec![ints(&[-1, -1]), ints(&[-1, -1])],
            ints(&[1, 1]),
            vec![1, 1],
        )
        .unwrap();
        assert_eq!(introduce_slacks(&ilp).unwrap().widths(), &[1, 1]);
    }

    #[test]
    fn degenerate_constraint_floors_at_one_bit() {
        let ilp = IntegerLinearProgram::new(ints(&[1]), vec![ints(&[0])], ints(&[0]), vec![1]).unwrap();
        assert_eq!(introduce_slacks(&ilp).unwrap().widths(), &[1]);
    }

    #[test]
    fn slack_width_matches_box_enumeration() {
        let ilp = IntegerLinearProgram::new(ints(&[1]), vec![ints(&[-1])], ints(&[1]), vec![2]).unwrap();
        // max over x in 0..=3 of -(−x + 1) = x − 1
        let max = (0..=3).map(|x| x - 1).max().unwrap();
        assert_eq!(max, 2);
        assert_eq!(introduce_slacks(&ilp).unwrap().widths(), &[bit_width(max as u128)]);
        assert_eq!(introduce_slacks(&ilp).unwrap().widths(), &[2]);
    }

    #[test]
    fn unsatisfiable_row_is_reported() {
        let ilp = IntegerLinearProgram::new(ints(&[1]), vec![ints(&[1])], ints(&[1]), vec![1]).unwrap();
        assert!(matches!(introduce_slacks(&ilp), Err(IlpError::Infeasible { row: 0, .. })));
    }

    #[test]
    fn fractional_rows_are_rescaled() {
        let half = Rational::new(1, 2);
        let third = Rational::new(1, 3);
        let ilp = IntegerLinearProgram::new(ints(&[1, 1]), vec![vec![-half, -third]], vec![half], vec![1, 1]).unwrap();
        assert_eq!(ilp.row_scales(), &[int(6)]);
        assert_eq!(ilp.constraints()[(0, 0)], int(-3));
        assert_eq!(ilp.constraints()[(0, 1)], int(-2));
        assert_eq!(ilp.offsets(), &[int(3)]);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            IntegerLinearProgram::new(ints(&[1, 1]), vec![], vec![], vec![1]),
            Err(IlpError::Shape { .. })
        ));
        assert!(matches!(
            IntegerLinearProgram::new(ints(&[1]), vec![], vec![], vec![0]),
            Err(IlpError::BitWidth(0))
        ));
    }

    #[test]
    fn worked_encoding_example() {
        let enc = BinaryEncoding::new(vec![1, 2], vec![]);
        let expected = DMatrix::from_row_slice(2, 3, &ints(&[1, 0, 0, 0, 1, 2]));
        assert_eq!(enc.t_x(), &expected);
    }

    #[test]
    fn single_bit_encoding_is_identity() {
        let enc = BinaryEncoding::new(vec![1; 4], vec![]);
        assert_eq!(enc.t_x(), &DMatrix::from_fn(4, 4, |i, j| if i == j { int(1) } else { int(0) }));
    }

    #[test]
    fn uniform_widths_are_a_kronecker_product() {
        let enc = BinaryEncoding::new(vec![3; 2], vec![]);
        let weights = DMatrix::from_row_slice(1, 3, &ints(&[1, 2, 4]));
        let identity = DMatrix::from_fn(2, 2, |i, j| if i == j { int(1) } else { int(0) });
        assert_eq!(enc.t_x(), &identity.kronecker(&weights));
    }

    #[test]
    fn binary_expansion() {
        let enc = BinaryEncoding::new(vec![3], vec![]);
        assert_eq!(enc.decode(&[1, 0, 1]).0, vec![5]);
        assert_eq!(enc.encode(&[5], &[]), vec![1, 0, 1]);
    }

    #[test]
    fn block_diagonal_t() {
        let enc = BinaryEncoding::new(vec![1, 2], vec![2]);
        let t = enc.t();
        assert_eq!(t.shape(), (3, 5));
        assert_eq!(t[(2, 3)], int(1));
        assert_eq!(t[(2, 4)], int(2));
        assert_eq!(t[(0, 3)], int(0));
    }
}
