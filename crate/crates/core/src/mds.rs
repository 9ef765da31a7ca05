//! Minimum dominating sets: graphs, the ILP formulation, the closed-form
//! QUBO and analytic results for path graphs.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::IlpError;
use crate::ilp::{introduce_slacks, BinaryEncoding, IntegerLinearProgram};
use crate::qubo::{symmetrize, QuboProblem};
use crate::scalar::{bit_width, Rational};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<bool>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphError {
    NoVertices,
    VertexOutOfRange(usize, usize),
    SelfLoop(usize),
}

impl core::fmt::Display for GraphError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GraphError::NoVertices => write!(f, "graph needs at least one vertex"),
            GraphError::VertexOutOfRange(u, v) => write!(f, "edge ({u}, {v}) references a missing vertex"),
            GraphError::SelfLoop(v) => write!(f, "self loop on vertex {v}"),
        }
    }
}

impl core::error::Error for GraphError {}

impl Graph {
    /// Duplicate edges are merged.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut adjacency = vec![vec![false; n]; n];
        let mut kept = Vec::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange(u, v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !adjacency[u][v] {
                adjacency[u][v] = true;
                adjacency[v][u] = true;
                kept.push((u.min(v), u.max(v)));
            }
        }
        kept.sort_unstable();
        Ok(Self { n, edges: kept, adjacency })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u][v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].iter().filter(|&&a| a).count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().enumerate().filter(|(_, &a)| a).map(|(u, _)| u)
    }

    /// 0/1 adjacency matrix `J`.
    pub fn adjacency_matrix(&self) -> DMatrix<Rational> {
        DMatrix::from_fn(self.n, self.n, |i, j| {
            if self.adjacency[i][j] {
                Rational::from_integer(1)
            } else {
                Rational::zero()
            }
        })
    }

    /// `N(D) ∪ D = V`.
    pub fn is_dominating(&self, set: &[bool]) -> bool {
        (0..self.n).all(|v| set[v] || self.neighbors(v).any(|u| set[u]))
    }
}

/// Path graph `0 - 1 - … - (n-1)`.
pub fn linear_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n.max(1), &edges).expect("path edges are valid")
}

/// `min Σ x_v` subject to `x_v + Σ_{j∈N(v)} x_j ≥ 1`, i.e. `A = −(I + J)`,
/// `b = 1`, single-bit variables.
pub fn mds_to_ilp(g: &Graph) -> IntegerLinearProgram {
    let n = g.num_vertices();
    let one = Rational::from_integer(1);
    let rows = (0..n)
        .map(|v| {
            (0..n)
                .map(|u| if u == v || g.adjacent(u, v) { -one } else { Rational::zero() })
                .collect()
        })
        .collect();
    IntegerLinearProgram::new(vec![one; n], rows, vec![one; n], vec![1; n]).expect("well-formed by construction")
}

/// Slack widths `⌈log₂(|N(v)| + 1)⌉` (at least one bit).
pub fn mds_slack_widths(g: &Graph) -> Vec<u32> {
    (0..g.num_vertices()).map(|v| bit_width(g.degree(v) as u128)).collect()
}

/// Qubits before embedding: one per vertex plus the slack bits.
pub fn qubit_count(g: &Graph) -> usize {
    g.num_vertices() + mds_slack_widths(g).iter().map(|&w| w as usize).sum::<usize>()
}

/// Encoding used by both MDS constructions.
pub fn mds_encoding(g: &Graph) -> BinaryEncoding {
    BinaryEncoding::new(vec![1; g.num_vertices()], mds_slack_widths(g))
}

/// The dominating-set QUBO assembled block by block:
///
/// ```text
/// Q_xx = I + p[JᵀJ + Jᵀ + J − diag(Jᵀ1 + 1ᵀJ) − I]
/// Q_xs = −p(I + J)ᵀ T_s
/// Q_ss = p[T_sᵀT_s + diag(T_sᵀ1 + 1ᵀT_s)]
/// C    = p·n_V
/// ```
pub fn mds_qubo_closed_form(g: &Graph, penalty: Rational) -> Result<QuboProblem, IlpError> {
    if penalty <= Rational::zero() {
        return Err(IlpError::NonPositivePenalty(penalty));
    }
    let n = g.num_vertices();
    let enc = mds_encoding(g);
    let t_s = enc.t_s();
    let ks = t_s.ncols();
    let identity = DMatrix::<Rational>::identity(n, n);
    let j = g.adjacency_matrix();
    let ones_n = DMatrix::from_element(n, 1, Rational::from_integer(1));
    let p = penalty;

    let degrees = j.transpose() * &ones_n + (ones_n.transpose() * &j).transpose();
    let q_xx = &identity
        + (j.transpose() * &j + j.transpose() + &j - DMatrix::from_diagonal(&degrees.column(0).into_owned()) - &identity)
            * p;
    let q_xs = -((&identity + &j).transpose() * t_s) * p;
    let slack_weights = t_s.transpose() * &ones_n + (ones_n.transpose() * t_s).transpose();
    let q_ss = (t_s.transpose() * t_s + DMatrix::from_diagonal(&slack_weights.column(0).into_owned())) * p;

    let k = n + ks;
    let mut q = DMatrix::from_element(k, k, Rational::zero());
    q.view_mut((0, 0), (n, n)).copy_from(&q_xx);
    q.view_mut((0, n), (n, ks)).copy_from(&q_xs);
    q.view_mut((n, 0), (ks, n)).copy_from(&q_xs.transpose());
    q.view_mut((n, n), (ks, ks)).copy_from(&q_ss);
    let constant = p * Rational::from_integer(n as i128);
    Ok(QuboProblem::from_parts(symmetrize(&q), constant, Some(penalty), enc.labels()))
}

/// Domination number and solution count of the path graph `G(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathDomination {
    pub domination_number: u64,
    pub solution_count: u64,
    pub n: u32,
}

impl PathDomination {
    /// Chance of hitting a minimum dominating set by drawing `x` uniformly.
    pub fn guess_probability(&self) -> Rational {
        Rational::new(self.solution_count as i128, 1i128 << self.n)
    }

    /// Same, with the slack bits also drawn uniformly (`K` bits in total).
    pub fn guess_probability_with_slacks(&self, total_bits: u32) -> Rational {
        Rational::new(self.solution_count as i128, 1i128 << total_bits)
    }
}

pub fn mds_analytics(n: u32) -> PathDomination {
    assert!(n >= 1, "path graphs need at least one vertex");
    let third = (n / 3) as u64;
    let solution_count = match n % 3 {
        0 => 1,
        1 => 2 * third + 1,
        _ => third + 2,
    };
    PathDomination { domination_number: n.div_ceil(3) as u64, solution_count, n }
}

/// Minimal slack widths computed from the generic rule agree with the
/// degree-based widths.
pub fn generic_slack_widths(g: &Graph) -> Vec<u32> {
    introduce_slacks(&mds_to_ilp(g)).expect("dominating-set rows are satisfiable").widths().to_vec()
}
