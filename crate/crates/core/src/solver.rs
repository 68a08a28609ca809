//! Truncated-series solution in the W₂⁶ reproducing kernel space.
//!
//! For nodes `t₁ < … < tₙ` the basis element `Ψᵢ` is the representer of
//! the functional `u ↦ (Lu)(tᵢ)`:
//!
//! ```text
//! Ψᵢ(t) = Σ_q a_q(tᵢ) ∂_η^q R(t, η) |_{η = tᵢ}        (a₅ = 1)
//! Gᵢⱼ  = ⟨Ψᵢ, Ψⱼ⟩ = Σ_p Σ_q a_p(tᵢ) a_q(tⱼ) ∂ₓ^p ∂_η^q R(tᵢ, tⱼ)
//! ```
//!
//! With `G = L Lᵀ` (Cholesky) the Gram-Schmidt coefficients are
//! `B = L⁻¹`, lower triangular with positive diagonal, and the solution is
//! `uₙ = Σᵢ (B g)ᵢ Ψ̄ᵢ` where `Ψ̄ᵢ = Σₖ Bᵢₖ Ψₖ`.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::kernel::{BivariateKernel, KernelError};
use crate::linalg::{cholesky, lower_triangular_inverse, LinalgError, Lu, Matrix};
use crate::problem::{HomogenizedBvp, ProblemError};

/// Operator coefficients at a node: entry `p` multiplies `u⁽ᵖ⁾`, entry 5 is 1.
pub type OperatorRow = [f64; 6];

/// Highest derivative of a basis function the solver ever needs.
pub const MAX_PSI_ORDER: usize = 5;

const JITTER_FACTOR: f64 = 1e-12;
const MAX_HALVINGS: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("node set is empty")]
    EmptyNodes,
    #[error("node {index} ({value}) is outside [0, 1]")]
    NodeOutOfRange { index: usize, value: f64 },
    #[error("nodes are not strictly increasing at index {index}")]
    NodesNotIncreasing { index: usize },
    #[error("Gram matrix is not positive definite (pivot {pivot}); duplicate nodes or a kernel defect")]
    NotPositiveDefinite { pivot: usize },
    #[error("node {index} (t = {t}): {source}")]
    Node {
        index: usize,
        t: f64,
        #[source]
        source: ProblemError,
    },
    #[error("non-finite Gram entry ({0}, {1})")]
    NonFiniteGram(usize, usize),
    #[error("right-hand side depends on u; use the nonlinear solver")]
    NonlinearRhs,
    #[error("x = {0} lies outside the problem interval")]
    OutOfInterval(f64),
    #[error("derivative order {0} is not supported here")]
    OrderTooHigh(usize),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Strictly increasing collocation nodes in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet(Vec<f64>);

impl NodeSet {
    pub fn new(nodes: Vec<f64>) -> Result<Self, SolveError> {
        if nodes.is_empty() {
            return Err(SolveError::EmptyNodes);
        }
        for (index, &value) in nodes.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(SolveError::NodeOutOfRange { index, value });
            }
            if index > 0 && value <= nodes[index - 1] {
                return Err(SolveError::NodesNotIncreasing { index });
            }
        }
        Ok(NodeSet(nodes))
    }

    /// `n` equally spaced nodes including both endpoints (`n = 1` gives 0.5).
    pub fn equispaced(n: usize) -> Result<Self, SolveError> {
        match n {
            0 => Err(SolveError::EmptyNodes),
            1 => NodeSet::new(vec![0.5]),
            _ => NodeSet::new((0..n).map(|i| i as f64 / (n - 1) as f64).collect()),
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[inline]
fn psi_unchecked(kernel: &BivariateKernel, op: &OperatorRow, node: f64, t: f64, order: usize) -> f64 {
    let mut acc = 0.0;
    for (q, &a) in op.iter().enumerate() {
        if a != 0.0 {
            acc += a * kernel.eval_unchecked(t, node, order, q);
        }
    }
    acc
}

/// k-th derivative of `Ψᵢ` at `t`, where `f_at_node` holds `f₀(tᵢ)..f₄(tᵢ)`
/// (already scaled to `[0, 1]`).
pub fn psi_eval(
    kernel: &BivariateKernel,
    f_at_node: &[f64; 5],
    node: f64,
    t: f64,
    order: usize,
) -> Result<f64, SolveError> {
    if order > MAX_PSI_ORDER {
        return Err(SolveError::OrderTooHigh(order));
    }
    for v in [node, t] {
        if !(0.0..=1.0).contains(&v) {
            return Err(SolveError::Kernel(KernelError::OutOfDomain(v)));
        }
    }
    let op = [f_at_node[0], f_at_node[1], f_at_node[2], f_at_node[3], f_at_node[4], 1.0];
    Ok(psi_unchecked(kernel, &op, node, t, order))
}

/// Operator coefficients of a homogenized problem at every node.
pub fn operator_rows(h: &HomogenizedBvp, nodes: &NodeSet) -> Result<Vec<OperatorRow>, SolveError> {
    nodes
        .as_slice()
        .iter()
        .enumerate()
        .map(|(index, &t)| h.operator_at(t).map_err(|source| SolveError::Node { index, t, source }))
        .collect()
}

/// Unsymmetrized Gram matrix `Gᵢⱼ = (LΨⱼ)(tᵢ)` for the given operator rows.
pub fn assemble_gram(kernel: &BivariateKernel, nodes: &NodeSet, ops: &[OperatorRow]) -> Result<Matrix, SolveError> {
    let t = nodes.as_slice();
    let n = t.len();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for (p, &ap) in ops[i].iter().enumerate() {
                if ap == 0.0 {
                    continue;
                }
                acc += ap * psi_unchecked(kernel, &ops[j], t[j], t[i], p);
            }
            if !acc.is_finite() {
                return Err(SolveError::NonFiniteGram(i, j));
            }
            g[(i, j)] = acc;
        }
    }
    Ok(g)
}

/// Symmetrized Gram matrix `⟨Ψᵢ, Ψⱼ⟩` for a homogenized problem.
pub fn gram_matrix(kernel: &BivariateKernel, nodes: &NodeSet, h: &HomogenizedBvp) -> Result<Matrix, SolveError> {
    let ops = operator_rows(h, nodes)?;
    Ok(assemble_gram(kernel, nodes, &ops)?.symmetrized())
}

/// Cholesky factor of `G`, retrying once with diagonal jitter.
fn factor(g: &Matrix) -> Result<(Matrix, f64), SolveError> {
    match cholesky(g) {
        Ok(l) => Ok((l, 0.0)),
        Err(_) => {
            let n = g.rows();
            let jitter = JITTER_FACTOR * g.trace() / n as f64;
            let mut shifted = g.clone();
            for i in 0..n {
                shifted[(i, i)] += jitter;
            }
            match cholesky(&shifted) {
                Ok(l) => Ok((l, jitter)),
                Err(LinalgError::NotPositiveDefinite { index, .. }) => {
                    Err(SolveError::NotPositiveDefinite { pivot: index })
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

/// Gram-Schmidt coefficients `B` (lower triangular, `Bᵢᵢ > 0`, `B G Bᵀ = I`).
pub fn gram_schmidt(g: &Matrix) -> Result<Matrix, SolveError> {
    let (l, _) = factor(g)?;
    Ok(lower_triangular_inverse(&l)?)
}

/// Nodes, operator rows and the orthonormalization of `{Ψᵢ}`.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    pub nodes: NodeSet,
    pub ops: Vec<OperatorRow>,
    pub gram: Matrix,
    pub beta: Matrix,
    /// Cholesky factor of `gram` (`beta = chol⁻¹`).
    pub chol: Matrix,
    /// Diagonal jitter that had to be added, zero in the normal case.
    pub jitter: f64,
}

impl OrthonormalBasis {
    pub fn build(kernel: &BivariateKernel, nodes: NodeSet, ops: Vec<OperatorRow>) -> Result<Self, SolveError> {
        let gram = assemble_gram(kernel, &nodes, &ops)?.symmetrized();
        let (chol, jitter) = factor(&gram)?;
        let beta = lower_triangular_inverse(&chol)?;
        Ok(OrthonormalBasis { nodes, ops, gram, beta, chol, jitter })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `‖B G Bᵀ − I‖_max`.
    pub fn orthonormality_defect(&self) -> f64 {
        let bgbt = self.beta.matmul(&self.gram).matmul(&self.beta.transpose());
        bgbt.max_abs_diff(&Matrix::identity(self.len()))
    }

    /// k-th derivative of the raw basis element `Ψⱼ` at `t`.
    pub fn psi(&self, kernel: &BivariateKernel, j: usize, t: f64, order: usize) -> f64 {
        psi_unchecked(kernel, &self.ops[j], self.nodes.as_slice()[j], t, order)
    }

    /// k-th derivative of the orthonormal element `Ψ̄ᵢ` at `t`.
    pub fn psi_bar(&self, kernel: &BivariateKernel, i: usize, t: f64, order: usize) -> f64 {
        (0..=i).map(|k| self.beta[(i, k)] * self.psi(kernel, k, t, order)).sum()
    }
}

/// `uₙ` together with the data needed to evaluate `yₙ` on `[a, b]`.
#[derive(Debug, Clone)]
pub struct SeriesSolution<'k> {
    pub kernel: &'k BivariateKernel,
    pub basis: OrthonormalBasis,
    /// Coordinates in the orthonormal basis `Ψ̄`.
    pub coeffs: Vec<f64>,
    /// Coordinates in the raw basis `Ψ` (`Bᵀ coeffs`).
    pub raw: Vec<f64>,
    /// Right-hand side values `g(tᵢ)` of the (last) linear problem.
    pub data: Vec<f64>,
    pub problem: HomogenizedBvp,
    /// `(iteration, max nodal update)` for nonlinear solves.
    pub iteration_trace: Vec<(usize, f64)>,
    pub converged: bool,
}

impl SeriesSolution<'_> {
    /// k-th derivative (k ≤ 5) of the homogeneous part on `[0, 1]`.
    pub fn homogeneous(&self, t: f64, order: usize) -> f64 {
        self.raw.iter().enumerate().map(|(j, a)| a * self.basis.psi(self.kernel, j, t, order)).sum()
    }

    pub fn values_at_nodes(&self) -> Vec<f64> {
        self.basis.nodes.as_slice().iter().map(|&t| self.homogeneous(t, 0)).collect()
    }

    /// `(L uₙ)(tᵢ) − g(tᵢ)` at every node, with the operator of the last
    /// linear solve.
    pub fn nodal_residuals(&self) -> Vec<f64> {
        let t = self.basis.nodes.as_slice();
        (0..t.len())
            .map(|i| {
                let lu: f64 = self.basis.ops[i]
                    .iter()
                    .enumerate()
                    .map(|(p, a)| if *a == 0.0 { 0.0 } else { a * self.homogeneous(t[i], p) })
                    .sum();
                lu - self.data[i]
            })
            .collect()
    }

    /// `Sₘ = Σᵢ₌₁ᵐ coeffsᵢ²` for `m = 1..n`.
    pub fn parseval_partial_norms(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .scan(0.0, |s, c| {
                *s += c * c;
                Some(*s)
            })
            .collect()
    }

    /// `yₙ⁽ᵏ⁾(x)` on the original interval.
    pub fn evaluate(&self, x: f64, order: usize) -> Result<f64, SolveError> {
        evaluate_solution(self, x, order)
    }

    pub fn iterations(&self) -> usize {
        self.iteration_trace.len()
    }
}

fn nodal_data(h: &HomogenizedBvp, nodes: &NodeSet, u: &[f64]) -> Result<Vec<f64>, SolveError> {
    nodes
        .as_slice()
        .iter()
        .zip(u)
        .enumerate()
        .map(|(index, (&t, &ui))| h.rhs_at(t, ui).map_err(|source| SolveError::Node { index, t, source }))
        .collect()
}

fn project<'k>(
    kernel: &'k BivariateKernel,
    h: &HomogenizedBvp,
    nodes: &NodeSet,
    ops: Vec<OperatorRow>,
    data: Vec<f64>,
) -> Result<SeriesSolution<'k>, SolveError> {
    let basis = OrthonormalBasis::build(kernel, nodes.clone(), ops)?;
    let coeffs = basis.beta.matvec(&data);
    let raw = basis.beta.tr_matvec(&coeffs);
    Ok(SeriesSolution {
        kernel,
        basis,
        coeffs,
        raw,
        data,
        problem: h.clone(),
        iteration_trace: Vec::new(),
        converged: true,
    })
}

/// Truncated series `uₙ = Σᵢ (Σₖ βᵢₖ g(tₖ)) Ψ̄ᵢ` for a linear problem.
pub fn solve_linear<'k>(
    kernel: &'k BivariateKernel,
    h: &HomogenizedBvp,
    nodes: &NodeSet,
) -> Result<SeriesSolution<'k>, SolveError> {
    if h.is_nonlinear() {
        return Err(SolveError::NonlinearRhs);
    }
    let ops = operator_rows(h, nodes)?;
    let data = nodal_data(h, nodes, &vec![0.0; nodes.len()])?;
    project(kernel, h, nodes, ops, data)
}

/// Independent route: solve `G a = g` by LU for the raw coordinates, then
/// convert to orthonormal coordinates.
pub fn solve_collocation<'k>(
    kernel: &'k BivariateKernel,
    h: &HomogenizedBvp,
    nodes: &NodeSet,
) -> Result<SeriesSolution<'k>, SolveError> {
    if h.is_nonlinear() {
        return Err(SolveError::NonlinearRhs);
    }
    let ops = operator_rows(h, nodes)?;
    let data = nodal_data(h, nodes, &vec![0.0; nodes.len()])?;
    let basis = OrthonormalBasis::build(kernel, nodes.clone(), ops)?;
    let raw = Lu::new(&basis.gram)?.solve(&data);
    let coeffs = basis.chol.tr_matvec(&raw);
    Ok(SeriesSolution {
        kernel,
        basis,
        coeffs,
        raw,
        data,
        problem: h.clone(),
        iteration_trace: Vec::new(),
        converged: true,
    })
}

fn rhs_derivative(h: &HomogenizedBvp, t: f64, u: f64) -> Result<f64, ProblemError> {
    let step = 1e-6 * u.abs().max(1.0);
    Ok((h.rhs_at(t, u + step)? - h.rhs_at(t, u - step)?) / (2.0 * step))
}

/// Newton-type successive linearization of the right-hand side.
///
/// Starting from `u⁽⁰⁾ ≡ 0`, each step solves
/// `Lu − J u = rhs(t, u⁽ᵐ⁾) − J u⁽ᵐ⁾` with `J = ∂rhs/∂u (t, u⁽ᵐ⁾)` taken by
/// central differences, until the largest nodal update is at most `tol`.
/// If the update norm grows, the step applied to the nodal iterate is
/// halved (at most five times). Without convergence the iterate with the
/// smallest update is returned with `converged = false`. A right-hand side
/// that does not reference `u` is solved in a single step.
pub fn solve_nonlinear<'k>(
    kernel: &'k BivariateKernel,
    h: &HomogenizedBvp,
    nodes: &NodeSet,
    tol: f64,
    max_iter: usize,
) -> Result<SeriesSolution<'k>, SolveError> {
    let t = nodes.as_slice();
    let base_ops = operator_rows(h, nodes)?;
    let mut u = vec![0.0; t.len()];
    let mut trace = Vec::new();
    let mut best: Option<(f64, SeriesSolution<'k>)> = None;
    let mut previous = f64::INFINITY;
    let mut damping = 1.0;
    let mut halvings = 0;

    for iteration in 1..=max_iter.max(1) {
        let mut ops = base_ops.clone();
        let mut data = Vec::with_capacity(t.len());
        for (index, (&ti, &ui)) in t.iter().zip(&u).enumerate() {
            let at = |source| SolveError::Node { index, t: ti, source };
            let jac = rhs_derivative(h, ti, ui).map_err(at)?;
            let value = h.rhs_at(ti, ui).map_err(at)?;
            ops[index][0] -= jac;
            data.push(value - jac * ui);
        }
        let mut sol = project(kernel, h, nodes, ops, data)?;
        let next = sol.values_at_nodes();
        let update = next.iter().zip(&u).fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()));
        trace.push((iteration, update));

        if update > previous && halvings < MAX_HALVINGS {
            damping *= 0.5;
            halvings += 1;
        }
        for (ui, ni) in u.iter_mut().zip(&next) {
            *ui += damping * (ni - *ui);
        }
        previous = update;

        sol.iteration_trace = trace.clone();
        if update <= tol || !h.is_nonlinear() {
            sol.converged = true;
            return Ok(sol);
        }
        sol.converged = false;
        if best.as_ref().is_none_or(|(b, _)| update < *b) {
            best = Some((update, sol));
        }
    }
    let (_, mut sol) = best.expect("at least one iteration ran");
    sol.iteration_trace = trace;
    sol.converged = false;
    Ok(sol)
}

/// `yₙ⁽ᵏ⁾(x)` for `x` in the original interval and `k ≤ 5`.
pub fn evaluate_solution(s: &SeriesSolution<'_>, x: f64, order: usize) -> Result<f64, SolveError> {
    if order > MAX_PSI_ORDER {
        return Err(SolveError::OrderTooHigh(order));
    }
    let map = s.problem.map;
    let slack = 1e-12 * map.scale();
    if !(x >= map.a - slack && x <= map.b + slack) {
        return Err(SolveError::OutOfInterval(x));
    }
    let t = map.to_unit(x).clamp(0.0, 1.0);
    let scale = libm::pow(map.scale(), -(order as f64));
    Ok(scale * s.homogeneous(t, order) + s.problem.shift.eval(x, order))
}

/// Partial Parseval sums `Sₘ = Σᵢ₌₁ᵐ ⟨u, Ψ̄ᵢ⟩²`, `m = 1..n`, for a linear
/// problem. Nondecreasing by construction; `‖u − uₘ‖² = ‖u‖² − Sₘ`.
pub fn parseval_partial_norms(
    kernel: &BivariateKernel,
    h: &HomogenizedBvp,
    nodes: &NodeSet,
) -> Result<Vec<f64>, SolveError> {
    Ok(solve_linear(kernel, h, nodes)?.parseval_partial_norms())
}
