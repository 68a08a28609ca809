//! Reproducing kernel solver for fifth-order two-point boundary-value
//! problems
//!
//! ```text
//! y⁽⁵⁾ + f₄ y⁽⁴⁾ + … + f₀ y = rhs(x, y),   x ∈ [a, b]
//! y(a) = A₀, y′(a) = A₁, y″(a) = A₂, y(b) = B₀, y′(b) = B₁
//! ```
//!
//! The crate is `no_std` (with `alloc`). Modules:
//!
//! - [`kernel`]: the W₂⁶[0,1] reproducing kernel, built by solving its
//!   defining linear system, and the W₂¹ kernel `1 + min(x, y)`.
//! - [`expr`]: a small expression language for coefficients and
//!   right-hand sides.
//! - [`problem`]: problem description, quartic boundary shift and the map
//!   to `[0, 1]`.
//! - [`solver`]: the operator-image basis, Gram matrix, Cholesky-based
//!   orthonormalization, truncated series and Newton iteration.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dd;
pub mod expr;
pub mod kernel;
pub mod linalg;
pub mod poly;
pub mod problem;
pub mod solver;

pub use expr::{eval_expression, parse_expression, Expr, ExprError};
pub use kernel::{
    bivariate_eval, build_bivariate_kernel, build_kernel_section, kernel_eval, t_kernel, BivariateKernel, KernelError,
    PiecewisePolynomial,
};
pub use problem::{
    homogenize, map_point_back, shift_polynomial, BvpSpec, HomogenizedBvp, ProblemError, ShiftPolynomial,
};
pub use solver::{
    evaluate_solution, gram_matrix, gram_schmidt, parseval_partial_norms, psi_eval, solve_collocation, solve_linear,
    solve_nonlinear, NodeSet, OrthonormalBasis, SeriesSolution, SolveError,
};
