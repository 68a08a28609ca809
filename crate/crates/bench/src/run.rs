//! Solve a problem and tabulate it on an evaluation grid.

use std::path::PathBuf;
use std::time::Instant;

use rkbvp::{
    build_bivariate_kernel, homogenize, solve_linear, solve_nonlinear, BivariateKernel, BvpSpec, NodeSet, ProblemError,
    SeriesSolution,
};

use crate::examples::{builtin_example, ExampleId};
use crate::grid::Grid;
use crate::problem_file::load_problem;
use crate::table::{ErrorTable, OutputFormat, Row, RunMetadata};
use crate::BenchError;

pub const MIN_NODES: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Builtin(ExampleId),
    File(PathBuf),
}

impl ProblemSource {
    pub fn load(&self) -> Result<BvpSpec, BenchError> {
        match self {
            ProblemSource::Builtin(id) => Ok(builtin_example(*id)),
            ProblemSource::File(path) => load_problem(path),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ProblemSource::Builtin(id) => format!("example {id}"),
            ProblemSource::File(path) => path.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: ProblemSource,
    pub nodes: usize,
    pub grid: Grid,
    pub tol: f64,
    pub max_iter: usize,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(source: ProblemSource) -> Self {
        RunConfig { source, nodes: 36, grid: Grid::Default, tol: 1e-10, max_iter: 25, format: OutputFormat::Csv }
    }

    pub fn example(id: ExampleId) -> Self {
        Self::new(ProblemSource::Builtin(id))
    }
}

pub fn run(config: &RunConfig) -> Result<ErrorTable, BenchError> {
    let spec = config.source.load()?;
    let kernel = build_bivariate_kernel()?;
    run_spec(&kernel, &spec, &config.source.label(), config)
}

/// Solve `spec` with a prebuilt kernel; linear or Newton by u-dependence.
pub fn solve_spec<'k>(
    kernel: &'k BivariateKernel,
    spec: &BvpSpec,
    config: &RunConfig,
) -> Result<SeriesSolution<'k>, BenchError> {
    if config.nodes < MIN_NODES {
        return Err(BenchError::TooFewNodes(config.nodes));
    }
    let h = homogenize(spec)?;
    let nodes = NodeSet::equispaced(config.nodes)?;
    let solution = if h.is_nonlinear() {
        solve_nonlinear(kernel, &h, &nodes, config.tol, config.max_iter)?
    } else {
        solve_linear(kernel, &h, &nodes)?
    };
    Ok(solution)
}

pub fn run_spec(
    kernel: &BivariateKernel,
    spec: &BvpSpec,
    label: &str,
    config: &RunConfig,
) -> Result<ErrorTable, BenchError> {
    let (a, b) = spec.interval;
    let xs = config.grid.points(a, b)?;
    let start = Instant::now();
    let s = solve_spec(kernel, spec, config)?;

    let mut rows = Vec::with_capacity(xs.len());
    for &x in &xs {
        let approx = s.evaluate(x, 0)?;
        let row = match spec.exact_at(x) {
            Some(exact) => Row::with_exact(x, exact?, approx),
            None => Row::with_residual(x, approx, residual(spec, &s, x)?),
        };
        rows.push(row);
    }

    Ok(ErrorTable {
        has_exact: spec.exact.is_some(),
        rows,
        meta: RunMetadata {
            source: label.to_string(),
            nodes: config.nodes,
            nonlinear: spec.is_nonlinear(),
            iterations: s.iterations().max(1),
            converged: s.converged,
            wall_time: start.elapsed(),
        },
    })
}

/// `yₙ⁽⁵⁾ + Σ fᵢ yₙ⁽ⁱ⁾ − rhs(x, yₙ)` at `x`.
pub fn residual(spec: &BvpSpec, s: &SeriesSolution<'_>, x: f64) -> Result<f64, BenchError> {
    let mut d = [0.0; 6];
    for (k, slot) in d.iter_mut().enumerate() {
        *slot = s.evaluate(x, k)?;
    }
    let mut lhs = d[5];
    for (i, f) in spec.coeffs.iter().enumerate() {
        let fi = f.eval(x, None).map_err(|source| ProblemError::Eval { what: "coefficient", x, source })?;
        lhs += fi * d[i];
    }
    let rhs = spec.rhs.eval(x, Some(d[0])).map_err(|source| ProblemError::Eval { what: "rhs", x, source })?;
    Ok(lhs - rhs)
}
