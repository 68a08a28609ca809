//! Invariant suite behind `rkbvp verify`.

use std::fmt;

use rkbvp::kernel::Branch;
use rkbvp::{
    build_kernel_section, homogenize, solve_collocation, solve_linear, BivariateKernel, NodeSet, SeriesSolution,
};

use crate::examples::{builtin_example, ExampleId};
use crate::quadrature::w6_inner;
use crate::run::{solve_spec, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<4} {:<34} {}", if self.passed { "ok" } else { "FAIL" }, self.name, self.detail)
    }
}

fn check(name: &'static str, worst: f64, limit: f64) -> Check {
    Check { name, passed: worst <= limit, detail: format!("max {worst:.3e} (limit {limit:.0e})") }
}

fn failed(name: &'static str, err: impl fmt::Display) -> Check {
    Check { name, passed: false, detail: err.to_string() }
}

const SAMPLE_Y: [f64; 9] = [0.0, 0.05, 0.2, 0.33, 0.5, 0.61, 0.77, 0.95, 1.0];

/// `x³(1 − x)² · x^extra` and its derivatives.
fn test_function(extra: i32) -> impl Fn(f64, usize) -> f64 {
    move |x, k| {
        // expand x^(3+extra) − 2x^(4+extra) + x^(5+extra)
        [(3 + extra, 1.0), (4 + extra, -2.0), (5 + extra, 1.0)]
            .iter()
            .map(|&(n, c)| {
                if (k as i32) > n {
                    0.0
                } else {
                    let ff: f64 = (0..k as i32).map(|j| (n - j) as f64).product();
                    c * ff * x.powi(n - k as i32)
                }
            })
            .sum()
    }
}

pub fn kernel_checks(kernel: &BivariateKernel) -> Vec<Check> {
    let mut out = Vec::new();

    let mut bc = 0.0f64;
    let mut cont = 0.0f64;
    let mut jump = 0.0f64;
    for &y in &SAMPLE_Y {
        let s = kernel.section(y);
        for (x, k) in [(0.0, 0), (0.0, 1), (0.0, 2), (1.0, 0), (1.0, 1)] {
            bc = bc.max(s.eval(x, k).unwrap_or(f64::INFINITY).abs());
        }
        for k in 0..=10 {
            cont = cont.max((s.branch_derivative(Branch::Hi, y, k) - s.branch_derivative(Branch::Lo, y, k)).abs());
        }
        jump = jump.max((s.branch_derivative(Branch::Hi, y, 11) - s.branch_derivative(Branch::Lo, y, 11) - 1.0).abs());
    }
    out.push(check("kernel boundary conditions", bc, 1e-9));
    out.push(check("kernel continuity (orders 0-10)", cont, 1e-9));
    out.push(check("kernel jump (order 11)", jump, 1e-6));

    let mut sym = 0.0f64;
    for &x in &SAMPLE_Y {
        for &y in &SAMPLE_Y {
            match (build_kernel_section(y), build_kernel_section(x)) {
                (Ok(sy), Ok(sx)) => {
                    sym = sym.max((sy.eval(x, 0).unwrap_or(f64::NAN) - sx.eval(y, 0).unwrap_or(f64::NAN)).abs())
                }
                (Err(e), _) | (_, Err(e)) => return vec![failed("kernel symmetry", e)],
            }
        }
    }
    out.push(check("kernel symmetry", if sym.is_nan() { f64::INFINITY } else { sym }, 1e-10));

    let mut repro = 0.0f64;
    for &y in &SAMPLE_Y[1..8] {
        let s = kernel.section(y);
        for extra in [0, 2, 6] {
            let u = test_function(extra);
            let ip = w6_inner(&u, |x, k| s.eval(x, k).unwrap_or(f64::NAN), &[y]);
            repro = repro.max((ip - u(y, 0)).abs());
        }
    }
    out.push(check("reproducing property", repro, 1e-6));
    out
}

fn boundary_defect(s: &SeriesSolution<'_>) -> f64 {
    [(0.0, 0), (0.0, 1), (0.0, 2), (1.0, 0), (1.0, 1)]
        .iter()
        .map(|&(t, k)| s.homogeneous(t, k).abs())
        .fold(0.0, f64::max)
}

pub fn solver_checks(kernel: &BivariateKernel) -> Vec<Check> {
    let mut out = Vec::new();
    let config = RunConfig::example(ExampleId::Ex41);

    let mut ortho = 0.0f64;
    let mut boundary = 0.0f64;
    for id in ExampleId::ALL {
        match solve_spec(kernel, &builtin_example(id), &config) {
            Ok(s) => {
                ortho = ortho.max(s.basis.orthonormality_defect());
                boundary = boundary.max(boundary_defect(&s));
            }
            Err(e) => {
                out.push(failed("solve built-in examples", format!("{id}: {e}")));
                return out;
            }
        }
    }
    out.push(check("orthonormality B G Bt = I", ortho, 1e-8));
    out.push(check("homogeneous boundary values", boundary, 1e-7));

    let spec = builtin_example(ExampleId::Ex41);
    let result = homogenize(&spec)
        .map_err(|e| e.to_string())
        .and_then(|h| NodeSet::equispaced(36).map(|n| (h, n)).map_err(|e| e.to_string()))
        .and_then(|(h, nodes)| {
            let a = solve_linear(kernel, &h, &nodes).map_err(|e| e.to_string())?;
            let b = solve_collocation(kernel, &h, &nodes).map_err(|e| e.to_string())?;
            Ok((a, b))
        });
    let (a, b) = match result {
        Ok(pair) => pair,
        Err(e) => {
            out.push(failed("example 4.1 linear solves", e));
            return out;
        }
    };

    let dual = (0..=10)
        .map(|i| i as f64 / 10.0)
        .map(|x| match (a.evaluate(x, 0), b.evaluate(x, 0)) {
            (Ok(p), Ok(q)) => (p - q).abs(),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    out.push(check("dual-path agreement", dual, 1e-8));

    let residual = a.nodal_residuals().into_iter().map(f64::abs).fold(0.0, f64::max);
    out.push(check("nodal residuals", residual, 1e-7));

    let sums = a.parseval_partial_norms();
    let violation = sums.windows(2).map(|w| (w[0] - w[1]).max(0.0)).fold(0.0, f64::max);
    out.push(check("Parseval sums nondecreasing", violation, 1e-12));
    out
}

pub fn verify_suite(kernel: &BivariateKernel) -> Vec<Check> {
    let mut checks = kernel_checks(kernel);
    checks.extend(solver_checks(kernel));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_function_derivatives() {
        let u = test_function(0);
        assert_eq!(u(0.5, 0), 0.125 * 0.25);
        assert_eq!(u(0.0, 3), 6.0);
        assert_eq!(u(0.3, 6), 0.0);
        assert_eq!(test_function(1)(0.0, 6), 720.0);
    }

    #[test]
    fn suite_passes() {
        let k = rkbvp::build_bivariate_kernel().unwrap();
        for c in verify_suite(&k) {
            assert!(c.passed, "{c}");
        }
    }
}
