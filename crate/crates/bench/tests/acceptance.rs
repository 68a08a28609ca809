//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{rngs::StdRng, Rng, SeedableRng};
use rkbvp::kernel::Branch;
use rkbvp::{
    build_bivariate_kernel, build_kernel_section, homogenize, parse_expression, solve_collocation, solve_linear,
    BivariateKernel, BvpSpec, NodeSet,
};
use rkbvp_bench::grid::{TABLE3, TABLE4};
use rkbvp_bench::quadrature::w6_inner;
use rkbvp_bench::run::solve_spec;
use rkbvp_bench::{builtin_example, run_spec, ExampleId, Grid, RunConfig};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn fail(err: impl std::fmt::Display) -> Outcome {
    outcome(false, format!("error: {err}"))
}

/// `x³(1 − x)² xᵉ` as monomial coefficients.
fn poly(extra: usize) -> Vec<f64> {
    let mut c = vec![0.0; 6 + extra];
    c[3 + extra] = 1.0;
    c[4 + extra] = -2.0;
    c[5 + extra] = 1.0;
    c
}

fn poly_deriv(c: &[f64], x: f64, k: usize) -> f64 {
    c.iter()
        .enumerate()
        .skip(k)
        .map(|(n, a)| a * (0..k).map(|j| (n - j) as f64).product::<f64>() * x.powi((n - k) as i32))
        .sum()
}

fn kernel_validity() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(20240501);
    let test_functions = [poly(0), poly(3), poly(6)];
    let (mut cont, mut jump, mut sym, mut bc, mut repro) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let y: f64 = rng.gen_range(0.0..=1.0);
        let x: f64 = rng.gen_range(0.0..=1.0);
        let (sy, sx) = match (build_kernel_section(y), build_kernel_section(x)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return fail(e),
        };
        for k in 0..=10 {
            cont = cont.max((sy.branch_derivative(Branch::Hi, y, k) - sy.branch_derivative(Branch::Lo, y, k)).abs());
        }
        jump =
            jump.max((sy.branch_derivative(Branch::Hi, y, 11) - sy.branch_derivative(Branch::Lo, y, 11) - 1.0).abs());
        sym = sym.max((sy.eval(x, 0).unwrap() - sx.eval(y, 0).unwrap()).abs());
        for (p, k) in [(0.0, 0), (0.0, 1), (0.0, 2), (1.0, 0), (1.0, 1)] {
            bc = bc.max(sy.eval(p, k).unwrap().abs());
        }
        for c in &test_functions {
            let ip = w6_inner(|t, k| poly_deriv(c, t, k), |t, k| sy.eval(t, k).unwrap(), &[y]);
            repro = repro.max((ip - poly_deriv(c, y, 0)).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let passed = cont <= 1e-9 && jump <= 1e-6 && sym <= 1e-10 && bc <= 1e-9 && repro <= 1e-6 && secs < 10.0;
    outcome(
        passed,
        format!(
            "continuity {cont:.1e} (1e-9), jump {jump:.1e} (1e-6), symmetry {sym:.1e} (1e-10), bc {bc:.1e} (1e-9), \
             reproducing {repro:.1e} (1e-6), {secs:.2} s (10 s)"
        ),
    )
}

fn coefficient_concordance(k: &BivariateKernel) -> Outcome {
    let rel = |got: f64, want: f64| ((got - want) / want).abs();
    let mut worst = 0.0f64;
    let mut zero = 0.0f64;
    for i in 1..=3 {
        zero = zero.max(k.c_poly(i).iter().map(|c| c.abs()).fold(0.0, f64::max));
    }
    // c₄(y), every printed term: (power, numerator, denominator)
    let c4: [(usize, f64, f64); 9] = [
        (3, 12221.0, 169207956.0),
        (4, -11725.0, 84603978.0),
        (5, 2461.0, 42301989.0),
        (6, 2461.0, 253811934.0),
        (7, 335.0, 507623868.0),
        (8, -7325.0, 1776683538.0),
        (9, 56255.0, 21320202456.0),
        (10, -8321.0, 10660101228.0),
        (11, 2003.0, 21320202456.0),
    ];
    for (p, num, den) in c4 {
        worst = worst.max(rel(k.c_poly(4)[p], num / den));
    }
    worst = worst.max(rel(k.c_poly(12)[0], -1.0 / 39916800.0));
    let d = [(1, 11, -1.0 / 39916800.0), (2, 10, 1.0 / 3628800.0), (3, 9, -1.0 / 725760.0)];
    for (i, p, want) in d {
        worst = worst.max(rel(k.d_poly(i)[p], want));
        for (j, c) in k.d_poly(i).iter().enumerate() {
            if j != p {
                // all other terms vanish; compare against the printed term's size
                worst = worst.max((c / want).abs());
            }
        }
    }
    outcome(worst <= 1e-9 && zero <= 1e-20, format!("max relative deviation {worst:.2e} (1e-9), c1..c3 max {zero:.1e}"))
}

fn interior_grid() -> Grid {
    Grid::Points((1..=9).map(|i| i as f64 / 10.0).collect())
}

fn example_error(
    k: &BivariateKernel,
    id: ExampleId,
    nodes: usize,
    grid: Grid,
) -> Result<(f64, usize, bool, f64), String> {
    let cfg = RunConfig { nodes, grid, ..RunConfig::example(id) };
    let start = Instant::now();
    let t = run_spec(k, &builtin_example(id), &format!("example {id}"), &cfg).map_err(|e| e.to_string())?;
    let err = t.max_abs_error().ok_or("no exact solution")?;
    Ok((err, t.meta.iterations, t.meta.converged, start.elapsed().as_secs_f64()))
}

fn example_41(k: &BivariateKernel) -> Outcome {
    match example_error(k, ExampleId::Ex41, 36, interior_grid()) {
        Ok((err, _, _, secs)) => {
            outcome(err <= 1e-5 && secs < 30.0, format!("max error {err:.3e} (1e-5), {secs:.2} s (30 s)"))
        }
        Err(e) => fail(e),
    }
}

fn example_42(k: &BivariateKernel) -> Outcome {
    match example_error(k, ExampleId::Ex42, 36, Grid::Default) {
        Ok((err, it, conv, _)) => outcome(
            err <= 1e-5 && conv && it <= 10,
            format!("max error {err:.3e} (1e-5), {it} iterations (10), converged {conv}"),
        ),
        Err(e) => fail(e),
    }
}

fn example_43(k: &BivariateKernel) -> Outcome {
    match example_error(k, ExampleId::Ex43, 36, Grid::Points(TABLE3.to_vec())) {
        Ok((err, it, conv, _)) => {
            outcome(err <= 1e-6 && conv, format!("max error {err:.3e} (1e-6) over 11 abscissae, {it} iterations"))
        }
        Err(e) => fail(e),
    }
}

fn example_44(k: &BivariateKernel) -> Outcome {
    let mut xs: Vec<f64> = TABLE4.to_vec();
    xs.extend((0..=10).map(|i| i as f64 / 10.0));
    match example_error(k, ExampleId::Ex44, 36, Grid::Points(xs)) {
        Ok((err, it, conv, _)) => {
            outcome(err <= 1e-6 && conv, format!("max error {err:.3e} (1e-6) over 22 abscissae, {it} iterations"))
        }
        Err(e) => fail(e),
    }
}

fn manufactured() -> BvpSpec {
    BvpSpec::new(
        (0.0, 1.0),
        ["0"; 5].map(|c| parse_expression(c).unwrap()),
        parse_expression("120").unwrap(),
        [0.0; 5],
        Some(parse_expression("x^3*(1-x)^2").unwrap()),
    )
    .unwrap()
}

fn dual_path(k: &BivariateKernel) -> Outcome {
    let mut worst = 0.0f64;
    for spec in [builtin_example(ExampleId::Ex41), manufactured()] {
        let h = homogenize(&spec).unwrap();
        let nodes = NodeSet::equispaced(36).unwrap();
        let (a, b) = match (solve_linear(k, &h, &nodes), solve_collocation(k, &h, &nodes)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return fail(e),
        };
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            worst = worst.max((a.evaluate(x, 0).unwrap() - b.evaluate(x, 0).unwrap()).abs());
        }
    }
    outcome(worst <= 1e-8, format!("max pointwise difference {worst:.2e} (1e-8)"))
}

fn parseval(k: &BivariateKernel) -> Outcome {
    let h = homogenize(&builtin_example(ExampleId::Ex41)).unwrap();
    let sums = match rkbvp::parseval_partial_norms(k, &h, &NodeSet::equispaced(36).unwrap()) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let violation = sums.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
    outcome(
        violation <= 1e-12,
        format!("largest decrease {violation:.1e} (1e-12), S_36 = {:.6e}", sums.last().unwrap()),
    )
}

fn convergence(k: &BivariateKernel) -> Outcome {
    match (example_error(k, ExampleId::Ex41, 12, Grid::Default), example_error(k, ExampleId::Ex41, 36, Grid::Default)) {
        (Ok((e12, ..)), Ok((e36, ..))) => {
            let ratio = e12 / e36;
            outcome(ratio >= 10.0, format!("n=12 {e12:.3e}, n=36 {e36:.3e}, ratio {ratio:.2} (10)"))
        }
        (Err(e), _) | (_, Err(e)) => fail(e),
    }
}

fn orthonormality(k: &BivariateKernel) -> Outcome {
    let mut worst = 0.0f64;
    for id in ExampleId::ALL {
        match solve_spec(k, &builtin_example(id), &RunConfig::example(id)) {
            Ok(s) => worst = worst.max(s.basis.orthonormality_defect()),
            Err(e) => return fail(format!("{id}: {e}")),
        }
    }
    outcome(worst <= 1e-8, format!("max |B G Bt - I| {worst:.2e} (1e-8) over 4 examples"))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let kernel = match build_bivariate_kernel() {
        Ok(k) => k,
        Err(e) => {
            println!("kernel construction failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let criteria: [Criterion<'_>; 10] = [
        ("kernel validity", Box::new(kernel_validity)),
        ("coefficient concordance", Box::new(|| coefficient_concordance(&kernel))),
        ("example 4.1 accuracy", Box::new(|| example_41(&kernel))),
        ("example 4.2 accuracy", Box::new(|| example_42(&kernel))),
        ("example 4.3 accuracy", Box::new(|| example_43(&kernel))),
        ("example 4.4 accuracy", Box::new(|| example_44(&kernel))),
        ("dual-path agreement", Box::new(|| dual_path(&kernel))),
        ("Parseval monotonicity", Box::new(|| parseval(&kernel))),
        ("convergence trend", Box::new(|| convergence(&kernel))),
        ("orthonormality", Box::new(|| orthonormality(&kernel))),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.passed {
            failures += 1;
        }
        println!("criterion {:>2} {} {:<24} {}", i + 1, if o.passed { "PASS" } else { "FAIL" }, name, o.detail);
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
