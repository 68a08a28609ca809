#![allow(dead_code)]

use rkbvp::{homogenize, parse_expression, BvpSpec, HomogenizedBvp};

pub const E: f64 = std::f64::consts::E;

pub fn spec(coeffs: [&str; 5], rhs: &str, bc: [f64; 5], exact: Option<&str>) -> BvpSpec {
    BvpSpec::new(
        (0.0, 1.0),
        coeffs.map(|c| parse_expression(c).unwrap()),
        parse_expression(rhs).unwrap(),
        bc,
        exact.map(|e| parse_expression(e).unwrap()),
    )
    .unwrap()
}

pub fn example_41() -> BvpSpec {
    spec(["-1", "0", "0", "0", "0"], "-15*exp(x) - 10*x*exp(x)", [0.0, 1.0, 0.0, 0.0, -E], Some("x*(1-x)*exp(x)"))
}

pub fn example_42() -> BvpSpec {
    spec(["0"; 5], "exp(-x)*u^2", [1.0, 1.0, 1.0, E, E], Some("exp(x)"))
}

pub fn example_43() -> BvpSpec {
    spec(["0"; 5], "-24*exp(-5*u) + 48/(1+x)^5", [0.0, 1.0, -1.0, std::f64::consts::LN_2, 0.5], Some("ln(1+x)"))
}

pub fn example_44() -> BvpSpec {
    spec(["0", "0", "0", "0", "1"], "2*exp(x) + 1 - exp(-2*x)*u^2", [1.0, 1.0, 1.0, E, E], Some("exp(x)"))
}

/// `u⁽⁵⁾ = 120`, exact `x³(1 − x)²`, homogeneous boundary data.
pub fn manufactured() -> BvpSpec {
    spec(["0"; 5], "120", [0.0; 5], Some("x^3*(1-x)^2"))
}

pub fn h(spec: &BvpSpec) -> HomogenizedBvp {
    homogenize(spec).unwrap()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on `Pₙ`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫ f` over `[a, b]` split at `breaks`, with an `m`-point rule per piece.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], m: usize) -> f64 {
    let rule = gauss_legendre(m);
    let mut cuts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&c| c > a && c < b))
        .chain(std::iter::once(b))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let (l, r) = (w[0], w[1]);
            let half = 0.5 * (r - l);
            rule.iter().map(|(x, wt)| wt * half * f(l + half * (x + 1.0))).sum::<f64>()
        })
        .sum()
}

/// `⟨u, v⟩ = Σᵢ₌₀⁵ u⁽ⁱ⁾(0) v⁽ⁱ⁾(0) + ∫₀¹ u⁽⁶⁾ v⁽⁶⁾`, with `u(x, k)` returning
/// the k-th derivative. Exact for piecewise polynomials of degree ≤ 11 with
/// pieces joined only at `breaks`.
pub fn w6_inner(u: impl Fn(f64, usize) -> f64, v: impl Fn(f64, usize) -> f64, breaks: &[f64]) -> f64 {
    let boundary: f64 = (0..6).map(|i| u(0.0, i) * v(0.0, i)).sum();
    boundary + integrate(|x| u(x, 6) * v(x, 6), 0.0, 1.0, breaks, 8)
}

/// Dense polynomial in the monomial basis.
#[derive(Debug, Clone)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn deriv(&self, x: f64, k: usize) -> f64 {
        let mut acc = 0.0;
        for (n, c) in self.0.iter().enumerate().rev() {
            if n < k {
                break;
            }
            let ff: f64 = (0..k).map(|j| (n - j) as f64).product();
            acc += c * ff * x.powi((n - k) as i32);
        }
        acc
    }
}

/// Polynomials in W₂⁶[0,1]: all carry the factor `x³(1 − x)²`.
pub fn w6_polynomials() -> Vec<Poly> {
    let base = Poly(vec![0.0, 0.0, 0.0, 1.0, -2.0, 1.0]);
    let cube = Poly(vec![0.0, 0.0, 0.0, 1.0]);
    let mut shifted = Poly(vec![1.0]);
    for _ in 0..6 {
        shifted = shifted.mul(&Poly(vec![2.0, 1.0]));
    }
    vec![base.clone(), base.mul(&cube), base.mul(&shifted)]
}
