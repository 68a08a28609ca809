//! Gauss-Legendre quadrature and the W₂⁶ inner product built on it.

/// Nodes and weights of the `n`-point rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
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

/// `∫ₐᵇ f` with an `m`-point rule on every piece between `a`, `breaks`, `b`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], m: usize) -> f64 {
    let rule = gauss_legendre(m);
    let mut cuts = vec![a, b];
    cuts.extend(breaks.iter().copied().filter(|&c| c > a && c < b));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let half = 0.5 * (w[1] - w[0]);
            rule.iter().map(|(x, wt)| wt * half * f(w[0] + half * (x + 1.0))).sum::<f64>()
        })
        .sum()
}

/// `Σᵢ₌₀⁵ u⁽ⁱ⁾(0) v⁽ⁱ⁾(0) + ∫₀¹ u⁽⁶⁾ v⁽⁶⁾`; `u(x, k)` is the k-th derivative.
/// Exact for piecewise polynomials of degree ≤ 11 joined only at `breaks`.
pub fn w6_inner(u: impl Fn(f64, usize) -> f64, v: impl Fn(f64, usize) -> f64, breaks: &[f64]) -> f64 {
    let boundary: f64 = (0..6).map(|i| u(0.0, i) * v(0.0, i)).sum();
    boundary + integrate(|x| u(x, 6) * v(x, 6), 0.0, 1.0, breaks, 8)
}
