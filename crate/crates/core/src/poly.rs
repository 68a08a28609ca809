//! Monomial-basis polynomial helpers.

/// Falling factorial `n (n−1) … (n−k+1)`, the factor produced by
/// differentiating `xⁿ` k times.
#[inline]
pub fn falling_factorial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    ((n - k + 1)..=n).fold(1.0, |acc, m| acc * m as f64)
}

/// k-th derivative of `Σ coeffs[n] xⁿ` at `x` (Horner on the differentiated
/// coefficients).
pub fn eval_derivative(coeffs: &[f64], x: f64, k: usize) -> f64 {
    let deg = coeffs.len();
    if k >= deg {
        return 0.0;
    }
    let mut acc = 0.0;
    for n in (k..deg).rev() {
        acc = acc * x + coeffs[n] * falling_factorial(n, k);
    }
    acc
}

/// Row `[d^k/dx^k xⁿ]` for `n = 0..N` at `x`.
pub fn derivative_row<const N: usize>(x: f64, k: usize) -> [f64; N] {
    let mut row = [0.0; N];
    if k >= N {
        return row;
    }
    let mut pow = 1.0;
    for (n, slot) in row.iter_mut().enumerate().skip(k) {
        *slot = falling_factorial(n, k) * pow;
        pow *= x;
    }
    row
}
