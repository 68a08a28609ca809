//! Reproducing kernels of W₂¹[0,1] and W₂⁶[0,1].
//!
//! The W₂⁶ kernel `R(x, y)` is never transcribed from a table: for a fixed
//! `y` the section `R_y(x)` is the unique pair of degree-11 polynomials
//! (one on `x ≤ y`, one on `x > y`) satisfying
//!
//! * continuity of derivatives 0..=10 at `x = y` and a unit jump in the
//!   11th derivative,
//! * the five homogeneous conditions `R(0) = R′(0) = R″(0) = R(1) = R′(1) = 0`,
//! * seven natural conditions left over from integrating the inner product
//!   `Σ₀⁵ u⁽ⁱ⁾(0)v⁽ⁱ⁾(0) + ∫ u⁽⁶⁾v⁽⁶⁾` by parts.
//!
//! That 24×24 system is assembled and solved in double-double precision.
//! The bivariate form is recovered by interpolating each section
//! coefficient as a degree-11 polynomial in `y`.

use libm::cos;
use thiserror::Error;

use crate::dd::Dd;
use crate::linalg::{solve_refined_dd, LinalgError};
use crate::poly::{derivative_row, eval_derivative, falling_factorial};

/// Number of monomial coefficients per branch (degree ≤ 11).
pub const NCOEF: usize = 12;

/// Largest derivative order carried by a section.
pub const MAX_ORDER: usize = 11;

const SECTION_RESIDUAL_LIMIT: f64 = 1e-8;
const HOLDOUT_LIMIT: f64 = 1e-7;
const HOLDOUT_Y: [f64; 4] = [0.1, 0.37, 0.61, 0.88];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("derivative order {0} exceeds 11")]
    OrderTooHigh(usize),
    #[error("point {0} lies outside [0, 1]")]
    OutOfDomain(f64),
    #[error("kernel section at y = {y} is ill-conditioned (relative residual {residual:e})")]
    IllConditioned { y: f64, residual: f64 },
    #[error("interpolated coefficient c{index}(y) deviates by {deviation:e} at held-out y = {y}")]
    Interpolation { index: usize, y: f64, deviation: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn check_unit(x: f64) -> Result<(), KernelError> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(KernelError::OutOfDomain(x))
    }
}

fn check_order(k: usize) -> Result<(), KernelError> {
    if k > MAX_ORDER {
        Err(KernelError::OrderTooHigh(k))
    } else {
        Ok(())
    }
}

/// Which side of the breakpoint a coefficient set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `x ≤ breakpoint`
    Lo,
    /// `x > breakpoint`
    Hi,
}

/// Two degree-≤11 polynomials joined at `breakpoint`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolynomial {
    pub breakpoint: f64,
    pub lo: [f64; NCOEF],
    pub hi: [f64; NCOEF],
}

impl PiecewisePolynomial {
    pub fn coeffs(&self, branch: Branch) -> &[f64; NCOEF] {
        match branch {
            Branch::Lo => &self.lo,
            Branch::Hi => &self.hi,
        }
    }

    /// k-th derivative of one branch, extended as a polynomial to any `x`.
    pub fn branch_derivative(&self, branch: Branch, x: f64, k: usize) -> f64 {
        eval_derivative(self.coeffs(branch), x, k)
    }

    /// k-th derivative at `x`; the breakpoint itself belongs to the lo branch.
    pub fn eval(&self, x: f64, k: usize) -> Result<f64, KernelError> {
        kernel_eval(self, x, k)
    }
}

/// k-th derivative of a kernel section at `x ∈ [0, 1]`.
pub fn kernel_eval(section: &PiecewisePolynomial, x: f64, k: usize) -> Result<f64, KernelError> {
    check_order(k)?;
    check_unit(x)?;
    let branch = if x <= section.breakpoint { Branch::Lo } else { Branch::Hi };
    Ok(section.branch_derivative(branch, x, k))
}

/// `[d^k/dx^k xⁿ]ₙ` at `x` in double-double.
fn dd_row(x: Dd, k: usize) -> [Dd; NCOEF] {
    let mut row = [Dd::ZERO; NCOEF];
    for (n, slot) in row.iter_mut().enumerate().skip(k) {
        *slot = Dd::from_f64(falling_factorial(n, k)) * x.powi((n - k) as u32);
    }
    row
}

/// Assemble the 24×24 section system. Unknowns are `[lo₀..lo₁₁, hi₀..hi₁₁]`.
fn section_system(y: f64) -> ([Dd; 576], [Dd; 24]) {
    const N: usize = 2 * NCOEF;
    let mut a = [Dd::ZERO; N * N];
    let mut b = [Dd::ZERO; N];
    let yd = Dd::from_f64(y);
    let zero = Dd::ZERO;
    let one = Dd::ONE;
    let mut r = 0;

    let put = |r: usize, branch: Branch, row: &[Dd; NCOEF], sign: f64, a: &mut [Dd; N * N]| {
        let off = match branch {
            Branch::Lo => 0,
            Branch::Hi => NCOEF,
        };
        for (j, v) in row.iter().enumerate() {
            a[r * N + off + j] = a[r * N + off + j] + Dd::from_f64(sign) * *v;
        }
    };

    // Matching at x = y: orders 0..=10 continuous, order 11 jumps by one.
    for k in 0..=MAX_ORDER {
        let row = dd_row(yd, k);
        put(r, Branch::Hi, &row, 1.0, &mut a);
        put(r, Branch::Lo, &row, -1.0, &mut a);
        if k == MAX_ORDER {
            b[r] = one;
        }
        r += 1;
    }

    // Homogeneous conditions of the space.
    for (branch, at, k) in [
        (Branch::Lo, zero, 0),
        (Branch::Lo, zero, 1),
        (Branch::Lo, zero, 2),
        (Branch::Hi, one, 0),
        (Branch::Hi, one, 1),
    ] {
        put(r, branch, &dd_row(at, k), 1.0, &mut a);
        r += 1;
    }

    // Natural conditions at x = 0: R⁽⁵⁾ − R⁽⁶⁾, R⁽⁴⁾ + R⁽⁷⁾, R⁽³⁾ − R⁽⁸⁾.
    for (low, high, sign) in [(5, 6, -1.0), (4, 7, 1.0), (3, 8, -1.0)] {
        put(r, Branch::Lo, &dd_row(zero, low), 1.0, &mut a);
        put(r, Branch::Lo, &dd_row(zero, high), sign, &mut a);
        r += 1;
    }

    // Natural conditions at x = 1: R⁽⁶⁾ = R⁽⁷⁾ = R⁽⁸⁾ = R⁽⁹⁾ = 0.
    for k in 6..=9 {
        put(r, Branch::Hi, &dd_row(one, k), 1.0, &mut a);
        r += 1;
    }
    debug_assert_eq!(r, N);
    (a, b)
}

/// Section coefficients in double-double, `(lo, hi)`.
pub(crate) fn solve_section_dd(y: f64) -> Result<([Dd; NCOEF], [Dd; NCOEF]), KernelError> {
    check_unit(y)?;
    let (a, b) = section_system(y);
    let (x, residual) = solve_refined_dd(&a, 2 * NCOEF, &b, 6)?;
    if residual.is_nan() || residual > SECTION_RESIDUAL_LIMIT {
        return Err(KernelError::IllConditioned { y, residual });
    }
    let mut lo = [Dd::ZERO; NCOEF];
    let mut hi = [Dd::ZERO; NCOEF];
    lo.copy_from_slice(&x[..NCOEF]);
    hi.copy_from_slice(&x[NCOEF..]);
    Ok((lo, hi))
}

/// The kernel section `R_y(·)` for a fixed `y ∈ [0, 1]`.
pub fn build_kernel_section(y: f64) -> Result<PiecewisePolynomial, KernelError> {
    let (lo, hi) = solve_section_dd(y)?;
    Ok(PiecewisePolynomial { breakpoint: y, lo: lo.map(Dd::to_f64), hi: hi.map(Dd::to_f64) })
}

/// `R(x, y)` in global polynomial form.
///
/// `lo[i][j]` is the coefficient of `xⁱ yʲ` on the region `x ≤ y`, i.e. the
/// y-polynomial `c_{i+1}(y)`. `hi` carries the `x > y` branch `d_{i+1}(y)`
/// and is kept for inspection; evaluation uses `lo` plus symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateKernel {
    pub lo: [[f64; NCOEF]; NCOEF],
    pub hi: [[f64; NCOEF]; NCOEF],
}

/// Chebyshev sample points in `[0.05, 0.95]` used to recover the `cᵢ(y)`.
pub fn interpolation_nodes() -> [f64; NCOEF] {
    let mut ys = [0.0; NCOEF];
    for (k, y) in ys.iter_mut().enumerate() {
        let theta = core::f64::consts::PI * (k as f64 + 0.5) / NCOEF as f64;
        *y = 0.5 - 0.45 * cos(theta);
    }
    ys
}

/// Build the bivariate kernel by sampling sections at 12 Chebyshev values of
/// `y` and interpolating every coefficient exactly as a degree-11 polynomial.
pub fn build_bivariate_kernel() -> Result<BivariateKernel, KernelError> {
    let ys = interpolation_nodes();
    let mut samples_lo = [[Dd::ZERO; NCOEF]; NCOEF];
    let mut samples_hi = [[Dd::ZERO; NCOEF]; NCOEF];
    for (s, &y) in ys.iter().enumerate() {
        let (lo, hi) = solve_section_dd(y)?;
        samples_lo[s] = lo;
        samples_hi[s] = hi;
    }

    let mut vander = [Dd::ZERO; NCOEF * NCOEF];
    for (s, &y) in ys.iter().enumerate() {
        let yd = Dd::from_f64(y);
        for j in 0..NCOEF {
            vander[s * NCOEF + j] = yd.powi(j as u32);
        }
    }

    let interpolate = |samples: &[[Dd; NCOEF]; NCOEF]| -> Result<[[f64; NCOEF]; NCOEF], KernelError> {
        let mut out = [[0.0; NCOEF]; NCOEF];
        for (i, row) in out.iter_mut().enumerate() {
            let rhs: [Dd; NCOEF] = core::array::from_fn(|s| samples[s][i]);
            let (coef, _) = solve_refined_dd(&vander, NCOEF, &rhs, 6)?;
            for (slot, c) in row.iter_mut().zip(coef) {
                *slot = c.to_f64();
            }
        }
        Ok(out)
    };

    let kernel = BivariateKernel { lo: interpolate(&samples_lo)?, hi: interpolate(&samples_hi)? };

    for &y in &HOLDOUT_Y {
        let direct = build_kernel_section(y)?;
        let rebuilt = kernel.section(y);
        for i in 0..NCOEF {
            let deviation = f64::max((direct.lo[i] - rebuilt.lo[i]).abs(), (direct.hi[i] - rebuilt.hi[i]).abs());
            if deviation.is_nan() || deviation > HOLDOUT_LIMIT {
                return Err(KernelError::Interpolation { index: i + 1, y, deviation });
            }
        }
    }
    Ok(kernel)
}

impl BivariateKernel {
    /// Convenience alias for [`build_bivariate_kernel`].
    pub fn build() -> Result<Self, KernelError> {
        build_bivariate_kernel()
    }

    /// Coefficients of `c_{index}(y)` in powers of `y` (1-based index).
    pub fn c_poly(&self, index: usize) -> &[f64; NCOEF] {
        &self.lo[index - 1]
    }

    /// Coefficients of `d_{index}(y)` in powers of `y` (1-based index).
    pub fn d_poly(&self, index: usize) -> &[f64; NCOEF] {
        &self.hi[index - 1]
    }

    /// The section `R_y(·)` reconstructed from the interpolated coefficients.
    pub fn section(&self, y: f64) -> PiecewisePolynomial {
        let at = |table: &[[f64; NCOEF]; NCOEF]| -> [f64; NCOEF] {
            core::array::from_fn(|i| eval_derivative(&table[i], y, 0))
        };
        PiecewisePolynomial { breakpoint: y, lo: at(&self.lo), hi: at(&self.hi) }
    }

    #[inline]
    fn region(&self, s: f64, t: f64, ks: usize, kt: usize) -> f64 {
        let rs: [f64; NCOEF] = derivative_row(s, ks);
        let rt: [f64; NCOEF] = derivative_row(t, kt);
        let mut acc = 0.0;
        for (i, ri) in rs.iter().enumerate().skip(ks) {
            let row = &self.lo[i];
            let mut inner = 0.0;
            for j in kt..NCOEF {
                inner += row[j] * rt[j];
            }
            acc += ri * inner;
        }
        acc
    }

    /// `∂ₓ^kx ∂_y^ky R(x, y)` without argument checks; `x = y` uses the
    /// `x ≤ y` region.
    #[inline]
    pub fn eval_unchecked(&self, x: f64, y: f64, kx: usize, ky: usize) -> f64 {
        if x <= y {
            self.region(x, y, kx, ky)
        } else {
            self.region(y, x, ky, kx)
        }
    }

    /// `∂ₓ^kx ∂_y^ky R(x, y)` for `x, y ∈ [0, 1]`.
    pub fn eval(&self, x: f64, y: f64, kx: usize, ky: usize) -> Result<f64, KernelError> {
        bivariate_eval(self, x, y, kx, ky)
    }
}

/// Mixed partial `∂ₓ^kx ∂_y^ky R(x, y)`.
pub fn bivariate_eval(kernel: &BivariateKernel, x: f64, y: f64, kx: usize, ky: usize) -> Result<f64, KernelError> {
    check_order(kx)?;
    check_order(ky)?;
    check_unit(x)?;
    check_unit(y)?;
    Ok(kernel.eval_unchecked(x, y, kx, ky))
}

/// Reproducing kernel of W₂¹[0,1]: `T_x(y) = 1 + min(x, y)`.
pub fn t_kernel(x: f64, y: f64) -> Result<f64, KernelError> {
    check_unit(x)?;
    check_unit(y)?;
    Ok(1.0 + x.min(y))
}
