//! CSV dump of the kernel coefficient matrix.

use std::fmt::Write as _;

use rkbvp::BivariateKernel;

/// Row `i` holds the coefficients of `xⁱ` in powers `y⁰ … y¹¹`.
pub fn kernel_csv(kernel: &BivariateKernel, upper: bool) -> String {
    let table = if upper { &kernel.hi } else { &kernel.lo };
    let mut out = String::from("i");
    for j in 0..table[0].len() {
        let _ = write!(out, ",y{j}");
    }
    out.push('\n');
    for (i, row) in table.iter().enumerate() {
        let _ = write!(out, "{i}");
        for c in row {
            let _ = write!(out, ",{c:.16e}");
        }
        out.push('\n');
    }
    out
}
