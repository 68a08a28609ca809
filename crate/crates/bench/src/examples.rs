//! The four reference problems on `[0, 1]`.
//!
//! | id  | equation                                          | exact        |
//! |-----|---------------------------------------------------|--------------|
//! | 4.1 | `y⁽⁵⁾ = y − 15eˣ − 10xeˣ`                          | `x(1−x)eˣ`   |
//! | 4.2 | `y⁽⁵⁾ = e⁻ˣ y²`                                    | `eˣ`         |
//! | 4.3 | `y⁽⁵⁾ = −24e⁻⁵ʸ + 48/(1+x)⁵`                       | `ln(1+x)`    |
//! | 4.4 | `y⁽⁵⁾ + y⁽⁴⁾ = 2eˣ + 1 − e⁻²ˣ y²`                  | `eˣ`         |

use std::f64::consts::{E, LN_2};
use std::fmt;
use std::str::FromStr;

use rkbvp::{parse_expression, BvpSpec};

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleId {
    Ex41,
    Ex42,
    Ex43,
    Ex44,
}

impl ExampleId {
    pub const ALL: [ExampleId; 4] = [ExampleId::Ex41, ExampleId::Ex42, ExampleId::Ex43, ExampleId::Ex44];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::Ex41 => "4.1",
            ExampleId::Ex42 => "4.2",
            ExampleId::Ex43 => "4.3",
            ExampleId::Ex44 => "4.4",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str() == s.trim())
            .ok_or_else(|| BenchError::UnknownExample(s.to_string()))
    }
}

struct Raw {
    coeffs: [&'static str; 5],
    rhs: &'static str,
    bc: [f64; 5],
    exact: &'static str,
}

fn raw(id: ExampleId) -> Raw {
    match id {
        ExampleId::Ex41 => Raw {
            coeffs: ["-1", "0", "0", "0", "0"],
            rhs: "-15*exp(x) - 10*x*exp(x)",
            bc: [0.0, 1.0, 0.0, 0.0, -E],
            exact: "x*(1-x)*exp(x)",
        },
        ExampleId::Ex42 => Raw { coeffs: ["0"; 5], rhs: "exp(-x)*u^2", bc: [1.0, 1.0, 1.0, E, E], exact: "exp(x)" },
        ExampleId::Ex43 => Raw {
            coeffs: ["0"; 5],
            rhs: "-24*exp(-5*u) + 48/(1+x)^5",
            bc: [0.0, 1.0, -1.0, LN_2, 0.5],
            exact: "ln(1+x)",
        },
        ExampleId::Ex44 => Raw {
            coeffs: ["0", "0", "0", "0", "1"],
            rhs: "2*exp(x) + 1 - exp(-2*x)*u^2",
            bc: [1.0, 1.0, 1.0, E, E],
            exact: "exp(x)",
        },
    }
}

pub fn builtin_example(id: ExampleId) -> BvpSpec {
    let r = raw(id);
    let parse = |s: &str| parse_expression(s).expect("built-in expression parses");
    BvpSpec::new((0.0, 1.0), r.coeffs.map(parse), parse(r.rhs), r.bc, Some(parse(r.exact)))
        .expect("built-in example is valid")
}
