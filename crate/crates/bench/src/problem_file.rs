//! `key = value` problem files.
//!
//! ```text
//! # y⁽⁵⁾ = y − 15eˣ − 10xeˣ on [0, 1]
//! interval = 0 1
//! f0 = -1
//! rhs = -15*exp(x) - 10*x*exp(x)
//! bc = 0 1 0 0 -e
//! exact = x*(1-x)*exp(x)
//! ```
//!
//! `interval`, `rhs` and `bc` are required; `f0`..`f4` default to `0` and
//! `exact` is optional. Numeric lists are separated by whitespace or commas
//! and each entry may be a constant expression such as `ln(2)`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rkbvp::{parse_expression, BvpSpec, Expr};

use crate::BenchError;

const KEYS: [&str; 9] = ["interval", "f0", "f1", "f2", "f3", "f4", "rhs", "bc", "exact"];

pub fn load_problem(path: impl AsRef<Path>) -> Result<BvpSpec, BenchError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })?;
    parse_problem(&text)
}

pub fn parse_problem(text: &str) -> Result<BvpSpec, BenchError> {
    let mut entries: HashMap<&'static str, &str> = HashMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| BenchError::Syntax {
            line: line_no,
            msg: format!("expected `key = value`, found `{line}`"),
        })?;
        let key = key.trim();
        let known = KEYS
            .iter()
            .copied()
            .find(|k| *k == key)
            .ok_or_else(|| BenchError::UnknownKey { key: key.to_string(), line: line_no })?;
        if entries.insert(known, value.trim()).is_some() {
            return Err(BenchError::DuplicateKey { key: key.to_string(), line: line_no });
        }
    }

    let required = |key: &'static str| entries.get(key).copied().ok_or(BenchError::MissingKey(key));
    let expr = |key: &str, text: &str| {
        parse_expression(text).map_err(|source| BenchError::Expression { key: key.to_string(), source })
    };

    let interval = constants::<2>("interval", required("interval")?)?;
    let rhs = expr("rhs", required("rhs")?)?;
    let bc = constants::<5>("bc", required("bc")?)?;
    let mut coeffs: [Expr; 5] = std::array::from_fn(|_| Expr::zero());
    for (i, slot) in coeffs.iter_mut().enumerate() {
        let key = KEYS[1 + i];
        if let Some(text) = entries.get(key) {
            *slot = expr(key, text)?;
        }
    }
    let exact = entries.get("exact").map(|t| expr("exact", t)).transpose()?;

    Ok(BvpSpec::new((interval[0], interval[1]), coeffs, rhs, bc, exact)?)
}

fn constants<const N: usize>(key: &'static str, text: &str) -> Result<[f64; N], BenchError> {
    let items: Vec<&str> = text.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
    if items.len() != N {
        return Err(BenchError::ValueCount { key, expected: N, got: items.len() });
    }
    let mut out = [0.0; N];
    for (slot, item) in out.iter_mut().zip(items) {
        let e = parse_expression(item).map_err(|source| BenchError::Expression { key: key.to_string(), source })?;
        if e.references_x() || e.references_u() {
            return Err(BenchError::NotConstant { key });
        }
        *slot = e.eval(0.0, None).map_err(|source| BenchError::Expression { key: key.to_string(), source })?;
    }
    Ok(out)
}
