//! Evaluation grids: `a:b:step`, comma lists and named presets.

use std::str::FromStr;

use crate::BenchError;

/// Abscissae of the ln(1+x) table.
pub const TABLE3: [f64; 11] = [0.0, 0.0806, 0.1648, 0.2285, 0.3999, 0.5, 0.6923, 0.7714, 0.8836, 0.9447, 1.0];

/// Abscissae of the second eˣ table.
pub const TABLE4: [f64; 12] =
    [0.0, 0.0100, 0.1184, 0.1517, 0.2410, 0.3604, 0.4287, 0.5000, 0.6395, 0.8482, 0.9996, 1.0];

#[derive(Debug, Clone, PartialEq, Default)]
pub enum Grid {
    /// Eleven equally spaced points across the problem interval.
    #[default]
    Default,
    Points(Vec<f64>),
}

impl Grid {
    /// Sorted, deduplicated abscissae for the interval `[a, b]`.
    pub fn points(&self, a: f64, b: f64) -> Result<Vec<f64>, BenchError> {
        let mut xs = match self {
            Grid::Default => (0..=10).map(|i| if i == 10 { b } else { a + (b - a) * i as f64 / 10.0 }).collect(),
            Grid::Points(p) => p.clone(),
        };
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        if let Some(&x) = xs.iter().find(|&&x| !(x >= a && x <= b)) {
            return Err(BenchError::GridOutsideInterval { x, a, b });
        }
        Ok(xs)
    }
}

impl FromStr for Grid {
    type Err = BenchError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| BenchError::Grid { spec: spec.to_string(), msg: msg.to_string() };
        let spec_t = spec.trim();
        match spec_t {
            "" | "default" => return Ok(Grid::Default),
            "table3" => return Ok(Grid::Points(TABLE3.to_vec())),
            "table4" => return Ok(Grid::Points(TABLE4.to_vec())),
            _ => {}
        }
        let number =
            |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad("not a number"));
        if spec_t.contains(':') {
            let parts: Vec<&str> = spec_t.split(':').collect();
            let [a, b, step] = parts.as_slice() else {
                return Err(bad("expected a:b:step"));
            };
            let (a, b, step) = (number(a)?, number(b)?, number(step)?);
            if step <= 0.0 || b < a {
                return Err(bad("need a <= b and step > 0"));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            if count > 1_000_000 {
                return Err(bad("too many points"));
            }
            let mut xs: Vec<f64> = (0..=count).map(|i| a + i as f64 * step).collect();
            // Snap the last point onto b when the step divides the range.
            if let Some(last) = xs.last_mut() {
                if (*last - b).abs() <= 1e-9 * step {
                    *last = b;
                }
            }
            return Ok(Grid::Points(xs));
        }
        spec_t.split(',').map(number).collect::<Result<Vec<_>, _>>().map(Grid::Points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_eleven_points() {
        let xs = Grid::Default.points(0.0, 1.0).unwrap();
        assert_eq!(xs.len(), 11);
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[10], 1.0);
        assert_eq!(Grid::Default.points(1.0, 3.0).unwrap()[5], 2.0);
    }

    #[test]
    fn range_spec() {
        let Grid::Points(xs) = "0:1:0.25".parse().unwrap() else { panic!() };
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let Grid::Points(xs) = "0:1:0.1".parse().unwrap() else { panic!() };
        assert_eq!(xs.len(), 11);
        assert_eq!(*xs.last().unwrap(), 1.0);
    }

    #[test]
    fn list_and_presets() {
        assert_eq!("0.5, 0.1".parse::<Grid>().unwrap().points(0.0, 1.0).unwrap(), vec![0.1, 0.5]);
        assert_eq!("table3".parse::<Grid>().unwrap().points(0.0, 1.0).unwrap().len(), 11);
        assert_eq!("table4".parse::<Grid>().unwrap().points(0.0, 1.0).unwrap().len(), 12);
    }

    #[test]
    fn rejects_bad_specs() {
        for s in ["0:1", "1:0:0.1", "0:1:0", "a,b", "0:1:-1"] {
            assert!(s.parse::<Grid>().is_err(), "{s}");
        }
        assert!(matches!(
            "0.5,1.5".parse::<Grid>().unwrap().points(0.0, 1.0),
            Err(BenchError::GridOutsideInterval { x, .. }) if x == 1.5
        ));
    }
}
