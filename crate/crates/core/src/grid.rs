//! Sample grids: `log:start:stop:points` or `lin:start:stop:points`.

use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    Log { start: f64, stop: f64, points: usize },
    Lin { start: f64, stop: f64, points: usize },
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            GridSpec::Log { start, stop, points } => {
                let (a, b) = (start.ln(), stop.ln());
                let mut pts: Vec<f64> = spaced(a, b, points).into_iter().map(f64::exp).collect();
                // pin the endpoints so exp(ln x) rounding never moves them
                pts[0] = start;
                if points > 1 {
                    pts[points - 1] = stop;
                }
                pts
            }
            GridSpec::Lin { start, stop, points } => spaced(start, stop, points),
        }
    }
}

fn spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { b } else { a + step * i as f64 }).collect()
}

pub fn log_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    GridSpec::Log { start, stop, points }.points()
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [kind, start, stop, points] = parts.as_slice() else {
            return Err(Error::Parse(format!("grid '{s}' is not kind:start:stop:points")));
        };
        let num = |x: &str| -> Result<f64> {
            x.parse().map_err(|_| Error::Parse(format!("bad number '{x}' in grid '{s}'")))
        };
        let (start, stop) = (num(start)?, num(stop)?);
        let points: usize = points
            .parse()
            .map_err(|_| Error::Parse(format!("bad point count '{points}' in grid '{s}'")))?;
        if points == 0 || !(start.is_finite() && stop.is_finite()) || stop < start || (points > 1 && stop == start) {
            return Err(Error::Parse(format!("grid '{s}' must be increasing with at least one point")));
        }
        match *kind {
            "log" if start > 0.0 => Ok(GridSpec::Log { start, stop, points }),
            "log" => Err(Error::Parse(format!("log grid '{s}' needs a positive start"))),
            "lin" => Ok(GridSpec::Lin { start, stop, points }),
            other => Err(Error::Parse(format!("unknown grid kind '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_sample() {
        let g: GridSpec = "log:1e-8:1e-1:400".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 400);
        assert_eq!(pts[399], 1e-1);
        assert!((pts[0] - 1e-8).abs() < 1e-22);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let lin: GridSpec = "lin:0:1:5".parse().unwrap();
        assert_eq!(lin.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["log:0:1:10", "log:1:1e-3:10", "cubic:1:2:3", "log:1:2", "lin:a:2:3", "lin:0:1:0", "lin:1:1:3"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }
}
