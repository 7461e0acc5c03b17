//! Uniform evaluation grids written `a:b:n` (n points from a to b inclusive).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self, Error> {
        if !(a.is_finite() && b.is_finite()) || a > b {
            return Err(Error::InvalidInput(format!("grid bounds must be finite with a ≤ b, got {a}:{b}")));
        }
        if (n < 2 && a != b) || n == 0 {
            return Err(Error::InvalidInput(format!("grid needs at least two points, got {n}")));
        }
        Ok(Grid { a, b, n })
    }

    pub fn step(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.b - self.a) / (self.n - 1) as f64
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.b
        } else {
            self.a + self.step() * i as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidInput(format!("grid must look like a:b:n, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let a = parts[0].trim().parse().map_err(|_| bad())?;
        let b = parts[1].trim().parse().map_err(|_| bad())?;
        let n = parts[2].trim().parse().map_err(|_| bad())?;
        Grid::new(a, b, n)
    }
}

impl TryFrom<String> for Grid {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> String {
        g.to_string()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.a, self.b, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_points() {
        let g: Grid = "0:50:20001".parse().unwrap();
        assert_eq!(g.n, 20001);
        assert_eq!(g.point(20000), 50.0);
        assert!((g.step() - 0.0025).abs() < 1e-15);
        assert_eq!(g.to_string().parse::<Grid>().unwrap(), g);
        assert!("1:0:5".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
        assert!("0:1:1".parse::<Grid>().is_err());
        let j: Grid = serde_json::from_str("\"-2:2:5\"").unwrap();
        assert_eq!(j.points(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    }
}
