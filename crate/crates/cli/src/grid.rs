use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};
use onticlab::scalar::{format_rational, parse_rational};
use onticlab::Rational;
use serde::{Serialize, Serializer};

pub const MAX_GRID_POINTS: usize = 10_000;

/// A rational given on the command line as `p/q`, an integer or a decimal.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalArg(pub Rational);

impl FromStr for RationalArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s)
            .map(RationalArg)
            .ok_or_else(|| format!("`{s}` is not a rational number"))
    }
}

impl fmt::Display for RationalArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl Serialize for RationalArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl RationalArg {
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Inclusive grid `start:stop:step`, or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    spec: String,
    points: Vec<Rational>,
}

impl Grid {
    pub fn points(&self) -> &[Rational] {
        &self.points
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |t: &str| parse_rational(t.trim()).ok_or_else(|| format!("`{t}` is not a rational number"));
        let points = match parts.as_slice() {
            [single] => vec![parse(single)?],
            [start, stop, step] => {
                let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
                if !step.is_positive() {
                    return Err("grid step must be positive".into());
                }
                if start > stop {
                    return Err(format!("empty grid `{s}`"));
                }
                let count = ((stop.clone() - start.clone()) / step.clone()).floor();
                let count = count.to_integer().to_usize().unwrap_or(usize::MAX).saturating_add(1);
                if count > MAX_GRID_POINTS {
                    return Err(format!("grid `{s}` has more than {MAX_GRID_POINTS} points"));
                }
                let mut v = Vec::with_capacity(count);
                let mut x = start;
                while x <= stop {
                    v.push(x.clone());
                    x += step.clone();
                }
                v
            }
            _ => return Err(format!("malformed grid `{s}`, expected start:stop:step")),
        };
        if points.is_empty() {
            return Err(format!("empty grid `{s}`"));
        }
        Ok(Grid {
            spec: s.to_string(),
            points,
        })
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.spec)
    }
}

/// Comma-separated triple `x,y,z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vec3(pub [f64; 3]);

impl FromStr for Vec3 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
            .collect::<Result<_, _>>()?;
        match v.as_slice() {
            [x, y, z] => Ok(Vec3([*x, *y, *z])),
            _ => Err(format!("expected three comma-separated numbers, got `{s}`")),
        }
    }
}

/// Two Bloch directions `x,y,z;x,y,z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pair(pub Vec3, pub Vec3);

impl FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(';') {
            Some((a, b)) => Ok(Pair(a.parse()?, b.parse()?)),
            None => Err(format!("expected `x,y,z;x,y,z`, got `{s}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;

    #[test]
    fn inclusive_rational_grid() {
        let g: Grid = "0:9/10:1/10".parse().unwrap();
        assert_eq!(g.points().len(), 10);
        assert_eq!(format_rational(&g.points()[9]), "9/10");
        let g: Grid = "0:1:0.25".parse().unwrap();
        assert_eq!(g.points().len(), 5);
        let g: Grid = "1/2".parse().unwrap();
        assert_eq!(g.points().len(), 1);
    }

    #[test]
    fn bad_grids() {
        assert!("1:0:1/10".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
        assert!("a:b:c".parse::<Grid>().is_err());
        assert!("0:1:1/1000000".parse::<Grid>().is_err());
    }

    #[test]
    fn vectors_and_pairs() {
        assert_eq!("0,0,1".parse::<Vec3>().unwrap(), Vec3([0.0, 0.0, 1.0]));
        assert!("0,1".parse::<Vec3>().is_err());
        let p: Pair = "0,0,1;1,0,0".parse().unwrap();
        assert_eq!(p.1, Vec3([1.0, 0.0, 0.0]));
    }

    #[test]
    fn rationals_echo_as_fractions() {
        let q: RationalArg = "0.5".parse().unwrap();
        assert_eq!(q.to_string(), "1/2");
        assert!(!q.0.is_zero());
    }
}
