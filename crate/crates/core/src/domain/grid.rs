//! The alternative space: finitely many exact rational points in [0, 1].
//!
//! All downstream code works with grid indices; the rational values only
//! matter for parsing, display, and report output. Index order agrees with
//! value order, so interval reasoning on indices is sound.

use num::rational::Ratio;
use num::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};

/// Exact point in [0, 1].
pub type Value = Ratio<i64>;

/// Index of a grid point, in increasing value order.
pub type AltIdx = usize;

/// Grids beyond this would enumerate 2^(m-1) preference orders per peak
/// side choice; nothing in the toolkit is meant for that scale.
pub const MAX_GRID_POINTS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    values: Vec<Value>,
}

impl Grid {
    /// Strictly increasing values, first exactly 0, last exactly 1.
    pub fn new(values: Vec<Value>) -> Result<Grid> {
        if values.len() < 2 {
            return Err(Error::InvalidGrid("need at least 2 points".into()));
        }
        if values.len() > MAX_GRID_POINTS {
            return Err(Error::InvalidGrid(format!(
                "{} points exceeds the supported maximum of {}",
                values.len(),
                MAX_GRID_POINTS
            )));
        }
        if values[0] != Value::zero() {
            return Err(Error::InvalidGrid("first point must be 0".into()));
        }
        if *values.last().unwrap() != Value::one() {
            return Err(Error::InvalidGrid("last point must be 1".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(
                "points must be strictly increasing".into(),
            ));
        }
        Ok(Grid { values })
    }

    /// m equally spaced points 0, 1/(m-1), ..., 1.
    pub fn uniform(m: usize) -> Result<Grid> {
        if m < 2 {
            return Err(Error::InvalidGrid("need at least 2 points".into()));
        }
        let step = m as i64 - 1;
        Grid::new((0..m).map(|i| Ratio::new(i as i64, step)).collect())
    }

    pub fn parse(spec: &str) -> Result<Grid> {
        let values = spec
            .split(',')
            .map(|tok| parse_value(tok.trim()))
            .collect::<Result<Vec<_>>>()?;
        Grid::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn value(&self, idx: AltIdx) -> Value {
        self.values[idx]
    }

    pub fn index_of(&self, v: Value) -> Option<AltIdx> {
        self.values.iter().position(|&x| x == v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .values
            .iter()
            .map(|&v| value_to_json(v))
            .collect::<Vec<_>>())
    }
}

/// Accepts "p/q", integers, and decimal literals; everything is kept exact.
pub fn parse_value(s: &str) -> Result<Value> {
    let bad = || Error::InvalidValue(s.to_string());
    if s.contains('-') {
        return Err(bad());
    }
    let v = if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        Ratio::new(num, den)
    } else if let Some((int, frac)) = s.split_once('.') {
        let int = if int.is_empty() {
            0
        } else {
            int.parse::<i64>().map_err(|_| bad())?
        };
        if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        Ratio::from_integer(int) + Ratio::new(frac, scale)
    } else {
        let int: i64 = s.trim().parse().map_err(|_| bad())?;
        Ratio::from_integer(int)
    };
    if v.is_negative() || v > Value::one() {
        return Err(bad());
    }
    Ok(v)
}

/// Shortest faithful rendering: integers bare, terminating decimals as
/// decimals, everything else as p/q.
pub fn format_value(v: Value) -> String {
    if v.is_integer() {
        return v.to_integer().to_string();
    }
    match decimal_digits(*v.denom()) {
        Some(digits) => {
            let scaled = v * Ratio::from_integer(10i64.pow(digits));
            let scaled = scaled.to_integer();
            let s = format!("{:0>width$}", scaled, width = digits as usize);
            let split = s.len() - digits as usize;
            format!(
                "{}.{}",
                if split == 0 { "0" } else { &s[..split] },
                &s[split..]
            )
        }
        None => format!("{}/{}", v.numer(), v.denom()),
    }
}

/// JSON number when the value has a terminating decimal form (exact under
/// shortest-roundtrip printing), else a "p/q" string.
pub fn value_to_json(v: Value) -> serde_json::Value {
    if v.is_integer() {
        return json!(v.to_integer());
    }
    if decimal_digits(*v.denom()).is_some() {
        json!(*v.numer() as f64 / *v.denom() as f64)
    } else {
        json!(format!("{}/{}", v.numer(), v.denom()))
    }
}

/// Decimal places needed if the denominator is of the form 2^a 5^b.
fn decimal_digits(mut den: i64) -> Option<u32> {
    let mut twos = 0;
    let mut fives = 0;
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    let digits = twos.max(fives);
    (den == 1 && digits <= 9).then_some(digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grids_have_exact_endpoints_and_spacing() {
        let g = Grid::uniform(3).unwrap();
        assert_eq!(
            g.values(),
            &[Ratio::new(0, 1), Ratio::new(1, 2), Ratio::new(1, 1)]
        );
        let g = Grid::uniform(2).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.value(0), Value::zero());
        assert_eq!(g.value(1), Value::one());
    }

    #[test]
    fn grid_rejects_malformed_inputs() {
        assert!(Grid::uniform(1).is_err());
        assert!(Grid::new(vec![Ratio::new(0, 1)]).is_err());
        // wrong endpoints
        assert!(Grid::new(vec![Ratio::new(0, 1), Ratio::new(1, 2)]).is_err());
        assert!(Grid::new(vec![Ratio::new(1, 4), Ratio::new(1, 1)]).is_err());
        // not strictly increasing
        assert!(Grid::new(vec![
            Ratio::new(0, 1),
            Ratio::new(1, 2),
            Ratio::new(1, 2),
            Ratio::new(1, 1)
        ])
        .is_err());
    }

    #[test]
    fn parse_accepts_fractions_decimals_and_integers() {
        assert_eq!(parse_value("1/2").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_value("0.5").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_value("0.25").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_value("1").unwrap(), Value::one());
        assert_eq!(parse_value("0").unwrap(), Value::zero());
        assert_eq!(parse_value(".75").unwrap(), Ratio::new(3, 4));
        assert!(parse_value("3/2").is_err());
        assert!(parse_value("-1/2").is_err());
        assert!(parse_value("1/0").is_err());
        assert!(parse_value("x").is_err());
    }

    #[test]
    fn format_round_trips_through_parse() {
        for v in [
            Ratio::new(0, 1),
            Ratio::new(1, 1),
            Ratio::new(1, 2),
            Ratio::new(1, 3),
            Ratio::new(2, 7),
            Ratio::new(3, 40),
        ] {
            assert_eq!(parse_value(&format_value(v)).unwrap(), v);
        }
        assert_eq!(format_value(Ratio::new(1, 2)), "0.5");
        assert_eq!(format_value(Ratio::new(1, 3)), "1/3");
        assert_eq!(format_value(Ratio::new(3, 40)), "0.075");
    }

    #[test]
    fn json_rendering_keeps_terminating_decimals_exact() {
        assert_eq!(value_to_json(Ratio::new(1, 2)), json!(0.5));
        assert_eq!(value_to_json(Ratio::new(1, 5)), json!(0.2));
        assert_eq!(value_to_json(Ratio::new(0, 1)), json!(0));
        assert_eq!(value_to_json(Ratio::new(1, 3)), json!("1/3"));
    }

    #[test]
    fn grid_parse_handles_mixed_notation() {
        let g = Grid::parse("0, 1/4, 0.5, 1").unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.value(1), Ratio::new(1, 4));
        assert_eq!(g.index_of(Ratio::new(1, 2)), Some(2));
        assert_eq!(g.index_of(Ratio::new(1, 3)), None);
    }
}
