//! Exact non-negative rationals for ratios that must not pick up binary rounding
//! (test fractions, document-frequency cutoffs).

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A non-negative exact fraction. Parses `"0.2"`, `"1/5"` or `"3"`; prints the
/// terminating decimal when one exists, `num/den` otherwise.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fraction(Ratio<u64>);

impl Fraction {
    pub fn new(numer: u64, denom: u64) -> Result<Self, Error> {
        if denom == 0 {
            return Err(Error::Config("fraction with zero denominator".into()));
        }
        Ok(Fraction(Ratio::new(numer, denom)))
    }

    pub const fn from_integer(n: u64) -> Self {
        Fraction(Ratio::new_raw(n, 1))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Strictly between 0 and 1.
    pub fn is_proper(&self) -> bool {
        !self.0.is_zero() && self.numer() < self.denom()
    }

    fn scaled(&self, n: usize) -> Ratio<u128> {
        Ratio::new(n as u128 * self.numer() as u128, self.denom() as u128)
    }

    /// `n × self`, rounded half away from zero.
    pub fn mul_round(&self, n: usize) -> usize {
        let r = self.scaled(n).round();
        r.to_integer() as usize
    }

    /// `floor(n × self)`.
    pub fn mul_floor(&self, n: usize) -> usize {
        self.scaled(n).floor().to_integer() as usize
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fraction({self})")
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        let mut rest = d;
        let (mut twos, mut fives) = (0u32, 0u32);
        while rest % 2 == 0 {
            rest /= 2;
            twos += 1;
        }
        while rest % 5 == 0 {
            rest /= 5;
            fives += 1;
        }
        if rest != 1 {
            return write!(f, "{n}/{d}");
        }
        let digits = twos.max(fives);
        if digits == 0 {
            return write!(f, "{n}");
        }
        // d divides 10^digits, so the decimal expansion is exact.
        let scale = 10u128.pow(digits);
        let scaled = n as u128 * (scale / d as u128);
        let int = scaled / scale;
        let frac = scaled % scale;
        let frac = format!("{:0width$}", frac, width = digits as usize);
        write!(f, "{int}.{}", frac.trim_end_matches('0'))
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Config(format!("not a non-negative fraction: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            return Fraction::new(n, d).map_err(|_| bad());
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if (int.is_empty() && frac.is_empty())
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(bad());
        }
        let denom = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_val: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let numer = int
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Fraction::new(numer, denom)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_and_ratio_forms() {
        assert_eq!(
            "0.2".parse::<Fraction>().unwrap(),
            Fraction::new(1, 5).unwrap()
        );
        assert_eq!(
            "1/5".parse::<Fraction>().unwrap(),
            Fraction::new(1, 5).unwrap()
        );
        assert_eq!(
            ".8".parse::<Fraction>().unwrap(),
            Fraction::new(4, 5).unwrap()
        );
        assert_eq!("1".parse::<Fraction>().unwrap(), Fraction::from_integer(1));
        assert!("-0.2".parse::<Fraction>().is_err());
        assert!("1/0".parse::<Fraction>().is_err());
        assert!("abc".parse::<Fraction>().is_err());
        assert!(".".parse::<Fraction>().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(Fraction::new(1, 5).unwrap().to_string(), "0.2");
        assert_eq!(Fraction::new(4, 5).unwrap().to_string(), "0.8");
        assert_eq!(Fraction::new(1, 3).unwrap().to_string(), "1/3");
        assert_eq!(Fraction::new(3, 1).unwrap().to_string(), "3");
        assert_eq!(Fraction::new(29, 100).unwrap().to_string(), "0.29");
    }

    #[test]
    fn exact_scaling() {
        let f: Fraction = "0.2".parse().unwrap();
        assert_eq!(f.mul_round(63_868), 12_774);
        assert_eq!(f.mul_round(5), 1);
        // 0.29 × 100 is 28.999… in binary floating point
        let g: Fraction = "0.29".parse().unwrap();
        assert_eq!(g.mul_floor(100), 29);
        // half rounds away from zero
        let h: Fraction = "0.5".parse().unwrap();
        assert_eq!(h.mul_round(3), 2);
        assert_eq!(h.mul_floor(3), 1);
    }
}
