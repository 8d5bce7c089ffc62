//! Exact rational minimum-degree thresholds.
//!
//! A hypothesis of the form `δ(G) > (p/q)·n` is tested as the integer
//! comparison `δ·q > p·n`; no floating point is involved anywhere.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Threshold {
    num: i64,
    den: i64,
}

impl Threshold {
    /// Builds `num/den` in lowest terms with a positive denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter(
                "threshold denominator is zero".into(),
            ));
        }
        let g = num.gcd(&den).max(1);
        let sign = den.signum();
        Ok(Threshold {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// `(3r-4)/(3r-1)`: the simple-graph minimum-degree ratio forcing `r`-colourability.
    pub fn simple_aes(r: u32) -> Result<Self> {
        check_r(r, 2)?;
        let r = i64::from(r);
        Self::new(3 * r - 4, 3 * r - 1)
    }

    /// `(6r-8)/(3r-1)`: forces a homomorphism into `RK_r` for `F_{2r+1}`-free graphs.
    pub fn odd(r: u32) -> Result<Self> {
        check_r(r, 2)?;
        let r = i64::from(r);
        Self::new(6 * r - 8, 3 * r - 1)
    }

    /// `(14r-24)/(7r-5)`: forces a homomorphism into `RK_r^-` for `F_{2r}`-free graphs.
    pub fn even(r: u32) -> Result<Self> {
        check_r(r, 3)?;
        let r = i64::from(r);
        Self::new(14 * r - 24, 7 * r - 5)
    }

    /// Strict test `d > (num/den)·n`, exact.
    pub fn exceeded_by(&self, d: i64, n: i64) -> bool {
        exceeds_threshold(d, n, *self)
    }

    /// The smallest integer degree that strictly exceeds `(num/den)·n`.
    pub fn cutoff(&self, n: i64) -> i64 {
        let scaled = i128::from(self.num) * i128::from(n);
        let den = i128::from(self.den);
        (scaled.div_euclid(den) + 1) as i64
    }
}

fn check_r(r: u32, min: u32) -> Result<()> {
    if r < min {
        Err(Error::InvalidParameter(format!(
            "r = {r} but r >= {min} is required"
        )))
    } else {
        Ok(())
    }
}

/// `true` iff `d > (t.num/t.den)·n`, evaluated as `d·den > num·n` in 128-bit integers.
pub fn exceeds_threshold(d: i64, n: i64, t: Threshold) -> bool {
    i128::from(d) * i128::from(t.den) > i128::from(t.num) * i128::from(n)
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let t = Threshold::new(18, 16).unwrap();
        assert_eq!((t.num(), t.den()), (9, 8));
        let t = Threshold::new(3, -6).unwrap();
        assert_eq!((t.num(), t.den()), (-1, 2));
        assert!(Threshold::new(1, 0).is_err());
        assert_eq!(Threshold::new(0, 5).unwrap(), Threshold::new(0, 1).unwrap());
    }

    #[test]
    fn strictness_at_the_boundary() {
        let t = Threshold::new(18, 16).unwrap();
        assert!(!exceeds_threshold(18, 16, t));
        assert!(exceeds_threshold(19, 16, t));
        let t = Threshold::new(4, 5).unwrap();
        assert!(!exceeds_threshold(4, 5, t));
    }

    #[test]
    fn named_constants() {
        assert_eq!(Threshold::odd(2).unwrap(), Threshold::new(4, 5).unwrap());
        assert_eq!(Threshold::odd(3).unwrap(), Threshold::new(10, 8).unwrap());
        assert_eq!(Threshold::even(3).unwrap(), Threshold::new(18, 16).unwrap());
        assert_eq!(Threshold::even(4).unwrap(), Threshold::new(32, 23).unwrap());
        assert_eq!(
            Threshold::simple_aes(2).unwrap(),
            Threshold::new(2, 5).unwrap()
        );
        assert!(Threshold::even(2).is_err());
        assert!(Threshold::odd(1).is_err());
    }

    #[test]
    fn cutoff_is_first_strict_integer() {
        let t = Threshold::even(3).unwrap();
        assert_eq!(t.cutoff(6), 7);
        assert_eq!(t.cutoff(16), 19);
        assert_eq!(Threshold::odd(2).unwrap().cutoff(5), 5);
        assert_eq!(Threshold::new(-3, 2).unwrap().cutoff(1), -1);
        for n in 1..40 {
            let c = t.cutoff(n);
            assert!(t.exceeded_by(c, n));
            assert!(!t.exceeded_by(c - 1, n));
        }
    }
}
