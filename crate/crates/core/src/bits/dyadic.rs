use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{BitString, BitsError};

/// An exact nonnegative rational `numerator / 2^scale`.
///
/// Always kept in canonical form: the numerator is odd, or the value is zero
/// with scale 0. Structural equality is therefore numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DyadicRational {
    numerator: BigUint,
    scale: u64,
}

impl DyadicRational {
    pub fn zero() -> Self {
        Self {
            numerator: BigUint::zero(),
            scale: 0,
        }
    }

    pub fn one() -> Self {
        Self {
            numerator: BigUint::one(),
            scale: 0,
        }
    }

    pub fn new(numerator: BigUint, scale: u64) -> Self {
        let mut d = Self { numerator, scale };
        d.canonicalize();
        d
    }

    /// `1 / 2^scale`, the weight of one program of `scale` bits.
    pub fn unit(scale: u64) -> Self {
        Self {
            numerator: BigUint::one(),
            scale,
        }
    }

    /// The value `0.b1 b2 … bn` of a bit string read as a binary fraction.
    pub fn from_bits(bits: &BitString) -> Self {
        let mut numerator = BigUint::zero();
        for b in bits.iter() {
            numerator <<= 1u32;
            if b {
                numerator += 1u32;
            }
        }
        Self::new(numerator, bits.len() as u64)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn canonicalize(&mut self) {
        match self.numerator.trailing_zeros() {
            None => self.scale = 0,
            Some(tz) => {
                let shift = tz.min(self.scale);
                self.numerator >>= shift;
                self.scale -= shift;
            }
        }
    }

    /// Numerator rescaled to denominator `2^scale`; `scale` must be at least `self.scale`.
    fn numerator_at(&self, scale: u64) -> BigUint {
        &self.numerator << (scale - self.scale)
    }

    /// The first `n` bits after the binary point. Requires `0 <= self < 1`.
    pub fn binary_expansion(&self, n: usize) -> Result<BitString, BitsError> {
        if self >= &Self::one() {
            return Err(BitsError::OutOfRange {
                value: self.to_string(),
            });
        }
        Ok((1..=n as u64)
            .map(|i| i <= self.scale && self.numerator.bit(self.scale - i))
            .collect())
    }

    /// Binary positional rendering, e.g. `0.000110`.
    ///
    /// Uses at least `min_digits` fractional digits (and always at least
    /// enough to be exact, and at least one).
    pub fn to_binary_string(&self, min_digits: usize) -> String {
        let digits = (self.scale as usize).max(min_digits).max(1);
        let int_part = &self.numerator >> self.scale;
        let mut out = int_part.to_str_radix(2);
        out.push('.');
        for i in 1..=digits as u64 {
            let bit = i <= self.scale && self.numerator.bit(self.scale - i);
            out.push(if bit { '1' } else { '0' });
        }
        out
    }
}

impl Default for DyadicRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add<&DyadicRational> for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let scale = self.scale.max(rhs.scale);
        DyadicRational::new(self.numerator_at(scale) + rhs.numerator_at(scale), scale)
    }
}

impl Add for DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: DyadicRational) -> DyadicRational {
        &self + &rhs
    }
}

impl AddAssign<&DyadicRational> for DyadicRational {
    fn add_assign(&mut self, rhs: &DyadicRational) {
        *self = &*self + rhs;
    }
}

impl<'a> Sum<&'a DyadicRational> for DyadicRational {
    fn sum<I: Iterator<Item = &'a DyadicRational>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, d| &acc + d)
    }
}

impl Sum for DyadicRational {
    fn sum<I: Iterator<Item = DyadicRational>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, d| &acc + &d)
    }
}

/// Exact sum of two dyadic rationals.
pub fn dyadic_add(a: &DyadicRational, b: &DyadicRational) -> DyadicRational {
    a + b
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let scale = self.scale.max(other.scale);
        self.numerator_at(scale).cmp(&other.numerator_at(scale))
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.scale)
    }
}

impl fmt::Debug for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for DyadicRational {
    type Err = BitsError;

    /// Parses the `numerator/2^scale` rendering (canonical or not).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BitsError::BadDyadic(s.to_string());
        let (num, scale) = s.split_once("/2^").ok_or_else(bad)?;
        if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let numerator = BigUint::parse_bytes(num.as_bytes(), 10).ok_or_else(bad)?;
        let scale = scale.parse::<u64>().map_err(|_| bad())?;
        Ok(Self::new(numerator, scale))
    }
}

impl TryFrom<String> for DyadicRational {
    type Error = BitsError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<DyadicRational> for String {
    fn from(d: DyadicRational) -> String {
        d.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: u64, scale: u64) -> DyadicRational {
        DyadicRational::new(BigUint::from(n), scale)
    }

    #[test]
    fn carry_out_of_sixth_position() {
        let sum = dyadic_add(&DyadicRational::unit(6), &DyadicRational::unit(6));
        assert_eq!(sum, DyadicRational::unit(5));
        assert_eq!(sum.scale(), 5);
    }

    #[test]
    fn additive_identity() {
        let x = frac(13, 9);
        assert_eq!(dyadic_add(&x, &DyadicRational::zero()), x);
    }

    #[test]
    fn sixteenth_plus_thirty_second() {
        let sum = dyadic_add(&DyadicRational::unit(4), &DyadicRational::unit(5));
        assert_eq!(sum, frac(3, 5));
        assert_eq!(sum.to_string(), "3/2^5");
    }

    #[test]
    fn canonical_form() {
        assert_eq!(frac(12, 5), frac(3, 3));
        assert_eq!(frac(0, 17).scale(), 0);
        assert_eq!(frac(8, 2), frac(2, 0));
    }

    #[test]
    fn expansions() {
        let three_32nds = frac(3, 5);
        assert_eq!(
            three_32nds.binary_expansion(6).unwrap().to_string(),
            "000110"
        );
        assert_eq!(
            three_32nds.binary_expansion(8).unwrap().to_string(),
            "00011000"
        );
        assert_eq!(
            DyadicRational::zero()
                .binary_expansion(4)
                .unwrap()
                .to_string(),
            "0000"
        );
        assert!(matches!(
            DyadicRational::one().binary_expansion(3),
            Err(BitsError::OutOfRange { .. })
        ));
        assert!(frac(5, 2).binary_expansion(3).is_err());
    }

    #[test]
    fn binary_rendering() {
        assert_eq!(frac(3, 5).to_binary_string(6), "0.000110");
        assert_eq!(frac(3, 5).to_binary_string(0), "0.00011");
        assert_eq!(DyadicRational::one().to_binary_string(1), "1.0");
        assert_eq!(DyadicRational::zero().to_binary_string(0), "0.0");
        assert_eq!(frac(5, 1).to_binary_string(0), "10.1");
    }

    #[test]
    fn text_round_trip() {
        for d in [
            frac(3, 5),
            DyadicRational::zero(),
            DyadicRational::one(),
            frac(1, 64),
        ] {
            assert_eq!(d.to_string().parse::<DyadicRational>().unwrap(), d);
        }
        assert_eq!("6/2^6".parse::<DyadicRational>().unwrap(), frac(3, 5));
        for bad in ["", "3/32", "x/2^3", "3/2^", "-1/2^2", "3/2^-1"] {
            assert!(bad.parse::<DyadicRational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn ordering() {
        assert!(frac(3, 5) < frac(7, 6));
        assert!(frac(1, 1) > frac(1, 2));
        assert_eq!(frac(2, 2).cmp(&frac(1, 1)), Ordering::Equal);
    }

    #[test]
    fn from_bits_value() {
        let bits: BitString = "000110".parse().unwrap();
        assert_eq!(DyadicRational::from_bits(&bits), frac(3, 5));
        assert_eq!(
            DyadicRational::from_bits(&BitString::new()),
            DyadicRational::zero()
        );
    }
}
