//! Elias-gamma code: `floor(log2 n)` zeros followed by `n` in binary.

use thiserror::Error;

use super::BitString;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("gamma code cannot represent 0")]
    Zero,
    #[error("bit source exhausted after {consumed} bits of a gamma codeword")]
    Truncated { consumed: usize },
    #[error("gamma codeword with {zeros} leading zeros does not fit in 64 bits")]
    Overflow { zeros: usize },
}

pub fn gamma_encode(n: u64) -> Result<BitString, GammaError> {
    if n == 0 {
        return Err(GammaError::Zero);
    }
    let width = 64 - n.leading_zeros() as usize;
    let mut out = BitString::from_bits(std::iter::repeat_n(false, width - 1));
    out.extend_from(&BitString::from_uint(n as u128, width));
    Ok(out)
}

/// Length of `gamma_encode(n)` without building it: `2 * floor(log2 n) + 1`.
pub fn gamma_len(n: u64) -> usize {
    debug_assert!(n >= 1);
    2 * (63 - n.leading_zeros() as usize) + 1
}

/// Reads one codeword from `source`, returning the value and bits consumed.
pub fn gamma_decode<I>(source: &mut I) -> Result<(u64, usize), GammaError>
where
    I: Iterator<Item = bool> + ?Sized,
{
    let mut zeros = 0usize;
    loop {
        match source.next() {
            None => return Err(GammaError::Truncated { consumed: zeros }),
            Some(true) => break,
            Some(false) => zeros += 1,
        }
    }
    if zeros > 63 {
        return Err(GammaError::Overflow { zeros });
    }
    let mut value = 1u64;
    for i in 0..zeros {
        let bit = source.next().ok_or(GammaError::Truncated {
            consumed: zeros + 1 + i,
        })?;
        value = (value << 1) | bit as u64;
    }
    Ok((value, 2 * zeros + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enc(n: u64) -> String {
        gamma_encode(n).unwrap().to_string()
    }

    #[test]
    fn small_codewords() {
        assert_eq!(enc(1), "1");
        assert_eq!(enc(2), "010");
        assert_eq!(enc(5), "00101");
        assert_eq!(gamma_encode(0), Err(GammaError::Zero));
    }

    #[test]
    fn decode_examples() {
        let bits: BitString = "00101111".parse().unwrap();
        let mut src = bits.iter();
        assert_eq!(gamma_decode(&mut src), Ok((5, 5)));
        assert_eq!(src.count(), 3);
    }

    #[test]
    fn truncation() {
        let bits: BitString = "00".parse().unwrap();
        assert_eq!(
            gamma_decode(&mut bits.iter()),
            Err(GammaError::Truncated { consumed: 2 })
        );
        let bits: BitString = "0011".parse().unwrap();
        assert_eq!(
            gamma_decode(&mut bits.iter()),
            Err(GammaError::Truncated { consumed: 4 })
        );
    }

    #[test]
    fn max_value_round_trip() {
        let code = gamma_encode(u64::MAX).unwrap();
        assert_eq!(code.len(), 127);
        assert_eq!(gamma_decode(&mut code.iter()), Ok((u64::MAX, 127)));
        let too_long = BitString::from_bits(std::iter::repeat_n(false, 64).chain([true]));
        assert_eq!(
            gamma_decode(&mut too_long.iter()),
            Err(GammaError::Overflow { zeros: 64 })
        );
    }

    #[test]
    fn length_formula() {
        for n in 1..=1000u64 {
            assert_eq!(gamma_encode(n).unwrap().len(), gamma_len(n));
            assert_eq!(gamma_len(n), 2 * (n as f64).log2().floor() as usize + 1);
        }
    }
}
