//! Bit strings, exact dyadic arithmetic, prefix codes and the gamma code.

mod bitstring;
mod dyadic;
mod gamma;
mod prefix;

use thiserror::Error;

pub use bitstring::{
    all_of_length, all_up_to, bitstring_of_integer, integer_of_bitstring, BitString, LengthBound,
};
pub use dyadic::{dyadic_add, DyadicRational};
pub use gamma::{gamma_decode, gamma_encode, gamma_len, GammaError};
pub use prefix::{is_prefix_free, kraft_sum, kraft_sum_of, PrefixCode, PrefixError};

pub(crate) use prefix::kraft_sum_unchecked;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("invalid bit digit {found:?} at position {position}")]
    InvalidDigit { position: usize, found: char },
    #[error("bit string of length {len} exceeds the length bound {max}")]
    TooLong { len: usize, max: usize },
    #[error("length bound {requested} outside 1..={max}")]
    BadBound { requested: usize, max: usize },
    #[error("bit string of length {len} has no 128-bit index")]
    IndexOverflow { len: usize },
    #[error("integer {index} maps to a bit string longer than {max} bits")]
    IntegerTooLarge { index: u128, max: usize },
    #[error("{value} is outside [0, 1)")]
    OutOfRange { value: String },
    #[error("malformed dyadic rational {0:?}, expected numerator/2^scale")]
    BadDyadic(String),
}
