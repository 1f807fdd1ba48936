use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use super::{BitString, DyadicRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrefixError {
    #[error("duplicate member {0}")]
    Duplicate(BitString),
    #[error("not prefix-free: ({prefix}, {extension})")]
    Violation {
        prefix: BitString,
        extension: BitString,
    },
}

/// Checks that no member is a proper prefix of another.
///
/// On failure the witness `(p, q)` is the least violating pair in
/// length-lex order of `p`, then of `q`. Duplicates are reported first.
pub fn is_prefix_free(members: &[BitString]) -> Result<(), PrefixError> {
    let mut seen = HashSet::with_capacity(members.len());
    let mut duplicates = BTreeSet::new();
    for m in members {
        if !seen.insert(m) {
            duplicates.insert(m);
        }
    }
    if let Some(&dup) = duplicates.first() {
        return Err(PrefixError::Duplicate(dup.clone()));
    }

    let mut witness: Option<(BitString, &BitString)> = None;
    for q in members {
        for len in 0..q.len() {
            let p = q.prefix(len);
            if !seen.contains(&p) {
                continue;
            }
            let better = match &witness {
                None => true,
                Some((wp, wq)) => (&p, q) < (wp, *wq),
            };
            if better {
                witness = Some((p, q));
            }
            // Shorter prefixes sort first, so the first hit is q's best.
            break;
        }
    }
    match witness {
        None => Ok(()),
        Some((prefix, extension)) => Err(PrefixError::Violation {
            prefix,
            extension: extension.clone(),
        }),
    }
}

/// A finite set of bit strings checked to be prefix-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixCode {
    members: Vec<BitString>,
}

impl PrefixCode {
    pub fn new<I: IntoIterator<Item = BitString>>(members: I) -> Result<Self, PrefixError> {
        let mut members: Vec<BitString> = members.into_iter().collect();
        is_prefix_free(&members)?;
        members.sort();
        Ok(Self { members })
    }

    /// Members in length-lex order.
    pub fn members(&self) -> &[BitString] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn kraft_sum(&self) -> DyadicRational {
        kraft_sum(self)
    }
}

/// `Σ 2^-|m|` over the members of a prefix code, computed exactly.
pub fn kraft_sum(code: &PrefixCode) -> DyadicRational {
    let sum = kraft_sum_unchecked(code.members.iter());
    assert!(sum <= DyadicRational::one(), "Kraft sum {sum} exceeds 1");
    sum
}

/// Checks prefix-freeness, then sums.
pub fn kraft_sum_of(members: &[BitString]) -> Result<DyadicRational, PrefixError> {
    Ok(kraft_sum(&PrefixCode::new(members.iter().cloned())?))
}

/// The Kraft sum of arbitrary strings, without a prefix-freeness check.
pub(crate) fn kraft_sum_unchecked<'a, I>(members: I) -> DyadicRational
where
    I: IntoIterator<Item = &'a BitString>,
{
    let mut counts: Vec<u64> = Vec::new();
    for m in members {
        if counts.len() <= m.len() {
            counts.resize(m.len() + 1, 0);
        }
        counts[m.len()] += 1;
    }
    let Some(max_len) = counts.len().checked_sub(1) else {
        return DyadicRational::zero();
    };
    let mut numerator = BigUint::zero();
    for (len, &count) in counts.iter().enumerate() {
        if count > 0 {
            numerator += BigUint::from(count) << (max_len - len);
        }
    }
    DyadicRational::new(numerator, max_len as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> Vec<BitString> {
        items.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn three_key_table_is_prefix_free() {
        assert_eq!(is_prefix_free(&set(&["0001", "000001", "000011"])), Ok(()));
        assert_eq!(is_prefix_free(&set(&["0", "1"])), Ok(()));
    }

    #[test]
    fn violation_witness() {
        assert_eq!(
            is_prefix_free(&set(&["0", "01"])),
            Err(PrefixError::Violation {
                prefix: "0".parse().unwrap(),
                extension: "01".parse().unwrap(),
            })
        );
    }

    #[test]
    fn least_witness_is_reported() {
        // Violating pairs: (1, 10), (0, 011), (01, 011), (0, 00).
        let members = set(&["1", "011", "10", "01", "0", "00"]);
        assert_eq!(
            is_prefix_free(&members),
            Err(PrefixError::Violation {
                prefix: "0".parse().unwrap(),
                extension: "00".parse().unwrap(),
            })
        );
    }

    #[test]
    fn duplicates_are_distinct_error() {
        assert_eq!(
            is_prefix_free(&set(&["01", "1", "01"])),
            Err(PrefixError::Duplicate("01".parse().unwrap()))
        );
    }

    #[test]
    fn kraft_examples() {
        let three = kraft_sum_of(&set(&["0001", "000001", "000011"])).unwrap();
        assert_eq!(three.to_string(), "3/2^5");
        assert_eq!(kraft_sum_of(&[]).unwrap(), DyadicRational::zero());
        assert_eq!(
            kraft_sum_of(&set(&["0", "1"])).unwrap(),
            DyadicRational::one()
        );
        assert!(matches!(
            kraft_sum_of(&set(&["0", "01"])),
            Err(PrefixError::Violation { .. })
        ));
    }

    #[test]
    fn empty_string_alone_is_complete() {
        assert_eq!(kraft_sum_of(&set(&[""])).unwrap(), DyadicRational::one());
    }
}
