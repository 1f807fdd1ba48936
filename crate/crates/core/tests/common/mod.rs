#![allow(dead_code)]

use omega_core::bits::kraft_sum_of;
use omega_core::machine::{ProgramEntry, TableMachine};
use omega_core::{BitString, DyadicRational, Machine};
use proptest::prelude::*;

pub fn bs(s: &str) -> BitString {
    s.parse().unwrap()
}

pub fn examples_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

pub fn sample_table() -> Machine {
    Machine::table(
        TableMachine::from_pairs([("0001", "1"), ("000001", "10"), ("000011", "11")]).unwrap(),
    )
    .unwrap()
}

pub fn berry_fixture() -> Machine {
    Machine::table(
        TableMachine::from_pairs([("0001", "0"), ("000001", "1"), ("000011", "00")]).unwrap(),
    )
    .unwrap()
}

/// Greedily keeps candidates that leave the set prefix-free with Kraft sum
/// below 1. The first candidate always survives.
pub fn build_table(candidates: &[(usize, u16, u8)]) -> Machine {
    let mut keys: Vec<BitString> = Vec::new();
    let mut entries = Vec::new();
    for &(len, value, out) in candidates {
        let key = BitString::from_uint(u128::from(value) & ((1 << len) - 1), len);
        let mut trial = keys.clone();
        trial.push(key.clone());
        match kraft_sum_of(&trial) {
            Ok(sum) if sum < DyadicRational::one() => {
                keys = trial;
                let output = BitString::from_uint(u128::from(out & 0b111), (out >> 3) as usize % 4);
                entries.push(ProgramEntry::new(key, output));
            }
            _ => {}
        }
    }
    Machine::table(TableMachine::new(entries).unwrap()).unwrap()
}

/// Prefix-free tables of at most `max_keys` keys, each at most `max_len` bits.
pub fn table_strategy(max_len: usize, max_keys: usize) -> impl Strategy<Value = Machine> {
    prop::collection::vec((1..=max_len, any::<u16>(), any::<u8>()), 1..=max_keys)
        .prop_map(|c| build_table(&c))
}
