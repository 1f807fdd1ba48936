mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use omega_core::bits::{
    all_up_to, bitstring_of_integer, gamma_decode, gamma_encode, integer_of_bitstring,
    is_prefix_free, kraft_sum_of,
};
use omega_core::enumerate::{exact_omega, omega_stages};
use omega_core::machine::bitbf::{encode_program, program_len, Opcode};
use omega_core::machine::HaltingModel;
use omega_core::oracle::{complexity_upper, first_complex_integer, print_program};
use omega_core::{BitString, DyadicRational, ExecConfig, LengthBound, Machine, RunOutcome};
use proptest::prelude::*;

use common::{bs, table_strategy};

fn fuel(n: u64) -> ExecConfig {
    ExecConfig::new(n).unwrap()
}

fn dyadic(num: u64, scale: u64) -> DyadicRational {
    DyadicRational::new(BigUint::from(num), scale)
}

fn opcode() -> impl Strategy<Value = Opcode> {
    (0u8..8).prop_map(Opcode::from_code)
}

fn produced(machine: &Machine, size: usize, config: &ExecConfig) -> BTreeSet<BitString> {
    machine
        .valid_programs(size)
        .filter_map(|p| match machine.run(&p, config) {
            RunOutcome::Halted { output, .. } => Some(output),
            _ => None,
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn dyadic_add_matches_cross_multiplication(
        a in any::<u64>(), sa in 0u64..80, b in any::<u64>(), sb in 0u64..80,
    ) {
        let s = sa.max(sb);
        let expected = (BigUint::from(a) << (s - sa)) + (BigUint::from(b) << (s - sb));
        let sum = dyadic(a, sa) + dyadic(b, sb);
        prop_assert_eq!(&sum, &DyadicRational::new(expected, s));
        prop_assert_eq!(sum, dyadic(b, sb) + dyadic(a, sa));
    }
}

proptest! {
    #[test]
    fn binary_expansion_round_trips(bits in prop::collection::vec(any::<bool>(), 1..100)) {
        let s = BitString::from_bits(bits);
        let value = DyadicRational::from_bits(&s);
        prop_assert_eq!(value.binary_expansion(s.len()).unwrap(), s);
    }

    #[test]
    fn kraft_sum_bounded_and_one_only_when_complete(
        raw in prop::collection::vec(prop::collection::vec(any::<bool>(), 1..=6), 1..12)
    ) {
        // Drop anything that clashes with an earlier pick.
        let mut code: Vec<BitString> = Vec::new();
        for r in raw {
            let s = BitString::from_bits(r);
            if code.iter().all(|c| !c.starts_with(&s) && !s.starts_with(c)) {
                code.push(s);
            }
        }
        prop_assert!(is_prefix_free(&code).is_ok());
        let sum = kraft_sum_of(&code).unwrap();
        prop_assert!(sum <= DyadicRational::one());
        let complete = omega_core::bits::all_of_length(6)
            .all(|leaf| code.iter().any(|c| leaf.starts_with(c)));
        prop_assert_eq!(sum == DyadicRational::one(), complete);
    }

    #[test]
    fn fuel_is_monotone(ops in prop::collection::vec(opcode(), 1..10), f in 1u64..40, extra in 0u64..40) {
        let program = encode_program(&ops).unwrap();
        let m = Machine::universal();
        prop_assume!(m.is_valid(&program));
        let low = m.run(&program, &fuel(f));
        let high = m.run(&program, &fuel(f + extra));
        match (&low, &high) {
            (RunOutcome::Halted { .. }, _) => prop_assert_eq!(&low, &high),
            (RunOutcome::Exhausted { .. }, _) => {}
            (RunOutcome::Invalid { .. }, _) => prop_assert!(false, "valid program reported invalid"),
        }
    }

    #[test]
    fn table_stages_converge_to_exact_omega(m in table_strategy(12, 10)) {
        let table = m.as_table().unwrap();
        let exact = exact_omega(&m).unwrap();
        let reports = omega_stages(&m, table.max_program_len(), None).unwrap();
        let mut previous = DyadicRational::zero();
        for r in &reports {
            prop_assert!(r.omega_lower >= previous);
            prop_assert!(r.omega_lower <= exact);
            previous = r.omega_lower.clone();
        }
        prop_assert_eq!(&reports.last().unwrap().omega_lower, &exact);
    }

    #[test]
    fn stages_never_count_a_program_twice(m in table_strategy(10, 10)) {
        let reports = omega_stages(&m, 10, None).unwrap();
        let mut seen = BTreeSet::new();
        for r in &reports {
            for h in &r.newly_halted {
                prop_assert!(seen.insert(h.program.clone()), "{} counted twice", h.program);
            }
            prop_assert_eq!(r.cumulative_halted_count, seen.len());
        }
        prop_assert_eq!(seen.len(), m.as_table().unwrap().len());
    }

    #[test]
    fn complexity_witnesses_re_execute(target in prop::collection::vec(any::<bool>(), 0..=2), f in 1u64..12) {
        let target = BitString::from_bits(target);
        let m = Machine::universal();
        let bound = complexity_upper(&m, &target, 16, fuel(f)).unwrap();
        if let Some(w) = &bound.witness {
            prop_assert_eq!(&w.output, &target);
            prop_assert_eq!(Some(w.program.len()), bound.size);
            match m.run(&w.program, &fuel(w.steps)) {
                RunOutcome::Halted { output, steps, .. } => {
                    prop_assert_eq!(output, target);
                    prop_assert_eq!(steps, w.steps);
                }
                other => prop_assert!(false, "witness did not halt: {}", other),
            }
        }
    }

    #[test]
    fn berry_produced_sets_grow_with_the_bound(m in table_strategy(8, 8), a in 1usize..=8, b in 1usize..=8) {
        let (small, large) = (a.min(b), a.max(b));
        let one = fuel(1);
        let p_small = produced(&m, small, &one);
        let p_large = produced(&m, large, &one);
        prop_assert!(p_small.is_subset(&p_large));
        let found = first_complex_integer(&m, large, one).unwrap().integer_found;
        let found_bits = bitstring_of_integer(found, LengthBound::DEFAULT).unwrap();
        prop_assert!(!p_small.contains(&found_bits));
        prop_assert!(!p_large.contains(&found_bits));
    }
}

#[test]
fn gamma_codes_are_prefix_free_up_to_1000() {
    let codes: Vec<BitString> = (1..=1000).map(|n| gamma_encode(n).unwrap()).collect();
    for (i, a) in codes.iter().enumerate() {
        for b in &codes[i + 1..] {
            assert!(!b.starts_with(a) && !a.starts_with(b), "{a} vs {b}");
        }
    }
    for (n, code) in (1..=1000u64).zip(&codes) {
        assert_eq!(gamma_decode(&mut code.iter()).unwrap(), (n, code.len()));
    }
}

#[test]
fn index_bijection_below_2_pow_17() {
    let bound = LengthBound::new(17).unwrap();
    let mut previous: Option<BitString> = None;
    for i in 0u128..(1 << 17) {
        let s = bitstring_of_integer(i, bound).unwrap();
        assert_eq!(integer_of_bitstring(&s).unwrap(), i);
        if let Some(p) = &previous {
            assert!(p < &s);
        }
        previous = Some(s);
    }
    assert_eq!(integer_of_bitstring(&bs("")).unwrap(), 0);
    assert_eq!(integer_of_bitstring(&bs("00")).unwrap(), 3);
}

#[test]
fn universal_stages_never_count_a_program_twice() {
    let reports = omega_stages(&Machine::universal(), 14, None).unwrap();
    let mut seen = BTreeSet::new();
    for r in &reports {
        for h in &r.newly_halted {
            assert!(seen.insert(h.program.clone()));
        }
        assert_eq!(r.cumulative_halted_count, seen.len());
    }
}

#[test]
fn print_program_overhead() {
    // Observed constant: |print(x)| ≤ 6·|x| + 7 for |x| ≤ 5, header included.
    let m = Machine::universal();
    for x in all_up_to(5) {
        let p = print_program(&x);
        let ops = 2 * x.len() as u64;
        assert!(p.len() <= program_len(ops.max(1)), "{x}");
        assert!(p.len() <= 6 * x.len() + 7, "{x}: {}", p.len());
        let expected_steps = ops.max(1);
        match m.run(&p, &fuel(expected_steps)) {
            RunOutcome::Halted { output, .. } => assert_eq!(output, x),
            other => panic!("{x}: {other}"),
        }
        // An exhaustive search stays affordable for short targets.
        if x.len() <= 2 {
            let bound = complexity_upper(&m, &x, p.len(), fuel(expected_steps)).unwrap();
            let size = bound.size.expect("print program is within the bound");
            assert!(size <= p.len());
        }
    }
}
