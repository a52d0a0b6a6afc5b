//! Property-based invariants for the core algebra.

use heu_core::{
    choquet_integral, compose_capacity, Act, Capacity, Hypothesis, Interpretation, Measure,
    Rational,
};
use proptest::prelude::*;

fn rational_strategy(max_num: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (0..=max_num, 1..=max_den).prop_map(|(n, d)| Rational::ratio(n, d))
}

fn act_strategy(n: usize) -> impl Strategy<Value = Act> {
    prop::collection::vec(rational_strategy(9, 4), n).prop_map(|p| Act::new(p).unwrap())
}

fn measure_strategy(n: usize) -> impl Strategy<Value = Measure> {
    prop::collection::vec(1u32..=9, n).prop_map(|raw| {
        let total: i64 = raw.iter().map(|&k| i64::from(k)).sum();
        Measure::new(
            raw.into_iter()
                .map(|k| Rational::ratio(i64::from(k), total))
                .collect(),
        )
        .unwrap()
    })
}

/// Monotone capacity built by closing random spot values upward.
fn capacity_strategy(n: usize) -> impl Strategy<Value = Capacity> {
    prop::collection::vec(0u32..=12, (1 << n) - 2).prop_map(move |spots| {
        let size = 1usize << n;
        let mut values = vec![Rational::zero(); size];
        for m in 1..size - 1 {
            let mut v = Rational::ratio(i64::from(spots[m - 1]), 12);
            for i in 0..n {
                if m & (1 << i) != 0 {
                    let below = &values[m & !(1 << i)];
                    if *below > v {
                        v = below.clone();
                    }
                }
            }
            values[m] = v;
        }
        values[size - 1] = Rational::one();
        // cap intermediate values at one
        for v in values.iter_mut() {
            if *v > Rational::one() {
                *v = Rational::one();
            }
        }
        Capacity::from_values(n, values).unwrap()
    })
}

fn table_strategy(n: usize) -> impl Strategy<Value = Interpretation> {
    let size = 1usize << n;
    prop::collection::vec(0u32..(1u32 << n), size).prop_map(move |masks| {
        Interpretation::new(n, masks.into_iter().map(Hypothesis::from_mask).collect()).unwrap()
    })
}

proptest! {
    /// Against an additive capacity the Choquet integral is the ordinary
    /// expectation, for any act.
    #[test]
    fn choquet_additive_is_dot_product(
        f in act_strategy(8),
        mu in measure_strategy(8),
    ) {
        let nu = Capacity::from_measure(&mu);
        let expectation: Rational = (0..8).map(|i| f.payoff(i) * mu.weight(i)).sum();
        prop_assert_eq!(choquet_integral(&f, &nu).unwrap(), expectation);
    }

    /// Pointwise dominance of acts is preserved by the Choquet integral
    /// for every capacity.
    #[test]
    fn choquet_monotone_in_acts(
        f in act_strategy(5),
        bump in prop::collection::vec(rational_strategy(3, 3), 5),
        nu in capacity_strategy(5),
    ) {
        let g = Act::new(
            (0..5).map(|i| f.payoff(i) + &bump[i]).collect()
        ).unwrap();
        prop_assert!(nu.choquet(&f).unwrap() <= nu.choquet(&g).unwrap());
    }

    /// Relabeling states consistently in the act and the capacity leaves
    /// the integral unchanged.
    #[test]
    fn choquet_relabeling_symmetry(
        f in act_strategy(5),
        nu in capacity_strategy(5),
        seed in 0u64..120,
    ) {
        // permutation from the seed's factorial digits
        let mut perm: Vec<usize> = (0..5).collect();
        let mut s = seed as usize;
        for i in (1..5).rev() {
            let j = s % (i + 1);
            s /= i + 1;
            perm.swap(i, j);
        }
        let permute_mask = |h: Hypothesis| {
            let mut out = Hypothesis::EMPTY;
            for i in h.states() {
                out = out.union(Hypothesis::singleton(perm[i]));
            }
            out
        };
        let f2 = {
            let mut payoffs = vec![Rational::zero(); 5];
            for i in 0..5 {
                payoffs[perm[i]] = f.payoff(i).clone();
            }
            Act::new(payoffs).unwrap()
        };
        let nu2 = {
            let mut values = vec![Rational::zero(); 32];
            for h in Hypothesis::all(5) {
                values[permute_mask(h).mask() as usize] = nu.value(h).clone();
            }
            Capacity::from_values(5, values).unwrap()
        };
        prop_assert_eq!(nu.choquet(&f).unwrap(), nu2.choquet(&f2).unwrap());
    }

    /// Dualization is an involution on arbitrary tables.
    #[test]
    fn dualize_involution(pi in table_strategy(3)) {
        prop_assert_eq!(pi.dualize().dualize(), pi);
    }

    /// Composition with the identity map reproduces the measure.
    #[test]
    fn compose_identity(mu in measure_strategy(4)) {
        let nu = compose_capacity(&mu, &Interpretation::identity(4)).unwrap();
        prop_assert_eq!(nu, Capacity::from_measure(&mu));
    }

    /// Capacity documents round-trip through JSON.
    #[test]
    fn capacity_json_round_trip(nu in capacity_strategy(4)) {
        let doc = heu_core::json::capacity_to_json(&nu);
        let back = heu_core::json::parse_capacity(&doc, None).unwrap();
        prop_assert_eq!(back, nu);
    }

    /// Interpretation documents round-trip through JSON.
    #[test]
    fn interpretation_json_round_trip(pi in table_strategy(3)) {
        let doc = heu_core::json::interpretation_to_json(&pi);
        let back = heu_core::json::parse_interpretation(&doc).unwrap();
        prop_assert_eq!(back, pi);
    }

    /// Act and measure documents round-trip through JSON.
    #[test]
    fn act_measure_json_round_trip(f in act_strategy(5), mu in measure_strategy(5)) {
        let fd = heu_core::json::act_to_json(&f);
        prop_assert_eq!(heu_core::json::parse_act(&fd).unwrap(), f);
        let md = heu_core::json::measure_to_json(&mu);
        prop_assert_eq!(heu_core::json::parse_measure(&md).unwrap(), mu);
    }
}

/// Distribution is equivalent to monotonicity plus consistency, checked
/// exhaustively over all 16.7M tables on three states with a compact
/// independent oracle, sampled against the library implementation.
#[test]
fn distribution_equivalence_exhaustive_three_states() {
    fn compact_props(table: &[u8; 8]) -> (bool, bool, bool) {
        let mut monotone = true;
        let mut consistent = true;
        let mut distributive = true;
        for h in 0..8usize {
            for g in 0..8usize {
                let union_image = table[h | g];
                let image_union = table[h] | table[g];
                if h & !g == 0 && table[h] & !table[g] != 0 {
                    monotone = false;
                }
                if union_image & !image_union != 0 {
                    consistent = false;
                }
                if union_image != image_union {
                    distributive = false;
                }
                if !monotone && !consistent && !distributive {
                    return (false, false, false);
                }
            }
        }
        (monotone, consistent, distributive)
    }

    // dualization of a compact table: dual[h] = complement(table[complement h])
    fn compact_dual(table: &[u8; 8]) -> [u8; 8] {
        let mut out = [0u8; 8];
        for (h, slot) in out.iter_mut().enumerate() {
            *slot = !table[7 - h] & 7;
        }
        out
    }

    let mut table = [0u8; 8];
    let mut count: u64 = 0;
    let mut checked_against_library = 0u64;
    loop {
        let (m, c, d) = compact_props(&table);
        assert_eq!(
            d,
            m && c,
            "distribution equivalence failed at table {table:?}"
        );
        // dualization is an involution on every table
        assert_eq!(
            compact_dual(&compact_dual(&table)),
            table,
            "dualize involution failed at {table:?}"
        );
        if count.is_multiple_of(1_048_573) {
            // tie the compact oracle to the real implementation
            let pi = Interpretation::new(
                3,
                table
                    .iter()
                    .map(|&x| Hypothesis::from_mask(u32::from(x)))
                    .collect(),
            )
            .unwrap();
            let report = pi.check_properties();
            assert_eq!(report.monotonicity.holds, m);
            assert_eq!(report.consistency.holds, c);
            assert_eq!(report.distribution.holds, d);
            let dual = compact_dual(&table);
            assert_eq!(
                pi.dualize().table(),
                dual.iter()
                    .map(|&x| Hypothesis::from_mask(u32::from(x)))
                    .collect::<Vec<_>>()
                    .as_slice()
            );
            checked_against_library += 1;
        }
        count += 1;
        let mut k = 0;
        loop {
            if k == 8 {
                assert_eq!(count, 8u64.pow(8));
                assert!(checked_against_library > 10);
                println!(
                    "distribution equivalence: {count} tables, {checked_against_library} cross-checked"
                );
                return;
            }
            table[k] += 1;
            if table[k] < 8 {
                break;
            }
            table[k] = 0;
            k += 1;
        }
    }
}

/// Every value type is immutable and freely shareable across threads.
#[test]
fn core_types_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<heu_core::Rational>();
    assert_send_sync::<heu_core::Hypothesis>();
    assert_send_sync::<heu_core::StateSpace>();
    assert_send_sync::<heu_core::Act>();
    assert_send_sync::<heu_core::Measure>();
    assert_send_sync::<heu_core::Capacity>();
    assert_send_sync::<heu_core::Interpretation>();
    assert_send_sync::<heu_core::GeneratorForm>();
    assert_send_sync::<heu_core::ImplicationRelation>();
    assert_send_sync::<heu_core::Representation>();
}

/// Sampled relations that pass the axioms round-trip through the
/// constructed interpretation.
#[test]
fn perturbed_relation_round_trip() {
    let check = heu_core::verify::relation_roundtrip(3);
    assert!(check.passed(), "{}: {:?}", check.name, check.detail);
    assert!(check.instances > 0);
}
