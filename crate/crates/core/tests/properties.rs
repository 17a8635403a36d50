mod common;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use proptest::prelude::*;

use zcv_core::eliminate::{Method, DEFAULT_METHODS};
use zcv_core::exactmath::arith::divisors;
use zcv_core::groups::CharacterTable;
use zcv_core::help::{enumerate_power_chains, profile_of, support_classes};
use zcv_core::pipeline::{Pipeline, PipelineConfig, VerdictReport};
use zcv_core::Rational;

use common::oracles;

fn small_tables() -> &'static Vec<CharacterTable> {
    static TABLES: OnceLock<Vec<CharacterTable>> = OnceLock::new();
    TABLES.get_or_init(|| {
        common::entries_up_to(72).into_iter().map(|e| common::table(&common::index().load_input(e).unwrap())).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn multiplicities_sum_to_degree(pick in any::<usize>(), order in any::<usize>(), chain in any::<usize>(),
                                    eps in proptest::collection::vec(-6i64..=6, 32)) {
        let tables = small_tables();
        let t = &tables[pick % tables.len()];
        let orders: Vec<u64> = divisors(t.exponent()).into_iter().filter(|&n| n > 1).collect();
        let n = orders[order % orders.len()];
        let chains = enumerate_power_chains(t, n);
        prop_assume!(!chains.is_empty());
        let chain = &chains[chain % chains.len()];
        let mut pa = vec![0i64; t.num_classes()];
        for (k, c) in support_classes(t, n).into_iter().enumerate() {
            pa[c] = eps[k % eps.len()];
        }
        let profile = profile_of(t, chain, &pa);
        for (i, row) in profile.iter().enumerate() {
            let total: Rational = row.iter().sum();
            prop_assert_eq!(total, Rational::from_integer(t.degree(i).into()), "{} {}", t.name, t.labels[i]);
        }
    }
}

#[test]
fn every_corpus_table_is_exactly_orthogonal() {
    for e in &common::index().entries {
        let input = common::index().load_input(e).unwrap();
        let t = common::table(&input);
        oracles::orthogonality(&t).unwrap_or_else(|m| panic!("{m}"));
        t.validate().unwrap();
        t.validate_powermaps().unwrap();
    }
}

#[test]
fn quotients_commute_with_power_maps() {
    let mut total = 0;
    for e in &common::index().entries {
        total += oracles::quotient_fusion(&common::index().load_input(e).unwrap()).unwrap_or_else(|m| panic!("{m}"));
    }
    assert!(total > 50, "only {total} quotients checked");
}

#[test]
fn trivial_solutions_survive_everything() {
    let pipeline = common::pipeline();
    for e in common::entries_up_to(72) {
        let input = common::index().load_input(e).unwrap();
        let n = oracles::trivial_solutions(&input, pipeline).unwrap_or_else(|m| panic!("{m}"));
        assert!(n > 0);
    }
}

fn eliminated(r: &VerdictReport) -> BTreeMap<(u64, String), bool> {
    r.orders
        .iter()
        .flat_map(|o| {
            o.solutions
                .iter()
                .map(move |s| ((o.order, format!("{:?}{:?}", s.solution.chain, s.solution.pa)), s.outcome.is_eliminated()))
        })
        .collect()
}

#[test]
fn elimination_does_not_depend_on_method_order() {
    let mut orders: Vec<Vec<Method>> = (0..DEFAULT_METHODS.len())
        .map(|k| {
            let mut m = DEFAULT_METHODS.to_vec();
            m.rotate_left(k);
            m
        })
        .collect();
    orders.push(DEFAULT_METHODS.iter().rev().copied().collect());
    for key in ["48_30", "72_40", "160_234", "200_43", "216_153"] {
        let input = common::input(key);
        let base = common::pipeline().run(&input).unwrap();
        for methods in &orders {
            let p = Pipeline::new(PipelineConfig { methods: methods.clone(), ..PipelineConfig::default() });
            let r = p.run(&input).unwrap();
            assert_eq!(r.status, base.status, "{key} with {methods:?}");
            assert_eq!(eliminated(&r), eliminated(&base), "{key} with {methods:?}");
        }
    }
}
