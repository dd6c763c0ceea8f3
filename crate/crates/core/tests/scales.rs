mod common;

use std::collections::HashSet;

use common::*;
use contrascale::preprocess::{clarify, reduce};
use contrascale::scales::{
    enumerate, enumerate_bronkerbosch, induced_matchings, max_dimension, scales_from_clarified,
    scales_from_reduced, to_bipartite, ContraFinder, ContranominalScale, EnumerationOptions, ScaleCounts,
};
use contrascale::{Execution, FormalContext};
use proptest::prelude::*;

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[test]
fn contrafinder_matches_both_oracles() {
    for (i, k) in corpus(120, 7, 11).iter().enumerate() {
        let cf = ContraFinder::new(k).scales(Execution::Sequential);
        let unique: HashSet<_> = cf.iter().collect();
        assert_eq!(unique.len(), cf.len(), "duplicates on context {i}");
        for s in &cf {
            s.validate(k).unwrap();
        }
        let brute = brute_scales(k);
        assert_eq!(sorted(cf), brute, "context {i}");
        assert_eq!(sorted(enumerate_bronkerbosch(k)), brute, "clique oracle, context {i}");
    }
}

#[test]
fn contranominal_counting_laws() {
    for k in 1..=5u64 {
        let n = FormalContext::contranominal(k as usize).unwrap();
        let counts = ContraFinder::new(&n).count(Execution::Sequential);
        assert_eq!(counts.total, (1u128 << k) - 1);
        for j in 1..=k {
            assert_eq!(counts.histogram[&(j as usize)], binomial(k, j));
        }
        assert_eq!(counts, ScaleCounts::from_scales(&brute_scales(&n)));
    }
    for k in 6..=12 {
        let n = FormalContext::contranominal(k).unwrap();
        assert_eq!(ContraFinder::new(&n).count(Execution::Sequential).total, (1u128 << k) - 1);
        assert_eq!(max_dimension(&n), k);
    }
}

#[test]
fn count_equals_enumeration() {
    for k in corpus(60, 8, 12) {
        let scales = ContraFinder::new(&k).scales(Execution::Sequential);
        assert_eq!(
            ContraFinder::new(&k).count(Execution::Sequential),
            ScaleCounts::from_scales(&scales)
        );
    }
}

#[test]
fn parallel_equals_sequential() {
    for k in corpus(40, 8, 13) {
        let finder = ContraFinder::new(&k);
        assert_eq!(finder.scales(Execution::Parallel), finder.scales(Execution::Sequential));
        assert_eq!(
            finder.generators(Execution::Parallel),
            finder.generators(Execution::Sequential)
        );
    }
}

#[test]
fn core_pruning_keeps_large_scales() {
    for (i, k) in corpus(50, 10, 14).iter().enumerate() {
        let all = ContraFinder::new(k).scales(Execution::Sequential);
        for d in 2..=4 {
            let mut expected: Vec<_> = all.iter().filter(|s| s.dimension() >= d).cloned().collect();
            expected.sort();
            let pruned = enumerate(
                k,
                EnumerationOptions {
                    min_dimension: Some(d),
                    ..Default::default()
                },
            );
            assert_eq!(pruned, expected, "context {i}, dimension {d}");
        }
    }
}

#[test]
fn reconstruction_from_preprocessed() {
    for (i, base) in corpus(50, 6, 15).iter().enumerate() {
        let k = with_redundancy(base, i as u64);
        let (clarified, map) = clarify(&k);
        let (reduced, trace) = reduce(&clarified).unwrap();
        let on_reduced = ContraFinder::new(&reduced).scales(Execution::Sequential);
        let on_clarified = scales_from_reduced(&on_reduced, &trace, &clarified).unwrap();
        assert_eq!(
            sorted(on_clarified.clone()),
            sorted(ContraFinder::new(&clarified).scales(Execution::Sequential)),
            "reduction step, context {i}"
        );
        let back = scales_from_clarified(&on_clarified, &map).unwrap();
        assert_eq!(sorted(back), brute_scales(&k), "context {i}");
        let via_options = enumerate(
            &k,
            EnumerationOptions {
                preprocess: true,
                ..Default::default()
            },
        );
        assert_eq!(via_options, brute_scales(&k), "options, context {i}");
    }
}

#[test]
fn induced_matchings_are_induced() {
    for k in corpus(30, 6, 16) {
        let graph = to_bipartite(&k);
        let edges: HashSet<(usize, usize)> = graph.edges.iter().copied().collect();
        for matching in induced_matchings(&graph).unwrap() {
            for &(s, t) in &matching {
                assert!(edges.contains(&(s, t)));
                for &(s2, t2) in &matching {
                    if (s, t) != (s2, t2) {
                        assert_ne!(s, s2);
                        assert_ne!(t, t2);
                        assert!(!edges.contains(&(s, t2)));
                    }
                }
            }
        }
    }
}

#[test]
fn deadline_in_the_past_reports_timeout() {
    let n = FormalContext::contranominal(10).unwrap();
    let finder = ContraFinder::new(&n).with_deadline(std::time::Instant::now());
    assert!(finder.try_count(Execution::Sequential).is_none());
}

#[test]
fn fixtures_have_expected_maxima() {
    assert_eq!(max_dimension(&fixture("fig1.cxt")), 4);
    assert_eq!(max_dimension(&fixture("zoo.cxt")), 7);
}

fn arb_context() -> impl Strategy<Value = FormalContext> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(g, m)| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), g)
            .prop_map(|rows| FormalContext::from_matrix(&rows).unwrap())
    })
}

proptest! {
    #[test]
    fn every_scale_validates_and_matches_oracle(k in arb_context()) {
        let scales = ContraFinder::new(&k).scales(Execution::Sequential);
        for s in &scales {
            prop_assert!(s.validate(&k).is_ok());
        }
        prop_assert_eq!(sorted(scales), brute_scales(&k));
    }

    #[test]
    fn transpose_mirrors_scales(k in arb_context()) {
        let t = k.transpose();
        let mirrored: Vec<_> = ContraFinder::new(&k)
            .scales(Execution::Sequential)
            .iter()
            .map(|s| ContranominalScale::new(s.pairs().iter().map(|&(g, m)| (m, g)).collect()))
            .collect();
        prop_assert_eq!(sorted(mirrored), sorted(ContraFinder::new(&t).scales(Execution::Sequential)));
    }
}
