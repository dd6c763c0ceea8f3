mod common;

use std::collections::{BTreeSet, HashSet};

use common::*;
use contrascale::adjust::{
    cubic_sets, cubic_sets_unchecked, delta_adjust, influence, influence_table, AdjustedSelection,
    InfluenceReport,
};
use contrascale::lattice::{enumerate_concepts, lectic_cmp};
use contrascale::preprocess::clarify_and_reduce;
use contrascale::scales::ContraFinder;
use contrascale::{Error, Execution, FormalContext};
use num_rational::BigRational;

/// Attribute, counts for k = 2, 3, 4, and ζ at one decimal.
const FIG1_TABLE: [(&str, [u64; 3], f64); 15] = [
    ("a", [1, 22, 6], 84.7),
    ("b", [1, 29, 0], 79.3),
    ("c", [1, 31, 9], 120.7),
    ("d", [2, 19, 0], 54.7),
    ("e", [0, 16, 3], 54.7),
    ("f", [1, 31, 0], 84.7),
    ("g", [2, 24, 5], 88.0),
    ("h", [1, 18, 5], 70.0),
    ("i", [3, 16, 0], 48.7),
    ("j", [1, 19, 1], 56.7),
    ("k", [1, 33, 0], 90.0),
    ("l", [3, 17, 0], 51.3),
    ("m", [0, 21, 7], 84.0),
    ("n", [2, 23, 3], 77.3),
    ("o", [1, 26, 1], 75.3),
];

#[test]
fn fig1_influence_table() {
    let k = fixture("fig1.cxt");
    let report = influence(&k, Execution::Sequential).unwrap();
    for (row, (label, counts, zeta)) in report.attributes.iter().zip(FIG1_TABLE) {
        assert_eq!(row.label, label);
        assert_eq!([row.count(2), row.count(3), row.count(4)], counts, "{label}");
        assert_eq!(row.count(1), 0);
        assert!((row.zeta_f64() - zeta).abs() <= 0.05, "{label}: {}", row.zeta_f64());
    }
    assert_eq!(report.dimensions(), vec![2, 3, 4]);
}

#[test]
fn fig1_half_adjusted() {
    let k = fixture("fig1.cxt");
    let sel = delta_adjust(&k, 0.5, Execution::Sequential).unwrap();
    let chosen: Vec<&str> = sel.attributes.iter().map(|&m| k.attribute_label(m)).collect();
    assert_eq!(chosen, ["d", "e", "h", "i", "j", "l", "n", "o"]);
    let sub = sel.subcontext(&k).unwrap();
    assert_eq!(enumerate_concepts(&sub).len(), 29);
    let table = influence_table(&k, Some(0.5), Execution::Sequential).unwrap();
    let marked: Vec<&str> = table.rows.iter().filter(|r| r.selected).map(|r| r.label.as_str()).collect();
    assert_eq!(marked, chosen);
}

#[test]
fn cubic_sets_match_brute_force() {
    for k in corpus(80, 7, 31) {
        let got: BTreeSet<Vec<usize>> = cubic_sets_unchecked(&k, Execution::Sequential)
            .into_iter()
            .map(|c| {
                assert!(c.classes.iter().all(|h| !h.is_empty()));
                let mut seen = HashSet::new();
                assert!(c.classes.iter().flatten().all(|g| seen.insert(*g)));
                c.attributes
            })
            .collect();
        assert_eq!(got, brute_cubic_sets(&k));
    }
}

#[test]
fn contranominal_single_cubic_set() {
    let n3 = FormalContext::contranominal(3).unwrap();
    let sets = cubic_sets(&n3, Execution::Sequential).unwrap();
    assert_eq!(sets.len(), 1);
    assert_eq!(sets[0].attributes, vec![0, 1, 2]);
    let full = ctx(&["xxx", "xxx"]);
    let (reduced, _, _) = clarify_and_reduce(&full);
    assert!(cubic_sets(&reduced, Execution::Sequential).unwrap().is_empty());
}

#[test]
fn preprocessing_is_required() {
    let zoo = fixture("zoo.cxt");
    assert!(matches!(
        influence(&zoo, Execution::Sequential),
        Err(Error::NotClarified { .. })
    ));
    let (reduced, _, _) = clarify_and_reduce(&zoo);
    assert!(influence(&reduced, Execution::Sequential).is_ok());
}

fn reduced_corpus(seed: u64) -> Vec<FormalContext> {
    corpus(50, 7, seed)
        .iter()
        .map(|k| clarify_and_reduce(k).0)
        .collect()
}

#[test]
fn zeta_matches_formula() {
    for k in reduced_corpus(32) {
        let report = influence(&k, Execution::Sequential).unwrap();
        for a in &report.attributes {
            let mut z = 0.0;
            for (&dim, &c) in &a.counts {
                z += c as f64 * (1u64 << dim) as f64 / dim as f64;
            }
            assert!((a.zeta_f64() - z).abs() < 1e-9);
            assert_eq!(a.counts.is_empty(), a.zeta == BigRational::from_integer(0.into()));
        }
    }
}

#[test]
fn selection_is_monotone_in_delta() {
    let deltas = [0.0, 0.1, 0.25, 0.3, 0.5, 0.6, 0.75, 0.9, 1.0];
    for k in reduced_corpus(33) {
        let report = influence(&k, Execution::Sequential).unwrap();
        let mut prev: Vec<usize> = Vec::new();
        for d in deltas {
            let sel = AdjustedSelection::from_report(report.clone(), d).unwrap();
            assert!(prev.iter().all(|m| sel.contains(*m)));
            assert_eq!(sel.attributes.len(), (d * k.n_attributes() as f64 - 1e-9).ceil().max(0.0) as usize);
            prev = sel.attributes;
        }
        assert_eq!(prev.len(), k.n_attributes());
    }
}

#[test]
fn scaling_zeta_keeps_the_selection() {
    for k in reduced_corpus(34) {
        let report = influence(&k, Execution::Sequential).unwrap();
        let mut scaled: InfluenceReport = report.clone();
        let factor = BigRational::new(7.into(), 3.into());
        for a in &mut scaled.attributes {
            a.zeta = &a.zeta * &factor;
        }
        for d in [0.3, 0.5, 0.8] {
            assert_eq!(
                AdjustedSelection::from_report(report.clone(), d).unwrap().attributes,
                AdjustedSelection::from_report(scaled.clone(), d).unwrap().attributes
            );
        }
    }
}

#[test]
fn adjusting_adds_no_scales_and_keeps_extents() {
    for k in reduced_corpus(35) {
        let original: HashSet<_> = ContraFinder::new(&k).scales(Execution::Sequential).into_iter().collect();
        let original_extents: HashSet<Vec<usize>> =
            enumerate_concepts(&k).iter().map(|c| c.extent.ones().collect()).collect();
        for d in [0.25, 0.5, 0.75] {
            let sel = delta_adjust(&k, d, Execution::Sequential).unwrap();
            let sub = sel.subcontext(&k).unwrap();
            for s in ContraFinder::new(&sub).scales(Execution::Sequential) {
                let lifted = s.remap(&(0..k.n_objects()).collect::<Vec<_>>(), &sel.attributes);
                assert!(original.contains(&lifted));
            }
            let extents: Vec<Vec<usize>> =
                enumerate_concepts(&sub).iter().map(|c| c.extent.ones().collect()).collect();
            let set: HashSet<&Vec<usize>> = extents.iter().collect();
            for e in &extents {
                assert!(original_extents.contains(e));
                for f in &extents {
                    let meet: Vec<usize> = e.iter().copied().filter(|x| f.contains(x)).collect();
                    assert!(set.contains(&meet));
                }
            }
        }
    }
}

#[test]
fn lectic_order_is_total_on_intents() {
    let k = fixture("fig1.cxt");
    let cs = enumerate_concepts(&k);
    for w in cs.as_slice().windows(2) {
        assert!(lectic_cmp(&w[0].intent, &w[1].intent).is_lt());
    }
}
