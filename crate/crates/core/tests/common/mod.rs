#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;

use contrascale::format::parse_cxt;
use contrascale::scales::ContranominalScale;
use contrascale::FormalContext;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> FormalContext {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    parse_cxt(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub fn ctx(rows: &[&str]) -> FormalContext {
    let m: Vec<Vec<bool>> = rows
        .iter()
        .map(|r| r.chars().map(|c| c == 'x').collect())
        .collect();
    FormalContext::from_matrix(&m).unwrap()
}

pub fn random_context(n_objects: usize, n_attributes: usize, density: f64, seed: u64) -> FormalContext {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<bool>> = (0..n_objects)
        .map(|_| (0..n_attributes).map(|_| rng.random_bool(density)).collect())
        .collect();
    FormalContext::from_matrix(&rows).unwrap()
}

/// Seeded corpus: sizes in `1..=max` on both sides, densities 0.1 to 0.9.
pub fn corpus(count: usize, max: usize, seed: u64) -> Vec<FormalContext> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let g = rng.random_range(1..=max);
            let m = rng.random_range(1..=max);
            let density = 0.1 + 0.8 * (i % 9) as f64 / 8.0;
            random_context(g, m, density, rng.random())
        })
        .collect()
}

pub fn rows(ctx: &FormalContext) -> Vec<Vec<bool>> {
    (0..ctx.n_objects())
        .map(|g| (0..ctx.n_attributes()).map(|m| ctx.incident(g, m)).collect())
        .collect()
}

pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// Every scale straight from the definition: for each attribute set, each
/// attribute takes an object missing it and having all the others.
pub fn brute_scales(ctx: &FormalContext) -> Vec<ContranominalScale> {
    let mut out = Vec::new();
    for attrs in subsets(ctx.n_attributes()) {
        if attrs.is_empty() {
            continue;
        }
        let candidates: Vec<Vec<usize>> = attrs
            .iter()
            .map(|&m| {
                (0..ctx.n_objects())
                    .filter(|&g| {
                        attrs.iter().all(|&n| ctx.incident(g, n) == (n != m))
                    })
                    .collect()
            })
            .collect();
        let mut chosen = Vec::new();
        assign(&attrs, &candidates, &mut chosen, &mut out);
    }
    out.sort();
    out
}

fn assign(
    attrs: &[usize],
    candidates: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    out: &mut Vec<ContranominalScale>,
) {
    let i = chosen.len();
    if i == attrs.len() {
        let distinct: HashSet<usize> = chosen.iter().copied().collect();
        assert_eq!(distinct.len(), attrs.len());
        out.push(ContranominalScale::new(
            chosen.iter().copied().zip(attrs.iter().copied()).collect(),
        ));
        return;
    }
    for &g in &candidates[i] {
        chosen.push(g);
        assign(attrs, candidates, chosen, out);
        chosen.pop();
    }
}

/// Attribute closure computed from the definition.
pub fn closure(ctx: &FormalContext, attrs: &BTreeSet<usize>) -> BTreeSet<usize> {
    let extent: Vec<usize> = (0..ctx.n_objects())
        .filter(|&g| attrs.iter().all(|&m| ctx.incident(g, m)))
        .collect();
    (0..ctx.n_attributes())
        .filter(|&m| extent.iter().all(|&g| ctx.incident(g, m)))
        .collect()
}

pub fn brute_intents(ctx: &FormalContext) -> BTreeSet<BTreeSet<usize>> {
    subsets(ctx.n_attributes())
        .map(|s| closure(ctx, &s.into_iter().collect()))
        .collect()
}

/// Pseudo-intents from the recursive definition, by increasing size.
pub fn brute_pseudo_intents(ctx: &FormalContext) -> Vec<BTreeSet<usize>> {
    let mut all: Vec<BTreeSet<usize>> = subsets(ctx.n_attributes())
        .map(|s| s.into_iter().collect())
        .collect();
    all.sort_by_key(|s| s.len());
    let mut pseudo: Vec<BTreeSet<usize>> = Vec::new();
    for p in all {
        if closure(ctx, &p) == p {
            continue;
        }
        let respects = pseudo
            .iter()
            .filter(|q| q.is_subset(&p) && *q != &p)
            .all(|q| closure(ctx, q).is_subset(&p));
        if respects {
            pseudo.push(p);
        }
    }
    pseudo
}

/// Maximal attribute sets carrying a scale, from the brute-force scales.
pub fn brute_cubic_sets(ctx: &FormalContext) -> BTreeSet<Vec<usize>> {
    let carriers: BTreeSet<Vec<usize>> = brute_scales(ctx)
        .iter()
        .map(|s| {
            let mut a: Vec<usize> = s.attributes().collect();
            a.sort_unstable();
            a
        })
        .collect();
    carriers
        .iter()
        .filter(|n| {
            !carriers
                .iter()
                .any(|o| o.len() > n.len() && n.iter().all(|x| o.contains(x)))
        })
        .cloned()
        .collect()
}

/// Copies of random objects and attributes, plus intersections of random
/// pairs, so that clarification and reduction have work to do.
pub fn with_redundancy(base: &FormalContext, seed: u64) -> FormalContext {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = rows(base);
    let n_obj = m.len();
    let n_att = m.first().map_or(0, Vec::len);
    if n_obj == 0 || n_att == 0 {
        return base.clone();
    }
    for _ in 0..rng.random_range(0..=2) {
        let c = rng.random_range(0..n_att);
        for row in m.iter_mut() {
            let v = row[c];
            row.push(v);
        }
    }
    for _ in 0..rng.random_range(0..=2) {
        let (a, b) = (rng.random_range(0..n_att), rng.random_range(0..n_att));
        for row in m.iter_mut() {
            let v = row[a] && row[b];
            row.push(v);
        }
    }
    for _ in 0..rng.random_range(0..=2) {
        let r = m[rng.random_range(0..n_obj)].clone();
        m.push(r);
    }
    for _ in 0..rng.random_range(0..=1) {
        let (a, b) = (rng.random_range(0..n_obj), rng.random_range(0..n_obj));
        let r: Vec<bool> = m[a].iter().zip(&m[b]).map(|(x, y)| *x && *y).collect();
        m.push(r);
    }
    FormalContext::from_matrix(&m).unwrap()
}

pub fn sorted(mut v: Vec<ContranominalScale>) -> Vec<ContranominalScale> {
    v.sort();
    v
}
