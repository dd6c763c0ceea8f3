//! Formal concepts, generated sub-meet-semilattices and implications.

mod implications;

use std::cmp::Ordering;
use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::bits;
use crate::{Error, FormalContext, Result};

pub use implications::{
    canonical_base, close_under, is_valid_implication, restrict_base_on_removal, Implication,
    ImplicationBase,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalConcept {
    pub extent: FixedBitSet,
    pub intent: FixedBitSet,
}

impl FormalConcept {
    /// `c1 <= c2` iff the extent of `c1` is contained in that of `c2`.
    pub fn le(&self, other: &FormalConcept) -> bool {
        self.extent.is_subset(&other.extent)
    }

    pub fn is_concept_of(&self, ctx: &FormalContext) -> bool {
        self.extent.len() == ctx.n_objects()
            && self.intent.len() == ctx.n_attributes()
            && ctx.attribute_derivation(&self.extent) == self.intent
            && ctx.object_derivation(&self.intent) == self.extent
    }

    pub fn to_json(&self, ctx: &FormalContext) -> ConceptJson {
        ConceptJson {
            extent: self.extent.ones().map(|g| ctx.object_label(g).to_string()).collect(),
            intent: self.intent.ones().map(|m| ctx.attribute_label(m).to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConceptJson {
    pub extent: Vec<String>,
    pub intent: Vec<String>,
}

/// Lectic order: `a < b` iff the smallest element of the symmetric
/// difference belongs to `b`.
pub fn lectic_cmp(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    match a.symmetric_difference(b).min() {
        None => Ordering::Equal,
        Some(i) if b.contains(i) => Ordering::Less,
        Some(_) => Ordering::Greater,
    }
}

/// A set of concepts with pairwise distinct extents, sorted lectically by intent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptSet {
    concepts: Vec<FormalConcept>,
}

impl ConceptSet {
    pub fn from_concepts(mut concepts: Vec<FormalConcept>) -> Self {
        concepts.sort_by(|a, b| lectic_cmp(&a.intent, &b.intent));
        concepts.dedup_by(|a, b| a.extent == b.extent);
        ConceptSet { concepts }
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FormalConcept> {
        self.concepts.iter()
    }

    pub fn as_slice(&self) -> &[FormalConcept] {
        &self.concepts
    }

    pub fn contains_extent(&self, extent: &FixedBitSet) -> bool {
        self.concepts.iter().any(|c| &c.extent == extent)
    }

    pub fn to_json(&self, ctx: &FormalContext) -> Vec<ConceptJson> {
        self.concepts.iter().map(|c| c.to_json(ctx)).collect()
    }
}

impl<'a> IntoIterator for &'a ConceptSet {
    type Item = &'a FormalConcept;
    type IntoIter = std::slice::Iter<'a, FormalConcept>;

    fn into_iter(self) -> Self::IntoIter {
        self.concepts.iter()
    }
}

/// Closed sets of `close` over `0..n` in lectic order (NextClosure).
pub(crate) fn for_each_closed_set(
    n: usize,
    close: impl Fn(&FixedBitSet) -> FixedBitSet,
    mut f: impl FnMut(&FixedBitSet),
) {
    let mut current = close(&FixedBitSet::with_capacity(n));
    loop {
        f(&current);
        match next_closed(n, &current, &close) {
            Some(next) => current = next,
            None => return,
        }
    }
}

fn next_closed(
    n: usize,
    current: &FixedBitSet,
    close: &impl Fn(&FixedBitSet) -> FixedBitSet,
) -> Option<FixedBitSet> {
    let mut a = current.clone();
    for i in (0..n).rev() {
        if a.contains(i) {
            a.set(i, false);
            continue;
        }
        let mut candidate = a.clone();
        candidate.insert(i);
        let closed = close(&candidate);
        // a holds only elements below i here
        if closed.difference(&a).all(|j| j >= i) {
            return Some(closed);
        }
    }
    None
}

/// All concepts of `ctx`, intents in lectic order.
pub fn enumerate_concepts(ctx: &FormalContext) -> ConceptSet {
    let mut concepts = Vec::new();
    for_each_closed_set(
        ctx.n_attributes(),
        |b| ctx.attribute_closure(b),
        |intent| {
            concepts.push(FormalConcept {
                extent: ctx.object_derivation(intent),
                intent: intent.clone(),
            })
        },
    );
    ConceptSet { concepts }
}

/// Number of concepts without storing them.
pub fn count_concepts(ctx: &FormalContext) -> usize {
    let mut n = 0;
    for_each_closed_set(ctx.n_attributes(), |b| ctx.attribute_closure(b), |_| n += 1);
    n
}

fn check_concept(ctx: &FormalContext, c: &FormalConcept) -> Result<()> {
    if c.is_concept_of(ctx) {
        Ok(())
    } else {
        Err(Error::InvalidArgument("not a concept of this context".into()))
    }
}

/// Infimum: `(A1 ∩ A2, (A1 ∩ A2)')`.
pub fn meet(ctx: &FormalContext, a: &FormalConcept, b: &FormalConcept) -> Result<FormalConcept> {
    check_concept(ctx, a)?;
    check_concept(ctx, b)?;
    let mut extent = a.extent.clone();
    extent.intersect_with(&b.extent);
    let intent = ctx.attribute_derivation(&extent);
    Ok(FormalConcept { extent, intent })
}

/// `(m', m'')`.
pub fn attribute_concept(ctx: &FormalContext, m: usize) -> Result<FormalConcept> {
    if m >= ctx.n_attributes() {
        return Err(Error::IndexOutOfRange {
            kind: "attribute",
            index: m,
            len: ctx.n_attributes(),
        });
    }
    let extent = ctx.extent(m).clone();
    let intent = ctx.attribute_derivation(&extent);
    Ok(FormalConcept { extent, intent })
}

/// `(G, G')`.
pub fn top_concept(ctx: &FormalContext) -> FormalConcept {
    let extent = ctx.all_objects();
    let intent = ctx.attribute_derivation(&extent);
    FormalConcept { extent, intent }
}

/// The meet-closure of the attribute concepts of `attributes` together with
/// the top concept: the concepts `(X', X'')` for `X ⊆ attributes`.
pub fn generated_sub_meet_semilattice(
    ctx: &FormalContext,
    attributes: &[usize],
) -> Result<ConceptSet> {
    let within = ctx.attribute_set(attributes)?;
    let positions: Vec<usize> = within.ones().collect();
    let n = positions.len();
    let to_full = |local: &FixedBitSet| bits::from_indices(ctx.n_attributes(), local.ones().map(|i| positions[i]));
    let mut concepts = Vec::new();
    for_each_closed_set(
        n,
        |local| {
            let closed = ctx.attribute_closure(&to_full(local));
            bits::from_indices(n, (0..n).filter(|&i| closed.contains(positions[i])))
        },
        |local| {
            let extent = ctx.object_derivation(&to_full(local));
            let intent = ctx.attribute_derivation(&extent);
            concepts.push(FormalConcept { extent, intent });
        },
    );
    Ok(ConceptSet::from_concepts(concepts))
}

fn is_meet_closed(set: &ConceptSet) -> bool {
    let extents: HashSet<&FixedBitSet> = set.iter().map(|c| &c.extent).collect();
    set.iter().all(|a| {
        set.iter().all(|b| {
            let mut e = a.extent.clone();
            e.intersect_with(&b.extent);
            extents.contains(&e)
        })
    })
}

/// True iff `set`, ordered by extent inclusion, is isomorphic to the
/// Boolean lattice of a `k`-element set.
///
/// With `top` the maximum and `c1..ck` the elements directly below it, the
/// map `S ↦ ⋀S` from subsets of `{c1..ck}` is onto and order-reversing;
/// it is an isomorphism exactly when it is injective.
pub fn is_boolean_suborder(set: &ConceptSet, k: usize) -> Result<bool> {
    if !is_meet_closed(set) {
        return Err(Error::NotMeetClosed);
    }
    if k >= usize::BITS as usize - 1 || set.len() != 1usize << k {
        return Ok(false);
    }
    let elems = set.as_slice();
    let Some(top) = elems.iter().find(|c| elems.iter().all(|d| d.le(c))) else {
        return Ok(false);
    };
    let below: Vec<&FormalConcept> = elems.iter().filter(|c| c.extent != top.extent).collect();
    let coatoms: Vec<&FormalConcept> = below
        .iter()
        .copied()
        .filter(|c| !below.iter().any(|d| d.extent != c.extent && c.le(d)))
        .collect();
    if coatoms.len() != k {
        return Ok(false);
    }
    let mut seen = HashSet::with_capacity(set.len());
    for mask in 0u64..(1u64 << k) {
        let mut e = top.extent.clone();
        for (i, c) in coatoms.iter().enumerate() {
            if mask >> i & 1 == 1 {
                e.intersect_with(&c.extent);
            }
        }
        if !set.contains_extent(&e) || !seen.insert(e) {
            return Ok(false);
        }
    }
    Ok(true)
}
