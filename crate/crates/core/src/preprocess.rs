//! Clarification and reduction, keeping enough data to map results back to
//! the original context.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::bits;
use crate::{Error, FormalContext, Result};

/// Duplicate-row and duplicate-column classes of a clarified context.
///
/// `object_classes[i]` lists the original object indices merged into object
/// `i` of the clarified context, ascending; the first member is the
/// representative that was kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClarificationMap {
    pub object_classes: Vec<Vec<usize>>,
    pub attribute_classes: Vec<Vec<usize>>,
    original_objects: Vec<String>,
    original_attributes: Vec<String>,
}

impl ClarificationMap {
    pub fn original_size(&self) -> (usize, usize) {
        (self.original_objects.len(), self.original_attributes.len())
    }

    pub fn is_identity(&self) -> bool {
        self.object_classes.iter().all(|c| c.len() == 1)
            && self.attribute_classes.iter().all(|c| c.len() == 1)
    }

    /// Rebuilds the original context from the clarified one.
    pub fn expand(&self, clarified: &FormalContext) -> Result<FormalContext> {
        self.check(clarified)?;
        let (n, k) = self.original_size();
        let mut obj_of = vec![0; n];
        for (i, class) in self.object_classes.iter().enumerate() {
            for &g in class {
                obj_of[g] = i;
            }
        }
        let mut att_of = vec![0; k];
        for (j, class) in self.attribute_classes.iter().enumerate() {
            for &m in class {
                att_of[m] = j;
            }
        }
        FormalContext::from_fn(
            self.original_objects.clone(),
            self.original_attributes.clone(),
            |g, m| clarified.incident(obj_of[g], att_of[m]),
        )
    }

    pub(crate) fn check(&self, clarified: &FormalContext) -> Result<()> {
        if clarified.n_objects() != self.object_classes.len()
            || clarified.n_attributes() != self.attribute_classes.len()
        {
            return Err(Error::Mismatch(format!(
                "map has {}x{} classes, context is {}x{}",
                self.object_classes.len(),
                self.attribute_classes.len(),
                clarified.n_objects(),
                clarified.n_attributes()
            )));
        }
        Ok(())
    }
}

fn classes(sets: impl Iterator<Item = FixedBitSet>) -> Vec<Vec<usize>> {
    let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, set) in sets.enumerate() {
        match index.get(&set) {
            Some(&c) => out[c].push(i),
            None => {
                index.insert(set, out.len());
                out.push(vec![i]);
            }
        }
    }
    out
}

/// Merges objects with equal intents and attributes with equal extents,
/// keeping the lowest original index of every class.
pub fn clarify(ctx: &FormalContext) -> (FormalContext, ClarificationMap) {
    let object_classes = classes((0..ctx.n_objects()).map(|g| ctx.intent(g).clone()));
    let attribute_classes = classes((0..ctx.n_attributes()).map(|m| ctx.extent(m).clone()));
    let reps = |cs: &[Vec<usize>]| cs.iter().map(|c| c[0]).collect::<Vec<_>>();
    let clarified = ctx.restrict(&reps(&object_classes), &reps(&attribute_classes));
    let map = ClarificationMap {
        object_classes,
        attribute_classes,
        original_objects: ctx.objects().to_vec(),
        original_attributes: ctx.attributes().to_vec(),
    };
    (clarified, map)
}

pub fn is_clarified(ctx: &FormalContext) -> bool {
    let (c, _) = clarify(ctx);
    c.n_objects() == ctx.n_objects() && c.n_attributes() == ctx.n_attributes()
}

/// For a clarified context: every attribute whose extent is the intersection
/// of the extents strictly containing it, paired with its ω set (all
/// irreducible attributes whose extent contains it).
fn reducible_attributes(ctx: &FormalContext) -> Vec<(usize, Vec<usize>)> {
    let k = ctx.n_attributes();
    let reducible: Vec<bool> = (0..k)
        .map(|m| {
            let ext = ctx.extent(m);
            let mut meet = ctx.all_objects();
            for y in 0..k {
                let other = ctx.extent(y);
                if y != m && ext.is_subset(other) && ext != other {
                    meet.intersect_with(other);
                }
            }
            &meet == ext
        })
        .collect();
    (0..k)
        .filter(|&m| reducible[m])
        .map(|m| {
            let ext = ctx.extent(m);
            let omega: Vec<usize> = (0..k)
                .filter(|&y| !reducible[y] && ext.is_subset(ctx.extent(y)))
                .collect();
            let mut meet = ctx.all_objects();
            for &y in &omega {
                meet.intersect_with(ctx.extent(y));
            }
            assert_eq!(
                &meet, ext,
                "irreducible attributes above a reducible one must meet in its extent"
            );
            (m, omega)
        })
        .collect()
}

/// Removed elements of a reduction and their ω sets, in indices of the
/// (clarified) input context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    /// `(x, ω(x))` for every removed attribute.
    pub removed_attributes: Vec<(usize, Vec<usize>)>,
    /// `(g, ω(g))` for every removed object.
    pub removed_objects: Vec<(usize, Vec<usize>)>,
    /// Input indices of the objects kept, in order.
    pub kept_objects: Vec<usize>,
    /// Input indices of the attributes kept, in order.
    pub kept_attributes: Vec<usize>,
    #[serde(skip)]
    parent: u64,
}

impl ReductionTrace {
    pub fn is_identity(&self) -> bool {
        self.removed_attributes.is_empty() && self.removed_objects.is_empty()
    }

    pub fn belongs_to(&self, ctx: &FormalContext) -> bool {
        self.parent == ctx.fingerprint()
    }

    pub fn omega(&self, attribute: usize) -> Option<&[usize]> {
        self.removed_attributes
            .iter()
            .find(|(x, _)| *x == attribute)
            .map(|(_, w)| w.as_slice())
    }

    /// `ω_H(x)`: the members `y` of `ω(x)` such that every object of `objects`
    /// missing `x` also misses `y`.
    pub fn omega_restricted(
        &self,
        ctx: &FormalContext,
        attribute: usize,
        objects: &[usize],
    ) -> Option<Vec<usize>> {
        let omega = self.omega(attribute)?;
        Some(
            omega
                .iter()
                .copied()
                .filter(|&y| {
                    objects
                        .iter()
                        .all(|&h| ctx.incident(h, attribute) || !ctx.incident(h, y))
                })
                .collect(),
        )
    }
}

/// Removes every reducible attribute and object of a clarified context.
pub fn reduce(ctx: &FormalContext) -> Result<(FormalContext, ReductionTrace)> {
    if !is_clarified(ctx) {
        return Err(Error::NotClarified {
            operation: "reducing",
        });
    }
    let removed_attributes = reducible_attributes(ctx);
    let removed_objects = reducible_attributes(&ctx.transpose());
    let kept = |len: usize, removed: &[(usize, Vec<usize>)]| -> Vec<usize> {
        let gone = bits::from_indices(len, removed.iter().map(|(i, _)| *i));
        (0..len).filter(|i| !gone.contains(*i)).collect()
    };
    let kept_objects = kept(ctx.n_objects(), &removed_objects);
    let kept_attributes = kept(ctx.n_attributes(), &removed_attributes);
    let reduced = ctx.restrict(&kept_objects, &kept_attributes);
    Ok((
        reduced,
        ReductionTrace {
            removed_attributes,
            removed_objects,
            kept_objects,
            kept_attributes,
            parent: ctx.fingerprint(),
        },
    ))
}

/// Clarified and free of reducible objects and attributes.
pub fn is_reduced(ctx: &FormalContext) -> bool {
    is_clarified(ctx)
        && reducible_attributes(ctx).is_empty()
        && reducible_attributes(&ctx.transpose()).is_empty()
}

/// Clarifies, then reduces.
pub fn clarify_and_reduce(
    ctx: &FormalContext,
) -> (FormalContext, ClarificationMap, ReductionTrace) {
    let (clarified, map) = clarify(ctx);
    let (reduced, trace) = reduce(&clarified).expect("clarified by construction");
    (reduced, map, trace)
}
