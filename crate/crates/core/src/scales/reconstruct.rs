//! Mapping scales of a clarified or reduced context back to the context it
//! was computed from.
//!
//! Clarification: every merged object or attribute can stand in for its
//! representative, so each scale expands into the product of its classes.
//!
//! Reduction (attribute side; objects are dual): a removed attribute `x`
//! has `x' = ⋂ ω(x)'`. A scale of the original using `x` paired with object
//! `h` corresponds to the reduced scale that replaces `x` by some `y ∈ ω(x)`
//! that `h` misses, i.e. some `y ∈ ω_{h}(x)`. Conversely a reduced pair
//! `(h_i, n_i)` may be replaced by `(h_i, x)` when every other object of the
//! scale has `x`. Several `y` can lead to the same `x`; the substitution is
//! made only from the smallest such `y`, so every scale of the original is
//! produced exactly once.

use super::ContranominalScale;
use crate::preprocess::{ClarificationMap, ReductionTrace};
use crate::{Error, FormalContext, Result};

/// Expands scales of a clarified context into all scales of the original.
pub fn scales_from_clarified(
    scales: &[ContranominalScale],
    map: &ClarificationMap,
) -> Result<Vec<ContranominalScale>> {
    let (n_obj, n_att) = (map.object_classes.len(), map.attribute_classes.len());
    let mut out = Vec::new();
    for scale in scales {
        let mut options: Vec<Vec<(usize, usize)>> = Vec::with_capacity(scale.dimension());
        for &(g, m) in scale.pairs() {
            if g >= n_obj || m >= n_att {
                return Err(Error::Mismatch(format!(
                    "pair ({g},{m}) outside {n_obj}x{n_att} clarified context"
                )));
            }
            let mut opts = Vec::new();
            for &go in &map.object_classes[g] {
                for &mo in &map.attribute_classes[m] {
                    opts.push((go, mo));
                }
            }
            options.push(opts);
        }
        product(&options, |pairs| out.push(ContranominalScale::new(pairs)));
    }
    Ok(out)
}

/// Expands scales of `reduce(ctx)` into all scales of `ctx`.
pub fn scales_from_reduced(
    scales: &[ContranominalScale],
    trace: &ReductionTrace,
    ctx: &FormalContext,
) -> Result<Vec<ContranominalScale>> {
    if !trace.belongs_to(ctx) {
        return Err(Error::Mismatch(
            "trace was computed on a different context".into(),
        ));
    }
    let (n_obj, n_att) = (trace.kept_objects.len(), trace.kept_attributes.len());
    let mut out = Vec::new();
    for scale in scales {
        if scale.pairs().iter().any(|&(g, m)| g >= n_obj || m >= n_att) {
            return Err(Error::Mismatch(format!(
                "scale outside {n_obj}x{n_att} reduced context"
            )));
        }
        let lifted: Vec<(usize, usize)> = scale
            .pairs()
            .iter()
            .map(|&(g, m)| (trace.kept_objects[g], trace.kept_attributes[m]))
            .collect();

        // objects first, within the attribute-reduced context
        let object_options: Vec<Vec<(usize, usize)>> = (0..lifted.len())
            .map(|i| {
                let (g, m) = lifted[i];
                let mut opts = vec![(g, m)];
                for (z, omega) in &trace.removed_objects {
                    let canonical = omega.iter().copied().find(|&h| !ctx.incident(h, m));
                    let others_ok = lifted
                        .iter()
                        .enumerate()
                        .all(|(j, &(_, n))| j == i || ctx.incident(*z, n));
                    if canonical == Some(g) && others_ok {
                        opts.push((*z, m));
                    }
                }
                opts
            })
            .collect();

        product(&object_options, |pairs| {
            let attribute_options: Vec<Vec<(usize, usize)>> = (0..pairs.len())
                .map(|i| {
                    let (h, n) = pairs[i];
                    let mut opts = vec![(h, n)];
                    for (x, omega) in &trace.removed_attributes {
                        let canonical = omega.iter().copied().find(|&y| !ctx.incident(h, y));
                        let others_ok = pairs
                            .iter()
                            .enumerate()
                            .all(|(j, &(g, _))| j == i || ctx.incident(g, *x));
                        if canonical == Some(n) && others_ok {
                            opts.push((h, *x));
                        }
                    }
                    opts
                })
                .collect();
            product(&attribute_options, |pairs| {
                out.push(ContranominalScale::new(pairs))
            });
        });
    }
    Ok(out)
}

/// Calls `f` with one element from every option list, last list fastest.
fn product<T: Copy>(options: &[Vec<T>], mut f: impl FnMut(Vec<T>)) {
    if options.iter().any(Vec::is_empty) {
        return;
    }
    let mut pos = vec![0usize; options.len()];
    loop {
        f(pos.iter().zip(options).map(|(&p, o)| o[p]).collect());
        let mut i = options.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pos[i] += 1;
            if pos[i] < options[i].len() {
                break;
            }
            pos[i] = 0;
        }
    }
}
