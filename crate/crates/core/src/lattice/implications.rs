use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::next_closed;
use crate::{Error, FormalContext, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implication {
    pub premise: FixedBitSet,
    pub conclusion: FixedBitSet,
}

impl Implication {
    pub fn new(premise: FixedBitSet, conclusion: FixedBitSet) -> Result<Self> {
        if premise.len() != conclusion.len() {
            return Err(Error::InvalidArgument(format!(
                "premise over {} attributes, conclusion over {}",
                premise.len(),
                conclusion.len()
            )));
        }
        Ok(Implication {
            premise,
            conclusion,
        })
    }

    /// `X → Y` as `X → Y \ X`.
    pub fn normalized(&self) -> Implication {
        let mut conclusion = self.conclusion.clone();
        conclusion.difference_with(&self.premise);
        Implication {
            premise: self.premise.clone(),
            conclusion,
        }
    }

    /// `a, b -> c, d`.
    pub fn display(&self, ctx: &FormalContext) -> String {
        let side = |s: &FixedBitSet| {
            s.ones()
                .map(|m| ctx.attribute_label(m))
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!("{} -> {}", side(&self.premise), side(&self.conclusion))
            .trim()
            .to_string()
    }

    pub fn to_json(&self, ctx: &FormalContext) -> ImplicationJson {
        let labels = |s: &FixedBitSet| s.ones().map(|m| ctx.attribute_label(m).to_string()).collect();
        ImplicationJson {
            premise: labels(&self.premise),
            conclusion: labels(&self.conclusion),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImplicationJson {
    pub premise: Vec<String>,
    pub conclusion: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImplicationBase {
    pub implications: Vec<Implication>,
}

impl ImplicationBase {
    pub fn len(&self) -> usize {
        self.implications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.implications.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Implication> {
        self.implications.iter()
    }

    /// Closure of `set` under the implications.
    pub fn close(&self, set: &FixedBitSet) -> FixedBitSet {
        close_under(set, &self.implications)
    }

    pub fn to_text(&self, ctx: &FormalContext) -> String {
        let mut out = String::new();
        for imp in &self.implications {
            let _ = writeln!(out, "{}", imp.display(ctx));
        }
        out
    }

    pub fn to_json(&self, ctx: &FormalContext) -> Vec<ImplicationJson> {
        self.implications.iter().map(|i| i.to_json(ctx)).collect()
    }
}

/// `X′ ⊆ Y′`.
pub fn is_valid_implication(ctx: &FormalContext, imp: &Implication) -> bool {
    if imp.premise.len() != ctx.n_attributes() || imp.conclusion.len() != ctx.n_attributes() {
        return false;
    }
    imp.conclusion.is_subset(&ctx.attribute_closure(&imp.premise))
}

/// Smallest superset of `set` that respects every implication.
pub fn close_under(set: &FixedBitSet, implications: &[Implication]) -> FixedBitSet {
    close_with(set, implications, false)
}

fn close_with(set: &FixedBitSet, implications: &[Implication], strict: bool) -> FixedBitSet {
    let mut closed = set.clone();
    let mut used = vec![false; implications.len()];
    loop {
        let mut changed = false;
        for (imp, used) in implications.iter().zip(used.iter_mut()) {
            if *used || !imp.premise.is_subset(&closed) {
                continue;
            }
            if strict && imp.premise == closed {
                continue;
            }
            *used = true;
            if !imp.conclusion.is_subset(&closed) {
                closed.union_with(&imp.conclusion);
                changed = true;
            }
        }
        if !changed {
            return closed;
        }
    }
}

/// The canonical (Duquenne–Guigues) base: `P → P″ \ P` for every
/// pseudo-intent `P`, premises in lectic order.
pub fn canonical_base(ctx: &FormalContext) -> ImplicationBase {
    let n = ctx.n_attributes();
    let mut implications: Vec<Implication> = Vec::new();
    let mut current = FixedBitSet::with_capacity(n);
    loop {
        let closed = ctx.attribute_closure(&current);
        if closed != current {
            let mut conclusion = closed;
            conclusion.difference_with(&current);
            implications.push(Implication {
                premise: current.clone(),
                conclusion,
            });
        }
        match next_closed(n, &current, &|x| close_with(x, &implications, true)) {
            Some(next) => current = next,
            None => break,
        }
    }
    ImplicationBase { implications }
}

/// Adjusts a base of a context to the context without attribute `m`.
///
/// Every conclusion loses `m`. An implication `X → Y` with `m ∈ X` is
/// replaced by `Z ∪ X \ {m} → Y` for every `Z → W` of the base with
/// `m ∈ W`. Implications left with an empty conclusion are dropped. The
/// result is sound and complete for the smaller context but not
/// necessarily minimal.
pub fn restrict_base_on_removal(base: &ImplicationBase, m: usize) -> Vec<Implication> {
    if base.implications.iter().any(|i| m >= i.premise.len()) {
        return base.implications.clone();
    }
    let normalized: Vec<Implication> = base.implications.iter().map(Implication::normalized).collect();
    let producers: Vec<&Implication> = normalized.iter().filter(|i| i.conclusion.contains(m)).collect();
    let mut out: Vec<Implication> = Vec::new();
    let mut push = |premise: FixedBitSet, mut conclusion: FixedBitSet| {
        conclusion.set(m, false);
        conclusion.difference_with(&premise);
        if !conclusion.is_clear() {
            let imp = Implication {
                premise,
                conclusion,
            };
            if !out.contains(&imp) {
                out.push(imp);
            }
        }
    };
    for imp in &normalized {
        if !imp.premise.contains(m) {
            push(imp.premise.clone(), imp.conclusion.clone());
            continue;
        }
        for producer in &producers {
            let mut premise = imp.premise.clone();
            premise.set(m, false);
            premise.union_with(&producer.premise);
            push(premise, imp.conclusion.clone());
        }
    }
    out
}
