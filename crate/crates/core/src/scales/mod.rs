//! Contranominal scales: enumeration, the clique oracle, induced matchings
//! and reconstruction across clarification/reduction.

mod bipartite;
mod conflict;
mod contrafinder;
mod reconstruct;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::preprocess;
use crate::{Error, Execution, FormalContext, Result};

pub use bipartite::{induced_matchings, to_bipartite, BipartiteGraph};
pub use conflict::{enumerate_bronkerbosch, for_each_bronkerbosch, ConflictGraph};
pub use contrafinder::{ContraFinder, Generator, OwnedGenerator};
pub use reconstruct::{scales_from_clarified, scales_from_reduced};

/// A contranominal scale `K[H, N]` given by its pairing: `pairs[i] = (g, m)`
/// with `(g, m) ∉ I` and `(g, n) ∈ I` for every other `n` of the scale.
/// Pairs are sorted by attribute index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContranominalScale {
    pairs: Vec<(usize, usize)>,
}

impl ContranominalScale {
    /// Sorts the pairs by attribute; does not validate against a context.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable_by_key(|&(g, m)| (m, g));
        ContranominalScale { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn dimension(&self) -> usize {
        self.pairs.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().map(|p| p.0)
    }

    pub fn attributes(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().map(|p| p.1)
    }

    /// Checks every invariant of a scale against `ctx`.
    pub fn validate(&self, ctx: &FormalContext) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.pairs.is_empty() {
            return bad("scale of dimension 0".into());
        }
        for (i, &(g, m)) in self.pairs.iter().enumerate() {
            if g >= ctx.n_objects() || m >= ctx.n_attributes() {
                return bad(format!("pair ({g},{m}) out of range"));
            }
            if ctx.incident(g, m) {
                return bad(format!("pair ({g},{m}) is incident"));
            }
            for (j, &(h, n)) in self.pairs.iter().enumerate() {
                if i == j {
                    continue;
                }
                if g == h || m == n {
                    return bad(format!("pairs ({g},{m}) and ({h},{n}) share an element"));
                }
                if !ctx.incident(g, n) {
                    return bad(format!("({g},{n}) must be incident"));
                }
            }
        }
        if self.pairs.windows(2).any(|w| w[0].1 >= w[1].1) {
            return bad("pairs not sorted by attribute".into());
        }
        Ok(())
    }

    pub fn display<'a>(&'a self, ctx: &'a FormalContext) -> ScaleDisplay<'a> {
        ScaleDisplay { scale: self, ctx }
    }

    pub fn to_json(&self, ctx: &FormalContext) -> ScaleJson {
        ScaleJson {
            dim: self.dimension(),
            pairs: self
                .pairs
                .iter()
                .map(|&(g, m)| {
                    (
                        ctx.object_label(g).to_string(),
                        ctx.attribute_label(m).to_string(),
                    )
                })
                .collect(),
        }
    }

    /// Re-indexes through `objects[g]`, `attributes[m]` (e.g. from a subcontext to its parent).
    pub fn remap(&self, objects: &[usize], attributes: &[usize]) -> Self {
        ContranominalScale::new(
            self.pairs
                .iter()
                .map(|&(g, m)| (objects[g], attributes[m]))
                .collect(),
        )
    }
}

/// Line format `dim=k; pairs=(g1,m1),(g2,m2)` with labels.
pub struct ScaleDisplay<'a> {
    scale: &'a ContranominalScale,
    ctx: &'a FormalContext,
}

impl fmt::Display for ScaleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim={}; pairs=", self.scale.dimension())?;
        for (i, &(g, m)) in self.scale.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(
                f,
                "({},{})",
                self.ctx.object_label(g),
                self.ctx.attribute_label(m)
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleJson {
    pub dim: usize,
    pub pairs: Vec<(String, String)>,
}

/// Histogram of scale dimensions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleCounts {
    pub histogram: BTreeMap<usize, u128>,
    pub total: u128,
}

impl ScaleCounts {
    pub fn add(&mut self, dim: usize, count: u128) {
        if count == 0 {
            return;
        }
        *self.histogram.entry(dim).or_insert(0) += count;
        self.total += count;
    }

    pub fn merge(&mut self, other: &ScaleCounts) {
        for (&d, &c) in &other.histogram {
            self.add(d, c);
        }
    }

    pub fn max_dimension(&self) -> usize {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    pub fn from_scales<'a>(scales: impl IntoIterator<Item = &'a ContranominalScale>) -> Self {
        let mut out = ScaleCounts::default();
        for s in scales {
            out.add(s.dimension(), 1);
        }
        out
    }
}

/// Opt-in speedups for [`enumerate`]; none are applied by default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Enumerate on the clarified and reduced context, then map the scales back.
    pub preprocess: bool,
    /// Only report scales of at least this dimension, searching inside the
    /// `(k-1, k-1)`-core. Smaller scales are dropped.
    pub min_dimension: Option<usize>,
    pub execution: Execution,
}

/// Every contranominal scale of `ctx` with optional speedups, in canonical
/// (sorted) order when speedups are used and in search order otherwise.
pub fn enumerate(ctx: &FormalContext, opts: EnumerationOptions) -> Vec<ContranominalScale> {
    let min_dim = opts.min_dimension.unwrap_or(1).max(1);
    let core_sel = (min_dim >= 2).then(|| ctx.pq_core(min_dim - 1, min_dim - 1));
    let core_ctx;
    let base: &FormalContext = match &core_sel {
        Some(sel) => {
            core_ctx = ctx.apply_selection(sel).expect("selection taken from ctx");
            &core_ctx
        }
        None => ctx,
    };

    let mut scales = if opts.preprocess {
        let (clarified, map) = preprocess::clarify(base);
        let (reduced, trace) = preprocess::reduce(&clarified).expect("clarified by construction");
        let reduced_scales = ContraFinder::new(&reduced).scales(opts.execution);
        let on_clarified = scales_from_reduced(&reduced_scales, &trace, &clarified)
            .expect("trace belongs to the clarified context");
        let mut out =
            scales_from_clarified(&on_clarified, &map).expect("map belongs to the context");
        out.sort_unstable();
        out
    } else {
        ContraFinder::new(base).scales(opts.execution)
    };

    if let Some(sel) = &core_sel {
        scales = scales
            .into_iter()
            .filter(|s| s.dimension() >= min_dim)
            .map(|s| s.remap(sel.objects(), sel.attributes()))
            .collect();
        scales.sort_unstable();
    }
    scales
}

/// Shortcut for plain ContraFinder enumeration in search order.
pub fn enumerate_contrafinder(ctx: &FormalContext) -> Vec<ContranominalScale> {
    ContraFinder::new(ctx).scales(Execution::Sequential)
}

/// Largest scale dimension, 0 when every pair is incident.
pub fn max_dimension(ctx: &FormalContext) -> usize {
    let mut best = 0;
    let _ = ContraFinder::new(ctx).for_each_generator(|gen| {
        best = best.max(gen.dimension());
        std::ops::ControlFlow::Continue(())
    });
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_catches_violations() {
        let n2 = FormalContext::contranominal(2).unwrap();
        assert!(ContranominalScale::new(vec![(0, 0), (1, 1)]).validate(&n2).is_ok());
        assert!(ContranominalScale::new(vec![(0, 1)]).validate(&n2).is_err());
        assert!(ContranominalScale::new(vec![(0, 0), (0, 1)]).validate(&n2).is_err());
        assert!(ContranominalScale::new(vec![]).validate(&n2).is_err());
    }

    #[test]
    fn display_uses_labels() {
        let n2 = FormalContext::contranominal(2).unwrap();
        let s = ContranominalScale::new(vec![(1, 1), (0, 0)]);
        assert_eq!(s.display(&n2).to_string(), "dim=2; pairs=(1,1),(2,2)");
    }

    #[test]
    fn max_dimension_cases() {
        for k in 1..6 {
            assert_eq!(max_dimension(&FormalContext::contranominal(k).unwrap()), k);
        }
        let full = FormalContext::from_matrix(&vec![vec![true; 3]; 3]).unwrap();
        assert_eq!(max_dimension(&full), 0);
    }

    #[test]
    fn counts_histogram() {
        let mut c = ScaleCounts::default();
        c.add(2, 3);
        c.add(1, 1);
        c.add(2, 1);
        assert_eq!(c.total, 5);
        assert_eq!(c.max_dimension(), 2);
        assert_eq!(c.histogram[&2], 4);
    }
}
